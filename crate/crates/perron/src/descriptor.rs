//! JSON system descriptors: `{"name", "phi0", "template", "table": [{"prefix", "r"}]}`.

use std::{path::Path, sync::Arc};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use perron_core::{system::BUILTIN_NAMES, DigitRule, Template};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A nonnegative integer written either as a JSON number or as a decimal
/// string, for values beyond `u64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Natural(pub BigUint);

impl Serialize for Natural {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Natural(v.into())),
            Raw::Text(t) => t
                .parse()
                .map(Natural)
                .map_err(|_| serde::de::Error::custom(format!("`{t}` is not a nonnegative integer"))),
        }
    }
}

pub fn naturals(list: &[Natural]) -> Vec<BigUint> {
    list.iter().map(|n| n.0.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub prefix: Vec<Natural>,
    pub r: Natural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescriptor {
    pub name: String,
    pub phi0: Natural,
    /// `constant`, `constant:N`, `identity`, `minus-one` or `pronic`.
    pub template: String,
    #[serde(default)]
    pub table: Vec<TableEntry>,
}

impl SystemDescriptor {
    pub fn to_rule(&self) -> Result<DigitRule, CliError> {
        let template = Template::parse(&self.template)?;
        let mut rule = DigitRule::new(self.name.clone(), self.phi0.0.clone(), template)?;
        for entry in &self.table {
            rule = rule.with_entry(naturals(&entry.prefix), entry.r.0.clone())?;
        }
        Ok(rule)
    }

    pub fn of(rule: &DigitRule) -> Self {
        SystemDescriptor {
            name: rule.name().to_string(),
            phi0: Natural(rule.phi0().clone()),
            template: rule.template().to_string(),
            table: rule
                .table()
                .map(|(prefix, r)| TableEntry {
                    prefix: prefix.iter().cloned().map(Natural).collect(),
                    r: Natural(r.clone()),
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid system descriptor: {e}")))
    }
}

/// A builtin name, or a path to a descriptor file.
pub fn resolve_system(spec: &str) -> Result<Arc<DigitRule>, CliError> {
    if BUILTIN_NAMES.contains(&spec) {
        return Ok(perron_core::system::shared_builtin(spec)?);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {spec}: {e}")))?;
        return Ok(Arc::new(SystemDescriptor::parse(&text)?.to_rule()?));
    }
    Err(CliError::usage(format!(
        "unknown system `{spec}`: expected one of {} or a descriptor file",
        BUILTIN_NAMES.join(", ")
    )))
}
