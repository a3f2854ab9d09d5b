//! Digit rules and validated digit prefixes.
//!
//! A [`DigitRule`] maps a nonempty digit prefix `c₁…cₙ` to `rₙ = φₙ(c₁, …, cₙ)`;
//! the empty prefix maps to the constant `r₀ = φ₀`. Every digit must satisfy
//! `cₙ ≥ rₙ₋₁ + 1`, for both the positive and the alternating expansion.

use alloc::{
    collections::BTreeMap,
    format,
    string::{String, ToString},
    sync::Arc,
    vec::Vec,
};
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["luroth", "engel", "sylvester", "pierce", "alt-luroth"];

/// How `rₙ` is obtained from the last digit `cₙ` when no table entry applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Template {
    /// `rₙ = r` for every prefix.
    Constant(BigUint),
    /// `rₙ = cₙ`.
    LastDigit,
    /// `rₙ = cₙ − 1`.
    LastDigitMinusOne,
    /// `rₙ = cₙ(cₙ − 1)`.
    LastDigitPronic,
}

impl Template {
    pub fn apply(&self, last: &BigUint) -> BigUint {
        match self {
            Template::Constant(r) => r.clone(),
            Template::LastDigit => last.clone(),
            Template::LastDigitMinusOne => last - 1u32,
            Template::LastDigitPronic => last * (last - 1u32),
        }
    }

    /// Parses `constant:N`, `constant` (N = 1), `identity`, `minus-one` or `pronic`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "constant" => Ok(Template::Constant(BigUint::one())),
            "identity" => Ok(Template::LastDigit),
            "minus-one" => Ok(Template::LastDigitMinusOne),
            "pronic" => Ok(Template::LastDigitPronic),
            other => match other.strip_prefix("constant:") {
                Some(value) => {
                    let r: BigUint = value
                        .parse()
                        .map_err(|_| Error::InvalidRule(format!("bad constant `{value}`")))?;
                    if r.is_zero() {
                        return Err(Error::InvalidRule("constant must be positive".to_string()));
                    }
                    Ok(Template::Constant(r))
                }
                None => Err(Error::InvalidRule(format!("unknown template `{other}`"))),
            },
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Template::Constant(r) => write!(f, "constant:{r}"),
            Template::LastDigit => f.write_str("identity"),
            Template::LastDigitMinusOne => f.write_str("minus-one"),
            Template::LastDigitPronic => f.write_str("pronic"),
        }
    }
}

/// A concrete sequence of functions `φₙ`.
///
/// Prefix-specific overrides live in a finite table; every other prefix falls
/// back to the template applied to its last digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitRule {
    name: String,
    phi0: BigUint,
    template: Template,
    table: BTreeMap<Vec<BigUint>, BigUint>,
}

impl DigitRule {
    pub fn new(name: impl Into<String>, phi0: impl Into<BigUint>, template: Template) -> Result<Self> {
        let phi0 = phi0.into();
        if phi0.is_zero() {
            return Err(Error::InvalidRule("phi0 must be at least 1".to_string()));
        }
        if let Template::Constant(r) = &template {
            if r.is_zero() {
                return Err(Error::InvalidRule("constant must be positive".to_string()));
            }
        }
        Ok(DigitRule {
            name: name.into(),
            phi0,
            template,
            table: BTreeMap::new(),
        })
    }

    /// Overrides `φ` on one nonempty prefix.
    pub fn with_entry(mut self, prefix: Vec<BigUint>, r: impl Into<BigUint>) -> Result<Self> {
        let r = r.into();
        if prefix.is_empty() {
            return Err(Error::InvalidRule(
                "table prefixes must be nonempty; use phi0 for the empty prefix".to_string(),
            ));
        }
        if r.is_zero() {
            return Err(Error::InvalidRule("table values must be positive".to_string()));
        }
        self.table.insert(prefix, r);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn phi0(&self) -> &BigUint {
        &self.phi0
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn table(&self) -> impl Iterator<Item = (&[BigUint], &BigUint)> {
        self.table.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// `φₙ(c₁, …, cₙ)`; the empty prefix yields `φ₀`.
    pub fn r(&self, prefix: &[BigUint]) -> BigUint {
        match prefix.last() {
            None => self.phi0.clone(),
            Some(last) => match self.table.get(prefix) {
                Some(r) => r.clone(),
                None => self.template.apply(last),
            },
        }
    }

    /// Rank from which `rₙ` depends on the last digit only.
    pub fn memoryless_from(&self) -> usize {
        self.table.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn into_shared(self) -> Arc<DigitRule> {
        Arc::new(self)
    }
}

/// The classical systems with `φ₀ = 1`.
pub fn builtin(name: &str) -> Result<DigitRule> {
    let template = match name {
        "luroth" | "alt-luroth" => Template::Constant(BigUint::one()),
        "engel" => Template::LastDigitMinusOne,
        "sylvester" => Template::LastDigitPronic,
        "pierce" => Template::LastDigit,
        other => return Err(Error::UnknownSystem(other.to_string())),
    };
    DigitRule::new(name, 1u32, template)
}

/// Shorthand for `Arc::new(builtin(name)?)`.
pub fn shared_builtin(name: &str) -> Result<Arc<DigitRule>> {
    builtin(name).map(Arc::new)
}

/// A validated digit string `c₁…c_k` together with `r₀…r_k`.
#[derive(Clone, Debug)]
pub struct PrefixBase {
    system: Arc<DigitRule>,
    digits: Vec<BigUint>,
    // r[i] = φᵢ(c₁..cᵢ); always one longer than `digits`.
    r: Vec<BigUint>,
}

impl PartialEq for PrefixBase {
    fn eq(&self, other: &Self) -> bool {
        self.digits == other.digits
            && (Arc::ptr_eq(&self.system, &other.system) || self.system == other.system)
    }
}

impl Eq for PrefixBase {}

impl PrefixBase {
    pub fn empty(system: Arc<DigitRule>) -> Self {
        let r0 = system.phi0().clone();
        PrefixBase {
            system,
            digits: Vec::new(),
            r: alloc::vec![r0],
        }
    }

    pub fn new<I, D>(system: Arc<DigitRule>, digits: I) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: Into<BigUint>,
    {
        let mut base = PrefixBase::empty(system);
        for d in digits {
            base.push(d.into())?;
        }
        Ok(base)
    }

    /// Appends a digit, rejecting it when it is below `r_k + 1`.
    pub fn push(&mut self, digit: BigUint) -> Result<()> {
        let minimum = self.min_next_digit();
        if digit < minimum {
            return Err(Error::InvalidDigit {
                index: self.digits.len() + 1,
                digit,
                minimum,
            });
        }
        self.digits.push(digit);
        let r = self.system.r(&self.digits);
        self.r.push(r);
        Ok(())
    }

    pub fn with_digit(&self, digit: impl Into<BigUint>) -> Result<Self> {
        let mut next = self.clone();
        next.push(digit.into())?;
        Ok(next)
    }

    /// Appends `r_k + 1`.
    pub fn push_minimal(&mut self) {
        let d = self.min_next_digit();
        self.push(d).expect("minimal digit is admissible");
    }

    pub fn truncated(&self, rank: usize) -> Self {
        let rank = rank.min(self.rank());
        PrefixBase {
            system: self.system.clone(),
            digits: self.digits[..rank].to_vec(),
            r: self.r[..=rank].to_vec(),
        }
    }

    /// Replaces the last digit.
    pub fn with_last_digit(&self, digit: impl Into<BigUint>) -> Result<Self> {
        let mut base = self.truncated(self.rank().saturating_sub(1));
        base.push(digit.into())?;
        Ok(base)
    }

    pub fn system(&self) -> &Arc<DigitRule> {
        &self.system
    }

    pub fn rank(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    pub fn last(&self) -> Option<&BigUint> {
        self.digits.last()
    }

    /// `rᵢ` for `0 ≤ i ≤ k`.
    pub fn r(&self, i: usize) -> &BigUint {
        &self.r[i]
    }

    pub fn r_values(&self) -> &[BigUint] {
        &self.r
    }

    /// `r_k` for the full prefix (`φ₀` when empty).
    pub fn r_value(&self) -> &BigUint {
        self.r.last().expect("r is never empty")
    }

    pub fn min_next_digit(&self) -> BigUint {
        self.r_value() + 1u32
    }

    /// Whether the digit at 1-based position `i` equals `rᵢ₋₁ + 1`.
    pub fn is_minimal_at(&self, i: usize) -> bool {
        self.digits[i - 1] == &self.r[i - 1] + 1u32
    }
}

impl fmt::Display for PrefixBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// `r_k` of a validated base.
pub fn r_value(base: &PrefixBase) -> BigUint {
    base.r_value().clone()
}

/// Smallest admissible digit after `base`.
pub fn min_next_digit(base: &PrefixBase) -> BigUint {
    base.min_next_digit()
}

pub fn validate_prefix<I, D>(digits: I, system: Arc<DigitRule>) -> Result<PrefixBase>
where
    I: IntoIterator<Item = D>,
    D: Into<BigUint>,
{
    PrefixBase::new(system, digits)
}
