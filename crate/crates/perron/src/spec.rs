//! JSON convergence specs: `{representation, system, target, family, samples?}`.

use std::sync::Arc;

use perron_core::{
    alternating::{is_member_is, ISResult},
    convergence::{Deviation, ExplicitElement, IndexMap, LimitTarget, SequenceFamily},
    positive::stream_of,
    DigitRule, DigitStream, Error, Generator, PrefixBase, Rational, Representation, Tail,
};
use serde::Deserialize;

use crate::{
    descriptor::{naturals, resolve_system, Natural, SystemDescriptor},
    error::CliError,
    number::parse_rational,
};

/// Digits inspected when turning a rational into a digit stream.
pub const POINT_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Rep {
    P,
    Pminus,
}

impl Rep {
    pub fn kind(self) -> Representation {
        match self {
            Rep::P => Representation::Positive,
            Rep::Pminus => Representation::Alternating,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    pub representation: Rep,
    pub system: SystemSpec,
    pub target: TargetSpec,
    pub family: FamilySpec,
    #[serde(default)]
    pub samples: Option<Vec<u64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Name(String),
    Inline(SystemDescriptor),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TargetSpec {
    Zero {},
    Interior { point: PointSpec },
    Supremum { base: Vec<Natural> },
    Infimum { base: Vec<Natural> },
    Regular { point: PointSpec },
    OddSupremum { base: Vec<Natural> },
    EvenInfimum { base: Vec<Natural> },
    /// An endpoint approached from both sides; needs an explicit family.
    TwoSided { value: String },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Value(ValuePoint),
    Digits(StreamSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuePoint {
    pub value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamSpec {
    #[serde(default)]
    pub prefix: Vec<Natural>,
    #[serde(default)]
    pub tail: TailSpec,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum TailSpec {
    #[default]
    Minimal,
    Unknown,
    Constant(Natural),
    Periodic(Vec<Natural>),
    MinimalOffset(Natural),
    Finite(Vec<Natural>),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapSpec {
    Constant(u64),
    Affine { slope: u64, offset: i64 },
    Cyclic { offset: u64, period: u64 },
    Interleave(Box<MapSpec>, Box<MapSpec>),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum DeviationSpec {
    Increase(u64),
    Decrease(u64),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    FirstDigit {
        g: MapSpec,
        #[serde(default)]
        tail: TailSpec,
    },
    PrefixThenDigit {
        base: Vec<Natural>,
        g: MapSpec,
        #[serde(default)]
        tail: TailSpec,
        #[serde(default)]
        early: Vec<StreamSpec>,
    },
    Disagree {
        k: MapSpec,
        deviation: DeviationSpec,
        #[serde(default)]
        tail: TailSpec,
    },
    Interleave {
        odd: Box<FamilySpec>,
        even: Box<FamilySpec>,
    },
    Explicit { elements: Vec<ElementSpec> },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Value(String),
    Digits(StreamSpec),
}

/// A spec with every literal resolved against its system.
pub struct Resolved {
    pub kind: Representation,
    pub system: Arc<DigitRule>,
    pub target: ResolvedTarget,
    pub family: SequenceFamily,
    pub samples: Option<Vec<u64>>,
}

pub enum ResolvedTarget {
    OneSided(LimitTarget),
    TwoSided(Rational),
}

impl ConvergenceSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid convergence spec: {e}")))
    }

    pub fn resolve(&self, as_exact: bool) -> Result<Resolved, CliError> {
        let kind = self.representation.kind();
        let system = match &self.system {
            SystemSpec::Name(name) => resolve_system(name)?,
            SystemSpec::Inline(d) => Arc::new(d.to_rule()?),
        };
        let cx = Cx { system: &system, kind, as_exact };
        let base = |b: &[Natural]| -> Result<PrefixBase, CliError> { Ok(PrefixBase::new(system.clone(), naturals(b))?) };
        let target = match &self.target {
            TargetSpec::Zero {} => ResolvedTarget::OneSided(LimitTarget::Zero),
            TargetSpec::Interior { point } => ResolvedTarget::OneSided(LimitTarget::InteriorPoint(cx.point(point)?)),
            TargetSpec::Regular { point } => ResolvedTarget::OneSided(LimitTarget::RegularPoint(cx.point(point)?)),
            TargetSpec::Supremum { base: b } => ResolvedTarget::OneSided(LimitTarget::SupremumOf(base(b)?)),
            TargetSpec::Infimum { base: b } => ResolvedTarget::OneSided(LimitTarget::InfimumOf(base(b)?)),
            TargetSpec::OddSupremum { base: b } => ResolvedTarget::OneSided(LimitTarget::OddSupOf(base(b)?)),
            TargetSpec::EvenInfimum { base: b } => ResolvedTarget::OneSided(LimitTarget::EvenInfOf(base(b)?)),
            TargetSpec::TwoSided { value } => ResolvedTarget::TwoSided(parse_rational(value, as_exact)?),
        };
        Ok(Resolved {
            kind,
            system: system.clone(),
            target,
            family: cx.family(&self.family)?,
            samples: self.samples.clone(),
        })
    }
}

struct Cx<'a> {
    system: &'a Arc<DigitRule>,
    kind: Representation,
    as_exact: bool,
}

impl Cx<'_> {
    fn stream(&self, s: &StreamSpec) -> Result<DigitStream, CliError> {
        let prefix = PrefixBase::new(self.system.clone(), naturals(&s.prefix))?;
        Ok(DigitStream::new(prefix, tail(&s.tail)))
    }

    fn point(&self, p: &PointSpec) -> Result<DigitStream, CliError> {
        match p {
            PointSpec::Digits(s) => self.stream(s),
            PointSpec::Value(v) => {
                let x = parse_rational(&v.value, self.as_exact)?;
                point_stream(self.system, self.kind, &x)
            }
        }
    }

    fn family(&self, f: &FamilySpec) -> Result<SequenceFamily, CliError> {
        Ok(match f {
            FamilySpec::FirstDigit { g, tail: t } => SequenceFamily::FirstDigit { g: map(g), tail: tail(t) },
            FamilySpec::PrefixThenDigit { base, g, tail: t, early } => SequenceFamily::FixedPrefixThenDigit {
                base: PrefixBase::new(self.system.clone(), naturals(base))?,
                g: map(g),
                tail: tail(t),
                early: early.iter().map(|s| self.stream(s)).collect::<Result<_, _>>()?,
            },
            FamilySpec::Disagree { k, deviation, tail: t } => SequenceFamily::DisagreeAt {
                k: map(k),
                deviation: match deviation {
                    DeviationSpec::Increase(j) => Deviation::Increase(*j),
                    DeviationSpec::Decrease(j) => Deviation::Decrease(*j),
                },
                tail: tail(t),
            },
            FamilySpec::Interleave { odd, even } => {
                SequenceFamily::Interleave(Box::new(self.family(odd)?), Box::new(self.family(even)?))
            }
            FamilySpec::Explicit { elements } => SequenceFamily::Explicit(
                elements
                    .iter()
                    .map(|e| match e {
                        ElementSpec::Value(v) => Ok(ExplicitElement::Value(parse_rational(v, self.as_exact)?)),
                        ElementSpec::Digits(s) => Ok(ExplicitElement::Digits(self.stream(s)?)),
                    })
                    .collect::<Result<_, CliError>>()?,
            ),
        })
    }
}

/// The digit stream of a rational: exact when the expansion ends in a minimal
/// tail or cycles, otherwise `POINT_DEPTH` digits with an unknown tail.
pub fn point_stream(system: &Arc<DigitRule>, kind: Representation, x: &Rational) -> Result<DigitStream, CliError> {
    Ok(match kind {
        Representation::Positive => stream_of(system.clone(), x, POINT_DEPTH)?,
        Representation::Alternating => match is_member_is(system.clone(), x, POINT_DEPTH)? {
            ISResult::Member { .. } => return Err(Error::ExceptionalPoint { value: x.clone() }.into()),
            ISResult::NotMember(cycle) => cycle.stream(),
            ISResult::NotMemberUpToDepth { digits, .. } => DigitStream::new(digits, Tail::Unknown),
        },
    })
}

fn tail(t: &TailSpec) -> Tail {
    match t {
        TailSpec::Minimal => Tail::Minimal,
        TailSpec::Unknown => Tail::Unknown,
        TailSpec::Constant(d) => Tail::Generator(Generator::Constant(d.0.clone())),
        TailSpec::Periodic(v) => Tail::Generator(Generator::Periodic(naturals(v))),
        TailSpec::MinimalOffset(j) => Tail::Generator(Generator::MinimalOffset(j.0.clone())),
        TailSpec::Finite(v) => Tail::Generator(Generator::Finite(naturals(v))),
    }
}

fn map(m: &MapSpec) -> IndexMap {
    match m {
        MapSpec::Constant(c) => IndexMap::Constant(*c),
        MapSpec::Affine { slope, offset } => IndexMap::Affine {
            slope: *slope,
            offset: *offset,
        },
        MapSpec::Cyclic { offset, period } => IndexMap::Cyclic {
            offset: *offset,
            period: *period,
        },
        MapSpec::Interleave(a, b) => IndexMap::Interleave(Box::new(map(a)), Box::new(map(b))),
    }
}
