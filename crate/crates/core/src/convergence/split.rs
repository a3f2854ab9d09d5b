//! Two-sided approach to an endpoint, reduced to the one-sided criteria.

use alloc::{collections::BTreeSet, sync::Arc, vec::Vec};
use core::cmp::Ordering;

use num_traits::{One, Signed};

use super::{decide, ConvergenceVerdict, ExplicitElement, LimitTarget, SequenceFamily, Verdict};
use crate::{
    alternating::{even_infimum_partner, is_member_is, ISResult},
    positive::PositiveExpansion,
    DigitRule, Error, PrefixBase, Rational, Representation, Result,
};

/// Remainder-map steps tried before giving up on classifying `x₀`.
const SPLIT_DEPTH: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSide {
    pub target: LimitTarget,
    /// `(original index, value)`, indices 1-based.
    pub elements: Vec<(u64, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedSplit {
    pub left: SplitSide,
    /// `None` when `x₀ = 1`.
    pub right: Option<SplitSide>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedVerdict {
    pub left: Option<ConvergenceVerdict>,
    pub right: Option<ConvergenceVerdict>,
    pub overall: Verdict,
}

enum Endpoint {
    /// `x₀ = sup Δ(base)`; `right` is the cylinder whose infimum is `x₀`.
    Split { left: LimitTarget, right: Option<LimitTarget> },
    Interior,
}

fn positive_endpoint(system: &Arc<DigitRule>, x0: &Rational) -> Result<Endpoint> {
    let memoryless = system.memoryless_from();
    let mut exp = PositiveExpansion::new(system.clone(), x0.clone())?;
    let mut seen = BTreeSet::new();
    loop {
        if exp.remainder().is_one() {
            let base = exp.base().clone();
            let last = (1..=base.rank()).rev().find(|&i| !base.is_minimal_at(i));
            return Ok(match last {
                None => Endpoint::Split {
                    left: LimitTarget::SupremumOf(PrefixBase::empty(system.clone())),
                    right: None,
                },
                Some(j) => {
                    let witness = base.truncated(j);
                    let right = crate::positive::supremum_as_infimum(&witness).expect("non-minimal digit");
                    Endpoint::Split {
                        left: LimitTarget::SupremumOf(witness),
                        right: Some(LimitTarget::InfimumOf(right)),
                    }
                }
            });
        }
        let rank = exp.base().rank();
        if rank >= memoryless {
            // A repeated state without reaching 1 means an infinite expansion
            // that is not eventually minimal.
            let t = exp.remainder();
            if !seen.insert((t.numer().clone(), t.denom().clone(), exp.base().r_value().clone())) {
                return Ok(Endpoint::Interior);
            }
        }
        if rank >= SPLIT_DEPTH {
            return Err(Error::Undetermined { depth: rank });
        }
        exp.next_digit();
    }
}

fn alternating_endpoint(system: &Arc<DigitRule>, x0: &Rational) -> Result<Endpoint> {
    match is_member_is(system.clone(), x0, SPLIT_DEPTH)? {
        ISResult::Member { witness } => {
            let right = even_infimum_partner(&witness).map(LimitTarget::EvenInfOf);
            Ok(Endpoint::Split {
                left: LimitTarget::OddSupOf(witness),
                right,
            })
        }
        ISResult::NotMember(_) => Ok(Endpoint::Interior),
        ISResult::NotMemberUpToDepth { depth, .. } => Err(Error::Undetermined { depth }),
    }
}

/// Partitions an explicit list around an endpoint `x₀` and attaches the
/// one-sided target for each side.
pub fn two_sided_split(
    kind: Representation,
    system: &Arc<DigitRule>,
    x0: &Rational,
    values: &[Rational],
) -> Result<TwoSidedSplit> {
    let endpoint = match kind {
        Representation::Positive => positive_endpoint(system, x0)?,
        Representation::Alternating => alternating_endpoint(system, x0)?,
    };
    let Endpoint::Split { left, right } = endpoint else {
        return Err(Error::SplitUnnecessary(x0.clone()));
    };
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let index = i as u64 + 1;
        if !v.is_positive() || v > &Rational::one() {
            return Err(Error::OutOfDomain {
                value: v.clone(),
                domain: "(0, 1]",
            });
        }
        match v.cmp(x0) {
            Ordering::Less => lower.push((index, v.clone())),
            Ordering::Greater => upper.push((index, v.clone())),
            Ordering::Equal => return Err(Error::ElementEqualsTarget { index }),
        }
    }
    Ok(TwoSidedSplit {
        left: SplitSide {
            target: left,
            elements: lower,
        },
        right: right.map(|target| SplitSide {
            target,
            elements: upper,
        }),
    })
}

/// Splits the list and runs the one-sided criterion on each nonempty side.
pub fn decide_two_sided(
    kind: Representation,
    system: &Arc<DigitRule>,
    x0: &Rational,
    values: &[Rational],
) -> Result<TwoSidedVerdict> {
    let split = two_sided_split(kind, system, x0, values)?;
    let run = |side: &SplitSide| -> Result<Option<ConvergenceVerdict>> {
        if side.elements.is_empty() {
            return Ok(None);
        }
        let family = SequenceFamily::Explicit(
            side.elements
                .iter()
                .map(|(_, v)| ExplicitElement::Value(v.clone()))
                .collect(),
        );
        decide(kind, system, &side.target, &family, &[]).map(Some)
    };
    let left = run(&split.left)?;
    let right = match &split.right {
        Some(side) => run(side)?,
        None => None,
    };
    let verdicts = [&left, &right];
    let overall = if let Some(d) = verdicts
        .iter()
        .filter_map(|v| v.as_ref())
        .find(|v| matches!(v.verdict, Verdict::Diverges(_)))
    {
        d.verdict.clone()
    } else if let Some(u) = verdicts
        .iter()
        .filter_map(|v| v.as_ref())
        .find(|v| matches!(v.verdict, Verdict::Undetermined(_)))
    {
        u.verdict.clone()
    } else {
        Verdict::Converges
    };
    Ok(TwoSidedVerdict { left, right, overall })
}
