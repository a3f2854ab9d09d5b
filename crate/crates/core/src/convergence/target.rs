use alloc::sync::Arc;

use num_traits::Zero;

use crate::{
    geometry::cylinder,
    positive::{classify_point, PointKind},
    DigitRule, DigitStream, Error, Interval, PrefixBase, Rational, Representation, Result,
};

use super::Proposition;

/// Candidate limit `x₀` of a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitTarget {
    Zero,
    /// A point given by its positive expansion.
    InteriorPoint(DigitStream),
    /// `sup Δ(base)`, approached from the left.
    SupremumOf(PrefixBase),
    /// `inf Δ(base)`, approached from the right.
    InfimumOf(PrefixBase),
    /// A point given by its alternating expansion.
    RegularPoint(DigitStream),
    /// `sup Δ(base)` of an odd-rank alternating cylinder, from the left.
    OddSupOf(PrefixBase),
    /// `inf Δ(base)` of an even-rank alternating cylinder, from the right.
    EvenInfOf(PrefixBase),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Digits inspected when classifying a target stream.
pub(crate) const CLASSIFY_DEPTH: usize = 64;

impl LimitTarget {
    /// `None` for [`LimitTarget::Zero`], which exists on both sides.
    pub fn representation(&self) -> Option<Representation> {
        match self {
            LimitTarget::Zero => None,
            LimitTarget::InteriorPoint(_) | LimitTarget::SupremumOf(_) | LimitTarget::InfimumOf(_) => {
                Some(Representation::Positive)
            }
            LimitTarget::RegularPoint(_) | LimitTarget::OddSupOf(_) | LimitTarget::EvenInfOf(_) => {
                Some(Representation::Alternating)
            }
        }
    }

    /// Side the sequence must stay on, for one-sided targets.
    pub fn side(&self) -> Option<Side> {
        match self {
            LimitTarget::SupremumOf(_) | LimitTarget::OddSupOf(_) => Some(Side::Left),
            LimitTarget::InfimumOf(_) | LimitTarget::EvenInfOf(_) => Some(Side::Right),
            _ => None,
        }
    }

    pub(crate) fn base(&self) -> Option<&PrefixBase> {
        match self {
            LimitTarget::SupremumOf(b)
            | LimitTarget::InfimumOf(b)
            | LimitTarget::OddSupOf(b)
            | LimitTarget::EvenInfOf(b) => Some(b),
            _ => None,
        }
    }

    fn stream(&self) -> Option<&DigitStream> {
        match self {
            LimitTarget::InteriorPoint(s) | LimitTarget::RegularPoint(s) => Some(s),
            _ => None,
        }
    }

    /// Checks the target against the representation and system, and picks
    /// the proposition that governs it.
    pub fn classify(&self, kind: Representation, system: &Arc<DigitRule>) -> Result<Proposition> {
        if let Some(own) = self.representation() {
            if own != kind {
                return Err(Error::InvalidTarget(alloc::format!(
                    "target belongs to the {own} representation, not {kind}"
                )));
            }
        }
        let same = |b: &PrefixBase| Arc::ptr_eq(b.system(), system) || **b.system() == **system;
        if let Some(b) = self.base() {
            if !same(b) {
                return Err(Error::SystemMismatch);
            }
        }
        if let Some(s) = self.stream() {
            if !same(s.prefix()) {
                return Err(Error::SystemMismatch);
            }
        }
        Ok(match self {
            LimitTarget::Zero => match kind {
                Representation::Positive => Proposition::PZero,
                Representation::Alternating => Proposition::PmZero,
            },
            LimitTarget::InteriorPoint(s) => match classify_point(s, CLASSIFY_DEPTH) {
                Ok(c) if c.kind == (PointKind::Interior { proven: true }) => Proposition::PInterior,
                Ok(_) => Proposition::PSufficiency,
                Err(Error::Undetermined { depth }) => return Err(Error::UnclassifiedTarget { depth }),
                Err(e) => return Err(e),
            },
            LimitTarget::SupremumOf(_) => Proposition::PLeftSupremum,
            LimitTarget::InfimumOf(b) => {
                if b.is_empty() {
                    return Err(Error::InvalidTarget("the infimum of the rank-0 cylinder is 0; use the zero target".into()));
                }
                Proposition::PRightInfimum
            }
            LimitTarget::RegularPoint(_) => Proposition::PmRegular,
            LimitTarget::OddSupOf(b) => {
                if b.rank() % 2 == 0 {
                    return Err(Error::SideMismatch(alloc::format!(
                        "odd-rank supremum target has rank {}",
                        b.rank()
                    )));
                }
                Proposition::PmLeftOddSupremum
            }
            LimitTarget::EvenInfOf(b) => {
                if b.rank() % 2 == 1 {
                    return Err(Error::SideMismatch(alloc::format!(
                        "even-rank infimum target has rank {}",
                        b.rank()
                    )));
                }
                if b.is_empty() {
                    return Err(Error::InvalidTarget("the infimum of the rank-0 cylinder is 0; use the zero target".into()));
                }
                Proposition::PmRightEvenInfimum
            }
        })
    }

    /// Digit stream of `x₀`, when the target has one.
    pub(crate) fn reference(&self) -> Option<DigitStream> {
        match self {
            LimitTarget::InteriorPoint(s) | LimitTarget::RegularPoint(s) => Some(s.clone()),
            LimitTarget::SupremumOf(b) => Some(DigitStream::minimal(b.clone())),
            _ => None,
        }
    }

    /// `x₀` as an exact rational, when available.
    pub fn exact(&self, kind: Representation) -> Option<Rational> {
        match self {
            LimitTarget::Zero => Some(Rational::zero()),
            LimitTarget::InteriorPoint(s) | LimitTarget::RegularPoint(s) => s.exact_value(kind),
            LimitTarget::SupremumOf(b) | LimitTarget::OddSupOf(b) => Some(cylinder(b, kind).sup),
            LimitTarget::InfimumOf(b) | LimitTarget::EvenInfOf(b) => Some(cylinder(b, kind).inf),
        }
    }

    pub fn enclosure(&self, kind: Representation, depth: usize) -> Result<Interval> {
        match self.exact(kind) {
            Some(x) => Ok(Interval::point(x)),
            None => self
                .stream()
                .expect("targets without streams are exact")
                .enclosure(kind, depth),
        }
    }
}
