//! Convergence of digit-defined sequences.
//!
//! A sequence is described symbolically by a [`SequenceFamily`], whose index
//! maps have limits that can be read off their form, and a candidate limit by a
//! [`LimitTarget`]. [`decide`] picks the criterion that governs the target and
//! returns a verdict together with exact distance evidence at sampled indices.

mod decide;
mod family;
mod index_map;
mod split;
mod target;

use alloc::{string::String, vec::Vec};
use core::fmt;

pub use decide::{decide, decide_p, decide_pminus, decide_zero, disagreement_index, oracle_distance_profile};
pub use family::{Deviation, Element, ExplicitElement, SequenceFamily};
pub use index_map::{IndexMap, IndexPattern, Limit};
pub use split::{decide_two_sided, two_sided_split, SplitSide, TwoSidedSplit, TwoSidedVerdict};
pub use target::{LimitTarget, Side};

use crate::{PrefixBase, Rational, Representation};
use num_bigint::BigUint;

/// Indices `1, 2, 4, …, 1024`.
pub const DEFAULT_SAMPLES: [u64; 11] = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Proposition {
    /// Positive side: `kₙ → ∞` is sufficient for `xₙ → x₀`.
    PSufficiency,
    /// Positive side, `x₀` not a cylinder endpoint: `xₙ → x₀` iff `kₙ → ∞`.
    PInterior,
    /// Positive side, `x₀ = sup Δ(c)` from the left: iff `kₙ → ∞`.
    PLeftSupremum,
    /// Positive side, `x₀ = inf Δ(c₁…c_k)` from the right: iff eventually
    /// `xₙ ∈ Δ(c₁…c_k)` and `p_{k+1}(xₙ) → ∞`.
    PRightInfimum,
    /// Positive side: `xₙ → 0` iff `p₁(xₙ) → ∞`.
    PZero,
    /// Alternating side, `x₀` regular: iff `kₙ → ∞`.
    PmRegular,
    /// Alternating side: `xₙ → 0` iff `q₁(xₙ) → ∞`.
    PmZero,
    /// Alternating side, `x₀ = sup Δ(c₁…c_k)` with `k` odd, from the left:
    /// iff eventually `xₙ ∈ Δ(c₁…c_k)` and `q_{k+1}(xₙ) → ∞`.
    PmLeftOddSupremum,
    /// Alternating side, `x₀ = inf Δ(c₁…c_k)` with `k` even, from the right:
    /// iff eventually `xₙ ∈ Δ(c₁…c_k)` and `q_{k+1}(xₙ) → ∞`.
    PmRightEvenInfimum,
}

impl Proposition {
    pub const ALL: [Proposition; 9] = [
        Proposition::PSufficiency,
        Proposition::PInterior,
        Proposition::PLeftSupremum,
        Proposition::PRightInfimum,
        Proposition::PZero,
        Proposition::PmRegular,
        Proposition::PmZero,
        Proposition::PmLeftOddSupremum,
        Proposition::PmRightEvenInfimum,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Proposition::PSufficiency => "p-sufficiency",
            Proposition::PInterior => "p-interior",
            Proposition::PLeftSupremum => "p-left-supremum",
            Proposition::PRightInfimum => "p-right-infimum",
            Proposition::PZero => "p-zero",
            Proposition::PmRegular => "pm-regular",
            Proposition::PmZero => "pm-zero",
            Proposition::PmLeftOddSupremum => "pm-left-odd-supremum",
            Proposition::PmRightEvenInfimum => "pm-right-even-infimum",
        }
    }

    pub fn representation(&self) -> Representation {
        match self {
            Proposition::PSufficiency
            | Proposition::PInterior
            | Proposition::PLeftSupremum
            | Proposition::PRightInfimum
            | Proposition::PZero => Representation::Positive,
            _ => Representation::Alternating,
        }
    }

    /// Whether the criterion is necessary as well as sufficient.
    pub fn is_characterization(&self) -> bool {
        *self != Proposition::PSufficiency
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// How a divergence gap arises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapCase {
    /// The elements stay outside `cylinder`, which surrounds `x₀` on the
    /// approach side.
    Separated { cylinder: PrefixBase },
    /// The digit at `position` stays equal to `digit`.
    BoundedDigit { position: usize, digit: BigUint },
    /// The element for parameter value `parameter` recurs.
    RepeatedElement { parameter: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    /// `|xₙ − x₀| ≥ gap` for every `n` in `pattern`.
    pub gap: Rational,
    pub pattern: IndexPattern,
    pub case: GapCase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges(Divergence),
    Undetermined(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Converges => "converges",
            Verdict::Diverges(_) => "diverges",
            Verdict::Undetermined(_) => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    /// `|xₙ − x₀| ≤ bound`.
    Bound(Rational),
    /// `|xₙ − x₀| ≥ gap`.
    Gap(Rational),
    Unchecked,
}

/// Exact bounds on `|xₙ − x₀|` at one sampled index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceRow {
    pub n: u64,
    pub lower: Rational,
    pub upper: Rational,
    /// Both `xₙ` and `x₀` were evaluated exactly, so `lower == upper`.
    pub exact: bool,
    pub check: Check,
    pub holds: bool,
    /// Cylinder rank used for enclosures.
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceVerdict {
    pub proposition: Proposition,
    pub verdict: Verdict,
    pub evidence: Vec<EvidenceRow>,
}

impl ConvergenceVerdict {
    pub fn evidence_consistent(&self) -> bool {
        self.evidence.iter().all(|r| r.holds)
    }
}

pub fn evidence_consistent(v: &ConvergenceVerdict) -> bool {
    v.evidence_consistent()
}
