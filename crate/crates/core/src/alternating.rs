//! The alternating expansion:
//! `x = Σₙ (−1)ⁿ r₀⋯rₙ / ((q₁−1)q₁⋯(qₙ−1)qₙ·(qₙ₊₁−1))`.
//!
//! Cylinders are open intervals with the exceptional set removed. That set
//! consists of all cylinder endpoints; its members have no expansion. Each of
//! them is the supremum of some odd-rank cylinder, which is what a membership
//! witness records.
//!
//! Odd-rank cylinders take their supremum from the partial sum and subtract
//! the diameter; even-rank cylinders take their infimum from it and add the
//! diameter. Children of an odd-rank cylinder run left to right by increasing
//! digit, children of an even-rank cylinder right to left.

use alloc::{collections::BTreeMap, sync::Arc, vec::Vec};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{
    geometry::{self, rational_from, Parity},
    CylinderGeometry, DigitRule, DigitStream, Error, PrefixBase, Rational, Representation, Result,
};

const KIND: Representation = Representation::Alternating;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMinusCylinder {
    pub base: PrefixBase,
    pub geometry: CylinderGeometry,
    pub parity: Parity,
}

pub fn pm_cylinder(base: &PrefixBase) -> PMinusCylinder {
    PMinusCylinder {
        base: base.clone(),
        geometry: geometry::cylinder(base, KIND),
        parity: Parity::of(base.rank()),
    }
}

pub fn pm_inf(base: &PrefixBase) -> Rational {
    geometry::cylinder(base, KIND).inf
}

pub fn pm_sup(base: &PrefixBase) -> Rational {
    geometry::cylinder(base, KIND).sup
}

/// One step of the alternating remainder map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AltStep {
    Digit(BigUint),
    /// The remainder equals `r/m`, a cylinder endpoint.
    Endpoint { m: BigUint },
}

/// Digit-by-digit alternating expansion of a rational.
///
/// With remainder `x` and current `r`, the digit is `q = ⌊r/x⌋ + 1`, the unique
/// digit with `r/q < x < r/(q−1)`, and the new remainder is
/// `(r/(q−1) − x)·(q−1)q/r`. When `r/x` is an integer the remainder sits on an
/// endpoint and the number belongs to the exceptional set.
#[derive(Clone, Debug)]
pub struct AlternatingExpansion {
    base: PrefixBase,
    remainder: Rational,
    finished: bool,
}

impl AlternatingExpansion {
    pub fn new(system: Arc<DigitRule>, x: Rational) -> Result<Self> {
        if !x.is_positive() || x > Rational::one() {
            return Err(Error::OutOfDomain {
                value: x,
                domain: "(0, 1]",
            });
        }
        Ok(AlternatingExpansion {
            base: PrefixBase::empty(system),
            remainder: x,
            finished: false,
        })
    }

    pub fn base(&self) -> &PrefixBase {
        &self.base
    }

    pub fn remainder(&self) -> &Rational {
        &self.remainder
    }

    pub fn step(&mut self) -> AltStep {
        assert!(!self.finished, "expansion already reached an endpoint");
        let r = BigInt::from(self.base.r_value().clone());
        let x = &self.remainder;
        let (quot, rem) = (&r * x.denom()).div_rem(x.numer());
        if rem.is_zero() {
            self.finished = true;
            return AltStep::Endpoint {
                m: quot.to_biguint().expect("positive"),
            };
        }
        let q: BigInt = quot + 1;
        let q_minus: BigInt = &q - 1;
        let upper = Rational::new(r.clone(), q_minus.clone());
        self.remainder = (upper - x) * Rational::new(&q_minus * &q, r);
        let digit = q.to_biguint().expect("positive");
        self.base
            .push(digit.clone())
            .expect("extracted digit satisfies the digit constraint");
        AltStep::Digit(digit)
    }

    /// Odd-rank cylinder whose supremum is the expanded number, once an
    /// endpoint `r_k/m` has been reached after `k` digits.
    pub fn witness(&self, m: &BigUint) -> PrefixBase {
        let mut w = self.base.clone();
        if w.rank() % 2 == 0 {
            // Orientation preserved: x = sup Δ(c₁…c_k (m+1)).
            w.push(m + 1u32).expect("m ≥ r + 1");
        } else {
            // Orientation reversed: x = sup Δ(c₁…c_k m), an even rank, which
            // is also the supremum of its minimal child.
            w.push(m.clone()).expect("m ≥ r + 1");
            w.push_minimal();
        }
        w
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PmDigits {
    Regular(PrefixBase),
    /// The number is in the exceptional set; `witness` has odd rank and its
    /// supremum equals the number.
    Member { witness: PrefixBase, read: PrefixBase },
}

/// First `n` alternating digits of `x`, or the membership witness when `x`
/// turns out to be a cylinder endpoint.
pub fn pm_digits_of(system: Arc<DigitRule>, x: &Rational, n: usize) -> Result<PmDigits> {
    let mut exp = AlternatingExpansion::new(system, x.clone())?;
    while exp.base().rank() < n {
        if let AltStep::Endpoint { m } = exp.step() {
            return Ok(PmDigits::Member {
                witness: exp.witness(&m),
                read: exp.base().clone(),
            });
        }
    }
    Ok(PmDigits::Regular(exp.base))
}

/// A remainder-map orbit that returns to an earlier state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    /// Digits through the end of the first full cycle.
    pub digits: PrefixBase,
    /// Rank at which the repeated state first occurs.
    pub start: usize,
    pub period: usize,
    /// Remainders at ranks `0..=start + period`.
    pub orbit: Vec<Rational>,
}

impl CycleWitness {
    /// The infinite (periodic) expansion proven by the cycle.
    pub fn stream(&self) -> DigitStream {
        DigitStream::periodic(
            self.digits.truncated(self.start),
            self.digits.digits()[self.start..].to_vec(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ISResult {
    Member { witness: PrefixBase },
    NotMember(CycleWitness),
    NotMemberUpToDepth { depth: usize, digits: PrefixBase },
}

/// Decides membership in the exceptional set by running the remainder map:
/// reaching an endpoint proves membership, revisiting a state proves the
/// expansion is infinite.
///
/// States are compared as `(remainder, r)` pairs, and only from the rank on
/// which `rₙ` depends on the last digit alone.
pub fn is_member_is(system: Arc<DigitRule>, x: &Rational, max_depth: usize) -> Result<ISResult> {
    let memoryless = system.memoryless_from();
    let mut exp = AlternatingExpansion::new(system, x.clone())?;
    // Keyed by the reduced numerator and denominator, which order cheaply.
    let mut seen: BTreeMap<(BigInt, BigInt, BigUint), usize> = BTreeMap::new();
    let mut orbit = alloc::vec![x.clone()];
    loop {
        let rank = exp.base().rank();
        if rank >= memoryless {
            let t = exp.remainder();
            let key = (t.numer().clone(), t.denom().clone(), exp.base().r_value().clone());
            if let Some(&start) = seen.get(&key) {
                return Ok(ISResult::NotMember(CycleWitness {
                    digits: exp.base().clone(),
                    start,
                    period: rank - start,
                    orbit,
                }));
            }
            seen.insert(key, rank);
        }
        if rank >= max_depth {
            return Ok(ISResult::NotMemberUpToDepth {
                depth: max_depth,
                digits: exp.base,
            });
        }
        if let AltStep::Endpoint { m } = exp.step() {
            return Ok(ISResult::Member {
                witness: exp.witness(&m),
            });
        }
        orbit.push(exp.remainder().clone());
    }
}

/// Which case of the endpoint identities applies to the last digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LastDigit {
    /// `c_k = r_{k−1} + 1`.
    Minimal,
    /// `c_k > r_{k−1} + 1`.
    Larger,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub parity: Parity,
    pub case: LastDigit,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn last_digit_case(base: &PrefixBase) -> LastDigit {
    if base.is_minimal_at(base.rank()) {
        LastDigit::Minimal
    } else {
        LastDigit::Larger
    }
}

fn neighbor(base: &PrefixBase, delta: i8) -> PrefixBase {
    let last = base.last().expect("rank ≥ 1");
    let digit = if delta > 0 { last + 1u32 } else { last - 1u32 };
    base.with_last_digit(digit).expect("neighbour digit is admissible")
}

fn minimal_child(base: &PrefixBase) -> PrefixBase {
    let mut child = base.clone();
    child.push_minimal();
    child
}

/// Endpoint identities of an odd-rank base; `None` for even ranks.
///
/// * `inf Δ(c₁…c_k) = sup Δ(c₁…c_{k−1}(c_k+1))`
/// * `inf Δ(c₁…c_k) = inf Δ(c₁…c_k(r_k+1))`
/// * if `c_k` is minimal: `sup Δ(c₁…c_k) = sup Δ(c₁…c_{k−1}) = inf Δ(c₁…c_{k−2}(c_{k−1}+1))`
/// * otherwise: `sup Δ(c₁…c_k) = inf Δ(c₁…(c_k−1)) = inf Δ(c₁…(c_k−1)(r′+1))`
pub fn odd_identities(base: &PrefixBase) -> Option<IdentityReport> {
    if base.rank() % 2 == 0 {
        return None;
    }
    let inf = pm_inf(base);
    let sup = pm_sup(base);
    let mut checks = alloc::vec![
        IdentityCheck {
            name: "inf equals sup of the next-digit neighbour",
            holds: inf == pm_sup(&neighbor(base, 1)),
        },
        IdentityCheck {
            name: "inf equals inf of the minimal child",
            holds: inf == pm_inf(&minimal_child(base)),
        },
    ];
    let case = last_digit_case(base);
    match case {
        LastDigit::Minimal => {
            let parent = base.truncated(base.rank() - 1);
            checks.push(IdentityCheck {
                name: "sup equals sup of the parent",
                holds: sup == pm_sup(&parent),
            });
            if parent.rank() >= 1 {
                checks.push(IdentityCheck {
                    name: "sup equals inf of the parent's next-digit neighbour",
                    holds: sup == pm_inf(&neighbor(&parent, 1)),
                });
            }
        }
        LastDigit::Larger => {
            let lower = neighbor(base, -1);
            checks.push(IdentityCheck {
                name: "sup equals inf of the previous-digit neighbour",
                holds: sup == pm_inf(&lower),
            });
            checks.push(IdentityCheck {
                name: "sup equals inf of the previous-digit neighbour's minimal child",
                holds: sup == pm_inf(&minimal_child(&lower)),
            });
        }
    }
    Some(IdentityReport {
        parity: Parity::Odd,
        case,
        checks,
    })
}

/// Endpoint identities of an even-rank base (rank ≥ 2); `None` otherwise.
///
/// * `sup Δ(c₁…c_k) = inf Δ(c₁…c_{k−1}(c_k+1))`
/// * `sup Δ(c₁…c_k) = sup Δ(c₁…c_k(r_k+1))`
/// * if `c_k` is minimal: `inf Δ(c₁…c_k) = inf Δ(c₁…c_{k−1}) = sup Δ(c₁…c_{k−2}(c_{k−1}+1))`
/// * otherwise: `inf Δ(c₁…c_k) = sup Δ(c₁…(c_k−1)) = sup Δ(c₁…(c_k−1)(r′+1))`
pub fn even_identities(base: &PrefixBase) -> Option<IdentityReport> {
    if base.rank() % 2 == 1 || base.rank() == 0 {
        return None;
    }
    let inf = pm_inf(base);
    let sup = pm_sup(base);
    let mut checks = alloc::vec![
        IdentityCheck {
            name: "sup equals inf of the next-digit neighbour",
            holds: sup == pm_inf(&neighbor(base, 1)),
        },
        IdentityCheck {
            name: "sup equals sup of the minimal child",
            holds: sup == pm_sup(&minimal_child(base)),
        },
    ];
    let case = last_digit_case(base);
    match case {
        LastDigit::Minimal => {
            let parent = base.truncated(base.rank() - 1);
            checks.push(IdentityCheck {
                name: "inf equals inf of the parent",
                holds: inf == pm_inf(&parent),
            });
            checks.push(IdentityCheck {
                name: "inf equals sup of the parent's next-digit neighbour",
                holds: inf == pm_sup(&neighbor(&parent, 1)),
            });
        }
        LastDigit::Larger => {
            let lower = neighbor(base, -1);
            checks.push(IdentityCheck {
                name: "inf equals sup of the previous-digit neighbour",
                holds: inf == pm_sup(&lower),
            });
            checks.push(IdentityCheck {
                name: "inf equals sup of the previous-digit neighbour's minimal child",
                holds: inf == pm_sup(&minimal_child(&lower)),
            });
        }
    }
    Some(IdentityReport {
        parity: Parity::Even,
        case,
        checks,
    })
}

pub fn endpoint_identities(base: &PrefixBase) -> Option<IdentityReport> {
    odd_identities(base).or_else(|| even_identities(base))
}

/// The even-rank cylinder whose infimum equals `sup Δ(witness)` for an
/// odd-rank witness, or `None` when that supremum is 1.
pub fn even_infimum_partner(witness: &PrefixBase) -> Option<PrefixBase> {
    debug_assert!(witness.rank() % 2 == 1);
    match last_digit_case(witness) {
        LastDigit::Larger => Some(minimal_child(&neighbor(witness, -1))),
        LastDigit::Minimal => {
            let k = witness.rank();
            if k == 1 {
                return None;
            }
            Some(neighbor(&witness.truncated(k - 1), 1))
        }
    }
}

/// Whether `x` lies strictly inside the open cylinder of `base`.
pub fn strictly_encloses(base: &PrefixBase, x: &Rational) -> bool {
    geometry::cylinder(base, KIND).contains(x)
}

/// `r₀/q₁ < x < r₀/(q₁−1)`.
pub fn first_digit_bound_check(x: &Rational, q1: &BigUint, r0: &BigUint) -> bool {
    if q1 <= &BigUint::one() {
        return false;
    }
    let r0 = rational_from(r0);
    let lower = &r0 / rational_from(q1);
    let upper = r0 / rational_from(&(q1 - 1u32));
    &lower < x && x < &upper
}
