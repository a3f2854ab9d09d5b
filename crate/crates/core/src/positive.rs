//! The positive expansion: `x = Σₙ r₀⋯rₙ / ((p₁−1)p₁⋯(pₙ−1)pₙ·pₙ₊₁)`.
//!
//! Every `x ∈ (0, 1]` has exactly one expansion. The rank-`k` cylinder with
//! base `c₁…c_k` is the half-open interval `(inf, sup]`, with
//! `inf = Σ_{n<k} r₀⋯rₙ / ((c₁−1)c₁⋯(cₙ−1)cₙ·cₙ₊₁)` and `sup = inf + diam`.
//! Children of a cylinder are laid out right to left by increasing digit, the
//! child with digit `r_k + 1` touching the parent's supremum.

use alloc::{collections::BTreeMap, sync::Arc};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{
    geometry::{self, rational_from, Interval},
    CylinderGeometry, DigitRule, DigitStream, Error, Generator, PrefixBase, Rational,
    Representation, Result, Tail,
};

const KIND: Representation = Representation::Positive;

pub fn cylinder(base: &PrefixBase) -> CylinderGeometry {
    geometry::cylinder(base, KIND)
}

pub fn cyl_inf(base: &PrefixBase) -> Rational {
    cylinder(base).inf
}

pub fn cyl_sup(base: &PrefixBase) -> Rational {
    cylinder(base).sup
}

pub fn cyl_diam(base: &PrefixBase) -> Rational {
    cylinder(base).diam
}

/// Where a stream's value is known to lie after reading `depth` digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamValue {
    /// `(inf, sup]` of the rank-`depth` cylinder.
    pub interval: Interval,
    /// Exact value, available for minimal and periodic tails.
    pub exact: Option<Rational>,
}

pub fn eval_stream(stream: &DigitStream, depth: usize) -> Result<StreamValue> {
    let base = stream.take(depth)?;
    Ok(StreamValue {
        interval: cylinder(&base).interval(),
        exact: stream.exact_value(KIND),
    })
}

/// Digit-by-digit expansion of a rational in `(0, 1]`.
///
/// With remainder `x` and current `r`, the next digit is `p = ⌊r/x⌋ + 1`,
/// the unique digit with `r/p < x ≤ r/(p−1)`; the new remainder is
/// `(x − r/p)·(p−1)p/r ∈ (0, 1]`.
#[derive(Clone, Debug)]
pub struct PositiveExpansion {
    base: PrefixBase,
    remainder: Rational,
}

impl PositiveExpansion {
    pub fn new(system: Arc<DigitRule>, x: Rational) -> Result<Self> {
        if !x.is_positive() || x > Rational::one() {
            return Err(Error::OutOfDomain {
                value: x,
                domain: "(0, 1]",
            });
        }
        Ok(PositiveExpansion {
            base: PrefixBase::empty(system),
            remainder: x,
        })
    }

    pub fn base(&self) -> &PrefixBase {
        &self.base
    }

    /// Remainder in the shifted system after the digits read so far.
    pub fn remainder(&self) -> &Rational {
        &self.remainder
    }

    pub fn next_digit(&mut self) -> BigUint {
        let r = BigInt::from(self.base.r_value().clone());
        let x = &self.remainder;
        let p: BigInt = (&r * x.denom()).div_floor(x.numer()) + 1;
        let r_over_p = Rational::new(r.clone(), p.clone());
        self.remainder = (x - r_over_p) * Rational::new(&p * (&p - 1), r);
        let digit = p.to_biguint().expect("digit is positive");
        self.base
            .push(digit.clone())
            .expect("extracted digit satisfies the digit constraint");
        digit
    }

    pub fn into_base(self) -> PrefixBase {
        self.base
    }
}

impl Iterator for PositiveExpansion {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        Some(self.next_digit())
    }
}

/// First `n` digits of `x ∈ (0, 1]`.
pub fn digits_of(system: Arc<DigitRule>, x: &Rational, n: usize) -> Result<PrefixBase> {
    let mut exp = PositiveExpansion::new(system, x.clone())?;
    for _ in 0..n {
        exp.next_digit();
    }
    Ok(exp.into_base())
}

/// The exact stream of a rational: digits until the remainder reaches 1, then
/// a minimal tail; or a periodic tail once the remainder map revisits a state.
/// Gives up after `max_depth` digits with an unknown tail.
pub fn stream_of(system: Arc<DigitRule>, x: &Rational, max_depth: usize) -> Result<DigitStream> {
    let memoryless = system.memoryless_from();
    let mut exp = PositiveExpansion::new(system, x.clone())?;
    let mut seen: BTreeMap<(BigInt, BigInt, BigUint), usize> = BTreeMap::new();
    while !exp.remainder().is_one() {
        let rank = exp.base().rank();
        if rank >= memoryless {
            let t = exp.remainder();
            let key = (t.numer().clone(), t.denom().clone(), exp.base().r_value().clone());
            if let Some(&start) = seen.get(&key) {
                let base = exp.into_base();
                let block = base.digits()[start..].to_vec();
                return Ok(DigitStream::periodic(base.truncated(start), block));
            }
            seen.insert(key, rank);
        }
        if rank >= max_depth {
            return Ok(DigitStream::new(exp.into_base(), Tail::Unknown));
        }
        exp.next_digit();
    }
    Ok(DigitStream::minimal(exp.into_base()))
}

/// `r₀/p₁ < x ≤ r₀/(p₁−1)`.
pub fn first_digit_bound_check(x: &Rational, p1: &BigUint, r0: &BigUint) -> bool {
    if p1 <= &BigUint::one() {
        return false;
    }
    let r0 = rational_from(r0);
    let lower = &r0 / rational_from(p1);
    let upper = r0 / rational_from(&(p1 - 1u32));
    &lower < x && x <= &upper
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointKind {
    /// Not an endpoint of any cylinder. `proven` is false when only finitely
    /// many digits could be inspected.
    Interior { proven: bool },
    /// Supremum of the witness cylinder; the digits after it are all minimal.
    CylinderSupremum(PrefixBase),
    /// The number 1: every digit is minimal.
    One,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointClassP {
    pub kind: PointKind,
    pub depth: usize,
}

/// Decides whether a stream is an endpoint of some cylinder.
pub fn classify_point(stream: &DigitStream, depth: usize) -> Result<PointClassP> {
    match stream.tail() {
        Tail::Minimal => Ok(classify_minimal(stream.prefix())),
        Tail::Generator(Generator::MinimalOffset(j)) if !j.is_zero() => Ok(PointClassP {
            kind: PointKind::Interior { proven: true },
            depth: stream.prefix().rank(),
        }),
        _ => {
            if let Some((start, block)) = stream.periodic_form() {
                // The rule state repeats after one period, so the second
                // period shows the minimality pattern of every later one.
                let mut settled = start.rank() + block.len();
                while settled <= stream.prefix().system().memoryless_from() {
                    settled += block.len();
                }
                let periods = stream.take(settled + block.len())?;
                let all_minimal = (settled + 1..=periods.rank()).all(|i| periods.is_minimal_at(i));
                return Ok(if all_minimal {
                    classify_minimal(&periods)
                } else {
                    PointClassP {
                        kind: PointKind::Interior { proven: true },
                        depth: periods.rank(),
                    }
                });
            }
            let inspected = match stream.tail() {
                Tail::Unknown => stream.prefix().clone(),
                _ => stream.take(depth.max(stream.prefix().rank()))?,
            };
            if (1..=inspected.rank()).all(|i| inspected.is_minimal_at(i)) {
                return Err(Error::Undetermined {
                    depth: inspected.rank(),
                });
            }
            Ok(PointClassP {
                kind: PointKind::Interior { proven: false },
                depth: inspected.rank(),
            })
        }
    }
}

fn classify_minimal(prefix: &PrefixBase) -> PointClassP {
    let witness = last_non_minimal(prefix);
    PointClassP {
        kind: if witness == 0 {
            PointKind::One
        } else {
            PointKind::CylinderSupremum(prefix.truncated(witness))
        },
        depth: prefix.rank(),
    }
}

/// Largest position holding a non-minimal digit, 0 when there is none.
fn last_non_minimal(base: &PrefixBase) -> usize {
    (1..=base.rank())
        .rev()
        .find(|&i| !base.is_minimal_at(i))
        .unwrap_or(0)
}

/// `inf Δ(c₁…c_k) = sup Δ(c₁…c_{k−1}(c_k+1))`: each infimum is the supremum of
/// the same-rank neighbour on the left.
pub fn left_neighbor_sup_identity(base: &PrefixBase) -> bool {
    let Some(last) = base.last() else {
        return false;
    };
    let neighbor = base
        .with_last_digit(last + 1u32)
        .expect("a larger digit stays admissible");
    cyl_inf(base) == cyl_sup(&neighbor)
}

/// The cylinder whose infimum equals `sup Δ(base)`, or `None` when that
/// supremum is 1.
///
/// With `j` the last non-minimal position, `sup Δ(c₁…c_k) = sup Δ(c₁…c_j)`
/// and that equals the infimum of `c₁…c_{j−1}(c_j − 1)`.
pub fn supremum_as_infimum(base: &PrefixBase) -> Option<PrefixBase> {
    let j = last_non_minimal(base);
    if j == 0 {
        return None;
    }
    let prefix = base.truncated(j);
    let digit = prefix.last().expect("j ≥ 1") - 1u32;
    Some(
        prefix
            .with_last_digit(digit)
            .expect("non-minimal digit minus one is admissible"),
    )
}

/// Checks `sup Δ(base) = inf Δ(supremum_as_infimum(base))` exactly; true
/// vacuously when the supremum is 1.
pub fn supremum_infimum_identity(base: &PrefixBase) -> bool {
    match supremum_as_infimum(base) {
        Some(other) => cyl_sup(base) == cyl_inf(&other),
        None => cyl_sup(base).is_one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::shared_builtin;
    use alloc::vec::Vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn sys(name: &str) -> Arc<DigitRule> {
        shared_builtin(name).unwrap()
    }

    fn base(name: &str, digits: &[u32]) -> PrefixBase {
        PrefixBase::new(sys(name), digits.iter().copied()).unwrap()
    }

    fn digits(b: &PrefixBase) -> Vec<u64> {
        b.digits().iter().map(|d| u64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn rank_one_luroth_cylinders() {
        assert_eq!(cyl_inf(&base("luroth", &[2])), q(1, 2));
        assert_eq!(cyl_sup(&base("luroth", &[2])), q(1, 1));
        assert_eq!(cyl_inf(&base("luroth", &[3])), q(1, 3));
        assert_eq!(cyl_sup(&base("luroth", &[3])), q(1, 2));
        assert_eq!(cyl_diam(&base("luroth", &[3])), q(1, 6));
    }

    #[test]
    fn rank_two_luroth_cylinder() {
        let b = base("luroth", &[3, 2]);
        assert_eq!(cyl_inf(&b), q(5, 12));
        assert_eq!(cyl_sup(&b), q(1, 2));
        assert_eq!(cyl_diam(&b), q(1, 12));
        assert_eq!(cyl_sup(&b), cyl_sup(&base("luroth", &[3])));
        assert_eq!(cyl_inf(&b), cyl_sup(&base("luroth", &[3, 3])));
    }

    #[test]
    fn minimal_first_digit_reaches_one() {
        let rule = DigitRule::new("phi0-3", 3u32, crate::Template::LastDigit).unwrap();
        let b = PrefixBase::new(Arc::new(rule), [4u32]).unwrap();
        assert_eq!(cyl_sup(&b), q(1, 1));
        assert_eq!(cyl_inf(&b), q(3, 4));
    }

    #[test]
    fn eval_minimal_and_constant_streams() {
        let s = DigitStream::minimal(base("luroth", &[3]));
        let v = eval_stream(&s, 3).unwrap();
        assert_eq!(v.exact, Some(q(1, 2)));
        assert_eq!(v.interval.lo, cyl_inf(&base("luroth", &[3, 2, 2])));
        assert_eq!(v.interval.hi, q(1, 2));
        assert!(v.interval.contains(&q(1, 2)));

        let s = DigitStream::minimal(base("luroth", &[2]));
        let v = eval_stream(&s, 1).unwrap();
        assert_eq!((v.interval.lo, v.interval.hi), (q(1, 2), q(1, 1)));
    }

    #[test]
    fn extraction_examples() {
        assert_eq!(digits(&digits_of(sys("luroth"), &q(1, 2), 4).unwrap()), [3, 2, 2, 2]);
        assert_eq!(digits(&digits_of(sys("luroth"), &q(1, 1), 3).unwrap()), [2, 2, 2]);
        assert_eq!(digits(&digits_of(sys("sylvester"), &q(1, 1), 3).unwrap()), [2, 3, 7]);
        assert!(matches!(
            digits_of(sys("luroth"), &q(0, 1), 1),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            digits_of(sys("luroth"), &q(3, 2), 1),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn exact_streams_of_rationals() {
        let s = stream_of(sys("luroth"), &q(1, 2), 10).unwrap();
        assert_eq!(s.tail(), &Tail::Minimal);
        assert_eq!(digits(s.prefix()), [3]);
        let s = stream_of(sys("luroth"), &q(2, 5), 10).unwrap();
        assert_eq!(s.tail(), &Tail::Generator(Generator::Periodic(alloc::vec![3u32.into()])));
        assert_eq!(s.exact_value(KIND), Some(q(2, 5)));
        let s = stream_of(sys("engel"), &q(2, 5), 1).unwrap();
        assert_eq!(s.tail(), &Tail::Unknown);
    }

    #[test]
    fn first_digit_bounds() {
        let one = BigUint::one();
        assert!(first_digit_bound_check(&q(1, 2), &3u32.into(), &one));
        assert!(!first_digit_bound_check(&q(1, 2), &2u32.into(), &one));
        assert!(first_digit_bound_check(&q(2, 3), &4u32.into(), &2u32.into()));
    }

    #[test]
    fn classification() {
        let lur = sys("luroth");
        let threes = DigitStream::new(
            PrefixBase::empty(lur.clone()),
            Tail::Generator(Generator::Constant(3u32.into())),
        );
        assert_eq!(
            classify_point(&threes, 10).unwrap().kind,
            PointKind::Interior { proven: true }
        );
        let four = DigitStream::minimal(base("luroth", &[4]));
        assert_eq!(
            classify_point(&four, 10).unwrap().kind,
            PointKind::CylinderSupremum(base("luroth", &[4]))
        );
        assert_eq!(eval_stream(&four, 1).unwrap().exact, Some(q(1, 3)));
        assert_eq!(
            classify_point(&DigitStream::minimal(PrefixBase::empty(lur.clone())), 5)
                .unwrap()
                .kind,
            PointKind::One
        );
        // Trailing minimal digits in the prefix are absorbed into the tail.
        let s = DigitStream::minimal(base("luroth", &[4, 2, 2]));
        assert_eq!(
            classify_point(&s, 5).unwrap().kind,
            PointKind::CylinderSupremum(base("luroth", &[4]))
        );
        // A constant-2 Lüroth tail is the minimal tail in disguise.
        let s = DigitStream::new(base("luroth", &[5]), Tail::Generator(Generator::Constant(2u32.into())));
        assert_eq!(
            classify_point(&s, 5).unwrap().kind,
            PointKind::CylinderSupremum(base("luroth", &[5]))
        );
        let u = DigitStream::new(base("luroth", &[2, 2]), Tail::Unknown);
        assert_eq!(classify_point(&u, 5), Err(Error::Undetermined { depth: 2 }));
        let u = DigitStream::new(base("luroth", &[3, 2]), Tail::Unknown);
        assert_eq!(
            classify_point(&u, 5).unwrap().kind,
            PointKind::Interior { proven: false }
        );
    }

    #[test]
    fn neighbor_identities() {
        assert!(left_neighbor_sup_identity(&base("luroth", &[3])));
        assert_eq!(cyl_sup(&base("luroth", &[4])), q(1, 3));
        assert!(left_neighbor_sup_identity(&base("engel", &[2, 3])));
        assert!(left_neighbor_sup_identity(&base("sylvester", &[2, 3, 7])));
        assert!(supremum_infimum_identity(&base("engel", &[3, 4, 4])));
        assert_eq!(supremum_as_infimum(&base("luroth", &[2, 2])), None);
        assert_eq!(
            supremum_as_infimum(&base("luroth", &[4, 2])),
            Some(base("luroth", &[3]))
        );
    }
}
