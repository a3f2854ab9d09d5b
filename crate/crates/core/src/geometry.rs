//! Cylinder geometry shared by both expansions.
//!
//! A prefix `c₁…c_k` pins the represented number to an affine image of the
//! shifted remainder `t`: `x = offset + scale·t` for the positive expansion and
//! `x = offset + (−1)ᵏ·scale·t` for the alternating one, where
//! `scale = r₀⋯r_{k−1} / ((c₁−1)c₁⋯(c_k−1)c_k)` is the cylinder diameter.

use core::{cmp::Ordering, fmt};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::{PrefixBase, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Positive Perron series; cylinders are `(a, b]`.
    Positive,
    /// Alternating Perron series; cylinders are `(a, b)` minus the exceptional set.
    Alternating,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Positive => "P",
            Representation::Alternating => "P-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(rank: usize) -> Self {
        if rank % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Infimum, supremum and diameter of a cylinder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderGeometry {
    pub inf: Rational,
    pub sup: Rational,
    pub diam: Rational,
    pub rank: usize,
    pub kind: Representation,
}

impl CylinderGeometry {
    /// Membership in `(inf, sup]` or `(inf, sup)`; the exceptional set is not
    /// excluded here.
    pub fn contains(&self, x: &Rational) -> bool {
        match self.kind {
            Representation::Positive => &self.inf < x && x <= &self.sup,
            Representation::Alternating => &self.inf < x && x < &self.sup,
        }
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.inf.clone(),
            hi: self.sup.clone(),
            lo_closed: false,
            hi_closed: self.kind == Representation::Positive,
        }
    }
}

/// Affine position of a cylinder: `x = offset ± scale·t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub offset: Rational,
    pub scale: Rational,
    /// True when larger remainders give smaller values.
    pub negated: bool,
}

impl Position {
    pub fn of(base: &PrefixBase, kind: Representation) -> Self {
        // offset = acc / den and scale = num / den, kept as integers until the end.
        let mut acc = BigInt::zero();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (n, c) in base.digits().iter().enumerate() {
            let r = base.r(n);
            let c_minus = c - 1u32;
            // The term num·r/(den·c) (or /(den·(c−1))) over the new denominator den·(c−1)c.
            let cofactor = match kind {
                Representation::Positive => &c_minus,
                Representation::Alternating => c,
            };
            let term = BigInt::from(&num * r * cofactor);
            acc *= BigInt::from(&c_minus * c);
            if kind == Representation::Alternating && n % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
            num *= r;
            den *= c_minus * c;
        }
        let den = BigInt::from(den);
        Position {
            offset: Rational::new(acc, den.clone()),
            scale: Rational::new(BigInt::from(num), den),
            negated: kind == Representation::Alternating && base.rank() % 2 == 1,
        }
    }

    pub fn value_at(&self, t: &Rational) -> Rational {
        if self.negated {
            &self.offset - &self.scale * t
        } else {
            &self.offset + &self.scale * t
        }
    }

    /// Inverse of [`Position::value_at`].
    pub fn remainder_of(&self, x: &Rational) -> Rational {
        if self.negated {
            (&self.offset - x) / &self.scale
        } else {
            (x - &self.offset) / &self.scale
        }
    }

    /// Image of `t ∈ [0, 1]` as `(inf, sup)`.
    pub fn span(&self) -> (Rational, Rational) {
        if self.negated {
            (&self.offset - &self.scale, self.offset.clone())
        } else {
            (self.offset.clone(), &self.offset + &self.scale)
        }
    }
}

pub(crate) fn rational_from(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn cylinder(base: &PrefixBase, kind: Representation) -> CylinderGeometry {
    let pos = Position::of(base, kind);
    let (inf, sup) = pos.span();
    CylinderGeometry {
        inf,
        sup,
        diam: pos.scale,
        rank: base.rank(),
        kind,
    }
}

/// Interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { &self.lo <= x } else { &self.lo < x };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `Less` when every point lies strictly below `x`, `Greater` when every
    /// point lies strictly above, `None` when undecided.
    pub fn compare_to(&self, x: &Rational) -> Option<Ordering> {
        let below = if self.hi_closed { &self.hi < x } else { &self.hi <= x };
        let above = if self.lo_closed { &self.lo > x } else { &self.lo >= x };
        if below {
            Some(Ordering::Less)
        } else if above {
            Some(Ordering::Greater)
        } else if self.is_point() && &self.lo == x {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Closed bounds `[lo, hi]` on `|y − z|` for `y ∈ self`, `z ∈ other`.
    pub fn distance_bounds(&self, other: &Interval) -> (Rational, Rational) {
        let a = (&self.lo - &other.hi).abs();
        let b = (&self.hi - &other.lo).abs();
        let hi = if a > b { a } else { b };
        let lo = if self.hi < other.lo {
            &other.lo - &self.hi
        } else if other.hi < self.lo {
            &self.lo - &other.hi
        } else {
            Rational::zero()
        };
        (lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() && self.lo_closed {
            return write!(f, "{}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { "[" } else { "(" },
            self.lo,
            self.hi,
            if self.hi_closed { "]" } else { ")" }
        )
    }
}
