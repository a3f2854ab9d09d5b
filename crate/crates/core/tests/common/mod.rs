//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the engine's geometry or extraction code: cylinder
//! endpoints are summed straight from the series, and the classical expansions
//! are the textbook greedy algorithms.

#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use perron_core::{system::shared_builtin, DigitRule, PrefixBase, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BUILTINS: [&str; 5] = ["luroth", "engel", "sylvester", "pierce", "alt-luroth"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn sys(name: &str) -> Arc<DigitRule> {
    shared_builtin(name).unwrap()
}

/// `rₙ` of a builtin from the last digit, written out by hand.
pub fn r_of(name: &str, c: &BigUint) -> BigUint {
    match name {
        "luroth" | "alt-luroth" => BigUint::one(),
        "engel" => c - 1u32,
        "sylvester" => c * (c - 1u32),
        "pierce" => c.clone(),
        other => panic!("no oracle for {other}"),
    }
}

/// `r₀ … r_k` for a digit list of a builtin.
pub fn r_list(name: &str, digits: &[BigUint]) -> Vec<BigUint> {
    let mut r = vec![BigUint::one()];
    r.extend(digits.iter().map(|c| r_of(name, c)));
    r
}

/// Positive cylinder `(inf, sup, diam)` from the partial sums of the series.
pub fn p_cylinder(r: &[BigUint], digits: &[BigUint]) -> (Rational, Rational, Rational) {
    let (sum, diam) = partial_sum(r, digits, false);
    (sum.clone(), sum + &diam, diam)
}

/// Alternating cylinder `(inf, sup, diam)`; the partial sum is the supremum at
/// odd rank and the infimum at even rank.
pub fn pm_cylinder(r: &[BigUint], digits: &[BigUint]) -> (Rational, Rational, Rational) {
    let (sum, diam) = partial_sum(r, digits, true);
    if digits.len() % 2 == 1 {
        (&sum - &diam, sum, diam)
    } else {
        (sum.clone(), sum + &diam, diam)
    }
}

/// `Σ_{n<k} (±1)ⁿ r₀⋯rₙ / ((c₁−1)c₁⋯(cₙ−1)cₙ·e_{n+1})` with `e = c` for the
/// positive series and `e = c − 1` for the alternating one, together with
/// `r₀⋯r_{k−1} / ((c₁−1)c₁⋯(c_k−1)c_k)`. Terms are summed over the common
/// denominator `(c₁−1)c₁⋯(c_k−1)c_k`.
fn partial_sum(r: &[BigUint], digits: &[BigUint], alternating: bool) -> (Rational, Rational) {
    let mut acc = BigInt::zero();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (n, c) in digits.iter().enumerate() {
        num *= &r[n];
        let other = if alternating { c.clone() } else { c - 1u32 };
        let term = BigInt::from(&num * other);
        acc *= BigInt::from((c - 1u32) * c);
        if alternating && n % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
        den *= (c - 1u32) * c;
    }
    let den = BigInt::from(den);
    (Rational::new(acc, den.clone()), Rational::new(num.into(), den))
}

/// Random valid digits of the given rank: each digit is the minimum plus a
/// small, occasionally large, offset.
pub fn random_digits(rng: &mut ChaCha8Rng, name: &str, rank: usize) -> Vec<BigUint> {
    let mut digits = Vec::with_capacity(rank);
    let mut r = BigUint::one();
    for _ in 0..rank {
        let offset: u64 = match rng.gen_range(0..10) {
            0..=3 => 0,
            4..=7 => rng.gen_range(1..6),
            8 => rng.gen_range(6..100),
            _ => rng.gen_range(100..100_000),
        };
        let c = &r + 1u32 + offset;
        r = r_of(name, &c);
        digits.push(c);
    }
    digits
}

pub fn random_base(rng: &mut ChaCha8Rng, name: &str, rank: usize) -> PrefixBase {
    PrefixBase::new(sys(name), random_digits(rng, name, rank)).unwrap()
}

/// Uniform numerator over a random denominator in `[2, max_den]`; `open`
/// excludes 1.
pub fn random_rational(rng: &mut ChaCha8Rng, max_den: u64, open: bool) -> Rational {
    let den = rng.gen_range(2..=max_den);
    let num = if open { rng.gen_range(1..den) } else { rng.gen_range(1..=den) };
    q(num as i64, den as i64)
}

fn ceil_inverse(u: &Rational) -> BigUint {
    let inv = u.recip();
    inv.ceil().to_integer().to_biguint().unwrap()
}

fn floor_inverse(u: &Rational) -> BigUint {
    u.recip().floor().to_integer().to_biguint().unwrap()
}

/// Digits that follow a terminating greedy expansion whose last digit is
/// `s`: in the half-open convention the final `1/s` becomes `s + 1`
/// followed by minimal digits.
fn close_with_minimal_tail(name: &str, digits: &mut Vec<BigUint>, depth: usize) {
    let last = digits.pop().expect("nonempty");
    let mut c = last + 1u32;
    while digits.len() < depth {
        let next = r_of(name, &c) + 1u32;
        digits.push(c);
        c = next;
    }
}

/// Classical Lüroth digits: `a = ⌈1/u⌉`, `u ↦ a(a−1)u − (a−1)`, stopping at 0.
/// Returns the digits and whether the expansion terminated.
pub fn luroth_classical(x: &Rational, depth: usize) -> (Vec<BigUint>, bool) {
    let mut u = x.clone();
    let mut digits = Vec::new();
    while digits.len() < depth {
        let a = ceil_inverse(&u);
        let ar = int(&a);
        u = &ar * (&ar - Rational::one()) * &u - (&ar - Rational::one());
        digits.push(a);
        if u.is_zero() {
            return (digits, true);
        }
    }
    (digits, false)
}

/// Classical Engel digits: `q = ⌈1/u⌉`, `u ↦ qu − 1`.
pub fn engel_classical(x: &Rational, depth: usize) -> (Vec<BigUint>, bool) {
    let mut u = x.clone();
    let mut digits = Vec::new();
    while digits.len() < depth {
        let a = ceil_inverse(&u);
        u = int(&a) * &u - Rational::one();
        digits.push(a);
        if u.is_zero() {
            return (digits, true);
        }
    }
    (digits, false)
}

/// Greedy Egyptian fractions (Fibonacci–Sylvester): `s = ⌈1/u⌉`, `u ↦ u − 1/s`.
pub fn sylvester_classical(x: &Rational, depth: usize) -> (Vec<BigUint>, bool) {
    let mut u = x.clone();
    let mut digits = Vec::new();
    while digits.len() < depth {
        let s = ceil_inverse(&u);
        u -= int(&s).recip();
        digits.push(s);
        if u.is_zero() {
            return (digits, true);
        }
    }
    (digits, false)
}

/// Pierce expansion `x = 1/q₁ − 1/(q₁q₂) + …`: `q = ⌊1/u⌋`, `u ↦ 1 − qu`.
/// Every rational terminates.
pub fn pierce_classical(x: &Rational) -> Vec<BigUint> {
    let mut u = x.clone();
    let mut digits = Vec::new();
    while !u.is_zero() {
        let q = floor_inverse(&u);
        u = Rational::one() - int(&q) * &u;
        digits.push(q);
    }
    digits
}

/// Positive Perron digits predicted by a classical algorithm, `depth` long
/// or shorter when the expansion terminated (then the terminating digit and
/// one minimal digit are included).
pub fn classical_positive_digits(name: &str, x: &Rational, depth: usize) -> Vec<BigUint> {
    let (mut digits, terminated) = match name {
        "luroth" => luroth_classical(x, depth),
        "engel" => engel_classical(x, depth),
        "sylvester" => sylvester_classical(x, depth),
        other => panic!("no positive oracle for {other}"),
    };
    if terminated {
        let keep = (digits.len() + 1).min(depth);
        close_with_minimal_tail(name, &mut digits, keep);
    }
    digits
}

/// The odd-length Pierce expansion of `x`, shifted to Perron digits `qᵢ + 1`.
pub fn pierce_odd_witness(x: &Rational) -> Vec<BigUint> {
    let mut q = pierce_classical(x);
    if q.len() % 2 == 0 {
        // 1/(⋯q) = 1/(⋯(q−1)) − 1/(⋯(q−1)q)
        let last = q.pop().unwrap();
        q.push(&last - 1u32);
        q.push(last);
    }
    q.into_iter().map(|d| d + 1u32).collect()
}

pub fn to_u64(d: &BigUint) -> u64 {
    d.to_u64().unwrap()
}

pub fn abs(x: Rational) -> Rational {
    x.abs()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
