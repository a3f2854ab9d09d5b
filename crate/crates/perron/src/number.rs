//! Rational literals and decimal rendering.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use perron_core::Rational;

use crate::error::CliError;

/// Parses `p/q` or an integer. Decimal literals such as `0.25` or `2.5e-1`
/// are accepted only when `as_exact` is set, and then denote their exact value.
pub fn parse_rational(text: &str, as_exact: bool) -> Result<Rational, CliError> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = parse_int(n, text)?;
        let d: BigInt = parse_int(d, text)?;
        if d.is_zero() {
            return Err(CliError::usage(format!("`{text}` has a zero denominator")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = text.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    match parse_decimal(text) {
        Some(x) if as_exact => Ok(x),
        Some(x) => Err(CliError::usage(format!(
            "`{text}` is a decimal literal; pass --as-exact to read it as {x}"
        ))),
        None => Err(CliError::usage(format!(
            "`{text}` is not a rational literal (expected p/q)"
        ))),
    }
}

fn parse_int(part: &str, whole: &str) -> Result<BigInt, CliError> {
    part.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("`{whole}` is not a rational literal (expected p/q)")))
}

pub fn parse_natural(text: &str) -> Result<BigUint, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("`{text}` is not a nonnegative integer")))
}

/// `[+-]digits[.digits][e[+-]digits]`, with at least one digit in the mantissa.
fn parse_decimal(text: &str) -> Option<Rational> {
    let (negative, rest) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], rest[i + 1..].parse::<i64>().ok()?),
        None => (rest, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let magnitude = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, usize::try_from(scale).ok()?))
    } else {
        Rational::new(digits, num_traits::pow(ten, usize::try_from(-scale).ok()?))
    };
    Some(if negative { -magnitude } else { magnitude })
}

/// `x` rounded to `precision` digits after the point, to nearest with ties to
/// even.
pub fn to_decimal(x: &Rational, precision: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), precision);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = &r * 2u32;
    let round_up = match twice.cmp(scaled.denom()) {
        core::cmp::Ordering::Greater => true,
        core::cmp::Ordering::Equal => q.is_odd(),
        core::cmp::Ordering::Less => false,
    };
    let q = if round_up { q + 1u32 } else { q };
    let sign = if x.is_negative() && !q.is_zero() { "-" } else { "" };
    let (int, frac) = q.div_rem(&scale);
    if precision == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = precision)
}
