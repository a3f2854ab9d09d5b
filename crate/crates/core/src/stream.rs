//! Infinite digit sequences described by a finite prefix and a tail rule.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::{
    geometry::{cylinder, Interval, Position},
    system::Template,
    Error, PrefixBase, Rational, Representation, Result,
};

/// Digits produced after the prefix, indexed from 0 at the first tail position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Constant(BigUint),
    Periodic(Vec<BigUint>),
    /// `r + 1 + offset` at every position.
    MinimalOffset(BigUint),
    /// Runs out after the listed digits.
    Finite(Vec<BigUint>),
}

impl Generator {
    fn digit(&self, index: usize, minimum: &BigUint) -> Option<BigUint> {
        match self {
            Generator::Constant(d) => Some(d.clone()),
            Generator::Periodic(period) => Some(period[index % period.len()].clone()),
            Generator::MinimalOffset(j) => Some(minimum + j),
            Generator::Finite(list) => list.get(index).cloned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Every later digit equals `r + 1`.
    Minimal,
    Generator(Generator),
    /// Nothing is known beyond the prefix.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitStream {
    prefix: PrefixBase,
    tail: Tail,
}

impl DigitStream {
    pub fn new(prefix: PrefixBase, tail: Tail) -> Self {
        DigitStream { prefix, tail }
    }

    pub fn minimal(prefix: PrefixBase) -> Self {
        DigitStream::new(prefix, Tail::Minimal)
    }

    pub fn periodic(prefix: PrefixBase, period: Vec<BigUint>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        DigitStream::new(prefix, Tail::Generator(Generator::Periodic(period)))
    }

    pub fn prefix(&self) -> &PrefixBase {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// First `depth` digits as a validated prefix.
    pub fn take(&self, depth: usize) -> Result<PrefixBase> {
        if depth <= self.prefix.rank() {
            return Ok(self.prefix.truncated(depth));
        }
        let mut base = self.prefix.clone();
        self.extend(&mut base, depth)?;
        Ok(base)
    }

    /// Continues `base`, which must be a prefix of this stream, up to `depth` digits.
    pub fn extend(&self, base: &mut PrefixBase, depth: usize) -> Result<()> {
        while base.rank() < depth {
            let position = base.rank() + 1;
            let digit = self.digit_after(base)?;
            base.push(digit).map_err(|e| match e {
                Error::InvalidDigit { digit, minimum, .. } => Error::InvalidDigit {
                    index: position,
                    digit,
                    minimum,
                },
                other => other,
            })?;
        }
        Ok(())
    }

    fn digit_after(&self, base: &PrefixBase) -> Result<BigUint> {
        let rank = base.rank();
        if rank < self.prefix.rank() {
            return Ok(self.prefix.digits()[rank].clone());
        }
        let index = rank - self.prefix.rank();
        let minimum = base.min_next_digit();
        match &self.tail {
            Tail::Minimal => Ok(minimum),
            Tail::Generator(g) => g
                .digit(index, &minimum)
                .ok_or(Error::GeneratorExhausted { index: rank + 1 }),
            Tail::Unknown => Err(Error::UnknownDigits { available: rank }),
        }
    }

    /// Tail as a repeating block, together with the prefix it repeats after,
    /// when the rule makes the remainder dynamics periodic: digits repeat and
    /// `rₙ` depends only on the last digit.
    pub fn periodic_form(&self) -> Option<(PrefixBase, Vec<BigUint>)> {
        let offset = match &self.tail {
            Tail::Generator(Generator::Constant(d)) => {
                return Some((self.prefix.clone(), alloc::vec![d.clone()]))
            }
            Tail::Generator(Generator::Periodic(v)) if !v.is_empty() => {
                return Some((self.prefix.clone(), v.clone()))
            }
            Tail::Minimal => BigUint::from(0u32),
            Tail::Generator(Generator::MinimalOffset(j)) => j.clone(),
            _ => return None,
        };
        let system = self.prefix.system();
        let target = (self.prefix.rank() + 1).max(system.memoryless_from() + 1);
        let start = self.take(target).ok()?;
        let block = match system.template() {
            Template::Constant(r) => alloc::vec![r + 1u32 + offset],
            // r = c − 1 makes the minimal digit repeat the previous one.
            Template::LastDigitMinusOne if offset == BigUint::from(0u32) => {
                alloc::vec![start.min_next_digit()]
            }
            _ => return None,
        };
        Some((start, block))
    }

    /// The represented number, when it is an exact rational computable from the
    /// stream description.
    pub fn exact_value(&self, kind: Representation) -> Option<Rational> {
        if kind == Representation::Positive && self.tail == Tail::Minimal {
            return Some(cylinder(&self.prefix, kind).sup);
        }
        let (mut start, block) = self.periodic_form()?;
        let system = self.prefix.system().clone();
        // Skip whole periods until the rule no longer consults its table.
        let stream = DigitStream::periodic(start.clone(), block.clone());
        loop {
            let next = start.rank() + block.len();
            stream.extend(&mut start, next).ok()?;
            if start.rank() > system.memoryless_from() {
                break;
            }
        }
        let mut end = start.clone();
        stream.extend(&mut end, start.rank() + block.len()).ok()?;
        // Both positions share the same remainder t: solve p₁(t) = p₂(t).
        let p1 = Position::of(&start, kind);
        let p2 = Position::of(&end, kind);
        let signed = |p: &Position| if p.negated { -p.scale.clone() } else { p.scale.clone() };
        let t = (&p2.offset - &p1.offset) / (signed(&p1) - signed(&p2));
        Some(p1.value_at(&t))
    }

    /// Interval known to contain the represented number, from the rank-`depth`
    /// cylinder (or the exact value when available).
    pub fn enclosure(&self, kind: Representation, depth: usize) -> Result<Interval> {
        if let Some(x) = self.exact_value(kind) {
            return Ok(Interval::point(x));
        }
        Ok(cylinder(&self.take(depth)?, kind).interval())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::shared_builtin;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn base(name: &str, digits: &[u32]) -> PrefixBase {
        PrefixBase::new(shared_builtin(name).unwrap(), digits.iter().copied()).unwrap()
    }

    #[test]
    fn minimal_tail_extends_with_smallest_digits() {
        let s = DigitStream::minimal(base("sylvester", &[2]));
        let b = s.take(3).unwrap();
        assert_eq!(b.digits(), &[2u32.into(), 3u32.into(), 7u32.into()]);
    }

    #[test]
    fn finite_generator_runs_out() {
        let s = DigitStream::new(
            base("luroth", &[3]),
            Tail::Generator(Generator::Finite(alloc::vec![4u32.into()])),
        );
        assert!(s.take(2).is_ok());
        assert_eq!(s.take(3), Err(Error::GeneratorExhausted { index: 3 }));
        let u = DigitStream::new(base("luroth", &[3]), Tail::Unknown);
        assert_eq!(u.take(2), Err(Error::UnknownDigits { available: 1 }));
    }

    #[test]
    fn generator_digits_are_validated() {
        let s = DigitStream::new(
            base("pierce", &[3]),
            Tail::Generator(Generator::Constant(4u32.into())),
        );
        assert!(s.take(2).is_ok());
        assert!(matches!(s.take(3), Err(Error::InvalidDigit { index: 3, .. })));
    }

    #[test]
    fn periodic_values_are_exact() {
        // 3,2,2 repeating is the alternating Lüroth expansion of 2/5.
        let s = DigitStream::periodic(
            PrefixBase::empty(shared_builtin("alt-luroth").unwrap()),
            alloc::vec![3u32.into(), 2u32.into(), 2u32.into()],
        );
        assert_eq!(s.exact_value(Representation::Alternating), Some(q(2, 5)));
        // Lüroth 3,2,2,… is 1/2 both as a minimal tail and as a constant tail.
        let m = DigitStream::minimal(base("luroth", &[3]));
        assert_eq!(m.exact_value(Representation::Positive), Some(q(1, 2)));
        let c = DigitStream::new(base("luroth", &[3]), Tail::Generator(Generator::Constant(2u32.into())));
        assert_eq!(c.exact_value(Representation::Positive), Some(q(1, 2)));
        // Engel 3,3,3,… = Σ 3⁻ⁿ = 1/2.
        let e = DigitStream::new(PrefixBase::empty(shared_builtin("engel").unwrap()), Tail::Generator(Generator::Constant(3u32.into())));
        assert_eq!(e.exact_value(Representation::Positive), Some(q(1, 2)));
        // Pierce minimal tails grow, so no closed form.
        let p = DigitStream::minimal(base("pierce", &[3]));
        assert_eq!(p.exact_value(Representation::Alternating), None);
    }
}
