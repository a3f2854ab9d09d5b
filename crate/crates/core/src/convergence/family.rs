//! Symbolic sequence families `(xₙ)`.

use alloc::{boxed::Box, format, sync::Arc, vec::Vec};

use num_bigint::BigUint;
use num_traits::{One, Signed};

use super::IndexMap;
use crate::{DigitRule, DigitStream, Error, Interval, PrefixBase, Rational, Representation, Result, Tail};

/// How the digit at the disagreement position is changed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deviation {
    Increase(u64),
    Decrease(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExplicitElement {
    Value(Rational),
    Digits(DigitStream),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceFamily {
    /// `xₙ` has first digit `g(n)` followed by `tail`.
    FirstDigit { g: IndexMap, tail: Tail },
    /// `xₙ = base, g(n), tail…` for `n ≥ n₀ = early.len() + 1`; the first
    /// `n₀ − 1` elements are listed in `early`.
    FixedPrefixThenDigit {
        base: PrefixBase,
        g: IndexMap,
        tail: Tail,
        early: Vec<DigitStream>,
    },
    /// `xₙ` copies the target's digits before position `kₙ`, changes the
    /// digit at `kₙ` by `deviation`, then follows `tail`.
    DisagreeAt {
        k: IndexMap,
        deviation: Deviation,
        tail: Tail,
    },
    /// Odd `n` come from the first family, even `n` from the second.
    Interleave(Box<SequenceFamily>, Box<SequenceFamily>),
    /// A finite list; gives evidence but no verdict.
    Explicit(Vec<ExplicitElement>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Stream(DigitStream),
    Value(Rational),
}

impl Element {
    pub fn exact(&self, kind: Representation) -> Option<Rational> {
        match self {
            Element::Stream(s) => s.exact_value(kind),
            Element::Value(x) => Some(x.clone()),
        }
    }

    pub fn enclosure(&self, kind: Representation, depth: usize) -> Result<Interval> {
        match self {
            Element::Stream(s) => s.enclosure(kind, depth),
            Element::Value(x) => Ok(Interval::point(x.clone())),
        }
    }

    /// Rank where the element's structure is fixed; enclosures start deeper.
    pub(crate) fn structural_rank(&self) -> usize {
        match self {
            Element::Stream(s) => s.prefix().rank(),
            Element::Value(_) => 0,
        }
    }
}

/// Single-parameter piece of a family: every element is determined by one
/// integer `v = map(n)`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Leaf<'a> {
    Prefixed {
        base: &'a PrefixBase,
        g: &'a IndexMap,
        tail: &'a Tail,
        early: &'a [DigitStream],
    },
    Deviate {
        k: &'a IndexMap,
        deviation: Deviation,
        tail: &'a Tail,
    },
}

impl<'a> Leaf<'a> {
    pub fn map(&self) -> &'a IndexMap {
        match self {
            Leaf::Prefixed { g, .. } => g,
            Leaf::Deviate { k, .. } => k,
        }
    }

    pub fn n0(&self) -> u64 {
        match self {
            Leaf::Prefixed { early, .. } => early.len() as u64 + 1,
            Leaf::Deviate { .. } => 1,
        }
    }

    /// Element for parameter value `v`.
    pub fn element_for(&self, v: u64, reference: Option<&DigitStream>) -> Result<DigitStream> {
        match self {
            Leaf::Prefixed { base, tail, .. } => Ok(DigitStream::new(base.with_digit(v)?, (*tail).clone())),
            Leaf::Deviate { deviation, tail, .. } => {
                let reference = reference.ok_or_else(|| {
                    Error::UnsupportedFamily("disagreement families need a digit stream target".into())
                })?;
                let k = usize::try_from(v).expect("index fits");
                let digits = reference.take(k)?;
                let old = &digits.digits()[k - 1];
                let new = match deviation {
                    Deviation::Increase(j) => old + *j,
                    Deviation::Decrease(j) => {
                        let j = BigUint::from(*j);
                        if &j >= old {
                            return Err(Error::InvalidDigit {
                                index: k,
                                digit: BigUint::from(0u32),
                                minimum: digits.truncated(k - 1).min_next_digit(),
                            });
                        }
                        old - j
                    }
                };
                Ok(DigitStream::new(digits.with_last_digit(new)?, (*tail).clone()))
            }
        }
    }

    pub fn element(&self, n: u64, reference: Option<&DigitStream>) -> Result<DigitStream> {
        if let Leaf::Prefixed { early, .. } = self {
            if n < self.n0() {
                return Ok(early[(n - 1) as usize].clone());
            }
        }
        self.element_for(self.map().eval(n), reference)
    }
}

/// Tree view of a family with one-parameter leaves.
#[derive(Clone, Debug)]
pub(crate) enum Shape<'a> {
    Leaf(Leaf<'a>),
    Interleave(Box<Shape<'a>>, Box<Shape<'a>>),
    Explicit(&'a [ExplicitElement]),
}

impl SequenceFamily {
    pub(crate) fn shape<'a>(&'a self, first_digit_base: &'a PrefixBase) -> Result<Shape<'a>> {
        Ok(match self {
            SequenceFamily::FirstDigit { g, tail } => {
                g.validate()?;
                Shape::Leaf(Leaf::Prefixed {
                    base: first_digit_base,
                    g,
                    tail,
                    early: &[],
                })
            }
            SequenceFamily::FixedPrefixThenDigit { base, g, tail, early } => {
                g.validate()?;
                Shape::Leaf(Leaf::Prefixed {
                    base,
                    g,
                    tail,
                    early,
                })
            }
            SequenceFamily::DisagreeAt { k, deviation, tail } => {
                k.validate()?;
                if matches!(deviation, Deviation::Increase(0) | Deviation::Decrease(0)) {
                    return Err(Error::InvalidIndexMap("deviation must be nonzero".into()));
                }
                Shape::Leaf(Leaf::Deviate {
                    k,
                    deviation: *deviation,
                    tail,
                })
            }
            SequenceFamily::Interleave(a, b) => {
                let (a, b) = (a.shape(first_digit_base)?, b.shape(first_digit_base)?);
                if matches!(a, Shape::Explicit(_)) || matches!(b, Shape::Explicit(_)) {
                    return Err(Error::UnsupportedFamily("finite lists cannot be interleaved".into()));
                }
                Shape::Interleave(Box::new(a), Box::new(b))
            }
            SequenceFamily::Explicit(list) => Shape::Explicit(list),
        })
    }

    /// Element `n` (1-based). `reference` is the target's digit stream, used by
    /// disagreement families.
    pub fn element(&self, system: &Arc<DigitRule>, reference: Option<&DigitStream>, n: u64) -> Result<Element> {
        let empty = PrefixBase::empty(system.clone());
        self.shape(&empty)?.element(n, reference)
    }

    /// Checks that every digit string uses `system`.
    pub(crate) fn check_system(&self, system: &Arc<DigitRule>) -> Result<()> {
        let same = |b: &PrefixBase| Arc::ptr_eq(b.system(), system) || **b.system() == **system;
        let ok = match self {
            SequenceFamily::FirstDigit { .. } | SequenceFamily::DisagreeAt { .. } => true,
            SequenceFamily::FixedPrefixThenDigit { base, early, .. } => {
                same(base) && early.iter().all(|s| same(s.prefix()))
            }
            SequenceFamily::Interleave(a, b) => {
                a.check_system(system)?;
                b.check_system(system)?;
                true
            }
            SequenceFamily::Explicit(list) => list.iter().all(|e| match e {
                ExplicitElement::Digits(s) => same(s.prefix()),
                ExplicitElement::Value(x) => x.is_positive() && x <= &Rational::one(),
            }),
        };
        if ok {
            Ok(())
        } else if let SequenceFamily::Explicit(list) = self {
            let bad = list
                .iter()
                .find_map(|e| match e {
                    ExplicitElement::Value(x) if !x.is_positive() || x > &Rational::one() => Some(x.clone()),
                    _ => None,
                });
            match bad {
                Some(value) => Err(Error::OutOfDomain { value, domain: "(0, 1]" }),
                None => Err(Error::SystemMismatch),
            }
        } else {
            Err(Error::SystemMismatch)
        }
    }
}

impl<'a> Shape<'a> {
    pub fn element(&self, n: u64, reference: Option<&DigitStream>) -> Result<Element> {
        let (leaf, i) = self.locate(n)?;
        match leaf {
            Located::Leaf(leaf) => Ok(Element::Stream(leaf.element(i, reference)?)),
            Located::Explicit(e) => Ok(match e {
                ExplicitElement::Value(x) => Element::Value(x.clone()),
                ExplicitElement::Digits(s) => Element::Stream(s.clone()),
            }),
        }
    }

    /// The leaf that produces element `n`, with the leaf-local index.
    pub fn locate(&self, n: u64) -> Result<(Located<'a>, u64)> {
        match self {
            Shape::Leaf(leaf) => Ok((Located::Leaf(*leaf), n)),
            Shape::Interleave(a, b) => {
                if n % 2 == 1 {
                    a.locate((n + 1) / 2)
                } else {
                    b.locate(n / 2)
                }
            }
            Shape::Explicit(list) => list
                .get((n as usize).wrapping_sub(1))
                .map(|e| (Located::Explicit(e), n))
                .ok_or_else(|| Error::UnsupportedFamily(format!("the list has no element {n}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Located<'a> {
    Leaf(Leaf<'a>),
    Explicit(&'a ExplicitElement),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::shared_builtin;

    #[test]
    fn elements_follow_the_template() {
        let sys = shared_builtin("luroth").unwrap();
        let base = PrefixBase::new(sys.clone(), [2u32]).unwrap();
        let fam = SequenceFamily::FixedPrefixThenDigit {
            base,
            g: IndexMap::Affine { slope: 1, offset: 2 },
            tail: Tail::Minimal,
            early: Vec::new(),
        };
        let x3 = fam.element(&sys, None, 3).unwrap();
        assert_eq!(
            x3.exact(Representation::Positive),
            Some(Rational::new(1.into(), 2.into()) + Rational::new(1.into(), 8.into()))
        );

        let reference = DigitStream::new(
            PrefixBase::empty(sys.clone()),
            Tail::Generator(crate::Generator::Constant(3u32.into())),
        );
        let dis = SequenceFamily::DisagreeAt {
            k: IndexMap::Affine { slope: 1, offset: 0 },
            deviation: Deviation::Increase(1),
            tail: Tail::Minimal,
        };
        let Element::Stream(s) = dis.element(&sys, Some(&reference), 3).unwrap() else {
            panic!("stream expected");
        };
        assert_eq!(s.prefix().digits(), &[3u32.into(), 3u32.into(), 4u32.into()]);
    }

    #[test]
    fn interleave_routes_indices() {
        let sys = shared_builtin("luroth").unwrap();
        let fam = SequenceFamily::Interleave(
            Box::new(SequenceFamily::FirstDigit {
                g: IndexMap::Constant(5),
                tail: Tail::Minimal,
            }),
            Box::new(SequenceFamily::FirstDigit {
                g: IndexMap::Constant(7),
                tail: Tail::Minimal,
            }),
        );
        let first = |n| match fam.element(&sys, None, n).unwrap() {
            Element::Stream(s) => s.prefix().digits()[0].clone(),
            Element::Value(_) => unreachable!(),
        };
        assert_eq!(first(1), 5u32.into());
        assert_eq!(first(4), 7u32.into());
    }
}
