//! Integer maps `n ↦ g(n)` over `n ≥ 1` whose limits are read off their form.

use alloc::{boxed::Box, vec::Vec};
use core::fmt;

use num_integer::Integer;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexMap {
    Constant(u64),
    /// `slope·n + offset`.
    Affine { slope: u64, offset: i64 },
    /// `offset + (n mod period)`.
    Cyclic { offset: u64, period: u64 },
    /// Odd `n` use the first map at `(n+1)/2`, even `n` the second at `n/2`.
    Interleave(Box<IndexMap>, Box<IndexMap>),
}

/// The indices `n ≥ from` with `n mod modulus` in `residues`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPattern {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub from: u64,
}

impl IndexPattern {
    pub fn all() -> Self {
        IndexPattern::all_from(1)
    }

    pub fn all_from(from: u64) -> Self {
        IndexPattern {
            modulus: 1,
            residues: alloc::vec![0],
            from: from.max(1),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.from && self.residues.contains(&(n % self.modulus))
    }

    pub fn starting_at(mut self, from: u64) -> Self {
        self.from = self.from.max(from);
        self
    }

    /// Indices in either pattern, from the later of the two starts.
    pub fn union(&self, other: &Self) -> Self {
        let modulus = self.modulus.lcm(&other.modulus);
        let residues = (0..modulus)
            .filter(|r| self.residues.contains(&(r % self.modulus)) || other.residues.contains(&(r % other.modulus)))
            .collect();
        IndexPattern {
            modulus,
            residues,
            from: self.from.max(other.from),
        }
    }

    /// Image under `i ↦ 2i − 1`.
    pub fn on_odd(&self) -> Self {
        let m = 2 * self.modulus;
        IndexPattern {
            modulus: m,
            residues: self.residues.iter().map(|r| (2 * r + m - 1) % m).collect(),
            from: 2 * self.from - 1,
        }
    }

    /// Image under `i ↦ 2i`.
    pub fn on_even(&self) -> Self {
        let m = 2 * self.modulus;
        IndexPattern {
            modulus: m,
            residues: self.residues.iter().map(|r| (2 * r) % m).collect(),
            from: 2 * self.from,
        }
    }
}

impl fmt::Display for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 1 {
            return write!(f, "n >= {}", self.from);
        }
        write!(f, "n >= {}, n mod {} in {{", self.from, self.modulus)?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Infinite,
    /// Values taken on infinitely many indices, each with its index set.
    Recurring(Vec<(u64, IndexPattern)>),
}

impl IndexMap {
    pub fn validate(&self) -> Result<()> {
        match self {
            IndexMap::Constant(0) => Err(Error::InvalidIndexMap("values must be positive".into())),
            IndexMap::Constant(_) => Ok(()),
            IndexMap::Affine { slope, offset } => {
                if i128::from(*slope) + i128::from(*offset) < 1 {
                    Err(Error::InvalidIndexMap("value at n = 1 must be positive".into()))
                } else {
                    Ok(())
                }
            }
            IndexMap::Cyclic { offset, period } => {
                if *period == 0 || *offset == 0 {
                    Err(Error::InvalidIndexMap("offset and period must be positive".into()))
                } else {
                    Ok(())
                }
            }
            IndexMap::Interleave(a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    pub fn eval(&self, n: u64) -> u64 {
        assert!(n >= 1, "indices start at 1");
        match self {
            IndexMap::Constant(c) => *c,
            IndexMap::Affine { slope, offset } => {
                let v = i128::from(*slope) * i128::from(n) + i128::from(*offset);
                u64::try_from(v).expect("validated affine map stays positive")
            }
            IndexMap::Cyclic { offset, period } => offset + n % period,
            IndexMap::Interleave(a, b) => {
                if n % 2 == 1 {
                    a.eval((n + 1) / 2)
                } else {
                    b.eval(n / 2)
                }
            }
        }
    }

    pub fn limit(&self) -> Limit {
        match self {
            IndexMap::Constant(c) => Limit::Recurring(alloc::vec![(*c, IndexPattern::all())]),
            IndexMap::Affine { slope: 0, offset } => {
                Limit::Recurring(alloc::vec![(*offset as u64, IndexPattern::all())])
            }
            IndexMap::Affine { .. } => Limit::Infinite,
            IndexMap::Cyclic { offset, period } => Limit::Recurring(
                (0..*period)
                    .map(|j| {
                        let pattern = IndexPattern {
                            modulus: *period,
                            residues: alloc::vec![j],
                            from: 1,
                        };
                        (offset + j, pattern)
                    })
                    .collect(),
            ),
            IndexMap::Interleave(a, b) => {
                let mut entries = Vec::new();
                if let Limit::Recurring(v) = a.limit() {
                    entries.extend(v.into_iter().map(|(x, p)| (x, p.on_odd())));
                }
                if let Limit::Recurring(v) = b.limit() {
                    entries.extend(v.into_iter().map(|(x, p)| (x, p.on_even())));
                }
                if entries.is_empty() {
                    Limit::Infinite
                } else {
                    Limit::Recurring(entries)
                }
            }
        }
    }

    pub fn min_value(&self) -> u64 {
        match self {
            IndexMap::Constant(c) => *c,
            IndexMap::Affine { .. } => self.eval(1),
            IndexMap::Cyclic { offset, .. } => *offset,
            IndexMap::Interleave(a, b) => a.min_value().min(b.min_value()),
        }
    }

    /// `None` when unbounded.
    pub fn max_value(&self) -> Option<u64> {
        match self {
            IndexMap::Constant(c) => Some(*c),
            IndexMap::Affine { slope: 0, offset } => Some(*offset as u64),
            IndexMap::Affine { .. } => None,
            IndexMap::Cyclic { offset, period } => Some(offset + period - 1),
            IndexMap::Interleave(a, b) => Some(a.max_value()?.max(b.max_value()?)),
        }
    }

    pub fn takes_value(&self, v: u64) -> bool {
        match self {
            IndexMap::Constant(c) => *c == v,
            IndexMap::Affine { slope: 0, offset } => i128::from(*offset) == i128::from(v),
            IndexMap::Affine { slope, offset } => {
                let d = i128::from(v) - i128::from(*offset);
                d >= i128::from(*slope) && d % i128::from(*slope) == 0
            }
            IndexMap::Cyclic { offset, period } => *offset <= v && v < offset + period,
            IndexMap::Interleave(a, b) => a.takes_value(v) || b.takes_value(v),
        }
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexMap::Constant(c) => write!(f, "{c}"),
            IndexMap::Affine { slope, offset } => match offset.signum() {
                0 => write!(f, "{slope}n"),
                1 => write!(f, "{slope}n+{offset}"),
                _ => write!(f, "{slope}n{offset}"),
            },
            IndexMap::Cyclic { offset, period } => write!(f, "{offset}+(n mod {period})"),
            IndexMap::Interleave(a, b) => write!(f, "interleave({a}, {b})"),
        }
    }
}
