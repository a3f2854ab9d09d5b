//! Exact arithmetic for positive and alternating Perron expansions.
//!
//! A digit rule (a sequence of functions `φ₀, φ₁(c₁), φ₂(c₁, c₂), …`) fixes two
//! expansions of numbers in `(0, 1]`:
//!
//! * the *positive* expansion, `x = Σ r₀⋯rₙ / ((p₁−1)p₁⋯(pₙ−1)pₙ·pₙ₊₁)`, whose
//!   cylinders are half-open intervals `(a, b]`;
//! * the *alternating* expansion, `x = Σ (−1)ⁿ r₀⋯rₙ / ((q₁−1)q₁⋯(qₙ−1)qₙ·(qₙ₊₁−1))`,
//!   whose cylinders are open intervals with a countable exceptional set removed.
//!
//! Everything here is computed with arbitrary-precision rationals. The crate is
//! `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod alternating;
pub mod convergence;
mod error;
pub mod geometry;
pub mod positive;
pub mod stream;
pub mod system;

pub use error::Error;
pub use geometry::{CylinderGeometry, Interval, Representation};
pub use stream::{DigitStream, Generator, Tail};
pub use system::{builtin, validate_prefix, DigitRule, PrefixBase, Template};

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::BigRational;

pub type Result<T, E = Error> = core::result::Result<T, E>;
