//! Generalized cyclotomic binary sequences of period `2p^n`.
//!
//! The crate builds the two sequence families `s` and `s~` from generalized
//! cyclotomic classes, measures their linear complexity both through
//! `gcd(x^N - 1, S(x))` and through Berlekamp-Massey synthesis, evaluates the
//! generating polynomials at `p^n`-th roots of unity in `GF(2^m)`, and checks
//! the measured values against closed-form predictions.

pub mod analysis;
pub mod bits;
pub mod cli;
pub mod cyclotomy;
pub mod error;
pub mod gf2ext;
pub mod gf2poly;
pub mod ntheory;
pub mod sequence;

pub use bits::Bits;
pub use error::{Error, Result};
pub use gf2poly::{berlekamp_massey, linear_complexity_gcd, Gf2Poly};
pub use ntheory::PrimePowerCtx;
pub use sequence::{generate, BinarySequence, SequenceParams, Variant};
