//! Number-theory kernels for multiple Mertens sums over primes in
//! arithmetic progressions.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs: segmented sieving, prefix sums of `log^k(p)/p`
//! restricted to residue classes, exact Dirichlet characters, integer zeta
//! values and polylogarithms at 1/2, the coefficient sequence `a_k`, the
//! symmetric-polynomial machinery behind the asymptotic expansions, and the
//! exact evaluation of the multiple prime sums themselves.
//!
//! IO, threading, the on-disk prime cache and the command-line front end
//! live in the companion `mapl` crate.

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod arith;
pub mod characters;
pub mod coeffs;
pub mod error;
pub mod mertens;
pub mod multisum;
pub mod primes;
pub mod quad;
pub mod special;
pub mod sum;
pub mod sympoly;

pub use error::{Error, Result};
pub use num_complex::Complex64;
