//! Exact additive-combinatorics quantities over prime fields and the rationals.
//!
//! Everything here is pure computation on immutable values and builds without
//! `std`; the companion `sumprod` crate adds parallel sweeps, file formats and
//! the command-line front end.
//!
//! ## Modules
//!
//! - [`field`]: prime-field arithmetic, primitive roots, divisors
//! - [`sets`]: residue sets, representation functions, convolutions, `R[A]`, `Q[A]`
//! - [`energy`]: `E+`, `E×`, `T_k`, `E_k` with brute-force oracles
//! - [`fourier`]: direct DFT over `Z/pZ` and spectral cross-checks
//! - [`subgroup`]: multiplicative subgroups and invariant sets
//! - [`incidence`]: point-plane incidences in `F_p^3`
//! - [`rational`]: exact rational sets and the four-variable expander
//! - [`bounds`]: certified rational enclosures for powers and logarithms
//! - [`harness`]: the theorem-check registry and deterministic instance families

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod energy;
mod error;
pub mod field;
pub mod fourier;
pub mod harness;
pub mod incidence;
pub mod rational;
pub mod sets;
pub mod subgroup;

pub use error::{Error, Result};

/// Arbitrary-precision nonnegative count (energies, solution counts).
pub type BigCount = num_bigint::BigUint;
