//! Modular data, fusion rings, and modular invariants for rational CFTs.
//!
//! The crate builds unitary modular data (S and T matrices) for affine
//! SU(n) at level k, various level-one algebras, and Z_n anyon models;
//! computes Verlinde fusion rings on top of them; constructs and verifies
//! modular invariant matrices; and checks the product / branching /
//! nimrep identities that relate them.
//!
//! Everything numeric runs at configurable decimal precision
//! (default 50 digits, MPFR-backed); quantities that must be integers or
//! rationals are recovered by tolerance-checked rounding or continued
//! fraction reconstruction and re-verified exactly.

pub mod error;
pub mod exact;
pub mod modular;
pub mod fusion;
pub mod invariants;
pub mod branching;
pub mod nimrep;
pub mod json;
pub mod report;

pub use error::{Error, Result};
pub use exact::precision::PrecisionConfig;
