//! Unitary groups of skew-hermitian forms over finite local rings with involution.
//!
//! The crate builds rings `A = GR(p,k,d)[t; σ]/(t² − b)` with the involution
//! `t ↦ −t`, works with skew-hermitian forms over them, constructs symplectic
//! bases and unitary matrices explicitly, and checks closed-form group orders
//! against brute-force enumeration.

pub mod cli;
pub mod galois;
pub mod linalg;
pub mod oracle;
pub mod orders;
pub mod ring;
pub mod sample;
pub mod symplectic;

pub(crate) mod decimal;
