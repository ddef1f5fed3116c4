//! Exact computations on shifts of finite type over Z^d.
//!
//! Lattices are generic over [`LatticeInt`]; floating-point results are
//! generic over [`Real`]. The aliases below fix the common choices.

pub mod budget;
pub mod error;
pub mod gates;
pub mod homoclinics;
pub mod lattice;
pub mod localq;
pub mod morphisms;
pub mod numeric;
pub mod perm;
pub mod scalar;
pub mod sft;

pub use budget::Budget;
pub use error::{Error, Result};
pub use scalar::{LatticeInt, Real};

/// Lattice subgroups with machine-word entries.
pub type Lattice = lattice::LatticeSubgroup<i64>;
/// Lattice subgroups with arbitrary-precision entries.
pub type BigLattice = lattice::LatticeSubgroup<num_bigint::BigInt>;
pub type EntropyEstimate = sft::EntropyEstimate<f64>;
