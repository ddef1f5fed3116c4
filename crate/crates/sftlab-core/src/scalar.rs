//! Scalar traits used by the generic parts of the crate.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Integer type usable as lattice coordinates.
pub trait LatticeInt:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl LatticeInt for i32 {}
impl LatticeInt for i64 {}
impl LatticeInt for i128 {}
impl LatticeInt for num_bigint::BigInt {}

/// Binary floating point type used for normalized entropies and log-domain sums.
pub trait Real:
    num_traits::Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts")
    }
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize converts")
    }
}

impl Real for f32 {}
impl Real for f64 {}
