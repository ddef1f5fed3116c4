//! Small numeric helpers shared by the counting and entropy code.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::Real;

/// log₂ of a positive big integer; exact for powers of two.
pub fn log2_big<F: Real>(x: &BigUint) -> F {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if x.trailing_zeros() == Some(bits - 1) {
        return F::from_f64_lossy((bits - 1) as f64);
    }
    if bits <= 64 {
        return F::from_f64_lossy(x.to_u64().expect("fits").to_f64().expect("finite").log2());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    F::from_f64_lossy((top as f64).log2() + shift as f64)
}

/// Serializes a big integer as a decimal string.
pub fn ser_biguint<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
