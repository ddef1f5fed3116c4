use std::collections::HashMap;

use serde::Serialize;

use super::{shift, BlockMap};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::LatticeSubgroup;
use crate::perm::{Parity, Perm};
use crate::sft::{fixed_points, PeriodicConfig, SftSpec};

/// The restriction of a map to the finite set Fix(L).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationOnFix {
    #[serde(serialize_with = "ser_lattice")]
    pub lattice: LatticeSubgroup<i64>,
    #[serde(skip)]
    pub points: Vec<PeriodicConfig>,
    pub perm: Perm,
}

fn ser_lattice<S: serde::Serializer>(l: &LatticeSubgroup<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&l.to_string())
}

impl PermutationOnFix {
    /// `self ∘ other` on the same enumeration of Fix(L).
    pub fn compose(&self, other: &PermutationOnFix) -> Result<PermutationOnFix> {
        if self.lattice != other.lattice || self.points != other.points {
            return Err(Error::IncompatibleLattice(other.lattice.to_string()));
        }
        Ok(PermutationOnFix { perm: self.perm.compose(&other.perm), ..self.clone() })
    }

    pub fn parity(&self) -> Parity {
        self.perm.parity()
    }
}

/// α ↦ α|Fix(L), as an explicit permutation of the enumerated points.
pub fn periodic_action(phi: &BlockMap, lattice: &LatticeSubgroup<i64>, spec: &SftSpec, budget: &mut Budget) -> Result<PermutationOnFix> {
    let points = fixed_points(spec, lattice, budget)?;
    let index: HashMap<&PeriodicConfig, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut images = Vec::with_capacity(points.len());
    for p in &points {
        budget.spend(phi.neighborhood().len() as u64 * p.values().len() as u64)?;
        let q = phi.apply_periodic(p)?;
        images.push(*index.get(&q).ok_or(Error::NotAPermutation)?);
    }
    let perm = Perm::from_images(images)?;
    Ok(PermutationOnFix { lattice: lattice.clone(), points, perm })
}

pub fn permutation_parity(p: &PermutationOnFix) -> Parity {
    p.parity()
}

/// True iff σ_v acts on Fix(L) as an odd permutation, which rules out any
/// L-commuting square root of σ_v.
pub fn square_root_obstruction(spec: &SftSpec, v: &[i64], lattice: &LatticeSubgroup<i64>, budget: &mut Budget) -> Result<bool> {
    if v.iter().all(|&c| c == 0) {
        return Ok(false);
    }
    let s = shift(spec.dim(), spec.alphabet_size(), v)?;
    Ok(periodic_action(&s, lattice, spec, budget)?.parity() == Parity::Odd)
}
