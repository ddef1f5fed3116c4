//! Finite-support configurations, glider automorphisms and their long-run
//! decomposition, orbit permuters and separating automorphisms.

mod glider;
mod permuter;
mod separate;

pub use glider::{build_glider_system, simulate_decomposition, GliderDecomposition, GliderSystem, TraceRow};
pub use permuter::{homoclinic_permuter, HomoclinicPermuter};
pub use separate::{separating_automorphism, Moved, Separation};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{norm_inf, sub, Point};
use crate::sft::{finite_admissibility, FiniteConfig, SftSpec};

/// x + y for disjoint supports; the result must be a point of X.
pub fn sum_disjoint(spec: &SftSpec, x: &FiniteConfig, y: &FiniteConfig) -> Result<FiniteConfig> {
    if let Some(p) = x.cells().keys().find(|p| y.cells().contains_key(*p)) {
        return Err(Error::OverlappingSupports(p.clone()));
    }
    let z = FiniteConfig::from_cells(x.dim(), x.zero(), x.cells().iter().chain(y.cells()).map(|(p, &s)| (p.clone(), s)));
    finite_admissibility(spec, &z).map_err(Error::Inadmissible)?;
    Ok(z)
}

/// The translate whose lexicographically least support cell is the origin.
pub fn good_position(x: &FiniteConfig) -> Result<FiniteConfig> {
    let min = x.cells().keys().next().ok_or(Error::ZeroConfig)?;
    Ok(x.translate(&min.iter().map(|c| -c).collect::<Vec<_>>()))
}

/// The vector v with σ_v x = y, where (σ_v x)_a = x_{a+v}.
pub fn orbit_equivalent(x: &FiniteConfig, y: &FiniteConfig) -> Option<Point> {
    if x.len() != y.len() || x.dim() != y.dim() {
        return None;
    }
    let (Some(a), Some(b)) = (x.cells().keys().next(), y.cells().keys().next()) else {
        return Some(vec![0; x.dim()]);
    };
    let v = sub(a, b);
    let moved = x.translate(&v.iter().map(|c| -c).collect::<Vec<_>>());
    (moved.cells() == y.cells()).then_some(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumStabReport {
    pub holds: bool,
    /// Every g with g·x = y (translation by g).
    pub matching_shifts: Vec<Point>,
    pub shifts_scanned: usize,
    pub witness: Option<Point>,
}

/// Scans every translation g with (g + supp x) ∩ supp y ≠ ∅ and checks that
/// g·x = y forces g·x₁ = y₁ and g·x₂ = y₂, for x = x₁ + x₂ and y = y₁ + y₂.
/// "Much larger" is taken as r > 3R.
pub fn sumstab_check(x1: &FiniteConfig, x2: &FiniteConfig, y1: &FiniteConfig, y2: &FiniteConfig, big_r: i64, r: i64) -> Result<SumStabReport> {
    let in_ball = |c: &FiniteConfig| c.cells().keys().all(|p| norm_inf(p) <= big_r);
    let in_annulus = |c: &FiniteConfig| c.cells().keys().all(|p| (r..=r + big_r).contains(&norm_inf(p)));
    if !in_ball(x1) || !in_ball(y1) {
        return Err(Error::HypothesesFail("ball".into()));
    }
    if !in_annulus(x2) || !in_annulus(y2) {
        return Err(Error::HypothesesFail("annulus".into()));
    }
    if x1.len() != y1.len() || x1.len() <= x2.len() || x1.len() <= y2.len() {
        return Err(Error::HypothesesFail("cardinality".into()));
    }
    if r <= 3 * big_r {
        return Err(Error::HypothesesFail("separation".into()));
    }
    let join = |a: &FiniteConfig, b: &FiniteConfig| FiniteConfig::from_cells(a.dim(), a.zero(), a.cells().iter().chain(b.cells()).map(|(p, &s)| (p.clone(), s)));
    let x = join(x1, x2);
    let y = join(y1, y2);
    let mut shifts: Vec<Point> = x.cells().keys().flat_map(|a| y.cells().keys().map(move |b| sub(b, a))).collect();
    shifts.sort();
    shifts.dedup();
    let mut matching = Vec::new();
    for g in &shifts {
        if x.translate(g) == y {
            matching.push(g.clone());
            if x1.translate(g) != *y1 || x2.translate(g) != *y2 {
                return Ok(SumStabReport { holds: false, matching_shifts: matching, shifts_scanned: shifts.len(), witness: Some(g.clone()) });
            }
        }
    }
    Ok(SumStabReport { holds: true, matching_shifts: matching, shifts_scanned: shifts.len(), witness: None })
}
