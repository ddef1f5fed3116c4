use std::collections::BTreeSet;

use super::{FiniteSet, LatticeSubgroup, Point};
use crate::error::{Error, Result};

/// Nested subgroups H_1 ⊇ H_2 ⊇ … with domains D_1 ⊆ D_2 ⊆ ….
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub subgroups: Vec<LatticeSubgroup<i64>>,
    pub domains: Vec<FiniteSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerViolation {
    /// 0 = subgroups not nested, 1..=4 = the tower conditions.
    pub condition: u8,
    /// Zero-based level at which the violation was found.
    pub level: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TowerReport {
    pub violation: Option<TowerViolation>,
    /// |∂_1 D_m| / |D_m| per level.
    pub folner_ratios: Vec<f64>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// H_n = k^n Z^d with centered boxes C_n = {|v|∞ ≤ (k^n − 1)/2}, n = 1..=m.
pub fn build_centered_tower(k: i64, d: usize, m: usize) -> Result<Tower> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::EvenBase(k));
    }
    let mut subgroups = Vec::with_capacity(m);
    let mut domains = Vec::with_capacity(m);
    let mut kn: i64 = 1;
    for _ in 0..m {
        kn = kn.checked_mul(k).ok_or_else(|| Error::Precondition("tower index overflows i64".into()))?;
        subgroups.push(LatticeSubgroup::scaled(d, kn));
        domains.push(FiniteSet::centered_box(d, (kn - 1) / 2));
    }
    Ok(Tower { subgroups, domains })
}

fn violation(condition: u8, level: usize, detail: String) -> Option<TowerViolation> {
    Some(TowerViolation { condition, level, detail })
}

fn first_violation(t: &Tower) -> Option<TowerViolation> {
    if t.subgroups.len() != t.domains.len() {
        return violation(0, 0, "subgroup and domain counts differ".into());
    }
    for (m, w) in t.subgroups.windows(2).enumerate() {
        if !w[1].is_subgroup_of(&w[0]) {
            return violation(0, m + 1, format!("H_{} is not contained in H_{}", m + 2, m + 1));
        }
    }
    for (m, (h, dm)) in t.subgroups.iter().zip(&t.domains).enumerate() {
        if dm.len() as i64 != h.index() {
            return violation(1, m, format!("|D| = {} but index = {}", dm.len(), h.index()));
        }
        let reps: BTreeSet<Point> = dm.points().map(|p| h.coset_reduce(p)).collect();
        if reps.len() != dm.len() {
            return violation(1, m, "two domain points share a coset".into());
        }
    }
    for (m, dm) in t.domains.iter().enumerate() {
        if !dm.contains(&vec![0; dm.dim()]) {
            return violation(2, m, "domain misses the identity".into());
        }
        if m + 1 < t.domains.len() && !dm.is_subset(&t.domains[m + 1]) {
            return violation(2, m + 1, format!("D_{} does not contain D_{}", m + 2, m + 1));
        }
    }
    // Finite certificate for exhaustion: the inradius grows strictly.
    for (m, w) in t.domains.windows(2).enumerate() {
        if w[1].inradius() <= w[0].inradius() {
            return violation(3, m + 1, "inradius does not grow".into());
        }
    }
    for n in 0..t.domains.len() {
        for m in 0..n {
            let dn = &t.domains[n];
            let hm = &t.subgroups[m];
            let mut tiled = BTreeSet::new();
            for g in dn.points().filter(|g| hm.contains(g)) {
                for p in t.domains[m].points() {
                    tiled.insert(super::add(g, p));
                }
            }
            if tiled != dn.points().cloned().collect() {
                return violation(4, n, format!("D_{} is not tiled by translates of D_{}", n + 1, m + 1));
            }
        }
    }
    None
}

/// Checks the tower conditions on all levels and reports the Følner ratios.
pub fn verify_tower(t: &Tower) -> TowerReport {
    let folner_ratios = t
        .domains
        .iter()
        .map(|d| d.boundary_inner(1.0).len() as f64 / d.len().max(1) as f64)
        .collect();
    TowerReport { violation: first_violation(t), folner_ratios }
}
