//! Local-Q-entropy quantities: the class P^s(M, N), the boundary weight
//! v_{R,κ}, the BEEPS statistic, the alternating-group orders |K_n| and the
//! full-shift classification predicate.

mod loglog;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

pub use loglog::{
    alt_order_loglog, entropy_recovery_sequence, exact_alt_log2, kn_loglog_order, stirling_alt_loglog, KnOrder, LevelReport, LogLogValue,
    EXACT_FACTORIAL_LIMIT,
};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::FiniteSet;
use crate::numeric::{log2_big, ser_biguint};
use crate::sft::{extension_table, SftSpec, Symbol};

/// Orders of the simple factors A_1, …, A_r of a group in P^s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFactorProfile {
    factors: Vec<BigUint>,
}

impl SimpleFactorProfile {
    pub fn new(factors: Vec<BigUint>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|f| *f < BigUint::from(2u32)) {
            return Err(Error::Precondition("factor orders must be nonempty and at least 2".into()));
        }
        Ok(SimpleFactorProfile { factors })
    }

    pub fn from_u64(factors: &[u64]) -> Result<Self> {
        Self::new(factors.iter().map(|&f| BigUint::from(f)).collect())
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    /// max_{i,j} log|A_i| / log|A_j|.
    pub fn max_log_ratio(&self) -> f64 {
        let logs: Vec<f64> = self.factors.iter().map(log2_big).collect();
        let hi = logs.iter().cloned().fold(f64::MIN, f64::max);
        let lo = logs.iter().cloned().fold(f64::MAX, f64::min);
        hi / lo
    }
}

/// Membership in P^s(M, N): at most N factors with log-order ratios at most M.
pub fn ps_membership(p: &SimpleFactorProfile, m: f64, n: usize) -> bool {
    p.factors.len() <= n && p.max_log_ratio() <= m
}

/// v_{R,κ}(F) = κ^{|∂_R F|} with the inner boundary.
pub fn boundary_weight(f: &FiniteSet, r: i64, kappa: u64) -> BigUint {
    BigUint::from(kappa).pow(f.boundary_inner(r as f64).len() as u32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeepsReport {
    pub value: f64,
    pub u: Vec<Symbol>,
    pub v: Vec<Symbol>,
    #[serde(serialize_with = "ser_biguint")]
    pub e_u: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub e_v: BigUint,
}

/// max over boundary patterns u, v of 2·(|E(u)|/|E(v)|)·(log|E(u)|/log|E(v)|).
///
/// Both factors grow with |E(u)| and shrink with |E(v)|, so the maximum sits
/// at the largest and smallest extension counts.
pub fn beeps_statistic(spec: &SftSpec, f: &FiniteSet, s: f64, margin: Option<i64>, budget: &mut Budget) -> Result<BeepsReport> {
    let table = extension_table(spec, f, s, margin, budget)?;
    if let Some((u, c)) = table.rows.iter().find(|(_, c)| **c < BigUint::from(2u32)) {
        return Err(Error::DegenerateExtensionCount(format!("pattern {u:?} has {c} extensions")));
    }
    let (u, e_u) = table.rows.iter().max_by(|a, b| a.1.cmp(b.1)).ok_or_else(|| Error::Precondition("no admissible boundary patterns".into()))?;
    let (v, e_v) = table.rows.iter().min_by(|a, b| a.1.cmp(b.1)).expect("nonempty");
    let (lu, lv): (f64, f64) = (log2_big(e_u), log2_big(e_v));
    let log2_value = 1.0 + ((lu - lv) + (lu.log2() - lv.log2()));
    Ok(BeepsReport { value: log2_value.exp2(), u: u.clone(), v: v.clone(), e_u: e_u.clone(), e_v: e_v.clone() })
}

fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_default() += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_default() += 1;
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

/// The coprime (m, n) with a^m = b^n, if any. a^m = b^n holds exactly when
/// the prime exponent vectors of a and b are proportional.
pub fn log_ratio_rational(a: u64, b: u64) -> Option<(u64, u64)> {
    if a < 2 || b < 2 {
        return None;
    }
    let (fa, fb) = (factorize(a), factorize(b));
    if !fa.keys().eq(fb.keys()) {
        return None;
    }
    let (p, &ea) = fa.iter().next()?;
    let eb = fb[p];
    let g = gcd(ea as u64, eb as u64);
    let (m, n) = (eb as u64 / g, ea as u64 / g);
    fa.iter().all(|(q, &x)| m * x as u64 == n * fb[q] as u64).then_some((m, n))
}

/// idx1·log₂ x = idx2·log₂ y, decided as x^idx1 = y^idx2 on prime exponents.
pub fn index_ratio_identity_check(x: u64, y: u64, idx1: u64, idx2: u64) -> bool {
    if x == 0 || y == 0 {
        return false;
    }
    let (fx, fy) = (factorize(x), factorize(y));
    fx.keys().eq(fy.keys()) && fx.iter().all(|(p, &e)| idx1 as u128 * e as u128 == idx2 as u128 * fy[p] as u128)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub alphabet_a: u64,
    pub alphabet_b: u64,
    pub isomorphic: bool,
    /// (m, n) with |A|^m = |B|^n.
    pub witness: Option<(u64, u64)>,
}

/// The full-shift classification predicate: the invariant agrees for full
/// shifts on |A| and |B| symbols exactly when |A|^m = |B|^n for some m, n ≥ 1.
pub fn classify_full_shifts(a: u64, b: u64) -> Classification {
    let witness = log_ratio_rational(a, b);
    Classification { alphabet_a: a, alphabet_b: b, isomorphic: witness.is_some(), witness }
}

#[cfg(test)]
mod tests;
