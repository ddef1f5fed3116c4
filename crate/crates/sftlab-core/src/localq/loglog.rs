use std::collections::BTreeMap;
use std::f64::consts::{LOG2_E, PI};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::Result;
use crate::lattice::{build_centered_tower, FiniteSet};
use crate::numeric::{log2_big, ser_biguint};
use crate::sft::{extension_table, SftSpec};

/// Largest E for which log₂(E!) is summed term by term.
pub const EXACT_FACTORIAL_LIMIT: u64 = 1_000_000;

/// A positive quantity Q held through log₂ Q, with an absolute error bound on
/// that logarithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogLogValue {
    pub log2: f64,
    pub err: f64,
}

impl LogLogValue {
    /// From Q itself, given |Q − q| ≤ q_err.
    pub fn from_value(q: f64, q_err: f64) -> Self {
        assert!(q > 0.0, "quantity must be positive");
        let rel = q_err / q;
        // |log₂(1 + t)| ≤ 2|t|/ln 2 for |t| ≤ 1/2
        let err = if rel <= 0.5 { 2.0 * rel / std::f64::consts::LN_2 } else { f64::INFINITY };
        LogLogValue { log2: q.log2(), err: err + 4.0 * f64::EPSILON * q.log2().abs() }
    }

    /// Q times 2^c.
    pub fn scaled(self, c: f64) -> Self {
        let log2 = self.log2 + c;
        LogLogValue { log2, err: self.err + 2.0 * f64::EPSILON * log2.abs() }
    }

    /// Σ Q_i, via log-sum-exp.
    pub fn sum(terms: &[LogLogValue]) -> Option<Self> {
        let m = terms.iter().map(|t| t.log2).fold(f64::NEG_INFINITY, f64::max);
        if terms.is_empty() {
            return None;
        }
        let s: f64 = terms.iter().map(|t| (t.log2 - m).exp2()).sum();
        let log2 = m + s.log2();
        let err = terms.iter().map(|t| t.err).fold(0.0, f64::max) + (terms.len() as f64 + 4.0) * f64::EPSILON * log2.abs().max(1.0);
        Some(LogLogValue { log2, err })
    }

    /// Q as a float; infinite when Q exceeds the f64 range.
    pub fn value(&self) -> f64 {
        self.log2.exp2()
    }
}

/// log₂(|Alt(E)|) = log₂(E!) − 1 summed exactly, E ≤ [`EXACT_FACTORIAL_LIMIT`].
pub fn exact_alt_log2(e: u64) -> (f64, f64) {
    assert!(e <= EXACT_FACTORIAL_LIMIT);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 3..=e {
        let y = (k as f64).log2() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // one ulp per logarithm plus the compensated-sum bound
    let err = (e as f64) * f64::EPSILON * (e as f64).log2().max(1.0) + 4.0 * f64::EPSILON * sum;
    (sum, err)
}

/// log₂ log₂ |Alt(E)| by Stirling, for E = 2^log2_e > [`EXACT_FACTORIAL_LIMIT`].
///
/// ln E! = E ln E − E + ½ ln(2πE) + θ/(12E), θ ∈ (0, 1), so
/// log₂(E!) − 1 = E·[(log₂E − log₂e) + c/E + θ/(12E² ln 2)] with
/// c = ½ log₂(2πE) − 1.
pub fn stirling_alt_loglog(log2_e: f64) -> LogLogValue {
    let c = 0.5 * ((2.0 * PI).log2() + log2_e) - 1.0;
    let inv_e = (-log2_e).exp2();
    let b = (log2_e - LOG2_E) + c * inv_e;
    let remainder = inv_e * inv_e / (12.0 * std::f64::consts::LN_2);
    let err = remainder / (b * std::f64::consts::LN_2) + 8.0 * f64::EPSILON * (log2_e + b.log2().abs() + 2.0);
    LogLogValue { log2: log2_e + b.log2(), err }
}

/// log₂ log₂ |Alt(E)|, or None when Alt(E) is trivial (E ≤ 2).
pub fn alt_order_loglog(e: &BigUint) -> Option<LogLogValue> {
    match e.to_u64() {
        Some(n) if n <= 2 => None,
        Some(n) if n <= EXACT_FACTORIAL_LIMIT => {
            let (q, q_err) = exact_alt_log2(n);
            Some(LogLogValue::from_value(q, q_err))
        }
        _ => Some(stirling_alt_loglog(log2_big(e))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnOrder {
    /// log₂ log₂ |K_n|; None when every factor is trivial.
    pub loglog: Option<LogLogValue>,
    #[serde(serialize_with = "ser_biguint")]
    pub num_boundary_patterns: BigUint,
    /// Largest log₂ |E(u)|.
    pub log_e_bits: f64,
}

impl KnOrder {
    pub fn trivial(&self) -> bool {
        self.loglog.is_none()
    }
}

/// The order of K_n = ∏_u Alt(E(u)) over boundary patterns u of `domain`,
/// in doubly logarithmic form.
pub fn kn_loglog_order(spec: &SftSpec, domain: &FiniteSet, s: f64, margin: Option<i64>, budget: &mut Budget) -> Result<KnOrder> {
    if spec.is_full_shift() {
        let k = spec.alphabet_size();
        let nb = domain.boundary_inner(s).len();
        let e = BigUint::from(k).pow((domain.len() - nb) as u32);
        let log2_k = (k as f64).log2();
        let loglog = alt_order_loglog(&e).map(|t| t.scaled(nb as f64 * log2_k));
        return Ok(KnOrder { loglog, num_boundary_patterns: BigUint::from(k).pow(nb as u32), log_e_bits: log2_big(&e) });
    }
    let table = extension_table(spec, domain, s, margin, budget)?;
    let mut multiplicity: BTreeMap<&BigUint, u64> = BTreeMap::new();
    for c in table.rows.values() {
        *multiplicity.entry(c).or_default() += 1;
    }
    let terms: Vec<LogLogValue> = multiplicity
        .iter()
        .filter_map(|(e, &m)| alt_order_loglog(e).map(|t| t.scaled((m as f64).log2())))
        .collect();
    let log_e_bits = multiplicity.keys().next_back().map_or(0.0, |e| log2_big(e));
    Ok(KnOrder { loglog: LogLogValue::sum(&terms), num_boundary_patterns: BigUint::from(table.rows.len()), log_e_bits })
}

/// One level of the entropy recovery sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub n: usize,
    #[serde(serialize_with = "ser_biguint")]
    pub index: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub num_boundary_patterns: BigUint,
    #[serde(rename = "logE_bits")]
    pub log_e_bits: f64,
    #[serde(rename = "loglogK")]
    pub loglog_k: Option<f64>,
    pub a_n: Option<f64>,
    pub error_bound: f64,
    pub trivial: bool,
}

/// a_n = log₂ log₂ |K_n| / |C_n| along the centered tower k^n Z^d, n = 1..=n_max.
pub fn entropy_recovery_sequence(spec: &SftSpec, k: i64, s: f64, n_max: usize, margin: Option<i64>, budget: &mut Budget) -> Result<Vec<LevelReport>> {
    let tower = build_centered_tower(k, spec.dim(), n_max)?;
    let mut out = Vec::with_capacity(n_max);
    for (i, domain) in tower.domains.iter().enumerate() {
        let kn = kn_loglog_order(spec, domain, s, margin, budget)?;
        let index = BigUint::from(domain.len());
        debug_assert_eq!(index, BigUint::from(k as u64).pow(((i + 1) * spec.dim()) as u32));
        let cells = domain.len() as f64;
        out.push(LevelReport {
            n: i + 1,
            index,
            num_boundary_patterns: kn.num_boundary_patterns.clone(),
            log_e_bits: kn.log_e_bits,
            loglog_k: kn.loglog.map(|v| v.log2),
            a_n: kn.loglog.map(|v| v.log2 / cells),
            error_bound: kn.loglog.map_or(0.0, |v| v.err / cells),
            trivial: kn.trivial(),
        });
    }
    Ok(out)
}

