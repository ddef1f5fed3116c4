use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::budget::Budget;
use crate::error::Error;
use crate::lattice::FiniteSet;
use crate::sft::SftSpec;

#[test]
fn ps_membership_examples() {
    let p = |f: &[u64]| SimpleFactorProfile::from_u64(f).unwrap();
    assert!(ps_membership(&p(&[60, 60]), 1.0, 2));
    assert!(!ps_membership(&p(&[60, 60, 60]), 1.0, 2));
    let ratio = (2520f64).ln() / (60f64).ln();
    assert!((p(&[60, 2520]).max_log_ratio() - ratio).abs() < 1e-12);
    assert!((ratio - 1.9124).abs() < 1e-3);
    assert!(!ps_membership(&p(&[60, 2520]), 1.3, 2));
    assert!(ps_membership(&p(&[60, 2520]), 2.0, 2));
    assert!(SimpleFactorProfile::from_u64(&[]).is_err());
    assert!(SimpleFactorProfile::from_u64(&[60, 1]).is_err());
}

#[test]
fn boundary_weight_examples() {
    assert_eq!(boundary_weight(&FiniteSet::interval(-4, 4), 1, 2), BigUint::from(4u32));
    assert_eq!(boundary_weight(&FiniteSet::cube(2, 0, 2), 1, 2), BigUint::from(256u32));
    assert_eq!(boundary_weight(&FiniteSet::interval(0, 0), 1, 2), BigUint::from(2u32));
}

#[test]
fn boundary_weight_is_controlled() {
    // log₂ v / |F| → 0 along centered boxes
    let ratios: Vec<f64> = (1..6)
        .map(|r| {
            let f = FiniteSet::centered_box(2, 3 * r);
            crate::numeric::log2_big::<f64>(&boundary_weight(&f, 2, 3)) / f.len() as f64
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]));
    assert!(ratios[4] < 0.5 * ratios[0]);
}

proptest! {
    #[test]
    fn ps_membership_monotone(f in proptest::collection::vec(2u64..100_000, 1..6), m in 1.0f64..3.0, n in 1usize..6, dm in 0.0f64..2.0, dn in 0usize..3) {
        let p = SimpleFactorProfile::from_u64(&f).unwrap();
        if ps_membership(&p, m, n) {
            prop_assert!(ps_membership(&p, m + dm, n + dn));
        }
    }

    #[test]
    fn boundary_weight_monotone(lo in -5i64..0, hi in 0i64..5, r in 1i64..4, kappa in 2u64..6) {
        let f = FiniteSet::cube(2, lo, hi);
        let w = boundary_weight(&f, r, kappa);
        prop_assert!(boundary_weight(&f, r + 1, kappa) >= w.clone());
        prop_assert!(boundary_weight(&f, r, kappa + 1) >= w);
    }
}

#[test]
fn beeps_examples() {
    let b = &mut Budget::unlimited();
    for (k, d) in [(2, 1), (3, 1), (2, 2)] {
        let spec = SftSpec::full_shift(k, d);
        let r = beeps_statistic(&spec, &FiniteSet::cube(d, 0, 3), 1.0, None, b).unwrap();
        assert_eq!(r.value, 2.0);
    }
    let g = SftSpec::golden_mean();
    let small = beeps_statistic(&g, &FiniteSet::interval(0, 4), 1.0, None, b).unwrap();
    assert_eq!((small.e_u.clone(), small.e_v.clone()), (BigUint::from(5u32), BigUint::from(2u32)));
    assert_eq!((small.u.clone(), small.v.clone()), (vec![0, 0], vec![1, 1]));
    let expect = 2.0 * 2.5 * 5f64.log2();
    assert!((small.value - expect).abs() < 1e-12);
    assert!((small.value - 11.61).abs() < 0.01);
    let large = beeps_statistic(&g, &FiniteSet::interval(0, 10), 1.0, None, b).unwrap();
    assert!(large.value < small.value);
    // brute-force oracle over all 2^11 words
    let count = |a: u32, z: u32| (0u32..1 << 11).filter(|w| w & (w >> 1) == 0 && w & 1 == a && (w >> 10) & 1 == z).count() as f64;
    let (e00, e11) = (count(0, 0), count(1, 1));
    assert!((large.value - 2.0 * e00 / e11 * e00.log2() / e11.log2()).abs() < 1e-9);
    assert!(matches!(beeps_statistic(&g, &FiniteSet::interval(0, 2), 1.0, None, b), Err(Error::DegenerateExtensionCount(_))));
}

#[test]
fn stirling_agrees_with_exact_sums() {
    for e in [1001u64, 2048, 5000, 9999, 10_000] {
        let (q, q_err) = exact_alt_log2(e);
        let exact = LogLogValue::from_value(q, q_err);
        let st = stirling_alt_loglog((e as f64).log2());
        assert!((exact.log2 - st.log2).abs() <= exact.err + st.err + 1e-300, "E = {e}: {} vs {}", exact.log2, st.log2);
        assert!(st.err < 1e-6);
    }
}

#[test]
fn exact_factorial_matches_direct_sum() {
    let (q, _) = exact_alt_log2(128);
    let direct: f64 = (1..=128u32).map(|k| (k as f64).log2()).sum::<f64>() - 1.0;
    assert!((q - direct).abs() < 1e-9);
    assert!(alt_order_loglog(&BigUint::from(2u32)).is_none());
    let a3 = alt_order_loglog(&BigUint::from(3u32)).unwrap();
    assert!((a3.value() - 3f64.log2()).abs() < 1e-12);
}

#[test]
fn kn_orders_on_the_full_two_shift() {
    let spec = SftSpec::full_shift(2, 1);
    let b = &mut Budget::unlimited();
    let k1 = kn_loglog_order(&spec, &FiniteSet::interval(-1, 1), 1.0, None, b).unwrap();
    assert!(k1.trivial());
    let k2 = kn_loglog_order(&spec, &FiniteSet::interval(-4, 4), 1.0, None, b).unwrap();
    assert_eq!(k2.num_boundary_patterns, BigUint::from(4u32));
    assert_eq!(k2.log_e_bits, 7.0);
    // log₂|K₂| = 4·(log₂ 128! − 1)
    let l128: f64 = (2..=128u32).map(|k| (k as f64).log2()).sum();
    let oracle = (4.0 * (l128 - 1.0)).log2();
    let v = k2.loglog.unwrap();
    assert!((v.log2 - oracle).abs() < 1e-9);
    assert!((v.log2 - 11.4821).abs() < 1e-4);
    let k4 = kn_loglog_order(&spec, &FiniteSet::interval(-40, 40), 1.0, None, b).unwrap();
    let closed = 79.0 + (4.0 * (79.0 - std::f64::consts::LOG2_E)).log2();
    assert!((k4.loglog.unwrap().log2 - closed).abs() < 1e-6);
    assert!((k4.loglog.unwrap().log2 - 87.28).abs() < 0.01);
}

#[test]
fn kn_orders_via_extension_tables_match_closed_form() {
    // Running a full shift through the generic path gives the same value.
    let full = SftSpec::full_shift(2, 1);
    let generic = SftSpec::new(1, vec!["0".into(), "1".into()], Some(0), None, vec![vec![0], vec![1]], vec![]).unwrap();
    let b = &mut Budget::unlimited();
    let set = FiniteSet::interval(-4, 4);
    let a = kn_loglog_order(&full, &set, 1.0, None, b).unwrap().loglog.unwrap();
    let g = kn_loglog_order(&generic, &set, 1.0, None, b).unwrap().loglog.unwrap();
    assert!((a.log2 - g.log2).abs() < 1e-9);
}

fn closed_form_a(k: f64, n: u32) -> f64 {
    let cells = 3f64.powi(n as i32);
    let interior = cells - 2.0;
    let log2_e = interior * k.log2();
    (2.0 * k.log2() + log2_e + (log2_e - std::f64::consts::LOG2_E).log2()) / cells
}

#[test]
fn recovery_sequence_full_shifts() {
    let b = &mut Budget::unlimited();
    let seq = entropy_recovery_sequence(&SftSpec::full_shift(2, 1), 3, 1.0, 7, None, b).unwrap();
    assert!(seq[0].trivial && seq[0].a_n.is_none());
    let a: Vec<f64> = seq[1..].iter().map(|l| l.a_n.unwrap()).collect();
    assert!((a[0] - 1.276).abs() < 1e-3);
    assert!((a[2] - 1.077).abs() < 1e-3);
    assert!((a[5] - 1.00507).abs() < 1e-5);
    assert!(a.windows(2).all(|w| w[1] < w[0]) && a.iter().all(|&x| x > 1.0));
    for l in &seq[1..] {
        assert!(l.error_bound < 1e-6);
        if l.n >= 4 {
            assert!((l.a_n.unwrap() - closed_form_a(2.0, l.n as u32)).abs() < 1e-6);
        }
    }
    let seq4 = entropy_recovery_sequence(&SftSpec::full_shift(4, 1), 3, 1.0, 7, None, b).unwrap();
    let a7 = seq4[6].a_n.unwrap();
    assert!((a7 - 2.0).abs() < 0.012 && a7 > 2.0);
    let one = entropy_recovery_sequence(&SftSpec::full_shift(1, 1), 3, 1.0, 3, None, b).unwrap();
    assert!(one.iter().all(|l| l.trivial));
}

#[test]
fn recovery_sequence_golden_mean_is_above_entropy() {
    let b = &mut Budget::unlimited();
    let seq = entropy_recovery_sequence(&SftSpec::golden_mean(), 3, 1.0, 5, None, b).unwrap();
    let h = ((1.0 + 5f64.sqrt()) / 2.0).log2();
    let a: Vec<f64> = seq.iter().filter_map(|l| l.a_n).collect();
    assert!(a.len() >= 3);
    assert!(a.iter().all(|&x| x > h));
    assert!(a.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn level_report_json_keys() {
    let b = &mut Budget::unlimited();
    let seq = entropy_recovery_sequence(&SftSpec::full_shift(2, 1), 3, 1.0, 2, None, b).unwrap();
    let v = serde_json::to_value(&seq[1]).unwrap();
    for key in ["n", "index", "num_boundary_patterns", "logE_bits", "loglogK", "a_n", "error_bound"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["index"], "9");
}

fn exhaustive_power_match(a: u64, b: u64) -> Option<(u64, u64)> {
    let pa: Vec<BigUint> = (1..=40u32).map(|m| BigUint::from(a).pow(m)).collect();
    let pb: Vec<BigUint> = (1..=40u32).map(|n| BigUint::from(b).pow(n)).collect();
    for m in 1..=40 {
        for n in 1..=40 {
            if pa[m - 1] == pb[n - 1] {
                return Some((m as u64, n as u64));
            }
        }
    }
    None
}

#[test]
fn log_ratio_rational_matches_exhaustive_search() {
    assert_eq!(log_ratio_rational(4, 8), Some((3, 2)));
    assert_eq!(log_ratio_rational(2, 8), Some((3, 1)));
    assert_eq!(log_ratio_rational(6, 12), None);
    for a in 2..=64 {
        for b in 2..=64 {
            assert_eq!(log_ratio_rational(a, b), exhaustive_power_match(a, b), "({a}, {b})");
        }
    }
}

#[test]
fn index_ratio_examples() {
    assert!(index_ratio_identity_check(4, 2, 1, 2));
    for (i, j) in [(1, 1), (2, 3), (5, 7)] {
        assert!(!index_ratio_identity_check(2, 3, i, j));
    }
    assert!(index_ratio_identity_check(6, 6, 3, 3));
    assert!(!index_ratio_identity_check(4, 2, 2, 1));
}

#[test]
fn classification_predicate() {
    let c = classify_full_shifts(2, 8);
    assert!(c.isomorphic);
    assert_eq!(c.witness, Some((3, 1)));
    assert!(!classify_full_shifts(2, 3).isomorphic);
}
