//! Cross-module scenarios: specs feed counting, counting feeds gates, gates
//! act on periodic points, and the local quotient sees the extension counts.

use num_bigint::BigUint;
use proptest::prelude::*;
use sftlab_core::gates::{gate_from_extension_permutation, GateLattice};
use sftlab_core::lattice::{FiniteSet, LatticeSubgroup};
use sftlab_core::localq::{beeps_statistic, kn_loglog_order};
use sftlab_core::morphisms::{periodic_action, shift};
use sftlab_core::perm::{Parity, Perm};
use sftlab_core::sft::{count_fixed_points, extension_table, fixed_points, is_periodic_admissible, SftSpec};
use sftlab_core::Budget;

#[test]
fn spec_document_round_trip_preserves_counts() {
    let b = &mut Budget::unlimited();
    for spec in [SftSpec::golden_mean(), SftSpec::triangular_hard_square(), SftSpec::full_shift_tracks(&[2, 3], 1)] {
        let again = SftSpec::from_json(&spec.to_json()).unwrap();
        let l = LatticeSubgroup::scaled(spec.dim(), 3);
        assert_eq!(count_fixed_points(&spec, &l, b).unwrap(), count_fixed_points(&again, &l, b).unwrap());
    }
}

#[test]
fn extension_gate_acts_on_golden_mean_tori() {
    let spec = SftSpec::golden_mean();
    let b = &mut Budget::unlimited();
    let set = FiniteSet::interval(0, 5);
    let table = extension_table(&spec, &set, 1.0, None, b).unwrap();
    let (u, e) = table.rows.iter().max_by_key(|(_, c)| (*c).clone()).unwrap();
    let e = e.to_u64_digits()[0] as usize;
    assert!(e >= 3);
    let tau = Perm::from_cycles(e, &[vec![0, 1, 2]]).unwrap();
    let gate = gate_from_extension_permutation(&spec, &table, u, &tau, b).unwrap();
    let forward = GateLattice::new(gate.clone(), LatticeSubgroup::scaled(1, 7), &spec).unwrap();
    let back = GateLattice::new(gate.inverse(), LatticeSubgroup::scaled(1, 7), &spec).unwrap();
    let mut moved = 0;
    for x in fixed_points(&spec, &LatticeSubgroup::scaled(1, 14), b).unwrap() {
        let y = forward.apply_periodic(&x, true).unwrap();
        assert!(is_periodic_admissible(&spec, &y));
        assert_eq!(back.apply_periodic(&y, true).unwrap(), x);
        moved += usize::from(y != x);
    }
    assert!(moved > 0);
}

#[test]
fn beeps_and_quotient_read_the_same_table() {
    let spec = SftSpec::golden_mean();
    let b = &mut Budget::unlimited();
    let set = FiniteSet::interval(0, 4);
    let table = extension_table(&spec, &set, 1.0, None, b).unwrap();
    let r = beeps_statistic(&spec, &set, 1.0, None, b).unwrap();
    assert_eq!(&r.e_u, table.rows.values().max().unwrap());
    assert_eq!(&r.e_v, table.rows.values().min().unwrap());
    let k = kn_loglog_order(&spec, &set, 1.0, None, b).unwrap();
    assert_eq!(k.num_boundary_patterns, BigUint::from(table.rows.len()));
    assert!((k.log_e_bits - 5f64.log2()).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// The shift acts on Fix(nZ) of the full k-shift as a product of cyclic
    /// orbits; its sign is (−1)^{Σ(len − 1)} over the orbits of words.
    #[test]
    fn shift_parity_matches_orbit_count(k in 2usize..4, n in 1i64..7) {
        let spec = SftSpec::full_shift(k, 1);
        let b = &mut Budget::unlimited();
        let act = periodic_action(&shift(1, k, &[1]).unwrap(), &LatticeSubgroup::scaled(1, n), &spec, b).unwrap();
        let words = (k as u64).pow(n as u32);
        let mut transpositions = 0u64;
        for w in 0..words {
            let digits: Vec<u64> = (0..n).map(|i| w / (k as u64).pow(i as u32) % k as u64).collect();
            let period = (1..=n as usize).find(|&p| (0..n as usize).all(|i| digits[i] == digits[(i + p) % n as usize])).unwrap();
            let rotations: Vec<u64> = (0..period).map(|r| (0..n as usize).map(|i| digits[(i + r) % n as usize] * (k as u64).pow(i as u32)).sum()).collect();
            if *rotations.iter().min().unwrap() == w {
                transpositions += period as u64 - 1;
            }
        }
        let want = if transpositions.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
        prop_assert_eq!(act.parity(), want);
    }
}
