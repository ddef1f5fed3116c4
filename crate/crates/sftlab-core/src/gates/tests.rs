use std::collections::HashMap;

use super::*;
use crate::morphisms::{maps_equal, shift};
use crate::sft::{extension_table, FiniteConfig};

fn word(s: &str) -> Vec<Symbol> {
    s.bytes().map(|c| c - b'0').collect()
}

fn swap(pairs: &[(&str, &str)]) -> HashMap<Vec<Symbol>, Vec<Symbol>> {
    let mut m = HashMap::new();
    for (a, b) in pairs {
        m.insert(word(a), word(b));
        m.insert(word(b), word(a));
    }
    m
}

#[test]
fn validation_examples() {
    let b = &mut Budget::unlimited();
    let full = SftSpec::full_shift(2, 1);
    let d3 = FiniteSet::interval(0, 2);
    let cyc: HashMap<_, _> = [(word("001"), word("110")), (word("110"), word("011")), (word("011"), word("001"))].into_iter().collect();
    assert!(validate_gate(&full, &d3, &cyc, 0, b).is_ok());

    let g = SftSpec::golden_mean();
    let err = validate_gate(&g, &FiniteSet::interval(0, 0), &swap(&[("0", "1")]), 1, b).unwrap_err();
    match err {
        Error::ContextUnsafe { witness } => assert!(witness.iter().filter(|(_, s)| *s == 1).count() == 1),
        other => panic!("unexpected {other:?}"),
    }
    let gate = validate_gate(&g, &d3, &swap(&[("000", "010")]), 1, b).unwrap();
    assert_eq!(gate.patterns().len(), 5);
    assert_eq!(gate.parity(), Parity::Odd);
    assert!(matches!(validate_gate(&g, &d3, &swap(&[("000", "011")]), 1, b), Err(Error::NotBijective)));
    let not_bij: HashMap<_, _> = [(word("000"), word("010"))].into_iter().collect();
    assert!(matches!(validate_gate(&g, &d3, &not_bij, 1, b), Err(Error::NotBijective)));
}

#[test]
fn parity_examples() {
    let b = &mut Budget::unlimited();
    let full = SftSpec::full_shift(2, 1);
    let d = FiniteSet::interval(0, 1);
    assert_eq!(validate_gate(&full, &d, &HashMap::new(), 0, b).unwrap().parity(), Parity::Even);
    assert_eq!(validate_gate(&full, &d, &swap(&[("01", "10")]), 0, b).unwrap().parity(), Parity::Odd);
    let three: HashMap<_, _> = [(word("00"), word("01")), (word("01"), word("10")), (word("10"), word("00"))].into_iter().collect();
    assert_eq!(gate_parity(&validate_gate(&full, &d, &three, 0, b).unwrap()), Parity::Even);
}

#[test]
fn gate_lattice_on_finite_and_periodic_points() {
    let b = &mut Budget::unlimited();
    let full = SftSpec::full_shift(2, 1);
    let gate = validate_gate(&full, &FiniteSet::interval(0, 1), &swap(&[("01", "10")]), 0, b).unwrap();
    let h = LatticeSubgroup::scaled(1, 2);
    let gl = GateLattice::new(gate, h, &full).unwrap();
    assert!(gl.tiles());
    let x = FiniteConfig::from_cells(1, 0, [(vec![3], 1), (vec![4], 1)]);
    let y = gl.apply_finite(&x).unwrap();
    assert_eq!(y.support().to_vec(), vec![vec![2], vec![5]]);
    assert_eq!(gl.apply_finite(&y).unwrap(), x);

    let p = PeriodicConfig::new(LatticeSubgroup::scaled(1, 4), vec![0, 1, 1, 1]);
    let q = gl.apply_periodic(&p, false).unwrap();
    assert_eq!(q.values(), &[1, 0, 1, 1]);
    let odd = PeriodicConfig::new(LatticeSubgroup::scaled(1, 3), vec![0, 1, 1]);
    assert!(matches!(gl.apply_periodic(&odd, false), Err(Error::IncompatibleLattice(_))));
    let r = gl.apply_periodic(&odd, true).unwrap();
    assert_eq!(r.lattice(), &LatticeSubgroup::scaled(1, 6));
    assert_eq!(gl.apply_periodic(&r, false).unwrap(), odd.reperiodize(&LatticeSubgroup::scaled(1, 6)).unwrap());

    let id = GateLattice::new(validate_gate(&full, &FiniteSet::interval(0, 1), &HashMap::new(), 0, b).unwrap(), LatticeSubgroup::scaled(1, 2), &full).unwrap();
    assert!(maps_equal(id.as_block_map(), &crate::morphisms::BlockMap::identity(1, 2), &full, b).unwrap().holds);
}

#[test]
fn gate_lattices_commute_with_their_lattice() {
    let b = &mut Budget::unlimited();
    let g = SftSpec::golden_mean();
    let gate = validate_gate(&g, &FiniteSet::interval(0, 2), &swap(&[("000", "010")]), 1, b).unwrap();
    let gl = GateLattice::new(gate, LatticeSubgroup::scaled(1, 3), &g).unwrap();
    assert!(exact_commutes(gl.as_block_map(), &shift(1, 2, &[3]).unwrap(), &g, b).unwrap().holds);
    assert!(!exact_commutes(gl.as_block_map(), &shift(1, 2, &[1]).unwrap(), &g, b).unwrap().holds);

    let full2 = SftSpec::full_shift(2, 2);
    let d = FiniteSet::from_points(2, [vec![0, 0], vec![1, 0]]);
    let gate = validate_gate(&full2, &d, &swap(&[("01", "10")]), 0, b).unwrap();
    let h = LatticeSubgroup::diagonal(&[2, 1]).unwrap();
    let gl = GateLattice::new(gate, h.clone(), &full2).unwrap();
    for col in h.columns() {
        assert!(exact_commutes(gl.as_block_map(), &shift(2, 2, &col).unwrap(), &full2, b).unwrap().holds);
    }
}

#[test]
fn disjoint_translates_commute() {
    let b = &mut Budget::unlimited();
    let full = SftSpec::full_shift(2, 1);
    let gate = validate_gate(&full, &FiniteSet::interval(0, 1), &swap(&[("01", "10")]), 0, b).unwrap();
    let gl = GateLattice::new(gate, LatticeSubgroup::scaled(1, 10), &full).unwrap();
    assert!(!gl.tiles());
    let conj = |v: i64| crate::morphisms::BlockMap::compose_all(&[shift(1, 2, &[-v]).unwrap(), gl.as_block_map().clone(), shift(1, 2, &[v]).unwrap()]);
    assert!(exact_commutes(gl.as_block_map(), &conj(3), &full, b).unwrap().holds);
    assert!(!exact_commutes(gl.as_block_map(), &conj(1), &full, b).unwrap().holds);
    let overlapping = GateLattice::new(gl.gate().clone(), LatticeSubgroup::scaled(1, 1), &full);
    assert!(matches!(overlapping, Err(Error::IncompatibleLattice(_))));
}

#[test]
fn extension_gates() {
    let b = &mut Budget::unlimited();
    let full = SftSpec::full_shift(2, 1);
    let d = FiniteSet::interval(-4, 4);
    let table = extension_table(&full, &d, 1.0, None, b).unwrap();
    let u = vec![0, 0];
    let ext = extensions_of(&full, &d, 1.0, &u, None, b).unwrap();
    assert_eq!(ext.len(), 128);
    let mut cycles = vec![vec![0, 5, 77]];
    cycles.retain(|c| c.iter().all(|&i| i < ext.len()));
    let tau = Perm::from_cycles(ext.len(), &cycles).unwrap();
    let gate = gate_from_extension_permutation(&full, &table, &u, &tau, b).unwrap();
    assert_eq!(gate.parity(), Parity::Even);
    let mut mapping = HashMap::new();
    for (i, p) in gate.patterns().iter().enumerate() {
        let q = &gate.patterns()[gate.perm().apply(i)];
        assert_eq!((p[0], p[8]), (q[0], q[8]));
        if p != q {
            mapping.insert(p.clone(), q.clone());
        }
    }
    assert_eq!(mapping.len(), 3);
    assert!(validate_gate(&full, &d, &mapping, 1, b).is_ok());
    let id = gate_from_extension_permutation(&full, &table, &u, &Perm::identity(128), b).unwrap();
    assert!(id.perm().is_identity());

    let g = SftSpec::golden_mean();
    let d5 = FiniteSet::interval(0, 4);
    let t = extension_table(&g, &d5, 1.0, None, b).unwrap();
    assert!(matches!(gate_from_extension_permutation(&g, &t, &[1, 1], &Perm::transposition(2, 0, 1), b), Err(Error::OddPermutation)));
    let thin = extension_table(&g, &d5, 0.5, None, b).unwrap();
    assert!(matches!(gate_from_extension_permutation(&g, &thin, &[], &Perm::identity(13), b), Err(Error::MarginTooSmall { .. })));
}

#[test]
fn extension_gates_compose_like_the_alternating_group() {
    let b = &mut Budget::unlimited();
    let g = SftSpec::golden_mean();
    let d = FiniteSet::interval(0, 4);
    let t = extension_table(&g, &d, 1.0, None, b).unwrap();
    let h = LatticeSubgroup::scaled(1, 5);
    let u = [0, 0];
    let t1 = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
    let t2 = Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
    let mut gl = |tau: &Perm| GateLattice::new(gate_from_extension_permutation(&g, &t, &u, tau, b).unwrap(), h.clone(), &g).unwrap();
    let (a, c) = (gl(&t1), gl(&t2));
    let prod = gl(&t1.compose(&t2));
    let b2 = &mut Budget::unlimited();
    assert!(maps_equal(&a.as_block_map().compose(c.as_block_map()), prod.as_block_map(), &g, b2).unwrap().holds);
    assert!(!exact_commutes(a.as_block_map(), c.as_block_map(), &g, b2).unwrap().holds);
}

#[test]
fn strong_commutation_examples() {
    let b = &mut Budget::unlimited();
    let g = SftSpec::golden_mean();
    let d = FiniteSet::interval(0, 4);
    let t = extension_table(&g, &d, 1.0, None, b).unwrap();
    let h = LatticeSubgroup::scaled(1, 5);
    let mk = |u: &[Symbol], tau: Perm, b: &mut Budget| GateLattice::new(gate_from_extension_permutation(&g, &t, u, &tau, b).unwrap(), h.clone(), &g).unwrap();
    let g00 = mk(&[0, 0], Perm::from_cycles(5, &[vec![0, 3, 4]]).unwrap(), b);
    let g11 = mk(&[1, 1], Perm::identity(2), b);
    let g01 = mk(&[0, 1], Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap(), b);
    let g10 = mk(&[1, 0], Perm::from_cycles(3, &[vec![0, 2, 1]]).unwrap(), b);
    assert!(strong_commutation_check(&g00, &g11, &g, b).unwrap().holds);
    assert!(strong_commutation_check(&g00, &g01, &g, b).unwrap().holds);
    assert!(strong_commutation_check(&g01, &g10, &g, b).unwrap().holds);
    assert!(strong_commutation_check(&g00, &g00, &g, b).unwrap().holds);
}

#[test]
fn gate_json() {
    let b = &mut Budget::unlimited();
    let g = SftSpec::golden_mean();
    let doc: GateDoc = serde_json::from_str(r#"{"D": [[0], [1], [2]], "perm": [["000", "010"], ["010", "000"]], "H": "3"}"#).unwrap();
    let (gate, h) = doc.build(&g, b).unwrap();
    assert_eq!(h.unwrap(), LatticeSubgroup::scaled(1, 3));
    assert_eq!(gate.order(), num_bigint::BigUint::from(2u32));
    assert_eq!(gate_input(&gate, &Pattern::from_word(0, "010")), Some(word("010")));
}
