//! Seeded random instances: permutations, periodic points, finite
//! configurations and gates.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sftlab_core::gates::{gate_from_extension_permutation, validate_gate, Gate, GateLattice};
use sftlab_core::lattice::{FiniteSet, LatticeSubgroup};
use sftlab_core::perm::{Parity, Perm};
use sftlab_core::sft::{enumerate_patterns, extension_table, extensions_of, finite_admissibility, fixed_points, ExtensionTable, FiniteConfig, PeriodicConfig, SftSpec, Symbol};
use sftlab_core::{Budget, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Perm(images)
}

pub fn random_even_perm(n: usize, rng: &mut impl Rng) -> Perm {
    let mut p = random_perm(n, rng);
    if n >= 2 && p.parity() == Parity::Odd {
        p.0.swap(0, 1);
    }
    p
}

/// A product of `k` disjoint transpositions (k ≥ 1, 2k ≤ n).
pub fn random_involution(n: usize, k: usize, rng: &mut impl Rng) -> Perm {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut images: Vec<usize> = (0..n).collect();
    for pair in idx.chunks(2).take(k) {
        if let [a, b] = *pair {
            images.swap(a, b);
        }
    }
    Perm(images)
}

/// A uniformly random point of X ∩ Fix(L): drawn directly on full shifts,
/// otherwise from the enumerated fixed points (None when there are none).
pub fn random_periodic_point(spec: &SftSpec, lattice: &LatticeSubgroup<i64>, rng: &mut impl Rng, budget: &mut Budget) -> Result<Option<PeriodicConfig>> {
    if spec.is_full_shift() {
        let k = spec.alphabet_size() as Symbol;
        let values = (0..lattice.index_usize()).map(|_| rng.gen_range(0..k)).collect();
        return Ok(Some(PeriodicConfig::new(lattice.clone(), values)));
    }
    let pts = fixed_points(spec, lattice, budget)?;
    Ok(pts.choose(rng).cloned())
}

/// A finite configuration with at most `cells` nonzero cells in the cube
/// [−extent, extent]^d; admissible when `admissible` is set (by rejection).
pub fn random_finite_config(spec: &SftSpec, cells: usize, extent: i64, admissible: bool, rng: &mut impl Rng) -> Result<FiniteConfig> {
    let zero = spec.require_zero()?;
    let nonzero: Vec<Symbol> = (0..spec.alphabet_size() as Symbol).filter(|&s| s != zero).collect();
    for _ in 0..1000 {
        let n = rng.gen_range(1..=cells.max(1));
        let pts = (0..n).map(|_| ((0..spec.dim()).map(|_| rng.gen_range(-extent..=extent)).collect::<Vec<i64>>(), *nonzero.choose(rng).expect("nonzero symbol")));
        let x = FiniteConfig::from_cells(spec.dim(), zero, pts);
        if !admissible || finite_admissibility(spec, &x).is_ok() {
            return Ok(x);
        }
    }
    Ok(FiniteConfig::zero_config(spec.dim(), zero))
}

/// A gate together with the extension-table row it acts on, if any.
#[derive(Clone, Debug)]
pub struct GateSample {
    pub lattice: GateLattice,
    pub row: Option<Vec<Symbol>>,
}

impl GateSample {
    pub fn gate(&self) -> &Gate {
        self.lattice.gate()
    }
}

/// The gate acting by τ on E(u) and fixing every other pattern. Even τ uses
/// the extension-permutation construction; odd τ goes through validation.
pub fn row_gate(spec: &SftSpec, table: &ExtensionTable, u: &[Symbol], tau: &Perm, budget: &mut Budget) -> Result<Gate> {
    if tau.parity() == Parity::Even {
        return gate_from_extension_permutation(spec, table, u, tau, budget);
    }
    let ext = extensions_of(spec, &table.domain, table.margin, u, None, budget)?;
    let mapping: HashMap<Vec<Symbol>, Vec<Symbol>> = ext.iter().enumerate().map(|(i, e)| (e.clone(), ext[tau.apply(i)].clone())).collect();
    validate_gate(spec, &table.domain, &mapping, spec.window_size(), budget)
}

/// A table on a small box whose rows have at least two extensions.
fn gate_table(spec: &SftSpec, rng: &mut impl Rng, budget: &mut Budget) -> Result<Option<ExtensionTable>> {
    let s = spec.window_size().max(1);
    let sides: Vec<i64> = if spec.dim() == 1 { vec![3, 4, 5] } else { vec![2 * s + 1] };
    let side = *sides.choose(rng).expect("sizes");
    let set = FiniteSet::cube(spec.dim(), 0, side - 1);
    let table = extension_table(spec, &set, s as f64, None, budget)?;
    Ok(table.rows.values().any(|c| *c >= 2u32.into()).then_some(table))
}

fn spaced_lattice(set: &FiniteSet, rng: &mut impl Rng) -> Result<LatticeSubgroup<i64>> {
    let (lo, hi) = set.bounding_box().expect("nonempty domain");
    let diag: Vec<i64> = lo.iter().zip(&hi).map(|(a, b)| b - a + 1 + rng.gen_range(0..=2)).collect();
    LatticeSubgroup::diagonal(&diag)
}

/// A random gate lattice. Full shifts get an arbitrary permutation of all
/// patterns on a box of at most four cells; other shifts get a permutation
/// of one extension-table row.
pub fn random_gate(spec: &SftSpec, rng: &mut impl Rng, budget: &mut Budget) -> Result<Option<GateSample>> {
    if spec.is_full_shift() {
        let shapes: Vec<Vec<i64>> = if spec.dim() == 1 { vec![vec![1], vec![2], vec![3], vec![4]] } else { vec![vec![1, 2], vec![2, 1], vec![2, 2]] };
        let mut hi = shapes.choose(rng).expect("shapes").clone();
        hi.extend(std::iter::repeat_n(1, spec.dim().saturating_sub(hi.len())));
        let hi: Vec<i64> = hi.iter().take(spec.dim()).map(|h| h - 1).collect();
        let set = FiniteSet::cuboid(&vec![0; spec.dim()], &hi);
        let pats = enumerate_patterns(spec, &set, None, budget)?;
        if pats.len() > 256 {
            return Ok(None);
        }
        let tau = if rng.gen_bool(0.3) { random_involution(pats.len(), rng.gen_range(1..=pats.len() / 2), rng) } else { random_perm(pats.len(), rng) };
        let values: Vec<Vec<Symbol>> = pats.iter().map(|p| p.values()).collect();
        let mapping = values.iter().enumerate().map(|(i, v)| (v.clone(), values[tau.apply(i)].clone())).collect();
        let gate = validate_gate(spec, &set, &mapping, 0, budget)?;
        let lattice = GateLattice::new(gate, spaced_lattice(&set, rng)?, spec)?;
        return Ok(Some(GateSample { lattice, row: None }));
    }
    let Some(table) = gate_table(spec, rng, budget)? else { return Ok(None) };
    let rows: Vec<(&Vec<Symbol>, usize)> = table.rows.iter().filter(|(_, c)| **c >= 2u32.into()).map(|(u, c)| (u, c.to_u64_digits()[0] as usize)).collect();
    let (u, e) = *rows.choose(rng).expect("row with two extensions");
    let tau = if e >= 3 && rng.gen_bool(0.7) {
        random_even_perm(e, rng)
    } else {
        random_involution(e, rng.gen_range(1..=e / 2), rng)
    };
    let gate = row_gate(spec, &table, u, &tau, budget)?;
    let lattice = GateLattice::new(gate, spaced_lattice(&table.domain, rng)?, spec)?;
    Ok(Some(GateSample { lattice, row: Some(u.clone()) }))
}

/// Two gate lattices on the same box and lattice acting on distinct rows.
pub fn random_row_pair(spec: &SftSpec, rng: &mut impl Rng, budget: &mut Budget) -> Result<Option<(GateSample, GateSample)>> {
    let s = spec.window_size().max(1);
    let side = match spec.dim() {
        1 if spec.alphabet_size() > 2 => 3,
        1 => 4,
        _ => 2 * s + 1,
    };
    let set = FiniteSet::cube(spec.dim(), 0, side - 1);
    let table = extension_table(spec, &set, s as f64, None, budget)?;
    let rows: Vec<(&Vec<Symbol>, usize)> = table.rows.iter().filter(|(_, c)| **c >= 2u32.into()).map(|(u, c)| (u, c.to_u64_digits()[0] as usize)).collect();
    if rows.len() < 2 {
        return Ok(None);
    }
    let picked: Vec<&(&Vec<Symbol>, usize)> = rows.choose_multiple(rng, 2).collect();
    let lattice = spaced_lattice(&set, rng)?;
    let mut out = Vec::new();
    for &&(u, e) in &picked {
        let tau = if e >= 3 { random_even_perm(e, rng) } else { Perm::transposition(e, 0, 1) };
        let gate = row_gate(spec, &table, u, &tau, budget)?;
        out.push(GateSample { lattice: GateLattice::new(gate, lattice.clone(), spec)?, row: Some(u.clone()) });
    }
    let b = out.pop().expect("two");
    let a = out.pop().expect("two");
    Ok(Some((a, b)))
}
