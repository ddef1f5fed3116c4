use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::search::LocalCsp;
use super::{LineGraph, Pattern, PatternSpace, PeriodicConfig, SftSpec, Symbol};
use crate::budget::Budget;
use crate::error::Result;
use crate::lattice::{add, FiniteSet, LatticeSubgroup, Point};
use crate::numeric::log2_big;
use crate::scalar::Real;

/// How far a count can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    /// Globally admissible patterns, counted exactly.
    Exact,
    /// Locally admissible patterns: an upper bound on the global count.
    LocalUpperBound,
    /// Locally admissible patterns that extend to the given margin.
    ExtendsToMargin(i64),
}

impl Exactness {
    pub fn tag(&self) -> String {
        match self {
            Exactness::Exact => "exact".into(),
            Exactness::LocalUpperBound => "bound".into(),
            Exactness::ExtendsToMargin(r) => format!("bound(margin {r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigUint,
    pub exactness: Exactness,
}

fn interval_len(set: &FiniteSet) -> Option<usize> {
    if set.dim() != 1 || set.is_empty() {
        return None;
    }
    let (lo, hi) = set.bounding_box()?;
    let n = (hi[0] - lo[0] + 1) as usize;
    (n == set.len()).then_some(n)
}

/// Number of admissible patterns on `set` (see [`Exactness`] for the regime).
pub fn count_patterns(spec: &SftSpec, set: &FiniteSet, margin: Option<i64>, budget: &mut Budget) -> Result<CountResult> {
    if spec.is_full_shift() {
        return Ok(CountResult { count: BigUint::from(spec.alphabet_size()).pow(set.len() as u32), exactness: Exactness::Exact });
    }
    if let Some(n) = interval_len(set) {
        let g = LineGraph::new(spec)?;
        budget.spend((n * g.num_states()) as u64)?;
        return Ok(CountResult { count: g.count_words(n, &|_| None), exactness: Exactness::Exact });
    }
    let space = PatternSpace::new(spec, set, margin)?;
    Ok(CountResult { count: space.count(&[], budget)?, exactness: space.exactness() })
}

/// Boundary patterns u on F ∩ ∂_S F with their extension counts |E(u)|.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionTable {
    pub domain: FiniteSet,
    pub margin: f64,
    /// Boundary cells in lexicographic order; row keys follow this order.
    pub boundary: Vec<Point>,
    pub rows: BTreeMap<Vec<Symbol>, BigUint>,
    pub exactness: Exactness,
}

impl ExtensionTable {
    pub fn total(&self) -> BigUint {
        self.rows.values().sum()
    }

    pub fn row_pattern(&self, key: &[Symbol]) -> Pattern {
        Pattern::from_cells(self.domain.dim(), self.boundary.iter().cloned().zip(key.iter().copied()))
    }

    /// Positions of the boundary cells inside the domain's cell order.
    pub fn boundary_positions(&self) -> Vec<usize> {
        let cells = self.domain.to_vec();
        self.boundary.iter().map(|b| cells.binary_search(b).expect("boundary inside domain")).collect()
    }
}

/// The extension table of `set` with boundary margin `s`.
pub fn extension_table(spec: &SftSpec, set: &FiniteSet, s: f64, margin: Option<i64>, budget: &mut Budget) -> Result<ExtensionTable> {
    let boundary_set = set.boundary_inner(s);
    let boundary = boundary_set.to_vec();
    let cells = set.to_vec();
    let bpos: Vec<usize> = boundary.iter().map(|b| cells.binary_search(b).expect("subset")).collect();
    let mut rows = BTreeMap::new();
    let exactness;
    if spec.is_full_shift() {
        let k = spec.alphabet_size();
        let e = BigUint::from(k).pow((set.len() - boundary.len()) as u32);
        let bspace = PatternSpace::new(spec, &boundary_set, None)?;
        bspace.for_each(&[], budget, &mut |u| {
            rows.insert(u.to_vec(), e.clone());
            Ok(true)
        })?;
        exactness = Exactness::Exact;
    } else if let Some(n) = interval_len(set) {
        let g = LineGraph::new(spec)?;
        let lo = cells[0][0];
        let bspace = PatternSpace::new(spec, &boundary_set, None)?;
        let mut keys = Vec::new();
        bspace.for_each(&[], budget, &mut |u| {
            keys.push(u.to_vec());
            Ok(true)
        })?;
        for u in keys {
            budget.spend((n * g.num_states()) as u64)?;
            let mut fixed: Vec<Option<Symbol>> = vec![None; n];
            for (b, &v) in boundary.iter().zip(&u) {
                fixed[(b[0] - lo) as usize] = Some(v);
            }
            let c = g.count_words(n, &|i| fixed[i]);
            if !c.is_zero() {
                rows.insert(u, c);
            }
        }
        exactness = Exactness::Exact;
    } else {
        let space = PatternSpace::new(spec, set, margin)?;
        space.for_each(&[], budget, &mut |w| {
            let key: Vec<Symbol> = bpos.iter().map(|&i| w[i]).collect();
            *rows.entry(key).or_insert_with(BigUint::zero) += BigUint::one();
            Ok(true)
        })?;
        exactness = space.exactness();
    }
    Ok(ExtensionTable { domain: set.clone(), margin: s, boundary, rows, exactness })
}

/// The explicit list E(u): admissible patterns on `set` (values in cell
/// order) whose restriction to the inner boundary is `u`.
pub fn extensions_of(spec: &SftSpec, set: &FiniteSet, s: f64, u: &[Symbol], margin: Option<i64>, budget: &mut Budget) -> Result<Vec<Vec<Symbol>>> {
    let cells = set.to_vec();
    let boundary = set.boundary_inner(s).to_vec();
    let mut fixed = vec![None; cells.len()];
    for (b, &v) in boundary.iter().zip(u) {
        fixed[cells.binary_search(b).expect("subset")] = Some(v);
    }
    let space = PatternSpace::new(spec, set, margin)?;
    let mut out = Vec::new();
    space.for_each(&fixed, budget, &mut |w| {
        out.push(w.to_vec());
        Ok(true)
    })?;
    Ok(out)
}

/// A normalized log-count for one box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate<F> {
    pub box_id: usize,
    pub cells: usize,
    pub log2_count: F,
    pub per_site: F,
    pub exactness: Exactness,
}

/// log₂(count)/|box| for each box.
pub fn entropy_estimates<F: Real>(spec: &SftSpec, boxes: &[FiniteSet], margin: Option<i64>, budget: &mut Budget) -> Result<Vec<EntropyEstimate<F>>> {
    boxes
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let c = count_patterns(spec, b, margin, budget)?;
            let log2_count: F = if c.count.is_zero() { F::neg_infinity() } else { log2_big(&c.count) };
            Ok(EntropyEstimate { box_id: i, cells: b.len(), log2_count, per_site: log2_count / F::from_count(b.len()), exactness: c.exactness })
        })
        .collect()
}

fn torus_csp(spec: &SftSpec, lattice: &LatticeSubgroup<i64>) -> (LocalCsp, usize) {
    let probe = PeriodicConfig::constant(lattice.clone(), 0);
    let cells = lattice.fundamental_domain_points();
    let placements = cells.iter().map(|t| spec.window().iter().map(|w| probe.index_of(&add(t, w))).collect()).collect();
    (LocalCsp::from_placements(cells.len(), placements), cells.len())
}

/// All points of X ∩ Fix(L), enumerated on the torus Z^d / L.
pub fn fixed_points(spec: &SftSpec, lattice: &LatticeSubgroup<i64>, budget: &mut Budget) -> Result<Vec<PeriodicConfig>> {
    let (csp, _) = torus_csp(spec, lattice);
    let mut out = Vec::new();
    csp.search(spec, &[], budget, &mut |v| {
        out.push(PeriodicConfig::new(lattice.clone(), v.to_vec()));
        Ok(true)
    })?;
    Ok(out)
}

pub fn count_fixed_points(spec: &SftSpec, lattice: &LatticeSubgroup<i64>, budget: &mut Budget) -> Result<BigUint> {
    let (csp, n) = torus_csp(spec, lattice);
    if spec.is_full_shift() {
        return Ok(BigUint::from(spec.alphabet_size()).pow(n as u32));
    }
    if spec.dim() == 1 {
        // closed walks of length n in the window graph
        budget.spend(n as u64)?;
        return Ok(LineGraph::new(spec)?.periodic_count(n));
    }
    let mut c = BigUint::zero();
    csp.search(spec, &[], budget, &mut |_| {
        c += BigUint::one();
        Ok(true)
    })?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::is_periodic_admissible;
    use proptest::prelude::*;

    fn fib_oracle(n: usize) -> BigUint {
        // Binary words of length n without "11": F(n+2).
        let (mut a, mut b) = (BigUint::one(), BigUint::from(2u32));
        for _ in 1..n {
            let c = &a + &b;
            a = b;
            b = c;
        }
        if n == 0 {
            BigUint::one()
        } else {
            b
        }
    }

    #[test]
    fn count_examples() {
        let b = &mut Budget::unlimited();
        let full = SftSpec::full_shift(2, 2);
        assert_eq!(count_patterns(&full, &FiniteSet::cube(2, 0, 2), None, b).unwrap().count, BigUint::from(512u32));
        let g = SftSpec::golden_mean();
        assert_eq!(count_patterns(&g, &FiniteSet::interval(0, 4), None, b).unwrap().count, BigUint::from(13u32));
        assert_eq!(count_patterns(&g, &FiniteSet::interval(0, 1), None, b).unwrap().count, BigUint::from(3u32));
        for n in 1..=25 {
            assert_eq!(count_patterns(&g, &FiniteSet::interval(0, n as i64 - 1), None, b).unwrap().count, fib_oracle(n));
        }
    }

    #[test]
    fn extension_table_examples() {
        let b = &mut Budget::unlimited();
        let full = SftSpec::full_shift(2, 1);
        let t = extension_table(&full, &FiniteSet::interval(0, 8), 1.0, None, b).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert!(t.rows.values().all(|c| *c == BigUint::from(128u32)));

        let g = SftSpec::golden_mean();
        let t = extension_table(&g, &FiniteSet::interval(0, 4), 1.0, None, b).unwrap();
        let got: Vec<(Vec<Symbol>, u32)> = t.rows.iter().map(|(k, v)| (k.clone(), v.to_u32_digits().first().copied().unwrap_or(0))).collect();
        assert_eq!(got, vec![(vec![0, 0], 5), (vec![0, 1], 3), (vec![1, 0], 3), (vec![1, 1], 2)]);
        // Brute force over 32 strings.
        for (u, c) in &t.rows {
            let brute = (0u32..32).filter(|w| w & (w >> 1) == 0 && (w & 1) as u8 == u[0] && ((w >> 4) & 1) as u8 == u[1]).count();
            assert_eq!(*c, BigUint::from(brute));
        }
        let tiny = FiniteSet::interval(0, 1);
        let t = extension_table(&g, &tiny, 1.0, None, b).unwrap();
        assert!(t.rows.values().all(|c| c.is_one()));
        assert_eq!(t.total(), BigUint::from(3u32));
    }

    #[test]
    fn explicit_extensions_match_counts() {
        let b = &mut Budget::unlimited();
        let g = SftSpec::golden_mean();
        let set = FiniteSet::interval(0, 6);
        let t = extension_table(&g, &set, 1.0, None, b).unwrap();
        for (u, c) in &t.rows {
            assert_eq!(BigUint::from(extensions_of(&g, &set, 1.0, u, None, b).unwrap().len()), *c);
        }
    }

    #[test]
    fn entropy_examples() {
        let b = &mut Budget::unlimited();
        let full4 = SftSpec::full_shift(4, 1);
        let boxes: Vec<FiniteSet> = (1..10).map(|n| FiniteSet::interval(0, n)).collect();
        for e in entropy_estimates::<f64>(&full4, &boxes, None, b).unwrap() {
            assert_eq!(e.per_site, 2.0);
        }
        let g = SftSpec::golden_mean();
        let boxes: Vec<FiniteSet> = (4..=20).map(|n| FiniteSet::interval(0, n)).collect();
        let est = entropy_estimates::<f64>(&g, &boxes, None, b).unwrap();
        let target = ((1.0 + 5f64.sqrt()) / 2.0).log2();
        let errs: Vec<f64> = est.iter().map(|e| (e.per_site - target).abs()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
        let one = SftSpec::full_shift(1, 1);
        assert_eq!(entropy_estimates::<f64>(&one, &boxes[..1], None, b).unwrap()[0].per_site, 0.0);
    }

    #[test]
    fn fixed_point_examples() {
        let b = &mut Budget::unlimited();
        let full = SftSpec::full_shift(2, 1);
        assert_eq!(fixed_points(&full, &LatticeSubgroup::scaled(1, 3), b).unwrap().len(), 8);
        let g = SftSpec::golden_mean();
        let g_graph = LineGraph::new(&g).unwrap();
        let mut lucas = (BigUint::from(2u32), BigUint::one());
        for n in 1..=15 {
            lucas = (lucas.1.clone(), &lucas.0 + &lucas.1);
            let pts = fixed_points(&g, &LatticeSubgroup::scaled(1, n), b).unwrap();
            assert_eq!(BigUint::from(pts.len()), lucas.0, "n = {n}");
            assert_eq!(g_graph.periodic_count(n as usize), lucas.0);
            assert_eq!(count_fixed_points(&g, &LatticeSubgroup::scaled(1, n), b).unwrap(), lucas.0);
            assert!(pts.iter().all(|p| is_periodic_admissible(&g, p)));
        }
        let full2 = SftSpec::full_shift(2, 2);
        assert_eq!(fixed_points(&full2, &LatticeSubgroup::scaled(2, 2), b).unwrap().len(), 16);
        assert_eq!(count_fixed_points(&full2, &LatticeSubgroup::scaled(2, 2), b).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn fixed_points_are_monotone_under_refinement() {
        let b = &mut Budget::unlimited();
        let h = SftSpec::triangular_hard_square();
        let coarse = LatticeSubgroup::from_basis(vec![vec![2, 1], vec![0, 2]]).unwrap();
        let fine = coarse.intersect(&LatticeSubgroup::scaled(2, 4));
        let big: Vec<PeriodicConfig> = fixed_points(&h, &fine, b).unwrap();
        for p in fixed_points(&h, &coarse, b).unwrap() {
            assert!(big.contains(&p.reperiodize(&fine).unwrap()));
        }
    }

    #[test]
    fn index_fact_for_full_shifts() {
        let b = &mut Budget::unlimited();
        for k in [2usize, 3] {
            let spec = SftSpec::full_shift(k, 2);
            let l = LatticeSubgroup::from_basis(vec![vec![2, 1], vec![0, 3]]).unwrap();
            let c = count_patterns(&spec, &l.fundamental_domain(), None, b).unwrap().count;
            let h: f64 = log2_big::<f64>(&c) / l.index() as f64;
            assert!((h - (k as f64).log2()).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn extension_rows_sum_to_count(lo in -3i64..3, len in 1i64..9, s in 1i64..3) {
            let b = &mut Budget::unlimited();
            let g = SftSpec::golden_mean();
            let set = FiniteSet::interval(lo, lo + len - 1);
            let t = extension_table(&g, &set, s as f64, None, b).unwrap();
            prop_assert_eq!(t.total(), count_patterns(&g, &set, None, b).unwrap().count);
            prop_assert!(t.rows.values().all(|c| !c.is_zero()));
        }

        #[test]
        fn hard_square_rows_sum_to_count(w in 1i64..4, h in 1i64..4) {
            let b = &mut Budget::unlimited();
            let spec = SftSpec::triangular_hard_square();
            let set = FiniteSet::cuboid(&[0, 0], &[w, h]);
            let t = extension_table(&spec, &set, 1.0, None, b).unwrap();
            prop_assert_eq!(t.total(), count_patterns(&spec, &set, None, b).unwrap().count);
        }
    }
}
