//! Exhaustive enumeration of admissible patterns on a finite set.
//!
//! One-dimensional specs use the trimmed transfer graph, so every enumerated
//! pattern is globally admissible. Higher-dimensional specs enumerate locally
//! admissible patterns, optionally keeping only those that extend to a margin.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::count::Exactness;
use super::{LineGraph, Pattern, SftSpec, Symbol};
use crate::budget::Budget;
use crate::error::Result;
use crate::lattice::{add, FiniteSet, Point};

/// Window placements grouped by the cell that completes them.
#[derive(Clone, Debug)]
pub(crate) struct LocalCsp {
    n: usize,
    by_completion: Vec<Vec<Vec<usize>>>,
}

impl LocalCsp {
    /// Placements fully inside `cells`.
    pub fn on_cells(spec: &SftSpec, cells: &[Point]) -> Self {
        let index: HashMap<&Point, usize> = cells.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut by_completion = vec![Vec::new(); cells.len()];
        for t in cells {
            let idx: Option<Vec<usize>> = spec.window().iter().map(|w| index.get(&add(t, w)).copied()).collect();
            if let Some(idx) = idx {
                let last = *idx.iter().max().expect("window is nonempty");
                by_completion[last].push(idx);
            }
        }
        LocalCsp { n: cells.len(), by_completion }
    }

    /// Placements given directly as index lists (used for tori).
    pub fn from_placements(n: usize, placements: Vec<Vec<usize>>) -> Self {
        let mut by_completion = vec![Vec::new(); n];
        for idx in placements {
            let last = *idx.iter().max().expect("window is nonempty");
            by_completion[last].push(idx);
        }
        LocalCsp { n, by_completion }
    }

    #[inline]
    fn ok_at(&self, spec: &SftSpec, i: usize, vals: &[Symbol], buf: &mut Vec<Symbol>) -> bool {
        self.by_completion[i].iter().all(|idx| {
            buf.clear();
            buf.extend(idx.iter().map(|&j| vals[j]));
            spec.window_ok(buf)
        })
    }

    /// Depth-first search; `f` returns false to stop. Returns false if stopped.
    pub fn search(
        &self,
        spec: &SftSpec,
        fixed: &[Option<Symbol>],
        budget: &mut Budget,
        f: &mut dyn FnMut(&[Symbol]) -> Result<bool>,
    ) -> Result<bool> {
        let mut vals = vec![0 as Symbol; self.n];
        let mut buf = Vec::new();
        self.rec(spec, 0, fixed, &mut vals, &mut buf, budget, f)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        spec: &SftSpec,
        i: usize,
        fixed: &[Option<Symbol>],
        vals: &mut Vec<Symbol>,
        buf: &mut Vec<Symbol>,
        budget: &mut Budget,
        f: &mut dyn FnMut(&[Symbol]) -> Result<bool>,
    ) -> Result<bool> {
        if i == self.n {
            return f(vals);
        }
        let (lo, hi) = match fixed.get(i).copied().flatten() {
            Some(s) => (s as usize, s as usize + 1),
            None => (0, spec.alphabet_size()),
        };
        for s in lo..hi {
            budget.spend(1)?;
            vals[i] = s as Symbol;
            if self.ok_at(spec, i, vals, buf) && !self.rec(spec, i + 1, fixed, vals, buf, budget, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn exists(&self, spec: &SftSpec, fixed: &[Option<Symbol>], budget: &mut Budget) -> Result<bool> {
        let mut found = false;
        self.search(spec, fixed, budget, &mut |_| {
            found = true;
            Ok(false)
        })?;
        Ok(found)
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Free,
    Line { graph: LineGraph, positions: Vec<i64> },
    Local { csp: LocalCsp, extension: Option<(LocalCsp, Vec<usize>, usize)> },
}

/// The admissible patterns on a fixed finite set.
#[derive(Clone, Debug)]
pub struct PatternSpace<'a> {
    spec: &'a SftSpec,
    cells: Vec<Point>,
    engine: Engine,
    margin: Option<i64>,
}

impl<'a> PatternSpace<'a> {
    /// `margin` only matters for d ≥ 2: patterns must then extend to ball_margin(set).
    pub fn new(spec: &'a SftSpec, set: &FiniteSet, margin: Option<i64>) -> Result<Self> {
        let cells = set.to_vec();
        let engine = if spec.is_full_shift() {
            Engine::Free
        } else if spec.dim() == 1 {
            Engine::Line { graph: LineGraph::new(spec)?, positions: cells.iter().map(|p| p[0]).collect() }
        } else {
            let csp = LocalCsp::on_cells(spec, &cells);
            let extension = margin.filter(|&r| r > 0).map(|r| {
                // Cells of F first so the fixed prefix is checked before branching.
                let ball = set.ball(r);
                let mut order = cells.clone();
                order.extend(ball.difference(set).to_vec());
                let ext = LocalCsp::on_cells(spec, &order);
                let map = (0..cells.len()).collect();
                (ext, map, order.len())
            });
            Engine::Local { csp, extension }
        };
        Ok(PatternSpace { spec, cells, engine, margin })
    }

    pub fn cells(&self) -> &[Point] {
        &self.cells
    }

    pub fn exactness(&self) -> Exactness {
        match &self.engine {
            Engine::Free | Engine::Line { .. } => Exactness::Exact,
            Engine::Local { extension: Some(_), .. } => Exactness::ExtendsToMargin(self.margin.unwrap_or(0)),
            Engine::Local { extension: None, .. } => Exactness::LocalUpperBound,
        }
    }

    /// Visits every admissible pattern agreeing with `fixed` (values in cell
    /// order); `f` returns false to stop early. Returns false if stopped.
    pub fn for_each(
        &self,
        fixed: &[Option<Symbol>],
        budget: &mut Budget,
        f: &mut dyn FnMut(&[Symbol]) -> Result<bool>,
    ) -> Result<bool> {
        let n = self.cells.len();
        let fixed: Vec<Option<Symbol>> = (0..n).map(|i| fixed.get(i).copied().flatten()).collect();
        match &self.engine {
            Engine::Free => {
                let csp = LocalCsp { n, by_completion: vec![Vec::new(); n] };
                csp.search(self.spec, &fixed, budget, f)
            }
            Engine::Line { graph, positions } => {
                let mut vals = Vec::with_capacity(n);
                line_rec(self.spec, graph, positions, 0, graph.initial(), &fixed, &mut vals, budget, f)
            }
            Engine::Local { csp, extension } => match extension {
                None => csp.search(self.spec, &fixed, budget, f),
                Some((ext, map, total)) => {
                    let mut inner_budget_error = None;
                    let stopped = !csp.search(self.spec, &fixed, budget, &mut |vals| {
                        let mut fx = vec![None; *total];
                        for (i, &j) in map.iter().enumerate() {
                            fx[j] = Some(vals[i]);
                        }
                        let mut b = Budget::new(budget_left_hint());
                        match ext.exists(self.spec, &fx, &mut b) {
                            Ok(true) => f(vals),
                            Ok(false) => Ok(true),
                            Err(e) => {
                                inner_budget_error = Some(e);
                                Ok(false)
                            }
                        }
                    })?;
                    if let Some(e) = inner_budget_error {
                        return Err(e);
                    }
                    Ok(!stopped)
                }
            },
        }
    }

    pub fn count(&self, fixed: &[Option<Symbol>], budget: &mut Budget) -> Result<BigUint> {
        if let Engine::Free = self.engine {
            let free = (0..self.cells.len()).filter(|&i| fixed.get(i).copied().flatten().is_none()).count();
            return Ok(BigUint::from(self.spec.alphabet_size()).pow(free as u32));
        }
        let mut c = BigUint::zero();
        self.for_each(fixed, budget, &mut |_| {
            c += BigUint::one();
            Ok(true)
        })?;
        Ok(c)
    }

    pub fn first(&self, fixed: &[Option<Symbol>], budget: &mut Budget) -> Result<Option<Vec<Symbol>>> {
        let mut out = None;
        self.for_each(fixed, budget, &mut |v| {
            out = Some(v.to_vec());
            Ok(false)
        })?;
        Ok(out)
    }

    pub fn exists(&self, fixed: &[Option<Symbol>], budget: &mut Budget) -> Result<bool> {
        Ok(self.first(fixed, budget)?.is_some())
    }

    pub fn pattern(&self, values: &[Symbol]) -> Pattern {
        Pattern::from_cells(self.spec.dim(), self.cells.iter().cloned().zip(values.iter().copied()))
    }
}

/// Node budget for each inner extension search.
fn budget_left_hint() -> u64 {
    5_000_000
}

#[allow(clippy::too_many_arguments)]
fn line_rec(
    spec: &SftSpec,
    graph: &LineGraph,
    positions: &[i64],
    i: usize,
    set: Vec<bool>,
    fixed: &[Option<Symbol>],
    vals: &mut Vec<Symbol>,
    budget: &mut Budget,
    f: &mut dyn FnMut(&[Symbol]) -> Result<bool>,
) -> Result<bool> {
    if i == positions.len() {
        return f(vals);
    }
    let mut base = set;
    if i > 0 {
        for _ in positions[i - 1] + 1..positions[i] {
            base = graph.step(&base, None);
        }
    }
    let (lo, hi) = match fixed[i] {
        Some(s) => (s as usize, s as usize + 1),
        None => (0, spec.alphabet_size()),
    };
    for s in lo..hi {
        budget.spend(1)?;
        let next = graph.step(&base, Some(s as Symbol));
        if !next.iter().any(|&b| b) {
            continue;
        }
        vals.push(s as Symbol);
        let go_on = line_rec(spec, graph, positions, i + 1, next, fixed, vals, budget, f)?;
        vals.pop();
        if !go_on {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All admissible patterns on `set` under the engine's regime.
pub fn enumerate_patterns(spec: &SftSpec, set: &FiniteSet, margin: Option<i64>, budget: &mut Budget) -> Result<Vec<Pattern>> {
    let space = PatternSpace::new(spec, set, margin)?;
    let mut out = Vec::new();
    space.for_each(&[], budget, &mut |v| {
        out.push(space.pattern(v));
        Ok(true)
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::is_locally_admissible;

    #[test]
    fn golden_mean_enumeration_matches_brute_force() {
        let spec = SftSpec::golden_mean();
        let set = FiniteSet::interval(0, 4);
        let pats = enumerate_patterns(&spec, &set, None, &mut Budget::unlimited()).unwrap();
        let brute = (0u32..32).filter(|b| b & (b >> 1) == 0).count();
        assert_eq!(pats.len(), brute);
        assert!(pats.iter().all(|p| is_locally_admissible(&spec, p)));
    }

    #[test]
    fn gapped_sets_use_global_admissibility() {
        // Window {0,2}: forbid 1 at distance 2. Cells {0,2} with both 1 are excluded.
        let spec = SftSpec::new(1, vec!["0".into(), "1".into()], Some(0), None, vec![vec![0], vec![2]], vec![vec![1, 1]]).unwrap();
        let set = FiniteSet::from_points(1, vec![vec![0], vec![2]]);
        assert_eq!(enumerate_patterns(&spec, &set, None, &mut Budget::unlimited()).unwrap().len(), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = SftSpec::golden_mean();
        let set = FiniteSet::interval(0, 30);
        let err = enumerate_patterns(&spec, &set, None, &mut Budget::new(100)).unwrap_err();
        assert!(matches!(err, crate::error::Error::BudgetExceeded { limit: 100 }));
    }

    #[test]
    fn margin_filters_dead_patterns_in_2d() {
        let spec = SftSpec::triangular_hard_square();
        let set = FiniteSet::cube(2, 0, 1);
        let local = PatternSpace::new(&spec, &set, None).unwrap().count(&[], &mut Budget::unlimited()).unwrap();
        let ext = PatternSpace::new(&spec, &set, Some(1)).unwrap().count(&[], &mut Budget::unlimited()).unwrap();
        // Every locally admissible 2×2 pattern of the hard-square shift extends (pad with zeros).
        assert_eq!(local, ext);
        assert_eq!(local, BigUint::from(6u32));
    }
}
