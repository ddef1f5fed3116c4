use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{add, FiniteSet, LatticeSubgroup, Point};
use crate::sft::{FiniteConfig, Pattern, PatternSpace, PeriodicConfig, SftSpec, Symbol};

/// A local rule: given the cell `a` and the input values on `a + N` (in
/// neighborhood order), returns the output symbol at `a`.
pub type LocalRule = Arc<dyn Fn(&[i64], &[Symbol]) -> Symbol + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Table { table: Arc<HashMap<Vec<Symbol>, Symbol>>, fallback: Option<usize> },
    Local(LocalRule),
    Chain(Arc<ChainRule>),
}

/// A composite φ₀ ∘ φ₁ ∘ … evaluated stage by stage on shrinking regions.
struct ChainRule {
    parts: Vec<BlockMap>,
    /// `stages[i]` lists the cells where part i is evaluated and, for each,
    /// the indices of its inputs in the buffer of stage i + 1.
    stages: Vec<(Vec<Point>, Vec<Vec<usize>>)>,
}

/// A sliding block code, optionally commuting only with a sublattice.
#[derive(Clone)]
pub struct BlockMap {
    dim: usize,
    alphabet_size: usize,
    neighborhood: Vec<Point>,
    periodicity: Option<LatticeSubgroup<i64>>,
    rule: Rule,
}

impl fmt::Debug for BlockMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.rule {
            Rule::Table { table, .. } => format!("table({})", table.len()),
            Rule::Local(_) => "local".into(),
            Rule::Chain(c) => format!("chain({})", c.parts.len()),
        };
        f.debug_struct("BlockMap")
            .field("dim", &self.dim)
            .field("alphabet_size", &self.alphabet_size)
            .field("neighborhood", &self.neighborhood)
            .field("periodicity", &self.periodicity.as_ref().map(|l| l.to_string()))
            .field("rule", &kind)
            .finish()
    }
}

impl BlockMap {
    /// A map from a closure. The neighborhood is sorted and deduplicated
    /// before use; `rule` receives values in that sorted order.
    pub fn from_local(
        dim: usize,
        alphabet_size: usize,
        neighborhood: Vec<Point>,
        periodicity: Option<LatticeSubgroup<i64>>,
        rule: LocalRule,
    ) -> Result<Self> {
        let neighborhood = normalize_neighborhood(dim, neighborhood)?;
        if let Some(l) = &periodicity {
            if l.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: l.dim() });
            }
        }
        Ok(BlockMap { dim, alphabet_size, neighborhood, periodicity, rule: Rule::Local(rule) })
    }

    /// A shift-commuting map from an explicit table keyed by neighborhood
    /// values. Inputs missing from the table map to the value at the origin
    /// when the origin is in the neighborhood, and to symbol 0 otherwise.
    pub fn from_table(dim: usize, alphabet_size: usize, neighborhood: Vec<Point>, table: HashMap<Vec<Symbol>, Symbol>) -> Result<Self> {
        let sorted = normalize_neighborhood(dim, neighborhood.clone())?;
        if sorted.len() != neighborhood.len() {
            return Err(Error::InvalidMap("repeated neighborhood cell".into()));
        }
        // Re-key the table in sorted neighborhood order.
        let perm: Vec<usize> = sorted.iter().map(|p| neighborhood.iter().position(|q| q == p).expect("same cells")).collect();
        let mut rekeyed = HashMap::with_capacity(table.len());
        for (k, v) in table {
            if k.len() != sorted.len() {
                return Err(Error::InvalidMap(format!("rule input of length {} for neighborhood of size {}", k.len(), sorted.len())));
            }
            if (v as usize) >= alphabet_size || k.iter().any(|&s| s as usize >= alphabet_size) {
                return Err(Error::InvalidMap("symbol outside the alphabet".into()));
            }
            rekeyed.insert(perm.iter().map(|&i| k[i]).collect(), v);
        }
        let fallback = sorted.iter().position(|p| p.iter().all(|&c| c == 0));
        Ok(BlockMap { dim, alphabet_size, neighborhood: sorted, periodicity: None, rule: Rule::Table { table: Arc::new(rekeyed), fallback } })
    }

    pub fn identity(dim: usize, alphabet_size: usize) -> Self {
        BlockMap::from_local(dim, alphabet_size, vec![vec![0; dim]], None, Arc::new(|_, v| v[0])).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn neighborhood(&self) -> &[Point] {
        &self.neighborhood
    }

    pub fn neighborhood_set(&self) -> FiniteSet {
        FiniteSet::from_points(self.dim, self.neighborhood.iter().cloned())
    }

    pub fn radius(&self) -> i64 {
        self.neighborhood.iter().flat_map(|p| p.iter().map(|c| c.abs())).max().unwrap_or(0)
    }

    /// The lattice the map commutes with, when smaller than Z^d.
    pub fn periodicity(&self) -> Option<&LatticeSubgroup<i64>> {
        self.periodicity.as_ref()
    }

    /// The output at cell `a` given the input values on `a + N`.
    pub fn eval(&self, a: &[i64], vals: &[Symbol]) -> Symbol {
        match &self.rule {
            Rule::Table { table, fallback } => match table.get(vals) {
                Some(&s) => s,
                None => fallback.map_or(0, |i| vals[i]),
            },
            Rule::Local(f) => f(a, vals),
            Rule::Chain(c) => c.eval(a, vals),
        }
    }

    /// Output at `a` reading the input through `read`.
    pub fn eval_with(&self, a: &[i64], read: impl Fn(&[i64]) -> Symbol) -> Symbol {
        let vals: Vec<Symbol> = self.neighborhood.iter().map(|n| read(&add(a, n))).collect();
        self.eval(a, &vals)
    }

    fn parts(&self) -> Vec<BlockMap> {
        match &self.rule {
            Rule::Chain(c) => c.parts.clone(),
            _ => vec![self.clone()],
        }
    }

    /// φ ∘ ψ: apply `other` first.
    pub fn compose(&self, other: &BlockMap) -> BlockMap {
        assert_eq!(self.dim, other.dim, "dimension");
        assert_eq!(self.alphabet_size, other.alphabet_size, "alphabet");
        let mut parts = self.parts();
        parts.extend(other.parts());
        BlockMap::chain(parts)
    }

    /// The composite of `maps`, the first applied last.
    pub fn compose_all(maps: &[BlockMap]) -> BlockMap {
        assert!(!maps.is_empty());
        BlockMap::chain(maps.iter().flat_map(|m| m.parts()).collect())
    }

    fn chain(parts: Vec<BlockMap>) -> BlockMap {
        if parts.len() == 1 {
            return parts.into_iter().next().expect("one part");
        }
        let dim = parts[0].dim;
        let mut regions: Vec<Vec<Point>> = vec![vec![vec![0; dim]]];
        for p in &parts {
            let last = regions.last().expect("nonempty");
            let next: BTreeSet<Point> = last.iter().flat_map(|r| p.neighborhood.iter().map(move |n| add(r, n))).collect();
            regions.push(next.into_iter().collect());
        }
        let mut stages = Vec::with_capacity(parts.len());
        for (i, p) in parts.iter().enumerate() {
            let next = &regions[i + 1];
            let gather = regions[i]
                .iter()
                .map(|r| p.neighborhood.iter().map(|n| next.binary_search(&add(r, n)).expect("inside next region")).collect())
                .collect();
            stages.push((regions[i].clone(), gather));
        }
        let periodicity = parts.iter().filter_map(|p| p.periodicity.clone()).reduce(|a, b| a.intersect(&b));
        BlockMap {
            dim,
            alphabet_size: parts[0].alphabet_size,
            neighborhood: regions.pop().expect("outermost region"),
            periodicity,
            rule: Rule::Chain(Arc::new(ChainRule { parts, stages })),
        }
    }

    /// Replaces the rule by a lookup table over the admissible neighborhood
    /// patterns of `spec` (locally admissible in d ≥ 2).
    pub fn tabulate(&self, spec: &SftSpec, budget: &mut Budget) -> Result<BlockMap> {
        if self.periodicity.is_some() {
            return Err(Error::Precondition("only shift-commuting maps have a single rule table".into()));
        }
        let space = PatternSpace::new(spec, &self.neighborhood_set(), None)?;
        let origin = vec![0; self.dim];
        let mut table = HashMap::new();
        space.for_each(&[], budget, &mut |v| {
            table.insert(v.to_vec(), self.eval(&origin, v));
            Ok(true)
        })?;
        let fallback = self.neighborhood.iter().position(|p| p.iter().all(|&c| c == 0));
        Ok(BlockMap { rule: Rule::Table { table: Arc::new(table), fallback }, ..self.clone() })
    }

    /// The rule table, if the map is stored as one.
    pub fn table(&self) -> Option<&HashMap<Vec<Symbol>, Symbol>> {
        match &self.rule {
            Rule::Table { table, .. } => Some(table),
            _ => None,
        }
    }

    fn check_lattice(&self, l: &LatticeSubgroup<i64>) -> Result<()> {
        match &self.periodicity {
            Some(p) if !l.is_subgroup_of(p) => Err(Error::IncompatibleLattice(l.to_string())),
            _ => Ok(()),
        }
    }

    pub fn apply_periodic(&self, x: &PeriodicConfig) -> Result<PeriodicConfig> {
        self.check_lattice(x.lattice())?;
        let values = x.lattice().fundamental_domain_points().iter().map(|a| self.eval_with(a, |p| x.get(p))).collect();
        Ok(PeriodicConfig::new(x.lattice().clone(), values))
    }

    /// True iff the map sends the all-`zero` configuration to itself.
    pub fn fixes_zero(&self, zero: Symbol) -> bool {
        let zeros = vec![zero; self.neighborhood.len()];
        match &self.periodicity {
            None => self.eval(&vec![0; self.dim], &zeros) == zero,
            Some(l) => l.fundamental_domain_points().iter().all(|a| self.eval(a, &zeros) == zero),
        }
    }

    pub fn apply_finite(&self, x: &FiniteConfig) -> Result<FiniteConfig> {
        let zero = x.zero();
        if !self.fixes_zero(zero) {
            return Err(Error::ZeroNotFixed);
        }
        let mut candidates = BTreeSet::new();
        for s in x.cells().keys() {
            for n in &self.neighborhood {
                candidates.insert(crate::lattice::sub(s, n));
            }
        }
        let cells: Vec<(Point, Symbol)> = candidates
            .into_iter()
            .filter_map(|a| {
                let v = self.eval_with(&a, |p| x.get(p));
                (v != zero).then_some((a, v))
            })
            .collect();
        Ok(FiniteConfig::from_cells(self.dim, zero, cells))
    }

    /// Applies the map wherever the whole neighborhood lies in the domain.
    pub fn apply_pattern(&self, x: &Pattern) -> Pattern {
        let cells = x
            .cells()
            .keys()
            .filter_map(|a| {
                let vals: Option<Vec<Symbol>> = self.neighborhood.iter().map(|n| x.get(&add(a, n))).collect();
                vals.map(|v| (a.clone(), self.eval(a, &v)))
            })
            .collect::<Vec<_>>();
        Pattern::from_cells(self.dim, cells)
    }
}

impl ChainRule {
    fn eval(&self, a: &[i64], vals: &[Symbol]) -> Symbol {
        let mut buf = vals.to_vec();
        let mut inputs = Vec::new();
        for i in (0..self.parts.len()).rev() {
            let (region, gather) = &self.stages[i];
            let part = &self.parts[i];
            let periodic = part.periodicity.is_some();
            let mut out = Vec::with_capacity(region.len());
            for (r, g) in region.iter().zip(gather) {
                inputs.clear();
                inputs.extend(g.iter().map(|&k| buf[k]));
                let cell = if periodic { add(a, r) } else { Vec::new() };
                out.push(part.eval(&cell, &inputs));
            }
            buf = out;
        }
        buf[0]
    }
}

fn normalize_neighborhood(dim: usize, mut n: Vec<Point>) -> Result<Vec<Point>> {
    if n.is_empty() {
        return Err(Error::InvalidMap("empty neighborhood".into()));
    }
    if let Some(p) = n.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    n.sort();
    n.dedup();
    Ok(n)
}

/// Outcome of a rule comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// False when only locally admissible patterns were compared (d ≥ 2),
    /// so agreement on X may be claimed on more patterns than X realizes.
    pub exact: bool,
    pub patterns_checked: u64,
    pub witness: Option<Pattern>,
}

/// Decides φ = ψ on X by comparing outputs on every admissible pattern of
/// the union neighborhood, at every position of a common period cell.
pub fn maps_equal(phi: &BlockMap, psi: &BlockMap, spec: &SftSpec, budget: &mut Budget) -> Result<Verdict> {
    let dim = spec.dim();
    let window = phi.neighborhood_set().union(&psi.neighborhood_set());
    let positions: Vec<Point> = match (&phi.periodicity, &psi.periodicity) {
        (None, None) => vec![vec![0; dim]],
        (Some(a), None) | (None, Some(a)) => a.fundamental_domain_points(),
        (Some(a), Some(b)) => a.intersect(b).fundamental_domain_points(),
    };
    let exact = dim == 1 || spec.is_full_shift();
    let mut checked = 0u64;
    for a in positions {
        let set = window.translate(&a);
        let space = PatternSpace::new(spec, &set, None)?;
        let cells = space.cells().to_vec();
        let idx = |m: &BlockMap| -> Vec<usize> { m.neighborhood.iter().map(|n| cells.binary_search(&add(&a, n)).expect("in window")).collect() };
        let (pi, qi) = (idx(phi), idx(psi));
        let mut witness = None;
        let (mut u, mut w) = (Vec::new(), Vec::new());
        space.for_each(&[], budget, &mut |v| {
            checked += 1;
            u.clear();
            u.extend(pi.iter().map(|&i| v[i]));
            w.clear();
            w.extend(qi.iter().map(|&i| v[i]));
            if phi.eval(&a, &u) != psi.eval(&a, &w) {
                witness = Some(space.pattern(v));
                return Ok(false);
            }
            Ok(true)
        })?;
        if witness.is_some() {
            return Ok(Verdict { holds: false, exact, patterns_checked: checked, witness });
        }
    }
    Ok(Verdict { holds: true, exact, patterns_checked: checked, witness: None })
}

/// φ ∘ ψ = ψ ∘ φ on X.
pub fn exact_commutes(phi: &BlockMap, psi: &BlockMap, spec: &SftSpec, budget: &mut Budget) -> Result<Verdict> {
    maps_equal(&phi.compose(psi), &psi.compose(phi), spec, budget)
}

/// Certifies `psi` as a two-sided inverse of `phi` on X.
pub fn certify_inverse(phi: &BlockMap, psi: &BlockMap, spec: &SftSpec, budget: &mut Budget) -> Result<Verdict> {
    let id = BlockMap::identity(phi.dim, phi.alphabet_size);
    let left = maps_equal(&phi.compose(psi), &id, spec, budget)?;
    if !left.holds {
        return Ok(left);
    }
    let right = maps_equal(&psi.compose(phi), &id, spec, budget)?;
    Ok(Verdict { patterns_checked: left.patterns_checked + right.patterns_checked, ..right })
}
