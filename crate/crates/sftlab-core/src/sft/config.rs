use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{SftSpec, Symbol};
use crate::error::{Error, Result};
use crate::lattice::{add, FiniteSet, LatticeSubgroup, Point};

/// A symbol assignment on a finite domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    dim: usize,
    cells: BTreeMap<Point, Symbol>,
}

#[derive(Serialize, Deserialize)]
struct PatternDoc {
    dim: usize,
    support: Vec<Point>,
    values: Vec<Symbol>,
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternDoc { dim: self.dim, support: self.cells.keys().cloned().collect(), values: self.values() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PatternDoc::deserialize(d)?;
        if doc.support.len() != doc.values.len() || doc.support.iter().any(|p| p.len() != doc.dim) {
            return Err(serde::de::Error::custom("support and values disagree"));
        }
        Ok(Pattern::from_cells(doc.dim, doc.support.into_iter().zip(doc.values)))
    }
}

impl Pattern {
    pub fn new(dim: usize, cells: BTreeMap<Point, Symbol>) -> Self {
        Pattern { dim, cells }
    }

    pub fn from_cells<I: IntoIterator<Item = (Point, Symbol)>>(dim: usize, cells: I) -> Self {
        Pattern { dim, cells: cells.into_iter().collect() }
    }

    /// Values listed in the domain's lexicographic order.
    pub fn from_values(domain: &FiniteSet, values: &[Symbol]) -> Self {
        assert_eq!(domain.len(), values.len());
        Pattern { dim: domain.dim(), cells: domain.points().cloned().zip(values.iter().copied()).collect() }
    }

    /// A one-dimensional pattern from decimal digits, first digit at `start`.
    pub fn from_word(start: i64, word: &str) -> Self {
        Pattern {
            dim: 1,
            cells: word
                .chars()
                .enumerate()
                .map(|(i, c)| (vec![start + i as i64], c.to_digit(36).expect("digit") as Symbol))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &BTreeMap<Point, Symbol> {
        &self.cells
    }

    pub fn get(&self, p: &[i64]) -> Option<Symbol> {
        self.cells.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn domain(&self) -> FiniteSet {
        FiniteSet::from_points(self.dim, self.cells.keys().cloned())
    }

    /// Values in the domain's lexicographic order.
    pub fn values(&self) -> Vec<Symbol> {
        self.cells.values().copied().collect()
    }

    pub fn restrict(&self, set: &FiniteSet) -> Pattern {
        Pattern { dim: self.dim, cells: self.cells.iter().filter(|(p, _)| set.contains(p)).map(|(p, &s)| (p.clone(), s)).collect() }
    }

    /// The pattern moved by `v`: the value at `p` ends up at `p + v`.
    pub fn translate(&self, v: &[i64]) -> Pattern {
        Pattern { dim: self.dim, cells: self.cells.iter().map(|(p, &s)| (add(p, v), s)).collect() }
    }

    /// Digits of a one-dimensional pattern, left to right.
    pub fn to_word(&self) -> String {
        self.cells.values().map(|&s| std::char::from_digit(s as u32, 36).unwrap_or('?')).collect()
    }
}

/// An L-periodic configuration stored on the HNF digit box of L.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicConfig {
    lattice: LatticeSubgroup<i64>,
    values: Vec<Symbol>,
}

impl PeriodicConfig {
    /// `values` follow the lexicographic order of `lattice.fundamental_domain()`.
    pub fn new(lattice: LatticeSubgroup<i64>, values: Vec<Symbol>) -> Self {
        assert_eq!(values.len() as i64, lattice.index(), "one value per coset");
        PeriodicConfig { lattice, values }
    }

    pub fn constant(lattice: LatticeSubgroup<i64>, s: Symbol) -> Self {
        let n = lattice.index() as usize;
        PeriodicConfig { lattice, values: vec![s; n] }
    }

    pub fn lattice(&self) -> &LatticeSubgroup<i64> {
        &self.lattice
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    /// Position of the coset of `p` in `values`.
    pub fn index_of(&self, p: &[i64]) -> usize {
        let r = self.lattice.coset_reduce(p);
        let b = self.lattice.basis();
        r.iter().enumerate().fold(0usize, |acc, (i, &x)| acc * b[i][i] as usize + x as usize)
    }

    pub fn get(&self, p: &[i64]) -> Symbol {
        self.values[self.index_of(p)]
    }

    /// The same point viewed as periodic for a subgroup `finer ⊆ lattice`.
    pub fn reperiodize(&self, finer: &LatticeSubgroup<i64>) -> Result<PeriodicConfig> {
        if !finer.is_subgroup_of(&self.lattice) {
            return Err(Error::IncompatibleLattice(finer.to_string()));
        }
        let values = finer.fundamental_domain_points().iter().map(|p| self.get(p)).collect();
        Ok(PeriodicConfig { lattice: finer.clone(), values })
    }

    /// σ_v: the configuration a ↦ x(a + v).
    pub fn shift(&self, v: &[i64]) -> PeriodicConfig {
        let values = self.lattice.fundamental_domain_points().iter().map(|p| self.get(&add(p, v))).collect();
        PeriodicConfig { lattice: self.lattice.clone(), values }
    }

    /// Restriction to a finite set.
    pub fn pattern_on(&self, set: &FiniteSet) -> Pattern {
        Pattern::from_cells(set.dim(), set.points().map(|p| (p.clone(), self.get(p))))
    }
}

/// A configuration equal to the zero symbol outside a finite support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteConfig {
    dim: usize,
    zero: Symbol,
    cells: BTreeMap<Point, Symbol>,
}

#[derive(Serialize, Deserialize)]
struct FiniteConfigDoc {
    support: Vec<Point>,
    values: Vec<serde_json::Value>,
}

impl FiniteConfig {
    /// Zero-valued entries are dropped so the support is exactly the nonzero set.
    pub fn from_cells<I: IntoIterator<Item = (Point, Symbol)>>(dim: usize, zero: Symbol, cells: I) -> Self {
        FiniteConfig { dim, zero, cells: cells.into_iter().filter(|(_, s)| *s != zero).collect() }
    }

    pub fn zero_config(dim: usize, zero: Symbol) -> Self {
        FiniteConfig { dim, zero, cells: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero(&self) -> Symbol {
        self.zero
    }

    pub fn cells(&self) -> &BTreeMap<Point, Symbol> {
        &self.cells
    }

    #[inline]
    pub fn get(&self, p: &[i64]) -> Symbol {
        self.cells.get(p).copied().unwrap_or(self.zero)
    }

    pub fn support(&self) -> FiniteSet {
        FiniteSet::from_points(self.dim, self.cells.keys().cloned())
    }

    /// Size of the support.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// Moves the support by `v`.
    pub fn translate(&self, v: &[i64]) -> FiniteConfig {
        FiniteConfig { dim: self.dim, zero: self.zero, cells: self.cells.iter().map(|(p, &s)| (add(p, v), s)).collect() }
    }

    pub fn pattern_on(&self, set: &FiniteSet) -> Pattern {
        Pattern::from_cells(self.dim, set.points().map(|p| (p.clone(), self.get(p))))
    }

    pub fn from_json(spec: &SftSpec, text: &str) -> Result<Self> {
        let doc: FiniteConfigDoc = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let zero = spec.require_zero()?;
        if doc.support.len() != doc.values.len() {
            return Err(Error::InvalidSpec("support and values differ in length".into()));
        }
        let mut cells = Vec::new();
        for (p, v) in doc.support.into_iter().zip(doc.values) {
            if p.len() != spec.dim() {
                return Err(Error::DimensionMismatch { expected: spec.dim(), got: p.len() });
            }
            let name = match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            cells.push((p, spec.symbol_index(&name)?));
        }
        Ok(FiniteConfig::from_cells(spec.dim(), zero, cells))
    }

    pub fn to_json(&self, spec: &SftSpec) -> String {
        let doc = FiniteConfigDoc {
            support: self.cells.keys().cloned().collect(),
            values: self.cells.values().map(|&s| serde_json::Value::String(spec.symbol_name(s).to_string())).collect(),
        };
        serde_json::to_string(&doc).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_indexing() {
        let l = LatticeSubgroup::from_basis(vec![vec![2, 1], vec![0, 2]]).unwrap();
        let x = PeriodicConfig::new(l.clone(), vec![0, 1, 2, 3]);
        let fd = l.fundamental_domain().to_vec();
        for (i, p) in fd.iter().enumerate() {
            assert_eq!(x.get(p), i as Symbol);
            assert_eq!(x.get(&add(p, &[2, 0])), i as Symbol);
            assert_eq!(x.get(&add(p, &[1, 2])), i as Symbol);
        }
        let finer = l.intersect(&LatticeSubgroup::scaled(2, 4));
        let y = x.reperiodize(&finer).unwrap();
        for p in finer.fundamental_domain().points() {
            assert_eq!(y.get(p), x.get(p));
        }
    }

    #[test]
    fn finite_config_json() {
        let spec = SftSpec::golden_mean();
        let x = FiniteConfig::from_json(&spec, r#"{"support":[[0],[2]],"values":["1","1"]}"#).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(FiniteConfig::from_json(&spec, &x.to_json(&spec)).unwrap(), x);
        assert_eq!(x.translate(&[3]).support().to_vec(), vec![vec![3], vec![5]]);
    }
}
