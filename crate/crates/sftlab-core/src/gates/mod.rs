//! Gates, gate lattices χ^H, gates built from extension tables, and the
//! permutation-group checks behind the generation lemmas.

mod groups;

pub use groups::{hypergraph_generation_check, universal_gates_check, GenerationReport};

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{sub, FiniteSet, LatticeSubgroup, Point};
use crate::morphisms::{exact_commutes, BlockMap, Verdict};
use crate::perm::{Parity, Perm};
use crate::sft::{extensions_of, is_locally_admissible, ExtensionTable, Pattern, PatternSpace, PeriodicConfig, SftSpec, Symbol};

/// A permutation of the admissible patterns on a finite domain D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    domain: FiniteSet,
    cells: Vec<Point>,
    patterns: Vec<Vec<Symbol>>,
    index: HashMap<Vec<Symbol>, usize>,
    perm: Perm,
    margin: i64,
}

impl Gate {
    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    /// Admissible patterns on D, values in lexicographic cell order.
    pub fn patterns(&self) -> &[Vec<Symbol>] {
        &self.patterns
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    /// Radius of the surroundings on which context safety was established.
    pub fn margin(&self) -> i64 {
        self.margin
    }

    /// The image of a D-pattern; inputs outside X|D are returned unchanged.
    pub fn apply_values(&self, w: &[Symbol]) -> Vec<Symbol> {
        match self.index.get(w) {
            Some(&i) => self.patterns[self.perm.apply(i)].clone(),
            None => w.to_vec(),
        }
    }

    pub fn parity(&self) -> Parity {
        self.perm.parity()
    }

    pub fn order(&self) -> num_bigint::BigUint {
        self.perm.order()
    }

    /// The gate with the inverse permutation.
    pub fn inverse(&self) -> Gate {
        Gate { perm: self.perm.inverse(), ..self.clone() }
    }
}

fn admissible_on(spec: &SftSpec, domain: &FiniteSet, margin: i64, budget: &mut Budget) -> Result<Vec<Vec<Symbol>>> {
    let space = PatternSpace::new(spec, domain, Some(margin))?;
    let mut out = Vec::new();
    space.for_each(&[], budget, &mut |v| {
        out.push(v.to_vec());
        Ok(true)
    })?;
    Ok(out)
}

/// Builds a gate from a partial map of D-patterns (values in lexicographic
/// cell order); unlisted patterns are fixed. The map must permute X|D and
/// every admissible surrounding on ball_margin(D) must stay admissible
/// after rewriting D.
pub fn validate_gate(
    spec: &SftSpec,
    domain: &FiniteSet,
    mapping: &HashMap<Vec<Symbol>, Vec<Symbol>>,
    margin: i64,
    budget: &mut Budget,
) -> Result<Gate> {
    let patterns = admissible_on(spec, domain, margin, budget)?;
    let index: HashMap<Vec<Symbol>, usize> = patterns.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut images = Vec::with_capacity(patterns.len());
    for p in &patterns {
        let q = mapping.get(p).unwrap_or(p);
        images.push(*index.get(q).ok_or(Error::NotBijective)?);
    }
    if mapping.keys().any(|k| !index.contains_key(k)) {
        return Err(Error::NotBijective);
    }
    let perm = Perm::from_images(images).map_err(|_| Error::NotBijective)?;
    let gate = Gate { domain: domain.clone(), cells: domain.to_vec(), patterns, index, perm, margin };
    check_context(spec, &gate, budget)?;
    Ok(gate)
}

fn check_context(spec: &SftSpec, gate: &Gate, budget: &mut Budget) -> Result<()> {
    let ball = gate.domain.ball(gate.margin);
    let space = PatternSpace::new(spec, &ball, None)?;
    let pos: Vec<usize> = gate.cells.iter().map(|c| space.cells().binary_search(c).expect("D inside its ball")).collect();
    let mut witness = None;
    let mut w = Vec::with_capacity(pos.len());
    space.for_each(&[], budget, &mut |v| {
        w.clear();
        w.extend(pos.iter().map(|&i| v[i]));
        let image = gate.apply_values(&w);
        if image == w {
            return Ok(true);
        }
        let mut y = v.to_vec();
        for (&i, &s) in pos.iter().zip(&image) {
            y[i] = s;
        }
        if !is_locally_admissible(spec, &space.pattern(&y)) {
            witness = Some(space.pattern(v));
            return Ok(false);
        }
        Ok(true)
    })?;
    match witness {
        Some(p) => Err(Error::ContextUnsafe { witness: p.cells().iter().map(|(c, &s)| (c.clone(), s)).collect() }),
        None => Ok(()),
    }
}

pub fn gate_parity(g: &Gate) -> Parity {
    g.parity()
}

/// The gate fixing ∂_S D that acts by the even permutation τ on E(u), in
/// the enumeration order of [`extensions_of`], and as the identity on the
/// other rows. Context safety follows from S ≥ R_X.
pub fn gate_from_extension_permutation(
    spec: &SftSpec,
    table: &ExtensionTable,
    u: &[Symbol],
    tau: &Perm,
    budget: &mut Budget,
) -> Result<Gate> {
    let window = spec.window_size();
    if table.margin < window as f64 {
        return Err(Error::MarginTooSmall { margin: table.margin.floor() as i64, window });
    }
    if tau.parity() == Parity::Odd {
        return Err(Error::OddPermutation);
    }
    let margin = match table.exactness {
        crate::sft::Exactness::ExtendsToMargin(r) => Some(r),
        _ => None,
    };
    let ext = extensions_of(spec, &table.domain, table.margin, u, margin, budget)?;
    if ext.len() != tau.degree() {
        return Err(Error::Precondition(format!("permutation degree {} but |E(u)| = {}", tau.degree(), ext.len())));
    }
    let patterns = admissible_on(spec, &table.domain, margin.unwrap_or(0), budget)?;
    let index: HashMap<Vec<Symbol>, usize> = patterns.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut images: Vec<usize> = (0..patterns.len()).collect();
    for (i, e) in ext.iter().enumerate() {
        let from = *index.get(e).ok_or(Error::NotBijective)?;
        images[from] = *index.get(&ext[tau.apply(i)]).ok_or(Error::NotBijective)?;
    }
    let perm = Perm::from_images(images)?;
    Ok(Gate { domain: table.domain.clone(), cells: table.domain.to_vec(), patterns, index, perm, margin: window })
}

/// χ^H: the gate applied on every translate h + D, h ∈ H. The translates
/// must be pairwise disjoint; cells outside them are left unchanged.
#[derive(Clone, Debug)]
pub struct GateLattice {
    gate: Gate,
    lattice: LatticeSubgroup<i64>,
    map: BlockMap,
}

impl GateLattice {
    pub fn new(gate: Gate, lattice: LatticeSubgroup<i64>, spec: &SftSpec) -> Result<Self> {
        let dim = spec.dim();
        if lattice.dim() != dim || gate.domain.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: lattice.dim() });
        }
        let mut slot_of: HashMap<Point, usize> = HashMap::new();
        for (j, t) in gate.cells.iter().enumerate() {
            if slot_of.insert(lattice.reduce_point(t), j).is_some() {
                return Err(Error::IncompatibleLattice(format!("{lattice} (translates of D overlap)")));
            }
        }
        let mut diffs: Vec<Point> = gate.cells.iter().flat_map(|a| gate.cells.iter().map(move |b| sub(b, a))).collect();
        diffs.sort();
        diffs.dedup();
        let origin_slot = diffs.binary_search(&vec![0; dim]).expect("0 ∈ D − D");
        // For tile slot j: neighborhood indices of the tile cells, in D order.
        let reads: Vec<Vec<usize>> = gate
            .cells
            .iter()
            .map(|t| gate.cells.iter().map(|c| diffs.binary_search(&sub(c, t)).expect("difference")).collect())
            .collect();
        let g = gate.clone();
        let h = lattice.clone();
        let rule = Arc::new(move |a: &[i64], vals: &[Symbol]| -> Symbol {
            match slot_of.get(&h.reduce_point(&a.to_vec())) {
                None => vals[origin_slot],
                Some(&j) => {
                    let w: Vec<Symbol> = reads[j].iter().map(|&i| vals[i]).collect();
                    g.apply_values(&w)[j]
                }
            }
        });
        let map = BlockMap::from_local(dim, spec.alphabet_size(), diffs, Some(lattice.clone()), rule)?;
        Ok(GateLattice { gate, lattice, map })
    }

    pub fn gate(&self) -> &Gate {
        &self.gate
    }

    pub fn lattice(&self) -> &LatticeSubgroup<i64> {
        &self.lattice
    }

    /// True iff the translates of D cover Z^d.
    pub fn tiles(&self) -> bool {
        self.gate.cells.len() as i64 == self.lattice.index()
    }

    pub fn as_block_map(&self) -> &BlockMap {
        &self.map
    }

    /// Applies χ^H to an L-periodic point. With `refine`, an L ⊄ H input is
    /// first viewed on the torus of L ∩ H; otherwise that is an error.
    pub fn apply_periodic(&self, x: &PeriodicConfig, refine: bool) -> Result<PeriodicConfig> {
        if refine && !x.lattice().is_subgroup_of(&self.lattice) {
            let common = x.lattice().intersect(&self.lattice);
            return self.map.apply_periodic(&x.reperiodize(&common)?);
        }
        self.map.apply_periodic(x)
    }

    pub fn apply_finite(&self, x: &crate::sft::FiniteConfig) -> Result<crate::sft::FiniteConfig> {
        self.map.apply_finite(x)
    }
}

/// Exact commutation of two gate lattices (strong commutation when both
/// gates come from different rows of one extension table).
pub fn strong_commutation_check(g1: &GateLattice, g2: &GateLattice, spec: &SftSpec, budget: &mut Budget) -> Result<Verdict> {
    exact_commutes(&g1.map, &g2.map, spec, budget)
}

/// Gate JSON: {"D": [...], "perm": [[in, out], ...], "H": "a,b;c,d"?}.
/// Patterns are strings of one-character symbol names or arrays of names,
/// listed in the lexicographic order of D.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateDoc {
    #[serde(rename = "D")]
    pub domain: Vec<Point>,
    pub perm: Vec<(serde_json::Value, serde_json::Value)>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<i64>,
}

fn parse_gate_pattern(spec: &SftSpec, v: &serde_json::Value) -> Result<Vec<Symbol>> {
    match v {
        serde_json::Value::String(s) => s.chars().map(|c| spec.symbol_index(&c.to_string())).collect(),
        serde_json::Value::Array(a) => a
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => spec.symbol_index(s),
                other => spec.symbol_index(&other.to_string()),
            })
            .collect(),
        other => Err(Error::InvalidMap(format!("bad gate pattern {other}"))),
    }
}

impl GateDoc {
    pub fn build(&self, spec: &SftSpec, budget: &mut Budget) -> Result<(Gate, Option<LatticeSubgroup<i64>>)> {
        let domain = FiniteSet::from_points(spec.dim(), self.domain.iter().cloned());
        let mut mapping = HashMap::new();
        for (a, b) in &self.perm {
            mapping.insert(parse_gate_pattern(spec, a)?, parse_gate_pattern(spec, b)?);
        }
        let gate = validate_gate(spec, &domain, &mapping, self.margin.unwrap_or(spec.window_size()), budget)?;
        let lattice = self.lattice.as_deref().map(LatticeSubgroup::parse).transpose()?;
        Ok((gate, lattice))
    }
}

/// Restriction of a pattern to D in the gate's cell order.
pub fn gate_input(gate: &Gate, x: &Pattern) -> Option<Vec<Symbol>> {
    gate.cells.iter().map(|c| x.get(c)).collect()
}

#[cfg(test)]
mod tests;
