use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::BlockMap;
use crate::error::{Error, Result};
use crate::lattice::Point;
use crate::perm::Perm;
use crate::sft::{SftSpec, Symbol};

/// σ_v: x ↦ (a ↦ x_{a+v}).
pub fn shift(dim: usize, alphabet_size: usize, v: &[i64]) -> Result<BlockMap> {
    BlockMap::from_local(dim, alphabet_size, vec![v.to_vec()], None, Arc::new(|_, vals| vals[0]))
}

/// Applies a permutation of the alphabet cellwise.
pub fn symbol_perm(dim: usize, perm: &Perm) -> Result<BlockMap> {
    let images: Vec<Symbol> = perm.0.iter().map(|&j| j as Symbol).collect();
    BlockMap::from_local(dim, perm.degree(), vec![vec![0; dim]], None, Arc::new(move |_, vals| images[vals[0] as usize]))
}

/// Digit tables for a product alphabet.
#[derive(Clone, Debug)]
struct Tracks {
    sizes: Vec<usize>,
    digits: Vec<Vec<usize>>,
}

impl Tracks {
    fn of(spec: &SftSpec) -> Result<Self> {
        let sizes = spec.tracks().ok_or(Error::NoTracks)?.to_vec();
        let digits = (0..spec.alphabet_size()).map(|s| crate::sft::digits_of(s, &sizes)).collect();
        Ok(Tracks { sizes, digits })
    }

    fn check(&self, t: usize) -> Result<()> {
        if t < self.sizes.len() {
            Ok(())
        } else {
            Err(Error::InvalidTrack(t))
        }
    }

    fn symbol(&self, digits: &[usize]) -> Symbol {
        crate::sft::symbol_of(digits, &self.sizes) as Symbol
    }
}

/// Exchanges the contents of tracks `i` and `j`, which must have equal size.
pub fn track_swap(spec: &SftSpec, i: usize, j: usize) -> Result<BlockMap> {
    let t = Tracks::of(spec)?;
    t.check(i)?;
    t.check(j)?;
    if t.sizes[i] != t.sizes[j] {
        return Err(Error::InvalidTrack(j));
    }
    let images: Vec<Symbol> = t
        .digits
        .iter()
        .map(|d| {
            let mut d = d.clone();
            d.swap(i, j);
            t.symbol(&d)
        })
        .collect();
    let dim = spec.dim();
    BlockMap::from_local(dim, spec.alphabet_size(), vec![vec![0; dim]], None, Arc::new(move |_, vals| images[vals[0] as usize]))
}

/// Shifts one track by `v` and leaves the others in place. Tracks are
/// numbered from 0.
pub fn partial_shift(spec: &SftSpec, track: usize, v: &[i64]) -> Result<BlockMap> {
    let t = Tracks::of(spec)?;
    t.check(track)?;
    let dim = spec.dim();
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    let origin = vec![0; dim];
    if v == origin.as_slice() {
        return Ok(BlockMap::identity(dim, spec.alphabet_size()));
    }
    let n = vec![origin.clone(), v.to_vec()];
    // Sorted order decides which slot holds the origin.
    let origin_slot = if origin < v.to_vec() { 0 } else { 1 };
    BlockMap::from_local(
        dim,
        spec.alphabet_size(),
        n,
        None,
        Arc::new(move |_, vals| {
            let mut d = t.digits[vals[origin_slot] as usize].clone();
            d[track] = t.digits[vals[1 - origin_slot] as usize][track];
            t.symbol(&d)
        }),
    )
}

/// A cylinder on one track: required digits at fixed offsets.
pub type Cylinder = BTreeMap<Point, usize>;

/// A clopen set given as a finite union of cylinders on one track.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub track: usize,
    pub cylinders: Vec<Cylinder>,
}

impl Condition {
    /// The whole space.
    pub fn all(track: usize) -> Self {
        Condition { track, cylinders: vec![Cylinder::new()] }
    }

    pub fn empty(track: usize) -> Self {
        Condition { track, cylinders: Vec::new() }
    }

    pub fn cylinder(track: usize, cells: impl IntoIterator<Item = (Point, usize)>) -> Self {
        Condition { track, cylinders: vec![cells.into_iter().collect()] }
    }

    pub fn union(&self, other: &Condition) -> Condition {
        assert_eq!(self.track, other.track);
        let mut cylinders = self.cylinders.clone();
        cylinders.extend(other.cylinders.iter().cloned());
        Condition { track: self.track, cylinders }
    }

    /// Pairwise intersections of cylinders; conflicting pairs drop out.
    pub fn intersect(&self, other: &Condition) -> Condition {
        assert_eq!(self.track, other.track);
        let mut cylinders = Vec::new();
        for a in &self.cylinders {
            'pair: for b in &other.cylinders {
                let mut c = a.clone();
                for (p, &d) in b {
                    match c.insert(p.clone(), d) {
                        Some(prev) if prev != d => continue 'pair,
                        _ => {}
                    }
                }
                cylinders.push(c);
            }
        }
        Condition { track: self.track, cylinders }
    }

    pub fn offsets(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.cylinders.iter().flat_map(|c| c.keys().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn matches(&self, read: impl Fn(&Point) -> usize) -> bool {
        self.cylinders.iter().any(|c| c.iter().all(|(p, &d)| read(p) == d))
    }
}

/// f_{π,C}: applies π to the digit of `perm_track` at the origin when the
/// configuration of the condition's track lies in C.
pub fn conditioned_perm(spec: &SftSpec, perm_track: usize, pi: &Perm, cond: &Condition) -> Result<BlockMap> {
    let t = Tracks::of(spec)?;
    t.check(perm_track)?;
    t.check(cond.track)?;
    if cond.track == perm_track {
        return Err(Error::InvalidCondition("condition must read a different track".into()));
    }
    if pi.degree() != t.sizes[perm_track] {
        return Err(Error::InvalidCondition(format!("permutation degree {} does not match track size {}", pi.degree(), t.sizes[perm_track])));
    }
    let dim = spec.dim();
    for c in &cond.cylinders {
        for (p, &d) in c {
            if p.len() != dim {
                return Err(Error::InvalidCondition(format!("offset {p:?} has wrong dimension")));
            }
            if d >= t.sizes[cond.track] {
                return Err(Error::InvalidCondition(format!("digit {d} outside the track alphabet")));
            }
        }
    }
    let origin = vec![0; dim];
    let mut n = cond.offsets();
    n.push(origin.clone());
    n.sort();
    n.dedup();
    let origin_slot = n.binary_search(&origin).expect("origin added");
    // Cylinders rewritten as (slot, digit) lists.
    let cyls: Vec<Vec<(usize, usize)>> =
        cond.cylinders.iter().map(|c| c.iter().map(|(p, &d)| (n.binary_search(p).expect("offset"), d)).collect()).collect();
    let ct = cond.track;
    let images = pi.0.clone();
    BlockMap::from_local(
        dim,
        spec.alphabet_size(),
        n,
        None,
        Arc::new(move |_, vals| {
            let hit = cyls.iter().any(|c| c.iter().all(|&(slot, d)| t.digits[vals[slot] as usize][ct] == d));
            let s = vals[origin_slot];
            if !hit {
                return s;
            }
            let mut d = t.digits[s as usize].clone();
            d[perm_track] = images[d[perm_track]];
            t.symbol(&d)
        }),
    )
}
