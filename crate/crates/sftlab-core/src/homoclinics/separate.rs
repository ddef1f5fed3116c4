use std::collections::BTreeSet;

use serde::Serialize;

use super::orbit_equivalent;
use crate::error::{Error, Result};
use crate::lattice::{add, box_points, Point};
use crate::morphisms::{conditioned_perm, BlockMap, Condition, Cylinder};
use crate::perm::{Parity, Perm};
use crate::sft::{FiniteConfig, SftSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Moved {
    X,
    Y,
}

#[derive(Clone, Debug)]
pub struct Separation {
    pub map: BlockMap,
    pub moved: Moved,
    pub strategy: String,
    /// False when only an odd track permutation separates the points.
    pub even: bool,
}

/// An even permutation of {0, …, n−1} without fixed points (n ≥ 3).
fn even_derangement(n: usize) -> Option<Perm> {
    match n {
        0..=2 => None,
        4 => Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).ok(),
        n if n % 2 == 1 => Perm::from_cycles(n, &[(0..n).collect()]).ok(),
        n => Perm::from_cycles(n, &[vec![0, 1, 2], (3..n).collect()]).ok(),
    }
}

fn derangement(n: usize, even: bool) -> Option<Perm> {
    match even_derangement(n) {
        None if !even && n >= 2 => Perm::from_cycles(n, &[(0..n).collect()]).ok(),
        p => p,
    }
}

/// A permutation fixing 0 and moving every other digit.
fn nonzero_derangement(n: usize, even: bool) -> Option<Perm> {
    let inner = derangement(n.checked_sub(1)?, even)?;
    Some(Perm(std::iter::once(0).chain(inner.0.iter().map(|&i| i + 1)).collect()))
}

fn track_of(spec: &SftSpec, z: &FiniteConfig, t: usize, p: &[i64]) -> usize {
    spec.track_digits(z.get(p)).map(|d| d[t]).unwrap_or(0)
}

/// Track-t patterns on the ball of radius r at every center whose ball meets the support.
fn track_patterns(spec: &SftSpec, z: &FiniteConfig, t: usize, r: i64) -> BTreeSet<Vec<usize>> {
    let d = z.dim();
    let ball = box_points(&vec![-r; d], &vec![r; d]);
    let mut centers = BTreeSet::new();
    for s in z.cells().keys() {
        for b in &ball {
            centers.insert(add(s, b));
        }
    }
    centers.iter().map(|c| ball.iter().map(|b| track_of(spec, z, t, &add(c, b))).collect()).collect()
}

fn diameter(z: &FiniteConfig) -> i64 {
    let s = z.support();
    s.bounding_box().map_or(0, |(lo, hi)| lo.iter().zip(&hi).map(|(a, b)| b - a).max().unwrap_or(0))
}

fn moves(map: &BlockMap, z: &FiniteConfig) -> Result<bool> {
    Ok(map.apply_finite(z)? != *z)
}

fn verdict(map: BlockMap, x: &FiniteConfig, y: &FiniteConfig, strategy: String) -> Result<Option<Separation>> {
    Ok(match (moves(&map, x)?, moves(&map, y)?) {
        (true, false) => Some(Separation { map, moved: Moved::X, strategy, even: true }),
        (false, true) => Some(Separation { map, moved: Moved::Y, strategy, even: true }),
        _ => None,
    })
}

/// A conditioned permutation of track `p` keyed on a track-`t` cylinder seen
/// in exactly one of x, y.
fn by_cylinder(spec: &SftSpec, x: &FiniteConfig, y: &FiniteConfig, p: usize, t: usize, even: bool) -> Result<Option<Separation>> {
    let sizes = spec.tracks().expect("tracks checked");
    let Some(pi) = derangement(sizes[p], even) else { return Ok(None) };
    let rmax = diameter(x).max(diameter(y)) + 1;
    let d = spec.dim();
    for r in 0..=rmax {
        let (px, py) = (track_patterns(spec, x, t, r), track_patterns(spec, y, t, r));
        let nonzero = |v: &&Vec<usize>| v.iter().any(|&a| a != 0);
        let pick = py.difference(&px).find(nonzero).or_else(|| px.difference(&py).find(nonzero));
        if let Some(pattern) = pick {
            let ball = box_points(&vec![-r; d], &vec![r; d]);
            let cyl: Cylinder = ball.into_iter().zip(pattern.iter().copied()).collect();
            let map = conditioned_perm(spec, p, &pi, &Condition { track: t, cylinders: vec![cyl] })?;
            let even = pi.parity() == Parity::Even;
            if let Some(s) = verdict(map, x, y, format!("conditioned permutation of track {} on a radius-{r} cylinder of track {}", p + 1, t + 1))? {
                return Ok(Some(Separation { even, ..s }));
            }
        }
    }
    Ok(None)
}

/// ψ adds the track-t digit to the track-p digit (mod |track p|).
fn track_add(spec: &SftSpec, p: usize, t: usize, inverse: bool) -> Result<BlockMap> {
    let sizes = spec.tracks().expect("tracks checked");
    let (np, nt) = (sizes[p], sizes[t]);
    let origin: Point = vec![0; spec.dim()];
    let mut map = BlockMap::identity(spec.dim(), spec.alphabet_size());
    for a in 1..nt {
        let step = if inverse { np - a % np } else { a % np };
        let pi = Perm((0..np).map(|b| (b + step) % np).collect());
        let c = conditioned_perm(spec, p, &pi, &Condition::cylinder(t, [(origin.clone(), a)]))?;
        map = map.compose(&c);
    }
    Ok(map)
}

/// An automorphism of a full shift with at least two tracks that moves
/// exactly one of x and y.
pub fn separating_automorphism(spec: &SftSpec, x: &FiniteConfig, y: &FiniteConfig) -> Result<Separation> {
    let sizes = match spec.tracks() {
        Some(s) if s.len() >= 2 && spec.is_full_shift() => s.to_vec(),
        _ => return Err(Error::Precondition("needs a full shift with at least two tracks".into())),
    };
    if x.is_zero() {
        return Err(Error::Precondition("x must be aperiodic (nonzero finite support)".into()));
    }
    if orbit_equivalent(x, y).is_some() {
        return Err(Error::OrbitEquivalent);
    }
    let dim = spec.dim();
    // Even separators are preferred; odd ones only when the track sizes force it.
    for even in [true, false] {
        let track_zero = |z: &FiniteConfig, t: usize| z.cells().keys().all(|p| track_of(spec, z, t, p) == 0);
        for (p, _) in [(1usize, 0usize), (0, 1)] {
            if track_zero(x, p) != track_zero(y, p) {
                if let Some(pi) = nonzero_derangement(sizes[p], even) {
                    let images: Vec<usize> = (0..spec.alphabet_size())
                        .map(|s| {
                            let mut d = spec.track_digits(s as u8).expect("digits");
                            d[p] = pi.apply(d[p]);
                            spec.from_digits(&d).expect("symbol") as usize
                        })
                        .collect();
                    let map = crate::morphisms::symbol_perm(dim, &Perm(images))?;
                    if let Some(s) = verdict(map, x, y, format!("symbol permutation of track {}", p + 1))? {
                        return Ok(Separation { even: pi.parity() == Parity::Even, ..s });
                    }
                }
            }
        }
        for (p, t) in [(1usize, 0usize), (0, 1)] {
            if let Some(s) = by_cylinder(spec, x, y, p, t, even)? {
                return Ok(s);
            }
        }
        // Mix the tracks first, then separate and conjugate back.
        for (p, t) in [(1usize, 0usize), (0, 1)] {
            let psi = track_add(spec, p, t, false)?;
            let psi_inv = track_add(spec, p, t, true)?;
            let (x2, y2) = (psi.apply_finite(x)?, psi.apply_finite(y)?);
            for (pp, tt) in [(t, p), (p, t)] {
                if let Some(s) = by_cylinder(spec, &x2, &y2, pp, tt, even)? {
                    let map = BlockMap::compose_all(&[psi_inv.clone(), s.map, psi.clone()]);
                    let strategy = format!("{} after adding track {} to track {}", s.strategy, t + 1, p + 1);
                    let even = s.even;
                    if let Some(s) = verdict(map, x, y, strategy)? {
                        return Ok(Separation { even, ..s });
                    }
                }
            }
        }
    }
    Err(Error::HypothesesFail("no separating pattern found".into()))
}
