use std::sync::Arc;

use super::{good_position, orbit_equivalent};
use crate::error::{Error, Result};
use crate::morphisms::BlockMap;
use crate::perm::Perm;
use crate::sft::{FiniteConfig, SftSpec, Symbol};

/// A block map sending each listed homoclinic point x_i to x_{π(i)}.
#[derive(Clone, Debug)]
pub struct HomoclinicPermuter {
    pub map: BlockMap,
    /// The listed points in good position.
    pub points: Vec<FiniteConfig>,
    pub perm: Perm,
    /// Width of the zero collar around an occurrence.
    pub isolation: i64,
    /// Occurrences closer than this cancel each other.
    pub cancellation: i64,
    /// The common box [0, D] holding every point in good position.
    pub span: i64,
}

/// Builds the permuter in dimension 1. An occurrence of x_i at v means the
/// values on v + [0, D] equal those of x_i and the M cells on either side
/// are 0. An occurrence is rewritten to x_{π(i)} unless another occurrence
/// starts within distance N. `isolation` and `cancellation` default to
/// M = max(2D + R_X, D + 1) and N = 10M.
pub fn homoclinic_permuter(
    spec: &SftSpec,
    points: &[FiniteConfig],
    pi: &Perm,
    isolation: Option<i64>,
    cancellation: Option<i64>,
) -> Result<HomoclinicPermuter> {
    if spec.dim() != 1 {
        return Err(Error::Precondition("the orbit permuter is implemented in dimension 1".into()));
    }
    if pi.degree() != points.len() {
        return Err(Error::Precondition(format!("permutation of degree {} for {} points", pi.degree(), points.len())));
    }
    let zero = spec.require_zero()?;
    let pts = points.iter().map(good_position).collect::<Result<Vec<_>>>()?;
    for i in 0..pts.len() {
        for j in 0..i {
            if orbit_equivalent(&pts[i], &pts[j]).is_some() {
                return Err(Error::OrbitsNotDistinct(j, i));
            }
        }
    }
    let span = pts.iter().filter_map(|x| x.cells().keys().last().map(|p| p[0])).max().unwrap_or(0);
    let m = isolation.unwrap_or((2 * span + spec.window_size()).max(span + 1));
    let n = cancellation.unwrap_or(10 * m);
    if m < span + 1 || m < spec.window_size() {
        return Err(Error::SeparationTooSmall(format!("isolation {m} must be at least {} and at least the window size", span + 1)));
    }
    if n <= m + 2 * span {
        return Err(Error::SeparationTooSmall(format!("cancellation {n} must exceed {}", m + 2 * span)));
    }
    let words: Vec<Vec<Symbol>> = pts.iter().map(|x| (0..=span).map(|c| x.get(&[c])).collect()).collect();
    let rad = n + span + m;
    let images = pi.0.clone();
    let w = words.clone();
    let rule = Arc::new(move |_: &[i64], v: &[Symbol]| -> Symbol {
        let at = |off: i64| v[(off + rad) as usize];
        let occurrence = |start: i64| -> Option<usize> {
            let collar = (start - m..start).chain(start + span + 1..=start + span + m);
            if collar.clone().any(|c| at(c) != zero) {
                return None;
            }
            w.iter().position(|word| word.iter().enumerate().all(|(i, &s)| at(start + i as i64) == s))
        };
        for start in -span..=0 {
            if let Some(i) = occurrence(start) {
                let cancelled = (start - n..=start + n).any(|q| q != start && occurrence(q).is_some());
                if cancelled {
                    return at(0);
                }
                return w[images[i]][(-start) as usize];
            }
        }
        at(0)
    });
    let map = BlockMap::from_local(1, spec.alphabet_size(), (-rad..=rad).map(|i| vec![i]).collect(), None, rule)?;
    Ok(HomoclinicPermuter { map, points: pts, perm: pi.clone(), isolation: m, cancellation: n, span })
}
