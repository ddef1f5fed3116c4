use serde::Serialize;

use super::{finite_admissibility, FiniteConfig, LineGraph, Pattern, PatternSpace, SftSpec, Symbol};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{box_points, FiniteSet, Point};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrreducibilityReport {
    pub passed: bool,
    pub gap: i64,
    pub pairs_checked: u64,
    /// False when joint feasibility was decided on a finite margin (d ≥ 2).
    pub exact: bool,
    pub witness: Option<(Pattern, Pattern)>,
}

fn placements(dim: usize, la: i64, lb: i64, gap: i64, region: i64) -> Vec<(FiniteSet, FiniteSet)> {
    let a = FiniteSet::cube(dim, 0, la - 1);
    let mut out = Vec::new();
    for s in (la + gap)..=(region - lb + 1) {
        let mut dirs: Vec<Point> = vec![{
            let mut v = vec![0; dim];
            v[0] = s;
            v
        }];
        if dim > 1 {
            dirs.push(vec![s; dim]);
        }
        for v in dirs {
            out.push((a.clone(), FiniteSet::cube(dim, 0, lb - 1).translate(&v)));
        }
    }
    out
}

/// Checks that admissible patterns on cubes A and B at ℓ∞ distance greater
/// than `gap` always glue. Cube sides run over 1..=max_len and B stays inside
/// [0, region]. In d ≥ 2 admissibility means extending to the given margin.
pub fn strong_irreducibility_check(
    spec: &SftSpec,
    gap: i64,
    max_len: i64,
    region: i64,
    margin: i64,
    budget: &mut Budget,
) -> Result<IrreducibilityReport> {
    let dim = spec.dim();
    let graph = if dim == 1 { Some(LineGraph::new(spec)?) } else { None };
    let global_margin = if dim == 1 { None } else { Some(margin) };
    let mut pairs = 0u64;
    for la in 1..=max_len {
        for lb in 1..=max_len {
            for (a, b) in placements(dim, la, lb, gap, region) {
                let pa = PatternSpace::new(spec, &a, global_margin)?;
                let pb = PatternSpace::new(spec, &b, global_margin)?;
                let mut ps = Vec::new();
                pa.for_each(&[], budget, &mut |v| {
                    ps.push(v.to_vec());
                    Ok(true)
                })?;
                let mut qs = Vec::new();
                pb.for_each(&[], budget, &mut |v| {
                    qs.push(v.to_vec());
                    Ok(true)
                })?;
                let joint_set = a.union(&b);
                let joint = PatternSpace::new(spec, &joint_set, global_margin)?;
                let cells = joint.cells().to_vec();
                let a_idx: Vec<usize> = pa.cells().iter().map(|c| cells.binary_search(c).expect("subset")).collect();
                let b_idx: Vec<usize> = pb.cells().iter().map(|c| cells.binary_search(c).expect("subset")).collect();
                for p in &ps {
                    for q in &qs {
                        pairs += 1;
                        budget.spend(1)?;
                        let ok = match &graph {
                            Some(g) => {
                                let fixed: Vec<(i64, Symbol)> = pa
                                    .cells()
                                    .iter()
                                    .zip(p)
                                    .chain(pb.cells().iter().zip(q))
                                    .map(|(c, &s)| (c[0], s))
                                    .collect();
                                g.feasible(&fixed)
                            }
                            None => {
                                let mut fixed = vec![None; cells.len()];
                                for (&i, &s) in a_idx.iter().zip(p) {
                                    fixed[i] = Some(s);
                                }
                                for (&i, &s) in b_idx.iter().zip(q) {
                                    fixed[i] = Some(s);
                                }
                                joint.exists(&fixed, budget)?
                            }
                        };
                        if !ok {
                            return Ok(IrreducibilityReport {
                                passed: false,
                                gap,
                                pairs_checked: pairs,
                                exact: dim == 1,
                                witness: Some((pa.pattern(p), pb.pattern(q))),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(IrreducibilityReport { passed: true, gap, pairs_checked: pairs, exact: dim == 1, witness: None })
}

/// Rewrites `x` inside the ℓ∞ ball of radius `r` around the origin so the
/// result is admissible with strictly smaller support. Returns the rewrite of
/// smallest support, or None when no content of the ball achieves it.
pub fn corner_decrease(spec: &SftSpec, x: &FiniteConfig, r: i64, budget: &mut Budget) -> Result<Option<FiniteConfig>> {
    if x.is_zero() {
        return Err(Error::ZeroConfig);
    }
    let zero = x.zero();
    let dim = x.dim();
    let ball = box_points(&vec![-r; dim], &vec![r; dim]);
    let outside: Vec<(Point, Symbol)> = x.cells().iter().filter(|(p, _)| !ball.contains(p)).map(|(p, &s)| (p.clone(), s)).collect();
    let k = spec.alphabet_size();
    // Symbols are tried starting from the zero symbol.
    let order: Vec<Symbol> = (0..k).map(|i| ((zero as usize + i) % k) as Symbol).collect();
    let mut digits = vec![0usize; ball.len()];
    let mut best: Option<FiniteConfig> = None;
    loop {
        budget.spend(1)?;
        let inside = ball.iter().zip(&digits).map(|(p, &d)| (p.clone(), order[d]));
        let y = FiniteConfig::from_cells(dim, zero, outside.iter().cloned().chain(inside));
        if y.len() < best.as_ref().map_or(x.len(), |b| b.len()) && finite_admissibility(spec, &y).is_ok() {
            let done = y.is_zero() || y.len() == outside.len();
            best = Some(y);
            if done {
                break;
            }
        }
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_examples() {
        let b = &mut Budget::unlimited();
        let full = SftSpec::full_shift(2, 1);
        assert!(strong_irreducibility_check(&full, 0, 3, 8, 0, b).unwrap().passed);
        let g = SftSpec::golden_mean();
        let ok = strong_irreducibility_check(&g, 1, 4, 11, 0, b).unwrap();
        assert!(ok.passed && ok.pairs_checked > 0);
        let bad = strong_irreducibility_check(&g, 0, 4, 11, 0, b).unwrap();
        assert!(!bad.passed);
        let (p, q) = bad.witness.unwrap();
        assert_eq!((p.to_word(), q.to_word()), ("1".to_string(), "1".to_string()));
        let pa = p.domain().to_vec()[0][0];
        let qa = q.domain().to_vec()[0][0];
        assert_eq!(qa - pa, 1);
    }

    #[test]
    fn irreducibility_in_two_dimensions() {
        let b = &mut Budget::unlimited();
        let full = SftSpec::full_shift(2, 2);
        assert!(strong_irreducibility_check(&full, 0, 1, 3, 0, b).unwrap().passed);
        let h = SftSpec::triangular_hard_square();
        assert!(strong_irreducibility_check(&h, 1, 2, 4, 1, b).unwrap().passed);
        assert!(!strong_irreducibility_check(&h, 0, 1, 2, 1, b).unwrap().passed);
    }

    #[test]
    fn corner_examples() {
        let b = &mut Budget::unlimited();
        let g = SftSpec::golden_mean();
        let single = FiniteConfig::from_cells(1, 0, [(vec![0], 1)]);
        assert!(corner_decrease(&g, &single, 1, b).unwrap().unwrap().is_zero());
        let two = FiniteConfig::from_cells(1, 0, [(vec![0], 1), (vec![2], 1)]);
        let y = corner_decrease(&g, &two, 1, b).unwrap().unwrap();
        assert_eq!(y.support().to_vec(), vec![vec![2]]);
        let full = SftSpec::full_shift(3, 2);
        let x = FiniteConfig::from_cells(2, 0, [(vec![0, 0], 2), (vec![1, 0], 1)]);
        let y = corner_decrease(&full, &x, 0, b).unwrap().unwrap();
        assert_eq!(y.support().to_vec(), vec![vec![1, 0]]);
        assert!(matches!(corner_decrease(&g, &FiniteConfig::zero_config(1, 0), 1, b), Err(Error::ZeroConfig)));
    }

    #[test]
    fn corner_decrease_can_fail() {
        // Dominoes "12": a 1 needs a 2 to its right and a 2 needs a 1 to its left.
        let spec = SftSpec::new(
            1,
            vec!["0".into(), "1".into(), "2".into()],
            Some(0),
            None,
            vec![vec![0], vec![1]],
            vec![vec![1, 0], vec![1, 1], vec![0, 2], vec![2, 2]],
        )
        .unwrap();
        let b = &mut Budget::unlimited();
        let x = FiniteConfig::from_cells(1, 0, [(vec![0], 1), (vec![1], 2)]);
        assert!(corner_decrease(&spec, &x, 0, b).unwrap().is_none());
        assert!(corner_decrease(&spec, &x, 1, b).unwrap().unwrap().is_zero());
    }
}
