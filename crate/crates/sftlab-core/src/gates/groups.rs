use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{perm_group_order, Perm, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub generates: bool,
    pub weakly_connected: bool,
    #[serde(serialize_with = "crate::numeric::ser_biguint")]
    pub order: BigUint,
    #[serde(serialize_with = "crate::numeric::ser_biguint")]
    pub target: BigUint,
}

fn half_factorial(n: usize) -> BigUint {
    let f: BigUint = (1..=n.max(1)).map(BigUint::from).product();
    if n >= 2 {
        f / 2u32
    } else {
        f
    }
}

fn connected(n: usize, groups: impl Iterator<Item = Vec<usize>>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for g in groups {
        for w in g.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let roots: std::collections::HashSet<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    roots.len() <= 1
}

/// Does the 3-cycle a→b→c→a of every hyperedge generate Alt(V)?
/// Vertices are 0..n.
pub fn hypergraph_generation_check(n: usize, edges: &[[usize; 3]]) -> Result<GenerationReport> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let gens = edges
        .iter()
        .map(|e| {
            if e.iter().any(|&v| v >= n) || e[0] == e[1] || e[1] == e[2] || e[0] == e[2] {
                return Err(Error::Precondition(format!("bad hyperedge {e:?}")));
            }
            Perm::from_cycles(n, &[e.to_vec()])
        })
        .collect::<Result<Vec<_>>>()?;
    let order = if gens.is_empty() { BigUint::from(1u32) } else { perm_group_order(&gens)? };
    let target = half_factorial(n);
    Ok(GenerationReport {
        generates: order == target,
        weakly_connected: connected(n, edges.iter().map(|e| e.to_vec())),
        order,
        target,
    })
}

/// Do the even permutations of B² acting on the endpoints of each edge
/// generate Alt(B^V)? Configurations are indexed with vertex 0 most
/// significant.
pub fn universal_gates_check(b: usize, n: usize, edges: &[[usize; 2]]) -> Result<GenerationReport> {
    if b < 3 {
        return Err(Error::Precondition(format!("alphabet of size {b}; at least 3 symbols are needed")));
    }
    let degree = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(b)).unwrap_or(usize::MAX);
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(degree));
    }
    let digits = |mut s: usize| -> Vec<usize> {
        let mut d = vec![0; n];
        for i in (0..n).rev() {
            d[i] = s % b;
            s /= b;
        }
        d
    };
    let index = |d: &[usize]| d.iter().fold(0, |acc, &x| acc * b + x);
    let mut gens = Vec::new();
    for &[i, j] in edges {
        if i >= n || j >= n || i == j {
            return Err(Error::Precondition(format!("bad edge ({i}, {j})")));
        }
        // 3-cycles (0 1 k) on the b² pair symbols generate Alt(B²).
        for k in 2..b * b {
            let pair = Perm::from_cycles(b * b, &[vec![0, 1, k]])?;
            let images = (0..degree)
                .map(|s| {
                    let mut d = digits(s);
                    let q = pair.apply(d[i] * b + d[j]);
                    d[i] = q / b;
                    d[j] = q % b;
                    index(&d)
                })
                .collect();
            gens.push(Perm(images));
        }
    }
    let order = if gens.is_empty() { BigUint::from(1u32) } else { perm_group_order(&gens)? };
    let target = half_factorial(degree);
    Ok(GenerationReport {
        generates: order == target,
        weakly_connected: connected(n, edges.iter().map(|e| e.to_vec())),
        order,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergraph_examples() {
        let r = hypergraph_generation_check(4, &[[0, 1, 2], [1, 2, 3]]).unwrap();
        assert!(r.generates && r.weakly_connected);
        assert_eq!(r.order, BigUint::from(12u32));
        let r = hypergraph_generation_check(5, &[[0, 1, 2], [2, 3, 4]]).unwrap();
        assert_eq!(r.order, BigUint::from(60u32));
        let r = hypergraph_generation_check(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        assert!(!r.generates && !r.weakly_connected);
        assert_eq!(r.order, BigUint::from(9u32));
        assert!(hypergraph_generation_check(17, &[]).is_err());
    }

    #[test]
    fn universal_gate_examples() {
        let r = universal_gates_check(3, 2, &[[0, 1]]).unwrap();
        assert!(r.generates);
        assert_eq!(r.order, BigUint::from(181440u32));
        assert!(matches!(universal_gates_check(2, 2, &[[0, 1]]), Err(Error::Precondition(_))));
        let r = universal_gates_check(3, 1, &[]).unwrap();
        assert!(!r.generates);
        assert_eq!(r.target, BigUint::from(3u32));
        assert!(matches!(universal_gates_check(3, 3, &[[0, 1], [1, 2]]), Err(Error::DegreeTooLarge(27))));
        let r = universal_gates_check(4, 2, &[[0, 1]]).unwrap();
        assert!(r.generates);
    }
}
