//! Transfer graph for one-dimensional SFTs: vertices are the globally
//! admissible blocks of length W−1 (W = window span), edges append a symbol.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{SftSpec, Symbol};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct LineGraph {
    span: usize,
    states: Vec<Vec<Symbol>>,
    /// Outgoing edges: (target state, appended symbol).
    edges: Vec<Vec<(usize, Symbol)>>,
}

impl LineGraph {
    pub fn new(spec: &SftSpec) -> Result<Self> {
        if spec.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: spec.dim() });
        }
        let k = spec.alphabet_size();
        let wmin = spec.window().iter().map(|w| w[0]).min().unwrap_or(0);
        let wmax = spec.window().iter().map(|w| w[0]).max().unwrap_or(0);
        let span = (wmax - wmin + 1) as usize;
        let total = (k as f64).powi(span as i32);
        if total > 4e6 {
            return Err(Error::InvalidSpec(format!("window span {span} too large for a transfer graph")));
        }
        let offsets: Vec<usize> = spec.window().iter().map(|w| (w[0] - wmin) as usize).collect();
        let mut index: HashMap<Vec<Symbol>, usize> = HashMap::new();
        let mut states: Vec<Vec<Symbol>> = Vec::new();
        let mut raw_edges: Vec<(usize, usize, Symbol)> = Vec::new();
        let mut block = vec![0 as Symbol; span];
        let mut key = Vec::with_capacity(offsets.len());
        let mut id = |s: &[Symbol], states: &mut Vec<Vec<Symbol>>| -> usize {
            if let Some(&i) = index.get(s) {
                return i;
            }
            states.push(s.to_vec());
            index.insert(s.to_vec(), states.len() - 1);
            states.len() - 1
        };
        for code in 0..total as usize {
            let mut c = code;
            for i in (0..span).rev() {
                block[i] = (c % k) as Symbol;
                c /= k;
            }
            key.clear();
            key.extend(offsets.iter().map(|&o| block[o]));
            if spec.window_ok(&key) {
                let a = id(&block[..span - 1], &mut states);
                let b = id(&block[1..], &mut states);
                raw_edges.push((a, b, block[span - 1]));
            }
        }
        // Trim vertices that do not lie on a bi-infinite path.
        let n = states.len();
        let mut alive = vec![true; n];
        loop {
            let mut indeg = vec![0usize; n];
            let mut outdeg = vec![0usize; n];
            for &(a, b, _) in &raw_edges {
                if alive[a] && alive[b] {
                    outdeg[a] += 1;
                    indeg[b] += 1;
                }
            }
            let mut changed = false;
            for v in 0..n {
                if alive[v] && (indeg[v] == 0 || outdeg[v] == 0) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut kept = Vec::new();
        for v in 0..n {
            if alive[v] {
                remap[v] = kept.len();
                kept.push(states[v].clone());
            }
        }
        let mut edges = vec![Vec::new(); kept.len()];
        for &(a, b, s) in &raw_edges {
            if alive[a] && alive[b] {
                edges[remap[a]].push((remap[b], s));
            }
        }
        for e in edges.iter_mut() {
            e.sort();
        }
        Ok(LineGraph { span, states: kept, edges })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Length of a vertex block (W − 1).
    pub fn memory(&self) -> usize {
        self.span - 1
    }

    /// Counts globally admissible words of length `n` whose letter at
    /// position `i` equals `constraint(i)` whenever that is `Some`.
    pub fn count_words(&self, n: usize, constraint: &dyn Fn(usize) -> Option<Symbol>) -> BigUint {
        let m = self.memory();
        let fits = |i: usize, s: Symbol| constraint(i).is_none_or(|c| c == s);
        if n < m {
            let mut words: Vec<&[Symbol]> = self
                .states
                .iter()
                .map(|s| &s[..n])
                .filter(|w| w.iter().enumerate().all(|(i, &s)| fits(i, s)))
                .collect();
            words.sort();
            words.dedup();
            return BigUint::from(words.len());
        }
        let mut cur: Vec<BigUint> = self
            .states
            .iter()
            .map(|s| if s.iter().enumerate().all(|(i, &x)| fits(i, x)) { BigUint::one() } else { BigUint::zero() })
            .collect();
        for i in m..n {
            let mut next = vec![BigUint::zero(); self.states.len()];
            for (v, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(t, s) in &self.edges[v] {
                    if fits(i, s) {
                        next[t] += c;
                    }
                }
            }
            cur = next;
        }
        cur.into_iter().sum()
    }

    /// The set of vertices compatible with an unconstrained infinite past.
    pub fn initial(&self) -> Vec<bool> {
        vec![true; self.states.len()]
    }

    /// Advances a vertex set by one cell whose symbol is `sym` (or free).
    pub fn step(&self, set: &[bool], sym: Option<Symbol>) -> Vec<bool> {
        let mut out = vec![false; set.len()];
        for (v, &on) in set.iter().enumerate() {
            if !on {
                continue;
            }
            for &(t, s) in &self.edges[v] {
                if sym.is_none_or(|c| c == s) {
                    out[t] = true;
                }
            }
        }
        out
    }

    /// Whether the assignments (sorted by position) extend to a point of X.
    pub fn feasible(&self, cells: &[(i64, Symbol)]) -> bool {
        let mut set = self.initial();
        let mut pos: Option<i64> = None;
        for &(p, s) in cells {
            if let Some(q) = pos {
                for _ in q + 1..p {
                    set = self.step(&set, None);
                }
            }
            set = self.step(&set, Some(s));
            if !set.iter().any(|&b| b) {
                return false;
            }
            pos = Some(p);
        }
        set.iter().any(|&b| b)
    }

    /// Number of points of period n, as the trace of the n-th power of the
    /// adjacency matrix.
    pub fn periodic_count(&self, n: usize) -> BigUint {
        let m = self.states.len();
        let mut adj = vec![vec![BigUint::zero(); m]; m];
        for (v, es) in self.edges.iter().enumerate() {
            for &(t, _) in es {
                adj[v][t] += 1u32;
            }
        }
        let mut pow: Vec<Vec<BigUint>> = (0..m).map(|i| (0..m).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect()).collect();
        for _ in 0..n {
            pow = (0..m)
                .map(|i| (0..m).map(|j| (0..m).fold(BigUint::zero(), |acc, k| acc + &pow[i][k] * &adj[k][j])).collect())
                .collect();
        }
        (0..m).fold(BigUint::zero(), |acc, i| acc + &pow[i][i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_graph() {
        let g = LineGraph::new(&SftSpec::golden_mean()).unwrap();
        assert_eq!(g.num_states(), 2);
        assert_eq!(g.count_words(5, &|_| None), BigUint::from(13u32));
        assert_eq!(g.count_words(2, &|_| None), BigUint::from(3u32));
        assert_eq!(g.count_words(5, &|i| if i == 0 || i == 4 { Some(1) } else { None }), BigUint::from(2u32));
        assert!(g.feasible(&[(0, 1), (2, 1)]));
        assert!(!g.feasible(&[(0, 1), (1, 1)]));
        assert_eq!(g.periodic_count(5), BigUint::from(11u32));
    }

    #[test]
    fn trimming_removes_dead_ends() {
        // Symbol 2 may only be followed by 2 and preceded by 2 is forbidden: 02, 12 allowed, 20, 21 forbidden.
        let spec = SftSpec::new(1, vec!["0".into(), "1".into(), "2".into()], Some(0), None, vec![vec![0], vec![1]], vec![vec![2, 0], vec![2, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let g = LineGraph::new(&spec).unwrap();
        // Words: all over {0,1}, plus constant 2 words.
        assert_eq!(g.count_words(3, &|_| None), BigUint::from(9u32));
    }
}
