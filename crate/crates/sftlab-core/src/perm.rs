//! Permutations of {0, …, n−1} and group orders via stabilizer chains.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`perm_group_order`].
pub const MAX_DEGREE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A permutation stored as its image list: `p.0[i]` is the image of i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation);
            }
        }
        Ok(Perm(images))
    }

    /// Builds a permutation of degree n from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                if a >= n || std::mem::replace(&mut touched[a], true) {
                    return Err(Error::NotAPermutation);
                }
                img[a] = c[(i + 1) % c.len()];
            }
        }
        Ok(Perm(img))
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The composite `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// Cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut j = self.0[s];
            while j != s {
                seen[j] = true;
                c.push(j);
                j = self.0[j];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn order(&self) -> BigUint {
        self.cycles().iter().fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }

    /// The commutator [a, b] = a b a⁻¹ b⁻¹.
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.compose(b).compose(&a.inverse()).compose(&b.inverse())
    }
}

struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `transversal[p]` maps the base point to p.
    transversal: Vec<Option<Perm>>,
}

struct Chain {
    n: usize,
    levels: Vec<Level>,
}

impl Chain {
    fn level_gens(&self, i: usize) -> Vec<Perm> {
        self.levels[i..].iter().flat_map(|l| l.gens.iter().cloned()).collect()
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let gens = self.level_gens(i);
        let n = self.n;
        let lvl = &mut self.levels[i];
        lvl.transversal = vec![None; n];
        lvl.transversal[lvl.base] = Some(Perm::identity(n));
        let mut queue = vec![lvl.base];
        while let Some(p) = queue.pop() {
            let tp = lvl.transversal[p].clone().expect("visited");
            for g in &gens {
                let q = g.apply(p);
                if lvl.transversal[q].is_none() {
                    lvl.transversal[q] = Some(g.compose(&tp));
                    queue.push(q);
                }
            }
        }
    }

    /// Sifts g from level `from`; returns the failing level and residue.
    fn sift(&self, mut g: Perm, from: usize) -> Option<(usize, Perm)> {
        for (i, lvl) in self.levels.iter().enumerate().skip(from) {
            let p = g.apply(lvl.base);
            match &lvl.transversal[p] {
                Some(t) => g = t.inverse().compose(&g),
                None => return Some((i, g)),
            }
        }
        (!g.is_identity()).then_some((self.levels.len(), g))
    }

    fn add(&mut self, level: usize, g: Perm) {
        if level == self.levels.len() {
            let base = (0..self.n).find(|&i| g.apply(i) != i).expect("non-identity");
            self.levels.push(Level { base, gens: Vec::new(), transversal: Vec::new() });
        }
        self.levels[level].gens.push(g);
        for i in 0..=level {
            self.rebuild_orbit(i);
        }
    }

    /// One pass over all Schreier generators; returns false once stable.
    fn close_once(&mut self) -> bool {
        for i in (0..self.levels.len()).rev() {
            let gens = self.level_gens(i);
            let lvl = &self.levels[i];
            for p in 0..self.n {
                let Some(tp) = &lvl.transversal[p] else { continue };
                for s in &gens {
                    let q = s.apply(p);
                    let tq = lvl.transversal[q].as_ref().expect("orbit closed");
                    let schreier = tq.inverse().compose(s).compose(tp);
                    if let Some((j, r)) = self.sift(schreier, i + 1) {
                        self.add(j, r);
                        return true;
                    }
                }
            }
        }
        false
    }

    fn order(&self) -> BigUint {
        self.levels
            .iter()
            .map(|l| BigUint::from(l.transversal.iter().filter(|t| t.is_some()).count()))
            .product()
    }
}

/// Exact order of the group generated by `gens`, all of the same degree.
pub fn perm_group_order(gens: &[Perm]) -> Result<BigUint> {
    let n = gens.first().map_or(0, Perm::degree);
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    if gens.iter().any(|g| g.degree() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: gens.iter().map(Perm::degree).find(|&d| d != n).unwrap_or(n) });
    }
    let mut chain = Chain { n, levels: Vec::new() };
    for g in gens {
        if let Some((j, r)) = chain.sift(g.clone(), 0) {
            chain.add(j, r);
        }
    }
    while chain.close_once() {}
    Ok(chain.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn closure_order(gens: &[Perm]) -> usize {
        let n = gens[0].degree();
        let mut seen: HashSet<Perm> = HashSet::from([Perm::identity(n)]);
        let mut frontier = vec![Perm::identity(n)];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn group_order_examples() {
        assert_eq!(perm_group_order(&[Perm::identity(5)]).unwrap(), BigUint::from(1u32));
        let a4 = [Perm::from_cycles(4, &[vec![0, 1, 2]]).unwrap(), Perm::from_cycles(4, &[vec![1, 2, 3]]).unwrap()];
        assert_eq!(perm_group_order(&a4).unwrap(), BigUint::from(12u32));
        assert_eq!(closure_order(&a4), 12);
        let s5: Vec<Perm> = (0..4).map(|i| Perm::transposition(5, i, i + 1)).collect();
        assert_eq!(perm_group_order(&s5).unwrap(), BigUint::from(120u32));
        assert_eq!(closure_order(&s5), 120);
        let s16: Vec<Perm> = (0..15).map(|i| Perm::transposition(16, i, i + 1)).collect();
        assert_eq!(perm_group_order(&s16).unwrap(), (1u32..=16).map(BigUint::from).product::<BigUint>());
        assert!(matches!(perm_group_order(&[Perm::identity(17)]), Err(Error::DegreeTooLarge(17))));
    }

    #[test]
    fn parity_and_cycles() {
        assert_eq!(Perm::identity(3).parity(), Parity::Even);
        assert_eq!(Perm::transposition(3, 0, 2).parity(), Parity::Odd);
        let c = Perm::from_cycles(6, &[vec![0, 3, 1], vec![4, 5]]).unwrap();
        assert_eq!(c.cycles(), vec![vec![0, 3, 1], vec![4, 5]]);
        assert_eq!(c.order(), BigUint::from(6u32));
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(Perm)
    }

    proptest! {
        #[test]
        fn parity_is_a_homomorphism(p in perm_strategy(7), q in perm_strategy(7)) {
            prop_assert_eq!(p.compose(&q).parity(), p.parity().combine(q.parity()));
            prop_assert!(p.compose(&p.inverse()).is_identity());
        }

        #[test]
        fn chain_matches_closure(gens in prop::collection::vec(perm_strategy(6), 1..4)) {
            prop_assert_eq!(perm_group_order(&gens).unwrap(), BigUint::from(closure_order(&gens)));
        }
    }
}
