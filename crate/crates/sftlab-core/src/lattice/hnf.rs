
use super::{FiniteSet, Point};
use crate::error::{Error, Result};
use crate::scalar::LatticeInt;

/// A finite-index subgroup of Z^d.
///
/// The basis is stored in column Hermite normal form: `basis[i][j]` is row `i`
/// of generator column `j`, the matrix is upper triangular with a positive
/// diagonal, and every entry right of a pivot lies in `0..pivot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSubgroup<T> {
    basis: Vec<Vec<T>>,
}

/// Unimodular column reduction of the `d × n` matrix `a` (rows bottom-up,
/// pivots filled from the rightmost column leftwards). Column operations are
/// mirrored on `u` when given. Returns the number of pivots.
fn column_echelon<T: LatticeInt>(a: &mut [Vec<T>], mut u: Option<&mut Vec<Vec<T>>>) -> usize {
    let d = a.len();
    let n = if d == 0 { 0 } else { a[0].len() };
    let mut pivots = 0usize;
    for i in (0..d).rev() {
        if pivots == n {
            break;
        }
        let p = n - 1 - pivots;
        for j in 0..p {
            if a[i][j].is_zero() {
                continue;
            }
            let ap = a[i][p].clone();
            let aj = a[i][j].clone();
            let eg = ap.extended_gcd(&aj);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let sp = aj.clone() / g.clone();
            let sj = ap.clone() / g.clone();
            let combine = |m: &mut [Vec<T>]| {
                for row in m.iter_mut() {
                    let cp = row[p].clone();
                    let cj = row[j].clone();
                    row[p] = x.clone() * cp.clone() + y.clone() * cj.clone();
                    row[j] = sp.clone() * cp - sj.clone() * cj;
                }
            };
            combine(a);
            if let Some(u) = u.as_deref_mut() {
                combine(u);
            }
        }
        if a[i][p].is_zero() {
            continue;
        }
        if a[i][p].is_negative() {
            for row in a.iter_mut() {
                row[p] = -row[p].clone();
            }
            if let Some(u) = u.as_deref_mut() {
                for row in u.iter_mut() {
                    row[p] = -row[p].clone();
                }
            }
        }
        pivots += 1;
    }
    pivots
}

impl<T: LatticeInt> LatticeSubgroup<T> {
    /// Canonicalizes a square basis (columns are generators).
    pub fn from_basis(raw: Vec<Vec<T>>) -> Result<Self> {
        let d = raw.len();
        if d == 0 {
            return Err(Error::SingularBasis);
        }
        for row in &raw {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: row.len() });
            }
        }
        Self::from_columns_matrix(raw)
    }

    /// The subgroup generated by the given vectors; errors unless they span a
    /// finite-index subgroup.
    pub fn from_generators(dim: usize, gens: &[Vec<T>]) -> Result<Self> {
        if dim == 0 || gens.len() < dim {
            return Err(Error::SingularBasis);
        }
        let mut m = vec![Vec::with_capacity(gens.len()); dim];
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            for (i, x) in g.iter().enumerate() {
                m[i].push(x.clone());
            }
        }
        Self::from_columns_matrix(m)
    }

    fn from_columns_matrix(mut m: Vec<Vec<T>>) -> Result<Self> {
        let d = m.len();
        let n = m[0].len();
        if column_echelon(&mut m, None) < d {
            return Err(Error::SingularBasis);
        }
        let mut h: Vec<Vec<T>> = m.iter().map(|row| row[n - d..].to_vec()).collect();
        for j in 0..d {
            for i in (0..j).rev() {
                let q = h[i][j].div_floor(&h[i][i]);
                if q.is_zero() {
                    continue;
                }
                for row in h.iter_mut().take(i + 1) {
                    let v = row[j].clone() - q.clone() * row[i].clone();
                    row[j] = v;
                }
            }
        }
        Ok(LatticeSubgroup { basis: h })
    }

    /// The full lattice Z^d.
    pub fn identity(dim: usize) -> Self {
        Self::scaled(dim, T::one())
    }

    /// k·Z^d for k ≥ 1.
    pub fn scaled(dim: usize, k: T) -> Self {
        assert!(k.is_positive(), "scale must be positive");
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { k.clone() } else { T::zero() }).collect())
            .collect();
        LatticeSubgroup { basis }
    }

    pub fn diagonal(diag: &[T]) -> Result<Self> {
        let d = diag.len();
        let raw = (0..d)
            .map(|i| (0..d).map(|j| if i == j { diag[i].clone() } else { T::zero() }).collect())
            .collect();
        Self::from_basis(raw)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Row-major HNF basis; columns generate the subgroup.
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.basis.iter().map(|row| row[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.dim()).map(|j| self.column(j)).collect()
    }

    /// [Z^d : L] = |det basis|.
    pub fn index(&self) -> T {
        (0..self.dim()).fold(T::one(), |acc, i| acc * self.basis[i][i].clone())
    }

    /// The representative of `v + L` in the HNF digit box.
    pub fn coset_reduce(&self, v: &[T]) -> Vec<T> {
        let mut v = v.to_vec();
        for i in (0..self.dim()).rev() {
            let q = v[i].div_floor(&self.basis[i][i]);
            if q.is_zero() {
                continue;
            }
            for (r, x) in v.iter_mut().enumerate().take(i + 1) {
                *x = x.clone() - q.clone() * self.basis[r][i].clone();
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coset_reduce(v).iter().all(|x| x.is_zero())
    }

    /// True when `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.columns().iter().all(|c| other.contains(c))
    }

    /// The sum L1 + L2.
    pub fn sum(&self, other: &Self) -> Self {
        let mut gens = self.columns();
        gens.extend(other.columns());
        Self::from_generators(self.dim(), &gens).expect("sum of full-rank lattices has full rank")
    }

    /// The intersection L1 ∩ L2, computed from the integer kernel of [B1 | -B2].
    pub fn intersect(&self, other: &Self) -> Self {
        let d = self.dim();
        assert_eq!(d, other.dim(), "lattice dimensions differ");
        let mut a: Vec<Vec<T>> = (0..d)
            .map(|i| {
                let mut row = self.basis[i].clone();
                row.extend(other.basis[i].iter().map(|x| -x.clone()));
                row
            })
            .collect();
        let mut u: Vec<Vec<T>> = (0..2 * d)
            .map(|i| (0..2 * d).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        let rank = column_echelon(&mut a, Some(&mut u));
        debug_assert_eq!(rank, d);
        let gens: Vec<Vec<T>> = (0..d)
            .map(|k| {
                (0..d)
                    .map(|i| {
                        (0..d).fold(T::zero(), |acc, j| acc + self.basis[i][j].clone() * u[j][k].clone())
                    })
                    .collect()
            })
            .collect();
        Self::from_generators(d, &gens).expect("intersection of full-rank lattices has full rank")
    }

    /// The indices ([L1 : L1∩L2], [L2 : L1∩L2]).
    pub fn commensurable_check(&self, other: &Self) -> (T, T) {
        let i = self.intersect(other).index();
        (i.clone() / self.index(), i / other.index())
    }

    /// The HNF digit box {x : 0 ≤ x_i < basis[i][i]} in lexicographic order.
    pub fn fundamental_domain_points(&self) -> Vec<Vec<T>> {
        let d = self.dim();
        let mut out = Vec::new();
        let mut cur = vec![T::zero(); d];
        loop {
            out.push(cur.clone());
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] = cur[i].clone() + T::one();
                if cur[i] < self.basis[i][i] {
                    break;
                }
                cur[i] = T::zero();
            }
        }
    }

    pub fn to_i64(&self) -> Option<LatticeSubgroup<i64>> {
        let basis = self
            .basis
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(LatticeSubgroup { basis })
    }
}

impl LatticeSubgroup<i64> {
    /// The canonical fundamental domain as a point set.
    pub fn fundamental_domain(&self) -> FiniteSet {
        FiniteSet::from_points(self.dim(), self.fundamental_domain_points())
    }

    pub fn index_usize(&self) -> usize {
        self.index() as usize
    }

    /// Parses `"a,b;c,d"` as a row-major basis.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = text
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|e| Error::InvalidSpec(format!("lattice entry {x:?}: {e}"))))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::from_basis(rows)
    }

    pub fn reduce_point(&self, p: &Point) -> Point {
        self.coset_reduce(p)
    }
}

impl std::fmt::Display for LatticeSubgroup<i64> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type L = LatticeSubgroup<i64>;

    fn in_lattice_by_solve(basis: &[Vec<i64>], v: &[i64]) -> bool {
        // Independent membership test: Cramer's rule on a 2×2 basis.
        let (a, b, c, d) = (basis[0][0], basis[0][1], basis[1][0], basis[1][1]);
        let det = a * d - b * c;
        let x = v[0] * d - b * v[1];
        let y = a * v[1] - c * v[0];
        x % det == 0 && y % det == 0
    }

    #[test]
    fn hnf_examples() {
        let l = L::from_basis(vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(l.basis(), &[vec![2, 0], vec![0, 2]]);
        assert_eq!(L::from_basis(vec![vec![1, 0], vec![0, 1]]).unwrap().index(), 1);
        let a = L::from_basis(vec![vec![2, 2], vec![0, 2]]).unwrap();
        let b = L::from_basis(vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(a, b);
        for x in -3..3 {
            for y in -3..3 {
                let v = [x, y];
                assert_eq!(
                    in_lattice_by_solve(&[vec![2, 2], vec![0, 2]], &v),
                    in_lattice_by_solve(&[vec![2, 0], vec![0, 2]], &v)
                );
            }
        }
        assert_eq!(L::from_basis(vec![vec![1, 2], vec![2, 4]]), Err(Error::SingularBasis));
    }

    #[test]
    fn index_examples() {
        assert_eq!(L::scaled(1, 3).index(), 3);
        assert_eq!(L::diagonal(&[2, 3]).unwrap().index(), 6);
        let l = L::from_basis(vec![vec![2, 1], vec![0, 2]]).unwrap();
        assert_eq!(l.index(), 4);
        // Residue count oracle: distinct classes of [0,4)^2 by Cramer membership.
        let pts: Vec<[i64; 2]> = (0..4).flat_map(|x| (0..4).map(move |y| [x, y])).collect();
        let mut reps: Vec<[i64; 2]> = Vec::new();
        for p in pts {
            if !reps.iter().any(|r| in_lattice_by_solve(&[vec![2, 1], vec![0, 2]], &[p[0] - r[0], p[1] - r[1]])) {
                reps.push(p);
            }
        }
        assert_eq!(reps.len(), 4);
    }

    #[test]
    fn fundamental_domain_examples() {
        let fd = L::scaled(1, 3).fundamental_domain();
        assert_eq!(fd.points().cloned().collect::<Vec<_>>(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(L::scaled(2, 3).fundamental_domain().len(), 9);
        let l = L::from_basis(vec![vec![2, 1], vec![0, 2]]).unwrap();
        let fd = l.fundamental_domain();
        assert_eq!(fd.len(), 4);
        for x in -4..=4 {
            for y in -4..=4 {
                let v = vec![x, y];
                let hits = fd.points().filter(|r| in_lattice_by_solve(l.basis(), &[x - r[0], y - r[1]])).count();
                assert_eq!(hits, 1);
                let r = l.coset_reduce(&v);
                assert!(fd.contains(&r));
                assert!(in_lattice_by_solve(l.basis(), &[x - r[0], y - r[1]]));
            }
        }
    }

    #[test]
    fn coset_reduce_examples() {
        assert_eq!(L::scaled(1, 3).coset_reduce(&[5]), vec![2]);
        assert_eq!(L::scaled(1, 3).coset_reduce(&[-1]), vec![2]);
        let l = L::from_basis(vec![vec![2, 1], vec![0, 2]]).unwrap();
        assert_eq!(l.coset_reduce(&[0, 0]), vec![0, 0]);
    }

    #[test]
    fn intersection_examples() {
        let a = L::scaled(1, 2);
        let b = L::scaled(1, 3);
        assert_eq!(a.intersect(&b), L::scaled(1, 6));
        assert_eq!(a.commensurable_check(&b), (3, 2));
        assert_eq!(a.intersect(&a), a);
        assert_eq!(a.commensurable_check(&a), (1, 1));
        let c = L::diagonal(&[2, 1]).unwrap();
        let d = L::diagonal(&[1, 2]).unwrap();
        let i = c.intersect(&d);
        assert_eq!(i, L::diagonal(&[2, 2]).unwrap());
        assert_eq!(c.commensurable_check(&d), (2, 2));
        for x in -6..=6 {
            for y in -6..=6 {
                let v = [x, y];
                assert_eq!(i.contains(&v), c.contains(&v) && d.contains(&v));
            }
        }
    }

    #[test]
    fn generic_bigint_agrees() {
        use num_bigint::BigInt;
        let raw = vec![vec![BigInt::from(4), BigInt::from(6)], vec![BigInt::from(2), BigInt::from(-2)]];
        let big = LatticeSubgroup::<BigInt>::from_basis(raw).unwrap();
        let small = L::from_basis(vec![vec![4, 6], vec![2, -2]]).unwrap();
        assert_eq!(big.to_i64().unwrap(), small);
        assert_eq!(small.index(), 20);
    }

    #[test]
    fn parse_and_display_round_trip() {
        let l = L::parse("2,1;0,2").unwrap();
        assert_eq!(L::parse(&l.to_string()).unwrap(), l);
    }

    fn small_matrix(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-5i64..=5, d), d)
    }

    fn unimodular(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        // Product of elementary column operations.
        proptest::collection::vec((0..d, 0..d, -2i64..=2), 0..8).prop_map(move |ops| {
            let mut u: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
            for (a, b, k) in ops {
                if a != b {
                    for row in u.iter_mut() {
                        row[a] += k * row[b];
                    }
                }
            }
            u
        })
    }

    fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    fn det(m: &[Vec<i64>]) -> i64 {
        match m.len() {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> =
                        m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * det(&minor)
                })
                .sum(),
        }
    }

    proptest! {
        #[test]
        fn hnf_is_canonical((b, u) in (1usize..=3).prop_flat_map(|d| (small_matrix(d), unimodular(d)))) {
            let dt = det(&b);
            prop_assume!(dt != 0);
            let l = L::from_basis(b.clone()).unwrap();
            prop_assert_eq!(l.index(), dt.abs());
            prop_assert_eq!(L::from_basis(matmul(&b, &u)).unwrap(), l);
        }

        #[test]
        fn domain_size_and_reduction(b in small_matrix(2), v in proptest::collection::vec(-20i64..20, 2), w in proptest::collection::vec(-3i64..3, 2)) {
            prop_assume!(det(&b) != 0 && det(&b).abs() <= 60);
            let l = L::from_basis(b.clone()).unwrap();
            prop_assert_eq!(l.fundamental_domain().len() as i64, l.index());
            let r = l.coset_reduce(&v);
            prop_assert_eq!(l.coset_reduce(&r), r.clone());
            let ell: Vec<i64> = (0..2).map(|i| b[i][0] * w[0] + b[i][1] * w[1]).collect();
            let shifted: Vec<i64> = v.iter().zip(&ell).map(|(a, c)| a + c).collect();
            prop_assert_eq!(l.coset_reduce(&shifted), r);
        }

        #[test]
        fn intersection_is_contained(a in small_matrix(2), b in small_matrix(2)) {
            prop_assume!(det(&a) != 0 && det(&b) != 0);
            let la = L::from_basis(a).unwrap();
            let lb = L::from_basis(b).unwrap();
            let i = la.intersect(&lb);
            prop_assert!(i.is_subgroup_of(&la) && i.is_subgroup_of(&lb));
            let (ia, ib) = la.commensurable_check(&lb);
            prop_assert_eq!(i.index(), ia * la.index());
            prop_assert_eq!(i.index(), ib * lb.index());
            for x in -4..=4 {
                for y in -4..=4 {
                    let v = [x, y];
                    prop_assert_eq!(i.contains(&v), la.contains(&v) && lb.contains(&v));
                }
            }
        }
    }
}
