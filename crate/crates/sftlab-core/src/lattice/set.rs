use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{add, box_points, dist_inf, Point};

/// A finite subset of Z^d, kept sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSet {
    dim: usize,
    points: BTreeSet<Point>,
}

impl FiniteSet {
    pub fn new(dim: usize) -> Self {
        FiniteSet { dim, points: BTreeSet::new() }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(dim: usize, pts: I) -> Self {
        let points: BTreeSet<Point> = pts.into_iter().collect();
        debug_assert!(points.iter().all(|p| p.len() == dim));
        FiniteSet { dim, points }
    }

    /// The integer interval [a, b] in Z.
    pub fn interval(a: i64, b: i64) -> Self {
        Self::from_points(1, (a..=b).map(|x| vec![x]))
    }

    /// The box `lo..=hi`.
    pub fn cuboid(lo: &[i64], hi: &[i64]) -> Self {
        Self::from_points(lo.len(), box_points(lo, hi))
    }

    /// [lo, hi]^d.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        Self::cuboid(&vec![lo; dim], &vec![hi; dim])
    }

    /// {v : |v|∞ ≤ r}.
    pub fn centered_box(dim: usize, r: i64) -> Self {
        Self::cube(dim, -r, r)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.contains(p)
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> + '_ {
        self.points.iter()
    }

    pub fn to_vec(&self) -> Vec<Point> {
        self.points.iter().cloned().collect()
    }

    pub fn insert(&mut self, p: Point) -> bool {
        self.points.insert(p)
    }

    pub fn translate(&self, v: &[i64]) -> Self {
        Self::from_points(self.dim, self.points.iter().map(|p| add(p, v)))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_points(self.dim, self.points.union(&other.points).cloned())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_points(self.dim, self.points.intersection(&other.points).cloned())
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_points(self.dim, self.points.difference(&other.points).cloned())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.points.is_disjoint(&other.points)
    }

    /// Minkowski sum {a + b}.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let mut out = BTreeSet::new();
        for a in &self.points {
            for b in &other.points {
                out.insert(add(a, b));
            }
        }
        FiniteSet { dim: self.dim, points: out }
    }

    /// Componentwise bounds, `None` when empty.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let first = self.points.iter().next()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for p in &self.points {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }

    /// Largest ℓ∞ norm of a point, 0 when empty.
    pub fn max_norm(&self) -> i64 {
        self.points.iter().map(|p| super::norm_inf(p)).max().unwrap_or(0)
    }

    /// Points within ℓ∞ distance `r` of the set.
    pub fn ball(&self, r: i64) -> Self {
        let offsets = box_points(&vec![-r; self.dim], &vec![r; self.dim]);
        let mut out = BTreeSet::new();
        for p in &self.points {
            for o in &offsets {
                out.insert(add(p, o));
            }
        }
        FiniteSet { dim: self.dim, points: out }
    }

    /// The inner boundary F ∩ ∂_S F: points of F within ℓ∞ distance ⌊S⌋ of the complement.
    pub fn boundary_inner(&self, s: f64) -> Self {
        let r = s.floor() as i64;
        if r < 1 {
            return FiniteSet::new(self.dim);
        }
        let offsets = box_points(&vec![-r; self.dim], &vec![r; self.dim]);
        Self::from_points(
            self.dim,
            self.points
                .iter()
                .filter(|p| offsets.iter().any(|o| !self.points.contains(&add(p, o))))
                .cloned(),
        )
    }

    /// F minus its inner boundary.
    pub fn interior(&self, s: f64) -> Self {
        self.difference(&self.boundary_inner(s))
    }

    /// Largest r with ball_r({0}) ⊆ F, or -1 when 0 ∉ F.
    pub fn inradius(&self) -> i64 {
        let origin = vec![0; self.dim];
        if !self.contains(&origin) {
            return -1;
        }
        let mut r = 0;
        loop {
            let shell_ok = box_points(&vec![-(r + 1); self.dim], &vec![r + 1; self.dim])
                .iter()
                .all(|p| self.contains(p));
            if !shell_ok {
                return r;
            }
            r += 1;
        }
    }

    /// ℓ∞ distance from `p` to the set.
    pub fn distance_to(&self, p: &[i64]) -> Option<i64> {
        self.points.iter().map(|q| dist_inf(p, q)).min()
    }
}
