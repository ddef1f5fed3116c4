//! Finite-index sublattices of Z^d, finite point sets, boundaries and towers.

mod hnf;
mod set;
mod tower;

pub use hnf::LatticeSubgroup;
pub use set::FiniteSet;
pub use tower::{build_centered_tower, verify_tower, Tower, TowerReport, TowerViolation};

/// A point of Z^d.
pub type Point = Vec<i64>;

/// ℓ∞ norm of a point.
pub fn norm_inf(p: &[i64]) -> i64 {
    p.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// ℓ∞ distance between two points.
pub fn dist_inf(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)
}

pub fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The unit vector e_i in Z^d.
pub fn unit(dim: usize, i: usize) -> Point {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// All points of the box `lo..=hi` in lexicographic order.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Point> {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        out.push(cur.clone());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
        }
    }
}
