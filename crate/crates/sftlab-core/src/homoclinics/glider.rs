use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::sum_disjoint;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSubgroup, Point};
use crate::morphisms::{maps_equal, BlockMap, Verdict};
use crate::sft::{finite_admissibility, fixed_points, FiniteConfig, PeriodicConfig, SftSpec, Symbol};

/// The glider maps f, g and h = g ∘ f on a one-dimensional SFT.
#[derive(Clone, Debug)]
pub struct GliderSystem {
    pub a1: Symbol,
    pub a2: Symbol,
    pub radius: i64,
    pub zero: Symbol,
    pub f: BlockMap,
    pub g: BlockMap,
    pub h: BlockMap,
    /// f ∘ f = id, compared as rule tables.
    pub f_involution: Verdict,
    /// Largest n such that g ∘ g = id was checked on all of Fix(nZ).
    pub g_involution_period: usize,
}

/// f swaps a₁ ↔ a₂ at cells whose other cells within distance R − 1 are 0.
fn build_f(k: usize, a1: Symbol, a2: Symbol, zero: Symbol, r: i64) -> Result<BlockMap> {
    let n: Vec<Point> = (-(r - 1)..=(r - 1)).map(|i| vec![i]).collect();
    let c = (r - 1) as usize;
    BlockMap::from_local(
        1,
        k,
        n,
        None,
        Arc::new(move |_, v| {
            let s = v[c];
            if (s != a1 && s != a2) || v.iter().enumerate().any(|(i, &x)| i != c && x != zero) {
                return s;
            }
            if s == a1 {
                a2
            } else {
                a1
            }
        }),
    )
}

/// g exchanges the two-cell patterns 0a₁ and a₂0 at a placement p when the
/// other cells of [p − 2R + 1, p + 2R] are 0 and no other placement within
/// distance 3R − 1 shows either pattern.
fn build_g(k: usize, a1: Symbol, a2: Symbol, zero: Symbol, r: i64) -> Result<BlockMap> {
    let rad = 3 * r;
    let n: Vec<Point> = (-rad..=rad).map(|i| vec![i]).collect();
    let at = move |v: &[Symbol], off: i64| v[(off + rad) as usize];
    let trig = move |v: &[Symbol], q: i64| {
        let (s, t) = (at(v, q), at(v, q + 1));
        (s == zero && t == a1) || (s == a2 && t == zero)
    };
    let valid = move |v: &[Symbol], p: i64| {
        trig(v, p)
            && (p - 2 * r + 1..=p + 2 * r).all(|c| c == p || c == p + 1 || at(v, c) == zero)
            && (p - 3 * r + 1..p + 3 * r).all(|q| q == p || !trig(v, q))
    };
    BlockMap::from_local(
        1,
        k,
        n,
        None,
        Arc::new(move |_, v| {
            let s = at(v, 0);
            if valid(v, 0) {
                // This cell is the left half of the pattern.
                return if s == zero { a2 } else { zero };
            }
            if valid(v, -1) {
                return if s == a1 { zero } else { a1 };
            }
            s
        }),
    )
}

fn check_involution_on_tori(g: &BlockMap, spec: &SftSpec, max_period: usize, budget: &mut Budget) -> Result<usize> {
    for n in 1..=max_period {
        for x in fixed_points(spec, &LatticeSubgroup::scaled(1, n as i64), budget)? {
            let y = g.apply_periodic(&g.apply_periodic(&x)?)?;
            if y != x {
                return Err(Error::InvalidMap(format!("g is not an involution on {:?}", x.values())));
            }
        }
    }
    Ok(max_period)
}

/// Builds f, g and h for gliders a₁ (moving right under h) and a₂ (moving
/// left). Needs d = 1, R ≥ 2, R > R_X, and a₁, a₂ admissible as isolated
/// symbols. f is certified by rule tables; g on every torus of period up to
/// `torus_period`.
pub fn build_glider_system(spec: &SftSpec, a1: Symbol, a2: Symbol, r: i64, torus_period: usize, budget: &mut Budget) -> Result<GliderSystem> {
    if spec.dim() != 1 {
        return Err(Error::Precondition("gliders are implemented in dimension 1".into()));
    }
    let zero = spec.require_zero()?;
    let k = spec.alphabet_size();
    if a1 == a2 || a1 == zero || a2 == zero || a1 as usize >= k || a2 as usize >= k {
        return Err(Error::Precondition("glider symbols must be two distinct nonzero symbols".into()));
    }
    if r < 2 || r <= spec.window_size() {
        return Err(Error::Precondition(format!("radius {r} must be at least 2 and exceed the window size {}", spec.window_size())));
    }
    for a in [a1, a2] {
        let single = FiniteConfig::from_cells(1, zero, [(vec![0], a)]);
        if finite_admissibility(spec, &single).is_err() {
            return Err(Error::Precondition(format!("symbol {} is not admissible in isolation", spec.symbol_name(a))));
        }
    }
    let f = build_f(k, a1, a2, zero, r)?;
    let g = build_g(k, a1, a2, zero, r)?;
    let f_involution = maps_equal(&f.compose(&f), &BlockMap::identity(1, k), spec, budget)?;
    if !f_involution.holds {
        return Err(Error::InvalidMap("f is not an involution".into()));
    }
    let g_involution_period = check_involution_on_tori(&g, spec, torus_period, budget)?;
    let h = g.compose(&f);
    Ok(GliderSystem { a1, a2, radius: r, zero, f, g, h, f_involution, g_involution_period })
}

impl GliderSystem {
    /// One application of h = g ∘ f.
    pub fn step(&self, x: &FiniteConfig) -> Result<FiniteConfig> {
        self.g.apply_finite(&self.f.apply_finite(x)?)
    }

    pub fn step_periodic(&self, x: &PeriodicConfig) -> Result<PeriodicConfig> {
        self.g.apply_periodic(&self.f.apply_periodic(x)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub support: usize,
    pub escaped_left: usize,
    pub escaped_right: usize,
}

/// h^{n+kp}(x) = x_L moved kp cells left + x_M + x_R moved kp cells right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GliderDecomposition {
    pub n: usize,
    pub p: usize,
    pub x_left: FiniteConfig,
    pub x_mid: FiniteConfig,
    pub x_right: FiniteConfig,
    /// The identity held at k = 0..=3.
    pub replay_ok: bool,
    pub trace: Vec<TraceRow>,
}

impl GliderDecomposition {
    pub fn assemble(&self, spec: &SftSpec, k: usize) -> Result<FiniteConfig> {
        let d = (k * self.p) as i64;
        let lr = sum_disjoint(spec, &self.x_left.translate(&[-d]), &self.x_right.translate(&[d]))?;
        sum_disjoint(spec, &lr, &self.x_mid)
    }
}

/// Sizes of the escaping clouds: a prefix of a₂s and a suffix of a₁s with
/// pairwise gaps ≥ 3R, each at distance ≥ `sep` from the remaining cells.
fn clouds(gs: &GliderSystem, x: &FiniteConfig, sep: i64) -> (usize, usize) {
    let cells: Vec<(i64, Symbol)> = x.cells().iter().map(|(p, &s)| (p[0], s)).collect();
    let m = cells.len();
    let gap = 3 * gs.radius;
    let mut right = 0;
    for j in 1..=m {
        let (pos, s) = cells[m - j];
        if s != gs.a1 || (j > 1 && cells[m - j + 1].0 - pos < gap) {
            break;
        }
        if j == m || pos - cells[m - j - 1].0 >= sep {
            right = j;
        }
    }
    let mut left = 0;
    for j in 1..=(m - right) {
        let (pos, s) = cells[j - 1];
        if s != gs.a2 || (j > 1 && pos - cells[j - 2].0 < gap) {
            break;
        }
        if j == m - right || cells[j].0 - pos >= sep {
            left = j;
        }
    }
    (left, right)
}

fn split(x: &FiniteConfig, left: usize, right: usize) -> (FiniteConfig, FiniteConfig, FiniteConfig) {
    let m = x.len();
    let part = |lo: usize, hi: usize| FiniteConfig::from_cells(1, x.zero(), x.cells().iter().skip(lo).take(hi - lo).map(|(p, &s)| (p.clone(), s)));
    (part(0, left), part(left, m - right), part(m - right, m))
}

/// Runs h from x until the middle part repeats with the clouds far enough
/// from the middle's whole orbit, then replays the identity for k = 0..=3.
pub fn simulate_decomposition(gs: &GliderSystem, spec: &SftSpec, x: &FiniteConfig, max_steps: usize) -> Result<GliderDecomposition> {
    let sep = 8 * gs.radius + 2;
    let size = x.len();
    let mut traj = vec![x.clone()];
    let mut trace = Vec::new();
    let mut seen: HashMap<FiniteConfig, usize> = HashMap::new();
    for t in 0..=max_steps {
        let xt = traj[t].clone();
        let (left, right) = clouds(gs, &xt, sep);
        trace.push(TraceRow { step: t, support: xt.len(), escaped_left: left, escaped_right: right });
        let (xl, xm, xr) = split(&xt, left, right);
        let candidate = if xm.is_zero() { Some(1) } else { seen.get(&xm).map(|&t0| t - t0) };
        if let Some(p) = candidate {
            if let Some(hull) = middle_hull(gs, &xm, p)? {
                let far_right = xr.cells().keys().next().is_none_or(|q| q[0] - hull.1 >= sep);
                let far_left = xl.cells().keys().last().is_none_or(|q| hull.0 - q[0] >= sep);
                if far_right && far_left {
                    let mut dec = GliderDecomposition { n: t, p, x_left: xl, x_mid: xm, x_right: xr, replay_ok: false, trace };
                    while traj.len() <= t + 3 * p {
                        let next = gs.step(traj.last().expect("nonempty"))?;
                        traj.push(next);
                    }
                    dec.replay_ok = (0..=3).all(|k| dec.assemble(spec, k).is_ok_and(|y| y == traj[t + k * p]));
                    return Ok(dec);
                }
            }
        }
        seen.entry(xm).or_insert(t);
        let next = gs.step(&xt)?;
        if next.len() != size {
            return Err(Error::Precondition(format!("support size changed from {size} to {} at step {}", next.len(), t + 1)));
        }
        traj.push(next);
    }
    Err(Error::BudgetExceeded { limit: max_steps as u64 })
}

/// Runs the middle alone; if it returns after exactly p steps, returns the
/// span of cells it visits.
fn middle_hull(gs: &GliderSystem, xm: &FiniteConfig, p: usize) -> Result<Option<(i64, i64)>> {
    if xm.is_zero() {
        return Ok(Some((i64::MAX / 4, i64::MIN / 4)));
    }
    let mut cur = xm.clone();
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for _ in 0..p {
        for q in cur.cells().keys() {
            lo = lo.min(q[0]);
            hi = hi.max(q[0]);
        }
        cur = gs.step(&cur)?;
    }
    Ok((cur == *xm).then_some((lo, hi)))
}
