//! Self-checks over one spec, grouped by module.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::json;
use sftlab_core::gates::{strong_commutation_check, validate_gate, GateLattice};
use sftlab_core::homoclinics::{build_glider_system, good_position, homoclinic_permuter, simulate_decomposition, sum_disjoint};
use sftlab_core::lattice::{build_centered_tower, verify_tower, FiniteSet, LatticeSubgroup};
use sftlab_core::localq::{beeps_statistic, boundary_weight, entropy_recovery_sequence, exact_alt_log2, log_ratio_rational, stirling_alt_loglog};
use sftlab_core::morphisms::{certify_inverse, conditioned_perm, exact_commutes, maps_equal, partial_shift, periodic_action, shift, symbol_perm, track_swap, BlockMap, Condition};
use sftlab_core::perm::Perm;
use sftlab_core::sft::{count_fixed_points, count_patterns, entropy_estimates, extension_table, fixed_points, is_periodic_admissible, FiniteConfig, PeriodicConfig, SftSpec, Symbol};
use sftlab_core::{Budget, Error};

use crate::report::{provenance, Report};
use crate::sampling;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Small,
    Medium,
}

impl Depth {
    fn pick(self, small: usize, medium: usize) -> usize {
        match self {
            Depth::Small => small,
            Depth::Medium => medium,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub checks: Vec<Check>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn into_report(self) -> Report {
        let mut r = Report::new("verify_suite", None, 0, &["module", "check", "status", "detail", "counterexample", "provenance"]);
        let passed = self.passed();
        for c in self.checks {
            r.push(vec![json!(c.module), json!(c.name), json!(c.status), json!(c.detail), json!(c.counterexample), json!(provenance::EXACT)]);
        }
        r.note("passed", passed);
        r
    }
}

/// Faults that can be planted to confirm the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// A gate swapping 0 with a nonzero symbol on one cell, with no regard
    /// for the surrounding context.
    ContextUnsafeGate,
}

/// Outcome of a single check body: Ok(None) passes, Ok(Some(detail)) skips.
type Outcome = std::result::Result<Option<String>, Failure>;

struct Failure {
    detail: String,
    counterexample: Option<String>,
    out_of_budget: bool,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let counterexample = match &e {
            Error::ContextUnsafe { witness } => Some(format!("{witness:?}")),
            _ => None,
        };
        let out_of_budget = matches!(e, Error::BudgetExceeded { .. });
        Failure { detail: e.to_string(), counterexample, out_of_budget }
    }
}

fn fail(detail: impl Into<String>, counterexample: Option<String>) -> Failure {
    Failure { detail: detail.into(), counterexample, out_of_budget: false }
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(fail(detail(), None))
    }
}

struct Suite<'a> {
    spec: &'a SftSpec,
    depth: Depth,
    rng: rand_chacha::ChaCha8Rng,
    checks: Vec<Check>,
}

impl Suite<'_> {
    fn run(&mut self, module: &'static str, name: &'static str, body: impl FnOnce(&SftSpec, Depth, &mut rand_chacha::ChaCha8Rng, &mut Budget) -> Outcome) {
        let mut budget = Budget::new(20_000_000);
        let (status, detail, counterexample) = match body(self.spec, self.depth, &mut self.rng, &mut budget) {
            Ok(None) => (CheckStatus::Pass, String::new(), None),
            Ok(Some(why)) => (CheckStatus::Skip, why, None),
            Err(f) if f.out_of_budget => (CheckStatus::Skip, f.detail, None),
            Err(f) => (CheckStatus::Fail, f.detail, f.counterexample),
        };
        self.checks.push(Check { module, name, status, detail, counterexample });
    }
}

pub fn verify_suite(spec: &SftSpec, depth: Depth, seed: u64) -> SuiteResult {
    verify_suite_with_faults(spec, depth, seed, &[])
}

pub fn verify_suite_with_faults(spec: &SftSpec, depth: Depth, seed: u64, faults: &[Fault]) -> SuiteResult {
    let mut s = Suite { spec, depth, rng: sampling::rng(seed), checks: Vec::new() };

    s.run("lattice", "hnf_index_matches_domain", hnf_index);
    s.run("lattice", "centered_tower", |spec, depth, _, _| {
        let m = if spec.dim() == 1 { depth.pick(4, 6) } else { depth.pick(2, 3) };
        let t = build_centered_tower(3, spec.dim(), m)?;
        let rep = verify_tower(&t);
        match rep.violation {
            None => Ok(None),
            Some(v) => Err(fail(format!("condition {} at level {}: {}", v.condition, v.level, v.detail), None)),
        }
    });

    s.run("sft", "extension_rows_sum_to_count", |spec, depth, _, b| {
        let side = if spec.dim() == 1 { depth.pick(6, 9) as i64 } else { 3 };
        let set = FiniteSet::cube(spec.dim(), 0, side - 1);
        let t = extension_table(spec, &set, spec.window_size().max(1) as f64, None, b)?;
        let c = count_patterns(spec, &set, None, b)?;
        ensure(t.total() == c.count, || format!("rows sum to {} but the count is {}", t.total(), c.count))?;
        Ok(None)
    });
    s.run("sft", "submultiplicative", |spec, depth, _, b| {
        let n = if spec.dim() == 1 { depth.pick(8, 12) as i64 } else { 2 };
        let count = |m: i64, b: &mut Budget| -> sftlab_core::Result<num_bigint::BigUint> {
            let mut hi = vec![n - 1; spec.dim()];
            hi[0] = m - 1;
            Ok(count_patterns(spec, &FiniteSet::cuboid(&vec![0; spec.dim()], &hi), None, b)?.count)
        };
        for m1 in 1..=n {
            for m2 in 1..=n - m1 {
                let (a, c, ab) = (count(m1, b)?, count(m2, b)?, count(m1 + m2, b)?);
                ensure(ab <= &a * &c, || format!("N({}) = {ab} exceeds N({m1})·N({m2}) = {}", m1 + m2, &a * &c))?;
            }
        }
        Ok(None)
    });
    s.run("sft", "fixed_points_admissible_and_counted", |spec, depth, rng, b| {
        let mut lattices: Vec<LatticeSubgroup<i64>> = if spec.dim() == 1 {
            (1..=depth.pick(8, 12) as i64).map(|n| LatticeSubgroup::scaled(1, n)).collect()
        } else {
            (1..=depth.pick(2, 3) as i64).map(|n| LatticeSubgroup::scaled(spec.dim(), n)).collect()
        };
        if spec.dim() == 2 {
            let a = rng.gen_range(1..=3);
            let c = rng.gen_range(0..a);
            lattices.push(LatticeSubgroup::from_basis(vec![vec![a, c], vec![0, rng.gen_range(1..=3)]])?);
        }
        for l in &lattices {
            let pts = fixed_points(spec, l, b)?;
            if let Some(x) = pts.iter().find(|x| !is_periodic_admissible(spec, x)) {
                return Err(fail(format!("inadmissible point on {l}"), Some(format!("{:?}", x.values()))));
            }
            let c = count_fixed_points(spec, l, b)?;
            ensure(c == pts.len().into(), || format!("count {c} but {} points enumerated on {l}", pts.len()))?;
        }
        Ok(None)
    });
    s.run("sft", "entropy_at_most_log_alphabet", |spec, depth, _, b| {
        let top = if spec.dim() == 1 { depth.pick(10, 16) as i64 } else { 3 };
        let boxes: Vec<FiniteSet> = (1..=top).map(|n| FiniteSet::cube(spec.dim(), 0, n - 1)).collect();
        let bound = (spec.alphabet_size() as f64).log2() + 1e-12;
        for e in entropy_estimates::<f64>(spec, &boxes, None, b)? {
            ensure(e.per_site <= bound, || format!("box {} has per-site {} > log₂|A|", e.box_id, e.per_site))?;
        }
        Ok(None)
    });

    s.run("morphisms", "shift_inverse", |spec, _, _, b| {
        for i in 0..spec.dim() {
            let mut v = vec![0; spec.dim()];
            v[i] = 1;
            let back: Vec<i64> = v.iter().map(|x| -x).collect();
            let k = spec.alphabet_size();
            let verdict = certify_inverse(&shift(spec.dim(), k, &v)?, &shift(spec.dim(), k, &back)?, spec, b)?;
            ensure(verdict.holds, || format!("shift by e{i} not inverted"))?;
        }
        Ok(None)
    });
    s.run("morphisms", "symbol_perm_functorial", |spec, _, rng, b| {
        if !spec.is_full_shift() {
            return Ok(Some("symbol permutations are automorphisms only of full shifts".into()));
        }
        let k = spec.alphabet_size();
        for _ in 0..5 {
            let (p, q) = (sampling::random_perm(k, rng), sampling::random_perm(k, rng));
            let lhs = symbol_perm(spec.dim(), &p.compose(&q))?;
            let rhs = symbol_perm(spec.dim(), &p)?.compose(&symbol_perm(spec.dim(), &q)?);
            let v = maps_equal(&lhs, &rhs, spec, b)?;
            ensure(v.holds, || format!("perm {:?} ∘ {:?}", p.0, q.0))?;
        }
        Ok(None)
    });
    s.run("morphisms", "track_maps", |spec, _, _, b| {
        let Some(tracks) = spec.tracks().filter(|t| t.len() >= 2) else {
            return Ok(Some("no track structure".into()));
        };
        let id = BlockMap::identity(spec.dim(), spec.alphabet_size());
        if tracks[0] == tracks[1] {
            let sw = track_swap(spec, 0, 1)?;
            ensure(maps_equal(&sw.compose(&sw), &id, spec, b)?.holds, || "track swap is not an involution".into())?;
        }
        let mut v = vec![0; spec.dim()];
        v[0] = 1;
        let back: Vec<i64> = v.iter().map(|x| -x).collect();
        let there = partial_shift(spec, 1, &v)?;
        ensure(certify_inverse(&there, &partial_shift(spec, 1, &back)?, spec, b)?.holds, || "partial shift not inverted".into())?;
        Ok(None)
    });
    s.run("morphisms", "commutator_trick", |spec, depth, rng, b| {
        let Some(tracks) = spec.tracks() else { return Ok(Some("no track structure".into())) };
        let Some(t) = tracks.iter().position(|&n| n >= 5) else {
            return Ok(Some("no track with at least five symbols".into()));
        };
        let Some(c) = (0..tracks.len()).find(|&i| i != t) else { return Ok(Some("one track only".into())) };
        if spec.dim() != 1 || !spec.is_full_shift() {
            return Ok(Some("needs a one-dimensional full track shift".into()));
        }
        for _ in 0..depth.pick(5, 20) {
            let cyl = |rng: &mut rand_chacha::ChaCha8Rng| {
                let cells: Vec<(Vec<i64>, usize)> = (0..rng.gen_range(1..=2)).map(|_| (vec![rng.gen_range(0..2)], rng.gen_range(0..tracks[c]))).collect();
                Condition::cylinder(c, cells)
            };
            let (c1, c2) = (cyl(rng), cyl(rng));
            let (p1, p2) = (sampling::random_perm(tracks[t], rng), sampling::random_perm(tracks[t], rng));
            let lhs = BlockMap::compose_all(&[
                conditioned_perm(spec, t, &p1, &c1)?,
                conditioned_perm(spec, t, &p2, &c2)?,
                conditioned_perm(spec, t, &p1.inverse(), &c1)?,
                conditioned_perm(spec, t, &p2.inverse(), &c2)?,
            ]);
            let rhs = conditioned_perm(spec, t, &Perm::commutator(&p1, &p2), &c1.intersect(&c2))?;
            ensure(maps_equal(&lhs, &rhs, spec, b)?.holds, || format!("π₁ = {:?}, π₂ = {:?}", p1.0, p2.0))?;
        }
        Ok(None)
    });
    s.run("morphisms", "periodic_parity_multiplicative", |spec, depth, rng, b| {
        let k = spec.alphabet_size();
        let mut maps = vec![shift(spec.dim(), k, &{
            let mut v = vec![0; spec.dim()];
            v[0] = 1;
            v
        })?];
        if spec.is_full_shift() {
            maps.push(symbol_perm(spec.dim(), &sampling::random_perm(k, rng))?);
        }
        if spec.tracks().is_some_and(|t| t.len() >= 2) {
            maps.push(partial_shift(spec, 0, &{
                let mut v = vec![0; spec.dim()];
                v[spec.dim() - 1] = 1;
                v
            })?);
        }
        let top = if spec.dim() == 1 { depth.pick(6, 9) as i64 } else { 2 };
        for n in 1..=top {
            let l = LatticeSubgroup::scaled(spec.dim(), n);
            let acts: Vec<_> = maps.iter().map(|m| periodic_action(m, &l, spec, b)).collect::<sftlab_core::Result<_>>()?;
            for a in &acts {
                for c in &acts {
                    let prod = a.compose(c)?;
                    ensure(prod.parity() == a.parity().combine(c.parity()), || format!("parity not multiplicative on {l}"))?;
                }
            }
            for (m1, a) in maps.iter().zip(&acts) {
                for (m2, c) in maps.iter().zip(&acts) {
                    let direct = periodic_action(&m1.compose(m2), &l, spec, b)?;
                    ensure(direct.perm == a.compose(c)?.perm, || format!("action of a composite differs on {l}"))?;
                }
            }
        }
        Ok(None)
    });

    s.run("gates", "commute_with_lattice_shifts", |spec, depth, rng, b| {
        let mut tried = 0;
        for _ in 0..depth.pick(8, 40) {
            let Some(g) = sampling::random_gate(spec, rng, b)? else { continue };
            tried += 1;
            for gen in g.lattice.lattice().columns() {
                let sigma = shift(spec.dim(), spec.alphabet_size(), &gen)?;
                let holds = if spec.dim() == 1 {
                    exact_commutes(g.lattice.as_block_map(), &sigma, spec, b)?.holds
                } else {
                    let gl = &g.lattice;
                    sampled_commute(spec, gl.lattice(), rng, b, |x| gl.apply_periodic(&sigma.apply_periodic(x)?, true), |x| sigma.apply_periodic(&gl.apply_periodic(x, true)?))?
                };
                ensure(holds, || format!("gate does not commute with the shift by {gen:?}"))?;
            }
        }
        Ok((tried == 0).then(|| "no row with two extensions".into()))
    });
    s.run("gates", "distinct_rows_strongly_commute", |spec, depth, rng, b| {
        let mut tried = 0;
        for _ in 0..depth.pick(4, 20) {
            let Some((g1, g2)) = sampling::random_row_pair(spec, rng, b)? else { continue };
            tried += 1;
            let holds = if spec.dim() == 1 {
                strong_commutation_check(&g1.lattice, &g2.lattice, spec, b)?.holds
            } else {
                let (a, c) = (&g1.lattice, &g2.lattice);
                sampled_commute(spec, a.lattice(), rng, b, |x| a.apply_periodic(&c.apply_periodic(x, true)?, true), |x| c.apply_periodic(&a.apply_periodic(x, true)?, true))?
            };
            ensure(holds, || format!("rows {:?} and {:?} do not commute", g1.row, g2.row))?;
        }
        Ok((tried == 0).then(|| "fewer than two rows with two extensions".into()))
    });
    s.run("gates", "involutions_square_to_identity", |spec, depth, rng, b| {
        let mut tried = 0;
        for _ in 0..depth.pick(8, 40) {
            let Some(g) = sampling::random_gate(spec, rng, b)? else { continue };
            if g.gate().order() != 2u32.into() {
                continue;
            }
            tried += 1;
            for _ in 0..depth.pick(5, 50) {
                let Some(x) = sampling::random_periodic_point(spec, g.lattice.lattice(), rng, b)? else { break };
                let y = g.lattice.apply_periodic(&g.lattice.apply_periodic(&x, true)?, true)?;
                ensure(y == x, || "χ^H ∘ χ^H moved a periodic point".into())?;
            }
        }
        Ok((tried == 0).then(|| "no involutive gate sampled".into()))
    });
    s.run("gates", "sampled_gates_validate", |spec, depth, rng, b| {
        for _ in 0..depth.pick(4, 20) {
            let Some(g) = sampling::random_gate(spec, rng, b)? else { continue };
            let gate = g.gate();
            let mapping = gate.patterns().iter().map(|p| (p.clone(), gate.apply_values(p))).collect();
            validate_gate(spec, gate.domain(), &mapping, gate.margin(), b)?;
            GateLattice::new(gate.clone(), g.lattice.lattice().clone(), spec)?;
        }
        Ok(None)
    });
    if faults.contains(&Fault::ContextUnsafeGate) {
        s.run("gates", "injected_single_cell_swap", |spec, _, _, b| {
            let zero = spec.zero().ok_or_else(|| fail("no zero symbol", None))?;
            let a = (0..spec.alphabet_size() as Symbol).find(|&s| s != zero).ok_or_else(|| fail("unary alphabet", None))?;
            let domain = FiniteSet::cube(spec.dim(), 0, 0);
            let mapping = [(vec![zero], vec![a]), (vec![a], vec![zero])].into_iter().collect();
            validate_gate(spec, &domain, &mapping, spec.window_size().max(1), b)?;
            Ok(None)
        });
    }

    s.run("homoclinics", "good_position", |spec, depth, rng, _| {
        if spec.zero().is_none() {
            return Ok(Some("no zero symbol".into()));
        }
        for _ in 0..depth.pick(20, 100) {
            let x = sampling::random_finite_config(spec, 6, 10, true, rng)?;
            if x.is_zero() {
                continue;
            }
            let g = good_position(&x)?;
            let mut v = vec![0; spec.dim()];
            v[0] = rng.gen_range(-7..=7);
            ensure(good_position(&g)? == g && good_position(&x.translate(&v))? == g, || format!("good position unstable for {}", x.to_json(spec)))?;
            ensure(g.len() == x.len(), || "support size changed".into())?;
        }
        Ok(None)
    });
    s.run("homoclinics", "sum_disjoint", |spec, depth, rng, _| {
        if spec.zero().is_none() {
            return Ok(Some("no zero symbol".into()));
        }
        for _ in 0..depth.pick(10, 50) {
            let x = sampling::random_finite_config(spec, 4, 3, true, rng)?;
            let mut v = vec![0; spec.dim()];
            v[0] = 10 + 2 * spec.window_size();
            let y = sampling::random_finite_config(spec, 4, 3, true, rng)?.translate(&v);
            let z = sum_disjoint(spec, &x, &y)?;
            ensure(z.len() == x.len() + y.len(), || "support of the sum is not the disjoint union".into())?;
        }
        Ok(None)
    });
    s.run("homoclinics", "glider_decomposition", |spec, depth, rng, b| {
        if spec.dim() != 1 {
            return Ok(Some("gliders are one-dimensional".into()));
        }
        let Some(zero) = spec.zero() else { return Ok(Some("no zero symbol".into())) };
        let nz: Vec<Symbol> = (0..spec.alphabet_size() as Symbol).filter(|&s| s != zero).collect();
        if nz.len() < 2 {
            return Ok(Some("needs two nonzero symbols".into()));
        }
        let r = (spec.window_size() + 1).max(2);
        let gs = match build_glider_system(spec, nz[0], nz[1], r, 6, b) {
            Ok(gs) => gs,
            Err(Error::Precondition(why)) | Err(Error::HypothesesFail(why)) => return Ok(Some(why)),
            Err(e) => return Err(e.into()),
        };
        for _ in 0..depth.pick(5, 30) {
            let n = rng.gen_range(1..=6);
            let x = FiniteConfig::from_cells(1, zero, (0..n).map(|_| (vec![rng.gen_range(-30..=30)], nz[rng.gen_range(0..2)])));
            if sftlab_core::sft::finite_admissibility(spec, &x).is_err() {
                continue;
            }
            let d = simulate_decomposition(&gs, spec, &x, 10_000)?;
            ensure(d.replay_ok, || format!("replay failed for {}", x.to_json(spec)))?;
            ensure(d.x_left.len() + d.x_mid.len() + d.x_right.len() == x.len(), || "support not conserved".into())?;
        }
        Ok(None)
    });
    s.run("homoclinics", "permuter_cycle", |spec, _, _, _| {
        if spec.dim() != 1 {
            return Ok(Some("the permuter is one-dimensional".into()));
        }
        let Some(zero) = spec.zero() else { return Ok(Some("no zero symbol".into())) };
        let Some(a) = (0..spec.alphabet_size() as Symbol).find(|&s| s != zero) else { return Ok(Some("no nonzero symbol".into())) };
        let gap = spec.window_size() + 1;
        let pts = vec![
            FiniteConfig::from_cells(1, zero, [(vec![0], a)]),
            FiniteConfig::from_cells(1, zero, [(vec![0], a), (vec![gap], a)]),
            FiniteConfig::from_cells(1, zero, [(vec![0], a), (vec![gap], a), (vec![2 * gap], a)]),
        ];
        if pts.iter().any(|x| sftlab_core::sft::finite_admissibility(spec, x).is_err()) {
            return Ok(Some("test points are not admissible".into()));
        }
        let pi = Perm(vec![1, 2, 0]);
        let hp = homoclinic_permuter(spec, &pts, &pi, None, None)?;
        for (i, x) in hp.points.iter().enumerate() {
            let y = good_position(&hp.map.apply_finite(x)?)?;
            ensure(y == hp.points[pi.apply(i)], || format!("point {i} sent to {}", y.to_json(spec)))?;
        }
        Ok(None)
    });

    s.run("local_q", "beeps_bound", |spec, _, _, b| {
        let set = FiniteSet::cube(spec.dim(), 0, if spec.dim() == 1 { 4 } else { 2 });
        let r = match beeps_statistic(spec, &set, spec.window_size().max(1) as f64, None, b) {
            Ok(r) => r,
            Err(Error::DegenerateExtensionCount(why)) => return Ok(Some(why)),
            Err(e) => return Err(e.into()),
        };
        if spec.is_full_shift() {
            ensure((r.value - 2.0).abs() < 1e-12, || format!("BEEPS {} on a full shift", r.value))?;
        } else {
            ensure(r.value >= 2.0 - 1e-12, || format!("BEEPS {} below 2", r.value))?;
        }
        Ok(None)
    });
    s.run("local_q", "stirling_accuracy", |_, depth, _, _| {
        for e in [100u64, 1000, 50_000, depth.pick(200_000, 1_000_000) as u64] {
            let (exact, err) = exact_alt_log2(e);
            let st = stirling_alt_loglog((e as f64).log2());
            let diff = (st.log2 - exact.log2()).abs();
            ensure(diff <= st.err + err + 1e-9, || format!("E = {e}: Stirling {} vs exact {}", st.log2, exact.log2()))?;
        }
        Ok(None)
    });
    s.run("local_q", "recovery_sequence", |spec, depth, _, b| {
        if !spec.is_full_shift() {
            return Ok(Some("limit is only known in closed form for full shifts".into()));
        }
        let n_max = if spec.dim() == 1 { depth.pick(4, 6) } else { 2 };
        let seq = entropy_recovery_sequence(spec, 3, 1.0, n_max, None, b)?;
        let h = (spec.alphabet_size() as f64).log2();
        // Level 1 sits below the limit; the claims start at n = 2.
        let a: Vec<f64> = seq.iter().skip(1).filter_map(|l| l.a_n).collect();
        ensure(a.windows(2).all(|w| w[1] < w[0]), || format!("a_n not decreasing from n = 2: {a:?}"))?;
        ensure(a.iter().all(|&x| x >= h - 1e-9), || format!("a_n below log₂|A| from n = 2: {a:?}"))?;
        Ok(None)
    });
    s.run("local_q", "boundary_weight_monotone", |spec, _, _, _| {
        let sizes: Vec<num_bigint::BigUint> = (1..=5).map(|r| boundary_weight(&FiniteSet::centered_box(spec.dim(), r), 1, 2)).collect();
        ensure(sizes.windows(2).all(|w| w[0] <= w[1]), || "weights of nested boxes decrease".into())?;
        Ok(None)
    });
    s.run("local_q", "log_ratio", |_, _, _, _| {
        for a in 2u64..=32 {
            for c in 2u64..=32 {
                if let Some((m, n)) = log_ratio_rational(a, c) {
                    let ok = num_bigint::BigUint::from(a).pow(m as u32) == num_bigint::BigUint::from(c).pow(n as u32);
                    ensure(ok, || format!("{a}^{m} ≠ {c}^{n}"))?;
                }
            }
        }
        Ok(None)
    });

    SuiteResult { checks: s.checks }
}

/// φ ∘ ψ = ψ ∘ φ on sampled points of Fix(L) and Fix(2L); used for d ≥ 2,
/// where comparing rule tables would range over locally admissible patterns.
fn sampled_commute(
    spec: &SftSpec,
    lattice: &LatticeSubgroup<i64>,
    rng: &mut rand_chacha::ChaCha8Rng,
    b: &mut Budget,
    lhs: impl Fn(&PeriodicConfig) -> sftlab_core::Result<PeriodicConfig>,
    rhs: impl Fn(&PeriodicConfig) -> sftlab_core::Result<PeriodicConfig>,
) -> sftlab_core::Result<bool> {
    let doubled = LatticeSubgroup::from_basis(lattice.basis().iter().map(|row| row.iter().map(|x| 2 * x).collect()).collect())?;
    // Enumerating Fix(2L) of a constrained shift is too costly beyond small tori.
    let lattices = if spec.is_full_shift() || doubled.index() <= 40 { vec![lattice, &doubled] } else { vec![lattice] };
    for l in lattices {
        let pool = if spec.is_full_shift() { Vec::new() } else { fixed_points(spec, l, b)? };
        for _ in 0..10 {
            let x = if spec.is_full_shift() {
                sampling::random_periodic_point(spec, l, rng, b)?.expect("full shifts have every point")
            } else {
                match pool.choose(rng) {
                    Some(x) => x.clone(),
                    None => break,
                }
            };
            if lhs(&x)? != rhs(&x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn hnf_index(spec: &SftSpec, depth: Depth, rng: &mut rand_chacha::ChaCha8Rng, _: &mut Budget) -> Outcome {
    let d = spec.dim();
    for _ in 0..depth.pick(20, 200) {
        let basis: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let l = match LatticeSubgroup::from_basis(basis.clone()) {
            Ok(l) => l,
            Err(Error::SingularBasis) => continue,
            Err(e) => return Err(e.into()),
        };
        let dom = l.fundamental_domain();
        ensure(dom.len() as i64 == l.index(), || format!("index {} but {} domain points for {basis:?}", l.index(), dom.len()))?;
        for _ in 0..5 {
            let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-20..=20)).collect();
            let red = l.coset_reduce(&v);
            ensure(dom.contains(&red), || format!("{v:?} reduces outside the domain"))?;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes() {
        for spec in [SftSpec::full_shift(2, 1), SftSpec::golden_mean()] {
            let r = verify_suite(&spec, Depth::Small, 3);
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn planted_context_unsafe_gate_is_caught() {
        let r = verify_suite_with_faults(&SftSpec::golden_mean(), Depth::Small, 0, &[Fault::ContextUnsafeGate]);
        assert!(!r.passed());
        let f: Vec<&Check> = r.failures().collect();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].name, "injected_single_cell_swap");
        assert!(f[0].counterexample.is_some());
    }

    #[test]
    fn report_rows_follow_checks() {
        let r = verify_suite(&SftSpec::full_shift(2, 1), Depth::Small, 0);
        let n = r.checks.len();
        let rep = r.into_report();
        assert_eq!(rep.rows.len(), n);
        assert_eq!(rep.summary["passed"], json!(true));
    }
}
