//! One runner per experiment; [`run`] dispatches on the plan.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};
use sftlab_core::homoclinics::{build_glider_system, good_position, homoclinic_permuter, simulate_decomposition};
use sftlab_core::lattice::{build_centered_tower, FiniteSet, LatticeSubgroup};
use sftlab_core::localq::{beeps_statistic, boundary_weight, classify_full_shifts, kn_loglog_order, EXACT_FACTORIAL_LIMIT};
use sftlab_core::morphisms::{maps_equal, partial_shift, shift, square_root_obstruction, track_swap};
use sftlab_core::perm::Perm;
use sftlab_core::sft::{count_fixed_points, entropy_estimates, extension_table, fixed_points, FiniteConfig, SftSpec, Symbol};
use sftlab_core::{Budget, Error};

use crate::plan::{Experiment, ExperimentPlan};
use crate::report::{provenance, Report, Status};
use crate::sampling;
use crate::specs::ingest_spec;
use crate::verify::{verify_suite, Depth};

/// Unwraps a core result, turning budget exhaustion into a partial report.
fn guard<T>(report: &mut Report, r: sftlab_core::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => {
            report.status = Status::BudgetPartial;
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn word(spec: &SftSpec, values: &[Symbol]) -> String {
    values.iter().map(|&s| spec.symbol_name(s)).collect::<Vec<_>>().join(" ")
}

fn nonzero_symbols(spec: &SftSpec) -> Vec<Symbol> {
    let zero = spec.zero();
    (0..spec.alphabet_size() as Symbol).filter(|&s| Some(s) != zero).collect()
}

/// Executes a validated plan. Budget exhaustion yields a partial report.
pub fn run(plan: &ExperimentPlan) -> Result<Report> {
    plan.validate()?;
    let spec = plan.spec.as_deref().map(ingest_spec).transpose()?;
    let mut budget = Budget::new(plan.budget);
    let outcome = match plan.experiment {
        Experiment::Entropy => entropy(plan, spec.as_ref().expect("validated"), &mut budget),
        Experiment::FixCount => fix_count(plan, spec.as_ref().expect("validated"), &mut budget),
        Experiment::Extensions => extensions(plan, spec.as_ref().expect("validated"), &mut budget),
        Experiment::Beeps => beeps(plan, spec.as_ref().expect("validated"), &mut budget),
        Experiment::Localq => localq(plan, spec.as_ref().expect("validated"), &mut budget),
        Experiment::Glider => glider(plan, spec.as_ref().expect("validated"), &mut budget),
        Experiment::Permuter => permuter(plan, spec.as_ref().expect("validated"), &mut budget),
        Experiment::SquareRoot => square_root(plan, spec.as_ref(), &mut budget),
        Experiment::Classify => classify(plan),
        Experiment::VerifySuite => {
            let depth = match plan.params.depth.as_deref() {
                Some("medium") => Depth::Medium,
                _ => Depth::Small,
            };
            Ok(verify_suite(spec.as_ref().expect("validated"), depth, plan.seed).into_report())
        }
    };
    let mut report = match outcome {
        Ok(r) => r,
        Err(e) if matches!(e.downcast_ref::<Error>(), Some(Error::BudgetExceeded { .. })) => {
            let mut r = Report::new("", None, 0, &[]);
            r.status = Status::BudgetPartial;
            r.note("partial", "budget exhausted before the first row");
            r
        }
        Err(e) => return Err(e),
    };
    report.experiment = plan.experiment.name().to_string();
    report.spec = plan.spec.clone();
    report.seed = plan.seed;
    report.note("budget_used", budget.used());
    Ok(report)
}

fn entropy(plan: &ExperimentPlan, spec: &SftSpec, budget: &mut Budget) -> Result<Report> {
    let n_max = plan.params.n_max.unwrap_or(if spec.dim() == 1 { 12 } else { 4 });
    let mut r = Report::new("", None, 0, &["box", "cells", "log2_count", "per_site", "provenance"]);
    for n in 1..=n_max as i64 {
        let boxes = [FiniteSet::cube(spec.dim(), 0, n - 1)];
        let Some(est) = guard(&mut r, entropy_estimates::<f64>(spec, &boxes, plan.params.margin, budget))? else { break };
        let e = &est[0];
        r.push(vec![json!(format!("[0,{}]^{}", n - 1, spec.dim())), json!(e.cells), json!(e.log2_count), json!(e.per_site), json!(e.exactness.tag())]);
    }
    r.note("log2_alphabet", (spec.alphabet_size() as f64).log2());
    Ok(r)
}

fn fix_count(plan: &ExperimentPlan, spec: &SftSpec, budget: &mut Budget) -> Result<Report> {
    let lattices = match &plan.params.lattice {
        Some(text) => vec![LatticeSubgroup::parse(text)?],
        None => {
            let n_max = plan.params.n_max.unwrap_or(if spec.dim() == 1 { 15 } else { 3 });
            (1..=n_max as i64).map(|n| LatticeSubgroup::scaled(spec.dim(), n)).collect()
        }
    };
    let mut r = Report::new("", None, 0, &["lattice", "index", "count", "provenance"]);
    for l in lattices {
        if l.dim() != spec.dim() {
            bail!("lattice dimension {} does not match the shift dimension {}", l.dim(), spec.dim());
        }
        let Some(c) = guard(&mut r, count_fixed_points(spec, &l, budget))? else { break };
        r.push(vec![json!(l.to_string()), json!(l.index()), json!(c.to_string()), json!(provenance::EXACT)]);
    }
    Ok(r)
}

fn default_s(plan: &ExperimentPlan, spec: &SftSpec) -> f64 {
    plan.params.s.unwrap_or(spec.window_size().max(1) as f64)
}

fn extensions(plan: &ExperimentPlan, spec: &SftSpec, budget: &mut Budget) -> Result<Report> {
    let n = plan.params.n_max.unwrap_or(if spec.dim() == 1 { 5 } else { 3 }) as i64;
    let set = FiniteSet::cube(spec.dim(), 0, n - 1);
    let s = default_s(plan, spec);
    let mut r = Report::new("", None, 0, &["boundary_pattern", "extensions", "provenance"]);
    if let Some(t) = guard(&mut r, extension_table(spec, &set, s, plan.params.margin, budget))? {
        for (u, c) in &t.rows {
            r.push(vec![json!(word(spec, u)), json!(c.to_string()), json!(t.exactness.tag())]);
        }
        r.note("boundary_cells", t.boundary.len());
        r.note("total", t.total().to_string());
    }
    r.note("domain", format!("[0,{}]^{}", n - 1, spec.dim()));
    r.note("S", s);
    Ok(r)
}

fn beeps(plan: &ExperimentPlan, spec: &SftSpec, budget: &mut Budget) -> Result<Report> {
    let n = plan.params.n_max.unwrap_or(5) as i64;
    let set = FiniteSet::cube(spec.dim(), 0, n - 1);
    let s = default_s(plan, spec);
    let mut r = Report::new("", None, 0, &["u", "v", "e_u", "e_v", "value", "provenance"]);
    if let Some(b) = guard(&mut r, beeps_statistic(spec, &set, s, plan.params.margin, budget))? {
        let err = 8.0 * f64::EPSILON * b.value;
        r.push(vec![json!(word(spec, &b.u)), json!(word(spec, &b.v)), json!(b.e_u.to_string()), json!(b.e_v.to_string()), json!(b.value), json!(provenance::estimated(err))]);
    }
    r.note("domain", format!("[0,{}]^{}", n - 1, spec.dim()));
    r.note("S", s);
    Ok(r)
}

fn localq(plan: &ExperimentPlan, spec: &SftSpec, budget: &mut Budget) -> Result<Report> {
    let p = &plan.params;
    let k = p.base_k.unwrap_or(3);
    let s = p.s.unwrap_or(1.0);
    let n_max = p.n_max.unwrap_or(if spec.dim() == 1 { 7 } else { 2 });
    let (radius, kappa) = (p.r.unwrap_or(1), p.kappa.unwrap_or(2));
    let tower = build_centered_tower(k, spec.dim(), n_max)?;
    let cols = ["n", "index", "num_boundary_patterns", "logE_bits", "loglogK", "a_n", "error_bound", "trivial", "log2_weight", "provenance"];
    let mut r = Report::new("", None, 0, &cols);
    for (i, domain) in tower.domains.iter().enumerate() {
        let Some(kn) = guard(&mut r, kn_loglog_order(spec, domain, s, p.margin, budget))? else { break };
        let cells = domain.len() as f64;
        let weight = sftlab_core::numeric::log2_big::<f64>(&boundary_weight(domain, radius, kappa));
        let tag = match kn.loglog {
            None => provenance::EXACT.to_string(),
            Some(v) if kn.log_e_bits > (EXACT_FACTORIAL_LIMIT as f64).log2() => provenance::stirling(v.err / cells),
            Some(v) => provenance::exact_sum(v.err / cells),
        };
        r.push(vec![
            json!(i + 1),
            json!(domain.len().to_string()),
            json!(kn.num_boundary_patterns.to_string()),
            json!(kn.log_e_bits),
            json!(kn.loglog.map(|v| v.log2)),
            json!(kn.loglog.map(|v| v.log2 / cells)),
            json!(kn.loglog.map_or(0.0, |v| v.err / cells)),
            json!(kn.trivial()),
            json!(weight),
            json!(tag),
        ]);
    }
    r.note("base_k", k);
    r.note("S", s);
    Ok(r)
}

fn symbol_param(spec: &SftSpec, name: Option<&String>, fallback: Option<Symbol>) -> Result<Symbol> {
    match name {
        Some(n) => Ok(spec.symbol_index(n)?),
        None => fallback.ok_or_else(|| anyhow!("the shift has too few nonzero symbols for gliders")),
    }
}

fn glider(plan: &ExperimentPlan, spec: &SftSpec, budget: &mut Budget) -> Result<Report> {
    let p = &plan.params;
    let nz = nonzero_symbols(spec);
    let a1 = symbol_param(spec, p.a1.as_ref(), nz.first().copied())?;
    let a2 = symbol_param(spec, p.a2.as_ref(), nz.iter().copied().find(|&s| s != a1))?;
    let radius = p.r.unwrap_or((spec.window_size() + 1).max(2));
    let gs = build_glider_system(spec, a1, a2, radius, p.torus_period.unwrap_or(6), budget)?;
    let max_steps = p.max_steps.unwrap_or(10_000);
    if let Some(path) = &p.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let x = FiniteConfig::from_json(spec, &text)?;
        let d = simulate_decomposition(&gs, spec, &x, max_steps)?;
        let mut r = Report::new("", None, 0, &["step", "support", "escaped_left", "escaped_right"]);
        for t in &d.trace {
            r.push(vec![json!(t.step), json!(t.support), json!(t.escaped_left), json!(t.escaped_right)]);
        }
        r.note("n", d.n);
        r.note("p", d.p);
        r.note("replay_ok", d.replay_ok);
        return Ok(r);
    }
    let mut rng = sampling::rng(plan.seed);
    let cols = ["sample", "support", "n", "p", "left", "middle", "right", "replay_ok", "provenance"];
    let mut r = Report::new("", None, 0, &cols);
    for i in 0..p.samples.unwrap_or(20) {
        let x = sampling::random_finite_config(spec, 8, 40, true, &mut rng)?;
        let x = FiniteConfig::from_cells(1, gs.zero, x.cells().iter().map(|(q, &s)| (q.clone(), if s == a1 || s == a2 { s } else { a1 })));
        let d = simulate_decomposition(&gs, spec, &x, max_steps)?;
        r.push(vec![json!(i), json!(x.len()), json!(d.n), json!(d.p), json!(d.x_left.len()), json!(d.x_mid.len()), json!(d.x_right.len()), json!(d.replay_ok), json!(provenance::EXACT)]);
    }
    r.note("radius", radius);
    r.note("g_involution_tori", gs.g_involution_period);
    Ok(r)
}

fn permuter(plan: &ExperimentPlan, spec: &SftSpec, _budget: &mut Budget) -> Result<Report> {
    let p = &plan.params;
    let points: Vec<FiniteConfig> = match &p.points {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let docs: Vec<Value> = serde_json::from_str(&text)?;
            docs.iter().map(|d| FiniteConfig::from_json(spec, &d.to_string())).collect::<sftlab_core::Result<_>>()?
        }
        None => {
            let a = *nonzero_symbols(spec).first().ok_or_else(|| anyhow!("the shift has no nonzero symbol"))?;
            let zero = spec.require_zero()?;
            let d = spec.dim();
            let at = |c: i64| {
                let mut v = vec![0; d];
                v[0] = c;
                v
            };
            vec![FiniteConfig::from_cells(d, zero, [(at(0), a)]), FiniteConfig::from_cells(d, zero, [(at(0), a), (at(2), a)])]
        }
    };
    let pi = match &p.perm {
        Some(text) => Perm::from_images(text.split(',').map(|x| x.trim().parse::<usize>()).collect::<std::result::Result<_, _>>()?)?,
        None => Perm((0..points.len()).rev().collect()),
    };
    let hp = homoclinic_permuter(spec, &points, &pi, p.isolation, p.cancellation)?;
    let mut r = Report::new("", None, 0, &["point", "image", "expected", "ok", "provenance"]);
    for (i, x) in hp.points.iter().enumerate() {
        let y = good_position(&hp.map.apply_finite(x)?)?;
        let want = &hp.points[pi.apply(i)];
        r.push(vec![json!(i), json!(y.to_json(spec)), json!(want.to_json(spec)), json!(y == *want), json!(provenance::EXACT)]);
    }
    r.note("isolation", hp.isolation);
    r.note("cancellation", hp.cancellation);
    r.note("span", hp.span);
    Ok(r)
}

fn square_root(plan: &ExperimentPlan, spec: Option<&SftSpec>, budget: &mut Budget) -> Result<Report> {
    let n_max = plan.params.n_max.unwrap_or(6);
    let mut r = Report::new("", None, 0, &["spec", "check", "holds", "provenance"]);
    let two = LatticeSubgroup::scaled(1, 2);
    let mut targets = vec![("full:2".to_string(), SftSpec::full_shift(2, 1))];
    if let Some(s) = spec {
        targets.push(("input".to_string(), s.clone()));
    }
    for (name, s) in &targets {
        if s.dim() != 1 {
            bail!("square-root experiment expects a one-dimensional spec");
        }
        let Some(ob) = guard(&mut r, square_root_obstruction(s, &[1], &two, budget))? else { return Ok(r) };
        r.push(vec![json!(name), json!("shift is odd on Fix(2Z)"), json!(ob), json!(provenance::EXACT)]);
    }
    let x4 = SftSpec::full_shift_tracks(&[2, 2], 1);
    let g = track_swap(&x4, 0, 1)?.compose(&partial_shift(&x4, 0, &[1])?);
    let sigma = shift(1, 4, &[1])?;
    let Some(v) = guard(&mut r, maps_equal(&g.compose(&g), &sigma, &x4, budget))? else { return Ok(r) };
    r.push(vec![json!("tracks:2,2"), json!("g∘g = σ as rule tables"), json!(v.holds), json!(if v.exact { provenance::EXACT } else { provenance::BOUND })]);
    for n in 1..=n_max as i64 {
        let l = LatticeSubgroup::scaled(1, n);
        let Some(pts) = guard(&mut r, fixed_points(&x4, &l, budget))? else { return Ok(r) };
        let mut ok = true;
        for x in &pts {
            ok &= g.apply_periodic(&g.apply_periodic(x)?)? == sigma.apply_periodic(x)?;
        }
        r.push(vec![json!("tracks:2,2"), json!(format!("g∘g = σ on Fix({n}Z)")), json!(ok), json!(provenance::EXACT)]);
    }
    r.note("root", "track_swap ∘ partial_shift(track 1, e1)");
    Ok(r)
}

fn classify(plan: &ExperimentPlan) -> Result<Report> {
    let ab = plan.params.alphabets.as_ref().expect("validated");
    let c = classify_full_shifts(ab[0], ab[1]);
    let mut r = Report::new("", None, 0, &["a", "b", "isomorphic", "m", "n", "provenance"]);
    r.push(vec![json!(c.alphabet_a), json!(c.alphabet_b), json!(c.isomorphic), json!(c.witness.map(|w| w.0)), json!(c.witness.map(|w| w.1)), json!(provenance::EXACT)]);
    Ok(r)
}

/// Runs plans concurrently, preserving order.
pub fn run_batch(plans: &[ExperimentPlan]) -> Vec<Result<Report>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = plans.iter().map(|p| scope.spawn(move || run(p))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(anyhow!("experiment panicked")))).collect()
    })
}
