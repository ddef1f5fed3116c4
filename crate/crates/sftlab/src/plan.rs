//! Experiment plans and their parameter schema.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Entropy,
    FixCount,
    Extensions,
    Beeps,
    Localq,
    Glider,
    Permuter,
    SquareRoot,
    Classify,
    VerifySuite,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Entropy => "entropy",
            Experiment::FixCount => "fix_count",
            Experiment::Extensions => "extensions",
            Experiment::Beeps => "beeps",
            Experiment::Localq => "localq",
            Experiment::Glider => "glider",
            Experiment::Permuter => "permuter",
            Experiment::SquareRoot => "square_root",
            Experiment::Classify => "classify",
            Experiment::VerifySuite => "verify_suite",
        }
    }

    fn needs_spec(self) -> bool {
        !matches!(self, Experiment::Classify | Experiment::SquareRoot)
    }

    /// Parameters each experiment reads; anything else set is a schema error.
    fn allowed(self) -> &'static [&'static str] {
        match self {
            Experiment::Entropy => &["n_max", "margin"],
            Experiment::FixCount => &["n_max", "lattice"],
            Experiment::Extensions => &["n_max", "s", "margin"],
            Experiment::Beeps => &["n_max", "s", "margin"],
            Experiment::Localq => &["base_k", "s", "n_max", "margin", "kappa", "r"],
            Experiment::Glider => &["r", "a1", "a2", "samples", "max_steps", "torus_period", "config"],
            Experiment::Permuter => &["points", "perm", "isolation", "cancellation"],
            Experiment::SquareRoot => &["n_max"],
            Experiment::Classify => &["alphabets"],
            Experiment::VerifySuite => &["depth"],
        }
    }
}

/// Optional experiment parameters; unset fields take per-experiment defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<i64>,
    /// Lattice basis as rows "a,b;c,d" (columns are the generators).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_period: Option<usize>,
    /// Path to a FiniteConfig JSON document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    /// Path to a JSON list of FiniteConfig documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
    /// Permutation images "1,0,2".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cancellation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabets: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<String>,
}

impl Params {
    fn set_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! check {
            ($($f:ident),*) => { $( if self.$f.is_some() { out.push(stringify!($f)); } )* };
        }
        check!(s, r, kappa, base_k, n_max, margin, lattice, a1, a2, samples, max_steps, torus_period, config, points, perm, isolation, cancellation, alphabets, depth);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

pub fn default_budget() -> u64 {
    50_000_000
}

impl ExperimentPlan {
    pub fn new(experiment: Experiment, spec: Option<&str>) -> Self {
        ExperimentPlan { experiment, spec: spec.map(str::to_string), params: Params::default(), budget: default_budget(), seed: 0 }
    }

    /// Checks the plan against its experiment's schema.
    pub fn validate(&self) -> Result<()> {
        if self.experiment.needs_spec() && self.spec.is_none() {
            bail!("experiment {} needs a spec", self.experiment.name());
        }
        let allowed = self.experiment.allowed();
        for f in self.params.set_fields() {
            if !allowed.contains(&f) {
                bail!("parameter {f:?} is not used by experiment {} (accepted: {})", self.experiment.name(), allowed.join(", "));
            }
        }
        let p = &self.params;
        if p.s.is_some_and(|s| !(s.is_finite() && s >= 0.0)) {
            bail!("S must be a nonnegative number");
        }
        if p.kappa.is_some_and(|k| k < 2) {
            bail!("kappa must be at least 2");
        }
        if p.base_k.is_some_and(|k| k < 3 || k % 2 == 0) {
            bail!("base-k must be odd and at least 3");
        }
        if p.n_max == Some(0) {
            bail!("n-max must be positive");
        }
        if let Some(d) = &p.depth {
            if d != "small" && d != "medium" {
                bail!("depth must be small or medium");
            }
        }
        if self.experiment == Experiment::Classify && p.alphabets.as_ref().is_none_or(|a| a.len() != 2) {
            bail!("classify needs exactly two alphabet sizes");
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: ExperimentPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }
}

/// A batch file: a JSON list of plans.
pub fn parse_batch(text: &str) -> Result<Vec<ExperimentPlan>> {
    let plans: Vec<ExperimentPlan> = serde_json::from_str(text)?;
    for (i, p) in plans.iter().enumerate() {
        p.validate().map_err(|e| e.context(format!("plan #{i}")))?;
    }
    Ok(plans)
}
