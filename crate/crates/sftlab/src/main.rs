use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sftlab::plan::{parse_batch, Experiment, ExperimentPlan, Params};
use sftlab::{run, run_batch, Report, Status};

#[derive(Parser)]
#[command(name = "sftlab", version, about = "Experiments on shifts of finite type and their automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Common {
    /// Spec file or builtin name (full:K[:D], tracks:A,B[:D], golden-mean, hard-square-tri).
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Search-node budget; exhausting it yields a partial report (exit code 2).
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Omit the timestamp so that reruns are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
    #[arg(long = "S")]
    s: Option<f64>,
    #[arg(long = "R")]
    r: Option<i64>,
    #[arg(long)]
    kappa: Option<u64>,
    #[arg(long)]
    base_k: Option<i64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    margin: Option<i64>,
    /// Lattice basis rows, e.g. "2,1;0,3".
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long)]
    a1: Option<String>,
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long)]
    torus_period: Option<usize>,
    /// FiniteConfig JSON file for a single glider trace.
    #[arg(long)]
    config: Option<String>,
    /// JSON list of FiniteConfig documents for the permuter.
    #[arg(long)]
    points: Option<String>,
    /// Permutation images, e.g. "1,0".
    #[arg(long)]
    perm: Option<String>,
    #[arg(long)]
    isolation: Option<i64>,
    #[arg(long)]
    cancellation: Option<i64>,
    /// Two alphabet sizes, e.g. "2,8".
    #[arg(long, value_delimiter = ',')]
    alphabets: Option<Vec<u64>>,
    /// small or medium.
    #[arg(long)]
    depth: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Per-site entropy estimates on growing boxes.
    Entropy(Common),
    /// Fixed-point counts |Fix(L)|.
    Fix(Common),
    /// Extension counts |E(u)| per boundary pattern.
    Extensions(Common),
    /// The BEEPS statistic on a box.
    Beeps(Common),
    /// Entropy recovery from the local quotient orders.
    Localq(Common),
    /// Glider decomposition of finite configurations.
    Glider(Common),
    /// Homoclinic permuter on listed points.
    Permuter(Common),
    /// Square-root obstruction on X_2 and an explicit root on X_4.
    Sqroot(Common),
    /// Isomorphism of automorphism groups of full shifts.
    Classify(Common),
    /// Self-check suite.
    Verify(Common),
    /// Run a JSON list of experiment plans concurrently.
    Batch {
        plans: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
}

fn plan_from(experiment: Experiment, c: &Common) -> ExperimentPlan {
    let mut plan = ExperimentPlan::new(experiment, c.spec.as_deref());
    if let Some(b) = c.budget {
        plan.budget = b;
    }
    plan.seed = c.seed;
    plan.params = Params {
        s: c.s,
        r: c.r,
        kappa: c.kappa,
        base_k: c.base_k,
        n_max: c.n_max,
        margin: c.margin,
        lattice: c.lattice.clone(),
        a1: c.a1.clone(),
        a2: c.a2.clone(),
        samples: c.samples,
        max_steps: c.max_steps,
        torus_period: c.torus_period,
        config: c.config.clone(),
        points: c.points.clone(),
        perm: c.perm.clone(),
        isolation: c.isolation,
        cancellation: c.cancellation,
        alphabets: c.alphabets.clone(),
        depth: c.depth.clone(),
    };
    plan
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn finish(report: Report, no_timestamp: bool) -> Report {
    if no_timestamp {
        report
    } else {
        report.stamp()
    }
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Ok => 0,
        Status::BudgetPartial => 2,
    }
}

fn main_inner() -> Result<u8> {
    let cli = Cli::parse();
    let (experiment, common) = match &cli.command {
        Command::Batch { plans, out, no_timestamp } => {
            let text = std::fs::read_to_string(plans).with_context(|| format!("reading {}", plans.display()))?;
            let plans = parse_batch(&text)?;
            let mut reports = Vec::new();
            for (i, r) in run_batch(&plans).into_iter().enumerate() {
                reports.push(finish(r.with_context(|| format!("plan #{i}"))?, *no_timestamp));
            }
            let code = reports.iter().map(|r| exit_for(r.status)).max().unwrap_or(0);
            emit(&serde_json::to_string_pretty(&reports)?, out.as_ref())?;
            return Ok(code);
        }
        Command::Entropy(c) => (Experiment::Entropy, c),
        Command::Fix(c) => (Experiment::FixCount, c),
        Command::Extensions(c) => (Experiment::Extensions, c),
        Command::Beeps(c) => (Experiment::Beeps, c),
        Command::Localq(c) => (Experiment::Localq, c),
        Command::Glider(c) => (Experiment::Glider, c),
        Command::Permuter(c) => (Experiment::Permuter, c),
        Command::Sqroot(c) => (Experiment::SquareRoot, c),
        Command::Classify(c) => (Experiment::Classify, c),
        Command::Verify(c) => (Experiment::VerifySuite, c),
    };
    let plan = plan_from(experiment, common);
    let report = finish(run(&plan)?, common.no_timestamp);
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    emit(&text, common.out.as_ref())?;
    if experiment == Experiment::VerifySuite && report.summary.get("passed") == Some(&serde_json::Value::Bool(false)) {
        bail!("verification failed");
    }
    Ok(exit_for(report.status))
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
