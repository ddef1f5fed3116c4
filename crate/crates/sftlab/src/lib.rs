//! Experiment plans, runners and reports on top of `sftlab-core`.

pub mod experiments;
pub mod plan;
pub mod report;
pub mod sampling;
pub mod specs;
pub mod verify;

pub use experiments::{run, run_batch};
pub use plan::{Experiment, ExperimentPlan, Params};
pub use report::{Report, Status};
