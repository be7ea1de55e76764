//! Layer-by-layer assembly of linkage instances and full-cycle tracing.

mod grashof;
mod instance;
mod solve;
mod trace;

use thiserror::Error;

pub use grashof::{grashof_class, FourBarLengths, GrashofClass};
pub use instance::{AddedNode, Constraint, LinkageInstance};
pub use solve::{solve_dyad, solve_slider, Branch, Rail, SolveError, EPS_BRANCH};
pub use trace::{
    assemble, crank_slider, max_link_residual, realized_branches, step_angle, sweep, trace, Configuration, Trajectory,
    DEFAULT_STEPS, MIN_STEPS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("node {node} cannot be placed at theta={theta:.6}: {source}")]
    Assembly { node: usize, theta: f64, source: SolveError },
    #[error("crank cannot complete a revolution: step {step}, node {node}: {source}")]
    InfeasibleCycle { step: usize, node: usize, theta: f64, source: SolveError },
    #[error("at least {min} steps required, got {steps}", min = MIN_STEPS)]
    TooFewSteps { steps: usize },
}
