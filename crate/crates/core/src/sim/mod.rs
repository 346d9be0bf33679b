//! The four branching processes, expectation propagation and cover-time extraction.

mod expectation;
mod run;
mod state;
mod step;

use thiserror::Error;

use crate::kernels::KernelError;

pub use expectation::{propagate_expectation, propagate_normalized, GrowthMode, MAX_EXPECTATION_STATES};
pub use run::{
    detect_full_cover, partial_cover_time, run, run_replica, RunConfig, SimConfig, SimMode, Snapshot, Start,
    StepRecord, Trajectory,
};
pub use state::{ActiveSet, Population, DEFAULT_DENSE_BITS};
pub use step::{step_affinity_division, step_division_rate, step_multiplicity, step_simple};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("state {state} outside a state space of {states}")]
    StateOutOfRange { state: u64, states: u64 },
    #[error("population overflow (more than 2^63 particles){}", step.map(|t| format!(" at step {t}")).unwrap_or_default())]
    Overflow { step: Option<u32> },
    #[error("horizon guard: {steps} steps at growth rate {rate} reach 2^{bits:.1} particles, beyond 2^63")]
    Horizon { steps: u32, rate: f64, bits: f64 },
    #[error("size guard: {states} states exceeds the limit of {limit}")]
    SizeGuard { states: u64, limit: u64 },
    #[error("empty state")]
    Empty,
}

impl SimError {
    fn at_step(self, t: u32) -> Self {
        match self {
            SimError::Overflow { .. } => SimError::Overflow { step: Some(t) },
            e => e,
        }
    }
}
