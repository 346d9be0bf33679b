//! Replica aggregation and the statistical tests used to check simulations.

mod aggregate;
mod chisq;
mod special;

use thiserror::Error;

use crate::sim::SimError;

pub use aggregate::{
    aggregate, config_digest, growth_ratios, mean_se, monte_carlo, run_replicas, Aggregate, GrowthRatio, StepStat,
};
pub use chisq::{chi_square_gof, chi_square_statistic, chi_square_two_sample, ChiSquare};
pub use special::{ln_gamma, regularized_gamma_p, regularized_gamma_q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("at least {need} replicas required, got {got}")]
    TooFewReplicas { need: u64, got: u64 },
    #[error("replica {index} failed: {source}")]
    Replica { index: u64, source: SimError },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("vector is not a probability vector (sum {sum})")]
    NotNormalized { sum: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

/// Total variation distance `(1/2) sum |a_i - b_i|` between probability vectors.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch { left: a.len(), right: b.len() });
    }
    for v in [a, b] {
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || v.iter().any(|&x| x < 0.0) {
            return Err(StatsError::NotNormalized { sum });
        }
    }
    Ok((a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0).min(1.0))
}
