//! Vertices, mutation kernels and their structure.

mod config;
mod dense;
mod spec;
mod structure;
mod vertex;

use thiserror::Error;

pub use config::{KernelConfig, KernelKind};
pub use dense::{dense_matrix, DenseMatrix};
pub use spec::{ExplicitKernel, KernelSpec, MAX_EXPLICIT_STATES};
pub use structure::{
    common_neighbor_count, degree, is_bipartite, max_common_neighbors, min_nonzero_entry_power,
    mixture_degree, mixture_degree_real, MAX_BIPARTITE_STATES,
};
pub use vertex::{affinity, hamming, VertexLabel, MAX_DENSE_DIM, MAX_DIM};

pub(crate) use spec::binomial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("dimension {0} outside 1..=62")]
    InvalidDimension(u32),
    #[error("label {bits:#x} does not fit in {dim} bits")]
    LabelOutOfRange { bits: u64, dim: u32 },
    #[error("invalid kernel parameter: {0}")]
    InvalidParameter(String),
    #[error("row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: f64 },
    #[error("size guard: {states} states exceeds the limit of {limit}")]
    SizeGuard { states: u64, limit: u64 },
    #[error("support graph is not connected")]
    Disconnected,
    #[error("state {state} outside a kernel with {states} states")]
    StateOutOfRange { state: u64, states: u64 },
}

/// Draws the next state of `v` under `kernel`.
pub fn sample_neighbor<R: rand::Rng + ?Sized>(
    kernel: &KernelSpec,
    v: VertexLabel,
    rng: &mut R,
) -> Result<VertexLabel, KernelError> {
    if !kernel.contains(v.bits()) {
        return Err(KernelError::StateOutOfRange { state: v.bits(), states: kernel.state_count() });
    }
    if v.dim() != kernel.label_dim() {
        return Err(KernelError::DimensionMismatch { left: v.dim(), right: kernel.label_dim() });
    }
    VertexLabel::new(kernel.sample(v.bits(), rng), v.dim())
}
