//! Branching random walks on binary strings.
//!
//! Vertices of the `N`-dimensional hypercube are `N`-bit strings. A particle on a vertex
//! divides and its offspring move according to a mutation kernel (single bit flips,
//! powers and mixtures of them, complete graphs). This crate provides
//!
//! * [`kernels`]: vertex arithmetic, kernel definitions, exact sampling and structural
//!   analysis (degrees, bipartiteness, minimal transition entries);
//! * [`spectral`]: second eigenvalues, vertex-expansion bounds and the partial cover
//!   thresholds derived from them, with brute-force verifiers for small dimensions;
//! * [`sim`]: the coalescing walk, the walk with multiplicity, the division-rate walk
//!   and the affinity-driven walk, plus deterministic expectation propagation;
//! * [`stats`]: seeded replica aggregation, total variation and chi-square tests.
//!
//! The matrix code is generic over [`Scalar`] (floats or exact rationals) and the bounds
//! over [`Real`]; the aliases below fix the common instantiations.

pub mod kernels;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod spectral;
pub mod stats;

pub use kernels::{
    affinity, hamming, DenseMatrix, KernelConfig, KernelError, KernelKind, KernelSpec,
    VertexLabel,
};
pub use scalar::{Real, Scalar};
pub use sim::{
    ActiveSet, Population, SimConfig, SimError, SimMode, Start, StepRecord, Trajectory,
};
pub use spectral::{CoverThresholds, SpectralError, SpectrumSummary};
pub use stats::{Aggregate, StatsError};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// Double-precision transition matrix.
pub type Matrix = DenseMatrix<f64>;

/// Transition matrix with exact rational entries.
pub type ExactMatrix = DenseMatrix<Rational>;

pub type Thresholds = CoverThresholds<f64>;

pub type Spectrum = SpectrumSummary<f64>;
