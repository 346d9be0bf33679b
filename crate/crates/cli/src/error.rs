use brw_core::kernels::KernelError;
use brw_core::sim::SimError;
use brw_core::spectral::SpectralError;
use brw_core::stats::StatsError;

/// Failure of a subcommand; each variant owns one exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("{0}")]
    Guard(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::SizeGuard { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Kernel(k) => k.into(),
            SimError::Overflow { .. } => CliError::Guard(format!("overflow guard: {e}")),
            SimError::Horizon { .. } | SimError::SizeGuard { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::Replica { source, .. } => source.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Kernel(k) => k.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
