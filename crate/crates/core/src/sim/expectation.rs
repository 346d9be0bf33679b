use super::SimError;
use crate::kernels::KernelSpec;
use crate::scalar::Scalar;

/// Largest state space the expectation recursion accepts.
pub const MAX_EXPECTATION_STATES: u64 = 1 << 20;

/// Growth law of the mean occupation vector.
#[derive(Clone, Debug, PartialEq)]
pub enum GrowthMode<T> {
    /// `E[X_{t+1}] = c E[X_t] M`.
    ConstantRate { c: u32 },
    /// `E[X_{t+1}] = (1 - p) E[X_t] + 2p E[X_t] M`.
    DivisionRate { p: T },
}

impl<T: Scalar> GrowthMode<T> {
    fn factor(&self) -> T {
        match self {
            GrowthMode::ConstantRate { c } => T::from_ratio(*c as u64, 1),
            GrowthMode::DivisionRate { p } => T::one() + p.clone(),
        }
    }
}

fn step<T: Scalar>(x: &[T], mode: &GrowthMode<T>, kernel: &KernelSpec, normalise: bool) -> Result<Vec<T>, SimError> {
    let moved = kernel.push_forward(x)?;
    let (stay, go) = match mode {
        GrowthMode::ConstantRate { c } => (T::zero(), T::from_ratio(*c as u64, 1)),
        GrowthMode::DivisionRate { p } => (T::one() - p.clone(), p.clone() + p.clone()),
    };
    let (stay, go) = if normalise {
        let f = mode.factor();
        (stay / f.clone(), go / f)
    } else {
        (stay, go)
    };
    Ok(x.iter().zip(moved).map(|(a, b)| stay.clone() * a.clone() + go.clone() * b).collect())
}

fn check<T: Scalar>(dist: &[T], mode: &GrowthMode<T>, kernel: &KernelSpec) -> Result<(), SimError> {
    let n = kernel.state_count();
    if n > MAX_EXPECTATION_STATES {
        return Err(SimError::SizeGuard { states: n, limit: MAX_EXPECTATION_STATES });
    }
    if dist.iter().any(|x| *x < T::zero()) {
        return Err(SimError::InvalidConfig("expectation vector has a negative entry".into()));
    }
    match mode {
        GrowthMode::ConstantRate { c: 0 } => Err(SimError::InvalidConfig("c must be at least 1".into())),
        GrowthMode::DivisionRate { p } if !(*p > T::zero() && *p < T::one()) => {
            Err(SimError::InvalidConfig(format!("division rate must lie in (0, 1), got {p:?}")))
        }
        _ => Ok(()),
    }
}

/// Mean particle counts after `steps` steps, starting from `dist`.
pub fn propagate_expectation<T: Scalar>(
    dist: &[T],
    mode: &GrowthMode<T>,
    kernel: &KernelSpec,
    steps: u32,
) -> Result<Vec<T>, SimError> {
    check(dist, mode, kernel)?;
    let mut x = dist.to_vec();
    for _ in 0..steps {
        x = step(&x, mode, kernel, false)?;
    }
    Ok(x)
}

/// [`propagate_expectation`] divided by the mean growth `c^t` or `(1 + p)^t`, step by step.
/// A probability vector stays one.
pub fn propagate_normalized<T: Scalar>(
    dist: &[T],
    mode: &GrowthMode<T>,
    kernel: &KernelSpec,
    steps: u32,
) -> Result<Vec<T>, SimError> {
    check(dist, mode, kernel)?;
    let mut x = dist.to_vec();
    for _ in 0..steps {
        x = step(&x, mode, kernel, true)?;
    }
    Ok(x)
}
