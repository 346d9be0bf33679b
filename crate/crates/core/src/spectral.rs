//! Second eigenvalues, vertex-expansion bounds and partial cover thresholds.
//!
//! All closed forms are generic over [`Real`]. The brute-force verifiers at the bottom
//! enumerate subsets of small hypercubes and serve as oracles for the formulas.

use serde::Serialize;
use thiserror::Error;

use crate::kernels::{
    dense_matrix, degree, is_bipartite, mixture_degree_real, min_nonzero_entry_power, DenseMatrix, KernelError,
    KernelSpec,
};
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("no closed-form spectrum for {0}")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, SpectralError>;

fn out_of_range<T>(msg: String) -> Result<T> {
    Err(SpectralError::OutOfRange(msg))
}

/// Second eigenvalue, degree and size of a kernel's transition matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSummary<F> {
    pub lambda2: F,
    pub degree: u64,
    pub state_count: u64,
    pub bipartite: bool,
}

/// Thresholds for the partial cover of a hypercube by the coalescing walk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverThresholds<F> {
    pub r_exact: F,
    pub r_simplified: F,
    pub delta_nk: F,
    pub delta_ceiling: F,
    pub nu_max: F,
}

/// The two forms of the expansion threshold `r(N)` and the integer level used downstream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RThreshold<F> {
    pub r_exact: F,
    pub r_simplified: F,
    /// `ceil(r_simplified)` clamped to `1..=N`.
    pub r: u32,
}

/// Ingredients and value of the coverage constant for the mixture kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaNk<F> {
    /// Average minimal transition entry `(1/k) sum_i i!/N^i`.
    pub capital_delta: F,
    pub degree: F,
    pub lambda2: F,
    pub raw: F,
    /// `min(raw, 1)`.
    pub clamped: F,
    /// `min(raw, 1/2)`, the level an expansion argument can actually guarantee.
    pub usable: F,
}

/// Value of the ceiling `delta(M)` for a `d`-regular kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaCeiling<F> {
    pub raw: F,
    /// `raw` clamped to `[0, 1/2]`.
    pub usable: F,
}

/// Second largest eigenvalue of the mixture of `1..=k` single flips on `N` bits:
///
/// ```text
/// lambda = (N - 2) / (2k) * (1 - ((N - 2) / N)^k)
/// ```
pub fn lambda2_mixture<F: Real>(n_bits: u32, k: u32) -> Result<F> {
    if n_bits < 2 {
        return out_of_range(format!("N must be at least 2, got {n_bits}"));
    }
    if k == 0 || k > n_bits {
        return out_of_range(format!("k must lie in 1..={n_bits}, got {k}"));
    }
    let n = F::of_u64(n_bits as u64);
    let two = F::of(2.0);
    let mu = (n - two) / n;
    if n_bits == 2 {
        return Ok(F::zero());
    }
    Ok((n - two) / (two * F::of_u64(k as u64)) * (F::one() - mu.powi(k as i32)))
}

/// Lower bound on the neighbourhood of a set of `set_size` vertices in a regular graph on
/// `n` vertices whose normalised second eigenvalue is `lambda`:
/// `|S| / (lambda^2 + (1 - lambda^2) |S| / n)`.
pub fn tanner_bound<F: Real>(set_size: u64, n: u64, lambda: F) -> Result<F> {
    if set_size == 0 || 2 * set_size > n {
        return out_of_range(format!("set size must lie in 1..=n/2, got {set_size} for n = {n}"));
    }
    if !(lambda >= F::zero() && lambda < F::one()) {
        return out_of_range(format!("normalised eigenvalue must lie in [0, 1), got {lambda:?}"));
    }
    let s = F::of_u64(set_size);
    let l2 = lambda * lambda;
    Ok(s / (l2 + (F::one() - l2) * s / F::of_u64(n)))
}

/// Neighbourhood bound `|S| / (eps^2 (1 - delta) + delta)` for `|S| <= delta n` in an
/// `eps`-expander.
pub fn eps_expander_bound<F: Real>(set_size: F, eps: F, delta: F) -> Result<F> {
    check_delta(delta)?;
    Ok(set_size / (eps * eps * (F::one() - delta) + delta))
}

/// Expansion factor `alpha = 1 / (lambda^2 (1 - delta) + delta)`.
pub fn alpha_from_lambda<F: Real>(lambda2: F, delta: F) -> Result<F> {
    if !(lambda2 >= F::zero() && lambda2 < F::one()) {
        return out_of_range(format!("lambda2 must lie in [0, 1), got {lambda2:?}"));
    }
    check_delta(delta)?;
    Ok(F::one() / (lambda2 * lambda2 * (F::one() - delta) + delta))
}

fn check_delta<F: Real>(delta: F) -> Result<()> {
    if !(delta > F::zero() && delta <= F::of(0.5)) {
        return out_of_range(format!("delta must lie in (0, 1/2], got {delta:?}"));
    }
    Ok(())
}

/// Expansion threshold `r(N)`.
///
/// ```text
/// r_exact      = (N e^-2 + N - 1 - N e^(-2/N)) / (e^-2 + N - 1 - N e^(-2/N))
/// r_simplified = (N^2 e^-2 + N - 2) / (N e^-2 + N - 2)
/// ```
pub fn r_threshold<F: Real>(n_bits: u32) -> Result<RThreshold<F>> {
    if n_bits < 3 {
        return out_of_range(format!("N must be at least 3, got {n_bits}"));
    }
    let n = F::of_u64(n_bits as u64);
    let one = F::one();
    let two = F::of(2.0);
    let e2 = (-two).exp();
    let tail = n - one - n * (-two / n).exp();
    let r_exact = (n * e2 + tail) / (e2 + tail);
    let r_simplified = (n * n * e2 + n - two) / (n * e2 + n - two);
    let r = r_simplified.ceil().to_u32().unwrap_or(n_bits).clamp(1, n_bits);
    Ok(RThreshold { r_exact, r_simplified, r })
}

/// Threshold `r_N(nu)` required for a growth rate `nu`:
/// `(nu (N - 1) + N e^-2 - N e^(-2/N) + N - 1) / (e^-2 - N e^(-2/N) + N - 1)`.
pub fn r_of_nu<F: Real>(n_bits: u32, nu: F) -> Result<F> {
    if n_bits < 3 {
        return out_of_range(format!("N must be at least 3, got {n_bits}"));
    }
    if !(nu > F::zero()) {
        return out_of_range(format!("nu must be positive, got {nu:?}"));
    }
    let n = F::of_u64(n_bits as u64);
    let one = F::one();
    let e2 = F::of(-2.0).exp();
    let tail = n - one - n * (F::of(-2.0) / n).exp();
    Ok((nu * (n - one) + n * e2 + tail) / (e2 + tail))
}

/// Largest growth rate with `r_N(nu) <= N`: `N - 1 - N e^(-2/N)`.
pub fn nu_max<F: Real>(n_bits: u32) -> Result<F> {
    if n_bits < 3 {
        return out_of_range(format!("N must be at least 3, got {n_bits}"));
    }
    let n = F::of_u64(n_bits as u64);
    Ok(n - F::one() - n * (F::of(-2.0) / n).exp())
}

/// Coverage constant for the mixture of `1..=k` flips.
///
/// With `Delta = (1/k) sum_{i<=k} i!/N^i`, `d` the mixture degree and `lambda` its second
/// eigenvalue,
///
/// ```text
/// delta = (e^(-2 Delta d) - d e^(-2 Delta) + d - 1)
///         / ((1 - lambda^2) (d e^(-2 Delta d) - d e^(-2 Delta) + d - 1))
///         - lambda^2 / (1 - lambda^2)
/// ```
///
/// For `k = 1` the constant is `2^-r` with `r` from [`r_threshold`].
pub fn delta_nk<F: Real>(n_bits: u32, k: u32) -> Result<DeltaNk<F>> {
    if n_bits < 3 {
        return out_of_range(format!("N must be at least 3, got {n_bits}"));
    }
    if k == 0 || k > n_bits {
        return out_of_range(format!("k must lie in 1..={n_bits}, got {k}"));
    }
    let one = F::one();
    let half = F::of(0.5);
    let lambda: F = lambda2_mixture(n_bits, k)?;
    let capital_delta = (1..=k)
        .map(|i| min_nonzero_entry_power::<f64>(n_bits, i).map(F::of))
        .try_fold(F::zero(), |acc, m| m.map(|m| acc + m))?
        / F::of_u64(k as u64);
    let d: F = if k == 1 { F::of_u64(n_bits as u64) } else { mixture_degree_real(n_bits, k)? };
    let raw = if k == 1 {
        F::of(2.0).powi(-(r_threshold::<F>(n_bits)?.r as i32))
    } else {
        let two = F::of(2.0);
        let a = (-two * capital_delta * d).exp();
        let b = d * (-two * capital_delta).exp();
        let l2 = lambda * lambda;
        (a - b + d - one) / ((one - l2) * (d * a - b + d - one)) - l2 / (one - l2)
    };
    Ok(DeltaNk {
        capital_delta,
        degree: d,
        lambda2: lambda,
        raw,
        clamped: raw.min(one).max(F::zero()),
        usable: raw.min(half).max(F::zero()),
    })
}

/// Best coverage constant an expansion argument yields for a `d`-regular kernel with
/// second eigenvalue `lambda2`:
/// `(d e^-2 + d - 2) / ((1 - lambda^2)(d^2 e^-2 + d - 2)) - lambda^2 / (1 - lambda^2)`.
pub fn delta_ceiling<F: Real>(d: F, lambda2: F) -> Result<DeltaCeiling<F>> {
    if !(d >= F::of(2.0)) {
        return out_of_range(format!("degree must be at least 2, got {d:?}"));
    }
    if !(lambda2 >= F::zero() && lambda2 < F::one()) {
        return out_of_range(format!("lambda2 must lie in [0, 1), got {lambda2:?}"));
    }
    let one = F::one();
    let two = F::of(2.0);
    let e2 = (-two).exp();
    let l2 = lambda2 * lambda2;
    let raw = (d * e2 + d - two) / ((one - l2) * (d * d * e2 + d - two)) - l2 / (one - l2);
    Ok(DeltaCeiling { raw, usable: raw.max(F::zero()).min(F::of(0.5)) })
}

/// All thresholds for the mixture of `1..=k` flips on `N` bits.
pub fn cover_thresholds<F: Real>(n_bits: u32, k: u32) -> Result<CoverThresholds<F>> {
    let r = r_threshold::<F>(n_bits)?;
    let delta = delta_nk::<F>(n_bits, k)?;
    Ok(CoverThresholds {
        r_exact: r.r_exact,
        r_simplified: r.r_simplified,
        delta_nk: delta.clamped,
        delta_ceiling: delta_ceiling(delta.degree, delta.lambda2)?.usable,
        nu_max: nu_max(n_bits)?,
    })
}

/// Second largest eigenvalue, degree and bipartiteness of a kernel, from closed forms.
///
/// Explicit matrices and even powers of the single flip (whose support is disconnected)
/// are rejected.
pub fn spectrum_summary<F: Real>(kernel: &KernelSpec) -> Result<SpectrumSummary<F>> {
    let (lambda2, bipartite) = closed_form_lambda2::<F>(kernel)?;
    Ok(SpectrumSummary { lambda2, degree: degree(kernel), state_count: kernel.state_count(), bipartite })
}

fn closed_form_lambda2<F: Real>(kernel: &KernelSpec) -> Result<(F, bool)> {
    let one = F::one();
    Ok(match kernel {
        KernelSpec::SingleFlip { n_bits } => {
            let n = F::of_u64(*n_bits as u64);
            ((n - F::of(2.0)) / n, true)
        }
        KernelSpec::Power { n_bits, k } => {
            if k % 2 == 0 {
                return Err(KernelError::Disconnected.into());
            }
            let n = F::of_u64(*n_bits as u64);
            // Eigenvalues ((N - 2j) / N)^k; with k odd the largest after j = 0 is j = 1.
            (((n - F::of(2.0)) / n).powi(*k as i32), true)
        }
        KernelSpec::Mixture { n_bits, k } => {
            if *n_bits == 1 {
                (-one, true)
            } else {
                (lambda2_mixture(*n_bits, *k)?, *k == 1)
            }
        }
        KernelSpec::Lazy { p_stay, base } => {
            let (l, _) = closed_form_lambda2::<F>(base)?;
            let p = F::of(*p_stay);
            (p + (one - p) * l, false)
        }
        KernelSpec::CompleteGraph { n } => (-one / F::of_u64(n - 1), *n == 2),
        KernelSpec::CompleteBipartite { half } => (if *half == 1 { -one } else { F::zero() }, true),
        KernelSpec::ExplicitMatrix(_) => {
            return Err(SpectralError::Unsupported("explicit matrices".into()));
        }
    })
}

/// Eigenvalues of a hypercube kernel obtained by applying its dense matrix to the parity
/// vectors `chi_S(x) = (-1)^popcount(S & x)`, one per weight `|S| = 0..=N`.
///
/// Every kernel in the hypercube family commutes with bit permutations, so all parity
/// vectors of the same weight share an eigenvalue. Each returned value is checked to be
/// an exact eigenvalue, coordinate by coordinate, within `tol`; otherwise an error is
/// returned.
pub fn parity_eigenvalues(kernel: &KernelSpec, tol: f64) -> Result<Vec<f64>> {
    let n_bits = kernel
        .hypercube_dim()
        .ok_or_else(|| SpectralError::Unsupported("parity eigenvectors need a hypercube kernel".into()))?;
    let m: DenseMatrix<f64> = dense_matrix(kernel)?;
    let size = m.dim();
    (0..=n_bits)
        .map(|j| {
            let s = (1u64 << j) - 1;
            let chi: Vec<f64> = (0..size as u64).map(|x| if (s & x).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 }).collect();
            let image = m.apply(&chi);
            let value = image[0] * chi[0];
            for (y, c) in image.iter().zip(&chi) {
                if (y - value * c).abs() > tol {
                    return Err(SpectralError::OutOfRange(format!("parity vector of weight {j} is not an eigenvector")));
                }
            }
            Ok(value)
        })
        .collect()
}

/// Exhaustive check that every set of at most `2^(N-r)` vertices of the hypercube has at
/// least `r |S|` neighbours under single flips. Limited to `N <= 4`.
pub fn verify_expander_bruteforce(kernel: &KernelSpec, r: u32) -> Result<bool> {
    let KernelSpec::SingleFlip { n_bits } = *kernel else {
        return Err(SpectralError::Unsupported("expander enumeration needs a single-flip kernel".into()));
    };
    if n_bits > 4 {
        return out_of_range(format!("enumeration limited to N <= 4, got {n_bits}"));
    }
    if r == 0 || r > n_bits {
        return out_of_range(format!("r must lie in 1..={n_bits}, got {r}"));
    }
    let n = 1usize << n_bits;
    let neighbours: Vec<u32> = (0..n).map(|v| (0..n_bits).fold(0u32, |m, i| m | 1 << (v ^ (1 << i)))).collect();
    let cap = 1u32 << (n_bits - r);
    for set in 1u32..(1u32 << n) {
        let size = set.count_ones();
        if size > cap {
            continue;
        }
        let hood = (0..n).filter(|&v| set >> v & 1 == 1).fold(0u32, |acc, v| acc | neighbours[v]);
        if hood.count_ones() < r * size {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `kernel` has bipartite support, with the closed-form answer used when the
/// state space is too large to traverse.
pub fn bipartite(kernel: &KernelSpec) -> Result<bool> {
    match kernel {
        KernelSpec::ExplicitMatrix(_) => Ok(is_bipartite(kernel)?),
        _ => Ok(closed_form_lambda2::<f64>(kernel)?.1),
    }
}
