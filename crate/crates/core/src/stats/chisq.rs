use serde::Serialize;

use super::special::regularized_gamma_q;
use super::StatsError;

/// Minimum expected count per cell after pooling.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    /// Cells after pooling, minus one.
    pub df: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit test of `observed` counts against cell probabilities `expected`.
///
/// Consecutive cells are pooled until each pooled cell expects at least five counts; a
/// short remainder joins the last pooled cell.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<ChiSquare, StatsError> {
    if observed.len() != expected.len() {
        return Err(StatsError::LengthMismatch { left: observed.len(), right: expected.len() });
    }
    let mass: f64 = expected.iter().sum();
    if (mass - 1.0).abs() > 1e-9 || expected.iter().any(|&p| p < 0.0) {
        return Err(StatsError::NotNormalized { sum: mass });
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(StatsError::Degenerate("no observations".into()));
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&obs, &p) in observed.iter().zip(expected) {
        if p == 0.0 && obs > 0 {
            return Err(StatsError::Degenerate("observation in a cell of probability zero".into()));
        }
        o += obs as f64;
        e += p * n as f64;
        if e >= MIN_EXPECTED {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    if cells.len() < 2 {
        return Err(StatsError::Degenerate("fewer than two cells after pooling".into()));
    }
    let statistic = chi_square_statistic(&cells);
    let df = cells.len() - 1;
    Ok(ChiSquare { statistic, df, p_value: regularized_gamma_q(df as f64 / 2.0, statistic / 2.0) })
}

/// Homogeneity test of two count vectors over the same cells: do both samples come from
/// one law? Consecutive cells are pooled until both expected counts reach five.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<ChiSquare, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch { left: a.len(), right: b.len() });
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(StatsError::Degenerate("empty sample".into()));
    }
    let total = na + nb;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut x, mut y) = (0.0, 0.0);
    for (&p, &q) in a.iter().zip(b) {
        x += p as f64;
        y += q as f64;
        let both = x + y;
        if both * na.min(nb) / total >= MIN_EXPECTED {
            pooled.push((x, y));
            x = 0.0;
            y = 0.0;
        }
    }
    if x + y > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += x;
                last.1 += y;
            }
            None => pooled.push((x, y)),
        }
    }
    if pooled.len() < 2 {
        return Err(StatsError::Degenerate("fewer than two cells after pooling".into()));
    }
    let cells: Vec<(f64, f64)> = pooled
        .iter()
        .flat_map(|&(x, y)| {
            let both = x + y;
            [(x, both * na / total), (y, both * nb / total)]
        })
        .collect();
    let statistic = chi_square_statistic(&cells);
    let df = pooled.len() - 1;
    Ok(ChiSquare { statistic, df, p_value: regularized_gamma_q(df as f64 / 2.0, statistic / 2.0) })
}

/// `sum (o - e)^2 / e` over `(observed, expected)` cells.
pub fn chi_square_statistic(cells: &[(f64, f64)]) -> f64 {
    cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replica_rng;
    use rand_distr::{Binomial, Distribution};

    fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
        let mut pmf = vec![0.0; n as usize + 1];
        let mut c = 1.0;
        for k in 0..=n {
            pmf[k as usize] = c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
            c = c * (n - k) as f64 / (k + 1) as f64;
        }
        pmf
    }

    #[test]
    fn perfect_fit_has_p_value_one() {
        let r = chi_square_gof(&[25, 25, 50], &[0.25, 0.25, 0.5]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.df, 2);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pooling_small_cells() {
        // Expected counts 1, 1, 8, 90: the first three pool into one cell.
        let r = chi_square_gof(&[1, 1, 8, 90], &[0.01, 0.01, 0.08, 0.9]).unwrap();
        assert_eq!(r.df, 1);
        // Trailing cells below the threshold join the last full cell.
        let r = chi_square_gof(&[90, 8, 1, 1], &[0.9, 0.08, 0.01, 0.01]).unwrap();
        assert_eq!(r.df, 1);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(chi_square_gof(&[10], &[1.0]).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.5, 0.5]).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.5]).is_err());
        assert!(chi_square_gof(&[5, 5], &[0.2, 0.2]).is_err());
        assert!(chi_square_gof(&[0, 0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn detects_a_wrong_law() {
        let mut rng = replica_rng(1, 0);
        let dist = Binomial::new(20, 0.3).unwrap();
        let mut obs = vec![0u64; 21];
        for _ in 0..100_000 {
            obs[dist.sample(&mut rng) as usize] += 1;
        }
        assert!(chi_square_gof(&obs, &binomial_pmf(20, 0.31)).unwrap().p_value < 1e-6);
    }

    #[test]
    fn two_sample_test() {
        let r = chi_square_two_sample(&[10, 20, 30], &[20, 40, 60]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.df, 2);
        assert!(chi_square_two_sample(&[100, 0], &[0, 100]).unwrap().p_value < 1e-20);
        assert!(chi_square_two_sample(&[1, 2], &[3]).is_err());
        assert!(chi_square_two_sample(&[0, 0], &[3, 4]).is_err());
    }

    #[test]
    fn calibrated_under_the_null() {
        let dist = Binomial::new(12, 0.4).unwrap();
        let pmf = binomial_pmf(12, 0.4);
        let mut passes = 0;
        for trial in 0..100 {
            let mut rng = replica_rng(2024, trial);
            let mut obs = vec![0u64; 13];
            for _ in 0..100_000 {
                obs[dist.sample(&mut rng) as usize] += 1;
            }
            if chi_square_gof(&obs, &pmf).unwrap().p_value > 0.01 {
                passes += 1;
            }
        }
        assert!(passes >= 98, "{passes} of 100");
    }
}
