use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::StatsError;
use crate::sim::{run_replica, SimConfig, Trajectory};

/// Mean and standard error of `|S_t|` and `Z_t` at one step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepStat {
    pub t: u32,
    pub s_mean: f64,
    pub s_se: f64,
    pub z_mean: f64,
    pub z_se: f64,
}

/// Replica summary of a run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub config_digest: String,
    pub n: u64,
    pub per_step: Vec<StepStat>,
    /// Affinity histograms pooled over replicas, one per step, when a target is set.
    pub histograms: Vec<Vec<u64>>,
}

/// Hex SHA-256 of the configuration's canonical debug rendering.
pub fn config_digest(config: &SimConfig) -> String {
    Sha256::digest(format!("{config:?}").as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs replicas `0..replicas` in parallel; the result is in replica order.
pub fn run_replicas(config: &SimConfig, replicas: u64) -> Result<Vec<Trajectory>, StatsError> {
    (0..replicas)
        .into_par_iter()
        .map(|r| run_replica(config, r).map_err(|source| StatsError::Replica { index: r, source }))
        .collect()
}

/// Runs and aggregates `replicas` replicas of `config`.
pub fn monte_carlo(config: &SimConfig, replicas: u64) -> Result<Aggregate, StatsError> {
    if replicas < 2 {
        return Err(StatsError::TooFewReplicas { need: 2, got: replicas });
    }
    let runs = run_replicas(config, replicas)?;
    aggregate(config, &runs)
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`).
///
/// Values are summed in sorted order, so the result does not depend on their order.
pub fn mean_se(values: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = values.len();
    if n < 2 {
        return Err(StatsError::TooFewReplicas { need: 2, got: n as u64 });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let mut dev: Vec<f64> = sorted.iter().map(|x| (x - mean) * (x - mean)).collect();
    dev.sort_by(f64::total_cmp);
    let var = dev.iter().sum::<f64>() / (n - 1) as f64;
    Ok((mean, (var / n as f64).sqrt()))
}

/// Per-step statistics of completed runs. Independent of the order of `runs`.
pub fn aggregate(config: &SimConfig, runs: &[Trajectory]) -> Result<Aggregate, StatsError> {
    if runs.len() < 2 {
        return Err(StatsError::TooFewReplicas { need: 2, got: runs.len() as u64 });
    }
    let steps = runs[0].records.len();
    if let Some(bad) = runs.iter().find(|r| r.records.len() != steps) {
        return Err(StatsError::LengthMismatch { left: steps, right: bad.records.len() });
    }
    let mut per_step = Vec::with_capacity(steps);
    let mut histograms = Vec::new();
    for i in 0..steps {
        let s: Vec<f64> = runs.iter().map(|r| r.records[i].active_count as f64).collect();
        let z: Vec<f64> = runs.iter().map(|r| r.records[i].population as f64).collect();
        let (s_mean, s_se) = mean_se(&s)?;
        let (z_mean, z_se) = mean_se(&z)?;
        per_step.push(StepStat { t: runs[0].records[i].t, s_mean, s_se, z_mean, z_se });
        if let Some(first) = &runs[0].records[i].affinity {
            let mut pooled = vec![0u64; first.len()];
            for r in runs {
                for (p, c) in pooled.iter_mut().zip(r.records[i].affinity.as_deref().unwrap_or(&[])) {
                    *p += c;
                }
            }
            histograms.push(pooled);
        }
    }
    Ok(Aggregate { config_digest: config_digest(config), n: runs.len() as u64, per_step, histograms })
}

/// Mean one-step growth ratio `|S_{t+1}| / |S_t|` over the replicas still at most `cap`
/// at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRatio {
    pub t: u32,
    pub n: usize,
    pub mean: f64,
    pub se: f64,
}

pub fn growth_ratios(runs: &[Trajectory], cap: u64) -> Vec<GrowthRatio> {
    let steps = runs.iter().map(|r| r.records.len()).min().unwrap_or(0);
    (0..steps.saturating_sub(1))
        .filter_map(|i| {
            let ratios: Vec<f64> = runs
                .iter()
                .filter(|r| r.records[i].active_count <= cap)
                .map(|r| r.records[i + 1].active_count as f64 / r.records[i].active_count as f64)
                .collect();
            let (mean, se) = mean_se(&ratios).ok()?;
            Some(GrowthRatio { t: runs[0].records[i].t, n: ratios.len(), mean, se })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelSpec;
    use crate::sim::SimMode;

    fn config() -> SimConfig {
        SimConfig::new(KernelSpec::single_flip(8).unwrap(), SimMode::Multiplicity, 8).with_seed(5).with_target(0)
    }

    #[test]
    fn two_replicas_give_their_mean() {
        let cfg = config();
        let agg = monte_carlo(&cfg, 2).unwrap();
        let a = run_replica(&cfg, 0).unwrap();
        let b = run_replica(&cfg, 1).unwrap();
        let last = agg.per_step.last().unwrap();
        let (x, y) = (a.final_record().active_count as f64, b.final_record().active_count as f64);
        assert_eq!(last.s_mean, (x + y) / 2.0);
        assert!((last.s_se - (x - y).abs() / 2.0).abs() < 1e-12);
        assert_eq!(last.z_mean, 256.0);
        assert_eq!(last.z_se, 0.0);
        assert_eq!(agg.histograms.last().unwrap().iter().sum::<u64>(), 512);
        assert!(monte_carlo(&cfg, 1).is_err());
    }

    #[test]
    fn order_independent_and_reproducible() {
        let cfg = config();
        let runs = run_replicas(&cfg, 40).unwrap();
        let agg = aggregate(&cfg, &runs).unwrap();
        let mut shuffled = runs.clone();
        shuffled.reverse();
        shuffled.swap(3, 17);
        let again = aggregate(&cfg, &shuffled).unwrap();
        assert_eq!(serde_json::to_string(&agg).unwrap(), serde_json::to_string(&again).unwrap());
        assert_eq!(agg, monte_carlo(&cfg, 40).unwrap());
        assert_eq!(agg.config_digest.len(), 64);
        assert_ne!(agg.config_digest, config_digest(&cfg.clone().with_seed(6)));
    }

    #[test]
    fn mean_se_of_known_values() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn growth_ratios_while_small() {
        let cfg = SimConfig::new(KernelSpec::single_flip(10).unwrap(), SimMode::Simple, 10);
        let runs = run_replicas(&cfg, 50).unwrap();
        let g = growth_ratios(&runs, 128);
        assert!(g[0].mean > 1.0 && g[0].n == 50);
        assert!(g.iter().all(|r| r.mean <= 2.0));
    }
}
