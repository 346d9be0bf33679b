use std::path::PathBuf;

use brw_core::kernels::{KernelConfig, KernelKind};
use brw_core::sim::{run_replica, RunConfig, SimMode, Start, Trajectory};
use brw_core::stats::{monte_carlo, Aggregate};
use brw_core::VertexLabel;
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{emit, schema, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ModeArg {
    Simple,
    Multiplicity,
    DivisionRate,
    AffinityDivision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Run description in TOML; replaces the model flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// single_flip, power, mixture, lazy, complete or complete_bipartite.
    #[arg(long, default_value = "single_flip")]
    pub kernel: KernelKind,
    #[arg(long, default_value_t = 10)]
    pub n_bits: u32,
    /// Flip count for power and mixture kernels.
    #[arg(long)]
    pub k: Option<u32>,
    /// Holding probability of a lazy kernel.
    #[arg(long)]
    pub p_stay: Option<f64>,
    /// Children per particle in simple and multiplicity modes.
    #[arg(long, default_value_t = 2)]
    pub c: u32,
    #[arg(long, value_enum, default_value = "simple")]
    pub mode: ModeArg,
    /// Division probability in division_rate mode.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub steps: u32,
    /// One replica writes its trajectory, more write the aggregate.
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
    #[arg(long, env = "BRW_SEED", default_value_t = crate::DEFAULT_SEED)]
    pub seed: u64,
    /// Binary string; turns on affinity histograms.
    #[arg(long)]
    pub target: Option<String>,
    /// Binary string of the initial particle; all zeros by default.
    #[arg(long)]
    pub start: Option<String>,
    /// Mismatch allowance: with affinity division, particles whose affinity is at least
    /// `N - threshold` divide and the others stay put.
    #[arg(long)]
    pub threshold: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

fn parse_label(text: &str, dim: u32, what: &str) -> Result<u64, CliError> {
    let label: VertexLabel = text.parse().map_err(|e| CliError::Usage(format!("--{what}: {e}")))?;
    if label.dim() != dim {
        return Err(CliError::Usage(format!("--{what} has {} symbols, kernel labels have {dim}", label.dim())));
    }
    Ok(label.bits())
}

/// Step-function division table: probability 1 from affinity `n_bits - threshold` up.
pub fn threshold_table(n_bits: u32, threshold: u32) -> Result<Vec<f64>, CliError> {
    if threshold > n_bits {
        return Err(CliError::Usage(format!("--threshold {threshold} exceeds N = {n_bits}")));
    }
    Ok((0..=n_bits).map(|a| if a + threshold >= n_bits { 1.0 } else { 0.0 }).collect())
}

impl SimulateArgs {
    fn run_config(&self) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            return Ok(RunConfig::from_toml(&text)?);
        }
        let kernel = KernelConfig { k: self.k, p_stay: self.p_stay, ..KernelConfig::new(self.kernel, self.n_bits) };
        let dim = kernel.to_spec()?.label_dim();
        let mode = match self.mode {
            ModeArg::Simple => SimMode::Simple,
            ModeArg::Multiplicity => SimMode::Multiplicity,
            ModeArg::DivisionRate => SimMode::DivisionRate {
                p: self.p.ok_or_else(|| CliError::Usage("division_rate mode needs --p".into()))?,
            },
            ModeArg::AffinityDivision => SimMode::AffinityDivision,
        };
        let division_table = match (self.mode, self.threshold) {
            (ModeArg::AffinityDivision, Some(h)) => Some(threshold_table(dim, h)?),
            (ModeArg::AffinityDivision, None) => {
                return Err(CliError::Usage("affinity_division mode needs --threshold".into()))
            }
            _ => None,
        };
        Ok(RunConfig {
            kernel,
            c: self.c,
            mode,
            division_table,
            target: self.target.as_deref().map(|t| parse_label(t, dim, "target")).transpose()?,
            start: match &self.start {
                Some(s) => Start::Vertex(parse_label(s, dim, "start")?),
                None => Start::default(),
            },
            steps: self.steps,
            seed: self.seed,
            snapshot_every: None,
            dense_bits: brw_core::sim::DEFAULT_DENSE_BITS,
        })
    }
}

#[derive(Serialize)]
struct TrajectoryReport<'a> {
    schema: String,
    config: &'a RunConfig,
    trajectory: &'a Trajectory,
}

#[derive(Serialize)]
struct AggregateReport<'a> {
    schema: String,
    config: &'a RunConfig,
    aggregate: &'a Aggregate,
}

fn affinity_columns(header: &mut Vec<String>, width: Option<usize>) {
    if let Some(w) = width {
        header.extend((0..w).map(|a| format!("affinity_{a}")));
    }
}

fn trajectory_csv(traj: &Trajectory, digest: &str) -> String {
    let width = traj.records[0].affinity.as_ref().map(Vec::len);
    let mut header: Vec<String> = ["t", "active_count", "population"].map(String::from).to_vec();
    affinity_columns(&mut header, width);
    let mut table = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for r in &traj.records {
        let mut cells: Vec<&dyn std::fmt::Display> = vec![&r.t, &r.active_count, &r.population];
        if let Some(h) = &r.affinity {
            cells.extend(h.iter().map(|c| c as &dyn std::fmt::Display));
        }
        table.push(&cells);
    }
    table.render(&schema("trajectory"), &format!("sha256:{digest}"))
}

fn aggregate_csv(agg: &Aggregate) -> String {
    let width = agg.histograms.first().map(Vec::len);
    let mut header: Vec<String> = ["t", "s_mean", "s_se", "z_mean", "z_se"].map(String::from).to_vec();
    affinity_columns(&mut header, width);
    let mut table = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for (i, s) in agg.per_step.iter().enumerate() {
        let mut cells: Vec<&dyn std::fmt::Display> = vec![&s.t, &s.s_mean, &s.s_se, &s.z_mean, &s.z_se];
        if let Some(h) = agg.histograms.get(i) {
            cells.extend(h.iter().map(|c| c as &dyn std::fmt::Display));
        }
        table.push(&cells);
    }
    table.render(&schema("aggregate"), &format!("sha256:{}", agg.config_digest))
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let run = args.run_config()?;
    let config = run.to_sim()?;
    config.validate()?;
    let text = match args.replicas {
        0 => return Err(CliError::Usage("--replicas must be at least 1".into())),
        1 => {
            let traj = run_replica(&config, 0)?;
            match args.format {
                Format::Csv => trajectory_csv(&traj, &brw_core::stats::config_digest(&config)),
                Format::Json => json(&TrajectoryReport { schema: schema("trajectory"), config: &run, trajectory: &traj }),
            }
        }
        n => {
            let agg = monte_carlo(&config, n)?;
            match args.format {
                Format::Csv => aggregate_csv(&agg),
                Format::Json => json(&AggregateReport { schema: schema("aggregate"), config: &run, aggregate: &agg }),
            }
        }
    };
    emit(args.out.as_deref(), &text)
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}
