use serde::{Deserialize, Serialize};

use super::state::{ActiveSet, Population, DEFAULT_DENSE_BITS};
use super::step::{check_table, step_affinity_division, step_division_rate, step_multiplicity, step_simple};
use super::SimError;
use crate::kernels::{KernelConfig, KernelSpec};
use crate::rng::{replica_rng, SimRng};

/// Which process to run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SimMode {
    /// Coalescing walk on the active set.
    Simple,
    /// Every particle has `c` moving children.
    Multiplicity,
    /// Every particle divides with probability `p`.
    DivisionRate { p: f64 },
    /// Division probability looked up by affinity to the target.
    AffinityDivision,
}

/// Initial configuration: one particle on each listed vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    Vertex(u64),
    Vertices(Vec<u64>),
}

impl Default for Start {
    fn default() -> Self {
        Start::Vertex(0)
    }
}

impl Start {
    pub fn vertices(&self) -> Vec<u64> {
        match self {
            Start::Vertex(v) => vec![*v],
            Start::Vertices(vs) => vs.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub kernel: KernelSpec,
    pub c: u32,
    pub mode: SimMode,
    /// Division probability per affinity `0..=N`; affinity mode only.
    pub division_table: Option<Vec<f64>>,
    /// Reference string for affinities. Histograms are recorded whenever it is set.
    pub target: Option<u64>,
    pub start: Start,
    pub steps: u32,
    pub seed: u64,
    pub snapshot_every: Option<u32>,
    /// State spaces of at most `2^dense_bits` states use dense storage.
    pub dense_bits: u32,
}

impl SimConfig {
    pub fn new(kernel: KernelSpec, mode: SimMode, steps: u32) -> Self {
        Self {
            kernel,
            c: 2,
            mode,
            division_table: None,
            target: None,
            start: Start::default(),
            steps,
            seed: 0,
            snapshot_every: None,
            dense_bits: DEFAULT_DENSE_BITS,
        }
    }

    pub fn with_c(mut self, c: u32) -> Self {
        self.c = c;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_start(mut self, start: Start) -> Self {
        self.start = start;
        self
    }

    pub fn with_target(mut self, target: u64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_division_table(mut self, table: Vec<f64>) -> Self {
        self.division_table = Some(table);
        self
    }

    pub fn with_snapshots(mut self, every: u32) -> Self {
        self.snapshot_every = Some(every);
        self
    }

    /// Checks the configuration, logging warnings for degenerate but legal choices.
    pub fn validate(&self) -> Result<(), SimError> {
        self.kernel.validate()?;
        let start = self.start.vertices();
        if start.is_empty() {
            return Err(SimError::InvalidConfig("start set is empty".into()));
        }
        if let Some(&v) = start.iter().find(|&&v| !self.kernel.contains(v)) {
            return Err(SimError::StateOutOfRange { state: v, states: self.kernel.state_count() });
        }
        if let Some(t) = self.target {
            if !self.kernel.contains(t) {
                return Err(SimError::StateOutOfRange { state: t, states: self.kernel.state_count() });
            }
            if self.kernel.hypercube_dim().is_none() {
                return Err(SimError::InvalidConfig("affinity histograms need a hypercube kernel".into()));
            }
        }
        if matches!(self.mode, SimMode::Simple | SimMode::Multiplicity) {
            if self.c == 0 {
                return Err(SimError::InvalidConfig("c must be at least 1".into()));
            }
            if self.c == 1 {
                log::warn!("c = 1: the branching walk reduces to a single random walk");
            }
        }
        match self.mode {
            SimMode::DivisionRate { p } if !(p > 0.0 && p < 1.0) => {
                return Err(SimError::InvalidConfig(format!("division rate must lie in (0, 1), got {p}")));
            }
            SimMode::AffinityDivision => {
                let n = self
                    .kernel
                    .hypercube_dim()
                    .ok_or_else(|| SimError::InvalidConfig("affinity mode needs a hypercube kernel".into()))?;
                let table = self
                    .division_table
                    .as_ref()
                    .ok_or_else(|| SimError::InvalidConfig("affinity mode needs a division table".into()))?;
                check_table(table, n)?;
                if self.target.is_none() {
                    return Err(SimError::InvalidConfig("affinity mode needs a target".into()));
                }
                if table.windows(2).any(|w| w[1] < w[0]) {
                    log::warn!("division table decreases with affinity: {table:?}");
                }
            }
            _ => {}
        }
        self.check_horizon()
    }

    /// Rejects horizons whose worst-case population reaches `2^63`.
    fn check_horizon(&self) -> Result<(), SimError> {
        let rate = match self.mode {
            SimMode::Simple => return Ok(()),
            SimMode::Multiplicity => self.c as f64,
            SimMode::DivisionRate { .. } => 2.0,
            SimMode::AffinityDivision => {
                if self.division_table.as_ref().is_some_and(|t| t.iter().any(|&p| p > 0.0)) {
                    2.0
                } else {
                    1.0
                }
            }
        };
        let bits = self.steps as f64 * rate.log2() + (self.start.vertices().len() as f64).log2();
        if bits >= 63.0 {
            return Err(SimError::Horizon { steps: self.steps, rate, bits });
        }
        Ok(())
    }
}

/// Text form of a run: [`SimConfig`] with the kernel given as a [`KernelConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub kernel: KernelConfig,
    #[serde(default = "default_c")]
    pub c: u32,
    pub mode: SimMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub division_table: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<u64>,
    #[serde(default)]
    pub start: Start,
    pub steps: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<u32>,
    #[serde(default = "default_dense_bits")]
    pub dense_bits: u32,
}

fn default_c() -> u32 {
    2
}

fn default_dense_bits() -> u32 {
    DEFAULT_DENSE_BITS
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        toml::from_str(text).map_err(|e| SimError::InvalidConfig(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain record serialises")
    }

    pub fn to_sim(&self) -> Result<SimConfig, SimError> {
        Ok(SimConfig {
            kernel: self.kernel.to_spec()?,
            c: self.c,
            mode: self.mode,
            division_table: self.division_table.clone(),
            target: self.target,
            start: self.start.clone(),
            steps: self.steps,
            seed: self.seed,
            snapshot_every: self.snapshot_every,
            dense_bits: self.dense_bits,
        })
    }
}

/// Summary of one time step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u32,
    /// `|S_t|`: active vertices, or occupied vertices for particle modes.
    pub active_count: u64,
    /// `Z_t`; equal to `active_count` for the coalescing walk.
    pub population: u64,
    /// Counts per affinity `0..=N` (vertices or particles), when a target is set.
    pub affinity: Option<Vec<u64>>,
}

/// Occupied states at a time step, sorted, with their particle counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: u32,
    pub states: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub state_count: u64,
    /// One record per `t = 0..=steps`.
    pub records: Vec<StepRecord>,
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    pub fn final_record(&self) -> &StepRecord {
        self.records.last().expect("trajectories include t = 0")
    }
}

enum State {
    Set(ActiveSet),
    Pop(Population),
}

/// Runs `config` with the stream of replica `replica`.
pub fn run_replica(config: &SimConfig, replica: u64) -> Result<Trajectory, SimError> {
    run(config, &mut replica_rng(config.seed, replica))
}

/// Runs `config` with an explicit generator.
pub fn run(config: &SimConfig, rng: &mut SimRng) -> Result<Trajectory, SimError> {
    config.validate()?;
    let kernel = &config.kernel;
    let n = kernel.state_count();
    let mut state = match config.mode {
        SimMode::Simple => {
            let mut s = ActiveSet::new(n, config.dense_bits);
            for v in config.start.vertices() {
                s.insert(v)?;
            }
            State::Set(s)
        }
        _ => {
            let mut p = Population::new(n, config.dense_bits);
            for v in config.start.vertices() {
                p.add(v, 1)?;
            }
            State::Pop(p)
        }
    };
    let mut traj = Trajectory { state_count: n, records: Vec::with_capacity(config.steps as usize + 1), snapshots: Vec::new() };
    for t in 0..=config.steps {
        if t > 0 {
            let at = |e: SimError| e.at_step(t);
            state = match (&state, config.mode) {
                (State::Set(s), _) => State::Set(step_simple(s, kernel, config.c, rng).map_err(at)?),
                (State::Pop(p), SimMode::Multiplicity) => State::Pop(step_multiplicity(p, kernel, config.c, rng).map_err(at)?),
                (State::Pop(p), SimMode::DivisionRate { p: rate }) => {
                    State::Pop(step_division_rate(p, kernel, rate, rng).map_err(at)?)
                }
                (State::Pop(p), _) => {
                    let table = config.division_table.as_deref().expect("validated");
                    let target = config.target.expect("validated");
                    State::Pop(step_affinity_division(p, kernel, table, target, rng).map_err(at)?)
                }
            };
        }
        traj.records.push(record(t, &state, config));
        if config.snapshot_every.is_some_and(|e| e > 0 && t % e == 0) {
            let states = match &state {
                State::Set(s) => s.to_sorted_vec().into_iter().map(|v| (v, 1)).collect(),
                State::Pop(p) => p.to_sorted_vec(),
            };
            traj.snapshots.push(Snapshot { t, states });
        }
    }
    Ok(traj)
}

fn record(t: u32, state: &State, config: &SimConfig) -> StepRecord {
    let hist = config.target.map(|target| {
        let n_bits = config.kernel.hypercube_dim().expect("validated");
        let mut h = vec![0u64; n_bits as usize + 1];
        let mut put = |v: u64, c: u64| h[(n_bits - (v ^ target).count_ones()) as usize] += c;
        match state {
            State::Set(s) => s.iter().for_each(|v| put(v, 1)),
            State::Pop(p) => p.iter().for_each(|(v, c)| put(v, c)),
        }
        h
    });
    let (active_count, population) = match state {
        State::Set(s) => (s.len(), s.len()),
        State::Pop(p) => (p.occupied(), p.total()),
    };
    StepRecord { t, active_count, population, affinity: hist }
}

/// First `t` with `|S_t| >= fraction * states`, if any.
pub fn partial_cover_time(traj: &Trajectory, fraction: f64) -> Result<Option<u32>, SimError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(SimError::InvalidConfig(format!("fraction must lie in (0, 1], got {fraction}")));
    }
    let level = (fraction * traj.state_count as f64).ceil() as u64;
    Ok(traj.records.iter().find(|r| r.active_count >= level).map(|r| r.t))
}

/// First snapshot time at which every state is active.
pub fn detect_full_cover(traj: &Trajectory) -> Result<Option<u32>, SimError> {
    if traj.snapshots.is_empty() {
        return Err(SimError::InvalidConfig("full-cover detection needs snapshots".into()));
    }
    Ok(traj.snapshots.iter().find(|s| s.states.len() as u64 == traj.state_count).map(|s| s.t))
}
