use std::path::{Path, PathBuf};
use std::time::Instant;

use brw_core::kernels::KernelSpec;
use brw_core::sim::{SimConfig, SimMode, Start};
use brw_core::spectral::{delta_nk, r_threshold};
use brw_core::stats::{mean_se, monte_carlo, run_replicas};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{emit, schema, Table};
use crate::simulate::{json, threshold_table};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Table2,
}

impl Preset {
    fn default_replicas(self) -> u64 {
        match self {
            Preset::Fig2 | Preset::Fig5 => 40,
            Preset::Fig3 => 0,
            Preset::Fig4 | Preset::Fig6 | Preset::Table2 => 100,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub preset: Preset,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Overrides the preset's replica count.
    #[arg(long)]
    pub replicas: Option<u64>,
    #[arg(long, env = "BRW_SEED", default_value_t = crate::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Serialize)]
struct Manifest {
    schema: String,
    preset: Preset,
    seed: u64,
    replicas: u64,
    files: Vec<String>,
    wall_time_seconds: f64,
}

struct Ctx {
    seed: u64,
    replicas: u64,
    files: Vec<(String, String)>,
}

impl Ctx {
    fn add(&mut self, name: &str, table: Table) {
        let tag = schema(name.trim_end_matches(".csv"));
        self.files.push((name.to_string(), table.render(&tag, MANIFEST)));
    }
}

fn growth_curves(ctx: &mut Ctx, file: &str, n_bits: u32, steps: u32, kernels: &[(&str, KernelSpec)]) -> Result<(), CliError> {
    let mut table = Table::new(&["kernel", "t", "s_mean", "s_se", "log_s_mean", "fraction"]);
    let states = (1u64 << n_bits) as f64;
    for (name, kernel) in kernels {
        let cfg = SimConfig::new(kernel.clone(), SimMode::Simple, steps).with_seed(ctx.seed);
        let agg = monte_carlo(&cfg, ctx.replicas)?;
        for s in &agg.per_step {
            table.push(&[name, &s.t, &s.s_mean, &s.s_se, &s.s_mean.ln(), &(s.s_mean / states)]);
        }
    }
    ctx.add(file, table);
    Ok(())
}

fn fig2(ctx: &mut Ctx) -> Result<(), CliError> {
    let n = 10;
    growth_curves(
        ctx,
        "fig2.csv",
        n,
        2 * n,
        &[("single_flip", KernelSpec::single_flip(n)?), ("mixture_7", KernelSpec::mixture(n, 7)?)],
    )?;
    // Reference levels for the two kernels.
    let mut levels = Table::new(&["kernel", "fraction"]);
    levels.push(&[&"single_flip", &0.5f64.powi(r_threshold::<f64>(n)?.r as i32)]);
    levels.push(&[&"mixture_7", &delta_nk::<f64>(n, 7)?.usable]);
    ctx.add("fig2_levels.csv", levels);
    Ok(())
}

fn fig3(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut table = Table::new(&["N", "k", "delta_raw", "delta_usable"]);
    for n in [7, 10] {
        for k in 1..=n {
            let d = delta_nk::<f64>(n, k)?;
            table.push(&[&n, &k, &d.raw, &d.usable]);
        }
    }
    ctx.add("fig3.csv", table);
    Ok(())
}

fn fig4(ctx: &mut Ctx) -> Result<(), CliError> {
    let mut table = Table::new(&["N", "k", "t", "s_mean", "s_se"]);
    for n in [7, 10] {
        for k in 1..=n {
            let cfg = SimConfig::new(KernelSpec::mixture(n, k)?, SimMode::Simple, n + 1).with_seed(ctx.seed);
            let agg = monte_carlo(&cfg, ctx.replicas)?;
            for s in &agg.per_step[(n - 1) as usize..] {
                table.push(&[&n, &k, &s.t, &s.s_mean, &s.s_se]);
            }
        }
    }
    ctx.add("fig4.csv", table);
    Ok(())
}

fn fig5(ctx: &mut Ctx) -> Result<(), CliError> {
    let n = 10;
    growth_curves(
        ctx,
        "fig5.csv",
        n,
        2 * n,
        &[
            ("single_flip", KernelSpec::single_flip(n)?),
            ("power_7", KernelSpec::power(n, 7)?),
            ("mixture_7", KernelSpec::mixture(n, 7)?),
            ("complete_bipartite", KernelSpec::complete_bipartite(1 << (n - 1))?),
            ("complete", KernelSpec::complete(1 << n)?),
        ],
    )
}

fn fig6(ctx: &mut Ctx) -> Result<(), CliError> {
    let n = 7;
    let steps = 15;
    let target = (1u64 << n) - 1;
    let models = [
        ("division_rate", SimMode::DivisionRate { p: 0.6 }, None),
        ("affinity_division", SimMode::AffinityDivision, Some(threshold_table(n, 3)?)),
    ];
    let mut hist = Table::new(&["model", "a0", "affinity", "count", "share"]);
    let mut by_start = Table::new(&["model", "a0", "mean_affinity", "mean_affinity_se", "mean_population", "mean_population_se"]);
    for (name, mode, table) in &models {
        for a0 in 0..=n {
            // Start on the string whose low a0 bits agree with the all-ones target.
            let mut cfg = SimConfig::new(KernelSpec::single_flip(n)?, *mode, steps)
                .with_target(target)
                .with_start(Start::Vertex((1u64 << a0) - 1))
                .with_seed(ctx.seed);
            cfg.division_table = table.clone();
            let runs = run_replicas(&cfg, ctx.replicas)?;
            let finals: Vec<&Vec<u64>> = runs.iter().map(|r| r.final_record().affinity.as_ref().unwrap()).collect();
            let mean_aff: Vec<f64> = finals
                .iter()
                .map(|h| {
                    let total: u64 = h.iter().sum();
                    h.iter().enumerate().map(|(a, &c)| a as f64 * c as f64).sum::<f64>() / total as f64
                })
                .collect();
            let pops: Vec<f64> = runs.iter().map(|r| r.final_record().population as f64).collect();
            let (ma, ma_se) = mean_se(&mean_aff)?;
            let (mp, mp_se) = mean_se(&pops)?;
            by_start.push(&[name, &a0, &ma, &ma_se, &mp, &mp_se]);
            if a0 >= n - 1 {
                let mut pooled = vec![0u64; n as usize + 1];
                for h in &finals {
                    for (p, c) in pooled.iter_mut().zip(h.iter()) {
                        *p += c;
                    }
                }
                let total: u64 = pooled.iter().sum();
                for (a, &c) in pooled.iter().enumerate() {
                    hist.push(&[name, &a0, &a, &c, &(c as f64 / total as f64)]);
                }
            }
        }
    }
    ctx.add("fig6_histograms.csv", hist);
    ctx.add("fig6_by_start.csv", by_start);
    Ok(())
}

fn table2(ctx: &mut Ctx) -> Result<(), CliError> {
    let n = 10;
    let rows = [
        ("simple_single_flip", KernelSpec::single_flip(n)?, SimMode::Simple),
        ("simple_complete_bipartite", KernelSpec::complete_bipartite(1 << (n - 1))?, SimMode::Simple),
        ("multiplicity_single_flip", KernelSpec::single_flip(n)?, SimMode::Multiplicity),
    ];
    let mut table = Table::new(&["model", "replicas", "t", "s_mean", "s_sd", "s_se"]);
    for (name, kernel, mode) in rows {
        let agg = monte_carlo(&SimConfig::new(kernel, mode, 10).with_seed(ctx.seed), ctx.replicas)?;
        let last = agg.per_step.last().expect("t = 10 recorded");
        let sd = last.s_se * (ctx.replicas as f64).sqrt();
        table.push(&[&name, &ctx.replicas, &last.t, &last.s_mean, &sd, &last.s_se]);
    }
    ctx.add("table2.csv", table);
    Ok(())
}

pub fn experiment(args: &ExperimentArgs) -> Result<(), CliError> {
    let replicas = args.replicas.unwrap_or(args.preset.default_replicas());
    if args.preset != Preset::Fig3 && replicas < 2 {
        return Err(CliError::Usage("--replicas must be at least 2".into()));
    }
    let start = Instant::now();
    let mut ctx = Ctx { seed: args.seed, replicas, files: Vec::new() };
    match args.preset {
        Preset::Fig2 => fig2(&mut ctx)?,
        Preset::Fig3 => fig3(&mut ctx)?,
        Preset::Fig4 => fig4(&mut ctx)?,
        Preset::Fig5 => fig5(&mut ctx)?,
        Preset::Fig6 => fig6(&mut ctx)?,
        Preset::Table2 => table2(&mut ctx)?,
    }
    for (name, text) in &ctx.files {
        emit(Some(&args.out.join(name)), text)?;
    }
    let manifest = Manifest {
        schema: schema("manifest"),
        preset: args.preset,
        seed: args.seed,
        replicas,
        files: ctx.files.iter().map(|(n, _)| n.clone()).collect(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    emit(Some(&Path::new(&args.out).join(MANIFEST)), &json(&manifest))
}
