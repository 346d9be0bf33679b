use brw_core::kernels::{dense_matrix, mixture_degree, min_nonzero_entry_power, KernelSpec};
use brw_core::rng::replica_rng;
use brw_core::sim::{step_multiplicity, Population, SimConfig, SimMode};
use brw_core::spectral::{lambda2_mixture, parity_eigenvalues, verify_expander_bruteforce};
use brw_core::stats::{chi_square_gof, run_replicas};
use brw_core::Matrix;
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::simulate::json;

const SPECTRAL_TOL: f64 = 1e-10;
const ALPHA: f64 = 0.01;
const VERIFY_SEED: u64 = 20_160_901;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Expander,
    Spectra,
    MinEntry,
    Degree,
    Binomial,
    Parity,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub oracle: &'static str,
    pub tolerance: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: String,
    suite: Suite,
    pass: bool,
    checks: &'a [Check],
}

fn expander() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for n in 1..=4 {
        for r in 1..=n {
            let pass = verify_expander_bruteforce(&KernelSpec::single_flip(n)?, r)?;
            checks.push(Check {
                name: format!("expander N={n} r={r}"),
                oracle: "every S with |S| <= 2^(N-r) has |N(S)| >= 2|S|, enumerated",
                tolerance: "exact".into(),
                pass,
                detail: if pass { "holds".into() } else { "a set with too few neighbours exists".into() },
            });
        }
    }
    Ok(checks)
}

fn spectra() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for n in 2..=8 {
        for k in 1..=n {
            let ev = parity_eigenvalues(&KernelSpec::mixture(n, k)?, SPECTRAL_TOL)?;
            let second = ev[1..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let formula: f64 = lambda2_mixture(n, k)?;
            let err = (second - formula).abs();
            checks.push(Check {
                name: format!("lambda2 N={n} k={k}"),
                oracle: "parity characters applied to the dense matrix",
                tolerance: format!("{SPECTRAL_TOL:e} absolute"),
                pass: err <= SPECTRAL_TOL,
                detail: format!("closed form {formula}, oracle {second}"),
            });
        }
    }
    Ok(checks)
}

fn min_entry() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for n in 1..=8 {
        let p: Matrix = dense_matrix(&KernelSpec::single_flip(n)?)?;
        let mut power = Matrix::identity(p.dim());
        for i in 1..=n {
            power = power.matmul(&p);
            let formula: f64 = min_nonzero_entry_power(n, i)?;
            let observed = power.min_nonzero().unwrap_or(0.0);
            let rel = (observed - formula).abs() / formula;
            checks.push(Check {
                name: format!("min entry N={n} i={i}"),
                oracle: "smallest non-zero entry of the dense power",
                tolerance: format!("{SPECTRAL_TOL:e} relative"),
                pass: rel <= SPECTRAL_TOL,
                detail: format!("i!/N^i = {formula}, dense {observed}"),
            });
        }
    }
    Ok(checks)
}

fn degree() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for n in 1..=10 {
        for k in 1..=n {
            let m: Matrix = dense_matrix(&KernelSpec::mixture(n, k)?)?;
            let d = mixture_degree(n, k)?;
            let counts: Vec<usize> = (0..m.dim()).map(|v| m.nonzero_in_row(v)).collect();
            checks.push(Check {
                name: format!("degree N={n} k={k}"),
                oracle: "non-zero count of every dense row",
                tolerance: "exact".into(),
                pass: counts.iter().all(|&c| c as u64 == d),
                detail: format!("recursion {d}, dense rows {}..={}", counts.iter().min().unwrap(), counts.iter().max().unwrap()),
            });
        }
    }
    Ok(checks)
}

fn binomial() -> Result<Vec<Check>, CliError> {
    // On H_3 with c = 2, given exactly one particle next to 011 at t = 1, the count on 011
    // at t = 2 is Bin(2, 1/3).
    let cube = KernelSpec::single_flip(3)?;
    let target = 0b011;
    let mut counts = vec![0u64; 3];
    let (mut replica, mut taken) = (0, 0);
    while taken < 100_000 {
        let mut rng = replica_rng(VERIFY_SEED, replica);
        replica += 1;
        let mut pop = Population::new(8, 26);
        pop.add(0, 1)?;
        pop = step_multiplicity(&pop, &cube, 2, &mut rng)?;
        if cube.support_neighbors(target).iter().map(|&j| pop.get(j)).sum::<u64>() != 1 {
            continue;
        }
        pop = step_multiplicity(&pop, &cube, 2, &mut rng)?;
        counts[pop.get(target) as usize] += 1;
        taken += 1;
    }
    let test = chi_square_gof(&counts, &[4.0 / 9.0, 4.0 / 9.0, 1.0 / 9.0])?;
    Ok(vec![Check {
        name: "conditional count N=3 c=2".into(),
        oracle: "Bin(2, 1/3) probabilities",
        tolerance: format!("chi-square p > {ALPHA}"),
        pass: test.p_value > ALPHA,
        detail: format!("counts {counts:?}, statistic {:.3}, p {:.4}", test.statistic, test.p_value),
    }])
}

fn parity() -> Result<Vec<Check>, CliError> {
    let cfg = SimConfig::new(KernelSpec::single_flip(8)?, SimMode::Simple, 16).with_snapshots(1).with_seed(VERIFY_SEED);
    let runs = run_replicas(&cfg, 50)?;
    let bad = runs
        .iter()
        .flat_map(|r| &r.snapshots)
        .flat_map(|s| s.states.iter().map(move |&(v, _)| (s.t, v)))
        .filter(|&(t, v)| v.count_ones() % 2 != t % 2)
        .count();
    Ok(vec![Check {
        name: "parity law N=8".into(),
        oracle: "hamming(v, 0) = t mod 2 for every active v, 50 replicas of 16 steps",
        tolerance: "exact".into(),
        pass: bad == 0,
        detail: format!("{bad} violating vertices"),
    }])
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>, CliError> {
    Ok(match suite {
        Suite::Expander => expander()?,
        Suite::Spectra => spectra()?,
        Suite::MinEntry => min_entry()?,
        Suite::Degree => degree()?,
        Suite::Binomial => binomial()?,
        Suite::Parity => parity()?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Expander, Suite::Spectra, Suite::MinEntry, Suite::Degree, Suite::Binomial, Suite::Parity] {
                all.extend(run_suite(s)?);
            }
            all
        }
    })
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let checks = run_suite(args.suite)?;
    let pass = checks.iter().all(|c| c.pass);
    print!("{}", json(&Report { schema: crate::output::schema("verify"), suite: args.suite, pass, checks: &checks }));
    match checks.iter().find(|c| !c.pass) {
        Some(c) => Err(CliError::Verify(format!("{}: {}", c.name, c.detail))),
        None => Ok(()),
    }
}
