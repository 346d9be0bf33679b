use std::ops::RangeInclusive;
use std::path::PathBuf;

use brw_core::spectral::{cover_thresholds, delta_nk, r_threshold};
use clap::Args;

use crate::error::CliError;
use crate::output::{emit, schema, Table};

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 10)]
    pub n_bits: u32,
    /// `a..b`, `a-b` or a single value; all of `1..N` by default.
    #[arg(long)]
    pub k_range: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>, CliError> {
    let bad = || CliError::Usage(format!("cannot read k range {text:?}"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..=").or_else(|| text.split_once("..")).or_else(|| text.split_once('-')) {
        Some((a, b)) => (num(a)?, num(b)?),
        None => (num(text)?, num(text)?),
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// One CSV row per `k`.
pub fn bounds_table(n_bits: u32, ks: RangeInclusive<u32>) -> Result<Table, CliError> {
    r_threshold::<f64>(n_bits)?;
    let mut table = Table::new(&[
        "N",
        "k",
        "lambda2",
        "degree",
        "Delta",
        "delta_raw",
        "delta_usable",
        "r_exact",
        "r_simplified",
        "delta_ceiling",
    ]);
    for k in ks {
        let d = delta_nk::<f64>(n_bits, k)?;
        let c = cover_thresholds::<f64>(n_bits, k)?;
        table.push(&[
            &n_bits,
            &k,
            &d.lambda2,
            &d.degree,
            &d.capital_delta,
            &d.raw,
            &d.usable,
            &c.r_exact,
            &c.r_simplified,
            &c.delta_ceiling,
        ]);
    }
    Ok(table)
}

pub fn bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let ks = match &args.k_range {
        Some(r) => parse_range(r)?,
        None => 1..=args.n_bits,
    };
    let table = bounds_table(args.n_bits, ks)?;
    emit(args.out.as_deref(), &table.render(&schema("bounds"), "none"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..7").unwrap(), 1..=7);
        assert_eq!(parse_range("2-4").unwrap(), 2..=4);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn k1_row_at_n10_uses_two_to_minus_three() {
        let text = bounds_table(10, 1..=1).unwrap().render("s", "m");
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[5].parse::<f64>().unwrap(), 0.125);
    }

    #[test]
    fn n7_has_seven_rows_above_half_from_k2() {
        let text = bounds_table(7, 1..=7).unwrap().render("s", "m");
        let rows: Vec<Vec<f64>> = text
            .lines()
            .skip(1)
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 7);
        assert!(rows[1..].iter().all(|r| r[5] > 0.5));
    }

    #[test]
    fn n2_is_a_usage_error() {
        assert!(matches!(bounds_table(2, 1..=2), Err(CliError::Usage(_))));
    }
}
