//! Subcommand bodies. Each returns the rows to print.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use floorset::exact_arith::isqrt_u64;
use floorset::general_sets::{asymptotic_cardinality, asymptotic_cardinality_with_exact, DEFAULT_ENUMERATION_CAP};
use floorset::hyperbolic_sets::{card_s1, card_s_t_scan};
use floorset::prime_density::density_report;
use floorset::{PrimeTable, RationalExponent};
use rayon::prelude::*;

use crate::output::Record;

pub const SIEVE_CACHE_ENV: &str = "FLOORSET_SIEVE_CACHE";

pub fn sieve_cache_path() -> Option<PathBuf> {
    std::env::var_os(SIEVE_CACHE_ENV).filter(|p| !p.is_empty()).map(PathBuf::from)
}

/// One row per `X`, in increasing order of `X`.
pub fn card(xs: std::ops::RangeInclusive<u64>, t: RationalExponent) -> Result<Vec<Record>> {
    if *xs.start() == 0 {
        bail!("X must be at least 1");
    }
    let label = t.to_string();
    if t.is_one() {
        return xs
            .into_par_iter()
            .map(|x| {
                let r = isqrt_u64(x);
                Ok(Record::new()
                    .with("x", x)
                    .with("t", label.clone())
                    .with("cardinality", card_s1(x)?)
                    .with("floor_a", r)
                    .with("a_is_integer", r * r == x)
                    .with("epsilon", None::<u64>))
            })
            .collect();
    }
    let reports = card_s_t_scan(xs, t)?;
    Ok(reports
        .into_iter()
        .map(|r| {
            Record::new()
                .with("x", r.x)
                .with("t", label.clone())
                .with("cardinality", r.cardinality)
                .with("floor_a", r.floor_a)
                .with("a_is_integer", r.a_is_integer)
                .with("epsilon", r.epsilon.map(u64::from))
        })
        .collect())
}

/// The row, and whether `|S_p(X)|` equals the number of distinct exponents.
pub fn prime_set(x: u64) -> Result<(Record, bool)> {
    if x < 2 {
        bail!("prime-set needs X ≥ 2, got {x}");
    }
    let table = match sieve_cache_path() {
        Some(path) => PrimeTable::load_or_build(&path, x)?,
        None => PrimeTable::sieve(x)?,
    };
    let size = table.enumerate_s_p(x)?.len() as u64;
    let distinct = table.distinct_factorial_exponents(x)?.distinct_count as u64;
    let growth = if x >= 3 { Some(table.growth_ratio(x)?) } else { None };
    let equal = size == distinct;
    let record = Record::new()
        .with("x", x)
        .with("size", size)
        .with("distinct", distinct)
        .with("equal", equal)
        .with("growth_ratio", growth);
    Ok((record, equal))
}

pub fn general(preset: &str, x: u64, t: Option<RationalExponent>, with_exact: bool) -> Result<Record> {
    let spec = floorset::general_sets::preset(preset, x, t)?;
    let report = if with_exact {
        asymptotic_cardinality_with_exact(&spec, DEFAULT_ENUMERATION_CAP)?
    } else {
        asymptotic_cardinality(&spec)?
    };
    Ok(Record::new()
        .with("x", x)
        .with("preset", preset.to_string())
        .with("t", t.map(|t| t.to_string()))
        .with("sign_class", report.sign_class.as_str().to_string())
        .with("a", report.a)
        .with("formula", report.formula_value)
        .with("exact", report.exact_count)
        .with("discrepancy", report.discrepancy))
}

pub fn density(x: u64, t: RationalExponent) -> Result<Record> {
    let r = density_report(x, t).with_context(|| format!("density at X = {x}"))?;
    Ok(Record::new()
        .with("x", r.x)
        .with("t", r.t.to_string())
        .with("prime_count", r.prime_count)
        .with("set_size", r.set_size)
        .with("pnt_ratio", r.pnt_ratio)
        .with("hey_estimate", r.hey_estimate)
        .with("ma_wu_main_term", r.ma_wu_main_term))
}
