//! `floorset`: cardinalities of floor-function sets from the command line.
//!
//! Exit codes: 0 on success, 1 on a computation error or a failed check,
//! 2 on a usage error.

mod commands;
mod output;

use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use floorset::verify::{self, Suite, VerifyOptions, VerifyReport};
use floorset::RationalExponent;

use crate::output::{write_records, Format};

#[derive(Debug, Parser)]
#[command(name = "floorset", version, about = "Sizes of sets of floor values ⌊f(n)⌋")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// |S_t(X)| for S_t(X) = {⌊X/nᵗ⌋ : 1 ≤ n ≤ X}
    Card {
        #[arg(long, required_unless_present = "scan", conflicts_with = "scan")]
        x: Option<u64>,
        /// `u/v`, an integer, or a terminating decimal; 1 gives S(X)
        #[arg(long, value_parser = parse_exponent)]
        t: RationalExponent,
        /// Inclusive range `XMIN..XMAX`, one row per X
        #[arg(long, value_parser = parse_scan)]
        scan: Option<RangeInclusive<u64>>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// |S_p(X)| against the number of distinct exponents in X!
    PrimeSet {
        #[arg(long)]
        x: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Estimate of |{⌊f(n)⌋ : 1 ≤ n ≤ X}| for a preset f
    General {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        x: u64,
        /// Exponent for `hyperbola-t`
        #[arg(long, value_parser = parse_exponent)]
        t: Option<RationalExponent>,
        /// Also enumerate the set and report the discrepancy
        #[arg(long)]
        with_exact: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Primes inside S_t(X)
    Density {
        #[arg(long)]
        x: u64,
        #[arg(long, value_parser = parse_exponent, default_value = "1")]
        t: RationalExponent,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Runs the self-check suites
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Time budget in seconds for the optional large-X checks
        #[arg(long, default_value_t = 300)]
        budget: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Thm1,
    Thm2,
    Thm3,
    Density,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Thm1 => Suite::Thm1,
            SuiteArg::Thm2 => Suite::Thm2,
            SuiteArg::Thm3 => Suite::Thm3,
            SuiteArg::Density => Suite::Density,
            SuiteArg::All => Suite::All,
        }
    }
}

fn parse_exponent(s: &str) -> Result<RationalExponent, String> {
    s.parse().map_err(|e: floorset::Error| e.to_string())
}

fn parse_scan(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected XMIN..XMAX, got {s:?}"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("bad XMIN {lo:?}: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("bad XMAX {hi:?}: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 ≤ XMIN ≤ XMAX, got {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    let stdout = io::stdout().lock();
    match command {
        Command::Card { x, t, scan, format } => {
            let xs = scan.unwrap_or_else(|| {
                let x = x.expect("clap requires --x or --scan");
                x..=x
            });
            write_records(stdout, format, &commands::card(xs, t)?)?;
        }
        Command::PrimeSet { x, format } => {
            let (record, equal) = commands::prime_set(x)?;
            write_records(stdout, format, &[record])?;
            if !equal {
                eprintln!("error: |S_p({x})| differs from the number of distinct exponents of {x}!");
                return Ok(ExitCode::from(1));
            }
        }
        Command::General { preset, x, t, with_exact, format } => {
            write_records(stdout, format, &[commands::general(&preset, x, t, with_exact)?])?;
        }
        Command::Density { x, t, format } => {
            write_records(stdout, format, &[commands::density(x, t)?])?;
        }
        Command::Verify { suite, budget } => {
            let options =
                VerifyOptions { budget: Duration::from_secs(budget), sieve_cache: commands::sieve_cache_path() };
            let report = verify::run(suite.into(), &options);
            print_summary(stdout, &report)?;
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_summary(mut out: impl Write, report: &VerifyReport) -> io::Result<()> {
    let width = report.outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    writeln!(out, "{:<8} {:<width$} {:<6} {:>9} {:>9}  detail", "suite", "check", "status", "cases", "seconds")?;
    for o in &report.outcomes {
        let status = if o.passed { "ok" } else { "FAIL" };
        writeln!(
            out,
            "{:<8} {:<width$} {:<6} {:>9} {:>9.3}  {}",
            o.suite.as_str(),
            o.name,
            status,
            o.cases,
            o.elapsed.as_secs_f64(),
            o.detail
        )?;
    }
    for s in &report.skipped {
        writeln!(out, "{:<8} {:<width$} {:<6}", s.suite.as_str(), s.name, "skip")?;
    }
    let failed = report.failures().count();
    writeln!(
        out,
        "{} checks, {} failed, {} skipped, {:.1}s",
        report.outcomes.len(),
        failed,
        report.skipped.len(),
        report.elapsed.as_secs_f64()
    )?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn scan_parsing() {
        assert_eq!(parse_scan("1..10").unwrap(), 1..=10);
        assert!(parse_scan("0..10").is_err());
        assert!(parse_scan("10..1").is_err());
        assert!(parse_scan("5").is_err());
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(parse_exponent("1.5").unwrap(), RationalExponent::new(3, 2).unwrap());
        assert!(parse_exponent("0.5").is_err());
        assert!(parse_exponent("x").is_err());
    }
}
