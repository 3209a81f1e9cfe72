//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line to stderr (uncaptured) before asserting.

use std::collections::HashSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use floorset::exact_arith::floor_x_over_n_pow_t;
use floorset::general_sets::{asymptotic_cardinality, asymptotic_cardinality_with_exact, enumerate_s_f, Preset};
use floorset::hyperbolic_sets::{card_s1, card_s_t, enumerate_s_t, EnumerationMode};
use floorset::prime_density::{density_report, ma_wu_main_term};
use floorset::prime_sets::{legendre_valuation, PrimeTable};
use floorset::verify::{fixtures, growth_grid};
use floorset::RationalExponent;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

fn report(n: u32, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    let line = format!("criterion {n}: {status} {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(passed, "criterion {n}: {detail}");
}

fn t(s: &str) -> RationalExponent {
    s.parse().unwrap()
}

#[test]
fn criterion_1_theorem_1_exact() {
    let start = Instant::now();
    let exponents = ["2", "3", "4", "3/2", "5/2", "7/3"].map(t);
    let pairs: Vec<_> = exponents.iter().flat_map(|&t| (1..=20_000u64).map(move |x| (t, x))).collect();
    let mismatch = pairs.par_iter().find_map_first(|&(t, x)| {
        let closed = card_s_t(x, t).unwrap().cardinality;
        let listed = enumerate_s_t(x, t, EnumerationMode::EarlyExit).unwrap().len() as u64;
        let naive =
            (x <= 2_000).then(|| (1..=x).map(|n| floor_x_over_n_pow_t(x, n, t)).collect::<HashSet<_>>().len() as u64);
        (closed != listed || naive.is_some_and(|n| n != closed))
            .then(|| format!("X={x} t={t}: closed {closed}, enumerated {listed}, naive {naive:?}"))
    });
    let elapsed = start.elapsed();
    let detail = mismatch.clone().unwrap_or_else(|| format!("{} cases in {elapsed:.1?}", pairs.len()));
    report(1, mismatch.is_none() && elapsed < Duration::from_secs(120), &detail);
}

/// `|{⌊X/n⌋}|` by walking blocks of equal quotient.
fn quotient_count(x: u64) -> u64 {
    let (mut n, mut count) = (1, 0);
    while n <= x {
        count += 1;
        n = x / (x / n) + 1;
    }
    count
}

#[test]
fn criterion_2_s1_closed_form() {
    let start = Instant::now();
    let mismatch = (1..=1_000_000u64).into_par_iter().find_map_first(|x| {
        let (closed, counted) = (card_s1(x).unwrap(), quotient_count(x));
        (closed != counted).then(|| format!("X={x}: closed {closed}, counted {counted}"))
    });
    let elapsed = start.elapsed();
    let detail = mismatch.clone().unwrap_or_else(|| format!("X ≤ 10⁶ in {elapsed:.1?}"));
    report(2, mismatch.is_none() && elapsed < Duration::from_secs(60), &detail);
}

fn simple_sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            primes.push(n as u64);
            for m in (n * n..=limit).step_by(n) {
                composite[m] = true;
            }
        }
    }
    primes
}

fn distinct_exponents(x: u64, primes: &[u64]) -> usize {
    let exponents: HashSet<u64> = primes
        .iter()
        .take_while(|&&p| p <= x)
        .map(|&p| {
            let (mut q, mut v) = (x, 0);
            while q >= p {
                q /= p;
                v += q;
            }
            v
        })
        .collect();
    exponents.len()
}

#[test]
fn criterion_3_theorem_2_identity() {
    let limit = 10_000_000u64;
    let table = PrimeTable::sieve(limit).unwrap();
    let primes = simple_sieve(limit as usize);
    let xs: Vec<u64> = (2..=5_000).chain([10_000, 100_000, 1_000_000, 10_000_000]).collect();
    let mismatch = xs.par_iter().find_map_first(|&x| {
        let size = table.enumerate_s_p(x).unwrap().len();
        let oracle = distinct_exponents(x, &primes);
        let library = table.distinct_factorial_exponents(x).unwrap().distinct_count;
        (size != oracle || library != oracle)
            .then(|| format!("X={x}: |S_p| {size}, |α(X!)| {oracle}, library {library}"))
    });
    let ratios: Vec<f64> = growth_grid().into_iter().map(|x| table.growth_ratio(x).unwrap()).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    let (band_lo, band_hi) = fixtures::GROWTH_BAND;
    let in_band = band_lo <= lo && hi <= band_hi && band_hi / band_lo <= 2.0;
    let detail = match &mismatch {
        Some(m) => m.clone(),
        None => format!("{} X values; growth ratio in [{lo:.4}, {hi:.4}] ⊂ [{band_lo}, {band_hi}]", xs.len()),
    };
    report(3, mismatch.is_none() && in_band, &detail);
}

#[test]
fn criterion_4_legendre_vs_factorization() {
    let primes = simple_sieve(400);
    let mut factorial = BigUint::one();
    let mut mismatch = None;
    let mut cases = 0;
    for x in 1..=400u64 {
        factorial *= x;
        for &p in primes.iter().take_while(|&&p| p <= x) {
            let (mut rest, mut v) = (factorial.clone(), 0u64);
            let big_p = BigUint::from(p);
            while (&rest % &big_p).is_zero() {
                rest /= &big_p;
                v += 1;
            }
            let legendre = legendre_valuation(x, p).unwrap();
            cases += 1;
            if legendre != v && mismatch.is_none() {
                mismatch = Some(format!("X={x} p={p}: Legendre {legendre}, factorization {v}"));
            }
        }
    }
    let detail = mismatch.clone().unwrap_or_else(|| format!("{cases} (X, p) pairs"));
    report(4, mismatch.is_none(), &detail);
}

#[test]
fn criterion_5_bounded_discrepancy() {
    let grid = [100u64, 1_000, 10_000, 100_000, 1_000_000];
    let mut lines = Vec::new();
    let mut all_flat = true;
    for preset in Preset::ALL {
        let t = (preset == Preset::HyperbolaT).then(|| t("2"));
        let d: Vec<f64> = grid
            .iter()
            .map(|&x| {
                let spec = preset.spec(x, t).unwrap();
                asymptotic_cardinality_with_exact(&spec, u64::MAX).unwrap().discrepancy.unwrap().abs()
            })
            .collect();
        let max_all = d.iter().copied().fold(0.0, f64::max);
        let max_low = d[..3].iter().copied().fold(0.0, f64::max);
        let flat = max_all == max_low;
        all_flat &= flat;
        lines.push(format!("{preset} max {max_all:.6} vs lower {max_low:.6} ({})", if flat { "ok" } else { "grows" }));
    }
    let spec = Preset::Circle.spec(1_000_000, None).unwrap();
    let density = asymptotic_cardinality(&spec).unwrap().formula_value / 1e6;
    let circle_ok = (density - (2.0 - 2f64.sqrt())).abs() <= 0.01;
    lines.push(format!("circle formula/X {density:.6}"));
    report(5, all_flat && circle_ok, &lines.join("; "));
}

#[test]
fn criterion_6_cross_path() {
    let pairs: Vec<_> = ["2", "3"].map(t).into_iter().flat_map(|t| (1..=10_000u64).map(move |x| (t, x))).collect();
    let mismatch = pairs.par_iter().find_map_first(|&(t, x)| {
        let spec = Preset::HyperbolaT.spec(x, Some(t)).unwrap();
        let general = enumerate_s_f(&spec, u64::MAX).unwrap().len() as u64;
        let closed = card_s_t(x, t).unwrap().cardinality;
        (general != closed).then(|| format!("X={x} t={t}: preset {general}, closed form {closed}"))
    });
    let detail = mismatch.clone().unwrap_or_else(|| format!("{} cases", pairs.len()));
    report(6, mismatch.is_none(), &detail);
}

/// Composite midpoint rule with `panels` equal panels.
fn midpoint(f: impl Fn(f64) -> f64 + Sync, a: f64, b: f64, panels: u64) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).into_par_iter().map(|i| f(a + h * (i as f64 + 0.5))).sum::<f64>() * h
}

#[test]
fn criterion_7_prime_density() {
    let x = 1_000_000u64;
    let r = density_report(x, RationalExponent::ONE).unwrap();
    let (lo, hi) = fixtures::PNT_BAND;
    let band_ok = (lo..=hi).contains(&r.pnt_ratio);

    let xf = x as f64;
    let oracle =
        midpoint(|s| 1.0 / s.ln(), 2.0, 1_000.0, 400_000) + midpoint(|s| 1.0 / (xf / s).ln(), 2.0, 1_000.0, 400_000);
    let main_term = ma_wu_main_term(x).unwrap();
    let quad_rel = (main_term / oracle - 1.0).abs();
    let quad_ok = quad_rel <= 1e-6;

    let count = r.prime_count as f64;
    let hey = r.hey_estimate.unwrap();
    let (e_ma_wu, e_hey) = ((count / main_term - 1.0).abs(), (count / hey - 1.0).abs());
    let closer_ok = e_ma_wu <= e_hey;

    let detail = format!(
        "pnt_ratio {:.6} in [{lo}, {hi}]: {band_ok}; quadrature rel diff {quad_rel:.2e}: {quad_ok}; \
         primes {}, |count/main − 1| {e_ma_wu:.4} ≤ |count/Hey − 1| {e_hey:.4}: {closer_ok}",
        r.pnt_ratio, r.prime_count
    );
    report(7, band_ok && quad_ok && closer_ok, &detail);
}

#[test]
fn criterion_8_verify_all() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_floorset"))
        .args(["verify", "--suite", "all", "--budget", "300"])
        .env_remove("FLOORSET_SIEVE_CACHE")
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let summary = String::from_utf8_lossy(&out.stdout);
    let last = summary.lines().last().unwrap_or("").to_string();
    let passed = out.status.success() && elapsed < Duration::from_secs(300);
    report(8, passed, &format!("exit {:?} in {elapsed:.1?}; {last}", out.status.code()));
}
