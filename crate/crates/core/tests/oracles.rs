//! Values frozen from independent computations (mpmath quadrature, sympy
//! primality, Python exact integers), checked through the public API.

use std::time::Duration;

use floorset::general_sets::{asymptotic_cardinality_with_exact, Preset};
use floorset::hyperbolic_sets::{card_s_t, leading_term_estimate};
use floorset::prime_density::{density_report, ma_wu_main_term};
use floorset::verify::{self, Suite, VerifyOptions};
use floorset::{PrimeTable, RationalExponent};

fn t(s: &str) -> RationalExponent {
    s.parse().unwrap()
}

#[test]
fn main_term_matches_mpmath() {
    for (x, expected) in
        [(16, 3.119_709_347_131_433), (10_000, 47.166_277_914_465_7), (1_000_000, 304.577_234_519_024_05)]
    {
        let got = ma_wu_main_term(x).unwrap();
        assert!((got / expected - 1.0).abs() < 1e-8, "X={x}: {got} vs {expected}");
    }
}

#[test]
fn prime_counts_match_sympy() {
    let one = RationalExponent::ONE;
    let r = density_report(10_000, one).unwrap();
    assert_eq!((r.prime_count, r.set_size), (39, 199));
    let r = density_report(1_000_000, one).unwrap();
    assert_eq!((r.prime_count, r.set_size), (277, 1999));
    assert!((r.hey_estimate.unwrap() - 289.529_654_6).abs() < 1e-6);
}

#[test]
fn discrepancies_match_frozen_table() {
    // formula − exact at X = 10², 10³, 10⁴, 10⁵, 10⁶
    let table: [(Preset, Option<&str>, [f64; 5]); 4] = [
        (Preset::HyperbolaT, Some("2"), [0.6158, 0.5154, -0.1008, 0.2077, 0.9803]),
        (Preset::Circle, None, [-1.1300, -0.3208, -0.2035, -1.0344, -1.3436]),
        (Preset::Parabola, None, [-1.01, -1.001, -1.0001, -1.00001, -1.000001]),
        (Preset::Sqrt, None, [-0.9902, -0.9990, -0.9999, -0.99999, -0.999999]),
    ];
    for (preset, exponent, expected) in table {
        for (e, want) in (2..=6).zip(expected) {
            let x = 10u64.pow(e);
            let spec = preset.spec(x, exponent.map(t)).unwrap();
            let d = asymptotic_cardinality_with_exact(&spec, u64::MAX).unwrap().discrepancy.unwrap();
            assert!((d - want).abs() < 1e-4, "{preset} X=10^{e}: {d} vs {want}");
        }
    }
}

#[test]
fn circle_exact_counts() {
    for (x, exact) in [(100, 59), (1_000, 586), (10_000, 5_858), (100_000, 58_579), (1_000_000, 585_787)] {
        let spec = Preset::Circle.spec(x, None).unwrap();
        assert_eq!(asymptotic_cardinality_with_exact(&spec, u64::MAX).unwrap().exact_count, Some(exact));
    }
}

#[test]
fn leading_term_gap_below_one() {
    for s in ["2", "3", "4", "3/2", "5/2", "7/3"] {
        let t = t(s);
        let worst = (1..=20_000u64)
            .map(|x| (card_s_t(x, t).unwrap().cardinality as f64 - leading_term_estimate(x, t)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1.0, "t={s}: {worst}");
    }
}

#[test]
fn large_exponent_floor_matches_python() {
    // ⌊10⁹ / 2^{9/5}⌋ and ⌊10⁹ / 3¹⁵⌋ with exact integers
    assert_eq!(floorset::exact_arith::floor_x_over_n_pow_t(1_000_000_000, 2, t("9/5")), 287_174_588);
    assert_eq!(floorset::exact_arith::floor_x_over_n_pow_t(1_000_000_000, 3, t("15")), 69);
}

#[test]
fn sieve_cache_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("primes.bin");
    let table = PrimeTable::load_or_build(&path, 100_000).unwrap();
    assert_eq!(table.pi(100_000), 9_592);
    let reread = PrimeTable::read_cache(&path, 50_000).unwrap().unwrap();
    assert_eq!(reread.primes(), table.primes_up_to(50_000));
    assert!(PrimeTable::read_cache(&path, 200_000).unwrap().is_none());
}

#[test]
fn required_checks_pass_without_budget() {
    let options = VerifyOptions { budget: Duration::ZERO, sieve_cache: None };
    for suite in [Suite::Thm1, Suite::Thm2, Suite::Density] {
        let report = verify::run(suite, &options);
        let failures: Vec<_> = report.failures().map(|o| format!("{}: {}", o.name, o.detail)).collect();
        assert!(failures.is_empty(), "{suite}: {failures:?}");
        assert!(!report.outcomes.is_empty() && !report.skipped.is_empty());
    }
}
