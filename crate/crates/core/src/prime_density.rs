//! How many primes the sparse sets `S(X)` and `S_t(X)` contain.
//!
//! For `S(X)` the count is compared with three predictions: `|S|/ln|S|`
//! (the prime number theorem read inside the set), `4√X/ln X`, and the
//! refined main term `∫₂^√X dt/ln t + ∫₂^√X dt/ln(X/t)`. All logarithms
//! are natural.

use crate::error::{Error, Result};
use crate::exact_arith::RationalExponent;
use crate::hyperbolic_sets::{enumerate_s1, enumerate_s_t, EnumerationMode};
use crate::primality;

/// Largest `X` accepted by [`density_report`].
pub const DENSITY_X_CAP: u64 = 1_000_000_000_000;

const SIMPSON_MAX_DEPTH: u32 = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub x: u64,
    /// [`RationalExponent::ONE`] for `S(X)`.
    pub t: RationalExponent,
    pub prime_count: u64,
    pub set_size: u64,
    /// `prime_count · ln(set_size) / set_size`.
    pub pnt_ratio: f64,
    /// `4√X / ln X`, for `t = 1` only.
    pub hey_estimate: Option<f64>,
    /// The two-integral main term, for `t = 1` and `X ≥ 16` only.
    pub ma_wu_main_term: Option<f64>,
}

/// Number of primes among `elements`.
pub fn count_primes_in_set(elements: &[u64]) -> u64 {
    elements.iter().filter(|&&n| primality::is_prime(n)).count() as u64
}

/// `4√X / ln X`.
pub fn hey_estimate(x: u64) -> f64 {
    let xf = x as f64;
    4.0 * xf.sqrt() / xf.ln()
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to relative tolerance
/// `rel_tol` (measured against a coarse first estimate).
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    let eps = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(&f, a, b, fa, fm, fb, whole, eps, SIMPSON_MAX_DEPTH)
}

/// `∫₂^√X dt/ln t + ∫₂^√X dt/ln(X/t)` to relative tolerance `10⁻⁸`.
pub fn ma_wu_main_term(x: u64) -> Result<f64> {
    if x < 16 {
        return Err(Error::XTooSmall { got: x, min: 16 });
    }
    let xf = x as f64;
    let upper = xf.sqrt();
    let first = adaptive_simpson(|t| 1.0 / t.ln(), 2.0, upper, 1e-8);
    let second = adaptive_simpson(|t| 1.0 / (xf / t).ln(), 2.0, upper, 1e-8);
    Ok(first + second)
}

/// Builds `S_t(X)` (or `S(X)` for `t = 1`), counts its primes and fills in
/// the comparison terms.
pub fn density_report(x: u64, t: RationalExponent) -> Result<DensityReport> {
    if x == 0 {
        return Err(Error::XTooSmall { got: 0, min: 1 });
    }
    if x > DENSITY_X_CAP {
        return Err(Error::CapExceeded { x, cap: DENSITY_X_CAP });
    }
    let elements =
        if t.is_one() { enumerate_s1(x)? } else { enumerate_s_t(x, t, EnumerationMode::EarlyExit)?.elements };
    let prime_count = count_primes_in_set(&elements);
    let set_size = elements.len() as u64;
    let pnt_ratio = prime_count as f64 * (set_size as f64).ln() / set_size as f64;
    let (hey, ma_wu) = if t.is_one() {
        let hey = (x >= 2).then(|| hey_estimate(x));
        (hey, ma_wu_main_term(x).ok())
    } else {
        (None, None)
    };
    Ok(DensityReport { x, t, prime_count, set_size, pnt_ratio, hey_estimate: hey, ma_wu_main_term: ma_wu })
}
