//! Cardinality of `S_t(X) = {⌊X/nᵗ⌋ : 1 ≤ n ≤ X}` and `S(X) = S_1(X)`.
//!
//! [`card_s_t`] evaluates the closed form in a handful of exact big-integer
//! operations. [`enumerate_s_t`] and [`enumerate_s1`] materialize the sets
//! and serve as the oracles the closed forms are checked against.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_arith::{self, critical_index, floor_x_over_n_pow_t, mul_pow_le, RationalExponent};

/// `|S_t(X)|` together with the quantities the closed form is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityReport {
    pub x: u64,
    pub t: RationalExponent,
    pub cardinality: u64,
    /// `⌊a⌋` with `a = (tX)^{1/(t+1)}`.
    pub floor_a: u64,
    pub a_is_integer: bool,
    /// Overlap correction, present only when `X ≥ 2` and `a` is not an integer.
    pub epsilon: Option<u8>,
}

/// The elements of `S_t(X)`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorSetElements {
    pub x: u64,
    pub t: RationalExponent,
    pub elements: Vec<u64>,
}

impl FloorSetElements {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationMode {
    /// Evaluate every `n` in `1..=X`.
    Naive,
    /// Stop at the first repeated value; see [`enumerate_s_t`].
    #[default]
    EarlyExit,
}

/// Enumerates `S_t(X)` for `t ≥ 1`.
///
/// In [`EnumerationMode::EarlyExit`] the scan stops at the first `n` with
/// `⌊X/nᵗ⌋ = ⌊X/(n−1)ᵗ⌋`. Two equal floors mean the real gap
/// `X/(n−1)ᵗ − X/nᵗ` is below 1, and by convexity every later gap is too, so
/// from there on the floors descend in steps of 0 or 1 down to `⌊X/Xᵗ⌋` and
/// every value in between is attained.
pub fn enumerate_s_t(x: u64, t: RationalExponent, mode: EnumerationMode) -> Result<FloorSetElements> {
    if x == 0 {
        return Err(Error::XTooSmall { got: 0, min: 1 });
    }
    let mut descending = Vec::new();
    match mode {
        EnumerationMode::Naive => {
            descending.extend((1..=x).map(|n| floor_x_over_n_pow_t(x, n, t)));
            descending.dedup();
        }
        EnumerationMode::EarlyExit => {
            let mut n = 1;
            loop {
                let value = floor_x_over_n_pow_t(x, n, t);
                if descending.last() == Some(&value) {
                    let floor_at_x = floor_x_over_n_pow_t(x, x, t);
                    descending.pop();
                    descending.extend((floor_at_x..=value).rev());
                    break;
                }
                descending.push(value);
                if n == x {
                    break;
                }
                n += 1;
            }
        }
    }
    descending.reverse();
    debug_assert!(descending.windows(2).all(|w| w[0] < w[1]));
    Ok(FloorSetElements { x, t, elements: descending })
}

/// `S(X) = {⌊X/n⌋}` by walking the blocks of `n` sharing a quotient, in
/// `O(√X)` steps.
pub fn enumerate_s1(x: u64) -> Result<Vec<u64>> {
    if x == 0 {
        return Err(Error::XTooSmall { got: 0, min: 1 });
    }
    let mut values = Vec::with_capacity(2 * exact_arith::isqrt_u64(x) as usize + 1);
    let mut n = 1;
    while n <= x {
        let q = x / n;
        values.push(q);
        n = x / q + 1;
    }
    values.reverse();
    Ok(values)
}

/// `|S(X)| = ⌊√(4X+1)⌋ − 1`.
pub fn card_s1(x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::XTooSmall { got: 0, min: 1 });
    }
    let m = 4 * u128::from(x) + 1;
    Ok(exact_arith::int_nth_root_u128(m, 2) as u64 - 1)
}

/// Exact `|S_t(X)|` for `t > 1`.
///
/// With `n₀ = ⌊a⌋` and `a = (tX)^{1/(t+1)}`:
///
/// * `a` integer: `n₀ + ⌊X/n₀ᵗ⌋`;
/// * otherwise: `n₀ + ⌊X/(n₀+1)ᵗ⌋ + ε`, where `ε = 0` iff
///   `⌊X/n₀ᵗ⌋·(n₀+1)ᵗ ≤ X`, tested exactly as `kᵛ·(n₀+1)ᵘ ≤ Xᵛ`.
pub fn card_s_t(x: u64, t: RationalExponent) -> Result<CardinalityReport> {
    if x == 0 {
        return Err(Error::XTooSmall { got: 0, min: 1 });
    }
    t.require_above_one()?;
    let ci = critical_index(x, t)?;
    if x == 1 {
        return Ok(CardinalityReport {
            x,
            t,
            cardinality: 1,
            floor_a: ci.floor_a,
            a_is_integer: ci.is_integer,
            epsilon: None,
        });
    }
    let n0 = ci.floor_a;
    assert!(n0 < x, "critical index {n0} must lie below X = {x} for t > 1");

    let head_floor = floor_x_over_n_pow_t(x, n0, t);
    let (cardinality, epsilon) = if ci.is_integer {
        (n0 + head_floor, None)
    } else {
        let tail_floor = floor_x_over_n_pow_t(x, n0 + 1, t);
        let epsilon = if mul_pow_le(head_floor, n0 + 1, t, x) { 0 } else { 1 };
        (n0 + tail_floor + u64::from(epsilon), Some(epsilon))
    };
    Ok(CardinalityReport { x, t, cardinality, floor_a: n0, a_is_integer: ci.is_integer, epsilon })
}

/// [`card_s_t`] over `xs`, computed in parallel, returned in input order.
pub fn card_s_t_scan(xs: impl IntoParallelIterator<Item = u64>, t: RationalExponent) -> Result<Vec<CardinalityReport>> {
    xs.into_par_iter().map(|x| card_s_t(x, t)).collect()
}

/// The smooth approximation `a + X/aᵗ = X^{1/(t+1)}·(t^{1/(t+1)} + t^{−t/(t+1)})`
/// to `|S_t(X)|`, within a bounded distance of the exact count.
pub fn leading_term_estimate(x: u64, t: RationalExponent) -> f64 {
    let t = t.to_f64();
    let e = 1.0 / (t + 1.0);
    (x as f64).powf(e) * (t.powf(e) + t.powf(-t * e))
}
