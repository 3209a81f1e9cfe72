//! Exact integer arithmetic for floors and critical indices with rational
//! exponents.
//!
//! An exponent `t = u/v` never touches floating point here: `⌊X/nᵗ⌋` is the
//! largest `k` with `kᵛ·nᵘ ≤ Xᵛ`, and the critical index `⌊(tX)^{1/(t+1)}⌋`
//! is the largest `n` with `vᵛ·n^{u+v} ≤ uᵛ·Xᵛ`. Products are evaluated in
//! `u128` while they fit and spill over into [`BigUint`] otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Largest numerator or denominator accepted for an exponent.
pub const MAX_EXPONENT_TERM: u32 = 1024;

/// An exponent `t = u/v` in lowest terms with `t ≥ 1`.
///
/// [`RationalExponent::new`] only builds `t > 1`; the value `1` exists as
/// [`RationalExponent::ONE`] for the places that route `t = 1` to the `S(X)`
/// formulas. Operations that need `t > 1` reject it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    numer: u32,
    denom: u32,
}

impl RationalExponent {
    pub const ONE: Self = Self { numer: 1, denom: 1 };

    /// Builds `u/v`, reducing to lowest terms. Requires `u/v > 1`.
    pub fn new(numer: u32, denom: u32) -> Result<Self> {
        let t = Self::reduced(numer, denom)?;
        if t.is_one() {
            return Err(Error::ExponentNotAboveOne(t.to_string()));
        }
        Ok(t)
    }

    /// Integer exponent `t ≥ 2`.
    pub fn integer(t: u32) -> Result<Self> {
        Self::new(t, 1)
    }

    fn reduced(numer: u32, denom: u32) -> Result<Self> {
        let input = || format!("{numer}/{denom}");
        if denom == 0 {
            return Err(Error::InvalidExponent { input: input(), reason: "zero denominator".into() });
        }
        let g = numer.gcd(&denom);
        let (numer, denom) = numer.checked_div(g).zip(denom.checked_div(g)).unwrap_or((numer, denom));
        if numer < denom {
            return Err(Error::ExponentNotAboveOne(input()));
        }
        if numer > MAX_EXPONENT_TERM || denom > MAX_EXPONENT_TERM {
            return Err(Error::InvalidExponent {
                input: input(),
                reason: format!("numerator and denominator must not exceed {MAX_EXPONENT_TERM}"),
            });
        }
        Ok(Self { numer, denom })
    }

    pub fn numer(self) -> u32 {
        self.numer
    }

    pub fn denom(self) -> u32 {
        self.denom
    }

    pub fn is_one(self) -> bool {
        self.numer == 1 && self.denom == 1
    }

    pub fn is_integer(self) -> bool {
        self.denom == 1
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.numer) / f64::from(self.denom)
    }

    pub(crate) fn require_above_one(self) -> Result<()> {
        if self.is_one() {
            Err(Error::ExponentNotAboveOne(self.to_string()))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

/// Parses `"u/v"`, an integer, or a terminating decimal such as `"1.5"`.
///
/// Decimals convert exactly (`"2.25"` is `9/4`). The result may be
/// [`RationalExponent::ONE`]; anything below 1 is rejected.
impl FromStr for RationalExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let invalid = |reason: &str| Error::InvalidExponent { input: s.to_string(), reason: reason.to_string() };
        let digits = |part: &str| -> Result<u64> {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(invalid("expected `u/v`, an integer, or a terminating decimal"));
            }
            part.parse::<u64>().map_err(|_| invalid("value too large"))
        };
        let narrow = |value: u64| u32::try_from(value).map_err(|_| invalid("value too large"));

        let (numer, denom) = if let Some((u, v)) = s.split_once('/') {
            (digits(u)?, digits(v)?)
        } else if let Some((int, frac)) = s.split_once('.') {
            let int = digits(int)?;
            let frac_value = digits(frac)?;
            let scale = u32::try_from(frac.len())
                .ok()
                .and_then(|len| 10u64.checked_pow(len))
                .ok_or_else(|| invalid("too many decimal places"))?;
            let numer = int
                .checked_mul(scale)
                .and_then(|n| n.checked_add(frac_value))
                .ok_or_else(|| invalid("value too large"))?;
            let g = numer.gcd(&scale);
            (numer / g, scale / g)
        } else {
            (digits(s)?, 1)
        };
        Self::reduced(narrow(numer)?, narrow(denom)?).map_err(|e| match e {
            Error::InvalidExponent { reason, .. } => Error::InvalidExponent { input: s.to_string(), reason },
            Error::ExponentNotAboveOne(_) => Error::ExponentNotAboveOne(s.to_string()),
            other => other,
        })
    }
}

/// `⌊a⌋` for `a = (tX)^{1/(t+1)}`, the point where `d/dy (X/yᵗ) = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriticalIndex {
    pub floor_a: u64,
    pub is_integer: bool,
}

/// A non-negative integer that stays in `u128` until it no longer fits.
///
/// `Big` is only ever used for values above `u128::MAX`, which keeps the
/// derived ordering correct across variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Magnitude {
    Small(u128),
    Big(BigUint),
}

impl Magnitude {
    pub(crate) fn from_big(value: BigUint) -> Self {
        match value.to_u128() {
            Some(small) => Magnitude::Small(small),
            None => Magnitude::Big(value),
        }
    }

    pub(crate) fn pow(base: u64, exp: u32) -> Self {
        match u128::from(base).checked_pow(exp) {
            Some(small) => Magnitude::Small(small),
            None => Magnitude::Big(BigUint::from(base).pow(exp)),
        }
    }

    pub(crate) fn to_big(&self) -> BigUint {
        match self {
            Magnitude::Small(s) => BigUint::from(*s),
            Magnitude::Big(b) => b.clone(),
        }
    }

    pub(crate) fn div_floor(&self, divisor: &Magnitude) -> Magnitude {
        match (self, divisor) {
            (Magnitude::Small(a), Magnitude::Small(b)) => Magnitude::Small(a / b),
            (Magnitude::Small(_), Magnitude::Big(_)) => Magnitude::Small(0),
            (Magnitude::Big(a), Magnitude::Small(b)) => Magnitude::from_big(a / b),
            (Magnitude::Big(a), Magnitude::Big(b)) => Magnitude::from_big(a / b),
        }
    }

    fn nth_root(&self, r: u32) -> Magnitude {
        match self {
            Magnitude::Small(s) => Magnitude::Small(int_nth_root_u128(*s, r)),
            Magnitude::Big(b) => Magnitude::from_big(int_nth_root(b, r)),
        }
    }
}

impl Mul for Magnitude {
    type Output = Magnitude;

    fn mul(self, rhs: Magnitude) -> Magnitude {
        if let (Magnitude::Small(a), Magnitude::Small(b)) = (&self, &rhs) {
            if let Some(p) = a.checked_mul(*b) {
                return Magnitude::Small(p);
            }
        }
        Magnitude::Big(self.to_big() * rhs.to_big())
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Magnitude::Small(a), Magnitude::Small(b)) => a.cmp(b),
            (Magnitude::Small(_), Magnitude::Big(_)) => Ordering::Less,
            (Magnitude::Big(_), Magnitude::Small(_)) => Ordering::Greater,
            (Magnitude::Big(a), Magnitude::Big(b)) => a.cmp(b),
        }
    }
}

fn float_root_guess(m: f64, r: u32) -> f64 {
    m.powf(1.0 / f64::from(r))
}

/// `⌊m^{1/r}⌋` for `u128`.
///
/// Floating-point guess, integer Newton iteration from above, then an exact
/// check of `kʳ ≤ m < (k+1)ʳ`.
pub fn int_nth_root_u128(m: u128, r: u32) -> u128 {
    assert!(r >= 1, "root degree must be positive");
    if r == 1 || m < 2 {
        return m;
    }
    if r >= 128 {
        return 1;
    }
    let r128 = u128::from(r);
    let newton = |s: u128| -> u128 {
        // s ≥ 1; s^{r-1} > m means the quotient term vanishes.
        let q = s.checked_pow(r - 1).map_or(0, |p| m / p);
        ((r128 - 1).saturating_mul(s).saturating_add(q)) / r128
    };

    let guess = float_root_guess(m as f64, r) as u128;
    // One step from any positive start lands at or above the floor root.
    let mut s = newton(guess.max(1));
    loop {
        let next = newton(s);
        if next >= s {
            break;
        }
        s = next;
    }
    while s.checked_pow(r).is_none_or(|p| p > m) {
        s -= 1;
    }
    while (s + 1).checked_pow(r).is_some_and(|p| p <= m) {
        s += 1;
    }
    s
}

/// `⌊m^{1/r}⌋` for arbitrary-size `m`.
pub fn int_nth_root(m: &BigUint, r: u32) -> BigUint {
    assert!(r >= 1, "root degree must be positive");
    if r == 1 || *m <= BigUint::one() {
        return m.clone();
    }
    if let Some(small) = m.to_u128() {
        return BigUint::from(int_nth_root_u128(small, r));
    }
    let bits = m.bits();
    if u64::from(r) >= bits {
        return BigUint::one();
    }

    // Scale m down by a multiple of r bits so the mantissa fits an f64.
    let shift = bits.saturating_sub(64) / u64::from(r) * u64::from(r);
    let head = (m >> shift).to_f64().unwrap_or(f64::INFINITY);
    let head_root = float_root_guess(head, r);
    let guess = if head_root.is_finite() && head_root >= 1.0 {
        BigUint::from(head_root as u128) << (shift / u64::from(r))
    } else {
        BigUint::one() << (bits / u64::from(r) + 1)
    };

    let rb = BigUint::from(r);
    let r_minus_one = BigUint::from(r - 1);
    let newton = |s: &BigUint| -> BigUint { (&r_minus_one * s + m / s.pow(r - 1)) / &rb };

    let mut s = newton(&guess.max(BigUint::one()));
    loop {
        let next = newton(&s);
        if next >= s {
            break;
        }
        s = next;
    }
    while s.pow(r) > *m {
        s -= 1u32;
    }
    loop {
        let up = &s + 1u32;
        if up.pow(r) > *m {
            break;
        }
        s = up;
    }
    s
}

/// `⌊X/nᵗ⌋`: the unique `k` with `kᵛ·nᵘ ≤ Xᵛ < (k+1)ᵛ·nᵘ`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn floor_x_over_n_pow_t(x: u64, n: u64, t: RationalExponent) -> u64 {
    assert!(n >= 1, "n must be positive");
    if n == 1 {
        return x;
    }
    let (u, v) = (t.numer(), t.denom());
    let x_pow = Magnitude::pow(x, v);
    let n_pow = Magnitude::pow(n, u);
    if n_pow > x_pow {
        return 0;
    }
    let k = x_pow.div_floor(&n_pow).nth_root(v);
    match k {
        Magnitude::Small(k) => u64::try_from(k).expect("floor is at most X"),
        Magnitude::Big(_) => unreachable!("floor is at most X"),
    }
}

/// Exact test of `k·nᵗ ≤ X`, evaluated as `kᵛ·nᵘ ≤ Xᵛ`.
pub fn mul_pow_le(k: u64, n: u64, t: RationalExponent, x: u64) -> bool {
    let (u, v) = (t.numer(), t.denom());
    Magnitude::pow(k, v) * Magnitude::pow(n, u) <= Magnitude::pow(x, v)
}

/// Largest `n ≥ 1` with `vᵛ·n^{u+v} ≤ uᵛ·Xᵛ`, i.e. `⌊(tX)^{1/(t+1)}⌋`, by
/// binary search on exact comparisons.
pub fn critical_index(x: u64, t: RationalExponent) -> Result<CriticalIndex> {
    if x == 0 {
        return Err(Error::XTooSmall { got: x, min: 1 });
    }
    t.require_above_one()?;
    let (u, v) = (t.numer(), t.denom());
    let v_v = Magnitude::pow(u64::from(v), v);
    let rhs = Magnitude::pow(u64::from(u), v) * Magnitude::pow(x, v);
    let lhs = |n: u64| v_v.clone() * Magnitude::pow(n, u + v);

    // For X ≥ 2 the root lies in [1, X]; for X = 1 it lies in [1, 2).
    let (mut lo, mut hi) = (1u64, x);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if lhs(mid) <= rhs {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(CriticalIndex { floor_a: lo, is_integer: lhs(lo) == rhs })
}

/// `⌊√m⌋` for `u64`.
pub fn isqrt_u64(m: u64) -> u64 {
    int_nth_root_u128(u128::from(m), 2) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;
    use proptest::prelude::*;

    fn t(u: u32, v: u32) -> RationalExponent {
        RationalExponent::new(u, v).unwrap()
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(int_nth_root_u128(0, 5), 0);
        assert_eq!(int_nth_root_u128(41, 2), 6);
        assert_eq!(int_nth_root_u128(216, 3), 6);
        assert_eq!(int_nth_root(&BigUint::from(216u32), 3), BigUint::from(6u32));
    }

    #[test]
    fn nth_root_at_u128_extremes() {
        assert_eq!(int_nth_root_u128(u128::MAX, 2), u128::from(u64::MAX));
        assert_eq!(int_nth_root_u128(u128::MAX, 127), 2);
        assert_eq!(int_nth_root_u128(u128::MAX, 128), 1);
        assert_eq!(int_nth_root_u128(u128::MAX, 64), 3);
        let p = u128::from(u64::MAX);
        assert_eq!(int_nth_root_u128(p * p, 2), p);
        assert_eq!(int_nth_root_u128(p * p - 1, 2), p - 1);
    }

    #[test]
    fn big_nth_root_perfect_powers() {
        let base = BigUint::from(123_456_789_012_345_678_901u128);
        for r in [2u32, 3, 5, 7, 13] {
            let m = base.pow(r);
            assert_eq!(int_nth_root(&m, r), base);
            assert_eq!(int_nth_root(&(&m - 1u32), r), &base - 1u32);
            assert_eq!(int_nth_root(&(&m + 1u32), r), base);
        }
    }

    #[test]
    fn parse_exponents() {
        assert_eq!("3/2".parse::<RationalExponent>().unwrap(), t(3, 2));
        assert_eq!("1.5".parse::<RationalExponent>().unwrap(), t(3, 2));
        assert_eq!("2.25".parse::<RationalExponent>().unwrap(), t(9, 4));
        assert_eq!("6/3".parse::<RationalExponent>().unwrap(), t(2, 1));
        assert_eq!("4".parse::<RationalExponent>().unwrap(), t(4, 1));
        assert!("1".parse::<RationalExponent>().unwrap().is_one());
        assert!("1.0".parse::<RationalExponent>().unwrap().is_one());
        for bad in ["", "x", "1/0", "0.5", "2/3", "1.3...", "1.(3)", "-2", "2.", ".5", "3/2/1"] {
            assert!(bad.parse::<RationalExponent>().is_err(), "{bad}");
        }
        assert!(RationalExponent::new(1, 1).is_err());
        assert!(RationalExponent::new(2000, 1).is_err());
        assert_eq!(t(7, 3).to_string(), "7/3");
        assert_eq!(t(3, 1).to_string(), "3");
    }

    #[test]
    fn floor_examples() {
        assert_eq!(floor_x_over_n_pow_t(100, 6, t(2, 1)), 2);
        assert_eq!(floor_x_over_n_pow_t(10, 4, t(3, 2)), 1);
        for x in [1u64, 7, 1_000_000_007] {
            assert_eq!(floor_x_over_n_pow_t(x, 1, t(7, 3)), x);
        }
        // X^v and n^u both leave u128 here.
        let x = 1_000_000_000u64;
        assert_eq!(floor_x_over_n_pow_t(x, 10, t(15, 1)), 0);
        assert_eq!(floor_x_over_n_pow_t(x, 3, t(15, 1)), x / 3u64.pow(15));
        assert_eq!(floor_x_over_n_pow_t(x, 2, t(9, 5)), 287_174_588);
    }

    #[test]
    fn critical_index_examples() {
        assert_eq!(critical_index(100, t(2, 1)).unwrap(), CriticalIndex { floor_a: 5, is_integer: false });
        assert_eq!(critical_index(4, t(2, 1)).unwrap(), CriticalIndex { floor_a: 2, is_integer: true });
        assert_eq!(critical_index(1, t(3, 2)).unwrap(), CriticalIndex { floor_a: 1, is_integer: false });
        assert!(critical_index(0, t(2, 1)).is_err());
        assert!(critical_index(5, RationalExponent::ONE).is_err());
    }

    #[test]
    fn mul_pow_le_matches_integer_case() {
        assert!(!mul_pow_le(4, 6, t(2, 1), 100));
        assert!(mul_pow_le(2, 6, t(2, 1), 100));
        // 4^{3/2} = 8: 1·8 ≤ 10, 2·8 > 10
        assert!(mul_pow_le(1, 4, t(3, 2), 10));
        assert!(!mul_pow_le(2, 4, t(3, 2), 10));
        assert!(mul_pow_le(2, 4, t(3, 2), 16));
    }

    fn exponent() -> impl Strategy<Value = RationalExponent> {
        (1u32..12, 1u32..5)
            .prop_filter_map("t must exceed 1", |(u, v)| RationalExponent::new(u, v).ok())
            .prop_filter("u + v ≤ 16", |t| t.numer() + t.denom() <= 16)
    }

    proptest! {
        #[test]
        fn nth_root_u128_brackets(m in any::<u128>(), r in 1u32..20) {
            let k = int_nth_root_u128(m, r);
            prop_assert!(k.checked_pow(r).is_some_and(|p| p <= m));
            prop_assert!((k + 1).checked_pow(r).is_none_or(|p| p > m));
            prop_assert_eq!(k, m.nth_root(r));
        }

        #[test]
        fn nth_root_big_matches_reference(bytes in proptest::collection::vec(any::<u8>(), 1..80), r in 1u32..24) {
            let m = BigUint::from_bytes_le(&bytes);
            let k = int_nth_root(&m, r);
            prop_assert!(k.pow(r) <= m);
            prop_assert!((&k + 1u32).pow(r) > m);
            prop_assert_eq!(k, m.nth_root(r));
        }

        #[test]
        fn floor_brackets(x in 1u64..1_000_000_000, n in 1u64..100_000, t in exponent()) {
            let k = floor_x_over_n_pow_t(x, n, t);
            let (u, v) = (t.numer(), t.denom());
            let xv = BigUint::from(x).pow(v);
            let nu = BigUint::from(n).pow(u);
            prop_assert!(BigUint::from(k).pow(v) * &nu <= xv);
            prop_assert!(BigUint::from(k + 1).pow(v) * &nu > xv);
        }

        #[test]
        fn floor_integer_exponent_is_division(x in 1u64..u64::MAX / 2, n in 1u64..5_000, e in 2u32..8) {
            let expected = u128::from(n).checked_pow(e).map_or(0, |p| (u128::from(x) / p) as u64);
            prop_assert_eq!(floor_x_over_n_pow_t(x, n, t(e, 1)), expected);
        }

        #[test]
        fn floor_monotone(x in 1u64..10_000_000, n in 1u64..10_000, t in exponent()) {
            let here = floor_x_over_n_pow_t(x, n, t);
            prop_assert!(floor_x_over_n_pow_t(x, n + 1, t) <= here);
            prop_assert!(floor_x_over_n_pow_t(x + 1, n, t) >= here);
        }

        #[test]
        fn critical_index_brackets(x in 1u64..1_000_000_000, t in exponent()) {
            let ci = critical_index(x, t).unwrap();
            let (u, v) = (t.numer(), t.denom());
            let vv = BigUint::from(v).pow(v);
            let rhs = BigUint::from(u).pow(v) * BigUint::from(x).pow(v);
            let lhs = |n: u64| &vv * BigUint::from(n).pow(u + v);
            prop_assert!(lhs(ci.floor_a) <= rhs);
            prop_assert!(lhs(ci.floor_a + 1) > rhs);
            prop_assert_eq!(ci.is_integer, lhs(ci.floor_a) == rhs);
            prop_assert!(ci.floor_a >= 1);
        }
    }
}
