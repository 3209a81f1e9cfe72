//! `S_f(X) = {⌊f(n)⌋ : 1 ≤ n ≤ X}` for monotone `f` with fixed convexity.
//!
//! Let `a` be the point where `f′(a) = −1` (decreasing `f`) or `+1`
//! (increasing `f`). On the steep side of `a` consecutive floors are all
//! distinct; on the shallow side they move by at most one and so sweep out an
//! interval. Counting both blocks gives, up to a bounded error,
//!
//! | class        | estimate                          |
//! |--------------|-----------------------------------|
//! | DEC_CONVEX   | `f(⌊a+1⌋) − f(⌊X⌋) + a`           |
//! | DEC_CONCAVE  | `f(1) − f(⌊a⌋) + X − a`           |
//! | INC_CONVEX   | `f(⌊a⌋) − f(1) + X − a`           |
//! | INC_CONCAVE  | `f(⌊X⌋) − f(⌊a+1⌋) + a`           |
//!
//! [`asymptotic_cardinality`] reports the raw estimate; the bounded error is
//! measured against [`enumerate_s_f`], never added in.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_arith::{floor_x_over_n_pow_t, int_nth_root_u128, RationalExponent};

/// Default limit on the number of `f(n)` evaluations in [`enumerate_s_f`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// Relative width of the band around an integer inside which a floating
/// point `f(n)` is not trusted.
pub const FLOOR_GUARD: f64 = 1.0 / (1u64 << 40) as f64;

const VALIDATION_SAMPLES: u32 = 64;

/// Signs of `f′` and `f″` on `[1, X]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    /// `f′ < 0`, `f″ > 0`
    DecConvex,
    /// `f′ < 0`, `f″ < 0`
    DecConcave,
    /// `f′ > 0`, `f″ > 0`
    IncConvex,
    /// `f′ > 0`, `f″ < 0`
    IncConcave,
}

impl SignClass {
    pub fn is_decreasing(self) -> bool {
        matches!(self, SignClass::DecConvex | SignClass::DecConcave)
    }

    pub fn is_convex(self) -> bool {
        matches!(self, SignClass::DecConvex | SignClass::IncConvex)
    }

    /// The slope `±1` that defines the critical point.
    pub fn target_slope(self) -> f64 {
        if self.is_decreasing() {
            -1.0
        } else {
            1.0
        }
    }

    /// Whether `|f′| > 1` below `a` (as opposed to above it).
    fn steep_below_critical(self) -> bool {
        matches!(self, SignClass::DecConvex | SignClass::IncConcave)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignClass::DecConvex => "DEC_CONVEX",
            SignClass::DecConcave => "DEC_CONCAVE",
            SignClass::IncConvex => "INC_CONVEX",
            SignClass::IncConcave => "INC_CONCAVE",
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ExactFloorFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A function `f(y) = f(X, y)` on `[1, X]` with an analytic derivative and
/// a declared [`SignClass`].
///
/// `exact_floor`, when present, computes `⌊f(n)⌋` without rounding error and
/// is consulted whenever the floating point value lands near an integer.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    x: f64,
    sign_class: SignClass,
    value: RealFn,
    derivative: RealFn,
    exact_floor: Option<ExactFloorFn>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("x", &self.x)
            .field("sign_class", &self.sign_class)
            .field("exact_floor", &self.exact_floor.is_some())
            .finish()
    }
}

impl FunctionSpec {
    pub fn new(
        name: impl Into<String>,
        x: f64,
        sign_class: SignClass,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !x.is_finite() || x < 1.0 {
            return Err(Error::InvalidSpec(format!("X must be a finite real ≥ 1, got {x}")));
        }
        Ok(Self {
            name: name.into(),
            x,
            sign_class,
            value: Arc::new(value),
            derivative: Arc::new(derivative),
            exact_floor: None,
        })
    }

    pub fn with_exact_floor(mut self, exact: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        self.exact_floor = Some(Arc::new(exact));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn sign_class(&self) -> SignClass {
        self.sign_class
    }

    pub fn value(&self, y: f64) -> f64 {
        (self.value)(y)
    }

    pub fn derivative(&self, y: f64) -> f64 {
        (self.derivative)(y)
    }

    pub fn has_exact_floor(&self) -> bool {
        self.exact_floor.is_some()
    }

    /// `⌊f(n)⌋`. Values within [`FLOOR_GUARD`] (relative) of an integer go to
    /// the exact path if there is one, and otherwise snap to that integer.
    pub fn floor_at(&self, n: u64) -> u64 {
        let y = self.value(n as f64);
        let nearest = y.round();
        if (y - nearest).abs() <= FLOOR_GUARD * y.abs().max(1.0) {
            return match &self.exact_floor {
                Some(exact) => exact(n),
                None => nearest.max(0.0) as u64,
            };
        }
        y.max(0.0).floor() as u64
    }

    /// Spot-checks non-negativity, the sign of `f′` and the monotonicity of
    /// `f′` on an interior grid.
    pub fn validate(&self) -> Result<()> {
        if self.x <= 1.0 {
            return Ok(());
        }
        let mut previous_slope: Option<f64> = None;
        for i in 0..=VALIDATION_SAMPLES {
            let y = 1.0 + (self.x - 1.0) * f64::from(i) / f64::from(VALIDATION_SAMPLES);
            let fy = self.value(y);
            if fy.is_nan() || fy < -FLOOR_GUARD {
                return Err(Error::InvalidSpec(format!("{}: f({y}) = {fy} is not non-negative", self.name)));
            }
            if i == 0 || i == VALIDATION_SAMPLES {
                continue;
            }
            let slope = self.derivative(y);
            let sign_ok = if self.sign_class.is_decreasing() { slope < 0.0 } else { slope > 0.0 };
            if !sign_ok {
                return Err(Error::InvalidSpec(format!(
                    "{}: f'({y}) = {slope} contradicts {}",
                    self.name, self.sign_class
                )));
            }
            if let Some(prev) = previous_slope {
                let order_ok = if self.sign_class.is_convex() { slope >= prev } else { slope <= prev };
                if !order_ok {
                    return Err(Error::InvalidSpec(format!(
                        "{}: f' is not monotone as {} requires near y = {y}",
                        self.name, self.sign_class
                    )));
                }
            }
            previous_slope = Some(slope);
        }
        Ok(())
    }
}

/// The built-in functions, one per [`SignClass`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `X / yᵗ`
    HyperbolaT,
    /// `√(X² − y²)`
    Circle,
    /// `y² / X`
    Parabola,
    /// `√(X·y)`
    Sqrt,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::HyperbolaT, Preset::Circle, Preset::Parabola, Preset::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Preset::HyperbolaT => "hyperbola-t",
            Preset::Circle => "circle",
            Preset::Parabola => "parabola",
            Preset::Sqrt => "sqrt",
        }
    }

    pub fn sign_class(self) -> SignClass {
        match self {
            Preset::HyperbolaT => SignClass::DecConvex,
            Preset::Circle => SignClass::DecConcave,
            Preset::Parabola => SignClass::IncConvex,
            Preset::Sqrt => SignClass::IncConcave,
        }
    }

    /// Builds the preset for integer `X`. `t` is required by, and only used
    /// by, `hyperbola-t`.
    pub fn spec(self, x: u64, t: Option<RationalExponent>) -> Result<FunctionSpec> {
        if x == 0 {
            return Err(Error::XTooSmall { got: 0, min: 1 });
        }
        let xf = x as f64;
        let class = self.sign_class();
        let spec = match self {
            Preset::HyperbolaT => {
                let t = t.ok_or(Error::MissingExponent("hyperbola-t"))?;
                let tf = t.to_f64();
                FunctionSpec::new(
                    self.name(),
                    xf,
                    class,
                    move |y| xf / y.powf(tf),
                    move |y| -tf * xf / y.powf(tf + 1.0),
                )?
                .with_exact_floor(move |n| floor_x_over_n_pow_t(x, n, t))
            }
            Preset::Circle => {
                let x2 = xf * xf;
                FunctionSpec::new(
                    self.name(),
                    xf,
                    class,
                    move |y| (x2 - y * y).max(0.0).sqrt(),
                    move |y| -y / (x2 - y * y).max(0.0).sqrt(),
                )?
                .with_exact_floor(move |n| {
                    let (x, n) = (u128::from(x), u128::from(n.min(x)));
                    int_nth_root_u128(x * x - n * n, 2) as u64
                })
            }
            Preset::Parabola => FunctionSpec::new(self.name(), xf, class, move |y| y * y / xf, move |y| 2.0 * y / xf)?
                .with_exact_floor(move |n| (u128::from(n) * u128::from(n) / u128::from(x)) as u64),
            Preset::Sqrt => {
                if x < 4 {
                    return Err(Error::XTooSmall { got: x, min: 4 });
                }
                FunctionSpec::new(
                    self.name(),
                    xf,
                    class,
                    move |y| (xf * y).sqrt(),
                    move |y| xf.sqrt() / (2.0 * y.sqrt()),
                )?
                .with_exact_floor(move |n| int_nth_root_u128(u128::from(x) * u128::from(n), 2) as u64)
            }
        };
        Ok(spec)
    }

    /// The critical point in closed form.
    pub fn closed_form_critical_point(self, x: u64, t: Option<RationalExponent>) -> Option<f64> {
        let xf = x as f64;
        Some(match self {
            Preset::HyperbolaT => {
                let t = t?.to_f64();
                (t * xf).powf(1.0 / (t + 1.0))
            }
            Preset::Circle => xf / std::f64::consts::SQRT_2,
            Preset::Parabola => xf / 2.0,
            Preset::Sqrt => xf / 4.0,
        })
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn preset(name: &str, x: u64, t: Option<RationalExponent>) -> Result<FunctionSpec> {
    name.parse::<Preset>()?.spec(x, t)
}

/// Bisection tolerance used by [`asymptotic_cardinality`]: a few ulps of
/// `X`, so the bracket shrinks to float resolution even when `a ≪ X`.
pub fn default_tolerance(spec: &FunctionSpec) -> f64 {
    4.0 * f64::EPSILON * spec.x().max(1.0)
}

/// Finds `a ∈ [1, X]` with `f′(a) = ±1` by bisection on `g = f′ ∓ 1`.
///
/// `g` must change sign over `[1, X]`; otherwise the hypothesis of a unique
/// critical point fails and [`Error::NoCriticalPoint`] is returned.
pub fn solve_critical_point(spec: &FunctionSpec, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidSpec(format!("tolerance must be positive, got {tol}")));
    }
    let target = spec.sign_class().target_slope();
    let g = |y: f64| spec.derivative(y) - target;
    let (mut lo, mut hi) = (1.0, spec.x());
    let (g_lo, g_hi) = (g(lo), g(hi));
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    let no_bracket = || Error::NoCriticalPoint { x: spec.x(), target, g_lo, g_hi };
    if g_lo.is_nan() || g_hi.is_nan() || (g_lo > 0.0) == (g_hi > 0.0) {
        return Err(no_bracket());
    }
    let lo_positive = g_lo > 0.0;
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if (g_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = lo + (hi - lo) / 2.0;
    // An integer root only shows up as a bracket around it; ⌊a⌋ depends on
    // which side the midpoint falls, so take the integer when g vanishes there.
    let nearest = mid.round();
    if (nearest - mid).abs() <= tol && (1.0..=spec.x()).contains(&nearest) && g(nearest) == 0.0 {
        return Ok(nearest);
    }
    Ok(mid)
}

/// Estimate of `|S_f(X)|` plus, when computed, the exact count.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub x: f64,
    pub sign_class: SignClass,
    pub a: f64,
    pub formula_value: f64,
    pub exact_count: Option<u64>,
    /// `formula_value − exact_count`.
    pub discrepancy: Option<f64>,
}

/// The case formula for `spec`, without any `O(1)` term.
pub fn asymptotic_cardinality(spec: &FunctionSpec) -> Result<AsymptoticReport> {
    spec.validate()?;
    let a = solve_critical_point(spec, default_tolerance(spec))?;
    let x = spec.x();
    let x_floor = x.floor();
    let clamp = |y: f64| {
        if y > x_floor {
            log::warn!("{}: argument {y} past ⌊X⌋ = {x_floor}; clamped", spec.name());
            x_floor
        } else {
            y.max(1.0)
        }
    };
    let f = |y: f64| spec.value(y);
    let floor_a = clamp(a.floor());
    let floor_a1 = clamp((a + 1.0).floor());
    let formula_value = match spec.sign_class() {
        SignClass::DecConvex => f(floor_a1) - f(x_floor) + a,
        SignClass::DecConcave => f(1.0) - f(floor_a) + x - a,
        SignClass::IncConvex => f(floor_a) - f(1.0) + x - a,
        SignClass::IncConcave => f(x_floor) - f(floor_a1) + a,
    };
    Ok(AsymptoticReport { x, sign_class: spec.sign_class(), a, formula_value, exact_count: None, discrepancy: None })
}

/// [`asymptotic_cardinality`] with the exact count from [`enumerate_s_f`].
pub fn asymptotic_cardinality_with_exact(spec: &FunctionSpec, cap: u64) -> Result<AsymptoticReport> {
    let mut report = asymptotic_cardinality(spec)?;
    let exact = enumerate_s_f(spec, cap)?.len() as u64;
    report.exact_count = Some(exact);
    report.discrepancy = Some(report.formula_value - exact as f64);
    Ok(report)
}

/// `⌊f(n)⌋` for `n = 1..=⌊X⌋`, in order of `n`.
pub fn floor_sequence(spec: &FunctionSpec, cap: u64) -> Result<Vec<u64>> {
    let n_max = spec.x().floor() as u64;
    if n_max > cap {
        return Err(Error::CapExceeded { x: n_max, cap });
    }
    Ok((1..=n_max).map(|n| spec.floor_at(n)).collect())
}

/// The sorted distinct values of `⌊f(n)⌋`, `1 ≤ n ≤ X`.
pub fn enumerate_s_f(spec: &FunctionSpec, cap: u64) -> Result<Vec<u64>> {
    let mut values = floor_sequence(spec, cap)?;
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

/// A consecutive pair of floors that breaks the step behaviour on one side
/// of the critical point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepViolation {
    pub n: u64,
    pub steep: bool,
    pub floors: (u64, u64),
}

/// Checks the step behaviour of `floors` (as from [`floor_sequence`]) around
/// the critical point `a`: pairs on the steep side are strictly monotone in
/// the direction of `f`, pairs on the shallow side move by 0 or 1 in that
/// direction.
pub fn check_step_lemmas(class: SignClass, a: f64, floors: &[u64]) -> std::result::Result<(), StepViolation> {
    let n_max = floors.len() as u64;
    let floor_a = a.floor() as u64;
    let at = |n: u64| floors[(n - 1) as usize];
    // Signed step in the direction of monotonicity.
    let step = |n: u64| -> i128 {
        let (prev, next) = (i128::from(at(n)), i128::from(at(n + 1)));
        if class.is_decreasing() {
            prev - next
        } else {
            next - prev
        }
    };
    // Pair (n, n+1) lies below a when n + 1 ≤ ⌊a⌋, above it when n ≥ ⌊a⌋ + 1.
    let below = 1..floor_a.min(n_max);
    let above = (floor_a + 1)..n_max;
    let (steep, shallow) = if class.steep_below_critical() { (below, above) } else { (above, below) };
    for n in steep {
        if step(n) < 1 {
            return Err(StepViolation { n, steep: true, floors: (at(n), at(n + 1)) });
        }
    }
    for n in shallow {
        if !(0..=1).contains(&step(n)) {
            return Err(StepViolation { n, steep: false, floors: (at(n), at(n + 1)) });
        }
    }
    Ok(())
}
