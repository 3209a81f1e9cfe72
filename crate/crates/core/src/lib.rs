//! Exact and asymptotic cardinalities of floor-function sets.
//!
//! The crate covers three families of sets:
//!
//! * `S_t(X) = {⌊X/nᵗ⌋ : 1 ≤ n ≤ X}` for rational `t ≥ 1`, counted exactly in
//!   [`hyperbolic_sets`] with all floors and critical indices computed in
//!   exact integer arithmetic ([`exact_arith`]).
//! * `S_p(X) = {⌊X/p⌋ : p prime ≤ X}`, whose size equals the number of
//!   distinct exponents in the factorization of `X!` ([`prime_sets`]).
//! * `S_f(X) = {⌊f(n)⌋ : 1 ≤ n ≤ X}` for monotone `f` of fixed convexity,
//!   estimated around the point where `f′ = ±1` ([`general_sets`]).
//!
//! Every closed form has a brute-force enumeration next to it, and
//! [`verify`] runs the equivalence suites. [`prime_density`] measures how
//! many primes these sparse sets contain.

pub mod error;
pub mod exact_arith;
pub mod general_sets;
pub mod hyperbolic_sets;
pub mod primality;
pub mod prime_density;
pub mod prime_sets;
pub mod verify;

pub use error::{Error, Result};
pub use exact_arith::{CriticalIndex, RationalExponent};
pub use general_sets::{AsymptoticReport, FunctionSpec, Preset, SignClass};
pub use hyperbolic_sets::{CardinalityReport, EnumerationMode, FloorSetElements};
pub use prime_density::DensityReport;
pub use prime_sets::{PrimeTable, ValuationProfile};
