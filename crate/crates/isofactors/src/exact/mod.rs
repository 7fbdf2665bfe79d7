//! Exact arithmetic kernel.
//!
//! Provides:
//! - [`Label`]: small exact fractions used for degrees, superscripts and
//!   group-chain labels (integers, halves and quarters all occur),
//! - [`Factored`]: positive rationals kept as prime-exponent maps, so that
//!   square roots of factorial-built values are exact,
//! - [`PiScalar`]: scalars of the form `rational * pi^(m/2)`, the closure
//!   class of beta/gamma evaluations at half-integer arguments,
//! - [`SurdSum`]: finite sums `sum_i c_i * sqrt(k_i * pi^(m_i))` with
//!   squarefree kernels, the closure class of coupling-coefficient values,
//! - [`SurdTerm`]: a builder for single surd factors assembled from
//!   factorials and gamma functions,
//! - gamma/beta/Pochhammer/binomial primitives and decimal rendering.

mod decimal;
mod factored;
mod gamma;
mod surd;

pub use decimal::PrecisionContext;
pub use factored::Factored;
pub use gamma::{
    beta_cont, beta_half, binomial_general, binomial_nonneg, factorial_big, floor_label,
    gamma_half, gamma_half_cont, inv_factorial_int, label_to_rational, parity_sign, pochhammer,
    pochhammer_label, rational_signum, PiScalar,
};
pub use surd::{parse_exact, surd_sqrt, SurdSum, SurdTerm};

use num_rational::Rational64;
use thiserror::Error;

/// Arbitrary-precision rational, the coefficient domain of all exact values.
pub type Rational = num_rational::BigRational;

/// Small exact fraction used for degrees, polynomial parameters and
/// group-chain labels.  Half-integers are the common case; quarter-integers
/// occur for Sp(4) labels reached by analytic continuation.
pub type Label = Rational64;

/// Shorthand for an integer label.
pub fn lab(n: i64) -> Label {
    Label::from_integer(n)
}

/// Shorthand for the label `num/den`.
pub fn labq(num: i64, den: i64) -> Label {
    Label::new(num, den)
}

/// Shorthand for the half-integer label `n/2`.
pub fn half(n: i64) -> Label {
    Label::new(n, 2)
}

/// True iff `x` is an integer.
pub fn is_int(x: Label) -> bool {
    x.is_integer()
}

/// True iff `x` is a nonnegative integer.
pub fn is_nonneg_int(x: Label) -> bool {
    x.is_integer() && *x.numer() >= 0
}

/// `x` as an `i64`, panicking if it is not an integer.
pub fn as_int(x: Label) -> i64 {
    assert!(x.is_integer(), "label {x} is not an integer");
    *x.numer()
}

/// True iff `2x` is an integer (i.e. `x` lies on the half-integer grid).
pub fn is_half_int(x: Label) -> bool {
    *x.denom() <= 2
}

/// Errors raised by the exact kernel and the layers above it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("pi-grade mismatch in addition: {0} vs {1}")]
    GradeMismatch(i64, i64),
    #[error("gamma/factorial argument {0} is not admissible here")]
    BadGammaArgument(Label),
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("radicand has a factor that cannot be factored exactly")]
    UnfactorableRadicand,
    #[error("value left the surd closure (pi^{0} remained outside the radical)")]
    PiOutsideClosure(i64),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ExactError>;
