//! Exact computation of integrals involving triplets of Jacobi and Gegenbauer
//! polynomials, and of the coupling coefficients (3j-symbols, isoscalar
//! factors) of SO(n), class-two U(n) and Sp(4) that those integrals encode.
//!
//! Everything is carried in exact arithmetic: arbitrary-precision rationals,
//! scalars of the form `rational * pi^(m/2)`, and finite sums of square roots
//! of rationals.  Each quantity of interest can be evaluated by several
//! independent series rearrangements plus a monomial-expansion oracle, and the
//! crate's test suites verify bit-exact agreement between all of them.

pub mod exact;
pub mod gegenbauer;
pub mod jacobi;
pub mod poly;
pub mod son;
pub mod sp4;
pub mod su2;
pub mod un;

pub use exact::{Label, PiScalar, PrecisionContext, Rational, SurdSum};
