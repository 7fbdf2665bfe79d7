//! Pi-graded scalars and the gamma/beta/Pochhammer/binomial primitives.
//!
//! Every gamma value at a half-integer argument is `rational * pi^(m/2)` with
//! m in {0,1}; products and beta functions stay inside the grading.  Series
//! over a fixed parameter set shift gamma arguments by integers only, so all
//! their terms share one grade and exact addition is always legal.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{as_int, is_int, ExactError, Label, Rational, Result};

/// Exact scalar `coeff * pi^(half_power/2)`.
///
/// The canonical zero has `half_power == 0`.  Addition is defined only inside
/// one grade; multiplication adds grades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiScalar {
    coeff: Rational,
    half_power: i64,
}

impl PiScalar {
    pub fn new(coeff: Rational, half_power: i64) -> Self {
        if coeff.is_zero() {
            PiScalar::zero()
        } else {
            PiScalar { coeff, half_power }
        }
    }

    pub fn zero() -> Self {
        PiScalar { coeff: Rational::zero(), half_power: 0 }
    }

    pub fn one() -> Self {
        PiScalar { coeff: Rational::one(), half_power: 0 }
    }

    pub fn from_rational(r: Rational) -> Self {
        PiScalar::new(r, 0)
    }

    pub fn from_int(n: i64) -> Self {
        PiScalar::from_rational(Rational::from_integer(n.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    /// Exponent m of `pi^(m/2)`.
    pub fn half_power(&self) -> i64 {
        self.half_power
    }

    /// True iff the value is a plain rational.
    pub fn is_rational(&self) -> bool {
        self.half_power == 0
    }

    pub fn mul(&self, other: &PiScalar) -> PiScalar {
        PiScalar::new(&self.coeff * &other.coeff, self.half_power + other.half_power)
    }

    pub fn mul_rational(&self, r: &Rational) -> PiScalar {
        PiScalar::new(&self.coeff * r, self.half_power)
    }

    pub fn div(&self, other: &PiScalar) -> Result<PiScalar> {
        if other.is_zero() {
            return Err(ExactError::Invalid("division by zero".into()));
        }
        Ok(PiScalar::new(&self.coeff / &other.coeff, self.half_power - other.half_power))
    }

    pub fn neg(&self) -> PiScalar {
        PiScalar::new(-self.coeff.clone(), self.half_power)
    }

    /// Exact addition; errors on a grade mismatch between nonzero values.
    pub fn add(&self, other: &PiScalar) -> Result<PiScalar> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.half_power != other.half_power {
            return Err(ExactError::GradeMismatch(self.half_power, other.half_power));
        }
        Ok(PiScalar::new(&self.coeff + &other.coeff, self.half_power))
    }

    pub fn sub(&self, other: &PiScalar) -> Result<PiScalar> {
        self.add(&other.neg())
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.coeff)?;
        if self.half_power != 0 {
            write!(f, "*{}", super::surd::pi_power_text(self.half_power))?;
        }
        Ok(())
    }
}

/// `n!` as a big integer, cached per thread.
pub fn factorial_big(n: u64) -> BigInt {
    thread_local! {
        static CACHE: RefCell<Vec<BigInt>> = RefCell::new(vec![BigInt::one()]);
    }
    CACHE.with(|c| {
        let mut cache = c.borrow_mut();
        while (cache.len() as u64) <= n {
            let k = cache.len() as u64;
            let next = cache.last().unwrap() * BigInt::from(k);
            cache.push(next);
        }
        cache[n as usize].clone()
    })
}

/// Gamma at a positive half-integer: integer argument gives grade 0,
/// half-odd argument gives grade 1.
pub fn gamma_half(x: Label) -> Result<PiScalar> {
    if *x.numer() <= 0 || *x.denom() > 2 {
        return Err(ExactError::BadGammaArgument(x));
    }
    Ok(gamma_half_cont(x).expect("positive arguments have no pole"))
}

/// Gamma continued to the whole half-integer grid; `None` at the poles
/// (nonpositive integers).
pub fn gamma_half_cont(x: Label) -> Option<PiScalar> {
    if *x.denom() > 2 {
        return None;
    }
    if is_int(x) {
        let n = as_int(x);
        if n <= 0 {
            return None;
        }
        return Some(PiScalar::from_rational(Rational::from_integer(factorial_big(
            (n - 1) as u64,
        ))));
    }
    // x = k + 1/2 for integer k (possibly negative)
    let k = (*x.numer() - 1) / 2;
    if k >= 0 {
        let k = k as u64;
        // Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
        let num = factorial_big(2 * k);
        let den = factorial_big(k) * BigInt::from(4u32).pow(k as u32);
        Some(PiScalar::new(Rational::new(num, den), 1))
    } else {
        let k = (-k) as u64;
        // Gamma(1/2 - k) = (-4)^k k! / (2k)! sqrt(pi)
        let num = factorial_big(k) * BigInt::from(4u32).pow(k as u32);
        let mut r = Rational::new(num, factorial_big(2 * k));
        if k % 2 == 1 {
            r = -r;
        }
        Some(PiScalar::new(r, 1))
    }
}

/// Beta function `B(x, y) = Gamma(x) Gamma(y) / Gamma(x+y)` at positive
/// half-integers.  Cached per thread.
pub fn beta_half(x: Label, y: Label) -> Result<PiScalar> {
    if *x.numer() <= 0 || *y.numer() <= 0 {
        return Err(ExactError::BadGammaArgument(if *x.numer() <= 0 { x } else { y }));
    }
    beta_cont(x, y).ok_or(ExactError::BadGammaArgument(x))
}

/// Beta function continued to half-integer arguments of any sign.
///
/// Pole bookkeeping: a pole of `Gamma(x+y)` alone gives 0; a pole of
/// `Gamma(x)` or `Gamma(y)` cancels against a pole of `Gamma(x+y)` via
/// `lim Gamma(-m+e)/Gamma(-m'+e) = (-1)^(m-m') m'!/m!`; an uncancelled pole
/// in the numerator has no finite value and yields `None`.
pub fn beta_cont(x: Label, y: Label) -> Option<PiScalar> {
    thread_local! {
        static CACHE: RefCell<HashMap<(i64, i64), Option<PiScalar>>> =
            RefCell::new(HashMap::new());
    }
    let key = (
        *x.numer() * (2 / *x.denom()),
        *y.numer() * (2 / *y.denom()),
    );
    if *x.denom() > 2 || *y.denom() > 2 {
        return None;
    }
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let val = beta_cont_uncached(x, y);
    CACHE.with(|c| c.borrow_mut().insert(key, val.clone()));
    val
}

fn beta_cont_uncached(x: Label, y: Label) -> Option<PiScalar> {
    let s = x + y;
    let gx = gamma_half_cont(x);
    let gy = gamma_half_cont(y);
    let gs = gamma_half_cont(s);
    match (gx, gy, gs) {
        (Some(gx), Some(gy), Some(gs)) => Some(gx.mul(&gy).div(&gs).ok()?),
        (Some(_), Some(_), None) => Some(PiScalar::zero()),
        (None, Some(gy), None) => {
            // Gamma(x)/Gamma(s) with both at poles -m, -m'
            let m = -as_int(x);
            let mp = -as_int(s);
            if mp < 0 {
                return None;
            }
            let mut r = Rational::new(factorial_big(mp as u64), factorial_big(m as u64));
            if (m - mp) % 2 != 0 {
                r = -r;
            }
            Some(gy.mul_rational(&r))
        }
        (Some(gx), None, None) => {
            let m = -as_int(y);
            let mp = -as_int(s);
            if mp < 0 {
                return None;
            }
            let mut r = Rational::new(factorial_big(mp as u64), factorial_big(m as u64));
            if (m - mp) % 2 != 0 {
                r = -r;
            }
            Some(gx.mul_rational(&r))
        }
        // a pole in x or y that Gamma(x+y) does not absorb, or two poles
        // against one: no finite continuation
        _ => None,
    }
}

/// Rising factorial `(c)_k = c (c+1) ... (c+k-1)`; `(c)_0 = 1`.
pub fn pochhammer(c: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut t = c.clone();
    for _ in 0..k {
        acc *= &t;
        t += Rational::one();
    }
    acc
}

/// Rising factorial of a small exact fraction.
pub fn pochhammer_label(c: Label, k: u64) -> Rational {
    pochhammer(&label_to_rational(c), k)
}

/// Convert a label to an arbitrary-precision rational.
pub fn label_to_rational(x: Label) -> Rational {
    Rational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Binomial coefficient with nonnegative integer arguments; 0 when `k > n`.
pub fn binomial_nonneg(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial_big(n) / (factorial_big(k) * factorial_big(n - k))
}

/// Generalized binomial coefficient over the integers:
/// 0 for `bottom < 0`, the standard value for `top >= bottom >= 0`
/// (including 0 for `0 <= top < bottom`), and
/// `(-1)^bottom C(bottom-top-1, bottom)` for `top < 0 <= bottom`.
pub fn binomial_general(top: i64, bottom: i64) -> BigInt {
    if bottom < 0 {
        return BigInt::zero();
    }
    if top >= 0 {
        binomial_nonneg(top as u64, bottom as u64)
    } else {
        let v = binomial_nonneg((bottom - top - 1) as u64, bottom as u64);
        if bottom % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

/// Reciprocal factorial `1/x!` for an integer label: zero for negative
/// integers, `None` if the label is not an integer.
pub fn inv_factorial_int(x: Label) -> Option<Rational> {
    if !is_int(x) {
        return None;
    }
    let n = as_int(x);
    if n < 0 {
        Some(Rational::zero())
    } else {
        Some(Rational::new(BigInt::one(), factorial_big(n as u64)))
    }
}

/// Signum of a rational as -1, 0, 1.
pub fn rational_signum(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// `(-1)^e` for an integer label exponent; errors if `e` is fractional.
pub fn parity_sign(e: Label) -> Result<i8> {
    if !is_int(e) {
        return Err(ExactError::Invalid(format!("phase exponent {e} is not an integer")));
    }
    Ok(if as_int(e).rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Integer part helper: largest integer `<= x`.
pub fn floor_label(x: Label) -> i64 {
    num_integer::Integer::div_floor(x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, lab};

    #[test]
    fn gamma_defining_cases() {
        // Gamma(1/2) = sqrt(pi)
        assert_eq!(gamma_half(half(1)).unwrap(), PiScalar::new(Rational::one(), 1));
        // Gamma(3) = 2
        assert_eq!(gamma_half(lab(3)).unwrap(), PiScalar::from_int(2));
        // Gamma(5/2) = 3/4 sqrt(pi)
        assert_eq!(
            gamma_half(half(5)).unwrap(),
            PiScalar::new(Rational::new(3.into(), 4.into()), 1)
        );
    }

    #[test]
    fn gamma_recursion_holds_on_negative_half_grid() {
        // Gamma(x+1) = x Gamma(x) for x = -5/2 .. 5/2
        for n in (-5..=5).step_by(2) {
            let x = half(n);
            let left = gamma_half_cont(x + lab(1)).unwrap();
            let right = gamma_half_cont(x).unwrap().mul_rational(&label_to_rational(x));
            assert_eq!(left, right, "x = {x}");
        }
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_half(lab(1), lab(1)).unwrap(), PiScalar::one());
        // B(1/2, 1/2) = pi
        assert_eq!(beta_half(half(1), half(1)).unwrap(), PiScalar::new(Rational::one(), 2));
        // B(2, 3) = 1/12
        assert_eq!(
            beta_half(lab(2), lab(3)).unwrap(),
            PiScalar::from_rational(Rational::new(1.into(), 12.into()))
        );
    }

    #[test]
    fn beta_continuation_pole_cases() {
        // B(x, y) -> 0 when only Gamma(x+y) has a pole
        assert_eq!(beta_cont(half(1), half(-1)).unwrap(), PiScalar::zero());
        // B(2, y) = 1/(y(y+1)) continues to y = -3
        assert_eq!(
            beta_cont(lab(2), lab(-3)).unwrap(),
            PiScalar::from_rational(Rational::new(1.into(), 6.into()))
        );
        // B(1, y) = 1/y continues to y = -1
        assert_eq!(beta_cont(lab(1), lab(-1)).unwrap(), PiScalar::from_int(-1));
        // B(2, -1): the Gamma(-1) pole is not absorbed by Gamma(1)
        assert!(beta_cont(lab(2), lab(-1)).is_none());
        // B(-1, -1): double pole against single: no finite value
        assert!(beta_cont(lab(-1), lab(-1)).is_none());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_label(lab(5), 0), Rational::one());
        assert_eq!(pochhammer_label(lab(1), 4), Rational::from_integer(24.into()));
        assert_eq!(pochhammer_label(lab(-3), 5), Rational::zero());
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial_general(5, 2), BigInt::from(10));
        assert_eq!(binomial_general(3, -1), BigInt::zero());
        assert_eq!(binomial_general(-2, 3), BigInt::from(-4));
        assert_eq!(binomial_general(2, 3), BigInt::zero());
    }

    #[test]
    fn grade_mismatch_is_an_error() {
        let a = PiScalar::new(Rational::one(), 1);
        let b = PiScalar::one();
        assert!(matches!(a.add(&b), Err(ExactError::GradeMismatch(1, 0))));
        assert_eq!(a.add(&PiScalar::zero()).unwrap(), a);
    }
}
