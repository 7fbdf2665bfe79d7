//! Correctly rounded decimal rendering of exact values.
//!
//! Values are bracketed by exact rational intervals (pi by a Machin-type
//! fixed-point expansion, square roots by integer square roots) and the
//! interval is refined until the rounded string is unambiguous.  Pure
//! rationals are rounded exactly.  Nonzero values never straddle zero
//! forever: distinct squarefree kernels are linearly independent over the
//! rationals, and pi is transcendental.

use std::cell::RefCell;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::{ExactError, PiScalar, Rational, Result, SurdSum};

/// Decimal rendering context: number of significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    /// At least 16 digits are required.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 16 {
            return Err(ExactError::Invalid(format!(
                "precision must be at least 16 digits, got {digits}"
            )));
        }
        Ok(PrecisionContext { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { digits: 64 }
    }
}

impl PrecisionContext {
    /// Render a pi-graded scalar.
    pub fn render_pi_scalar(&self, v: &PiScalar) -> String {
        self.render_surd(&SurdSum::from(v))
    }

    /// Render a surd sum.
    pub fn render_surd(&self, v: &SurdSum) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        if let Some(r) = v.as_rational() {
            return round_rational(&r, self.digits);
        }
        let mut work = self.digits as i64 + 24;
        loop {
            let (lo, hi) = surd_interval(v, work as usize);
            if let Some(text) = try_round_interval(&lo, &hi, self.digits) {
                return text;
            }
            work *= 2;
            assert!(work < 1 << 22, "decimal rendering failed to converge");
        }
    }
}

/// Sign of a structurally nonzero multi-term surd sum, by refinement.
pub(crate) fn surd_sum_signum(v: &SurdSum) -> i8 {
    let mut work = 40usize;
    loop {
        let (lo, hi) = surd_interval(v, work);
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        work *= 2;
        assert!(work < 1 << 22, "sign refinement failed to converge");
    }
}

/// `pi * 10^digits`, rounded down; cached per thread at the largest scale
/// computed so far.
fn pi_fixed(digits: usize) -> BigInt {
    thread_local! {
        static CACHE: RefCell<(usize, BigInt)> = RefCell::new((0, BigInt::zero()));
    }
    CACHE.with(|c| {
        let mut cache = c.borrow_mut();
        if cache.0 < digits {
            let scale = digits + 10;
            // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
            let unit = BigInt::from(10u32).pow(scale as u32);
            let pi = BigInt::from(16) * atan_inv_fixed(5, &unit)
                - BigInt::from(4) * atan_inv_fixed(239, &unit);
            *cache = (digits, pi / BigInt::from(10u32).pow(10));
        }
        let (have, ref pi) = *cache;
        pi / BigInt::from(10u32).pow((have - digits) as u32)
    })
}

/// `atan(1/x) * unit`, rounded down, by the alternating arctangent series.
fn atan_inv_fixed(x: u64, unit: &BigInt) -> BigInt {
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut term = unit / BigInt::from(x);
    let mut total = term.clone();
    let mut n = 1u64;
    while !term.is_zero() {
        term = &term / &xx;
        let piece = &term / BigInt::from(2 * n + 1);
        if piece.is_zero() {
            break;
        }
        if n % 2 == 1 {
            total -= piece;
        } else {
            total += piece;
        }
        n += 1;
    }
    total
}

/// Exact rational interval `[lo, hi]` enclosing pi at roughly `digits`
/// decimal digits.
fn pi_interval(digits: usize) -> (Rational, Rational) {
    let p = pi_fixed(digits);
    let unit = BigInt::from(10u32).pow(digits as u32);
    (
        Rational::new(p.clone() - 8i32, unit.clone()),
        Rational::new(p + 8i32, unit),
    )
}

/// Rational interval enclosing `sqrt(r)` for `r >= 0`.
fn sqrt_interval(r: &Rational, digits: usize) -> (Rational, Rational) {
    debug_assert!(!r.is_negative());
    let unit = BigUint::from(10u32).pow(digits as u32);
    let scaled = (r.numer().magnitude() * &unit * &unit) / r.denom().magnitude();
    let root = scaled.sqrt();
    let unit = BigInt::from(unit);
    (
        Rational::new(BigInt::from(root.clone()) - 2i32, unit.clone()),
        Rational::new(BigInt::from(root) + 2i32, unit),
    )
}

/// Rational interval enclosing the value of a surd sum.
fn surd_interval(v: &SurdSum, digits: usize) -> (Rational, Rational) {
    let (pi_lo, pi_hi) = pi_interval(digits + 8);
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (kernel, m, coeff) in v.terms() {
        let k = Rational::from_integer(BigInt::from(kernel.clone()));
        // radicand interval k * pi^m (k positive, pi interval positive)
        let (rad_lo, rad_hi) = if m == 0 {
            (k.clone(), k)
        } else if m > 0 {
            (&k * pow_rational(&pi_lo, m as u32), &k * pow_rational(&pi_hi, m as u32))
        } else {
            (
                &k / pow_rational(&pi_hi, (-m) as u32),
                &k / pow_rational(&pi_lo, (-m) as u32),
            )
        };
        let (s_lo, s_hi) = (
            sqrt_interval(&rad_lo, digits + 8).0,
            sqrt_interval(&rad_hi, digits + 8).1,
        );
        let s_lo = if s_lo.is_negative() { Rational::zero() } else { s_lo };
        if coeff.is_positive() {
            lo += coeff * &s_lo;
            hi += coeff * &s_hi;
        } else {
            lo += coeff * &s_hi;
            hi += coeff * &s_lo;
        }
    }
    (lo, hi)
}

fn pow_rational(r: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Decimal exponent `e` with `10^e <= v < 10^(e+1)` for positive `v`.
fn decimal_exponent(v: &Rational) -> i64 {
    debug_assert!(v.is_positive());
    let num_digits = v.numer().magnitude().to_string().len() as i64;
    let den_digits = v.denom().magnitude().to_string().len() as i64;
    let mut e = num_digits - den_digits; // within 1 of the truth
    let ten = Rational::from_integer(10.into());
    while *v >= pow10(e + 1) {
        e += 1;
    }
    while *v < pow10(e) {
        e -= 1;
    }
    let _ = ten;
    e
}

fn pow10(e: i64) -> Rational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Round a positive rational to `digits` significant digits, half away from
/// zero, returning the mantissa digits and the decimal exponent.
fn round_mantissa(v: &Rational, digits: u32) -> (BigUint, i64) {
    let mut e = decimal_exponent(v);
    let scaled = v * pow10(digits as i64 - 1 - e);
    // round half away from zero
    let twice = &scaled * Rational::from_integer(2.into());
    let floor2 = twice.floor().to_integer();
    let mantissa = (floor2 + BigInt::one()) / BigInt::from(2);
    let mut mantissa = mantissa.magnitude().clone();
    // rounding can carry over to one more digit (e.g. 9.99 -> 10.0)
    if mantissa.to_string().len() as u32 > digits {
        mantissa /= BigUint::from(10u32);
        e += 1;
    }
    (mantissa, e)
}

fn round_rational(r: &Rational, digits: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let (m, e) = round_mantissa(&r.abs(), digits);
    format_mantissa(r.is_negative(), &m, e, digits)
}

fn try_round_interval(lo: &Rational, hi: &Rational, digits: u32) -> Option<String> {
    if !lo.is_positive() && !hi.is_negative() {
        return None; // straddles zero; refine
    }
    let neg = hi.is_negative();
    let (alo, ahi) = if neg { (hi.abs(), lo.abs()) } else { (lo.abs(), hi.abs()) };
    let (mlo, elo) = round_mantissa(&alo, digits);
    let (mhi, ehi) = round_mantissa(&ahi, digits);
    if mlo == mhi && elo == ehi {
        Some(format_mantissa(neg, &mlo, elo, digits))
    } else {
        None
    }
}

fn format_mantissa(neg: bool, mantissa: &BigUint, e: i64, digits: u32) -> String {
    let digits = digits as i64;
    let mut s = mantissa.to_string();
    debug_assert_eq!(s.len() as i64, digits);
    let body = if (-6..=27).contains(&e) {
        if e >= digits - 1 {
            s.push_str(&"0".repeat((e - digits + 1) as usize));
            s
        } else if e >= 0 {
            format!("{}.{}", &s[..=(e as usize)], &s[(e as usize + 1)..])
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
        }
    } else {
        format!("{}.{}e{}", &s[..1], &s[1..], e)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, lab, surd_sqrt};

    #[test]
    fn sqrt_pi_sixteen_digits() {
        let ctx = PrecisionContext::new(16).unwrap();
        let v = crate::exact::gamma_half(half(1)).unwrap();
        assert_eq!(ctx.render_pi_scalar(&v), "1.772453850905516");
    }

    #[test]
    fn rational_rendering() {
        let ctx = PrecisionContext::new(16).unwrap();
        let v = PiScalar::from_rational(Rational::new(2.into(), 3.into()));
        assert_eq!(ctx.render_pi_scalar(&v), "0.6666666666666667");
        assert_eq!(ctx.render_pi_scalar(&PiScalar::zero()), "0");
        assert_eq!(
            ctx.render_pi_scalar(&PiScalar::from_int(14)),
            "14.00000000000000"
        );
    }

    #[test]
    fn default_is_64_digits() {
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.digits(), 64);
        let v = crate::exact::gamma_half(lab(3)).unwrap();
        assert!(ctx.render_pi_scalar(&v).starts_with("2.000000"));
    }

    #[test]
    fn minimum_digits_enforced() {
        assert!(PrecisionContext::new(15).is_err());
        assert!(PrecisionContext::new(16).is_ok());
    }

    #[test]
    fn mixed_surd_sum_value() {
        // sqrt(2) + sqrt(3) = 3.14626436994197234...
        let ctx = PrecisionContext::new(16).unwrap();
        let two = Rational::from_integer(2.into());
        let three = Rational::from_integer(3.into());
        let v = surd_sqrt(&two, false).unwrap().add(&surd_sqrt(&three, false).unwrap());
        assert_eq!(ctx.render_surd(&v), "3.146264369941972");
    }
}
