//! Sums of surds and the single-surd builder.
//!
//! A [`SurdSum`] is a finite sum `sum c * sqrt(k * pi^m)` with rational
//! coefficients, squarefree integer kernels and integer pi exponents inside
//! the radical.  Coupling-coefficient values always land on m in {0, 1}; the
//! signed exponent exists so that bare triangle-coefficient ratios (which can
//! carry `sqrt(pi)` powers) are still representable exactly.
//!
//! A [`SurdTerm`] is `sign * sqrt(rad * pi^p)` with `rad` kept in factored
//! form.  Prefactors of the coupling formulas (products and square roots of
//! factorials, gamma functions and powers of two) are accumulated there, so
//! kernel extraction at the end is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{
    gamma_half_cont, is_int, ExactError, Factored, Label, PiScalar, Rational, Result,
};

/// Exact value `sum_i c_i * sqrt(k_i * pi^(m_i))`, keyed by `(k_i, m_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: BTreeMap<(BigUint, i64), Rational>,
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn one() -> Self {
        SurdSum::from_rational(Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        let mut s = SurdSum::zero();
        s.add_term(c, BigUint::one(), 0);
        s
    }

    pub fn from_int(n: i64) -> Self {
        SurdSum::from_rational(Rational::from_integer(n.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct surd kernels.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The terms as `(kernel, pi exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, i64, &Rational)> {
        self.terms.iter().map(|((k, m), c)| (k, *m, c))
    }

    /// True iff no kernel carries a power of pi.
    pub fn is_pi_free(&self) -> bool {
        self.terms.keys().all(|(_, m)| *m == 0)
    }

    /// The single `(coefficient, kernel, pi)` triple, if the value has
    /// collapsed to one kernel (zero counts as collapsed).
    pub fn as_single(&self) -> Option<(Rational, BigUint, i64)> {
        match self.terms.len() {
            0 => Some((Rational::zero(), BigUint::one(), 0)),
            1 => {
                let ((k, m), c) = self.terms.iter().next().unwrap();
                Some((c.clone(), k.clone(), *m))
            }
            _ => None,
        }
    }

    /// The exact rational value, if the sum is a plain rational.
    pub fn as_rational(&self) -> Option<Rational> {
        let (c, k, m) = self.as_single()?;
        if k.is_one() && m == 0 {
            Some(c)
        } else {
            None
        }
    }

    pub fn add_term(&mut self, coeff: Rational, kernel: BigUint, pi: i64) {
        if coeff.is_zero() {
            return;
        }
        let key = (kernel, pi);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for ((k, m), c) in &other.terms {
            out.add_term(c.clone(), k.clone(), *m);
        }
        out
    }

    pub fn sub(&self, other: &SurdSum) -> SurdSum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SurdSum {
        let mut out = SurdSum::zero();
        for ((k, m), c) in &self.terms {
            out.add_term(-c.clone(), k.clone(), *m);
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> SurdSum {
        let mut out = SurdSum::zero();
        if r.is_zero() {
            return out;
        }
        for ((k, m), c) in &self.terms {
            out.add_term(c * r, k.clone(), *m);
        }
        out
    }

    pub fn mul(&self, other: &SurdSum) -> SurdSum {
        let mut out = SurdSum::zero();
        for ((k1, m1), c1) in &self.terms {
            for ((k2, m2), c2) in &other.terms {
                // k1, k2 squarefree: k1 k2 = g^2 * (k1/g)(k2/g) with g = gcd
                let g = k1.gcd(k2);
                let kernel = (k1 / &g) * (k2 / &g);
                let coeff = c1 * c2 * Rational::from_integer(BigInt::from(g));
                out.add_term(coeff, kernel, m1 + m2);
            }
        }
        out
    }

    pub fn square(&self) -> SurdSum {
        self.mul(self)
    }

    /// Sign of the value, determined exactly (interval refinement on the
    /// irrational part; surds with distinct kernels are linearly independent,
    /// so a nonzero sum of terms never needs infinite precision).
    pub fn signum(&self) -> i8 {
        if self.terms.is_empty() {
            return 0;
        }
        if self.terms.len() == 1 {
            let c = self.terms.values().next().unwrap();
            return if c.is_positive() { 1 } else { -1 };
        }
        // all same sign fast path
        if self.terms.values().all(|c| c.is_positive()) {
            return 1;
        }
        if self.terms.values().all(|c| c.is_negative()) {
            return -1;
        }
        super::decimal::surd_sum_signum(self)
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((kernel, m), coeff) in &self.terms {
            let neg = coeff.is_negative();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            let mag = coeff.abs();
            if kernel.is_one() && *m == 0 {
                write!(f, "{mag}")?;
            } else {
                // fold the coefficient into the radicand: |c| sqrt(k) = sqrt(c^2 k)
                let rad = &mag * &mag * Rational::from_integer(BigInt::from(kernel.clone()));
                write!(f, "sqrt({rad})")?;
                if *m != 0 {
                    write!(f, "*{}", pi_power_text(*m))?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl From<&PiScalar> for SurdSum {
    fn from(p: &PiScalar) -> Self {
        let mut s = SurdSum::zero();
        s.add_term(p.coeff().clone(), BigUint::one(), p.half_power());
        s
    }
}

/// Canonical text for `pi^(m/2)`: `pi^(1/2)`, `pi`, `pi^(3/2)`, `pi^2`,
/// `pi^(-1/2)`, `pi^-1`, ...
pub(crate) fn pi_power_text(m: i64) -> String {
    if m % 2 == 0 {
        let e = m / 2;
        if e == 1 {
            "pi".to_string()
        } else {
            format!("pi^{e}")
        }
    } else {
        format!("pi^({m}/2)")
    }
}

/// Single surd under construction.
///
/// Invariant: `value^2 = rad * pi^(pi2/2)` and `sign` is the sign of the
/// value.  `pi2` must end up even before extraction (an odd residue would
/// mean a quarter power of pi, which is outside every closure used here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdTerm {
    sign: i8,
    rad: Factored,
    pi2: i64,
}

impl SurdTerm {
    pub fn one() -> Self {
        SurdTerm { sign: 1, rad: Factored::one(), pi2: 0 }
    }

    pub fn zero() -> Self {
        SurdTerm { sign: 0, rad: Factored::one(), pi2: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn negate(&mut self) {
        self.sign = -self.sign;
    }

    /// Multiply the value by `(-1)^e` for an integer exponent label.
    pub fn mul_phase(&mut self, e: Label) -> Result<()> {
        let s = super::gamma::parity_sign(e)?;
        self.sign *= s;
        Ok(())
    }

    /// Multiply the value by `f^e` (value-level, not under the radical).
    pub fn mul_value_factored(&mut self, f: &Factored, e: i64) {
        self.rad.mul(f, 2 * e);
    }

    /// Multiply the value by `sqrt(f)^e`.
    pub fn mul_sqrt_factored(&mut self, f: &Factored, e: i64) {
        self.rad.mul(f, e);
    }

    /// Multiply the value by `n^e` for a positive integer `n`.
    pub fn mul_value_int(&mut self, n: u64, e: i64) {
        self.rad.mul_u64(n, 2 * e);
    }

    /// Multiply the value by `sqrt(n)^e`.
    pub fn mul_sqrt_int(&mut self, n: u64, e: i64) {
        self.rad.mul_u64(n, e);
    }

    /// Multiply the value by `pi^(m/2)`.
    pub fn mul_pi_half(&mut self, m: i64) {
        self.pi2 += 2 * m;
    }

    /// Multiply the value by `Gamma(x)^e` at a half-integer argument.
    pub fn mul_value_gamma(&mut self, x: Label, e: i64) -> Result<()> {
        self.mul_gamma_halves(x, 2 * e)
    }

    /// Multiply the value by `Gamma(x)^(e/2)`.
    pub fn mul_sqrt_gamma(&mut self, x: Label, e: i64) -> Result<()> {
        self.mul_gamma_halves(x, e)
    }

    /// Multiply the value by `x!^e` (i.e. `Gamma(x+1)^e`).
    pub fn mul_value_fact(&mut self, x: Label, e: i64) -> Result<()> {
        self.mul_gamma_halves(x + Label::one(), 2 * e)
    }

    /// Multiply the value by `sqrt(x!)^e`.
    pub fn mul_sqrt_fact(&mut self, x: Label, e: i64) -> Result<()> {
        self.mul_gamma_halves(x + Label::one(), e)
    }

    /// Multiply the value by a rational whose factorization is known small.
    pub fn mul_value_rational_small(&mut self, r: &Rational) -> Result<()> {
        if r.is_zero() {
            self.sign = 0;
            return Ok(());
        }
        if r.is_negative() {
            self.sign = -self.sign;
        }
        let f = Factored::try_from_rational(&r.abs())?;
        self.mul_value_factored(&f, 1);
        Ok(())
    }

    fn mul_gamma_halves(&mut self, x: Label, halves: i64) -> Result<()> {
        if halves == 0 {
            return Ok(());
        }
        let val = gamma_half_cont(x).ok_or(ExactError::BadGammaArgument(x))?;
        let sgn = super::gamma::rational_signum(val.coeff());
        if sgn < 0 {
            if halves % 2 != 0 {
                // square root of a negative gamma value
                return Err(ExactError::BadGammaArgument(x));
            }
            if (halves / 2) % 2 != 0 {
                self.sign = -self.sign;
            }
        }
        let f = gamma_factored(x)?;
        self.rad.mul(&f, halves);
        self.pi2 += halves * val.half_power();
        Ok(())
    }

    /// Finish: extract the square part of the radicand.
    ///
    /// Panics if a quarter power of pi is left; every formula assembled here
    /// keeps the total pi exponent on the half-integer grid.
    pub fn to_surd(&self) -> SurdSum {
        if self.sign == 0 {
            return SurdSum::zero();
        }
        assert!(self.pi2 % 2 == 0, "quarter power of pi in surd term");
        let (outer, kernel) = self.rad.sqrt_parts();
        let c = if self.sign < 0 { -outer } else { outer };
        let mut s = SurdSum::zero();
        s.add_term(c, kernel, self.pi2 / 2);
        s
    }

    /// Finish against a pi-graded factor: value `self * p`.
    pub fn to_surd_times(&self, p: &PiScalar) -> SurdSum {
        if self.sign == 0 || p.is_zero() {
            return SurdSum::zero();
        }
        assert!(self.pi2 % 2 == 0, "quarter power of pi in surd term");
        let (outer, kernel) = self.rad.sqrt_parts();
        let mut c = outer * p.coeff();
        if self.sign < 0 {
            c = -c;
        }
        let mut s = SurdSum::zero();
        s.add_term(c, kernel, self.pi2 / 2 + p.half_power());
        s
    }

    pub fn mul(&self, other: &SurdTerm) -> SurdTerm {
        let mut out = self.clone();
        out.sign *= other.sign;
        out.rad.mul(&other.rad, 1);
        out.pi2 += other.pi2;
        out
    }

    /// Invert the value (`1 / self`); errors on zero.
    pub fn invert(&self) -> Result<SurdTerm> {
        if self.sign == 0 {
            return Err(ExactError::Invalid("cannot invert zero".into()));
        }
        let mut rad = Factored::one();
        rad.mul(&self.rad, -1);
        Ok(SurdTerm { sign: self.sign, rad, pi2: -self.pi2 })
    }
}

/// Factored magnitude of `Gamma(x)` at a half-integer argument.
fn gamma_factored(x: Label) -> Result<Factored> {
    if is_int(x) {
        let n = super::as_int(x);
        if n <= 0 {
            return Err(ExactError::BadGammaArgument(x));
        }
        return Ok(Factored::factorial((n - 1) as u64));
    }
    if *x.denom() != 2 {
        return Err(ExactError::BadGammaArgument(x));
    }
    let k = (*x.numer() - 1) / 2;
    let mut f = Factored::one();
    if k >= 0 {
        // (2k)! / (4^k k!)
        let k = k as u64;
        f.mul(&Factored::factorial(2 * k), 1);
        f.mul(&Factored::factorial(k), -1);
        f.mul_prime(2, -2 * k as i64);
    } else {
        let k = (-k) as u64;
        // |Gamma(1/2 - k)| = 4^k k! / (2k)!
        f.mul(&Factored::factorial(k), 1);
        f.mul(&Factored::factorial(2 * k), -1);
        f.mul_prime(2, 2 * k as i64);
    }
    Ok(f)
}

/// Exact square root of a nonnegative rational, optionally times pi:
/// returns the single-term surd `c sqrt(k pi^flag)` with `(c sqrt(k))^2 = v`.
pub fn surd_sqrt(v: &Rational, pi_inside: bool) -> Result<SurdSum> {
    if v.is_negative() {
        return Err(ExactError::NegativeRadicand);
    }
    if v.is_zero() {
        return Ok(SurdSum::zero());
    }
    let f = Factored::try_from_rational(v)?;
    let (outer, kernel) = f.sqrt_parts();
    let mut s = SurdSum::zero();
    s.add_term(outer, kernel, i64::from(pi_inside));
    Ok(s)
}

/// Parse the canonical exact-value grammar produced by `Display`:
/// terms `[+|-] (rational | sqrt(p/q)) [*pi^e]` with `e` an integer or
/// `(m/2)`.
pub fn parse_exact(text: &str) -> Result<SurdSum> {
    let text = text.trim();
    if text == "0" {
        return Ok(SurdSum::zero());
    }
    let bad = |m: &str| ExactError::Invalid(format!("parse error in {text:?}: {m}"));
    let mut out = SurdSum::zero();
    let mut rest = text;
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    while !rest.is_empty() {
        let end = rest
            .char_indices()
            .skip(1)
            .find(|(i, c)| (*c == '+' || *c == '-') && !rest[..*i].ends_with("^("))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        parse_term(term, sign, &mut out).map_err(|_| bad("bad term"))?;
        rest = tail;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            sign = 1;
            rest = r;
        }
    }
    Ok(out)
}

fn parse_term(term: &str, sign: i64, out: &mut SurdSum) -> Result<()> {
    let bad = || ExactError::Invalid(format!("bad term {term:?}"));
    let (mag, pi_m) = match term.split_once("*pi") {
        None => (term, 0i64),
        Some((mag, exp)) => {
            let m = if exp.is_empty() {
                2
            } else if let Some(e) = exp.strip_prefix("^(") {
                let e = e.strip_suffix(')').ok_or_else(bad)?;
                let (n, d) = e.split_once('/').ok_or_else(bad)?;
                if d != "2" {
                    return Err(bad());
                }
                n.parse::<i64>().map_err(|_| bad())?
            } else if let Some(e) = exp.strip_prefix('^') {
                2 * e.parse::<i64>().map_err(|_| bad())?
            } else {
                return Err(bad());
            };
            (mag, m)
        }
    };
    let signr = Rational::from_integer(sign.into());
    if let Some(inner) = mag.strip_prefix("sqrt(") {
        let inner = inner.strip_suffix(')').ok_or_else(bad)?;
        let rad: Rational = inner.parse().map_err(|_| bad())?;
        let single = surd_sqrt(&rad, false)?;
        for (k, _, c) in single.terms() {
            out.add_term(c * &signr, k.clone(), pi_m);
        }
    } else {
        let c: Rational = mag.parse().map_err(|_| bad())?;
        out.add_term(c * signr, BigUint::one(), pi_m);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, lab};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn surd_sqrt_examples() {
        // sqrt(4/9) = 2/3
        let s = surd_sqrt(&rat(4, 9), false).unwrap();
        assert_eq!(s.as_rational().unwrap(), rat(2, 3));
        // sqrt(8) = 2 sqrt(2)
        let s = surd_sqrt(&rat(8, 1), false).unwrap();
        let (c, k, m) = s.as_single().unwrap();
        assert_eq!((c, k, m), (rat(2, 1), BigUint::from(2u32), 0));
        // sqrt(3/2) = (1/2) sqrt(6)
        let s = surd_sqrt(&rat(3, 2), false).unwrap();
        let (c, k, _) = s.as_single().unwrap();
        assert_eq!((c, k), (rat(1, 2), BigUint::from(6u32)));
    }

    #[test]
    fn squares_multiply_like_rationals() {
        let a = surd_sqrt(&rat(27, 4), false).unwrap();
        let b = surd_sqrt(&rat(50, 3), false).unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.square().as_rational().unwrap(), rat(27 * 50, 12));
    }

    #[test]
    fn builder_matches_direct_sqrt() {
        // sqrt(5!) / Gamma(7/2) * pi^(1/2)
        let mut t = SurdTerm::one();
        t.mul_sqrt_fact(lab(5), 1).unwrap();
        t.mul_value_gamma(half(7), -1).unwrap();
        t.mul_pi_half(1);
        let s = t.to_surd();
        // Gamma(7/2) = 15/8 sqrt(pi); value = sqrt(120) * 8/(15 sqrt(pi)) * sqrt(pi)
        // = (16/15) sqrt(30) ... pi cancels entirely
        let (c, k, m) = s.as_single().unwrap();
        assert_eq!(m, 0);
        assert_eq!(k, BigUint::from(30u32));
        assert_eq!(c, rat(16, 15));
    }

    #[test]
    fn negative_gamma_flips_sign() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let mut t = SurdTerm::one();
        t.mul_value_gamma(half(-1), 1).unwrap();
        let s = t.to_surd();
        let (c, k, m) = s.as_single().unwrap();
        assert_eq!((c, k, m), (rat(-2, 1), BigUint::one(), 1));
    }

    #[test]
    fn rendering_and_parsing_round_trip() {
        let mut s = SurdSum::zero();
        s.add_term(rat(-1, 3), BigUint::from(3u32), 0);
        assert_eq!(s.to_string(), "-sqrt(1/3)");
        assert_eq!(parse_exact("-sqrt(1/3)").unwrap(), s);

        let mut s = SurdSum::from_rational(rat(1, 3));
        s.add_term(rat(2, 1), BigUint::from(5u32), 1);
        let text = s.to_string();
        assert_eq!(text, "1/3+sqrt(20)*pi^(1/2)");
        assert_eq!(parse_exact(&text).unwrap(), s);

        let p = PiScalar::new(rat(3, 4), 2);
        let s = SurdSum::from(&p);
        assert_eq!(s.to_string(), "sqrt(9/16)*pi");
        assert_eq!(parse_exact("sqrt(9/16)*pi").unwrap(), s);

        assert_eq!(parse_exact("0").unwrap(), SurdSum::zero());
        assert_eq!(SurdSum::from_int(14).to_string(), "14");
    }

    #[test]
    fn signum_with_mixed_terms() {
        // sqrt(2) - 7/5 > 0, sqrt(2) - 3/2 < 0
        let mut a = SurdSum::from_rational(rat(-7, 5));
        a.add_term(rat(1, 1), BigUint::from(2u32), 0);
        assert_eq!(a.signum(), 1);
        let mut b = SurdSum::from_rational(rat(-3, 2));
        b.add_term(rat(1, 1), BigUint::from(2u32), 0);
        assert_eq!(b.signum(), -1);
    }
}
