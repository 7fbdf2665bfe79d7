//! Positive rationals as prime-exponent maps.
//!
//! Values built from factorials and powers of small integers stay factored,
//! so extracting the square part of a radicand is exact division of exponents
//! by two and never requires factoring a huge integer.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::{ExactError, Rational, Result};

/// A positive rational number `prod_p p^(e_p)` with signed integer exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factored {
    exps: BTreeMap<u64, i64>,
}

impl Factored {
    pub fn one() -> Self {
        Factored::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Multiply by `p^e` for a prime `p`.
    pub fn mul_prime(&mut self, p: u64, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.exps.entry(p).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&p);
        }
    }

    /// Multiply by `other^e`.
    pub fn mul(&mut self, other: &Factored, e: i64) {
        if e == 0 {
            return;
        }
        for (&p, &k) in &other.exps {
            self.mul_prime(p, k * e);
        }
    }

    /// Factor a positive integer by trial division.
    pub fn from_u64(mut n: u64) -> Self {
        assert!(n > 0, "cannot factor zero");
        let mut f = Factored::one();
        let mut p = 2u64;
        while p * p <= n {
            while n % p == 0 {
                f.mul_prime(p, 1);
                n /= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            f.mul_prime(n, 1);
        }
        f
    }

    /// Multiply by `n^e` for a positive integer `n`.
    pub fn mul_u64(&mut self, n: u64, e: i64) {
        self.mul(&Factored::from_u64(n), e);
    }

    /// `n!` as a factored value.  Cached per thread.
    pub fn factorial(n: u64) -> Self {
        thread_local! {
            static CACHE: RefCell<Vec<Factored>> = RefCell::new(vec![Factored::one()]);
        }
        CACHE.with(|c| {
            let mut cache = c.borrow_mut();
            while (cache.len() as u64) <= n {
                let k = cache.len() as u64;
                let mut next = cache.last().unwrap().clone();
                next.mul_u64(k, 1);
                cache.push(next);
            }
            cache[n as usize].clone()
        })
    }

    /// Factor an exact positive rational by trial division of numerator and
    /// denominator.  Fails if a residual factor above the trial bound is left
    /// that is not a perfect square.
    pub fn try_from_rational(r: &Rational) -> Result<Self> {
        if r.numer().sign() != num_bigint::Sign::Plus {
            return Err(ExactError::Invalid(format!("{r} is not positive")));
        }
        let mut f = Factored::one();
        for (part, sign) in [(r.numer(), 1i64), (r.denom(), -1i64)] {
            let mut n = part.magnitude().clone();
            let mut p = 2u64;
            // trial division; the bound covers everything factorial-built
            while BigUint::from(p) * BigUint::from(p) <= n {
                if p > 1_000_000 {
                    break;
                }
                while (&n % p).is_zero_ext() {
                    f.mul_prime(p, sign);
                    n /= p;
                }
                p += if p == 2 { 1 } else { 2 };
            }
            if !n.is_one() {
                // accept a leftover perfect square or a leftover prime
                let root = n.sqrt();
                if &root * &root == n {
                    let root_f = Factored::try_from_biguint_small(&root)?;
                    f.mul(&root_f, 2 * sign);
                } else if is_probable_prime(&n) {
                    let p64 = u64::try_from(&n)
                        .map_err(|_| ExactError::UnfactorableRadicand)?;
                    f.mul_prime(p64, sign);
                } else {
                    return Err(ExactError::UnfactorableRadicand);
                }
            }
        }
        Ok(f)
    }

    fn try_from_biguint_small(n: &BigUint) -> Result<Self> {
        let v = u64::try_from(n).map_err(|_| ExactError::UnfactorableRadicand)?;
        Ok(Factored::from_u64(v))
    }

    /// The exact rational this value denotes.
    pub fn to_rational(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&p, &e) in &self.exps {
            let pw = BigInt::from(p).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        Rational::new(num, den)
    }

    /// Split the square root: returns `(c, k)` with `sqrt(self) = c * sqrt(k)`,
    /// `c` rational and `k` a squarefree positive integer.
    pub fn sqrt_parts(&self) -> (Rational, BigUint) {
        let mut outer_num = BigInt::one();
        let mut outer_den = BigInt::one();
        let mut kernel = BigUint::one();
        for (&p, &e) in &self.exps {
            let odd = e.rem_euclid(2);
            let half = (e - odd) / 2; // floor division keeps p^odd with odd >= 0
            let pw = BigInt::from(p).pow(half.unsigned_abs() as u32);
            if half >= 0 {
                outer_num *= pw;
            } else {
                outer_den *= pw;
            }
            if odd == 1 {
                kernel *= BigUint::from(p);
            }
        }
        (Rational::new(outer_num, outer_den), kernel)
    }
}

trait IsZeroExt {
    fn is_zero_ext(&self) -> bool;
}

impl IsZeroExt for BigUint {
    fn is_zero_ext(&self) -> bool {
        use num_traits::Zero;
        self.is_zero()
    }
}

/// Deterministic Miller-Rabin for u64-sized values.
fn is_probable_prime(n: &BigUint) -> bool {
    let Ok(n) = u64::try_from(n) else {
        return false;
    };
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn factorial_roundtrip() {
        let f = Factored::factorial(10);
        assert_eq!(f.to_rational(), Rational::from_u64(3_628_800).unwrap());
    }

    #[test]
    fn sqrt_parts_extracts_squares() {
        // 8 = 2^3 -> 2 * sqrt(2)
        let f = Factored::from_u64(8);
        let (c, k) = f.sqrt_parts();
        assert_eq!(c, Rational::from_u64(2).unwrap());
        assert_eq!(k, BigUint::from(2u32));
    }

    #[test]
    fn sqrt_parts_negative_exponents() {
        // 3/2 = 2^-1 * 3 -> (1/2) sqrt(6)
        let mut f = Factored::one();
        f.mul_prime(2, -1);
        f.mul_prime(3, 1);
        let (c, k) = f.sqrt_parts();
        assert_eq!(c, Rational::new(1.into(), 2.into()));
        assert_eq!(k, BigUint::from(6u32));
    }

    #[test]
    fn from_rational_roundtrip() {
        let r = Rational::new(123_456_789.into(), 1024.into());
        let f = Factored::try_from_rational(&r).unwrap();
        assert_eq!(f.to_rational(), r);
    }
}
