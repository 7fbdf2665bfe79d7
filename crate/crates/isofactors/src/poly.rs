//! Exact Jacobi and Gegenbauer polynomials with rational coefficients.
//!
//! Both families are expanded in the monomial basis.  Parameters live on the
//! half-integer grid; all Pochhammer symbols of half-integers are rational,
//! so the coefficient vectors are exact.

use num_traits::{One, Zero};

use crate::exact::{
    binomial_nonneg, is_half_int, lab, label_to_rational, pochhammer_label, ExactError, Label,
    Rational, Result,
};

/// Degree and parameters of a Jacobi polynomial `P_k^(alpha,beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiSpec {
    pub k: u32,
    pub alpha: Label,
    pub beta: Label,
}

impl JacobiSpec {
    pub fn new(k: u32, alpha: Label, beta: Label) -> Result<Self> {
        for p in [alpha, beta] {
            if !is_half_int(p) || p <= lab(-1) {
                return Err(ExactError::Invalid(format!(
                    "Jacobi parameter {p} must be a half-integer > -1"
                )));
            }
        }
        Ok(JacobiSpec { k, alpha, beta })
    }
}

/// Degree and parameter of a Gegenbauer polynomial `C_k^lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GegenbauerSpec {
    pub k: u32,
    pub lambda: Label,
}

impl GegenbauerSpec {
    pub fn new(k: u32, lambda: Label) -> Result<Self> {
        if !is_half_int(lambda) || lambda <= lab(-1) / lab(2) || lambda == lab(0) {
            return Err(ExactError::Invalid(format!(
                "Gegenbauer parameter {lambda} must be a nonzero half-integer > -1/2"
            )));
        }
        Ok(GegenbauerSpec { k, lambda })
    }
}

/// Both printed expansions of the Jacobi polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiForm {
    /// Expansion in `(1+x)^m (1-x)^(k-m)`.
    A,
    /// Expansion in powers of `(1-x)/2`.
    B,
}

/// Polynomial with exact rational coefficients in the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    coeffs: Vec<Rational>, // coeffs[j] multiplies x^j; trailing nonzero
}

impl ExactPolynomial {
    pub fn zero() -> Self {
        ExactPolynomial { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = ExactPolynomial { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = ExactPolynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &ExactPolynomial) -> ExactPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|j| self.coeff(j) + other.coeff(j)).collect();
        ExactPolynomial::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> ExactPolynomial {
        ExactPolynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &ExactPolynomial) -> ExactPolynomial {
        if self.is_zero() || other.is_zero() {
            return ExactPolynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ExactPolynomial::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute `x -> a + b*t`, returning the polynomial in `t`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> ExactPolynomial {
        let mut acc = ExactPolynomial::zero();
        let linear =
            ExactPolynomial::from_coeffs(vec![a.clone(), b.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&linear);
            acc = acc.add(&ExactPolynomial::constant(c.clone()));
        }
        acc
    }

    /// The reflected polynomial `p(-x)`.
    pub fn reflect(&self) -> ExactPolynomial {
        ExactPolynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c.clone() })
                .collect(),
        )
    }
}

/// `(1+x)^m (1-x)^n` expanded exactly.
fn plus_minus_power(m: u32, n: u32) -> ExactPolynomial {
    let plus = binomial_poly(m, false);
    let minus = binomial_poly(n, true);
    plus.mul(&minus)
}

fn binomial_poly(n: u32, minus: bool) -> ExactPolynomial {
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for j in 0..=n {
        let mut c = Rational::from_integer(binomial_nonneg(n as u64, j as u64));
        if minus && j % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    ExactPolynomial::from_coeffs(coeffs)
}

/// Jacobi polynomial by either printed expansion; both agree identically.
pub fn jacobi(spec: JacobiSpec, form: JacobiForm) -> ExactPolynomial {
    let k = spec.k;
    let mut acc = ExactPolynomial::zero();
    match form {
        JacobiForm::A => {
            // 2^-k sum_m (-k-a)_m (-k-b)_(k-m) / (m! (k-m)!) (-1)^m (1+x)^m (1-x)^(k-m)
            let two_pow = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(k));
            for m in 0..=k {
                let mut c = pochhammer_label(-lab(k as i64) - spec.alpha, m as u64)
                    * pochhammer_label(-lab(k as i64) - spec.beta, (k - m) as u64);
                c /= Rational::from_integer(
                    crate::exact::factorial_big(m as u64)
                        * crate::exact::factorial_big((k - m) as u64),
                );
                if m % 2 == 1 {
                    c = -c;
                }
                acc = acc.add(&plus_minus_power(m, k - m).scale(&(&c * &two_pow)));
            }
        }
        JacobiForm::B => {
            // (-1)^k sum_m (-k-a)_m (k+a+b+1)_(k-m) / (m! (k-m)!) ((1-x)/2)^(k-m)
            for m in 0..=k {
                let mut c = pochhammer_label(-lab(k as i64) - spec.alpha, m as u64)
                    * pochhammer_label(
                        lab(k as i64) + spec.alpha + spec.beta + lab(1),
                        (k - m) as u64,
                    );
                c /= Rational::from_integer(
                    crate::exact::factorial_big(m as u64)
                        * crate::exact::factorial_big((k - m) as u64),
                );
                if k % 2 == 1 {
                    c = -c;
                }
                let half_one_minus = binomial_poly(k - m, true)
                    .scale(&Rational::new(1.into(), num_bigint::BigInt::from(2).pow(k - m)));
                acc = acc.add(&half_one_minus.scale(&c));
            }
        }
    }
    acc
}

/// Symmetry check: `P_k^(a,b)(x) = (-1)^k P_k^(b,a)(-x)` as polynomials.
pub fn jacobi_reflect_holds(spec: JacobiSpec) -> bool {
    let left = jacobi(spec, JacobiForm::B);
    let swapped = JacobiSpec { k: spec.k, alpha: spec.beta, beta: spec.alpha };
    let mut right = jacobi(swapped, JacobiForm::B).reflect();
    if spec.k % 2 == 1 {
        right = right.scale(&-Rational::one());
    }
    left == right
}

/// Gegenbauer polynomial from its finite cosine series.
pub fn gegenbauer(spec: GegenbauerSpec) -> ExactPolynomial {
    let k = spec.k;
    let mut coeffs = vec![Rational::zero(); k as usize + 1];
    for m in 0..=(k / 2) {
        let mut c = pochhammer_label(spec.lambda, (k - m) as u64);
        c /= Rational::from_integer(
            crate::exact::factorial_big(m as u64)
                * crate::exact::factorial_big((k - 2 * m) as u64),
        );
        c *= Rational::from_integer(num_bigint::BigInt::from(2).pow(k - 2 * m));
        if m % 2 == 1 {
            c = -c;
        }
        coeffs[(k - 2 * m) as usize] = c;
    }
    ExactPolynomial::from_coeffs(coeffs)
}

/// Identity check: `C_k^lambda = (2 lambda)_k / (lambda + 1/2)_k
/// P_k^(lambda-1/2, lambda-1/2)` as polynomials.
pub fn gegenbauer_as_jacobi_holds(spec: GegenbauerSpec) -> bool {
    let ratio = pochhammer_label(spec.lambda * lab(2), spec.k as u64)
        / pochhammer_label(spec.lambda + Label::new(1, 2), spec.k as u64);
    let jac = JacobiSpec {
        k: spec.k,
        alpha: spec.lambda - Label::new(1, 2),
        beta: spec.lambda - Label::new(1, 2),
    };
    gegenbauer(spec) == jacobi(jac, JacobiForm::B).scale(&ratio)
}

/// Value at `x = 1`: for a Jacobi polynomial this is `C(k+alpha, k)`.
pub fn jacobi_at_one(spec: JacobiSpec) -> Rational {
    pochhammer_label(spec.alpha + lab(1), spec.k as u64)
        / Rational::from_integer(crate::exact::factorial_big(spec.k as u64))
}

/// Helper for tests and oracles: rational from a label.
pub fn label_rat(x: Label) -> Rational {
    label_to_rational(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::half;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn low_degree_jacobi() {
        // P_0 = 1
        let p = jacobi(JacobiSpec::new(0, lab(2), half(1)).unwrap(), JacobiForm::B);
        assert_eq!(p, ExactPolynomial::constant(Rational::one()));
        // P_2^(0,0) = (3x^2 - 1)/2
        let p = jacobi(JacobiSpec::new(2, lab(0), lab(0)).unwrap(), JacobiForm::B);
        assert_eq!(
            p,
            ExactPolynomial::from_coeffs(vec![rat(-1, 2), rat(0, 1), rat(3, 2)])
        );
        // P_1^(1,0) = (3x + 1)/2
        let p = jacobi(JacobiSpec::new(1, lab(1), lab(0)).unwrap(), JacobiForm::A);
        assert_eq!(p, ExactPolynomial::from_coeffs(vec![rat(1, 2), rat(3, 2)]));
    }

    #[test]
    fn forms_agree_on_half_integer_grid() {
        for k in 0..=6u32 {
            for a2 in -1..=5i64 {
                for b2 in -1..=5i64 {
                    let spec = JacobiSpec::new(k, half(a2), half(b2)).unwrap();
                    assert_eq!(
                        jacobi(spec, JacobiForm::A),
                        jacobi(spec, JacobiForm::B),
                        "k={k} a={a2}/2 b={b2}/2"
                    );
                }
            }
        }
    }

    #[test]
    fn value_at_one_is_binomial() {
        for k in 0..=5u32 {
            for a2 in -1..=6i64 {
                let spec = JacobiSpec::new(k, half(a2), half(3)).unwrap();
                let p = jacobi(spec, JacobiForm::B);
                assert_eq!(p.eval(&Rational::one()), jacobi_at_one(spec));
            }
        }
    }

    #[test]
    fn reflect_identity() {
        for (k, a, b) in [(0, lab(0), lab(0)), (2, lab(1), lab(3)), (3, half(1), half(5))] {
            assert!(jacobi_reflect_holds(JacobiSpec::new(k, a, b).unwrap()));
        }
    }

    #[test]
    fn low_degree_gegenbauer() {
        // C_0 = 1, C_1 = 2 lambda x, C_2^1 = 4x^2 - 1
        let l = half(3);
        assert_eq!(
            gegenbauer(GegenbauerSpec::new(0, l).unwrap()),
            ExactPolynomial::constant(Rational::one())
        );
        assert_eq!(
            gegenbauer(GegenbauerSpec::new(1, l).unwrap()),
            ExactPolynomial::from_coeffs(vec![rat(0, 1), rat(3, 1)])
        );
        assert_eq!(
            gegenbauer(GegenbauerSpec::new(2, lab(1)).unwrap()),
            ExactPolynomial::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(4, 1)])
        );
    }

    #[test]
    fn gegenbauer_parity_and_jacobi_form() {
        for k in 0..=6u32 {
            for l2 in [1i64, 2, 3, 5] {
                let spec = GegenbauerSpec::new(k, half(l2)).unwrap();
                let p = gegenbauer(spec);
                let mut reflected = p.reflect();
                if k % 2 == 1 {
                    reflected = reflected.scale(&-Rational::one());
                }
                assert_eq!(p, reflected, "parity failed k={k} lambda={l2}/2");
                assert!(gegenbauer_as_jacobi_holds(spec), "k={k} lambda={l2}/2");
            }
        }
    }
}
