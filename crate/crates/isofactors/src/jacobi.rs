//! Integrals of products of three Jacobi polynomials against the measure
//! `((1+x)/2)^((b1+b2+b3-b0)/2) ((1-x)/2)^((a1+a2+a3-a0)/2)` on [-1, 1]
//! (normalized with a leading 1/2).
//!
//! The same value is computed by several independent routes:
//! - a monomial-expansion oracle (expand, multiply, integrate term by term
//!   with beta functions in the shifted variable `u = (1-x)/2`),
//! - two permutation-symmetric triple sums and one asymmetric triple sum,
//! - a triangle-adapted triple sum per pivot, whose summation limits expose
//!   the triangle conditions and whose empty support is the vanishing rule,
//! - double sums for the lowered-alpha shape `a0 = 0, a3 = a1 + a2`,
//! - special forms for specs with equal superscripts, down to a balanced
//!   single sum.
//!
//! All routes return the identical [`PiScalar`]; the test suites check this
//! exhaustively.

use num_traits::{One, Zero};

use crate::exact::{
    as_int, beta_half, binomial_general, factorial_big, gamma_half_cont, half, is_half_int,
    is_int, is_nonneg_int, lab, pochhammer_label, ExactError, Label, PiScalar, Rational, Result,
};
use crate::poly::{jacobi, ExactPolynomial, JacobiForm, JacobiSpec};

/// Parameters of a triple-product integral: the measure pair `(alpha0,
/// beta0)` and per-polynomial `(alpha_a, beta_a, k_a)`.
///
/// Strict specs satisfy the measure condition (`alpha_a - alpha0` and
/// `beta_a - beta0` nonnegative integers) and denote honest integrals.
/// Relaxed specs only keep those differences integral; they arise as formal
/// continuations inside isofactor formulas and are evaluated by the
/// triangle-adapted series alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleProductSpec {
    pub alpha0: Label,
    pub beta0: Label,
    pub alpha: [Label; 3],
    pub beta: [Label; 3],
    pub k: [u32; 3],
    strict: bool,
}

impl TripleProductSpec {
    pub fn new(
        alpha0: Label,
        beta0: Label,
        alpha: [Label; 3],
        beta: [Label; 3],
        k: [u32; 3],
    ) -> Result<Self> {
        let spec = Self::new_relaxed(alpha0, beta0, alpha, beta, k)?;
        for a in 0..3 {
            if !is_nonneg_int(alpha[a] - alpha0) || !is_nonneg_int(beta[a] - beta0) {
                return Err(ExactError::Invalid(format!(
                    "measure condition violated in column {a}: ({}, {}) vs ({alpha0}, {beta0})",
                    alpha[a], beta[a]
                )));
            }
        }
        Ok(TripleProductSpec { strict: true, ..spec })
    }

    /// Formal continuation: parameter differences must still be integers,
    /// but signs are free and the measure condition is not enforced.
    pub fn new_relaxed(
        alpha0: Label,
        beta0: Label,
        alpha: [Label; 3],
        beta: [Label; 3],
        k: [u32; 3],
    ) -> Result<Self> {
        for p in [alpha0, beta0].into_iter().chain(alpha).chain(beta) {
            if !is_half_int(p) {
                return Err(ExactError::Invalid(format!(
                    "parameter {p} is off the half-integer grid"
                )));
            }
        }
        if alpha0 <= lab(-1) || beta0 <= lab(-1) {
            return Err(ExactError::Invalid("measure parameters must exceed -1".into()));
        }
        for a in 0..3 {
            if !is_int(alpha[a] - alpha0) || !is_int(beta[a] - beta0) {
                return Err(ExactError::Invalid(format!(
                    "column {a} differences from the measure pair are not integers"
                )));
            }
        }
        Ok(TripleProductSpec { alpha0, beta0, alpha, beta, k, strict: false })
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// The alpha<->beta swapped spec; the integral picks up `(-1)^(k1+k2+k3)`.
    pub fn swapped(&self) -> TripleProductSpec {
        TripleProductSpec {
            alpha0: self.beta0,
            beta0: self.alpha0,
            alpha: self.beta,
            beta: self.alpha,
            k: self.k,
            strict: self.strict,
        }
    }

    /// Permute the three `(alpha, beta, k)` columns.
    pub fn permuted(&self, perm: [usize; 3]) -> TripleProductSpec {
        TripleProductSpec {
            alpha0: self.alpha0,
            beta0: self.beta0,
            alpha: perm.map(|p| self.alpha[p]),
            beta: perm.map(|p| self.beta[p]),
            k: perm.map(|p| self.k[p]),
            strict: self.strict,
        }
    }

    pub fn sum_k(&self) -> u32 {
        self.k.iter().sum()
    }
}

/// Triangle data per pivot: `p', p''` from the parameter columns and the
/// combined `p` including the degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleData {
    pub p: [Label; 3],
    pub p_prime: [Label; 3],
    pub p_dprime: [Label; 3],
}

impl TriangleData {
    pub fn of(spec: &TripleProductSpec) -> TriangleData {
        let mut p = [lab(0); 3];
        let mut pp = [lab(0); 3];
        let mut pd = [lab(0); 3];
        for i in 0..3 {
            let (j, k) = others(i);
            pp[i] = (spec.beta[j] + spec.beta[k] - spec.beta[i] - spec.beta0) / lab(2);
            pd[i] = (spec.alpha[j] + spec.alpha[k] - spec.alpha[i] - spec.alpha0) / lab(2);
            p[i] = lab(spec.k[j] as i64 + spec.k[k] as i64 - spec.k[i] as i64) + pp[i] + pd[i];
        }
        TriangleData { p, p_prime: pp, p_dprime: pd }
    }

    /// All three quantities of pivot `i` are integers.
    pub fn integral_at(&self, i: usize) -> bool {
        is_int(self.p[i]) && is_int(self.p_prime[i]) && is_int(self.p_dprime[i])
    }

    /// All three quantities of pivot `i` are nonnegative integers.
    pub fn admissible_at(&self, i: usize) -> bool {
        is_nonneg_int(self.p[i])
            && is_nonneg_int(self.p_prime[i])
            && is_nonneg_int(self.p_dprime[i])
    }

    /// Some pivot has integral triangle data with a negative entry; on the
    /// parity-consistent grid this forces the integral to vanish.
    pub fn some_pivot_violated(&self) -> bool {
        (0..3).any(|i| self.integral_at(i) && !self.admissible_at(i))
    }
}

pub(crate) fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("pivot out of range"),
    }
}

/// Evaluation route for the triple-product integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiMethod {
    /// Monomial-expansion oracle; independent of every series formula.
    OracleMonomial,
    /// Permutation-symmetric triple sum from the `(1+x),(1-x)` expansion.
    SymB,
    /// Permutation-symmetric triple sum from the `(1-x)/2` expansion.
    SymC,
    /// Asymmetric triple sum mixing both expansions.
    AsymF,
    /// Triangle-adapted triple sum with pivot `i` (0-based).
    TriangleD(usize),
    /// Double sum for the shape `alpha0 = 0, alpha3 = alpha1 + alpha2`.
    DoubleRA,
    /// Companion double sum for the same shape.
    DoubleRB,
    /// Triple sum for specs with equal superscripts per column.
    EqualSuperscript(usize),
    /// Balanced single sum for the two-parameter equal-superscript shape.
    Balanced4F3,
}

impl JacobiMethod {
    pub fn all() -> Vec<JacobiMethod> {
        use JacobiMethod::*;
        vec![
            OracleMonomial,
            SymB,
            SymC,
            AsymF,
            TriangleD(0),
            TriangleD(1),
            TriangleD(2),
            DoubleRA,
            DoubleRB,
            EqualSuperscript(0),
            EqualSuperscript(1),
            EqualSuperscript(2),
            Balanced4F3,
        ]
    }

    pub fn name(&self) -> String {
        use JacobiMethod::*;
        match self {
            OracleMonomial => "oracle".into(),
            SymB => "sym-b".into(),
            SymC => "sym-c".into(),
            AsymF => "asym-f".into(),
            TriangleD(i) => format!("triangle-{}", i + 1),
            DoubleRA => "double-a".into(),
            DoubleRB => "double-b".into(),
            EqualSuperscript(i) => format!("equal-super-{}", i + 1),
            Balanced4F3 => "balanced-4f3".into(),
        }
    }

    pub fn parse(name: &str) -> Option<JacobiMethod> {
        use JacobiMethod::*;
        Some(match name {
            "oracle" => OracleMonomial,
            "sym-b" => SymB,
            "sym-c" => SymC,
            "asym-f" => AsymF,
            "triangle-1" => TriangleD(0),
            "triangle-2" => TriangleD(1),
            "triangle-3" => TriangleD(2),
            "double-a" => DoubleRA,
            "double-b" => DoubleRB,
            "equal-super-1" => EqualSuperscript(0),
            "equal-super-2" => EqualSuperscript(1),
            "equal-super-3" => EqualSuperscript(2),
            "balanced-4f3" => Balanced4F3,
            _ => return None,
        })
    }
}

/// Is `method` applicable to `spec`?
///
/// The triangle form at pivot `i` requires integral pivot data (on mixed
/// parity specs the binomial support is ill-formed and the formula does not
/// represent the integral); for relaxed specs only honest nonnegative pivot
/// data defines the continuation value.
pub fn is_applicable(spec: &TripleProductSpec, method: JacobiMethod) -> bool {
    use JacobiMethod::*;
    let tri = TriangleData::of(spec);
    match method {
        OracleMonomial | SymB | SymC | AsymF => spec.strict,
        TriangleD(i) => {
            if spec.strict {
                tri.integral_at(i)
            } else {
                tri.admissible_at(i)
            }
        }
        DoubleRA => {
            spec.alpha0 == lab(0)
                && spec.alpha[2] == spec.alpha[0] + spec.alpha[1]
                && is_int(tri.p[2])
        }
        DoubleRB => {
            spec.alpha0 == lab(0)
                && spec.alpha[2] == spec.alpha[0] + spec.alpha[1]
                && is_nonneg_int(spec.alpha[1])
                && is_int(tri.p[0])
        }
        EqualSuperscript(i) => {
            spec.strict
                && spec.alpha0 == spec.beta0
                && (0..3).all(|a| spec.alpha[a] == spec.beta[a])
                && is_int(tri.p_dprime[i])
        }
        Balanced4F3 => {
            spec.strict
                && spec.alpha0 == spec.beta0
                && (0..3).all(|a| spec.alpha[a] == spec.beta[a])
                && spec.alpha[1] == spec.alpha[0]
                && spec.alpha[2] == spec.alpha0
                && spec.alpha0 > half(-1)
        }
    }
}

/// Evaluate the integral by the requested route.
pub fn integrate(spec: &TripleProductSpec, method: JacobiMethod) -> Result<PiScalar> {
    integrate_counting(spec, method).map(|(v, _)| v)
}

/// Evaluate and also report the number of nonzero summands visited.
pub fn integrate_counting(
    spec: &TripleProductSpec,
    method: JacobiMethod,
) -> Result<(PiScalar, usize)> {
    use JacobiMethod::*;
    if !is_applicable(spec, method) {
        return Err(ExactError::Invalid(format!(
            "method {} is not applicable to this spec",
            method.name()
        )));
    }
    match method {
        OracleMonomial => oracle(spec).map(|v| (v, 1)),
        SymB => sym_b(spec),
        SymC => sym_c(spec),
        AsymF => asym_f(spec),
        TriangleD(i) => triangle_d(spec, i),
        DoubleRA => double_ra(spec),
        DoubleRB => double_rb(spec),
        EqualSuperscript(i) => equal_superscript(spec, i),
        Balanced4F3 => balanced_4f3(spec),
    }
}

/// Monomial-expansion oracle: expand the three polynomials, multiply, shift
/// to `u = (1-x)/2` and integrate monomials with beta functions.
pub fn oracle(spec: &TripleProductSpec) -> Result<PiScalar> {
    let mut prod = ExactPolynomial::constant(Rational::one());
    for a in 0..3 {
        let p = jacobi(
            JacobiSpec::new(spec.k[a], spec.alpha[a], spec.beta[a])?,
            JacobiForm::B,
        );
        prod = prod.mul(&p);
    }
    // x = 1 - 2u
    let in_u = prod.compose_affine(&Rational::one(), &Rational::from_integer((-2).into()));
    let a_exp = (spec.alpha[0] + spec.alpha[1] + spec.alpha[2] - spec.alpha0) / lab(2);
    let b_exp = (spec.beta[0] + spec.beta[1] + spec.beta[2] - spec.beta0) / lab(2);
    let mut total = PiScalar::zero();
    for (j, c) in in_u.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let b = beta_half(a_exp + lab(j as i64 + 1), b_exp + lab(1))?;
        total = total.add(&b.mul_rational(c))?;
    }
    Ok(total)
}

fn column_table(k: u32, f: impl Fn(u32) -> Rational) -> Vec<Rational> {
    (0..=k).map(f).collect()
}

fn fact_rat(n: u32) -> Rational {
    Rational::from_integer(factorial_big(n as u64))
}

fn sym_b(spec: &TripleProductSpec) -> Result<(PiScalar, usize)> {
    let cols: Vec<Vec<Rational>> = (0..3)
        .map(|a| {
            let (ka, al, be) = (spec.k[a], spec.alpha[a], spec.beta[a]);
            column_table(ka, |z| {
                let mut c = pochhammer_label(-lab(ka as i64) - al, z as u64)
                    * pochhammer_label(-lab(ka as i64) - be, (ka - z) as u64)
                    / (fact_rat(z) * fact_rat(ka - z));
                if z % 2 == 1 {
                    c = -c;
                }
                c
            })
        })
        .collect();
    let sum_alpha: Label = spec.alpha.iter().sum();
    let sum_beta: Label = spec.beta.iter().sum();
    let mut total = PiScalar::zero();
    let mut count = 0usize;
    for z1 in 0..=spec.k[0] {
        for z2 in 0..=spec.k[1] {
            for z3 in 0..=spec.k[2] {
                let c = &cols[0][z1 as usize] * &cols[1][z2 as usize] * &cols[2][z3 as usize];
                if c.is_zero() {
                    continue;
                }
                let zs = lab((z1 + z2 + z3) as i64);
                let x = lab(1) - spec.beta0 / lab(2) + sum_beta / lab(2) + zs;
                let y = lab(1) - spec.alpha0 / lab(2)
                    + sum_alpha / lab(2)
                    + lab(spec.sum_k() as i64)
                    - zs;
                let b = beta_half(x, y)?;
                total = total.add(&b.mul_rational(&c))?;
                count += 1;
            }
        }
    }
    Ok((total, count))
}

fn sym_c(spec: &TripleProductSpec) -> Result<(PiScalar, usize)> {
    let cols: Vec<Vec<Rational>> = (0..3)
        .map(|a| {
            let (ka, al, be) = (spec.k[a], spec.alpha[a], spec.beta[a]);
            column_table(ka, |z| {
                let mut c = pochhammer_label(-lab(ka as i64) - al, z as u64)
                    * pochhammer_label(lab(ka as i64) + al + be + lab(1), (ka - z) as u64)
                    / (fact_rat(z) * fact_rat(ka - z));
                if ka % 2 == 1 {
                    c = -c;
                }
                c
            })
        })
        .collect();
    let x = lab(1) - spec.beta0 / lab(2) + spec.beta.iter().sum::<Label>() / lab(2);
    let base_y = lab(1) - spec.alpha0 / lab(2)
        + spec.alpha.iter().sum::<Label>() / lab(2)
        + lab(spec.sum_k() as i64);
    let mut total = PiScalar::zero();
    let mut count = 0usize;
    for z1 in 0..=spec.k[0] {
        for z2 in 0..=spec.k[1] {
            for z3 in 0..=spec.k[2] {
                let c = &cols[0][z1 as usize] * &cols[1][z2 as usize] * &cols[2][z3 as usize];
                if c.is_zero() {
                    continue;
                }
                let y = base_y - lab((z1 + z2 + z3) as i64);
                let b = beta_half(x, y)?;
                total = total.add(&b.mul_rational(&c))?;
                count += 1;
            }
        }
    }
    Ok((total, count))
}

fn asym_f(spec: &TripleProductSpec) -> Result<(PiScalar, usize)> {
    let (k1, k2, k3) = (spec.k[0], spec.k[1], spec.k[2]);
    let col1 = column_table(k1, |z| {
        pochhammer_label(-lab(k1 as i64) - spec.alpha[0], z as u64)
            * pochhammer_label(
                lab(k1 as i64) + spec.alpha[0] + spec.beta[0] + lab(1),
                (k1 - z) as u64,
            )
            / (fact_rat(z) * fact_rat(k1 - z))
    });
    let col2 = column_table(k2, |z| {
        pochhammer_label(-lab(k2 as i64) - spec.beta[1], z as u64)
            * pochhammer_label(
                lab(k2 as i64) + spec.alpha[1] + spec.beta[1] + lab(1),
                (k2 - z) as u64,
            )
            / (fact_rat(z) * fact_rat(k2 - z))
    });
    let col3 = column_table(k3, |z| {
        pochhammer_label(-lab(k3 as i64) - spec.alpha[2], (k3 - z) as u64)
            * pochhammer_label(-lab(k3 as i64) - spec.beta[2], z as u64)
            / (fact_rat(z) * fact_rat(k3 - z))
    });
    let sum_alpha = spec.alpha.iter().sum::<Label>();
    let sum_beta = spec.beta.iter().sum::<Label>();
    let mut total = PiScalar::zero();
    let mut count = 0usize;
    for z1 in 0..=k1 {
        for z2 in 0..=k2 {
            for z3 in 0..=k3 {
                let mut c = &col1[z1 as usize] * &col2[z2 as usize] * &col3[z3 as usize];
                if c.is_zero() {
                    continue;
                }
                if (k1 + k3 - z3) % 2 == 1 {
                    c = -c;
                }
                let x = lab(1) - spec.beta0 / lab(2)
                    + sum_beta / lab(2)
                    + lab((k2 - z2) as i64 + (k3 - z3) as i64);
                let y = lab(1) - spec.alpha0 / lab(2)
                    + sum_alpha / lab(2)
                    + lab(k1 as i64 - z1 as i64 + z3 as i64);
                let b = beta_half(x, y)?;
                total = total.add(&b.mul_rational(&c))?;
                count += 1;
            }
        }
    }
    Ok((total, count))
}

fn triangle_d(spec: &TripleProductSpec, i: usize) -> Result<(PiScalar, usize)> {
    let tri = TriangleData::of(spec);
    if !tri.admissible_at(i) {
        // integral pivot data with a negative entry: structural zero
        return Ok((PiScalar::zero(), 0));
    }
    let p = as_int(tri.p[i]);
    let pd = as_int(tri.p_dprime[i]);
    let (j, kk) = others(i);
    let (ki, ai, bi) = (spec.k[i], spec.alpha[i], spec.beta[i]);
    let pref = beta_half(lab(ki as i64) + ai + lab(1), lab(ki as i64) + bi + lab(1))?;
    let col = |a: usize| {
        let (ka, al, be) = (spec.k[a], spec.alpha[a], spec.beta[a]);
        column_table(ka, move |z| {
            pochhammer_label(-lab(ka as i64) - be, z as u64)
                * pochhammer_label(lab(ka as i64) + al + be + lab(1), (ka - z) as u64)
                / (fact_rat(z) * fact_rat(ka - z))
        })
    };
    let colj = col(j);
    let colk = col(kk);
    let mut total = Rational::zero();
    let mut count = 0usize;
    for zj in 0..=spec.k[j] {
        for zk in 0..=spec.k[kk] {
            let cjk = &colj[zj as usize] * &colk[zk as usize];
            if cjk.is_zero() {
                continue;
            }
            let rem = p - (zj + zk) as i64;
            if rem < 0 {
                continue;
            }
            let zi_lo = (rem - pd).max(0);
            for zi in zi_lo..=rem {
                let binom = binomial_general(pd, rem - zi);
                if binom.is_zero() {
                    continue;
                }
                let mut c = &cjk
                    * pochhammer_label(lab(ki as i64 + 1), zi as u64)
                    * pochhammer_label(lab(ki as i64) + bi + lab(1), zi as u64)
                    * Rational::from_integer(binom)
                    / (fact_rat(zi as u32)
                        * pochhammer_label(lab(2 * ki as i64) + ai + bi + lab(2), zi as u64));
                if (p - pd + (zj + zk) as i64 + zi).rem_euclid(2) == 1 {
                    c = -c;
                }
                total += c;
                count += 1;
            }
        }
    }
    Ok((pref.mul_rational(&total), count))
}

fn double_ra(spec: &TripleProductSpec) -> Result<(PiScalar, usize)> {
    let tri = TriangleData::of(spec);
    let p3 = as_int(tri.p[2]);
    if p3 < 0 {
        return Ok((PiScalar::zero(), 0));
    }
    let (k1, k2, k3) = (spec.k[0], spec.k[1], spec.k[2]);
    let a12 = spec.alpha[0] + spec.alpha[1];
    let pref =
        beta_half(lab(k3 as i64) + a12 + lab(1), lab(k3 as i64) + spec.beta[2] + lab(1))?;
    let col = |a: usize| {
        let (ka, al, be) = (spec.k[a], spec.alpha[a], spec.beta[a]);
        column_table(ka, move |z| {
            pochhammer_label(-lab(ka as i64) - be, z as u64)
                * pochhammer_label(lab(ka as i64) + al + be + lab(1), (ka - z) as u64)
                / (fact_rat(z) * fact_rat(ka - z))
        })
    };
    let col1 = col(0);
    let col2 = col(1);
    let mut total = Rational::zero();
    let mut count = 0usize;
    for z1 in 0..=k1 {
        for z2 in 0..=k2 {
            let rem = p3 - (z1 + z2) as i64;
            if rem < 0 {
                continue;
            }
            let c12 = &col1[z1 as usize] * &col2[z2 as usize];
            if c12.is_zero() {
                continue;
            }
            let c = c12
                * pochhammer_label(lab(k3 as i64 + 1), rem as u64)
                * pochhammer_label(lab(k3 as i64) + spec.beta[2] + lab(1), rem as u64)
                / (fact_rat(rem as u32)
                    * pochhammer_label(
                        lab(2 * k3 as i64) + a12 + spec.beta[2] + lab(2),
                        rem as u64,
                    ));
            total += c;
            count += 1;
        }
    }
    Ok((pref.mul_rational(&total), count))
}

fn double_rb(spec: &TripleProductSpec) -> Result<(PiScalar, usize)> {
    let tri = TriangleData::of(spec);
    let p1 = as_int(tri.p[0]);
    if p1 < 0 {
        return Ok((PiScalar::zero(), 0));
    }
    let (k1, k2, k3) = (spec.k[0], spec.k[1], spec.k[2]);
    let a2 = as_int(spec.alpha[1]);
    let pref = beta_half(
        lab(k1 as i64) + spec.alpha[0] + lab(1),
        lab(k1 as i64) + spec.beta[0] + lab(1),
    )?;
    let mut total = Rational::zero();
    let mut count = 0usize;
    for z2 in 0..=(k2 as i64 + a2) {
        let b2 = binomial_general(k2 as i64 + a2, z2);
        if b2.is_zero() {
            continue;
        }
        let mut c2 = Rational::from_integer(b2)
            * pochhammer_label(
                lab(k2 as i64) + spec.alpha[1] + spec.beta[1] + lab(1 - z2),
                k2 as u64,
            )
            / fact_rat(k2);
        if (a2 - z2).rem_euclid(2) == 1 {
            c2 = -c2;
        }
        if c2.is_zero() {
            continue;
        }
        for z3 in 0..=k3 {
            let rem = p1 - z2 - z3 as i64;
            if rem < 0 {
                continue;
            }
            let c3 = pochhammer_label(-lab(k3 as i64) - spec.beta[2], z3 as u64)
                * pochhammer_label(
                    lab(k3 as i64) + spec.alpha[2] + spec.beta[2] + lab(1),
                    (k3 - z3) as u64,
                )
                / (fact_rat(z3) * fact_rat(k3 - z3));
            if c3.is_zero() {
                continue;
            }
            let tail = pochhammer_label(lab(k1 as i64 + 1), rem as u64)
                * pochhammer_label(lab(k1 as i64) + spec.beta[0] + lab(1), rem as u64)
                / (fact_rat(rem as u32)
                    * pochhammer_label(
                        lab(2 * k1 as i64) + spec.alpha[0] + spec.beta[0] + lab(2),
                        rem as u64,
                    ));
            total += &c2 * c3 * tail;
            count += 1;
        }
    }
    Ok((pref.mul_rational(&total), count))
}

/// Reflection that extends the lowered-alpha double sums to a negative
/// integer `alpha2`: returns the prefactor and the reflected spec with
/// `alpha2 -> -alpha2`, `k2 -> k2 + alpha2`.
pub fn negative_alpha2_reflection(
    spec: &TripleProductSpec,
) -> Result<(PiScalar, TripleProductSpec)> {
    if spec.alpha0 != lab(0) || !is_int(spec.alpha[1]) || spec.alpha[1] >= lab(0) {
        return Err(ExactError::Invalid(
            "reflection needs alpha0 = 0 and a negative integer alpha2".into(),
        ));
    }
    let a2 = as_int(spec.alpha[1]);
    let k2 = spec.k[1] as i64;
    if k2 + a2 < 0 {
        return Err(ExactError::Invalid("k2 + alpha2 must stay nonnegative".into()));
    }
    // (-1)^a2 (k2+a2)! (k2+b2)! / (k2! (k2+a2+b2)!)
    let g1 = gamma_req(lab(k2 + a2 + 1))?;
    let g2 = gamma_req(lab(k2) + spec.beta[1] + lab(1))?;
    let g3 = gamma_req(lab(k2 + 1))?;
    let g4 = gamma_req(lab(k2) + spec.alpha[1] + spec.beta[1] + lab(1))?;
    let mut factor = g1.mul(&g2).div(&g3.mul(&g4))?;
    if a2.rem_euclid(2) == 1 {
        factor = factor.neg();
    }
    let reflected = TripleProductSpec::new_relaxed(
        spec.alpha0,
        spec.beta0,
        [spec.alpha[0], -spec.alpha[1], spec.alpha[2]],
        spec.beta,
        [spec.k[0], (k2 + a2) as u32, spec.k[2]],
    )?;
    Ok((factor, reflected))
}

fn equal_superscript(spec: &TripleProductSpec, i: usize) -> Result<(PiScalar, usize)> {
    let tri = TriangleData::of(spec);
    if !is_int(tri.p[i]) {
        return Ok((PiScalar::zero(), 0));
    }
    let p = as_int(tri.p[i]);
    if p % 2 != 0 || p < 0 || !is_nonneg_int(tri.p_dprime[i]) {
        return Ok((PiScalar::zero(), 0)); // the [1 + (-1)^p] factor and supports
    }
    let (j, kk) = others(i);
    let delta = |a: usize| (spec.k[a] % 2) as i64;
    let (di, dj, dk) = (delta(i), delta(j), delta(kk));
    if (dj + dk - di) % 2 != 0 {
        return Ok((PiScalar::zero(), 0));
    }
    let binom_top = (dj + dk - di) / 2;
    let (ki, ai) = (spec.k[i] as i64, spec.alpha[i]);
    let exp2 = lab(spec.sum_k() as i64)
        + spec.alpha[0]
        + spec.alpha[1]
        + spec.alpha[2]
        - spec.alpha0
        + lab(2);
    let pref_beta = beta_half(half(1), lab(ki) + ai + lab(1))?;
    let denom = pow2_exact(exp2)?
        * pochhammer_label(half(1), ((spec.k[j] as i64 + dj) / 2) as u64)
        * pochhammer_label(half(1), ((spec.k[kk] as i64 + dk) / 2) as u64);
    // the [1 + (-1)^p] factor contributes 2
    let pref = pref_beta.mul_rational(&(Rational::from_integer(2.into()) / denom));
    let sign_base =
        as_int(tri.p_prime[i]) + (spec.k[j] as i64 + dj + spec.k[kk] as i64 + dk) / 2;
    let col = |a: usize| {
        let (ka, al, da) = (spec.k[a] as i64, spec.alpha[a], delta(a));
        let hi = ((ka - da) / 2) as u32;
        column_table(hi, move |z| {
            pochhammer_label(-lab(ka) - al, ((ka + da) / 2 + z as i64) as u64)
                * pochhammer_label(al + half(ka + da + 1), (hi - z) as u64)
                / (fact_rat(z) * fact_rat(hi - z))
        })
    };
    let colj = col(j);
    let colk = col(kk);
    let mut total = Rational::zero();
    let mut count = 0usize;
    for zj in 0..colj.len() {
        for zk in 0..colk.len() {
            let cjk = &colj[zj] * &colk[zk];
            if cjk.is_zero() {
                continue;
            }
            let rem = p / 2 - (zj + zk) as i64;
            if rem < 0 {
                continue;
            }
            let zi_lo = (rem - binom_top).max(0);
            for zi in zi_lo..=rem {
                let binom = binomial_general(binom_top, rem - zi);
                if binom.is_zero() {
                    continue;
                }
                let choose = binomial_general((ki - di) / 2 + zi, zi);
                let mut c = &cjk
                    * Rational::from_integer(binom * choose)
                    * pochhammer_label(ai + lab((ki - di) / 2 + 1), zi as u64)
                    / pochhammer_label(ai + lab(ki) + half(3), zi as u64);
                if (sign_base + (zj + zk) as i64 + zi).rem_euclid(2) == 1 {
                    c = -c;
                }
                total += c;
                count += 1;
            }
        }
    }
    Ok((pref.mul_rational(&total), count))
}

fn balanced_4f3(spec: &TripleProductSpec) -> Result<(PiScalar, usize)> {
    let (k1, k2, k3) = (spec.k[0] as i64, spec.k[1] as i64, spec.k[2] as i64);
    let (a0, a1) = (spec.alpha0, spec.alpha[0]);
    let shift = as_int(a1 - a0);
    let p1 = k2 + k3 - k1;
    let p2 = k1 + k3 - k2;
    let p3 = k1 + k2 - k3 + 2 * shift;
    if p1.rem_euclid(2) == 1 || p1 < 0 || p2 < 0 || p3 < 0 {
        return Ok((PiScalar::zero(), 0));
    }
    let mut pref = PiScalar::from_rational(pow2_exact(a0 * lab(2) - lab(2))?);
    pref = pref.mul_rational(&fact_rat(shift as u32));
    pref = pref.mul(&gamma_req(a1 + half(1))?);
    for pa in [p1, p2, p3] {
        pref = pref.mul(&gamma_req(half(pa) + a0 + half(1))?);
    }
    pref = pref.div(&gamma_req(half(1))?)?;
    pref = pref.div(&gamma_req(half(k1 + k2 + k3) + a1 + half(3))?)?;
    pref = pref.mul(&gamma_req(a1 + lab(1 + k1))?);
    pref = pref.mul(&gamma_req(a1 + lab(1 + k2))?);
    pref = pref.mul(&gamma_req(a0 + lab(1 + k3))?);
    pref = pref.div(&gamma_req(a1 * lab(2) + lab(1 + k1))?)?;
    pref = pref.div(&gamma_req(a1 * lab(2) + lab(1 + k2))?)?;
    pref = pref.div(&gamma_req(a0 * lab(2) + lab(1 + k3))?)?;
    // the [1 + (-1)^p1] factor
    pref = pref.mul_rational(&Rational::from_integer(2.into()));

    let mut total = PiScalar::zero();
    let mut count = 0usize;
    let u_max = shift.min(p1 / 2).min(p2 / 2);
    for u in 0..=u_max {
        let last = p3 / 2 - shift + u;
        if last < 0 {
            continue;
        }
        let top = half(k1 + k2 + k3) + a1 * lab(2) - lab(u) + lab(1);
        let mut term = gamma_req(top)?;
        let den = fact_rat(u as u32)
            * fact_rat((shift - u) as u32)
            * fact_rat((p1 / 2 - u) as u32)
            * fact_rat((p2 / 2 - u) as u32)
            * fact_rat(last as u32);
        term = term.mul_rational(&den.recip());
        term = term.div(&gamma_req(a0 + half(1) + lab(u))?)?;
        term = term.div(&gamma_req(a1 + half(1) - lab(u))?)?;
        if u.rem_euclid(2) == 1 {
            term = term.neg();
        }
        total = total.add(&term)?;
        count += 1;
    }
    Ok((pref.mul(&total), count))
}

fn gamma_req(x: Label) -> Result<PiScalar> {
    gamma_half_cont(x).ok_or(ExactError::BadGammaArgument(x))
}

fn pow2_exact(e: Label) -> Result<Rational> {
    if !is_int(e) {
        return Err(ExactError::Invalid(format!("2^{e} is not rational")));
    }
    let e = as_int(e);
    let p = num_bigint::BigInt::from(2).pow(e.unsigned_abs() as u32);
    Ok(if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(1.into(), p)
    })
}

/// Term-count bound for a series route, where the formula provides one.
pub fn term_bound(spec: &TripleProductSpec, method: JacobiMethod) -> Result<i64> {
    use JacobiMethod::*;
    let tri = TriangleData::of(spec);
    let box_bound = (spec.k[0] as i64 + 1) * (spec.k[1] as i64 + 1) * (spec.k[2] as i64 + 1);
    match method {
        SymB | SymC | AsymF => Ok(box_bound),
        TriangleD(i) => {
            if !tri.integral_at(i) {
                return Ok(0);
            }
            let p = as_int(tri.p[i]);
            let pd = as_int(tri.p_dprime[i]);
            if p < 0 || pd < 0 {
                return Ok(0);
            }
            let (j, k) = others(i);
            let b1 = (p + 1) * (p + 2) * (p + 3) / 6;
            let b2 = (pd + 1) * (spec.k[j] as i64 + 1) * (spec.k[k] as i64 + 1);
            let b3 = (pd + 1) * (p + 1) * (p + 2) / 2;
            Ok(b1.min(b2).min(b3))
        }
        DoubleRA => {
            if !is_int(tri.p[2]) {
                return Ok(0);
            }
            let p = as_int(tri.p[2]);
            if p < 0 {
                return Ok(0);
            }
            Ok(((p + 1) * (p + 2) / 2)
                .min((spec.k[0] as i64 + 1) * (spec.k[1] as i64 + 1)))
        }
        OracleMonomial | DoubleRB | EqualSuperscript(_) | Balanced4F3 => {
            Err(ExactError::Invalid(format!(
                "no term-count bound for method {}",
                method.name()
            )))
        }
    }
}

/// Every method applicable to the spec.
pub fn applicable_methods(spec: &TripleProductSpec) -> Vec<JacobiMethod> {
    JacobiMethod::all()
        .into_iter()
        .filter(|m| is_applicable(spec, *m))
        .collect()
}

/// Evaluate by the admissible triangle pivot with the smallest term bound.
pub fn integrate_triangle_any(spec: &TripleProductSpec) -> Result<PiScalar> {
    let tri = TriangleData::of(spec);
    let mut pivots: Vec<usize> = (0..3).filter(|&i| tri.admissible_at(i)).collect();
    if pivots.is_empty() {
        if spec.strict && tri.some_pivot_violated() {
            return Ok(PiScalar::zero());
        }
        return Err(ExactError::Invalid("no admissible triangle pivot".into()));
    }
    pivots.sort_by_key(|&i| term_bound(spec, JacobiMethod::TriangleD(i)).unwrap_or(i64::MAX));
    triangle_d(spec, pivots[0]).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a0: i64, b0: i64, alpha: [i64; 3], beta: [i64; 3], k: [u32; 3]) -> TripleProductSpec {
        TripleProductSpec::new(lab(a0), lab(b0), alpha.map(lab), beta.map(lab), k).unwrap()
    }

    #[test]
    fn trivial_cases_match_known_integrals() {
        let s = spec(0, 0, [0; 3], [0; 3], [0; 3]);
        assert_eq!(oracle(&s).unwrap(), PiScalar::one());
        let s = spec(0, 0, [0; 3], [0; 3], [1, 1, 1]);
        assert!(oracle(&s).unwrap().is_zero());
        let s = spec(0, 0, [0; 3], [0; 3], [1, 1, 0]);
        assert_eq!(
            oracle(&s).unwrap(),
            PiScalar::from_rational(Rational::new(1.into(), 3.into()))
        );
    }

    #[test]
    fn triangle_data_examples() {
        let s = spec(0, 0, [1, 1, 2], [0, 0, 0], [1, 1, 0]);
        let tri = TriangleData::of(&s);
        assert_eq!(tri.p_dprime[2], lab(0));
        assert_eq!(tri.p_prime[2], lab(0));
        assert_eq!(tri.p[2], lab(2));
        let s = spec(0, 0, [0; 3], [0; 3], [1, 1, 3]);
        let tri = TriangleData::of(&s);
        assert_eq!(tri.p[2], lab(-1));
        assert!(tri.some_pivot_violated());
    }

    fn methods_agree(s: &TripleProductSpec) {
        let reference = oracle(s).unwrap();
        for m in applicable_methods(s) {
            let v = integrate(s, m).unwrap();
            assert_eq!(v, reference, "method {} disagrees on {s:?}", m.name());
        }
    }

    #[test]
    fn all_methods_match_oracle_on_small_grid() {
        for k1 in 0..=3u32 {
            for k2 in 0..=3u32 {
                for k3 in 0..=3u32 {
                    for da in [[0i64, 0, 0], [1, 0, 1], [2, 1, 3], [0, 2, 2], [1, 1, 2]] {
                        for db in [[0i64, 0, 0], [1, 1, 0], [0, 1, 1]] {
                            let s = spec(0, 0, da, db, [k1, k2, k3]);
                            methods_agree(&s);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn half_integer_measure_pairs() {
        for (a0, b0) in [(half(1), half(1)), (lab(1), half(1)), (half(1), lab(0))] {
            for k in [[1u32, 1, 1], [2, 1, 1], [2, 2, 2], [3, 1, 2]] {
                let s = TripleProductSpec::new(
                    a0,
                    b0,
                    [a0 + lab(1), a0, a0 + lab(2)],
                    [b0, b0 + lab(1), b0 + lab(1)],
                    k,
                )
                .unwrap();
                methods_agree(&s);
            }
        }
    }

    #[test]
    fn swap_symmetry_costs_parity_of_total_degree() {
        for k in [[1u32, 0, 2], [1, 1, 1], [2, 1, 3]] {
            let s = spec(1, 0, [1, 2, 1], [0, 1, 2], k);
            let direct = oracle(&s).unwrap();
            let swapped = oracle(&s.swapped()).unwrap();
            let expect = if s.sum_k() % 2 == 1 { swapped.neg() } else { swapped };
            assert_eq!(direct, expect);
        }
    }

    #[test]
    fn lowered_alpha_double_sums() {
        for (a1, a2) in [(0i64, 0), (1, 0), (1, 2), (2, 1)] {
            for k in [[1u32, 1, 1], [2, 1, 2], [1, 2, 3]] {
                let s = spec(0, 0, [a1, a2, a1 + a2], [1, 0, 1], k);
                methods_agree(&s);
            }
        }
    }

    #[test]
    fn negative_alpha2_reflection_matches_series() {
        // the literal lowered-alpha double sum at negative alpha2 equals the
        // prefactor times the reflected (honest) integral
        for (a2, k2) in [(-1i64, 2u32), (-2, 3), (-3, 3)] {
            for k3 in 0..=2u32 {
                let s = TripleProductSpec::new_relaxed(
                    lab(0),
                    lab(0),
                    [lab(3), lab(a2), lab(3 + a2)],
                    [lab(1), lab(0), lab(1)],
                    [1, k2, k3],
                )
                .unwrap();
                let direct = double_ra(&s).unwrap().0;
                let (factor, reflected) = negative_alpha2_reflection(&s).unwrap();
                let strict = TripleProductSpec::new(
                    reflected.alpha0,
                    reflected.beta0,
                    reflected.alpha,
                    reflected.beta,
                    reflected.k,
                )
                .unwrap();
                let v = oracle(&strict).unwrap();
                assert_eq!(direct, factor.mul(&v), "a2={a2} k2={k2} k3={k3}");
            }
        }
    }

    #[test]
    fn equal_superscript_forms() {
        for a in [lab(0), lab(1), half(1), half(3)] {
            for a0 in [a, a - lab(1)] {
                if a0 <= lab(-1) {
                    continue;
                }
                for k in [[2u32, 2, 2], [2, 1, 1], [3, 2, 1], [4, 2, 2]] {
                    let s = TripleProductSpec::new(a0, a0, [a; 3], [a; 3], k).unwrap();
                    methods_agree(&s);
                }
            }
        }
    }

    #[test]
    fn balanced_single_sum() {
        for a0 in [lab(0), half(1), lab(1)] {
            for shift in 0..=2i64 {
                let a1 = a0 + lab(shift);
                for k in [[1u32, 1, 2], [2, 2, 2], [3, 1, 2], [2, 2, 4]] {
                    let s =
                        TripleProductSpec::new(a0, a0, [a1, a1, a0], [a1, a1, a0], k).unwrap();
                    methods_agree(&s);
                }
            }
        }
    }

    #[test]
    fn term_counts_respect_bounds() {
        for k in [[2u32, 2, 2], [3, 2, 1], [1, 1, 0]] {
            let s = spec(0, 0, [1, 0, 1], [0, 0, 0], k);
            for m in applicable_methods(&s) {
                let (_, actual) = integrate_counting(&s, m).unwrap();
                if let Ok(bound) = term_bound(&s, m) {
                    assert!(
                        actual as i64 <= bound,
                        "method {} actual {actual} > bound {bound}",
                        m.name()
                    );
                }
            }
        }
    }
}
