//! Exact ball/sphere volumes, the d_(n,k,l) constants and their identities,
//! sphere-moment integration with half-integer gamma bookkeeping, and the
//! Weyl-lemma verifier over a flat ambient space.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::DoubleFormOf;
use crate::kahler::SymBilinear;
use crate::scalar::{
    binomial_rational, factorial, gamma_half, rat, rat_i64, HalfPi, PiLambda, Rational,
};

/// omega_n, the volume of the n-dimensional unit ball.
pub fn ball_volume(n: i64) -> Result<PiLambda> {
    if n < 0 {
        return Err(Error::Domain(format!("ball volume of negative dimension {n}")));
    }
    let n = n as u64;
    if n % 2 == 0 {
        let m = n / 2;
        Ok(PiLambda::monomial(factorial(m).recip(), m as i64, 0))
    } else {
        let m = (n - 1) / 2;
        let mut c = factorial(m) / factorial(2 * m + 1);
        for _ in 0..(2 * m + 1) {
            c *= rat_i64(2);
        }
        Ok(PiLambda::monomial(c, m as i64, 0))
    }
}

/// s_n = (n+1) omega_(n+1), the volume of the n-dimensional unit sphere.
pub fn sphere_volume(n: i64) -> Result<PiLambda> {
    if n < 0 {
        return Err(Error::Domain(format!("sphere volume of negative dimension {n}")));
    }
    Ok(ball_volume(n + 1)?.scale(&rat_i64(n + 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeKind {
    /// Unit-ball volume omega_n.
    Omega,
    /// Unit-sphere volume s_n.
    Sphere,
}

#[derive(Debug, Clone)]
pub struct VolumeConstant {
    pub kind: VolumeKind,
    pub index: i64,
    pub value: PiLambda,
}

impl VolumeConstant {
    pub fn new(kind: VolumeKind, index: i64) -> Result<Self> {
        let value = match kind {
            VolumeKind::Omega => ball_volume(index)?,
            VolumeKind::Sphere => sphere_volume(index)?,
        };
        Ok(VolumeConstant { kind, index, value })
    }
}

fn is_nonneg_int(x: &Rational) -> Option<i64> {
    if x.is_integer() && !x.is_negative() {
        num_traits::ToPrimitive::to_i64(&x.to_integer())
    } else {
        None
    }
}

/// d_(n,k,l) = [(2 pi)^l l! (k+1)! (n-2l-k)! omega_(n-2l-k)]^(-1), taken to be
/// zero whenever any index is a half-integer or a factorial argument would be
/// negative. Indices are rational so that expressions like d_(2n,k,n-k/2)
/// with odd k fall under the zero convention.
pub fn d_constant(n: &Rational, k: &Rational, l: &Rational) -> Result<PiLambda> {
    let (Some(n), Some(k), Some(l)) = (is_nonneg_int(n), is_nonneg_int(k), is_nonneg_int(l))
    else {
        return Ok(PiLambda::zero());
    };
    let rem = n - 2 * l - k;
    if rem < 0 {
        return Ok(PiLambda::zero());
    }
    let two_pi_l = PiLambda::monomial(
        {
            let mut c = Rational::one();
            for _ in 0..l {
                c *= rat_i64(2);
            }
            c
        },
        l,
        0,
    );
    let denom = &(&two_pi_l * &PiLambda::from_rational(factorial(l as u64)))
        * &(&PiLambda::from_rational(factorial((k + 1) as u64) * factorial(rem as u64))
            * &ball_volume(rem)?);
    let value = PiLambda::one().div(&denom)?;

    // cross-check against the first closed form
    let omega_k = ball_volume(k)?;
    let omega_k2l = ball_volume(k + 2 * l)?;
    let binom = binomial_rational(&(rat(k, 2) + rat_i64(l)), l as u64);
    let mut half_l = Rational::one();
    for _ in 0..l {
        half_l /= rat_i64(2);
    }
    let first = PiLambda::pi_pow(k)
        .div(&PiLambda::from_rational(factorial((k + 1) as u64)).mul(omega_k))?
        .scale(&(half_l * binom))
        .mul(
            omega_k2l.div(
                &PiLambda::pi_pow(k + 2 * l)
                    .scale(&factorial(rem as u64))
                    .mul(ball_volume(rem)?),
            )?,
        );
    if first != value {
        return Err(Error::InternalConsistency(format!(
            "d_({n},{k},{l}): the two closed forms disagree: {first} vs {value}"
        )));
    }
    Ok(value)
}

/// Integer-index convenience wrapper.
pub fn d_int(n: i64, k: i64, l: i64) -> Result<PiLambda> {
    d_constant(&rat_i64(n), &rat_i64(k), &rat_i64(l))
}

/// Monomial exponents for a sphere moment: integrate prod y_i^(alpha_i) over
/// S^(N-1) where N = alpha.len().
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MomentKey {
    pub exponents: Vec<u64>,
}

static MOMENT_CACHE: OnceLock<Mutex<BTreeMap<MomentKey, PiLambda>>> = OnceLock::new();

/// Exact sphere moment: 0 when any exponent is odd, else
/// 2 prod Gamma((alpha_i+1)/2) / Gamma((N+|alpha|)/2). Half-integer powers of
/// pi must cancel to integers.
pub fn sphere_moment(key: &MomentKey) -> Result<PiLambda> {
    let n = key.exponents.len();
    if n == 0 {
        return Err(Error::Domain("sphere moment needs at least one variable".into()));
    }
    if key.exponents.iter().any(|&a| a % 2 == 1) {
        return Ok(PiLambda::zero());
    }
    let cache = MOMENT_CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().unwrap().get(key) {
        return Ok(v.clone());
    }
    let total: u64 = key.exponents.iter().sum();
    let mut num = HalfPi::from_rational(rat_i64(2));
    for &a in &key.exponents {
        num = num.mul(&gamma_half(a as i64 + 1)?);
    }
    let den = gamma_half(n as i64 + total as i64)?;
    let value = num.div(&den)?.to_pi_lambda()?;
    cache.lock().unwrap().insert(key.clone(), value.clone());
    Ok(value)
}

/// Exact integral of cos^a sin^b over [0, pi/2], computed via the gamma
/// quotient Gamma((a+1)/2) Gamma((b+1)/2) / (2 Gamma((a+b+2)/2)) and
/// cross-checked against s_(a+b+1)/(s_a s_b).
pub fn cos_sin_integral(a: u64, b: u64) -> Result<PiLambda> {
    let beta = gamma_half(a as i64 + 1)?
        .mul(&gamma_half(b as i64 + 1)?)
        .div(&gamma_half(a as i64 + b as i64 + 2)?.scale(&rat_i64(2)))?
        .to_pi_lambda()?;
    let ratio = sphere_volume(a as i64 + b as i64 + 1)?
        .div(&sphere_volume(a as i64)?.mul(sphere_volume(b as i64)?))?;
    if beta != ratio {
        return Err(Error::InternalConsistency(format!(
            "cos_sin_integral({a},{b}): beta route {beta} != sphere ratio {ratio}"
        )));
    }
    Ok(beta)
}

/// Polynomial in auxiliary sphere variables y_1..y_N with rational
/// coefficients. Exponent keys are trimmed of trailing zeros so the ring is
/// arity-agnostic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct YPoly {
    terms: BTreeMap<Vec<u16>, Rational>,
}

impl YPoly {
    pub fn variable(index: usize) -> Self {
        let mut key = vec![0u16; index + 1];
        key[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(key, Rational::one());
        YPoly { terms }
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        YPoly { terms }
    }

    fn insert(&mut self, mut key: Vec<u16>, c: Rational) {
        while key.last() == Some(&0) {
            key.pop();
        }
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if self.terms[&key].is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Coefficient-wise sphere integration over S^(N-1) with N variables.
    pub fn integrate_sphere(&self, n_vars: usize) -> Result<PiLambda> {
        let mut acc = PiLambda::zero();
        for (key, c) in &self.terms {
            let mut exponents = vec![0u64; n_vars];
            for (i, &e) in key.iter().enumerate() {
                if e > 0 && i >= n_vars {
                    return Err(Error::DimensionMismatch(format!(
                        "variable y_{} outside the {}-variable sphere",
                        i + 1,
                        n_vars
                    )));
                }
                if i < n_vars {
                    exponents[i] = e as u64;
                }
            }
            let m = sphere_moment(&MomentKey { exponents })?;
            acc = acc + m.scale(c);
        }
        Ok(acc)
    }
}

impl Add for YPoly {
    type Output = YPoly;
    fn add(self, rhs: YPoly) -> YPoly {
        let mut out = self;
        for (k, v) in rhs.terms {
            out.insert(k, v);
        }
        out
    }
}

impl Sub for YPoly {
    type Output = YPoly;
    fn sub(self, rhs: YPoly) -> YPoly {
        self + rhs.neg()
    }
}

impl Neg for YPoly {
    type Output = YPoly;
    fn neg(self) -> YPoly {
        YPoly {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Mul for YPoly {
    type Output = YPoly;
    fn mul(self, rhs: YPoly) -> YPoly {
        let mut out = YPoly::default();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &rhs.terms {
                let mut key = vec![0u16; k1.len().max(k2.len())];
                for (i, e) in k1.iter().enumerate() {
                    key[i] += e;
                }
                for (i, e) in k2.iter().enumerate() {
                    key[i] += e;
                }
                out.insert(key, v1.clone() * v2.clone());
            }
        }
        out
    }
}

impl Zero for YPoly {
    fn zero() -> Self {
        YPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for YPoly {
    fn one() -> Self {
        YPoly::constant(Rational::one())
    }
}

/// Both sides of the Weyl lemma instance: the sphere average of H^(2e)
/// against 2^(e+1) s_(2d+2e-1)/s_(2e) R^e with R from the flat Gauss equation.
#[derive(Debug, Clone)]
pub struct WeylCheck {
    pub lhs: DoubleFormOf<PiLambda>,
    pub rhs: DoubleFormOf<PiLambda>,
}

impl WeylCheck {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The double form H = sum_r y_r l_r with polynomial-in-y coefficients.
fn h_form(m: usize, sffs: &[SymBilinear]) -> DoubleFormOf<YPoly> {
    let mut h = DoubleFormOf::<YPoly>::zero(m, 1, 1);
    for (r, l) in sffs.iter().enumerate() {
        let y = YPoly::variable(r);
        for ((i, j), c) in l.to_form().entries() {
            let cur = h.coefficient(i, j);
            h.set_coefficient(
                i.clone(),
                j.clone(),
                cur + y.clone() * YPoly::constant(c.clone()),
            );
        }
    }
    h
}

/// Sphere average of H^power over S^(2d-1), coefficientwise.
pub fn integrate_h_power(
    d: usize,
    power: usize,
    m: usize,
    sffs: &[SymBilinear],
) -> Result<DoubleFormOf<PiLambda>> {
    if sffs.len() != 2 * d {
        return Err(Error::DimensionMismatch(format!(
            "expected 2d = {} second fundamental forms, got {}",
            2 * d,
            sffs.len()
        )));
    }
    for l in sffs {
        if l.m != m {
            return Err(Error::DimensionMismatch(
                "second fundamental form dimension mismatch".into(),
            ));
        }
    }
    let h = h_form(m, sffs);
    let hp = h.pow(power)?;
    let (p, q) = hp.bidegree();
    let mut out = DoubleFormOf::<PiLambda>::zero(m, p, q);
    for ((i, j), c) in hp.entries() {
        let v = c.integrate_sphere(2 * d)?;
        if !v.is_zero() {
            out.set_coefficient(i.clone(), j.clone(), v);
        }
    }
    Ok(out)
}

/// weyl_integral_check(d, e, sffs): integral of H^(2e) over S^(2d-1) against
/// the closed form through the flat Gauss equation.
pub fn weyl_integral_check(
    d: usize,
    e: usize,
    m: usize,
    sffs: &[SymBilinear],
) -> Result<WeylCheck> {
    let lhs = integrate_h_power(d, 2 * e, m, sffs)?;
    // R = (1/2) sum_r l_r ^ l_r
    let mut r = DoubleFormOf::<Rational>::zero(m, 2, 2);
    for l in sffs {
        let lf = l.to_form();
        r = r.add(&lf.wedge(&lf)?)?;
    }
    let r = r.scale(&rat(1, 2));
    let scalar = sphere_volume(2 * d as i64 + 2 * e as i64 - 1)?
        .div(&sphere_volume(2 * e as i64)?)?
        .scale(&{
            let mut c = Rational::one();
            for _ in 0..=e {
                c *= rat_i64(2);
            }
            c
        });
    let rhs = r
        .pow(e)?
        .map_coefficients(|c| scalar.scale(c));
    Ok(WeylCheck { lhs, rhs })
}
