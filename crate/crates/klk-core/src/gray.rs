//! The abstract Gray algebra G(n) = Q\[s,t\]/(g_(n+1), g_(n+2)) with exact
//! normal forms, the Catalan pairing, and the bridge to the concrete
//! double-form realization s -> G, t -> g.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{canonical_form, CanonicalKind, DoubleForm};
use crate::quotient::{BasisPreference, GradedQuotient};
use crate::scalar::{binomial, factorial, rat_i64, Rational};

/// Polynomial in s (degree 2) and t (degree 1) with rational coefficients.
/// Canonical: no zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedPoly {
    coeffs: BTreeMap<(u64, u64), Rational>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        GradedPoly::monomial(0, 0, Rational::one())
    }

    pub fn monomial(s_pow: u64, t_pow: u64, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert((s_pow, t_pow), c);
        }
        GradedPoly { coeffs }
    }

    pub fn from_map(coeffs: BTreeMap<(u64, u64), Rational>) -> Self {
        let mut coeffs = coeffs;
        coeffs.retain(|_, c| !c.is_zero());
        GradedPoly { coeffs }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u64, u64), &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, s_pow: u64, t_pow: u64) -> Rational {
        self.coeffs
            .get(&(s_pow, t_pow))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, s_pow: u64, t_pow: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self
            .coeffs
            .entry((s_pow, t_pow))
            .or_insert_with(Rational::zero);
        *e += c;
        if self.coeffs[&(s_pow, t_pow)].is_zero() {
            self.coeffs.remove(&(s_pow, t_pow));
        }
    }

    pub fn add(&self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.coeffs {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &GradedPoly) -> GradedPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> GradedPoly {
        GradedPoly {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> GradedPoly {
        if q.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, v.clone() * q.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (&(a1, b1), c1) in &self.coeffs {
            for (&(a2, b2), c2) in &rhs.coeffs {
                out.add_term(a1 + a2, b1 + b2, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u64) -> GradedPoly {
        let mut acc = GradedPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree (2a + b), None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .keys()
            .map(|&(a, b)| (2 * a + b) as usize)
            .max()
    }

    /// Some(degree) when homogeneous (zero counts as homogeneous of any degree).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.coeffs.keys().map(|&(a, b)| (2 * a + b) as usize);
        let Some(first) = degrees.next() else {
            return Some(0);
        };
        if degrees.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn homogeneous_component(&self, k: usize) -> GradedPoly {
        GradedPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(a, b), _)| (2 * a + b) as usize == k)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if a > 0 {
                write!(f, "*s^{a}")?;
            }
            if b > 0 {
                write!(f, "*t^{b}")?;
            }
        }
        Ok(())
    }
}

/// Catalan number C_k = (2k)!/(k!(k+1)!).
pub fn catalan(k: i64) -> Result<Rational> {
    if k < 0 {
        return Err(Error::Domain(format!("Catalan number of negative index {k}")));
    }
    let k = k as u64;
    Ok(factorial(2 * k) / (factorial(k) * factorial(k + 1)))
}

fn catalan_or_zero(k: i64) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        catalan(k).unwrap()
    }
}

/// g_k(s,t) = sum_i (-1)^i 2^(k-i) binom(k-i, i) s^i t^(k-2i).
pub fn g_poly(k: u64) -> GradedPoly {
    let mut p = GradedPoly::zero();
    for i in 0..=(k / 2) {
        let mut c = binomial((k - i) as i64, i as i64);
        if c.is_zero() {
            continue;
        }
        for _ in 0..(k - i) {
            c *= rat_i64(2);
        }
        if i % 2 == 1 {
            c = -c;
        }
        p.add_term(i, k - 2 * i, c);
    }
    p
}

/// c_(k,p,j) = (-1)^(p+j) 2^j sum_l binom(k+1, 2p+2l+1) binom(p+l, l) binom(p+l, j).
pub fn c_coeff(k: u64, p: u64, j: u64) -> Rational {
    let mut sum = Rational::zero();
    let mut l: i64 = 0;
    while 2 * (p as i64) + 2 * l + 1 <= k as i64 + 1 {
        let b1 = binomial(k as i64 + 1, 2 * p as i64 + 2 * l + 1);
        let b2 = binomial(p as i64 + l, l);
        let b3 = binomial(p as i64 + l, j as i64);
        sum += b1 * b2 * b3;
        l += 1;
    }
    let mut c = sum;
    for _ in 0..j {
        c *= rat_i64(2);
    }
    if (p + j) % 2 == 1 {
        c = -c;
    }
    c
}

/// phi_(k,p)(s,t) = sum_j c_(k,p,j) s^j t^(k-2j), defined for 2p <= k.
pub fn phi_poly(k: u64, p: u64) -> Result<GradedPoly> {
    if 2 * p > k {
        return Err(Error::InvalidIndex(format!("phi_({k},{p}) requires 2p <= k")));
    }
    let mut out = GradedPoly::zero();
    for j in 0..=(k / 2) {
        out.add_term(j, k - 2 * j, c_coeff(k, p, j));
    }
    Ok(out)
}

/// sum_i (-1)^i binom(n+1-i, i) C_(n-k-i), checked against the closed form
/// (-1)^(n-k) binom(k, n-k).
pub fn catalan_alternating_sum(n: i64, k: i64) -> Result<Rational> {
    if n < 0 || k < 0 {
        return Err(Error::Domain("negative index in Catalan sum".into()));
    }
    let mut sum = Rational::zero();
    for i in 0..=(n + 1) {
        let b = binomial(n + 1 - i, i);
        if b.is_zero() {
            continue;
        }
        let c = catalan_or_zero(n - k - i);
        if c.is_zero() {
            continue;
        }
        let term = b * c;
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let mut closed = binomial(k, n - k);
    if (n - k).rem_euclid(2) == 1 {
        closed = -closed;
    }
    if sum != closed {
        return Err(Error::InternalConsistency(format!(
            "Catalan alternating sum ({n},{k}): sum {sum} != closed form {closed}"
        )));
    }
    Ok(sum)
}

/// Normal form of a polynomial in the Gray algebra: a reduced polynomial
/// supported on the per-degree basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayElement {
    pub n: usize,
    pub reduced: GradedPoly,
}

/// The Gray algebra of a fixed complex dimension, with its per-degree
/// reduction tables and the concrete top normalization.
pub struct GrayAlgebra {
    pub n: usize,
    quotient: GradedQuotient,
    top_values: BTreeMap<(u64, u64), Rational>,
}

fn dim_formula(n: usize, k: usize) -> usize {
    if k > 2 * n {
        0
    } else {
        1 + k.min(2 * n - k) / 2
    }
}

static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<GrayAlgebra>>>> = OnceLock::new();

impl GrayAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("Gray algebra needs n >= 1".into()));
        }
        if n > 31 {
            return Err(Error::Domain(format!(
                "concrete double forms are limited to n <= 31, got {n}"
            )));
        }
        let quotient = GradedQuotient::new(
            n,
            &g_poly(n as u64 + 1),
            &g_poly(n as u64 + 2),
            BasisPreference::LowS,
            |k| dim_formula(n, k),
        )?;
        // top normalization: concrete top coefficient of each degree-2n basis
        // monomial, via the double-form realization
        let mut top_values = BTreeMap::new();
        for &(a, b) in quotient.basis(2 * n) {
            let form = realize_monomial(n, a, b)?;
            top_values.insert((a, b), form.top_coefficient()?);
        }
        Ok(GrayAlgebra {
            n,
            quotient,
            top_values,
        })
    }

    /// Shared, cached instance.
    pub fn get(n: usize) -> Result<Arc<GrayAlgebra>> {
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(g) = guard.get(&n) {
            return Ok(g.clone());
        }
        let g = Arc::new(GrayAlgebra::new(n)?);
        guard.insert(n, g.clone());
        Ok(g)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.quotient.dim(k)
    }

    pub fn basis(&self, k: usize) -> &[(u64, u64)] {
        self.quotient.basis(k)
    }

    pub fn normal_form(&self, p: &GradedPoly) -> GrayElement {
        GrayElement {
            n: self.n,
            reduced: self.quotient.normal_form(p),
        }
    }

    /// Multiplication pairing of homogeneous polynomials of complementary
    /// degree: the g^(2n)-normalized top class of x*y, computed abstractly via
    /// the normal form and the concrete normalization of the top basis class.
    pub fn pairing(&self, x: &GradedPoly, y: &GradedPoly) -> Result<Rational> {
        let dx = x.homogeneous_degree();
        let dy = y.homogeneous_degree();
        let (Some(dx), Some(dy)) = (dx, dy) else {
            return Err(Error::Degree("pairing requires homogeneous arguments".into()));
        };
        if !x.is_zero() && !y.is_zero() && dx + dy != 2 * self.n {
            return Err(Error::Degree(format!(
                "pairing degrees {dx} + {dy} != {}",
                2 * self.n
            )));
        }
        let nf = self.quotient.normal_form(&x.mul(y));
        let mut acc = Rational::zero();
        for (&(a, b), c) in nf.terms() {
            let top = self.top_values.get(&(a, b)).ok_or_else(|| {
                Error::InternalConsistency("pairing product is not in top degree".into())
            })?;
            acc += c.clone() * top.clone();
        }
        Ok(acc)
    }
}

fn realize_monomial(n: usize, s_pow: u64, t_pow: u64) -> Result<DoubleForm> {
    let gray = canonical_form(n, CanonicalKind::Gray);
    let g = canonical_form(n, CanonicalKind::Metric);
    gray.pow(s_pow as usize)?.wedge(&g.pow(t_pow as usize)?)
}

/// Concrete realization s -> G, t -> g of a homogeneous polynomial. Degrees
/// above 2n are forced zero; the flag records the truncation.
pub struct Realized {
    pub form: DoubleForm,
    pub truncated: bool,
}

pub fn realize(n: usize, poly: &GradedPoly) -> Result<Realized> {
    if n == 0 || n > 31 {
        return Err(Error::Domain(format!(
            "realization needs 1 <= n <= 31, got {n}"
        )));
    }
    let Some(k) = poly.homogeneous_degree() else {
        return Err(Error::Degree("realize requires a homogeneous polynomial".into()));
    };
    if k > 2 * n {
        let dim = 2 * n;
        return Ok(Realized {
            form: DoubleForm::zero(n, dim.min(k), dim.min(k)),
            truncated: true,
        });
    }
    let mut acc = DoubleForm::zero(n, k, k);
    for (&(a, b), c) in poly.terms() {
        acc = acc.add(&realize_monomial(n, a, b)?.scale(c))?;
    }
    Ok(Realized {
        form: acc,
        truncated: false,
    })
}

/// gray_normal_form(n, poly).
pub fn gray_normal_form(n: usize, poly: &GradedPoly) -> Result<GrayElement> {
    Ok(GrayAlgebra::get(n)?.normal_form(poly))
}

/// gray_pairing(n, x, y).
pub fn gray_pairing(n: usize, x: &GradedPoly, y: &GradedPoly) -> Result<Rational> {
    GrayAlgebra::get(n)?.pairing(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0).unwrap(), Rational::one());
        assert_eq!(catalan(3).unwrap(), rat_i64(5));
        assert_eq!(catalan(4).unwrap(), rat_i64(14));
        assert!(catalan(-1).is_err());
    }

    #[test]
    fn g_poly_values() {
        assert_eq!(g_poly(0), GradedPoly::one());
        assert_eq!(g_poly(1), GradedPoly::monomial(0, 1, rat_i64(2)));
        // g2 = 4t^2 - 2s
        let mut g2 = GradedPoly::monomial(0, 2, rat_i64(4));
        g2.add_term(1, 0, rat_i64(-2));
        assert_eq!(g_poly(2), g2);
        // relation 2s g_k - 2t g_(k+1) + g_(k+2) = 0
        for k in 0..=8u64 {
            let s = GradedPoly::monomial(1, 0, rat_i64(2));
            let t = GradedPoly::monomial(0, 1, rat_i64(2));
            let r = s
                .mul(&g_poly(k))
                .sub(&t.mul(&g_poly(k + 1)))
                .add(&g_poly(k + 2));
            assert!(r.is_zero(), "relation fails at k={k}");
        }
    }

    #[test]
    fn g_poly_generating_function() {
        // series of (1 - 2tx + 2sx^2)^(-1) reproduces g_k for k <= 10:
        // iterate G_k = 2t G_(k-1) - 2s G_(k-2)
        let mut prev = GradedPoly::one();
        let mut cur = GradedPoly::monomial(0, 1, rat_i64(2));
        assert_eq!(prev, g_poly(0));
        assert_eq!(cur, g_poly(1));
        for k in 2..=10u64 {
            let next = GradedPoly::monomial(0, 1, rat_i64(2))
                .mul(&cur)
                .sub(&GradedPoly::monomial(1, 0, rat_i64(2)).mul(&prev));
            assert_eq!(next, g_poly(k), "generating function mismatch at k={k}");
            prev = cur;
            cur = next;
        }
    }

    #[test]
    fn c_coeff_values() {
        assert_eq!(c_coeff(0, 0, 0), Rational::one());
        assert_eq!(c_coeff(2, 1, 1), rat_i64(2));
        assert_eq!(c_coeff(2, 1, 0), rat_i64(-1));
        // eq:sum_p instances
        for k in 0..=8u64 {
            for j in 0..=(k / 2) {
                let mut sum = Rational::zero();
                for p in 0..=(k / 2) {
                    sum += c_coeff(k, p, j);
                }
                let expected = if j == 0 { rat_i64(k as i64 + 1) } else { Rational::zero() };
                assert_eq!(sum, expected, "sum_p c_({k},p,{j})");
            }
        }
    }

    #[test]
    fn c_coeff_generating_function() {
        // c_(k,p,j) = coefficient of x^j y^p z^k in
        // [(1-z)^2 - (1-2x)(1-y) z^2]^(-1), expanded as a geometric series in
        // z^2 (1-2x)(1-y) / (1-z)^2.
        let kmax = 8usize;
        // work with dense arrays indexed [j][p][k]
        let mut coeff = vec![vec![vec![Rational::zero(); kmax + 1]; kmax + 1]; kmax + 1];
        // (1-z)^(-2r-2) = sum_m binom(m + 2r + 1, 2r + 1) z^m
        for r in 0..=(kmax / 2) {
            // (1-2x)^r (1-y)^r z^(2r) / (1-z)^(2r+2)
            for a in 0..=r {
                for b in 0..=r {
                    // x^a coefficient of (1-2x)^r: binom(r,a) (-2)^a
                    let mut cx = binomial(r as i64, a as i64);
                    for _ in 0..a {
                        cx *= rat_i64(-2);
                    }
                    let mut cy = binomial(r as i64, b as i64);
                    if b % 2 == 1 {
                        cy = -cy;
                    }
                    for m in 0..=(kmax.saturating_sub(2 * r)) {
                        let cz = binomial((m + 2 * r + 1) as i64, (2 * r + 1) as i64);
                        let k = m + 2 * r;
                        if k <= kmax && a <= kmax && b <= kmax {
                            let v = cx.clone() * cy.clone() * cz;
                            coeff[a][b][k] += v;
                        }
                    }
                }
            }
        }
        for k in 0..=kmax as u64 {
            for p in 0..=(k / 2) {
                for j in 0..=(k / 2) {
                    assert_eq!(
                        c_coeff(k, p, j),
                        coeff[j as usize][p as usize][k as usize],
                        "c_({k},{p},{j}) vs generating function"
                    );
                }
            }
        }
    }

    #[test]
    fn phi_poly_values() {
        assert_eq!(phi_poly(0, 0).unwrap(), GradedPoly::one());
        // phi_(2,1) = 2s - t^2, phi_(2,0) = -2s + 4t^2
        let mut p21 = GradedPoly::monomial(1, 0, rat_i64(2));
        p21.add_term(0, 2, rat_i64(-1));
        assert_eq!(phi_poly(2, 1).unwrap(), p21);
        let mut p20 = GradedPoly::monomial(1, 0, rat_i64(-2));
        p20.add_term(0, 2, rat_i64(4));
        assert_eq!(phi_poly(2, 0).unwrap(), p20);
        assert!(phi_poly(1, 1).is_err());
        // recurrence (k+2) t phi_(k,p) = 2(p+1) phi_(k+1,p+1) + (k-2p+1) phi_(k+1,p);
        // phi_(k,p) with 2p > k has all coefficients zero
        let phi_or_zero = |k: u64, p: u64| {
            if 2 * p <= k {
                phi_poly(k, p).unwrap()
            } else {
                GradedPoly::zero()
            }
        };
        for k in 0..=8u64 {
            for p in 0..=(k / 2) {
                let lhs = GradedPoly::monomial(0, 1, rat_i64(k as i64 + 2))
                    .mul(&phi_poly(k, p).unwrap());
                let rhs = phi_or_zero(k + 1, p + 1)
                    .scale(&rat_i64(2 * (p as i64 + 1)))
                    .add(&phi_or_zero(k + 1, p).scale(&rat_i64(k as i64 - 2 * p as i64 + 1)));
                assert_eq!(lhs, rhs, "recurrence at k={k}, p={p}");
            }
        }
    }

    #[test]
    fn rec_relation2() {
        // (j+1) c_(k,p,j+1) + (k-2j) c_(k,p,j) = (k+1) c_(k-1,p,j)
        for k in 1..=10u64 {
            for p in 0..=(k / 2) {
                for j in 0..=(k / 2) {
                    let lhs = c_coeff(k, p, j + 1) * rat_i64(j as i64 + 1)
                        + c_coeff(k, p, j) * rat_i64(k as i64 - 2 * j as i64);
                    let rhs = c_coeff(k - 1, p, j) * rat_i64(k as i64 + 1);
                    assert_eq!(lhs, rhs, "k={k} p={p} j={j}");
                }
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let s = GradedPoly::monomial(1, 0, Rational::one());
        let t2 = GradedPoly::monomial(0, 2, Rational::one());
        // n=1: s and 2t^2 share a normal form
        assert_eq!(
            gray_normal_form(1, &s).unwrap(),
            gray_normal_form(1, &t2.scale(&rat_i64(2))).unwrap()
        );
        // n=1: t^3 -> 0
        assert!(gray_normal_form(1, &GradedPoly::monomial(0, 3, Rational::one()))
            .unwrap()
            .reduced
            .is_zero());
        // 1 -> 1
        assert_eq!(
            gray_normal_form(2, &GradedPoly::one()).unwrap().reduced,
            GradedPoly::one()
        );
    }

    #[test]
    fn gray_relations_vanish() {
        for n in 1..=3usize {
            for d in [1u64, 2] {
                let rel = g_poly(n as u64 + d);
                assert!(
                    gray_normal_form(n, &rel).unwrap().reduced.is_zero(),
                    "g_(n+{d}) does not vanish in G({n})"
                );
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let s = GradedPoly::monomial(1, 0, Rational::one());
        let t2 = GradedPoly::monomial(0, 2, Rational::one());
        assert_eq!(gray_pairing(2, &t2, &t2).unwrap(), Rational::one());
        assert_eq!(gray_pairing(2, &s, &t2).unwrap(), Rational::one());
        assert_eq!(gray_pairing(2, &s, &s).unwrap(), rat_i64(2));
        // degree mismatch rejected
        assert!(gray_pairing(2, &s, &s.mul(&s)).is_err());
    }

    #[test]
    fn catalan_sum_examples() {
        assert_eq!(catalan_alternating_sum(2, 1).unwrap(), rat_i64(-1));
        assert_eq!(catalan_alternating_sum(5, 2).unwrap(), Rational::zero());
        assert_eq!(catalan_alternating_sum(3, 3).unwrap(), Rational::one());
        // zero whenever n > 2k
        for n in 0..=10 {
            for k in 0..=10 {
                let v = catalan_alternating_sum(n, k).unwrap();
                if n > 2 * k {
                    assert!(v.is_zero(), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn realize_examples() {
        // realize(2, t) = g
        let t = GradedPoly::monomial(0, 1, Rational::one());
        assert_eq!(
            realize(2, &t).unwrap().form,
            canonical_form(2, CanonicalKind::Metric)
        );
        // realize(1, s) = G = 2 g^2 on C^1
        let s = GradedPoly::monomial(1, 0, Rational::one());
        let r = realize(1, &s).unwrap();
        assert!(!r.truncated);
        let g = canonical_form(1, CanonicalKind::Metric);
        assert_eq!(r.form, g.pow(2).unwrap().scale(&rat_i64(2)));
        // degree > 2n: zero with flag
        let deep = GradedPoly::monomial(0, 5, Rational::one());
        let r = realize(1, &deep).unwrap();
        assert!(r.truncated && r.form.is_zero());
        // non-homogeneous rejected
        assert!(realize(1, &t.add(&s)).is_err());
    }

    #[test]
    fn phi_2p_p_in_low_degree() {
        // phi_(2p,p) = (2p+1) t^(2p) as an element of G(p)
        for p in 1..=3usize {
            let phi = phi_poly(2 * p as u64, p as u64).unwrap();
            let target = GradedPoly::monomial(0, 2 * p as u64, rat_i64(2 * p as i64 + 1));
            assert_eq!(
                gray_normal_form(p, &phi).unwrap(),
                gray_normal_form(p, &target).unwrap()
            );
        }
    }

    #[test]
    fn rat_parse_display_helper() {
        assert_eq!(rat(3, 4) + rat(1, 4), Rational::one());
    }
}
