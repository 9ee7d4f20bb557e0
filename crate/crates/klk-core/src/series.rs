//! Truncated bivariate power series in (xi, eta) over the rationals, and the
//! binomial-series expansion engine behind the generating-function
//! coefficients of the transfer maps.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{binomial_rational, rational_pow, Rational};

/// Sparse bivariate Taylor polynomial: coefficients on xi^i eta^j with
/// i + j <= order. Entries beyond the truncation order are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries2 {
    pub order: u32,
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl PowerSeries2 {
    pub fn zero(order: u32) -> Self {
        PowerSeries2 {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(order: u32) -> Self {
        let mut s = Self::zero(order);
        s.set(0, 0, Rational::one());
        s
    }

    pub fn monomial(order: u32, i: u32, j: u32, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.set(i, j, c);
        s
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Rational {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: u32, j: u32, c: Rational) {
        if i + j > self.order || c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    pub fn add_to(&mut self, i: u32, j: u32, c: Rational) {
        if i + j > self.order || c.is_zero() {
            return;
        }
        let v = self.coefficient(i, j) + c;
        self.set(i, j, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &PowerSeries2) -> PowerSeries2 {
        let order = self.order.min(rhs.order);
        let mut out = PowerSeries2::zero(order);
        for (&(i, j), c) in &self.coeffs {
            out.add_to(i, j, c.clone());
        }
        for (&(i, j), c) in &rhs.coeffs {
            out.add_to(i, j, c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> PowerSeries2 {
        let mut out = PowerSeries2::zero(self.order);
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c.clone() * q.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &PowerSeries2) -> PowerSeries2 {
        let order = self.order.min(rhs.order);
        let mut out = PowerSeries2::zero(order);
        for (&(i1, j1), c1) in &self.coeffs {
            if i1 + j1 > order {
                continue;
            }
            for (&(i2, j2), c2) in &rhs.coeffs {
                if i1 + i2 + j1 + j2 > order {
                    continue;
                }
                out.add_to(i1 + i2, j1 + j2, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Multiply by the monomial xi^i eta^j.
    pub fn shift(&self, i: u32, j: u32) -> PowerSeries2 {
        let mut out = PowerSeries2::zero(self.order);
        for (&(a, b), c) in &self.coeffs {
            out.add_to(a + i, b + j, c.clone());
        }
        out
    }

    /// Partial derivative d^(i+j)/dxi^i deta^j evaluated at the origin,
    /// i.e. i! j! times the Taylor coefficient.
    pub fn derivative_at_zero(&self, i: u32, j: u32) -> Rational {
        self.coefficient(i, j)
            * crate::scalar::factorial(i as u64)
            * crate::scalar::factorial(j as u64)
    }
}

/// One factor `(constant - xi_coeff*xi - eta_coeff*eta)^exponent` of a
/// binomial-series product. Exponents may be any rational (half-integers
/// included).
#[derive(Debug, Clone)]
pub struct AffineFactor {
    pub constant: Rational,
    pub xi_coeff: Rational,
    pub eta_coeff: Rational,
    pub exponent: Rational,
}

impl AffineFactor {
    /// `(1 - a*xi - b*eta)^e`.
    pub fn unit(a: Rational, b: Rational, e: Rational) -> Self {
        AffineFactor {
            constant: Rational::one(),
            xi_coeff: a,
            eta_coeff: b,
            exponent: e,
        }
    }

    fn expand(&self, order: u32) -> Result<PowerSeries2> {
        if self.constant.is_zero() {
            return Err(Error::SingularExpansion(format!(
                "base {} - {} xi - {} eta vanishes at the origin",
                self.constant, self.xi_coeff, self.eta_coeff
            )));
        }
        // (c - a xi - b eta)^e = c^e (1 - (a/c) xi - (b/c) eta)^e
        let scale = rational_pow(&self.constant, &self.exponent).ok_or_else(|| {
            Error::SingularExpansion(format!(
                "scale {}^{} is not rational",
                self.constant, self.exponent
            ))
        })?;
        let a = self.xi_coeff.clone() / self.constant.clone();
        let b = self.eta_coeff.clone() / self.constant.clone();
        // (1 - u)^e = sum_k binom(e,k) (-u)^k with u = a xi + b eta
        let mut out = PowerSeries2::zero(order);
        for k in 0..=order {
            let bk = binomial_rational(&self.exponent, k as u64);
            if bk.is_zero() {
                continue;
            }
            // (-(a xi + b eta))^k expanded
            for i in 0..=k {
                let j = k - i;
                let mut c = bk.clone();
                if k % 2 == 1 {
                    c = -c;
                }
                c *= crate::scalar::binomial(k as i64, i as i64);
                let mut p = c;
                for _ in 0..i {
                    p *= a.clone();
                }
                for _ in 0..j {
                    p *= b.clone();
                }
                out.add_to(i, j, p);
            }
        }
        Ok(out.scale(&scale))
    }
}

/// Taylor expansion of `xi^m eta^p * prod_f f` about the origin, truncated at
/// total order `order`. Exact rational coefficients throughout.
pub fn series_expand(
    factors: &[AffineFactor],
    monomial_prefix: (u32, u32),
    order: u32,
) -> Result<PowerSeries2> {
    let mut acc = PowerSeries2::one(order);
    for f in factors {
        acc = acc.mul(&f.expand(order)?);
    }
    Ok(acc.shift(monomial_prefix.0, monomial_prefix.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_i64};

    /// Independent oracle: symbolic differentiation of
    /// `coeff * xi^m eta^p * prod_i base_i^{e_i + extra_i}` followed by
    /// evaluation at the origin. Expressions are kept as sums of such terms;
    /// differentiation uses the product/power rules only.
    #[derive(Clone)]
    struct Term {
        coeff: Rational,
        m: i64,
        p: i64,
        extra: Vec<Rational>, // exponent shift per factor
    }

    fn differentiate(terms: &[Term], factors: &[AffineFactor], wrt_xi: bool) -> Vec<Term> {
        let mut out = Vec::new();
        for t in terms {
            // monomial part
            let deg = if wrt_xi { t.m } else { t.p };
            if deg > 0 {
                let mut nt = t.clone();
                nt.coeff *= rat_i64(deg);
                if wrt_xi {
                    nt.m -= 1;
                } else {
                    nt.p -= 1;
                }
                out.push(nt);
            }
            // factor parts: d/dx base^e = e * (-a) * base^(e-1)
            for (idx, f) in factors.iter().enumerate() {
                let e = f.exponent.clone() + t.extra[idx].clone();
                let lin = if wrt_xi {
                    f.xi_coeff.clone()
                } else {
                    f.eta_coeff.clone()
                };
                if lin.is_zero() || e.is_zero() {
                    continue;
                }
                let mut nt = t.clone();
                nt.coeff *= e * (-lin);
                nt.extra[idx] -= Rational::one();
                out.push(nt);
            }
        }
        out
    }

    fn eval_at_zero(terms: &[Term], factors: &[AffineFactor]) -> Rational {
        let mut acc = Rational::zero();
        for t in terms {
            if t.m != 0 || t.p != 0 {
                continue;
            }
            // base value at origin is the constant; raise to e + extra
            let mut v = t.coeff.clone();
            let mut ok = true;
            for (idx, f) in factors.iter().enumerate() {
                let e = f.exponent.clone() + t.extra[idx].clone();
                match rational_pow(&f.constant, &e) {
                    Some(c) => v *= c,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            assert!(ok, "oracle requires rational constant powers");
            acc += v;
        }
        acc
    }

    /// Oracle Taylor coefficient of xi^i eta^j.
    fn oracle_coefficient(
        factors: &[AffineFactor],
        prefix: (u32, u32),
        i: u32,
        j: u32,
    ) -> Rational {
        let mut terms = vec![Term {
            coeff: Rational::one(),
            m: prefix.0 as i64,
            p: prefix.1 as i64,
            extra: vec![Rational::zero(); factors.len()],
        }];
        for _ in 0..i {
            terms = differentiate(&terms, factors, true);
        }
        for _ in 0..j {
            terms = differentiate(&terms, factors, false);
        }
        let mut v = eval_at_zero(&terms, factors);
        for k in 1..=i as i64 {
            v /= rat_i64(k);
        }
        for k in 1..=j as i64 {
            v /= rat_i64(k);
        }
        v
    }

    #[test]
    fn binomial_series_basic() {
        // (1 - xi)^(-1/2) to order 2: 1 + xi/2 + 3 xi^2 / 8
        let f = AffineFactor::unit(Rational::one(), Rational::zero(), rat(-1, 2));
        let s = series_expand(&[f], (0, 0), 2).unwrap();
        assert_eq!(s.coefficient(0, 0), Rational::one());
        assert_eq!(s.coefficient(1, 0), rat(1, 2));
        assert_eq!(s.coefficient(2, 0), rat(3, 8));
        assert_eq!(s.coefficient(0, 1), Rational::zero());
    }

    #[test]
    fn constant_one() {
        let s = series_expand(&[], (0, 0), 4).unwrap();
        assert_eq!(s, PowerSeries2::one(4));
    }

    #[test]
    fn singular_base_rejected() {
        let f = AffineFactor {
            constant: Rational::zero(),
            xi_coeff: Rational::one(),
            eta_coeff: Rational::zero(),
            exponent: rat_i64(-1),
        };
        assert!(matches!(
            series_expand(&[f], (0, 0), 2),
            Err(Error::SingularExpansion(_))
        ));
    }

    #[test]
    fn matches_differentiation_oracle() {
        // Representative factor products, including half-integer exponents and
        // a monomial prefix, checked coefficient-by-coefficient against the
        // symbolic differentiation oracle.
        let cases: Vec<(Vec<AffineFactor>, (u32, u32))> = vec![
            (
                vec![
                    AffineFactor::unit(Rational::one(), Rational::one(), rat(-3, 2)),
                    AffineFactor::unit(Rational::zero(), Rational::one(), rat(-1, 2)),
                ],
                (0, 0),
            ),
            (
                vec![
                    AffineFactor::unit(rat(2, 3), rat(-1, 2), rat(5, 2)),
                    AffineFactor::unit(Rational::one(), Rational::zero(), rat_i64(-2)),
                ],
                (1, 2),
            ),
            (
                vec![AffineFactor {
                    constant: rat(9, 4),
                    xi_coeff: rat_i64(1),
                    eta_coeff: rat_i64(2),
                    exponent: rat(1, 2),
                }],
                (2, 0),
            ),
        ];
        for (factors, prefix) in cases {
            let order = 5;
            let s = series_expand(&factors, prefix, order).unwrap();
            for i in 0..=order {
                for j in 0..=(order - i) {
                    assert_eq!(
                        s.coefficient(i, j),
                        oracle_coefficient(&factors, prefix, i, j),
                        "coefficient ({i},{j}) disagrees with the oracle"
                    );
                }
            }
        }
    }

    #[test]
    fn product_of_expansions_is_expansion_of_product() {
        let f1 = AffineFactor::unit(rat(1, 2), rat(1, 3), rat(-5, 2));
        let f2 = AffineFactor::unit(rat(-2, 1), rat(1, 1), rat(3, 2));
        let joint = series_expand(&[f1.clone(), f2.clone()], (0, 0), 6).unwrap();
        let a = series_expand(&[f1], (0, 0), 6).unwrap();
        let b = series_expand(&[f2], (0, 0), 6).unwrap();
        assert_eq!(joint, a.mul(&b));
    }

    #[test]
    fn randomized_factor_pairs_multiply() {
        // series of a product equals the truncated product of the series,
        // over randomized factor pairs with half-integer exponents, order <= 8
        let mut rng = crate::scalar::Prng::new(7);
        for _ in 0..40 {
            let mut draw = |rng: &mut crate::scalar::Prng| AffineFactor::unit(
                rng.small_rational(3, 2),
                rng.small_rational(3, 2),
                rat(rng.below(11) as i64 - 5, 1 + rng.below(2) as i64),
            );
            let f1 = draw(&mut rng);
            let f2 = draw(&mut rng);
            let order = rng.below(9) as u32;
            let joint = series_expand(&[f1.clone(), f2.clone()], (0, 0), order).unwrap();
            let a = series_expand(&[f1], (0, 0), order).unwrap();
            let b = series_expand(&[f2], (0, 0), order).unwrap();
            assert_eq!(joint, a.mul(&b));
        }
    }
}
