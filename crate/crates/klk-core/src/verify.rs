//! Verification batteries behind `verify --suite ...`: each check runs one
//! invariant family at its stated bounds and reports pass/fail with a witness
//! on failure. All checks are exact; there are no tolerances.

use std::ops::Mul as _;

use num_traits::{One, Zero};

use crate::curv::{
    self, curv_basis, glob_curved, glob_flat, module_multiply, semi_local_kbar, CurvElement,
    CurvSymbol, Generator, ModuleTable,
};
use crate::error::Result;
use crate::forms::{canonical_form, CanonicalKind, DoubleForm};
use crate::gray::{
    catalan, catalan_alternating_sum, c_coeff, g_poly, phi_poly, realize, GradedPoly,
    GrayAlgebra,
};
use crate::json;
use crate::kahler::{embedded_span_dim, gauss_from_complex, ComplexSff, KahlerTensor};
use crate::linalg;
use crate::scalar::{factorial, rat_i64, PiLambda, Prng, Rational};
use crate::space_forms::{expand_r_mu, expand_r_tau, CurvedValuation, SpaceForm};
use crate::valuations::{FlatTag, FlatValuation, ValAlgebra};
use crate::weyl;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(id: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(id: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn skip(id: impl Into<String>, note: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status: Status::Skip,
            witness: Some(note.into()),
        }
    }

    fn from_result(id: impl Into<String>, r: Result<Option<String>>) -> Self {
        match r {
            Ok(None) => Check::pass(id),
            Ok(Some(witness)) => Check::fail(id, witness),
            Err(e) => Check::fail(id, format!("error: {e}")),
        }
    }
}

/// Deterministic random rational polynomial, homogeneous of the given degree.
pub fn random_homogeneous_poly(rng: &mut Prng, degree: usize) -> GradedPoly {
    let mut p = GradedPoly::zero();
    for a in 0..=(degree / 2) {
        p.add_term(a as u64, (degree - 2 * a) as u64, rng.small_rational(6, 3));
    }
    p
}

/// Deterministic pool of embedded Kaehler tensors on C^n.
pub fn embedded_tensor_pool(n: usize, count: usize, seed: u64) -> Result<Vec<KahlerTensor>> {
    let mut rng = Prng::new(seed ^ 0x9e3779b97f4a7c15);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let sffs: Vec<ComplexSff> = (0..1 + rng.below(2) as usize)
            .map(|_| ComplexSff::random(n, &mut rng))
            .collect();
        out.push(gauss_from_complex(n, &sffs)?);
    }
    Ok(out)
}

fn top_value(f: &DoubleForm) -> Result<Rational> {
    let dim = 2 * f.n();
    let full: Vec<u8> = (1..=dim as u8).collect();
    Ok(f.coefficient(&full, &full))
}

// ---------------------------------------------------------------- gray suite

/// Criterion: realize(n, g_(n+1)) = realize(n, g_(n+2)) = 0 (concrete).
pub fn check_gray_relations(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(Check::from_result(format!("gray.relations_vanish.n{n}"), (|| {
            for d in [1u64, 2] {
                let r = realize(n, &g_poly(n as u64 + d))?;
                if !r.form.is_zero() {
                    return Ok(Some(format!(
                        "realize({n}, g_(n+{d})) != 0: {}",
                        json::double_form_to_string(&r.form)
                    )));
                }
            }
            Ok(None)
        })()));
    }
    out
}

/// Criterion: concrete rank of span(G^j g^(p-2j)) = 1 + floor(min(p,2n-p)/2).
pub fn check_gray_dims_concrete(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(Check::from_result(format!("gray.dims_concrete.n{n}"), (|| {
            for p in 0..=(2 * n) {
                let mut vectors = Vec::new();
                for j in 0..=(p / 2) {
                    let f = realize(
                        n,
                        &GradedPoly::monomial(j as u64, (p - 2 * j) as u64, Rational::one()),
                    )?;
                    vectors.push(f.form.to_vector());
                }
                let rank = linalg::rank(&vectors);
                let expected = 1 + p.min(2 * n - p) / 2;
                if rank != expected {
                    return Ok(Some(format!(
                        "degree {p}: concrete rank {rank} != {expected}"
                    )));
                }
            }
            Ok(None)
        })()));
    }
    out
}

/// Criterion: gray_pairing = 2^m C_(n-m)/C_n abstractly and by brute-force
/// wedge; unnormalized Hankel determinants of sizes <= 4 equal 1.
pub fn check_gray_pairing(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(Check::from_result(format!("gray.pairing_catalan.n{n}"), (|| {
            let alg = GrayAlgebra::get(n)?;
            let cn = catalan(n as i64)?;
            // brute-force wedge values per total s-power m
            for m in 0..=n {
                let expected = {
                    let mut v = catalan((n - m) as i64)? / cn.clone();
                    for _ in 0..m {
                        v *= rat_i64(2);
                    }
                    v
                };
                // abstract: choose a complementary pair with total s-power m
                for i in 0..=m {
                    let j = m - i;
                    for p in (2 * i)..=(2 * n).min(2 * n - 2 * j) {
                        let q = 2 * n - p;
                        if p < 2 * i || q < 2 * j || p > 2 * n {
                            continue;
                        }
                        let x = GradedPoly::monomial(i as u64, (p - 2 * i) as u64, Rational::one());
                        let y = GradedPoly::monomial(j as u64, (q - 2 * j) as u64, Rational::one());
                        let abstract_value = alg.pairing(&x, &y)?;
                        if abstract_value != expected {
                            return Ok(Some(format!(
                                "abstract <s^{i} t^{}, s^{j} t^{}> = {abstract_value} != {expected}",
                                p - 2 * i,
                                q - 2 * j
                            )));
                        }
                    }
                }
                // concrete: top(G^m g^(2n-2m)) = 2^m C_(n-m)/C_n
                let f = realize(n, &GradedPoly::monomial(m as u64, (2 * n - 2 * m) as u64, Rational::one()))?;
                let concrete = f.form.top_coefficient()?;
                if concrete != expected {
                    return Ok(Some(format!(
                        "brute-force top(G^{m} g^(2n-2{m})) = {concrete} != {expected}"
                    )));
                }
            }
            Ok(None)
        })()));
    }
    out.push(Check::from_result("gray.hankel_determinants", (|| {
        // det (C_(i+j))_(0..m) = 1 and det (C_(i+j+1))_(0..m) = 1, m <= 3
        for m in 0..=3usize {
            for shift in [0i64, 1] {
                let mat: linalg::Matrix = (0..=m)
                    .map(|i| {
                        (0..=m)
                            .map(|j| catalan((i + j) as i64 + shift).unwrap())
                            .collect()
                    })
                    .collect();
                let det = linalg::determinant(&mat);
                if det != Rational::one() {
                    return Ok(Some(format!(
                        "Catalan Hankel det (size {}, shift {shift}) = {det}",
                        m + 1
                    )));
                }
            }
        }
        Ok(None)
    })()));
    // mixed scaled monomial bases: pairing matrix = C_n^(-1) (C_(a+b))
    out.push(Check::from_result("gray.pairing_matrix_hankel", (|| {
        for n in 2..=n_max.min(3) {
            for m in 0..=(n / 2) {
                let alg = GrayAlgebra::get(n)?;
                let cn = catalan(n as i64)?;
                for (a, b) in (0..=m).flat_map(|a| (0..=m).map(move |b| (a, b))) {
                    // u_a = 2^(a-m) G^(m-a) g^(2a), w_b = 2^(b-(n-m)) G^(n-m-b) g^(2b)
                    let mut ca = Rational::one();
                    for _ in 0..(m - a) {
                        ca /= rat_i64(2);
                    }
                    let mut cb = Rational::one();
                    for _ in 0..(n - m - b) {
                        cb /= rat_i64(2);
                    }
                    let x = GradedPoly::monomial((m - a) as u64, 2 * a as u64, ca);
                    let y = GradedPoly::monomial((n - m - b) as u64, 2 * b as u64, cb);
                    let got = alg.pairing(&x, &y)?;
                    let expected = catalan((a + b) as i64)? / cn.clone();
                    if got != expected {
                        return Ok(Some(format!(
                            "n={n} m={m}: matrix entry ({a},{b}) = {got} != C_(a+b)/C_n = {expected}"
                        )));
                    }
                }
            }
        }
        Ok(None)
    })()));
    out
}

/// Criterion: G^p ^ R^q ^ g^(2(n-p-q)) = 2^p C_(n-p-q)/C_(n-q) R^q ^ g^(2(n-q))
/// for seeded random embedded tensors.
pub fn check_int_term(n_max: usize, tensors_per_n: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(Check::from_result(format!("gray.int_term.n{n}"), (|| {
            let pool = embedded_tensor_pool(n, tensors_per_n, seed + n as u64)?;
            let g = canonical_form(n, CanonicalKind::Metric);
            let gray_form = canonical_form(n, CanonicalKind::Gray);
            for (ti, t) in pool.iter().enumerate() {
                // powers of R
                let mut rpow = vec![DoubleForm::zero(n, 0, 0)];
                rpow[0].set_coefficient(vec![], vec![], Rational::one());
                for q in 1..=n {
                    rpow.push(rpow[q - 1].wedge(t.form())?);
                }
                for q in 0..=n {
                    let rhs_base = rpow[q].wedge(&g.pow(2 * (n - q))?)?;
                    let rhs_top = top_value(&rhs_base)?;
                    for p in 0..=(n - q) {
                        let lhs = gray_form
                            .pow(p)?
                            .wedge(&rpow[q])?
                            .wedge(&g.pow(2 * (n - p - q))?)?;
                        let lhs_top = top_value(&lhs)?;
                        let mut factor = catalan((n - p - q) as i64)? / catalan((n - q) as i64)?;
                        for _ in 0..p {
                            factor *= rat_i64(2);
                        }
                        if lhs_top != factor.clone() * rhs_top.clone() {
                            return Ok(Some(format!(
                                "tensor {ti}, p={p}, q={q}: {lhs_top} != {} * {rhs_top}",
                                factor
                            )));
                        }
                    }
                }
            }
            Ok(None)
        })()));
    }
    out
}

/// Criterion: phi_(k,p) ^ R^(n-k/2) = (2p+1) R^(n-p) ^ g^(2p) when k = 2p
/// and 0 when k > 2p, for even k and embedded tensors.
pub fn check_poincare_gray(n_max: usize, tensors_per_n: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(Check::from_result(format!("gray.poincare.n{n}"), (|| {
            let pool = embedded_tensor_pool(n, tensors_per_n, seed + n as u64)?;
            let g = canonical_form(n, CanonicalKind::Metric);
            for (ti, t) in pool.iter().enumerate() {
                for p in 0..=n {
                    for k in ((2 * p)..=(2 * n)).step_by(2) {
                        let phi = realize(n, &phi_poly(k as u64, p as u64)?)?;
                        if phi.truncated {
                            continue;
                        }
                        let lhs = phi.form.wedge(&t.form().pow(n - k / 2)?)?;
                        let expected = if k == 2 * p {
                            t.form()
                                .pow(n - p)?
                                .wedge(&g.pow(2 * p)?)?
                                .scale(&rat_i64(2 * p as i64 + 1))
                        } else {
                            DoubleForm::zero(n, 2 * n, 2 * n)
                        };
                        if lhs != expected {
                            return Ok(Some(format!(
                                "tensor {ti}: phi_({k},{p}) ^ R^{} mismatch",
                                n - k / 2
                            )));
                        }
                    }
                }
            }
            Ok(None)
        })()));
    }
    out
}

/// Abstract Gray-algebra identities: recRelation2, g_kp_zero, phi_(2p,p),
/// dim formula, Catalan sums, abstract-vs-concrete coherence.
pub fn check_gray_abstract(n_max: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::from_result("gray.rec_relation2", (|| {
        for k in 1..=10u64 {
            for p in 0..=(k / 2) {
                for j in 0..=(k / 2) {
                    let lhs = c_coeff(k, p, j + 1) * rat_i64(j as i64 + 1)
                        + c_coeff(k, p, j) * rat_i64(k as i64 - 2 * j as i64);
                    let rhs = c_coeff(k - 1, p, j) * rat_i64(k as i64 + 1);
                    if lhs != rhs {
                        return Ok(Some(format!("k={k} p={p} j={j}: {lhs} != {rhs}")));
                    }
                }
            }
        }
        Ok(None)
    })()));
    out.push(Check::from_result("gray.sum_p", (|| {
        for k in 0..=8u64 {
            for j in 0..=(k / 2) {
                let sum: Rational = (0..=(k / 2)).map(|p| c_coeff(k, p, j)).sum();
                let expected = if j == 0 {
                    rat_i64(k as i64 + 1)
                } else {
                    Rational::zero()
                };
                if sum != expected {
                    return Ok(Some(format!("sum_p c_({k},p,{j}) = {sum} != {expected}")));
                }
            }
        }
        Ok(None)
    })()));
    out.push(Check::from_result("gray.catalan_alternating_sum", (|| {
        for n in 0..=10i64 {
            for k in 0..=10i64 {
                // the closed-form comparison is inside the function
                catalan_alternating_sum(n, k)?;
            }
        }
        Ok(None)
    })()));
    for n in 1..=n_max {
        out.push(Check::from_result(format!("gray.g_kp_zero.n{n}"), (|| {
            let alg = GrayAlgebra::get(n)?;
            for k in 0..=(2 * n as u64 + 2) {
                for p in 0..=(k / 2) {
                    if k as i64 - p as i64 <= n as i64 {
                        continue;
                    }
                    let nf = alg.normal_form(&phi_poly(k, p)?);
                    if !nf.reduced.is_zero() {
                        return Ok(Some(format!("phi_({k},{p}) != 0 in G({n})")));
                    }
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("gray.dim_formula.n{n}"), (|| {
            let alg = GrayAlgebra::get(n)?;
            for p in 0..=(2 * n) {
                let expected = 1 + p.min(2 * n - p) / 2;
                if alg.dim(p) != expected {
                    return Ok(Some(format!("dim G_{p}({n}) = {} != {expected}", alg.dim(p))));
                }
            }
            Ok(None)
        })()));
    }
    out.push(Check::from_result("gray.phi_2pp", (|| {
        for p in 1..=4usize {
            let alg = GrayAlgebra::get(p)?;
            let phi = alg.normal_form(&phi_poly(2 * p as u64, p as u64)?);
            let target = alg.normal_form(&GradedPoly::monomial(
                0,
                2 * p as u64,
                rat_i64(2 * p as i64 + 1),
            ));
            if phi != target {
                return Ok(Some(format!("phi_(2p,p) != (2p+1) t^(2p) in G({p})")));
            }
        }
        Ok(None)
    })()));
    for n in 1..=n_max.min(3) {
        out.push(Check::from_result(format!("gray.coherence.n{n}"), (|| {
            let alg = GrayAlgebra::get(n)?;
            let mut rng = Prng::new(seed + 977 * n as u64);
            for _ in 0..6 {
                let deg = rng.below(2 * n as u64 + 1) as usize;
                let x = random_homogeneous_poly(&mut rng, deg);
                let y = random_homogeneous_poly(&mut rng, deg);
                let same_abstract = alg.normal_form(&x) == alg.normal_form(&y);
                let diff = realize(n, &x.sub(&y))?;
                let same_concrete = diff.form.is_zero();
                if same_abstract != same_concrete {
                    return Ok(Some(format!(
                        "abstract/concrete disagreement at degree {deg}: nf-equal {same_abstract}, realize-zero {same_concrete}"
                    )));
                }
                // and the normal form itself realizes to the same form
                let nf = alg.normal_form(&x);
                let direct = realize(n, &x)?;
                let via_nf = realize(n, &nf.reduced)?;
                let equal = if direct.form.is_zero() || via_nf.form.is_zero() {
                    direct.form.is_zero() && via_nf.form.is_zero()
                } else {
                    direct.form == via_nf.form
                };
                if !equal {
                    return Ok(Some(format!("normal form changes the realization at degree {deg}")));
                }
            }
            Ok(None)
        })()));
    }
    out
}

/// Criterion: embedded span dimensions binom(m+1,2)^2.
pub fn check_embedded_span(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (m, expected) in [(1usize, 1usize), (2, 9), (3, 36)] {
        out.push(Check::from_result(format!("gray.embedded_span.m{m}"), (|| {
            let got = embedded_span_dim(m, 4, seed)?;
            if got != expected {
                return Ok(Some(format!("embedded_span_dim({m}) = {got} != {expected}")));
            }
            Ok(None)
        })()));
    }
    out
}

pub fn suite_gray(n_max: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.extend(check_gray_relations(n_max.min(3)));
    out.extend(check_gray_dims_concrete(n_max.min(3)));
    out.extend(check_gray_pairing(n_max.min(4)));
    out.extend(check_int_term(n_max.min(3), 20, seed));
    out.extend(check_poincare_gray(n_max.min(3), 20, seed));
    out.extend(check_gray_abstract(n_max.min(4), seed));
    out.extend(check_embedded_span(seed));
    out
}

// ---------------------------------------------------------------- weyl suite

pub fn suite_weyl(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::from_result("weyl.volume_recursion", (|| {
        for n in 0..=10i64 {
            for l in 1..=4i64 {
                let mut denom = Rational::one();
                let mut i = n + 2 * l;
                while i > n {
                    denom *= rat_i64(i);
                    i -= 2;
                }
                let mut two_l = Rational::one();
                for _ in 0..l {
                    two_l *= rat_i64(2);
                }
                let rhs = weyl::ball_volume(n)?.mul_pi(l).scale(&(two_l / denom));
                if weyl::ball_volume(n + 2 * l)? != rhs {
                    return Ok(Some(format!("omega recursion fails at n={n}, l={l}")));
                }
            }
        }
        Ok(None)
    })()));
    out.push(Check::from_result("weyl.d_recursion", (|| {
        for n in 0..=8i64 {
            for k in 0..=n {
                for l in 0..=(n / 2) {
                    if n - 2 * l - k < 1 {
                        continue;
                    }
                    let lhs = weyl::d_int(n, k, l)?.scale(&rat_i64(n - 2 * l - k - 1));
                    let rhs = weyl::d_int(n, k, l + 1)?.scale(&rat_i64(l + 1));
                    if lhs != rhs {
                        return Ok(Some(format!("d recursion fails at ({n},{k},{l})")));
                    }
                }
            }
        }
        Ok(None)
    })()));
    out.push(Check::from_result("weyl.d_relation_1", (|| {
        for n in 1..=6i64 {
            for m in 0..n {
                for k in 0..=(2 * m) {
                    for l in 0..=n {
                        for e in 0..=n {
                            let rem_n = 2 * n - 2 * l - k;
                            let rem_m = 2 * m - 2 * l - 2 * e - k;
                            if rem_n < 0 || rem_m < 0 {
                                continue;
                            }
                            let mut fact = weyl::ball_volume(rem_n)?
                                .scale(&factorial(rem_n as u64))
                                .div(
                                    &weyl::ball_volume(rem_m)?
                                        .scale(&factorial(rem_m as u64)),
                                )?;
                            let mut two_pi_e = PiLambda::monomial(
                                {
                                    let mut c = Rational::one();
                                    for _ in 0..e {
                                        c *= rat_i64(2);
                                    }
                                    c * factorial(e as u64)
                                },
                                e,
                                0,
                            );
                            two_pi_e = PiLambda::one().div(&two_pi_e)?;
                            fact = fact.mul(two_pi_e);
                            let lhs = weyl::d_int(2 * n, k, l)?.mul(fact);
                            let rhs = weyl::d_int(2 * m, k, l + e)?
                                .scale(&crate::scalar::binomial(l + e, e));
                            if lhs != rhs {
                                return Ok(Some(format!(
                                    "d relation 1 fails at n={n} m={m} k={k} l={l} e={e}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    })()));
    out.push(Check::from_result("weyl.d_relation_2", (|| {
        for n in 1..=6i64 {
            for m in 0..n {
                for k2 in 0..=m {
                    let k = 2 * k2; // even k only
                    for l in 0..=n {
                        let rem_n = 2 * n - 2 * l - k;
                        let rem_m1 = 2 * m - 2 * l - k + 1;
                        if rem_n < 0 || rem_m1 < 0 {
                            continue;
                        }
                        let mut pow2 = Rational::one();
                        for _ in 0..(m - l - k2 + 1).max(0) {
                            pow2 *= rat_i64(2);
                        }
                        if m - l - k2 + 1 < 0 {
                            let mut p = Rational::one();
                            for _ in 0..(-(m - l - k2 + 1)) {
                                p *= rat_i64(2);
                            }
                            pow2 = p.recip();
                        }
                        let lhs = weyl::d_int(2 * n, k, l)?
                            .scale(&(factorial(rem_n as u64) / factorial(rem_m1 as u64)))
                            .scale(&pow2)
                            .mul(weyl::ball_volume(rem_n)?.div(&weyl::ball_volume(rem_m1)?)?);
                        let mut pow2m = Rational::one();
                        for _ in 0..(m - k2) {
                            pow2m *= rat_i64(2);
                        }
                        let rhs = PiLambda::pi_pow(k)
                            .div(&weyl::ball_volume(k)?.scale(&factorial((k + 1) as u64)))?
                            .scale(
                                &(crate::scalar::binomial(m - k2, l)
                                    / (factorial(k2 as u64)
                                        * factorial((m - k2) as u64)
                                        * pow2m)),
                            )
                            .mul_pi(-m);
                        if lhs != rhs {
                            return Ok(Some(format!(
                                "d relation 2 fails at n={n} m={m} k={k} l={l}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    })()));
    out.push(Check::from_result("weyl.cos_sin", (|| {
        // the beta-route/sphere-ratio cross check is internal to the function
        for a in 0..=10u64 {
            for b in 0..=10u64 {
                let v = weyl::cos_sin_integral(a, b)?;
                if v != weyl::cos_sin_integral(b, a)? {
                    return Ok(Some(format!("cos/sin swap symmetry fails at ({a},{b})")));
                }
                if a == 0 && b == 0 && v != PiLambda::monomial(crate::scalar::rat(1, 2), 1, 0) {
                    return Ok(Some("cos_sin(0,0) != pi/2".into()));
                }
            }
        }
        Ok(None)
    })()));
    out.push(Check::from_result("weyl.integral_check", (|| {
        let mut rng = Prng::new(seed ^ 0x5bd1e995);
        let mut draws = 0usize;
        'outer: for d in 1..=2usize {
            for e in 0..=2usize {
                for m in 1..=2usize {
                    for _ in 0..3 {
                        if draws >= 25 {
                            break 'outer;
                        }
                        draws += 1;
                        let sffs: Vec<crate::kahler::SymBilinear> = (0..d)
                            .flat_map(|_| {
                                let s = ComplexSff::random(m, &mut rng);
                                let (a, b) = s.to_real_pair();
                                [a, b]
                            })
                            .collect();
                        let check = weyl::weyl_integral_check(d, e, m, &sffs)?;
                        if !check.equal() {
                            return Ok(Some(format!("Weyl lemma fails at d={d} e={e} m={m}")));
                        }
                        // odd powers vanish
                        let odd = weyl::integrate_h_power(d, 2 * e + 1, m, &sffs)?;
                        if !odd.is_zero() {
                            return Ok(Some(format!(
                                "odd sphere average does not vanish at d={d} e={e} m={m}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    })()));
    out
}

// ------------------------------------------------------------- unitary suite

pub fn suite_unitary(n_max: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 0..=n_max.min(4) {
        out.push(Check::from_result(format!("unitary.dims.n{n}"), (|| {
            let alg = ValAlgebra::get(n)?;
            for k in 0..=(2 * n) {
                let expected = 1 + (k / 2).min((2 * n - k) / 2);
                if alg.dim(k) != expected {
                    return Ok(Some(format!("dim Val_{k} = {} != {expected}", alg.dim(k))));
                }
            }
            Ok(None)
        })()));
    }
    for n in 1..=n_max.min(3) {
        out.push(Check::from_result(format!("unitary.ring_axioms.n{n}"), (|| {
            let alg = ValAlgebra::get(n)?;
            let mut rng = Prng::new(seed + 131 * n as u64);
            for _ in 0..5 {
                let mk = |rng: &mut Prng| {
                    let mut p = GradedPoly::zero();
                    for _ in 0..3 {
                        let a = rng.below(n as u64 + 1);
                        let b = rng.below(2);
                        p.add_term(a, b, rng.small_rational(5, 3));
                    }
                    alg.normal_form(&p)
                };
                let x = mk(&mut rng);
                let y = mk(&mut rng);
                let z = mk(&mut rng);
                if alg.multiply(&x, &y)? != alg.multiply(&y, &x)? {
                    return Ok(Some("multiplication is not commutative".into()));
                }
                let assoc1 = alg.multiply(&alg.multiply(&x, &y)?, &z)?;
                let assoc2 = alg.multiply(&x, &alg.multiply(&y, &z)?)?;
                if assoc1 != assoc2 {
                    return Ok(Some("multiplication is not associative".into()));
                }
                if alg.multiply(&alg.chi(), &x)? != x {
                    return Ok(Some("chi is not the unit".into()));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("unitary.round_trips.n{n}"), (|| {
            let alg = ValAlgebra::get(n)?;
            for (k, p) in alg.all_indices() {
                let x = alg.mu(k, p)?;
                for path in [
                    [FlatTag::Monomial, FlatTag::Tau, FlatTag::Mu],
                    [FlatTag::Tau, FlatTag::Monomial, FlatTag::Mu],
                ] {
                    let mut y = x.clone();
                    for tag in path {
                        y = alg.convert(&y, tag)?;
                    }
                    if y != x {
                        return Ok(Some(format!("round trip fails at mu_({k},{p})")));
                    }
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("unitary.pd_perfect.n{n}"), (|| {
            let alg = ValAlgebra::get(n)?;
            // dual_basis construction inverts every block
            alg.dual_basis()?;
            // grading: pairing vanishes off complementary degrees
            let idx = alg.all_indices();
            for &(k1, p1) in &idx {
                for &(k2, p2) in &idx {
                    let v = alg.pairing(&alg.mu(k1, p1)?, &alg.mu(k2, p2)?)?;
                    if k1 + k2 != 2 * n && !v.is_zero() {
                        return Ok(Some(format!(
                            "pairing of degrees {k1} and {k2} is nonzero"
                        )));
                    }
                }
            }
            Ok(None)
        })()));
    }
    out.push(Check::from_result("unitary.n1_truncated_polynomials", (|| {
        let alg = ValAlgebra::get(1)?;
        let s = GradedPoly::monomial(1, 0, Rational::one());
        let t = GradedPoly::monomial(0, 1, Rational::one());
        let half_t2 = GradedPoly::monomial(0, 2, crate::scalar::rat(1, 2));
        if alg.normal_form(&s) != alg.normal_form(&half_t2) {
            return Ok(Some("s != t^2/2 in Val^U(1)".into()));
        }
        if !alg.normal_form(&t.pow(3)).is_zero() {
            return Ok(Some("t^3 != 0 in Val^U(1)".into()));
        }
        for (k, expected) in [(0usize, 1usize), (1, 1), (2, 1)] {
            if alg.dim(k) != expected {
                return Ok(Some(format!("dim Val_{k}^U(1) = {} != {expected}", alg.dim(k))));
            }
        }
        Ok(None)
    })()));
    out
}

// ------------------------------------------------------------ transfer suite

pub fn suite_transfer(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max.min(4) {
        out.push(Check::from_result(format!("transfer.unitriangular.n{n}"), (|| {
            // diagonal-1 and degree filtration are validated at construction
            let sf = SpaceForm::get(n)?;
            let val = ValAlgebra::get(n)?;
            for (l, p) in val.all_indices() {
                let x = val.mu(l, p)?;
                let back = sf.r_inverse(&sf.r_apply(&x)?)?;
                if back != x {
                    return Ok(Some(format!("r r^(-1) != id at ({l},{p})")));
                }
            }
            Ok(None)
        })()));
    }
    for n in 1..=n_max.min(3) {
        out.push(Check::from_result(format!("transfer.two_path_tau.n{n}"), (|| {
            let val = ValAlgebra::get(n)?;
            for (k, q) in val.all_indices() {
                // path A: expand in tau^lambda, convert to mu^lambda
                let a = crate::space_forms::curved_tau_to_mu(&val, &expand_r_tau(n, k, q)?)?;
                // path B: tau_(k,q) = sum_i binom(i,q) mu_(k,i), expand each
                let mut b = CurvedValuation::zero(n, crate::space_forms::CurvedTag::MuLambda);
                let (lo, hi) = val.index_range(k);
                for i in q.max(lo)..=hi {
                    let coeff = crate::scalar::binomial(i as i64, q as i64);
                    if coeff.is_zero() {
                        continue;
                    }
                    let col = expand_r_mu(n, k, i)?;
                    for (idx, v) in &col.coords {
                        b.insert(*idx, v.scale(&coeff));
                    }
                }
                if a != b {
                    return Ok(Some(format!(
                        "two-path tau coherence fails at ({k},{q}): {} vs {}",
                        json::curved_valuation_to_string(&a),
                        json::curved_valuation_to_string(&b)
                    )));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("transfer.monomial_coherence.n{n}"), (|| {
            let sf = SpaceForm::get(n)?;
            let val = ValAlgebra::get(n)?;
            // r(s) through the mu expansion
            let s = val.normal_form(&GradedPoly::monomial(1, 0, Rational::one()));
            let lhs = sf.r_apply(&s)?;
            // sigma_lambda pushed through the curved monomials
            let sigma = sf.sigma_lambda();
            let mut rhs = CurvedValuation::zero(n, crate::space_forms::CurvedTag::MuLambda);
            for (&(a, b), c) in &sigma.coords {
                let m = sf.curved_monomial_to_mu_lambda(a, b)?;
                for (idx, v) in &m.coords {
                    rhs.insert(*idx, c * v);
                }
            }
            if lhs != rhs {
                return Ok(Some(format!(
                    "monomial coherence fails: {} vs {}",
                    json::curved_valuation_to_string(&lhs),
                    json::curved_valuation_to_string(&rhs)
                )));
            }
            Ok(None)
        })()));
    }
    for n in 1..=n_max.min(3) {
        out.push(Check::from_result(format!("transfer.tau_uv_coherence.n{n}"), (|| {
            // tau^lambda_(k,q) written in curved monomials and pushed through
            // the curved-monomial transfer equals sum_i binom(i,q) mu^lambda_(k,i)
            let sf = SpaceForm::get(n)?;
            let val = ValAlgebra::get(n)?;
            for (k, q) in val.all_indices() {
                let poly = sf.tau_lambda_in_curved_monomials(k, q)?;
                let mut lhs = CurvedValuation::zero(n, crate::space_forms::CurvedTag::MuLambda);
                for (&(a, b), c) in &poly {
                    let m = sf.curved_monomial_to_mu_lambda(a, b)?;
                    for (idx, v) in &m.coords {
                        lhs.insert(*idx, c * v);
                    }
                }
                let mut rhs = CurvedValuation::zero(n, crate::space_forms::CurvedTag::MuLambda);
                let (lo, hi) = val.index_range(k);
                for i in q.max(lo)..=hi {
                    let b = crate::scalar::binomial(i as i64, q as i64);
                    if !b.is_zero() {
                        rhs.insert((k as u64, i as u64), PiLambda::from_rational(b));
                    }
                }
                if lhs != rhs {
                    return Ok(Some(format!(
                        "tau^lambda_({k},{q}) in curved monomials does not reduce to its mu^lambda combination: {} vs {}",
                        json::curved_valuation_to_string(&lhs),
                        json::curved_valuation_to_string(&rhs)
                    )));
                }
            }
            Ok(None)
        })()));
    }
    out.push(Check::from_result("transfer.tau_lambda_uv_example", (|| {
        let sf = SpaceForm::get(2)?;
        let got = sf.tau_lambda_in_curved_monomials(2, 1)?;
        let half_pi = PiLambda::monomial(crate::scalar::rat(1, 2), 1, 0);
        let mut expect = std::collections::BTreeMap::new();
        expect.insert((1u64, 0u64), half_pi.scale(&rat_i64(4)));
        expect.insert((0, 2), half_pi.scale(&rat_i64(-1)));
        expect.insert((1, 2), half_pi.scale(&rat_i64(2)).mul_lambda(1));
        expect.insert((2, 0), half_pi.scale(&rat_i64(-4)).mul_lambda(1));
        if got != expect {
            return Ok(Some("tau^lambda_(2,1) curved-monomial expansion mismatch".into()));
        }
        Ok(None)
    })()));
    out
}

// ---------------------------------------------------------------- glob suite

pub fn suite_glob(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max.min(4) {
        out.push(Check::from_result(format!("glob.cardinalities.n{n}"), (|| {
            // validated inside curv_basis
            curv_basis(n)?;
            Ok(None)
        })()));
    }
    for n in 1..=n_max.min(3) {
        out.push(Check::from_result(format!("glob.kernel.n{n}"), (|| {
            let basis = curv_basis(n)?;
            let val = ValAlgebra::get(n)?;
            // glob_flat maps Delta's bijectively onto the mu basis and kills N's
            let total_val: usize = (0..=(2 * n)).map(|k| val.dim(k)).sum();
            if basis.delta.len() != total_val {
                return Ok(Some(format!(
                    "Delta count {} != dim Val {total_val}",
                    basis.delta.len()
                )));
            }
            for &(k, q) in &basis.enn {
                let x = CurvElement::basis(n, CurvSymbol::N, k, q)?;
                if !glob_flat(&x).is_zero() {
                    return Ok(Some(format!("glob(N_({k},{q})) != 0")));
                }
            }
            for &(k, q) in &basis.delta {
                let x = CurvElement::basis(n, CurvSymbol::Delta, k, q)?;
                let g = glob_flat(&x);
                if g != val.mu(k, q)? {
                    return Ok(Some(format!("glob(Delta_({k},{q})) != mu_({k},{q})")));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("glob.diagram_delta.n{n}"), (|| {
            let basis = curv_basis(n)?;
            for &(l, q) in &basis.delta {
                let lhs = glob_curved(&curv::r_lambda_delta(n, l, q)?);
                let rhs = expand_r_mu(n, l, q)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "glob diagram fails at Delta_({l},{q}): {} vs {}",
                        json::curved_valuation_to_string(&lhs),
                        json::curved_valuation_to_string(&rhs)
                    )));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("glob.diagram_n.n{n}"), (|| {
            let basis = curv_basis(n)?;
            for &(l, q) in &basis.enn {
                let lhs = glob_curved(&curv::r_lambda_n(n, l, q)?);
                if !lhs.is_zero() {
                    return Ok(Some(format!(
                        "glob_curved(R_lambda(N_({l},{q}))) = {}",
                        json::curved_valuation_to_string(&lhs)
                    )));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("glob.lambda_zero.n{n}"), (|| {
            let basis = curv_basis(n)?;
            for &(l, q) in &basis.delta {
                let r = curv::r_lambda_delta(n, l, q)?;
                if r.at_lambda_zero() != CurvElement::basis(n, CurvSymbol::Delta, l, q)? {
                    return Ok(Some(format!("R_0(Delta_({l},{q})) != Delta_({l},{q})")));
                }
            }
            for &(l, q) in &basis.enn {
                let r = curv::r_lambda_n(n, l, q)?;
                if r.at_lambda_zero() != CurvElement::basis(n, CurvSymbol::N, l, q)? {
                    return Ok(Some(format!("R_0(N_({l},{q})) != N_({l},{q})")));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("glob.lk_measure.n{n}"), (|| {
            let val = ValAlgebra::get(n)?;
            for k in 0..=(2 * n) {
                let lk = curv::lk_measure(n, k)?;
                // glob of the Lipschitz-Killing measure is sum_p mu_(k,p)
                let mut expect = FlatValuation::zero(n, FlatTag::Mu);
                let (lo, hi) = val.index_range(k);
                for p in lo..=hi {
                    expect.insert((k as u64, p as u64), PiLambda::one());
                }
                if glob_flat(&lk) != expect {
                    return Ok(Some(format!("lk_measure glob mismatch at degree {k}")));
                }
            }
            Ok(None)
        })()));
    }
    out
}

// ----------------------------------------------------------- kinematic suite

pub fn suite_kinematic(n_max: usize, seed: u64, table_path: Option<&std::path::Path>) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max.min(2) {
        out.push(Check::from_result(format!("kinematic.k0_axioms.n{n}"), (|| {
            let alg = ValAlgebra::get(n)?;
            let indices = alg.all_indices();
            for &(k, p) in &indices {
                let x = alg.mu(k, p)?;
                let kx = alg.k0(&x)?;
                // cocommutativity
                if kx != kx.swap_factors() {
                    return Ok(Some(format!("k0 not cocommutative at mu_({k},{p})")));
                }
                // counit: pairing the first slot with chi returns x
                let back = kx.pair_first(&alg, &alg.chi())?;
                if back != x {
                    return Ok(Some(format!("counit axiom fails at mu_({k},{p})")));
                }
            }
            // definitional adjointness (the linear-algebra oracle):
            // <k0(x), y (x) z>_(pd (x) pd) = <x, y z> on all basis pairs
            for &(k, p) in &indices {
                let x = alg.mu(k, p)?;
                let kx = alg.k0(&x)?;
                for &(k1, p1) in &indices {
                    let y = alg.mu(k1, p1)?;
                    for &(k2, p2) in &indices {
                        let z = alg.mu(k2, p2)?;
                        let mut lhs = PiLambda::zero();
                        for (&(i1, i2), c) in &kx.coords {
                            let mut b1 = FlatValuation::zero(n, FlatTag::Mu);
                            b1.insert(i1, PiLambda::one());
                            let mut b2 = FlatValuation::zero(n, FlatTag::Mu);
                            b2.insert(i2, PiLambda::one());
                            let p1v = alg.pairing(&b1, &y)?;
                            if p1v.is_zero() {
                                continue;
                            }
                            let p2v = alg.pairing(&b2, &z)?;
                            if p2v.is_zero() {
                                continue;
                            }
                            lhs = lhs + &(&p1v * &p2v) * c;
                        }
                        let rhs = alg.pairing(&x, &alg.multiply(&y, &z)?)?;
                        if lhs != rhs {
                            return Ok(Some(format!(
                                "k0 adjointness fails: <k0(mu_({k},{p})), mu_({k1},{p1}) x mu_({k2},{p2})>"
                            )));
                        }
                    }
                }
            }
            // coassociativity: (k0 (x) id) k0 = (id (x) k0) k0 on basis
            for &(k, p) in &indices {
                let x = alg.mu(k, p)?;
                let kx = alg.k0(&x)?;
                let mut left: std::collections::BTreeMap<
                    ((u64, u64), (u64, u64), (u64, u64)),
                    PiLambda,
                > = Default::default();
                let mut right = left.clone();
                for (&(i1, i2), c) in &kx.coords {
                    let mut b1 = FlatValuation::zero(n, FlatTag::Mu);
                    b1.insert(i1, PiLambda::one());
                    let k1 = alg.k0(&b1)?;
                    for (&(a, b), d) in &k1.coords {
                        let key = (a, b, i2);
                        let v = c * d;
                        let e = left.entry(key).or_insert_with(PiLambda::zero);
                        *e = e.clone() + v;
                    }
                    let mut b2 = FlatValuation::zero(n, FlatTag::Mu);
                    b2.insert(i2, PiLambda::one());
                    let k2 = alg.k0(&b2)?;
                    for (&(a, b), d) in &k2.coords {
                        let key = (i1, a, b);
                        let e = right.entry(key).or_insert_with(PiLambda::zero);
                        *e = e.clone() + (c * d);
                    }
                }
                left.retain(|_, v| !v.is_zero());
                right.retain(|_, v| !v.is_zero());
                if left != right {
                    return Ok(Some(format!("k0 not coassociative at mu_({k},{p})")));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("kinematic.intertwining.n{n}"), (|| {
            let sf = SpaceForm::get(n)?;
            let val = ValAlgebra::get(n)?;
            for (k, p) in val.all_indices() {
                let phi = val.mu(k, p)?;
                let lhs = sf.k_lambda(&sf.r_apply(&phi)?)?;
                let rhs = sf.k_lambda_via_r(&phi)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "k_lambda intertwining fails at mu_({k},{p}), n={n}"
                    )));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("kinematic.j_coalgebra.n{n}"), (|| {
            // J_lambda is a coalgebra isomorphism:
            // k_lambda(J_lambda phi) = (J_lambda (x) J_lambda) k_0(phi)
            let sf = SpaceForm::get(n)?;
            let val = ValAlgebra::get(n)?;
            for (k, p) in val.all_indices() {
                let phi = val.mu(k, p)?;
                let lhs = sf.k_lambda(&sf.j_lambda(&phi)?)?;
                let k0 = val.k0(&phi)?;
                let mut rhs_coords: std::collections::BTreeMap<
                    ((u64, u64), (u64, u64)),
                    PiLambda,
                > = Default::default();
                for (&(i1, i2), c) in &k0.coords {
                    let mut b1 = FlatValuation::zero(n, FlatTag::Mu);
                    b1.insert(i1, PiLambda::one());
                    let mut b2 = FlatValuation::zero(n, FlatTag::Mu);
                    b2.insert(i2, PiLambda::one());
                    let j1 = sf.j_lambda(&b1)?;
                    let j2 = sf.j_lambda(&b2)?;
                    for (x1, v1) in &j1.coords {
                        for (x2, v2) in &j2.coords {
                            let e = rhs_coords.entry((*x1, *x2)).or_insert_with(PiLambda::zero);
                            *e = e.clone() + &(&(c * v1) * v2) * &PiLambda::one();
                        }
                    }
                }
                rhs_coords.retain(|_, v| !v.is_zero());
                if lhs.coords() != &rhs_coords {
                    return Ok(Some(format!(
                        "J_lambda coalgebra relation fails at mu_({k},{p}), n={n}"
                    )));
                }
            }
            Ok(None)
        })()));
        out.push(Check::from_result(format!("kinematic.j_chi_curved.n{n}"), (|| {
            // J_lambda(chi) = (1 - lambda s)^(n+1) in the curved generators
            let sf = SpaceForm::get(n)?;
            let val = ValAlgebra::get(n)?;
            let lhs = sf.j_lambda(&val.chi())?;
            let mut rhs = CurvedValuation::zero(n, crate::space_forms::CurvedTag::MuLambda);
            for j in 0..=(n as u64 + 1) {
                let mut c = crate::scalar::binomial(n as i64 + 1, j as i64);
                if j % 2 == 1 {
                    c = -c;
                }
                if c.is_zero() || 2 * j > 2 * n as u64 {
                    continue;
                }
                let m = sf.curved_monomial_to_mu_lambda(j, 0)?;
                for (idx, v) in &m.coords {
                    rhs.insert(*idx, v.scale(&c).mul_lambda(j));
                }
            }
            if lhs != rhs {
                return Ok(Some(format!(
                    "J_lambda(chi) differs from (1 - lambda s)^(n+1) in curved generators: {} vs {}",
                    json::curved_valuation_to_string(&lhs),
                    json::curved_valuation_to_string(&rhs)
                )));
            }
            Ok(None)
        })()));
    }
    out.push(Check::from_result("kinematic.j_lambda_binomial_grid", (|| {
        for n in 0..=8i64 {
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let mut lhs = Rational::zero();
                    for k in 0..=(n + 1) {
                        let term = crate::scalar::binomial(n + 1, k)
                            * crate::scalar::binomial(n - j - k + 1, i + 1);
                        if k % 2 == 0 {
                            lhs += term;
                        } else {
                            lhs -= term;
                        }
                    }
                    let mut rhs = crate::scalar::binomial(n - i - 1, n - i - j);
                    if (n - j - i).rem_euclid(2) == 1 {
                        rhs = -rhs;
                    }
                    if lhs != rhs {
                        return Ok(Some(format!("binomial identity fails at n={n} i={i} j={j}")));
                    }
                }
            }
        }
        Ok(None)
    })()));
    // module-table checks: skipped with a warning when no table is available
    let table_n = 1usize;
    let table = match table_path {
        Some(p) => ModuleTable::load_path(table_n, p),
        None => ModuleTable::from_env(table_n),
    };
    match table {
        Err(e) => {
            out.push(Check::skip(
                "kinematic.module_glob_compat.n1",
                format!("module table unavailable: {e}"),
            ));
            out.push(Check::skip(
                "kinematic.semilocal.n1",
                format!("module table unavailable: {e}"),
            ));
        }
        Ok(table) => {
            out.push(Check::from_result("kinematic.module_glob_compat.n1", (|| {
                let n = table_n;
                let val = ValAlgebra::get(n)?;
                let basis = curv_basis(n)?;
                let mut rng = Prng::new(seed ^ 0xabcdef);
                for _ in 0..5 {
                    // random phi and random curvature element
                    let mut phi = GradedPoly::zero();
                    for _ in 0..2 {
                        phi.add_term(rng.below(2), rng.below(2), rng.small_rational(4, 2));
                    }
                    let phi = val.normal_form(&phi);
                    let mut x = CurvElement::zero(n);
                    for &(k, q) in basis.delta.iter().chain(basis.enn.iter()) {
                        x.insert(
                            (CurvSymbol::Delta, k as u64, q as u64),
                            PiLambda::from_rational(rng.small_rational(3, 2)),
                        );
                    }
                    let lhs = glob_flat(&module_multiply(&phi, &x, &table)?);
                    let rhs = val.multiply(&phi, &glob_flat(&x))?;
                    let lhs = val.convert(&lhs, FlatTag::Mu)?;
                    let rhs = val.convert(&rhs, FlatTag::Mu)?;
                    if lhs != rhs {
                        return Ok(Some("glob(phi . x) != phi * glob(x)".into()));
                    }
                }
                Ok(None)
            })()));
            out.push(Check::from_result("kinematic.semilocal.n1", (|| {
                let n = table_n;
                let val = ValAlgebra::get(n)?;
                let basis = curv_basis(n)?;
                // adjointness with the unit: pairing the Val slot with chi
                // recovers the argument
                for &(k, q) in basis.delta.iter().chain(basis.enn.iter()) {
                    for sym in [CurvSymbol::Delta, CurvSymbol::N] {
                        let valid = match sym {
                            CurvSymbol::Delta => basis.delta.contains(&(k, q)),
                            CurvSymbol::N => basis.enn.contains(&(k, q)),
                        };
                        if !valid {
                            continue;
                        }
                        let x = CurvElement::basis(n, sym, k, q)?;
                        let kb = semi_local_kbar(&x, &table)?;
                        let back = kb.pair_val_slot(&val, &val.chi())?;
                        if back != x {
                            return Ok(Some(format!(
                                "semi-local unit adjointness fails at {}_({k},{q})",
                                sym.name()
                            )));
                        }
                        // degree bookkeeping: curv degree + val degree = k + 2n
                        for (&((_, ck, _), (vk, _)), _) in &kb.coords {
                            if ck as usize + vk as usize != k + 2 * n {
                                return Ok(Some(format!(
                                    "semi-local degrees are not complementary at {}_({k},{q})",
                                    sym.name()
                                )));
                            }
                        }
                    }
                }
                // curved intertwining through the table (n = 1): the table
                // action commutes with globalization in the curved world:
                // glob_curved(gen . R_lambda(Phi)) = r(gen) . glob_curved(R_lambda(Phi))
                let sf = SpaceForm::get(n)?;
                for &(l, q) in basis.delta.iter() {
                    let x = curv::r_lambda_delta(n, l, q)?;
                    for gen in [Generator::T, Generator::Sigma] {
                        let gen_flat = gen.flat(&val);
                        let gen_curved = sf.r_apply(&gen_flat)?;
                        let lhs = glob_curved(&table.apply_generator(gen, &x)?);
                        let rhs = sf.curved_multiply(&gen_curved, &glob_curved(&x))?;
                        if lhs != rhs {
                            return Ok(Some(format!(
                                "curved table intertwining fails at {} . R(Delta_({l},{q}))",
                                gen.name()
                            )));
                        }
                    }
                }
                Ok(None)
            })()));
        }
    }
    out
}

/// Serialization round trips for randomized elements of each core type.
pub fn suite_serialization(count: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = Prng::new(seed ^ 0x1234_5678);
    let random_scalar = |rng: &mut Prng| {
        let mut s = PiLambda::zero();
        for _ in 0..=rng.below(3) {
            s = s + PiLambda::monomial(
                rng.small_rational(30, 11),
                rng.below(7) as i64 - 3,
                rng.below(3),
            );
        }
        s
    };
    out.push(Check::from_result("serialize.scalar", (|| {
        for _ in 0..count {
            let s = random_scalar(&mut rng);
            let text = json::scalar_to_string(&s);
            let back = json::scalar_from_str(&text)?;
            if back != s || json::scalar_to_string(&back) != text {
                return Ok(Some(format!("scalar round trip failed: {text}")));
            }
        }
        Ok(None)
    })()));
    let mut rng = Prng::new(seed ^ 0x8765_4321);
    out.push(Check::from_result("serialize.graded_poly", (|| {
        for _ in 0..count {
            let mut p = GradedPoly::zero();
            for _ in 0..rng.below(6) {
                p.add_term(rng.below(4), rng.below(5), rng.small_rational(40, 13));
            }
            let text = json::graded_poly_to_string(&p);
            let back = json::graded_poly_from_str(&text)?;
            if back != p || json::graded_poly_to_string(&back) != text {
                return Ok(Some(format!("graded poly round trip failed: {text}")));
            }
        }
        Ok(None)
    })()));
    let mut rng = Prng::new(seed ^ 0x0f0f_0f0f);
    out.push(Check::from_result("serialize.double_form", (|| {
        for _ in 0..count {
            let n = 1 + rng.below(2) as usize;
            let dim = 2 * n;
            let p = rng.below(dim as u64 + 1) as usize;
            let q = rng.below(dim as u64 + 1) as usize;
            let mut f = DoubleForm::zero(n, p, q);
            let is = crate::forms::increasing_tuples(dim, p);
            let js = crate::forms::increasing_tuples(dim, q);
            for _ in 0..rng.below(5) {
                let i = is[rng.below(is.len() as u64) as usize].clone();
                let j = js[rng.below(js.len() as u64) as usize].clone();
                f.add_signed(&i, &j, rng.small_rational(25, 9));
            }
            let text = json::double_form_to_string(&f);
            let back = json::double_form_from_str(&text)?;
            if back != f || json::double_form_to_string(&back) != text {
                return Ok(Some(format!("double form round trip failed: {text}")));
            }
        }
        Ok(None)
    })()));
    let mut rng = Prng::new(seed ^ 0x3c3c_3c3c);
    out.push(Check::from_result("serialize.flat_valuation", (|| {
        for _ in 0..count {
            let n = 1 + rng.below(3) as usize;
            let alg = ValAlgebra::get(n)?;
            let tag = [FlatTag::Monomial, FlatTag::Mu, FlatTag::Tau]
                [rng.below(3) as usize];
            let mut v = FlatValuation::zero(n, tag);
            let idx = alg.all_indices();
            for _ in 0..rng.below(4) {
                let (k, p) = idx[rng.below(idx.len() as u64) as usize];
                let key = match tag {
                    FlatTag::Monomial => {
                        let basis = alg.monomial_basis(k);
                        basis[rng.below(basis.len() as u64) as usize]
                    }
                    _ => (k as u64, p as u64),
                };
                v.insert(key, random_scalar(&mut rng));
            }
            let text = json::flat_valuation_to_string(&v);
            let back = json::flat_valuation_from_str(&text)?;
            if back != v || json::flat_valuation_to_string(&back) != text {
                return Ok(Some(format!("flat valuation round trip failed: {text}")));
            }
        }
        Ok(None)
    })()));
    let mut rng = Prng::new(seed ^ 0x7777_1111);
    out.push(Check::from_result("serialize.curved_valuation", (|| {
        for _ in 0..count {
            let n = 1 + rng.below(3) as usize;
            let alg = ValAlgebra::get(n)?;
            let tag = [crate::space_forms::CurvedTag::MuLambda, crate::space_forms::CurvedTag::TauLambda]
                [rng.below(2) as usize];
            let mut v = CurvedValuation::zero(n, tag);
            let idx = alg.all_indices();
            for _ in 0..rng.below(4) {
                let (k, p) = idx[rng.below(idx.len() as u64) as usize];
                v.insert((k as u64, p as u64), random_scalar(&mut rng));
            }
            let text = json::curved_valuation_to_string(&v);
            let back = json::curved_valuation_from_str(&text)?;
            if back != v || json::curved_valuation_to_string(&back) != text {
                return Ok(Some(format!("curved valuation round trip failed: {text}")));
            }
        }
        Ok(None)
    })()));
    let mut rng = Prng::new(seed ^ 0x2222_9999);
    out.push(Check::from_result("serialize.curv_element", (|| {
        for _ in 0..count {
            let n = 1 + rng.below(3) as usize;
            let basis = curv_basis(n)?;
            let mut x = CurvElement::zero(n);
            for _ in 0..rng.below(4) {
                let use_n = !basis.enn.is_empty() && rng.below(2) == 1;
                let (sym, list): (CurvSymbol, &Vec<(usize, usize)>) = if use_n {
                    (CurvSymbol::N, &basis.enn)
                } else {
                    (CurvSymbol::Delta, &basis.delta)
                };
                let (k, q) = list[rng.below(list.len() as u64) as usize];
                x.insert((sym, k as u64, q as u64), random_scalar(&mut rng));
            }
            let text = json::curv_element_to_string(&x);
            let back = json::curv_element_from_str(&text)?;
            if back != x || json::curv_element_to_string(&back) != text {
                return Ok(Some(format!("curvature element round trip failed: {text}")));
            }
        }
        Ok(None)
    })()));
    out
}

/// Run one named suite.
pub fn run_suite(
    name: &str,
    n_max: usize,
    seed: u64,
    table_path: Option<&std::path::Path>,
) -> Option<Vec<Check>> {
    let mut checks = match name {
        "gray" => suite_gray(n_max, seed),
        "weyl" => suite_weyl(seed),
        "unitary" => suite_unitary(n_max, seed),
        "transfer" => suite_transfer(n_max),
        "glob" => suite_glob(n_max),
        "kinematic" => suite_kinematic(n_max, seed, table_path),
        "serialization" => suite_serialization(100, seed),
        "all" => {
            let mut all = Vec::new();
            all.extend(suite_gray(n_max, seed));
            all.extend(suite_weyl(seed));
            all.extend(suite_unitary(n_max, seed));
            all.extend(suite_transfer(n_max));
            all.extend(suite_glob(n_max));
            all.extend(suite_kinematic(n_max, seed, table_path));
            all.extend(suite_serialization(100, seed));
            all
        }
        _ => return None,
    };
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Some(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for suite in ["unitary", "glob"] {
            let checks = run_suite(suite, 2, 0, None).unwrap();
            for c in &checks {
                assert_ne!(
                    c.status,
                    Status::Fail,
                    "{} failed: {:?}",
                    c.id,
                    c.witness
                );
            }
        }
    }
}
