//! Algebraic Kaehler curvature tensors: validation of the defining
//! symmetries, construction from second fundamental forms via the Gauss
//! equation (flat ambient), the span of embedded tensors, and the scaled
//! Chern-form identity.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{
    canonical_form, increasing_tuples, j_basis, CanonicalKind, DoubleForm, DoubleFormOf, Tuple,
};
use crate::linalg;
use crate::scalar::{factorial, GaussRational, Prng, Rational};

/// Symmetric bilinear form on R^(2m), the real shadow of a second
/// fundamental form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymBilinear {
    pub m: usize,
    pub matrix: Vec<Vec<Rational>>,
}

impl SymBilinear {
    pub fn new(m: usize, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        if m == 0 || m > 31 {
            return Err(Error::DimensionMismatch(format!(
                "bilinear forms are limited to 1 <= m <= 31, got {m}"
            )));
        }
        let dim = 2 * m;
        if matrix.len() != dim || matrix.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "SymBilinear on C^{m} needs a {dim}x{dim} matrix"
            )));
        }
        for i in 0..dim {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidSff("matrix is not symmetric".into()));
                }
            }
        }
        Ok(SymBilinear { m, matrix })
    }

    pub fn value(&self, a: u8, b: u8) -> Rational {
        self.matrix[(a - 1) as usize][(b - 1) as usize].clone()
    }

    /// l(J e_a; e_b), with the sign from the J action.
    fn value_j_first(&self, a: u8, b: u8) -> Rational {
        let (img, neg) = j_basis(a);
        let v = self.value(img, b);
        if neg {
            -v
        } else {
            v
        }
    }

    /// The associated (1,1) double form.
    pub fn to_form(&self) -> DoubleForm {
        let dim = 2 * self.m;
        let mut f = DoubleForm::zero(self.m, 1, 1);
        for a in 1..=dim as u8 {
            for b in 1..=dim as u8 {
                let v = self.value(a, b);
                if !v.is_zero() {
                    f.set_coefficient(vec![a], vec![b], v);
                }
            }
        }
        f
    }
}

/// An algebraic Kaehler curvature tensor: a (2,2) double form R with
/// R^vee = R, R' = 0, and R(JX,JY;Z,W) = R(X,Y;JZ,JW) = R(X,Y;Z,W).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KahlerTensor {
    form: DoubleForm,
}

impl KahlerTensor {
    pub fn new(form: DoubleForm) -> Result<Self> {
        if form.bidegree() != (2, 2) {
            return Err(Error::Degree(format!(
                "Kaehler tensor must have bidegree (2,2), got {:?}",
                form.bidegree()
            )));
        }
        if form.vee() != form {
            return Err(Error::InvalidSff("tensor is not symmetric (R^vee != R)".into()));
        }
        if !form.prime()?.is_zero() {
            return Err(Error::InvalidSff("tensor violates the Bianchi identity".into()));
        }
        let n = form.n();
        let dim = 2 * n;
        for i in increasing_tuples(dim, 2) {
            for j in increasing_tuples(dim, 2) {
                let plain = form.eval_basis(&i, &j);
                // R(JX,JY;Z,W)
                let (a, na) = j_basis(i[0]);
                let (b, nb) = j_basis(i[1]);
                let mut lhs = form.eval_basis(&[a, b], &j);
                if na ^ nb {
                    lhs = -lhs;
                }
                // R(X,Y;JZ,JW)
                let (c, nc) = j_basis(j[0]);
                let (d, nd) = j_basis(j[1]);
                let mut rhs = form.eval_basis(&i, &[c, d]);
                if nc ^ nd {
                    rhs = -rhs;
                }
                if lhs != plain || rhs != plain {
                    return Err(Error::InvalidSff(
                        "tensor violates the Kaehler symmetry".into(),
                    ));
                }
            }
        }
        Ok(KahlerTensor { form })
    }

    pub fn form(&self) -> &DoubleForm {
        &self.form
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }

    /// R = lambda0 * G, the curvature tensor of constant holomorphic
    /// sectional curvature 4*lambda0.
    pub fn constant_curvature(n: usize, lambda0: &Rational) -> Result<Self> {
        KahlerTensor::new(canonical_form(n, CanonicalKind::Gray).scale(lambda0))
    }
}

/// A complex symmetric bilinear form on C^m, as a pair of rational symmetric
/// m x m matrices (real and imaginary parts of the entries).
#[derive(Debug, Clone)]
pub struct ComplexSff {
    pub m: usize,
    pub re: Vec<Vec<Rational>>,
    pub im: Vec<Vec<Rational>>,
}

impl ComplexSff {
    pub fn zero(m: usize) -> Self {
        ComplexSff {
            m,
            re: vec![vec![Rational::zero(); m]; m],
            im: vec![vec![Rational::zero(); m]; m],
        }
    }

    pub fn times_i(&self) -> Self {
        ComplexSff {
            m: self.m,
            re: self.im.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect(),
            im: self.re.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let add = |a: &Vec<Vec<Rational>>, b: &Vec<Vec<Rational>>| {
            a.iter()
                .zip(b)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x.clone() + y.clone()).collect())
                .collect()
        };
        ComplexSff {
            m: self.m,
            re: add(&self.re, &other.re),
            im: add(&self.im, &other.im),
        }
    }

    pub fn random(m: usize, rng: &mut Prng) -> Self {
        let mut s = ComplexSff::zero(m);
        for u in 0..m {
            for v in u..m {
                let re = rng.small_rational(3, 2);
                let im = rng.small_rational(3, 2);
                s.re[u][v] = re.clone();
                s.re[v][u] = re;
                s.im[u][v] = im.clone();
                s.im[v][u] = im;
            }
        }
        s
    }

    /// Real and imaginary parts as real bilinear forms on R^(2m), in the
    /// interleaved basis.
    pub fn to_real_pair(&self) -> (SymBilinear, SymBilinear) {
        let dim = 2 * self.m;
        let mut a = vec![vec![Rational::zero(); dim]; dim];
        let mut b = vec![vec![Rational::zero(); dim]; dim];
        for u in 0..self.m {
            for v in 0..self.m {
                let re = self.re[u][v].clone();
                let im = self.im[u][v].clone();
                // lambda(e_u, e_v) = re + i im on complex units
                a[2 * u][2 * v] = re.clone();
                b[2 * u][2 * v] = im.clone();
                // lambda(i e_u, e_v) = i lambda = -im + i re
                a[2 * u + 1][2 * v] = -im.clone();
                b[2 * u + 1][2 * v] = re.clone();
                a[2 * u][2 * v + 1] = -im.clone();
                b[2 * u][2 * v + 1] = re.clone();
                // lambda(i e_u, i e_v) = -lambda
                a[2 * u + 1][2 * v + 1] = -re;
                b[2 * u + 1][2 * v + 1] = -im;
            }
        }
        (
            SymBilinear { m: self.m, matrix: a },
            SymBilinear { m: self.m, matrix: b },
        )
    }
}

/// Validate that consecutive (A, B) pairs encode complex symmetric bilinear
/// forms: A(JX;Y) = -B(X;Y) and B(JX;Y) = A(X;Y).
fn validate_pairing(sffs: &[SymBilinear]) -> Result<()> {
    if sffs.len() % 2 != 0 {
        return Err(Error::InvalidSff(
            "second fundamental forms must come in real/imaginary pairs".into(),
        ));
    }
    for pair in sffs.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.m != b.m {
            return Err(Error::DimensionMismatch("paired forms on different spaces".into()));
        }
        let dim = 2 * a.m;
        for x in 1..=dim as u8 {
            for y in 1..=dim as u8 {
                if a.value_j_first(x, y) != -b.value(x, y)
                    || b.value_j_first(x, y) != a.value(x, y)
                {
                    return Err(Error::InvalidSff(
                        "pair is not complex-bilinear (pairing constraint violated)".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Gauss equation with flat ambient space: R = (1/2) sum_r l_r wedge l_r,
/// validated as an algebraic Kaehler curvature tensor.
pub fn gauss_from_sff(m: usize, sffs: &[SymBilinear]) -> Result<KahlerTensor> {
    for l in sffs {
        if l.m != m {
            return Err(Error::DimensionMismatch(format!(
                "second fundamental form on C^{} in a C^{m} computation",
                l.m
            )));
        }
    }
    validate_pairing(sffs)?;
    let mut r = DoubleForm::zero(m, 2, 2);
    for l in sffs {
        let lf = l.to_form();
        r = r.add(&lf.wedge(&lf)?)?;
    }
    KahlerTensor::new(r.scale(&crate::scalar::rat(1, 2)))
}

/// Gauss tensor of a list of complex second fundamental forms.
pub fn gauss_from_complex(m: usize, sffs: &[ComplexSff]) -> Result<KahlerTensor> {
    let mut real = Vec::new();
    for s in sffs {
        let (a, b) = s.to_real_pair();
        real.push(a);
        real.push(b);
    }
    gauss_from_sff(m, &real)
}

/// Rank over the rationals of the span of embedded Gauss tensors, generated
/// from the explicit polarization basis (symmetric products of coordinate
/// covectors and their i-multiples) plus seeded random samples.
pub fn embedded_span_dim(m: usize, sample_count: usize, seed: u64) -> Result<usize> {
    if m == 0 {
        return Err(Error::Domain("embedded span needs m >= 1".into()));
    }
    let mut vectors: Vec<Vec<Rational>> = Vec::new();
    let push = |t: &KahlerTensor, vectors: &mut Vec<Vec<Rational>>| {
        vectors.push(t.form().to_vector());
    };

    // basis b_{uv} = theta_u . theta_v (u <= v) of complex symmetric forms
    let mut basis: Vec<ComplexSff> = Vec::new();
    for u in 0..m {
        for v in u..m {
            let mut s = ComplexSff::zero(m);
            s.re[u][v] = Rational::one();
            s.re[v][u] = Rational::one();
            basis.push(s);
        }
    }
    let with_i: Vec<ComplexSff> = basis.iter().map(|b| b.times_i()).collect();

    // single tensors, then polarized pairs per the pointwise embedding proof
    for b in basis.iter().chain(with_i.iter()) {
        push(&gauss_from_complex(m, std::slice::from_ref(b))?, &mut vectors);
    }
    for (i, bi) in basis.iter().enumerate() {
        for bj in basis.iter().skip(i + 1) {
            push(&gauss_from_complex(m, &[bi.add(bj)])?, &mut vectors);
        }
        for bj in with_i.iter() {
            push(&gauss_from_complex(m, &[bi.add(bj)])?, &mut vectors);
        }
    }
    for (i, bi) in with_i.iter().enumerate() {
        for bj in with_i.iter().skip(i + 1) {
            push(&gauss_from_complex(m, &[bi.add(bj)])?, &mut vectors);
        }
    }

    let mut rng = Prng::new(seed);
    for _ in 0..sample_count {
        let s = ComplexSff::random(m, &mut rng);
        push(&gauss_from_complex(m, &[s])?, &mut vectors);
    }

    Ok(linalg::rank(&vectors))
}

/// Alternating forms over the Gaussian rationals, as (k,0) double forms.
pub type GaussForm = DoubleFormOf<GaussRational>;

/// Square matrix of even-degree alternating forms with Gaussian-rational
/// coefficients; the entries commute under wedge.
pub type EvenFormMatrix = Vec<Vec<GaussForm>>;

/// The curvature 2-form matrix of a Kaehler tensor:
/// Xi_(uv) = R(.,.; e_(2u-1), e_(2v-1)) - i R(.,.; e_(2u-1), e_(2v)).
pub fn curvature_form_matrix(r: &KahlerTensor) -> EvenFormMatrix {
    let n = r.n();
    let dim = 2 * n;
    let rf = r.form();
    let mut xi: EvenFormMatrix = vec![vec![GaussForm::zero(n, 2, 0); n]; n];
    for u in 1..=n {
        for v in 1..=n {
            let mut f = GaussForm::zero(n, 2, 0);
            for i in increasing_tuples(dim, 2) {
                let re = rf.eval_basis(&i, &[(2 * u - 1) as u8, (2 * v - 1) as u8]);
                let im = -rf.eval_basis(&i, &[(2 * u - 1) as u8, (2 * v) as u8]);
                let c = GaussRational::new(re, im);
                if !c.is_zero() {
                    f.set_coefficient(i.clone(), vec![], c);
                }
            }
            xi[u - 1][v - 1] = f;
        }
    }
    xi
}

/// Result of the scaled Chern-form computation: the 2q-form
/// i^q e_q(Xi) = (2 pi)^q gamma_q with the (2 pi)^(-q) factor carried
/// symbolically, together with both sides of the verification identity
/// (2 pi)^q (gamma_q ^ F^(n-q))(e_1..e_2n) =
///   (n-q)!/(q! (2n-2q)!) (R^q ^ g^(2(n-q)))(e;e).
#[derive(Debug, Clone)]
pub struct ChernScaled {
    pub form: GaussForm,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl ChernScaled {
    pub fn identity_holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn gauss_scale(f: &GaussForm, c: &GaussRational) -> GaussForm {
    f.map_coefficients(|v| v.clone() * c.clone())
}

/// The q-th scaled Chern form of a Kaehler tensor.
pub fn chern_scaled(r: &KahlerTensor, q: usize) -> Result<ChernScaled> {
    let n = r.n();
    if q > n {
        return Err(Error::Degree(format!("Chern degree {q} out of range 0..={n}")));
    }
    let dim = 2 * n;
    let rf = r.form();
    let xi = curvature_form_matrix(r);

    // e_q(Xi): sum of principal q x q minors, entries multiplied by wedge.
    let mut eq = GaussForm::zero(n, (2 * q).min(dim), 0);
    if q == 0 {
        eq.set_coefficient(vec![], vec![], GaussRational::one());
    } else {
        for subset in increasing_tuples(n, q) {
            for (perm, neg) in permutations_signed(q) {
                let mut term = GaussForm::zero(n, 0, 0);
                term.set_coefficient(vec![], vec![], GaussRational::one());
                for (row, &col) in perm.iter().enumerate() {
                    let a = (subset[row] - 1) as usize;
                    let b = (subset[col as usize] - 1) as usize;
                    term = term.wedge(&xi[a][b])?;
                }
                if neg {
                    term = term.neg();
                }
                eq = eq.add(&term)?;
            }
        }
    }

    // i^q scaling
    let mut iq = GaussRational::one();
    for _ in 0..q {
        iq = iq.times_i();
    }
    let scaled = gauss_scale(&eq, &iq);

    // identity check
    let f_alt = canonical_form(n, CanonicalKind::Kaehler)
        .map_coefficients(|c| GaussRational::from_rational(c.clone()));
    let mut lhs_form = scaled.clone();
    for _ in 0..(n - q) {
        lhs_form = lhs_form.wedge(&f_alt)?;
    }
    let full: Tuple = (1..=dim as u8).collect();
    let lhs_c = lhs_form.coefficient(&full, &[]);
    if !lhs_c.im.is_zero() {
        return Err(Error::InternalConsistency(
            "scaled Chern identity has a nonzero imaginary part".into(),
        ));
    }
    let g = canonical_form(n, CanonicalKind::Metric);
    let rhs_form = rf.pow(q)?.wedge(&g.pow(2 * (n - q))?)?;
    let rhs = rhs_form.coefficient(&full, &full) * factorial((n - q) as u64)
        / (factorial(q as u64) * factorial((2 * n - 2 * q) as u64));
    Ok(ChernScaled {
        form: scaled,
        lhs: lhs_c.re,
        rhs,
    })
}

/// All permutations of 0..k with their signs (true = odd).
fn permutations_signed(k: usize) -> Vec<(Vec<u8>, bool)> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    permute_rec(k, &mut cur, &mut used, &mut out);
    out
}

fn permute_rec(k: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<(Vec<u8>, bool)>) {
    if cur.len() == k {
        let mut inversions = 0usize;
        for i in 0..k {
            for j in (i + 1)..k {
                if cur[i] > cur[j] {
                    inversions += 1;
                }
            }
        }
        out.push((cur.clone(), inversions % 2 == 1));
        return;
    }
    for i in 0..k {
        if !used[i] {
            used[i] = true;
            cur.push(i as u8);
            permute_rec(k, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_i64};

    #[test]
    fn permutation_signs() {
        let perms = permutations_signed(3);
        assert_eq!(perms.len(), 6);
        let even: usize = perms.iter().filter(|(_, neg)| !neg).count();
        assert_eq!(even, 3);
        for (p, neg) in &perms {
            let (_, n2) = crate::forms::sort_signed(&p.iter().map(|x| x + 1).collect::<Vec<_>>())
                .unwrap();
            assert_eq!(*neg, n2, "sign mismatch for {p:?}");
        }
    }

    #[test]
    fn constant_curvature_is_kahler() {
        for n in 1..=3usize {
            let t = KahlerTensor::constant_curvature(n, &rat(3, 2)).unwrap();
            assert_eq!(t.form().bidegree(), (2, 2));
        }
    }

    #[test]
    fn gauss_example_complex_dim_one() {
        // lambda(z,w) = zw: l_even = diag(1,-1), l_odd = antidiag(1,1),
        // R(e1, Je1; e1, Je1) = -2.
        let mut s = ComplexSff::zero(1);
        s.re[0][0] = Rational::one();
        let (a, b) = s.to_real_pair();
        assert_eq!(a.matrix[0][0], Rational::one());
        assert_eq!(a.matrix[1][1], -Rational::one());
        assert_eq!(b.matrix[0][1], Rational::one());
        assert_eq!(b.matrix[1][0], Rational::one());
        let t = gauss_from_sff(1, &[a, b]).unwrap();
        assert_eq!(t.form().eval_basis(&[1, 2], &[1, 2]), rat_i64(-2));
    }

    #[test]
    fn gauss_empty_list_is_zero() {
        let t = gauss_from_sff(2, &[]).unwrap();
        assert!(t.form().is_zero());
    }

    #[test]
    fn gauss_rejects_invalid_pairing() {
        // swap the pair partners: (B, A) is not complex-bilinear
        let mut s = ComplexSff::zero(1);
        s.re[0][0] = Rational::one();
        let (a, b) = s.to_real_pair();
        assert!(gauss_from_sff(1, &[b, a]).is_err());
        // odd-length list rejected
        let (a2, _) = s.to_real_pair();
        assert!(gauss_from_sff(1, &[a2]).is_err());
    }

    #[test]
    fn random_gauss_tensors_validate() {
        let mut rng = Prng::new(7);
        for _ in 0..5 {
            let s = ComplexSff::random(2, &mut rng);
            let t = gauss_from_complex(2, &[s]).unwrap();
            // KahlerTensor::new re-validates all three invariants
            KahlerTensor::new(t.form().clone()).unwrap();
        }
    }

    #[test]
    fn embedded_span_dims() {
        assert_eq!(embedded_span_dim(1, 3, 1).unwrap(), 1);
        assert_eq!(embedded_span_dim(2, 3, 1).unwrap(), 9);
    }

    #[test]
    fn chern_identity_basics() {
        // gamma_0 = 1
        let t = KahlerTensor::constant_curvature(1, &rat(1, 1)).unwrap();
        let c0 = chern_scaled(&t, 0).unwrap();
        assert_eq!(
            c0.form.coefficient(&[], &[]),
            GaussRational::one()
        );
        assert!(c0.identity_holds());
        // n=1, R = lambda0 G: (2 pi) gamma_1 (e1, Je1) = 4 lambda0
        let l0 = rat(5, 3);
        let t = KahlerTensor::constant_curvature(1, &l0).unwrap();
        let c1 = chern_scaled(&t, 1).unwrap();
        assert_eq!(
            c1.form.coefficient(&[1, 2], &[]),
            GaussRational::from_rational(rat_i64(4) * l0)
        );
        assert!(c1.identity_holds());
        // out of range
        assert!(chern_scaled(&t, 2).is_err());
    }

    #[test]
    fn chern_identity_random_embedded() {
        let mut rng = Prng::new(11);
        for _ in 0..3 {
            let s = ComplexSff::random(2, &mut rng);
            let t = gauss_from_complex(2, &[s]).unwrap();
            for q in 0..=2usize {
                let c = chern_scaled(&t, q).unwrap();
                assert!(c.identity_holds(), "q={q}");
            }
        }
    }
}
