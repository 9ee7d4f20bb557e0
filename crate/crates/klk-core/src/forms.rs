//! Sparse bigraded double forms on C^n, viewed as R^(2n) with the complex
//! structure J acting by e_(2i-1) -> e_(2i) -> -e_(2i-1).
//!
//! A type-(p,q) double form is alternating separately in a group of p
//! first-slot vectors and q second-slot vectors. Coefficients are stored on
//! pairs of strictly increasing index tuples over 1..=2n, with no zero entries.
//! The engine is generic over the coefficient ring: rationals for the
//! canonical forms, Gaussian rationals for the Chern matrix, polynomial and
//! pi/lambda coefficients for the sphere-moment computations.

use std::collections::BTreeMap;
use std::ops::{Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Coefficient ring bound for the form engine.
pub trait Ring:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}
impl<T> Ring for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T>
{
}

pub type Tuple = Vec<u8>;

/// Sort a tuple of basis indices, returning the permutation sign, or None if
/// an index repeats (the alternating form vanishes).
pub fn sort_signed(idx: &[u8]) -> Option<(Tuple, bool)> {
    let mut v: Tuple = idx.to_vec();
    let mut negative = false;
    // insertion sort, counting inversions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, negative))
}

/// Merge two strictly increasing tuples into one, with the shuffle sign, or
/// None if they intersect.
fn merge_signed(a: &[u8], b: &[u8]) -> Option<(Tuple, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut negative = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining a[i..]
            if (a.len() - i) % 2 == 1 {
                negative = !negative;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, negative))
}

/// All strictly increasing k-tuples over 1..=dim.
pub fn increasing_tuples(dim: usize, k: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    let mut cur: Tuple = (1..=k as u8).collect();
    if k > dim {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (dim - (k - 1 - i)) as u8 {
                cur[i] += 1;
                for j in (i + 1)..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Image of J on a basis vector: J e_(2i-1) = e_(2i), J e_(2i) = -e_(2i-1).
/// Returns (index, sign_is_negative).
pub fn j_basis(idx: u8) -> (u8, bool) {
    if idx % 2 == 1 {
        (idx + 1, false)
    } else {
        (idx - 1, true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleFormOf<R> {
    n: usize,
    p: usize,
    q: usize,
    coeffs: BTreeMap<(Tuple, Tuple), R>,
}

pub type DoubleForm = DoubleFormOf<Rational>;

impl<R: Ring> DoubleFormOf<R> {
    pub fn zero(n: usize, p: usize, q: usize) -> Self {
        DoubleFormOf {
            n,
            p,
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Tuple, Tuple), &R)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, i: &[u8], j: &[u8]) -> R {
        self.coeffs
            .get(&(i.to_vec(), j.to_vec()))
            .cloned()
            .unwrap_or_else(R::zero)
    }

    /// Set the coefficient on a strictly increasing tuple pair.
    pub fn set_coefficient(&mut self, i: Tuple, j: Tuple, c: R) {
        debug_assert!(i.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(j.windows(2).all(|w| w[0] < w[1]));
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    /// Accumulate a coefficient on arbitrarily ordered tuples, applying the
    /// alternating sign; vanishes on repeated indices.
    pub fn add_signed(&mut self, i: &[u8], j: &[u8], c: R) {
        if c.is_zero() {
            return;
        }
        let Some((si, negi)) = sort_signed(i) else {
            return;
        };
        let Some((sj, negj)) = sort_signed(j) else {
            return;
        };
        let c = if negi ^ negj { -c } else { c };
        let key = (si, sj);
        let cur = self.coeffs.remove(&key).unwrap_or_else(R::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.coeffs.insert(key, sum);
        }
    }

    /// Signed lookup of the coefficient on arbitrarily ordered tuples.
    pub fn eval_basis(&self, i: &[u8], j: &[u8]) -> R {
        let Some((si, negi)) = sort_signed(i) else {
            return R::zero();
        };
        let Some((sj, negj)) = sort_signed(j) else {
            return R::zero();
        };
        let c = self
            .coeffs
            .get(&(si, sj))
            .cloned()
            .unwrap_or_else(R::zero);
        if negi ^ negj {
            -c
        } else {
            c
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n || self.p != rhs.p || self.q != rhs.q {
            return Err(Error::DimensionMismatch(format!(
                "adding ({},{}) on C^{} to ({},{}) on C^{}",
                self.p, self.q, self.n, rhs.p, rhs.q, rhs.n
            )));
        }
        let mut out = self.clone();
        for ((i, j), c) in &rhs.coeffs {
            out.add_signed(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.clone().neg())
    }

    pub fn neg(self) -> Self {
        DoubleFormOf {
            n: self.n,
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.p, self.q);
        }
        let mut out = Self::zero(self.n, self.p, self.q);
        for ((i, j), v) in &self.coeffs {
            out.set_coefficient(i.clone(), j.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn map_coefficients<S: Ring>(&self, f: impl Fn(&R) -> S) -> DoubleFormOf<S> {
        let mut out = DoubleFormOf::zero(self.n, self.p, self.q);
        for ((i, j), v) in &self.coeffs {
            out.set_coefficient(i.clone(), j.clone(), f(v));
        }
        out
    }

    /// Bigraded shuffle product. Bidegrees add; if either total exceeds 2n the
    /// result is the zero form of clamped bidegree.
    pub fn wedge(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(format!(
                "wedge of forms on C^{} and C^{}",
                self.n, rhs.n
            )));
        }
        let dim = 2 * self.n;
        let p = (self.p + rhs.p).min(dim);
        let q = (self.q + rhs.q).min(dim);
        let mut out = Self::zero(self.n, p, q);
        if self.p + rhs.p > dim || self.q + rhs.q > dim {
            return Ok(out);
        }
        for ((i1, j1), c1) in &self.coeffs {
            for ((i2, j2), c2) in &rhs.coeffs {
                let Some((mi, negi)) = merge_signed(i1, i2) else {
                    continue;
                };
                let Some((mj, negj)) = merge_signed(j1, j2) else {
                    continue;
                };
                let mut c = c1.clone() * c2.clone();
                if negi ^ negj {
                    c = -c;
                }
                let key = (mi, mj);
                let cur = out.coeffs.remove(&key).unwrap_or_else(R::zero);
                let sum = cur + c;
                if !sum.is_zero() {
                    out.coeffs.insert(key, sum);
                }
            }
        }
        Ok(out)
    }

    /// Wedge power, with `pow(0)` the (0,0) form 1.
    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut acc = Self::zero(self.n, 0, 0);
        acc.set_coefficient(vec![], vec![], R::one());
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Slot-group swap: type (p,q) -> (q,p).
    pub fn vee(&self) -> Self {
        let mut out = Self::zero(self.n, self.q, self.p);
        for ((i, j), c) in &self.coeffs {
            out.set_coefficient(j.clone(), i.clone(), c.clone());
        }
        out
    }

    /// The degree-(1,-1) alternation: one first-group slot moves into the
    /// second group. Requires q >= 1.
    pub fn prime(&self) -> Result<Self> {
        if self.q == 0 {
            return Err(Error::Degree(
                "prime requires a form of type (p,q) with q >= 1".into(),
            ));
        }
        let dim = 2 * self.n;
        let mut out = Self::zero(self.n, (self.p + 1).min(dim), self.q - 1);
        if self.p + 1 > dim {
            return Ok(out);
        }
        // omega'(X_1..X_{p+1}; Y_2..Y_q) =
        //   sum_j (-1)^(j+1) omega(X_1..^X_j..X_{p+1}; X_j, Y_2..Y_q)
        for xi in increasing_tuples(dim, self.p + 1) {
            for yj in increasing_tuples(dim, self.q - 1) {
                let mut acc = R::zero();
                for (jpos, &xj) in xi.iter().enumerate() {
                    let rest: Tuple = xi
                        .iter()
                        .enumerate()
                        .filter(|(t, _)| *t != jpos)
                        .map(|(_, &v)| v)
                        .collect();
                    let mut second = Vec::with_capacity(self.q);
                    second.push(xj);
                    second.extend_from_slice(&yj);
                    let v = self.eval_basis(&rest, &second);
                    if v.is_zero() {
                        continue;
                    }
                    acc = if jpos % 2 == 0 { acc + v } else { acc - v };
                }
                if !acc.is_zero() {
                    out.set_coefficient(xi.clone(), yj, acc);
                }
            }
        }
        Ok(out)
    }

    /// Gray contraction: trace over one slot from each group against the
    /// standard orthonormal basis; type (p-1, q-1).
    pub fn contract(&self) -> Result<Self> {
        if self.p == 0 || self.q == 0 {
            return Err(Error::Degree(
                "contraction requires p >= 1 and q >= 1".into(),
            ));
        }
        let dim = 2 * self.n;
        let mut out = Self::zero(self.n, self.p - 1, self.q - 1);
        for xi in increasing_tuples(dim, self.p - 1) {
            for yj in increasing_tuples(dim, self.q - 1) {
                let mut acc = R::zero();
                for e in 1..=dim as u8 {
                    let mut first = xi.clone();
                    first.push(e);
                    let mut second = yj.clone();
                    second.push(e);
                    let v = self.eval_basis(&first, &second);
                    if !v.is_zero() {
                        acc = acc + v;
                    }
                }
                if !acc.is_zero() {
                    out.set_coefficient(xi.clone(), yj, acc);
                }
            }
        }
        Ok(out)
    }

    /// Derivative at t = 0 of the e^(it)-rotation on the second slot group:
    /// (J omega)(X; Y_1..Y_q) = sum_k omega(X; Y_1..J Y_k..Y_q). On covector
    /// indices this acts by theta_b -> -theta_(b+1) (b odd),
    /// theta_b -> theta_(b-1) (b even).
    pub fn j_rotate(&self) -> Self {
        let mut out = Self::zero(self.n, self.p, self.q);
        for ((i, j), c) in &self.coeffs {
            for k in 0..j.len() {
                let (img, vec_neg) = j_basis(j[k]);
                let mut jj = j.clone();
                jj[k] = img;
                // theta_b composed with J carries the opposite sign of the
                // vector action (J is skew)
                let c2 = if vec_neg { c.clone() } else { -c.clone() };
                out.add_signed(i, &jj, c2);
            }
        }
        out
    }

    /// Coefficient vector in the canonical (lexicographic) basis-pair order of
    /// the bidegree, for exact rank computations.
    pub fn to_vector(&self) -> Vec<R> {
        let dim = 2 * self.n;
        let mut out = Vec::new();
        for i in increasing_tuples(dim, self.p) {
            for j in increasing_tuples(dim, self.q) {
                out.push(self.coefficient(&i, &j));
            }
        }
        out
    }
}

/// Determinant of the minor of the column vectors selected by `rows`.
fn det_minor(vectors: &[&[Rational]], rows: &[u8]) -> Rational {
    let k = rows.len();
    debug_assert_eq!(vectors.len(), k);
    if k == 0 {
        return Rational::one();
    }
    let mut m: Vec<Vec<Rational>> = (0..k)
        .map(|a| rows.iter().map(|&r| vectors[a][(r - 1) as usize].clone()).collect())
        .collect();
    // fraction-free enough at these sizes: plain elimination
    let mut det = Rational::one();
    for c in 0..k {
        let Some(pr) = (c..k).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if pr != c {
            m.swap(c, pr);
            det = -det;
        }
        det *= m[c][c].clone();
        let inv = m[c][c].clone().recip();
        for i in (c + 1)..k {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() * inv.clone();
            for j in c..k {
                let t = m[c][j].clone() * f.clone();
                m[i][j] -= t;
            }
        }
    }
    det
}

impl DoubleForm {
    /// Multilinear alternating evaluation on rational vectors.
    pub fn evaluate(&self, xs: &[Vec<Rational>], ys: &[Vec<Rational>]) -> Result<Rational> {
        if xs.len() != self.p {
            return Err(Error::Arity {
                expected: self.p,
                got: xs.len(),
            });
        }
        if ys.len() != self.q {
            return Err(Error::Arity {
                expected: self.q,
                got: ys.len(),
            });
        }
        let xrefs: Vec<&[Rational]> = xs.iter().map(|v| v.as_slice()).collect();
        let yrefs: Vec<&[Rational]> = ys.iter().map(|v| v.as_slice()).collect();
        let mut acc = Rational::zero();
        for ((i, j), c) in &self.coeffs {
            let di = det_minor(&xrefs, i);
            if di.is_zero() {
                continue;
            }
            let dj = det_minor(&yrefs, j);
            if dj.is_zero() {
                continue;
            }
            acc += c.clone() * di * dj;
        }
        Ok(acc)
    }

    /// Evaluation of a (2n,2n) form at the full basis, normalized by (2n)!:
    /// coordinates with respect to g^(2n).
    pub fn top_coefficient(&self) -> Result<Rational> {
        let dim = 2 * self.n;
        if self.p != dim || self.q != dim {
            return Err(Error::Degree(format!(
                "top_coefficient requires bidegree (2n,2n), got ({},{})",
                self.p, self.q
            )));
        }
        let full: Tuple = (1..=dim as u8).collect();
        let c = self.coefficient(&full, &full);
        Ok(c / crate::scalar::factorial(dim as u64))
    }
}

/// Standard basis vector of R^(2n).
pub fn basis_vector(n: usize, idx: u8) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); 2 * n];
    v[(idx - 1) as usize] = Rational::one();
    v
}

/// J applied to a rational vector.
pub fn j_vector(v: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); v.len()];
    for i in (0..v.len()).step_by(2) {
        // e_(2i-1) -> e_(2i), e_(2i) -> -e_(2i-1)  (1-indexed)
        out[i + 1] = v[i].clone();
        out[i] = -v[i + 1].clone();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalKind {
    /// The (1,1) metric form.
    Metric,
    /// Jg(X;Y) = g(X;JY).
    JMetric,
    /// The (2,0) Kaehler form F(X,Y) = g(JX;Y).
    Kaehler,
    /// The (0,2) transpose of F.
    KaehlerVee,
    /// The (2,2) Gray form.
    Gray,
}

fn ip(a: u8, b: u8) -> i64 {
    i64::from(a == b)
}

/// <J e_a, e_b>
fn jp(a: u8, b: u8) -> i64 {
    let (img, neg) = j_basis(a);
    if img == b {
        if neg {
            -1
        } else {
            1
        }
    } else {
        0
    }
}

/// The canonical forms g, Jg, F, F_vee and G on C^n.
pub fn canonical_form(n: usize, kind: CanonicalKind) -> DoubleForm {
    let dim = 2 * n;
    match kind {
        CanonicalKind::Metric => {
            let mut g = DoubleForm::zero(n, 1, 1);
            for i in 1..=dim as u8 {
                g.set_coefficient(vec![i], vec![i], Rational::one());
            }
            g
        }
        CanonicalKind::JMetric => {
            let mut jg = DoubleForm::zero(n, 1, 1);
            for a in 1..=dim as u8 {
                for b in 1..=dim as u8 {
                    // Jg(e_a; e_b) = <e_a, J e_b>
                    let v = jp(b, a);
                    if v != 0 {
                        jg.set_coefficient(vec![a], vec![b], crate::scalar::rat_i64(v));
                    }
                }
            }
            jg
        }
        CanonicalKind::Kaehler => {
            let mut f = DoubleForm::zero(n, 2, 0);
            for i in 1..=n {
                f.set_coefficient(
                    vec![(2 * i - 1) as u8, (2 * i) as u8],
                    vec![],
                    Rational::one(),
                );
            }
            f
        }
        CanonicalKind::KaehlerVee => canonical_form(n, CanonicalKind::Kaehler).vee(),
        CanonicalKind::Gray => {
            let mut g = DoubleForm::zero(n, 2, 2);
            for i in increasing_tuples(dim, 2) {
                for j in increasing_tuples(dim, 2) {
                    let (w, x, y, z) = (i[0], i[1], j[0], j[1]);
                    // G(W,X;Y,Z) = g(W;Y)g(X;Z) - g(W;Z)g(X;Y)
                    //   + g(JW;Y)g(JX;Z) - g(JW;Z)g(JX;Y) + 2 g(JW;X)g(JY;Z)
                    let v = ip(w, y) * ip(x, z) - ip(w, z) * ip(x, y) + jp(w, y) * jp(x, z)
                        - jp(w, z) * jp(x, y)
                        + 2 * jp(w, x) * jp(y, z);
                    if v != 0 {
                        g.set_coefficient(i.clone(), j.clone(), crate::scalar::rat_i64(v));
                    }
                }
            }
            g
        }
    }
}
