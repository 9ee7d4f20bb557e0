//! The flat unitary valuation algebra Val^U(n) = R\[s,t\]/(f_(n+1), f_(n+2)):
//! normal forms, multiplication, the monomial/mu/tau basis triangle, the
//! Poincare pairing, and the flat kinematic coproduct.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gray::GradedPoly;
use crate::linalg::{self, Matrix};
use crate::quotient::{BasisPreference, GradedQuotient};
use crate::scalar::{binomial, factorial, rat_i64, PiLambda, Rational};
use crate::weyl::ball_volume;

/// f_k(t,s): the x^k coefficient of log(1 + tx + sx^2).
pub fn f_poly(k: u64) -> Result<GradedPoly> {
    if k == 0 {
        return Err(Error::Domain("f_poly needs k >= 1".into()));
    }
    let mut p = GradedPoly::zero();
    for i in 0..=(k / 2) {
        let j = k - i; // u^j term with u = tx + sx^2 contributes at x^k when j + i = k
        let b = binomial(j as i64, i as i64);
        if b.is_zero() {
            continue;
        }
        let mut c = b / rat_i64(j as i64);
        if (j + 1) % 2 == 1 {
            c = -c;
        }
        p.add_term(i, k - 2 * i, c);
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatTag {
    Monomial,
    Mu,
    Tau,
}

/// Element of Val^U(n) as coordinates over PiLambda in a tagged basis.
/// Monomial keys are (s-power, t-power) over the reduced basis; mu/tau keys
/// are (k, p) with max(0, k-n) <= p <= floor(k/2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatValuation {
    pub n: usize,
    pub tag: FlatTag,
    pub coords: BTreeMap<(u64, u64), PiLambda>,
}

impl FlatValuation {
    pub fn zero(n: usize, tag: FlatTag) -> Self {
        FlatValuation {
            n,
            tag,
            coords: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn insert(&mut self, key: (u64, u64), v: PiLambda) {
        if v.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coords.entry(key) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + v;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &FlatValuation) -> Result<FlatValuation> {
        if self.n != rhs.n || self.tag != rhs.tag {
            return Err(Error::DimensionMismatch(
                "adding flat valuations with different n or basis".into(),
            ));
        }
        let mut out = self.clone();
        for (k, v) in &rhs.coords {
            out.insert(*k, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &PiLambda) -> FlatValuation {
        let mut out = FlatValuation::zero(self.n, self.tag);
        for (k, v) in &self.coords {
            out.insert(*k, v * c);
        }
        out
    }

    pub fn neg(&self) -> FlatValuation {
        FlatValuation {
            n: self.n,
            tag: self.tag,
            coords: self
                .coords
                .iter()
                .map(|(k, v)| (*k, v.negated()))
                .collect(),
        }
    }

    pub fn at_lambda_zero(&self) -> FlatValuation {
        let mut out = FlatValuation::zero(self.n, self.tag);
        for (k, v) in &self.coords {
            out.insert(*k, v.at_lambda_zero());
        }
        out
    }
}

struct DegreeData {
    lo: usize,
    hi: usize,
    mono_basis: Vec<(u64, u64)>,
    /// pi^k / omega_k, a single pi monomial.
    pi_factor: PiLambda,
    /// Columns: tau_(k,q) in reduced-monomial coordinates (rational part).
    tau_to_mono: Matrix,
    mono_to_tau: Matrix,
    /// tau_(k,q) = sum_i T2M[i][q] mu_(k,i).
    tau_to_mu: Matrix,
    mu_to_tau: Matrix,
}

pub struct ValAlgebra {
    pub n: usize,
    quotient: GradedQuotient,
    degrees: Vec<DegreeData>,
}

fn dim_formula(n: usize, k: usize) -> usize {
    if k > 2 * n {
        0
    } else {
        1 + (k / 2).min((2 * n - k) / 2)
    }
}

static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<ValAlgebra>>>> = OnceLock::new();

impl ValAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        let quotient = GradedQuotient::new(
            n,
            &f_poly(n as u64 + 1)?,
            &f_poly(n as u64 + 2)?,
            BasisPreference::HighS,
            |k| dim_formula(n, k),
        )?;
        let mut degrees = Vec::with_capacity(2 * n + 1);
        for k in 0..=(2 * n) {
            let lo = k.saturating_sub(n);
            let hi = k / 2;
            let dim = hi - lo + 1;
            let mono_basis = quotient.basis(k).to_vec();
            if mono_basis.len() != dim {
                return Err(Error::InternalConsistency(format!(
                    "degree {k}: monomial basis size {} != index count {dim}",
                    mono_basis.len()
                )));
            }
            let pi_factor = PiLambda::pi_pow(k as i64).div(&ball_volume(k as i64)?)?;
            // tau_(k,q) rational part: t^(k-2q) (4s - t^2)^q / ((k-2q)! (2q)!)
            let mut tau_to_mono = linalg::zeros(dim, dim);
            for (qi, q) in (lo..=hi).enumerate() {
                let u = GradedPoly::monomial(1, 0, rat_i64(4))
                    .add(&GradedPoly::monomial(0, 2, rat_i64(-1)));
                let poly = GradedPoly::monomial(0, (k - 2 * q) as u64, Rational::one())
                    .mul(&u.pow(q as u64))
                    .scale(&(factorial((k - 2 * q) as u64) * factorial(2 * q as u64)).recip());
                let nf = quotient.normal_form(&poly);
                for (bi, &(a, b)) in mono_basis.iter().enumerate() {
                    tau_to_mono[bi][qi] = nf.coefficient(a, b);
                }
            }
            let mono_to_tau = linalg::invert(&tau_to_mono).map_err(|_| {
                Error::InternalConsistency(format!(
                    "degree {k}: tau polynomials do not form a basis"
                ))
            })?;
            let mut tau_to_mu = linalg::zeros(dim, dim);
            for (qi, q) in (lo..=hi).enumerate() {
                for (ii, i) in (lo..=hi).enumerate() {
                    tau_to_mu[ii][qi] = binomial(i as i64, q as i64);
                }
            }
            let mu_to_tau = linalg::invert(&tau_to_mu)?;
            degrees.push(DegreeData {
                lo,
                hi,
                mono_basis,
                pi_factor,
                tau_to_mono,
                mono_to_tau,
                tau_to_mu,
                mu_to_tau,
            });
        }
        Ok(ValAlgebra { n, quotient, degrees })
    }

    pub fn get(n: usize) -> Result<Arc<ValAlgebra>> {
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(v) = guard.get(&n) {
            return Ok(v.clone());
        }
        let v = Arc::new(ValAlgebra::new(n)?);
        guard.insert(n, v.clone());
        Ok(v)
    }

    pub fn dim(&self, k: usize) -> usize {
        if k > 2 * self.n {
            0
        } else {
            self.degrees[k].mono_basis.len()
        }
    }

    /// Valid mu/tau index range at degree k.
    pub fn index_range(&self, k: usize) -> (usize, usize) {
        (self.degrees[k].lo, self.degrees[k].hi)
    }

    pub fn is_valid_index(&self, k: usize, p: usize) -> bool {
        k <= 2 * self.n && p >= self.degrees[k].lo && p <= self.degrees[k].hi
    }

    pub fn monomial_basis(&self, k: usize) -> &[(u64, u64)] {
        &self.degrees[k].mono_basis
    }

    /// All mu indices (k, p), degree-ascending.
    pub fn all_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..=(2 * self.n) {
            let (lo, hi) = self.index_range(k);
            for p in lo..=hi {
                out.push((k, p));
            }
        }
        out
    }

    /// Normal form of a rational polynomial as a monomial-tag valuation.
    pub fn normal_form(&self, p: &GradedPoly) -> FlatValuation {
        let nf = self.quotient.normal_form(p);
        let mut out = FlatValuation::zero(self.n, FlatTag::Monomial);
        for (&(a, b), c) in nf.terms() {
            out.insert((a, b), PiLambda::from_rational(c.clone()));
        }
        out
    }

    /// Reduce a polynomial in (s, t) with PiLambda coefficients.
    pub fn reduce_scalar_poly<'a>(
        &self,
        terms: impl Iterator<Item = (&'a (u64, u64), &'a PiLambda)>,
    ) -> FlatValuation {
        let mut out = FlatValuation::zero(self.n, FlatTag::Monomial);
        for (&(a, b), c) in terms {
            for ((ba, bb), r) in self.quotient.reduce_monomial(a, b) {
                out.insert((ba, bb), c.scale(&r));
            }
        }
        out
    }

    pub fn chi(&self) -> FlatValuation {
        let mut out = FlatValuation::zero(self.n, FlatTag::Monomial);
        out.insert((0, 0), PiLambda::one());
        out
    }

    pub fn mu(&self, k: usize, p: usize) -> Result<FlatValuation> {
        if !self.is_valid_index(k, p) {
            return Err(Error::InvalidIndex(format!("mu_({k},{p}) for n={}", self.n)));
        }
        let mut out = FlatValuation::zero(self.n, FlatTag::Mu);
        out.insert((k as u64, p as u64), PiLambda::one());
        Ok(out)
    }

    pub fn tau(&self, k: usize, q: usize) -> Result<FlatValuation> {
        if !self.is_valid_index(k, q) {
            return Err(Error::InvalidIndex(format!("tau_({k},{q}) for n={}", self.n)));
        }
        let mut out = FlatValuation::zero(self.n, FlatTag::Tau);
        out.insert((k as u64, q as u64), PiLambda::one());
        Ok(out)
    }

    /// Coordinates per degree in the order of the degree's index list.
    fn degree_vector(
        &self,
        x: &FlatValuation,
        k: usize,
    ) -> Vec<PiLambda> {
        let d = &self.degrees[k];
        match x.tag {
            FlatTag::Monomial => d
                .mono_basis
                .iter()
                .map(|&(a, b)| x.coords.get(&(a, b)).cloned().unwrap_or_else(PiLambda::zero))
                .collect(),
            FlatTag::Mu | FlatTag::Tau => (d.lo..=d.hi)
                .map(|p| {
                    x.coords
                        .get(&(k as u64, p as u64))
                        .cloned()
                        .unwrap_or_else(PiLambda::zero)
                })
                .collect(),
        }
    }

    fn degrees_present(&self, x: &FlatValuation) -> Vec<usize> {
        let mut ks: Vec<usize> = match x.tag {
            FlatTag::Monomial => x.coords.keys().map(|&(a, b)| (2 * a + b) as usize).collect(),
            _ => x.coords.keys().map(|&(k, _)| k as usize).collect(),
        };
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    fn apply_rational_matrix(m: &Matrix, v: &[PiLambda]) -> Vec<PiLambda> {
        (0..m.len())
            .map(|i| {
                let mut acc = PiLambda::zero();
                for (j, x) in v.iter().enumerate() {
                    if !m[i][j].is_zero() && !x.is_zero() {
                        acc = acc + x.scale(&m[i][j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Exact change of basis among monomial/mu/tau coordinates. Monomial
    /// coordinates are re-reduced first, so unreduced representatives (for
    /// example from external JSON) convert correctly.
    pub fn convert(&self, x: &FlatValuation, target: FlatTag) -> Result<FlatValuation> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch("valuation belongs to another n".into()));
        }
        let reduced;
        let x = if x.tag == FlatTag::Monomial {
            reduced = self.reduce_scalar_poly(x.coords.iter());
            &reduced
        } else {
            x
        };
        if x.tag == target {
            return Ok(x.clone());
        }
        let mut out = FlatValuation::zero(self.n, target);
        for k in self.degrees_present(x) {
            let d = &self.degrees[k];
            let v = self.degree_vector(x, k);
            // to tau coordinates first
            let tau: Vec<PiLambda> = match x.tag {
                FlatTag::Tau => v,
                FlatTag::Mu => Self::apply_rational_matrix(&d.mu_to_tau, &v),
                FlatTag::Monomial => {
                    let w = Self::apply_rational_matrix(&d.mono_to_tau, &v);
                    w.iter()
                        .map(|c| c.div(&d.pi_factor))
                        .collect::<Result<Vec<_>>>()?
                }
            };
            match target {
                FlatTag::Tau => {
                    for (qi, c) in tau.into_iter().enumerate() {
                        out.insert((k as u64, (d.lo + qi) as u64), c);
                    }
                }
                FlatTag::Mu => {
                    let mu = Self::apply_rational_matrix(&d.tau_to_mu, &tau);
                    for (pi_, c) in mu.into_iter().enumerate() {
                        out.insert((k as u64, (d.lo + pi_) as u64), c);
                    }
                }
                FlatTag::Monomial => {
                    let mono = Self::apply_rational_matrix(&d.tau_to_mono, &tau);
                    for (bi, c) in mono.into_iter().enumerate() {
                        out.insert(d.mono_basis[bi], &c * &d.pi_factor);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product in the quotient; result in monomial coordinates.
    pub fn multiply(&self, x: &FlatValuation, y: &FlatValuation) -> Result<FlatValuation> {
        if x.n != self.n || y.n != self.n {
            return Err(Error::DimensionMismatch("multiplying across different n".into()));
        }
        let xm = self.convert(x, FlatTag::Monomial)?;
        let ym = self.convert(y, FlatTag::Monomial)?;
        let mut raw: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        for (&(a1, b1), c1) in &xm.coords {
            for (&(a2, b2), c2) in &ym.coords {
                let key = (a1 + a2, b1 + b2);
                let prod = c1 * c2;
                let e = raw.entry(key).or_insert_with(PiLambda::zero);
                *e = e.clone() + prod;
            }
        }
        Ok(self.reduce_scalar_poly(raw.iter()))
    }

    /// Poincare pairing: the coefficient of mu_(2n,n) in x*y.
    pub fn pairing(&self, x: &FlatValuation, y: &FlatValuation) -> Result<PiLambda> {
        let prod = self.multiply(x, y)?;
        let mu = self.convert(&prod, FlatTag::Mu)?;
        Ok(mu
            .coords
            .get(&(2 * self.n as u64, self.n as u64))
            .cloned()
            .unwrap_or_else(PiLambda::zero))
    }

    /// Gram blocks of the degree-complementary pairing:
    /// block(k) at (p-lo, q-lo') = <mu_(k,p), mu_(2n-k,q)>.
    pub fn gram_block(&self, k: usize) -> Result<Vec<Vec<PiLambda>>> {
        let (lo, hi) = self.index_range(k);
        let (lo2, hi2) = self.index_range(2 * self.n - k);
        let mut block = vec![vec![PiLambda::zero(); hi2 - lo2 + 1]; hi - lo + 1];
        for (pi_, p) in (lo..=hi).enumerate() {
            for (qi, q) in (lo2..=hi2).enumerate() {
                block[pi_][qi] =
                    self.pairing(&self.mu(k, p)?, &self.mu(2 * self.n - k, q)?)?;
            }
        }
        Ok(block)
    }

    /// The pd-dual basis: psi(k,p) in degree 2n-k with
    /// <psi(k,p), mu_(k,p')> = delta. Returned as mu-tag valuations keyed by
    /// the (k,p) they are dual to.
    pub fn dual_basis(&self) -> Result<BTreeMap<(usize, usize), FlatValuation>> {
        let mut out = BTreeMap::new();
        for k in 0..=(2 * self.n) {
            let block = self.gram_block(k)?;
            let (rat_block, pi_exp) = uniform_pi_block(&block)?;
            let inv = linalg::invert(&rat_block).map_err(|_| {
                Error::InternalConsistency(format!("pairing block at degree {k} is singular"))
            })?;
            let (lo, hi) = self.index_range(k);
            let (lo2, _) = self.index_range(2 * self.n - k);
            for (pi_, p) in (lo..=hi).enumerate() {
                // psi = sum_q inv[q][pi_] mu_(2n-k, lo2+q), scaled by pi^(-pi_exp)
                let mut psi = FlatValuation::zero(self.n, FlatTag::Mu);
                for (qi, row) in inv.iter().enumerate() {
                    let c = row[pi_].clone();
                    if !c.is_zero() {
                        psi.insert(
                            ((2 * self.n - k) as u64, (lo2 + qi) as u64),
                            PiLambda::monomial(c, -pi_exp, 0),
                        );
                    }
                }
                out.insert((k, p), psi);
            }
        }
        Ok(out)
    }

    /// Flat kinematic coproduct: the adjoint of multiplication under the
    /// Poincare pairing, in mu (x) mu coordinates.
    pub fn k0(&self, x: &FlatValuation) -> Result<FlatTensor> {
        let duals = self.dual_basis()?;
        let indices = self.all_indices();
        let mut out = FlatTensor::zero(self.n);
        for &(k1, p1) in &indices {
            let m1 = self.mu(k1, p1)?;
            let xm1 = self.multiply(x, &m1)?;
            for &(k2, p2) in &indices {
                let m2 = self.mu(k2, p2)?;
                let c = self.pairing(&xm1, &m2)?;
                if c.is_zero() {
                    continue;
                }
                let psi1 = &duals[&(k1, p1)];
                let psi2 = &duals[&(k2, p2)];
                for (i1, v1) in &psi1.coords {
                    for (i2, v2) in &psi2.coords {
                        out.insert((*i1, *i2), &(&c * v1) * v2);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The full Gram matrix of the Poincare pairing in the mu basis. Symmetric;
/// perfect (each degree-complementary block is invertible, which is checked
/// at construction through the dual basis).
#[derive(Debug, Clone)]
pub struct PairingForm {
    pub n: usize,
    pub gram: BTreeMap<((u64, u64), (u64, u64)), PiLambda>,
}

impl ValAlgebra {
    /// pd_pairing(n): the Gram matrix, validated invertible blockwise.
    pub fn pd_pairing(&self) -> Result<PairingForm> {
        // dual_basis construction fails on any singular block
        self.dual_basis()?;
        let idx = self.all_indices();
        let mut gram = BTreeMap::new();
        for &(k1, p1) in &idx {
            for &(k2, p2) in &idx {
                if k1 + k2 != 2 * self.n {
                    continue;
                }
                let v = self.pairing(&self.mu(k1, p1)?, &self.mu(k2, p2)?)?;
                if !v.is_zero() {
                    gram.insert(
                        ((k1 as u64, p1 as u64), (k2 as u64, p2 as u64)),
                        v,
                    );
                }
            }
        }
        Ok(PairingForm { n: self.n, gram })
    }

    /// pd_apply(x): the coordinates of the linear functional <x, .> on the mu
    /// basis.
    pub fn pd_apply(&self, x: &FlatValuation) -> Result<BTreeMap<(u64, u64), PiLambda>> {
        let mut out = BTreeMap::new();
        for (k, p) in self.all_indices() {
            let v = self.pairing(x, &self.mu(k, p)?)?;
            if !v.is_zero() {
                out.insert((k as u64, p as u64), v);
            }
        }
        Ok(out)
    }
}

/// Extract the uniform pi power of a PiLambda matrix block; the pairing blocks
/// are rational times a single power of pi.
fn uniform_pi_block(block: &[Vec<PiLambda>]) -> Result<(Matrix, i64)> {
    let mut pi_exp: Option<i64> = None;
    for row in block {
        for v in row {
            for ((p, l), _) in v.terms() {
                if *l != 0 {
                    return Err(Error::InternalConsistency(
                        "pairing block contains lambda".into(),
                    ));
                }
                match pi_exp {
                    None => pi_exp = Some(*p),
                    Some(e) if e == *p => {}
                    Some(e) => {
                        return Err(Error::InternalConsistency(format!(
                            "pairing block mixes pi powers {e} and {p}"
                        )))
                    }
                }
            }
        }
    }
    let e = pi_exp.unwrap_or(0);
    let rat_block: Matrix = block
        .iter()
        .map(|row| row.iter().map(|v| v.coefficient(e, 0)).collect())
        .collect();
    Ok((rat_block, e))
}

/// Element of Val (x) Val in mu (x) mu coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatTensor {
    pub n: usize,
    pub coords: BTreeMap<((u64, u64), (u64, u64)), PiLambda>,
}

impl FlatTensor {
    pub fn zero(n: usize) -> Self {
        FlatTensor {
            n,
            coords: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, key: ((u64, u64), (u64, u64)), v: PiLambda) {
        if v.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coords.entry(key) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + v;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn swap_factors(&self) -> FlatTensor {
        let mut out = FlatTensor::zero(self.n);
        for (&(a, b), v) in &self.coords {
            out.insert((b, a), v.clone());
        }
        out
    }

    /// Pair the first tensor slot with x under pd; the result is a valuation
    /// in mu coordinates.
    pub fn pair_first(&self, alg: &ValAlgebra, x: &FlatValuation) -> Result<FlatValuation> {
        let mut out = FlatValuation::zero(self.n, FlatTag::Mu);
        for (&((k1, p1), i2), v) in &self.coords {
            let mut basis = FlatValuation::zero(self.n, FlatTag::Mu);
            basis.insert((k1, p1), PiLambda::one());
            let c = alg.pairing(&basis, x)?;
            if !c.is_zero() {
                out.insert(i2, &c * v);
            }
        }
        Ok(out)
    }
}

/// val_normal_form(n, poly).
pub fn val_normal_form(n: usize, poly: &GradedPoly) -> Result<FlatValuation> {
    Ok(ValAlgebra::get(n)?.normal_form(poly))
}

/// val_multiply(x, y).
pub fn val_multiply(x: &FlatValuation, y: &FlatValuation) -> Result<FlatValuation> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch("multiplying across different n".into()));
    }
    ValAlgebra::get(x.n)?.multiply(x, y)
}

/// basis_convert(x, target).
pub fn basis_convert(x: &FlatValuation, target: FlatTag) -> Result<FlatValuation> {
    ValAlgebra::get(x.n)?.convert(x, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn s() -> GradedPoly {
        GradedPoly::monomial(1, 0, Rational::one())
    }
    fn t() -> GradedPoly {
        GradedPoly::monomial(0, 1, Rational::one())
    }

    #[test]
    fn f_poly_values() {
        assert_eq!(f_poly(1).unwrap(), t());
        // f2 = s - t^2/2
        let mut f2 = GradedPoly::monomial(1, 0, Rational::one());
        f2.add_term(0, 2, rat(-1, 2));
        assert_eq!(f_poly(2).unwrap(), f2);
        // f3 = t^3/3 - st
        let mut f3 = GradedPoly::monomial(0, 3, rat(1, 3));
        f3.add_term(1, 1, rat_i64(-1));
        assert_eq!(f_poly(3).unwrap(), f3);
        assert!(f_poly(0).is_err());
    }

    #[test]
    fn f_poly_log_series_oracle() {
        // log(1 + u) = sum_j (-1)^(j+1) u^j / j with u = t x + s x^2, the
        // powers computed by honest polynomial convolution in x.
        let kmax = 8usize;
        // u^j as a vector of GradedPoly coefficients indexed by x-degree
        let u: Vec<GradedPoly> = vec![GradedPoly::zero(), t(), s()];
        let mut upow: Vec<Vec<GradedPoly>> = vec![vec![GradedPoly::one()]];
        for j in 1..=kmax {
            let prev = &upow[j - 1];
            let mut next = vec![GradedPoly::zero(); (prev.len() - 1) + 3];
            for (d1, c1) in prev.iter().enumerate() {
                for (d2, c2) in u.iter().enumerate() {
                    let term = c1.mul(c2);
                    next[d1 + d2] = next[d1 + d2].add(&term);
                }
            }
            upow.push(next);
        }
        let mut by_degree: Vec<GradedPoly> = vec![GradedPoly::zero(); kmax + 1];
        for (j, pj) in upow.iter().enumerate().skip(1) {
            for (d, c) in pj.iter().enumerate() {
                if d > kmax {
                    continue;
                }
                let mut v = c.scale(&rat_i64(j as i64).recip());
                if j % 2 == 0 {
                    v = v.neg();
                }
                by_degree[d] = by_degree[d].add(&v);
            }
        }
        for k in 1..=kmax {
            assert_eq!(f_poly(k as u64).unwrap(), by_degree[k], "f_{k}");
        }
    }

    #[test]
    fn normal_form_examples() {
        // n=1: s and t^2/2 share a normal form
        let a = ValAlgebra::get(1).unwrap();
        assert_eq!(
            a.normal_form(&s()),
            a.normal_form(&t().mul(&t()).scale(&rat(1, 2)))
        );
        // n=1: t^3 -> 0
        assert!(a.normal_form(&t().pow(3)).is_zero());
        // n=2: s t and t^3/3 share a normal form
        let a2 = ValAlgebra::get(2).unwrap();
        assert_eq!(
            a2.normal_form(&s().mul(&t())),
            a2.normal_form(&t().pow(3).scale(&rat(1, 3)))
        );
    }

    #[test]
    fn dims_match_formula() {
        for n in 0..=4usize {
            let a = ValAlgebra::get(n).unwrap();
            for k in 0..=(2 * n) {
                assert_eq!(a.dim(k), dim_formula(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn multiply_examples() {
        let a = ValAlgebra::get(2).unwrap();
        let tv = a.normal_form(&t());
        let t2 = a.multiply(&tv, &tv).unwrap();
        assert_eq!(t2, a.normal_form(&t().pow(2)));
        // n=2: t^5 = 0
        let mut acc = a.chi();
        for _ in 0..5 {
            acc = a.multiply(&acc, &tv).unwrap();
        }
        assert!(acc.is_zero());
        // n=1: s*s = 0 (degree 4 > 2)
        let a1 = ValAlgebra::get(1).unwrap();
        let sv = a1.normal_form(&s());
        assert!(a1.multiply(&sv, &sv).unwrap().is_zero());
        // mismatched n is a dimension error
        assert!(val_multiply(&sv, &a.chi()).is_err());
    }

    #[test]
    fn basis_conversion_examples() {
        let a = ValAlgebra::get(2).unwrap();
        // tau_(2,0) = mu_(2,0) + mu_(2,1); tau_(2,1) = mu_(2,1)
        let tau20 = a.convert(&a.tau(2, 0).unwrap(), FlatTag::Mu).unwrap();
        let mut expect = FlatValuation::zero(2, FlatTag::Mu);
        expect.insert((2, 0), PiLambda::one());
        expect.insert((2, 1), PiLambda::one());
        assert_eq!(tau20, expect);
        let tau21 = a.convert(&a.tau(2, 1).unwrap(), FlatTag::Mu).unwrap();
        let mut expect = FlatValuation::zero(2, FlatTag::Mu);
        expect.insert((2, 1), PiLambda::one());
        assert_eq!(tau21, expect);
        // tau_(2,1) = (pi/2)(4s - t^2) in monomials
        let tau21m = a.convert(&a.tau(2, 1).unwrap(), FlatTag::Monomial).unwrap();
        let poly = s().scale(&rat_i64(4)).sub(&t().pow(2));
        let expect = a
            .normal_form(&poly)
            .scale(&PiLambda::monomial(rat(1, 2), 1, 0));
        assert_eq!(tau21m, expect);
        // mu_(0,0) = 1 in monomials
        assert_eq!(
            a.convert(&a.mu(0, 0).unwrap(), FlatTag::Monomial).unwrap(),
            a.chi()
        );
    }

    #[test]
    fn conversion_round_trips() {
        for n in 1..=3usize {
            let a = ValAlgebra::get(n).unwrap();
            for (k, p) in a.all_indices() {
                let x = a.mu(k, p).unwrap();
                for path in [
                    [FlatTag::Monomial, FlatTag::Tau],
                    [FlatTag::Tau, FlatTag::Monomial],
                ] {
                    let mut y = x.clone();
                    for tag in path {
                        y = a.convert(&y, tag).unwrap();
                    }
                    let back = a.convert(&y, FlatTag::Mu).unwrap();
                    assert_eq!(back, x, "round trip failed for mu_({k},{p}), n={n}");
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        // n=1: <1, mu_(2,1)> = 1, <t,t> = 2/pi, <t^2, 1> = 2/pi
        let a = ValAlgebra::get(1).unwrap();
        let chi = a.chi();
        let mu21 = a.mu(2, 1).unwrap();
        assert_eq!(a.pairing(&chi, &mu21).unwrap(), PiLambda::one());
        let tv = a.normal_form(&t());
        assert_eq!(
            a.pairing(&tv, &tv).unwrap(),
            PiLambda::monomial(rat_i64(2), -1, 0)
        );
        let t2 = a.normal_form(&t().pow(2));
        assert_eq!(
            a.pairing(&t2, &chi).unwrap(),
            PiLambda::monomial(rat_i64(2), -1, 0)
        );
    }

    #[test]
    fn generators_in_the_mu_basis() {
        // t = (2/pi) mu_(1,0) and s = (1/(2 pi))(mu_(2,0) + 2 mu_(2,1))
        for n in 2..=3usize {
            let a = ValAlgebra::get(n).unwrap();
            let tv = a.convert(&a.normal_form(&t()), FlatTag::Mu).unwrap();
            let mut expect = FlatValuation::zero(n, FlatTag::Mu);
            expect.insert((1, 0), PiLambda::monomial(rat_i64(2), -1, 0));
            assert_eq!(tv, expect);
            let sv = a.convert(&a.normal_form(&s()), FlatTag::Mu).unwrap();
            let mut expect = FlatValuation::zero(n, FlatTag::Mu);
            expect.insert((2, 0), PiLambda::monomial(rat(1, 2), -1, 0));
            expect.insert((2, 1), PiLambda::monomial(rat_i64(1), -1, 0));
            assert_eq!(sv, expect);
        }
    }

    #[test]
    fn pd_pairing_symmetric_and_graded() {
        for n in 1..=2usize {
            let a = ValAlgebra::get(n).unwrap();
            let pf = a.pd_pairing().unwrap();
            for (&(i, j), v) in &pf.gram {
                assert_eq!(pf.gram.get(&(j, i)), Some(v), "Gram not symmetric at {i:?},{j:?}");
                assert_eq!(i.0 + j.0, 2 * n as u64, "Gram entry off the antidiagonal");
            }
            // pd_apply of chi is the top-coefficient functional
            let f = a.pd_apply(&a.chi()).unwrap();
            assert_eq!(f.len(), 1);
            assert_eq!(
                f.get(&(2 * n as u64, n as u64)),
                Some(&PiLambda::one())
            );
        }
    }

    #[test]
    fn gram_blocks_invertible() {
        for n in 0..=3usize {
            let a = ValAlgebra::get(n).unwrap();
            for k in 0..=(2 * n) {
                let block = a.gram_block(k).unwrap();
                let (rat_block, _) = uniform_pi_block(&block).unwrap();
                assert!(
                    linalg::invert(&rat_block).is_ok(),
                    "singular pairing block n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn k0_point_and_unit_adjointness() {
        // n=0: k0(chi) = chi (x) chi
        let a = ValAlgebra::get(0).unwrap();
        let k = a.k0(&a.chi()).unwrap();
        let mut expect = FlatTensor::zero(0);
        expect.insert(((0, 0), (0, 0)), PiLambda::one());
        assert_eq!(k, expect);
        // pairing the first slot against chi returns the argument (n=1,2)
        for n in 1..=2usize {
            let a = ValAlgebra::get(n).unwrap();
            for (k1, p1) in a.all_indices() {
                let x = a.mu(k1, p1).unwrap();
                let kx = a.k0(&x).unwrap();
                let back = kx.pair_first(&a, &a.chi()).unwrap();
                assert_eq!(back, x, "unit adjointness fails at mu_({k1},{p1}), n={n}");
            }
        }
    }

    #[test]
    fn k0_cocommutative() {
        let a = ValAlgebra::get(1).unwrap();
        for (k1, p1) in a.all_indices() {
            let x = a.mu(k1, p1).unwrap();
            let kx = a.k0(&x).unwrap();
            assert_eq!(kx, kx.swap_factors());
        }
    }
}
