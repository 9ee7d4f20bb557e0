//! The curved algebras V^n_lambda through their mu^lambda coordinates: the
//! canonical isomorphism r_lambda expanded by bivariate generating functions,
//! the transfer maps F_lambda and J_lambda, curved monomials, and the
//! kinematic intertwining machinery.
//!
//! V^n_lambda is represented entirely through its mu^lambda coordinates with
//! the algebra structure transported along r_lambda; the curved relations
//! ideal is never materialized. Valuations are never evaluated on subsets of
//! the space form itself; for the record, the global values of the curved
//! monomials on the full space are s^i = (n-i+1)/lambda^i for 0 <= i <= n.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, rat, rat_i64, PiLambda, Rational};
use crate::series::{series_expand, AffineFactor, PowerSeries2};
use crate::valuations::{FlatTag, FlatTensor, FlatValuation, ValAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvedTag {
    MuLambda,
    TauLambda,
}

/// Element of V^n_lambda in the mu^lambda or tau^lambda basis; keys are (k,p)
/// with max(0, k-n) <= p <= floor(k/2), coefficients polynomial in lambda.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvedValuation {
    pub n: usize,
    pub tag: CurvedTag,
    pub coords: BTreeMap<(u64, u64), PiLambda>,
}

impl CurvedValuation {
    pub fn zero(n: usize, tag: CurvedTag) -> Self {
        CurvedValuation {
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

    pub fn add(&self, rhs: &CurvedValuation) -> Result<CurvedValuation> {
        if self.n != rhs.n || self.tag != rhs.tag {
            return Err(Error::DimensionMismatch(
                "adding curved valuations with different n or basis".into(),
            ));
        }
        let mut out = self.clone();
        for (k, v) in &rhs.coords {
            out.insert(*k, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &PiLambda) -> CurvedValuation {
        let mut out = CurvedValuation::zero(self.n, self.tag);
        for (k, v) in &self.coords {
            out.insert(*k, v * c);
        }
        out
    }

    pub fn at_lambda_zero(&self) -> CurvedValuation {
        let mut out = CurvedValuation::zero(self.n, self.tag);
        for (k, v) in &self.coords {
            out.insert(*k, v.at_lambda_zero());
        }
        out
    }

    /// Reinterpret flat mu coordinates as mu^lambda coordinates (the basis
    /// transfer F_lambda is the identity on coordinates).
    pub fn from_flat_mu(x: &FlatValuation) -> Result<Self> {
        if x.tag != FlatTag::Mu {
            return Err(Error::DimensionMismatch("F_lambda expects mu coordinates".into()));
        }
        Ok(CurvedValuation {
            n: x.n,
            tag: CurvedTag::MuLambda,
            coords: x.coords.clone(),
        })
    }

    /// Inverse basis transfer F_lambda^(-1).
    pub fn to_flat_mu(&self) -> Result<FlatValuation> {
        if self.tag != CurvedTag::MuLambda {
            return Err(Error::DimensionMismatch(
                "F_lambda^(-1) expects mu^lambda coordinates".into(),
            ));
        }
        Ok(FlatValuation {
            n: self.n,
            tag: FlatTag::Mu,
            coords: self.coords.clone(),
        })
    }
}

/// Series data shared by the r_lambda and R_lambda expansions: Taylor
/// coefficients of the generating function together with the (pi/lambda)^r
/// prefactor bookkeeping. `shift` * i! * j! * coeff(i,j) lands on the target
/// indexed by (2i + 2j + parity, j) with scalar (lambda/pi)^(i+j-r).
pub(crate) struct GfExpansion {
    pub series: PowerSeries2,
    pub r: u32,
    pub parity: u32,
    pub multiplier: Rational,
}

impl GfExpansion {
    /// Targets with their PiLambda coefficients; the caller filters indices.
    pub fn targets(&self) -> Result<Vec<((u64, u64), PiLambda)>> {
        let mut out = Vec::new();
        for (&(i, j), c) in self.series.iter() {
            if (i + j) < self.r {
                if !c.is_zero() {
                    return Err(Error::InternalConsistency(
                        "generating function has terms below the prefix order".into(),
                    ));
                }
                continue;
            }
            let lam = (i + j - self.r) as u64;
            let v = c.clone() * factorial(i as u64) * factorial(j as u64) * self.multiplier.clone();
            let scalar = PiLambda::monomial(v, -(lam as i64), lam);
            let k = 2 * i + 2 * j + self.parity;
            out.push(((k as u64, j as u64), scalar));
        }
        Ok(out)
    }
}

/// Taylor data of f_(l,q): prefix xi^(r-q) eta^q times
/// (1-xi-eta)^(q-r-eps-1/2) (1-eta)^(-r-1/2), scaled by binom(r,q)/r!.
pub(crate) fn f_expansion(n: usize, l: usize, q: usize) -> Result<GfExpansion> {
    let r = (l / 2) as u32;
    let parity = (l % 2) as u32;
    let e1 = rat(2 * (q as i64 - r as i64 - parity as i64) - 1, 2);
    let e2 = rat(-2 * (r as i64) - 1, 2);
    let series = series_expand(
        &[
            AffineFactor::unit(Rational::one(), Rational::one(), e1),
            AffineFactor::unit(Rational::zero(), Rational::one(), e2),
        ],
        (r - q as u32, q as u32),
        n as u32,
    )?;
    Ok(GfExpansion {
        series,
        r,
        parity,
        multiplier: binomial(r as i64, q as i64) / factorial(r as u64),
    })
}

/// Taylor data of g_(k,q): prefix xi^(r-q) eta^q times
/// (1-xi)^(q-r-eps-1/2) (1-eta)^(-q-1/2).
pub(crate) fn g_expansion(n: usize, k: usize, q: usize) -> Result<GfExpansion> {
    let r = (k / 2) as u32;
    let parity = (k % 2) as u32;
    let e1 = rat(2 * (q as i64 - r as i64 - parity as i64) - 1, 2);
    let e2 = rat(-2 * (q as i64) - 1, 2);
    let series = series_expand(
        &[
            AffineFactor::unit(Rational::one(), Rational::zero(), e1),
            AffineFactor::unit(Rational::zero(), Rational::one(), e2),
        ],
        (r - q as u32, q as u32),
        n as u32,
    )?;
    Ok(GfExpansion {
        series,
        r,
        parity,
        multiplier: binomial(r as i64, q as i64) / factorial(r as u64),
    })
}

fn check_flat_index(n: usize, k: usize, p: usize) -> Result<()> {
    if k > 2 * n || p > k / 2 || p < k.saturating_sub(n) {
        return Err(Error::InvalidIndex(format!("({k},{p}) is not a valid index for n={n}")));
    }
    Ok(())
}

/// Coordinates of r_lambda(mu_(l,p)) in the mu^lambda basis. Targets with
/// j < k - n vanish by triviality and are dropped.
pub fn expand_r_mu(n: usize, l: usize, p: usize) -> Result<CurvedValuation> {
    check_flat_index(n, l, p)?;
    let exp = f_expansion(n, l, p)?;
    let mut out = CurvedValuation::zero(n, CurvedTag::MuLambda);
    for ((k, j), c) in exp.targets()? {
        if k > 2 * n as u64 || j < k.saturating_sub(n as u64) {
            continue;
        }
        out.insert((k, j), c);
    }
    Ok(out)
}

/// Coordinates of r_lambda(tau_(k,q)) in the tau^lambda basis. The raw
/// expansion may target tau^lambda indices below the valid range; those are
/// not zero and are canonicalized through the mu^lambda basis.
pub fn expand_r_tau(n: usize, k: usize, q: usize) -> Result<CurvedValuation> {
    check_flat_index(n, k, q)?;
    let val = ValAlgebra::get(n)?;
    let exp = g_expansion(n, k, q)?;
    // collect raw tau^lambda coefficients, including out-of-range ones
    let mut raw: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
    for ((tk, tj), c) in exp.targets()? {
        if tk > 2 * n as u64 {
            continue;
        }
        let e = raw.entry((tk, tj)).or_insert_with(PiLambda::zero);
        *e = e.clone() + c;
    }
    // tau^lambda_(k,q) = sum_i binom(i,q) mu^lambda_(k,i) over valid i
    let mut mu = CurvedValuation::zero(n, CurvedTag::MuLambda);
    for ((tk, tq), c) in raw {
        let (lo, hi) = val.index_range(tk as usize);
        for i in (tq as usize).max(lo)..=hi {
            let b = binomial(i as i64, tq as i64);
            if !b.is_zero() {
                mu.insert((tk, i as u64), c.scale(&b));
            }
        }
    }
    curved_mu_to_tau(&val, &mu)
}

/// Convert mu^lambda coordinates to tau^lambda coordinates (valid-range
/// binomial inversion, degree by degree).
pub fn curved_mu_to_tau(val: &ValAlgebra, x: &CurvedValuation) -> Result<CurvedValuation> {
    if x.tag != CurvedTag::MuLambda {
        return Err(Error::DimensionMismatch("expected mu^lambda coordinates".into()));
    }
    convert_curved(val, x, CurvedTag::TauLambda)
}

/// Convert tau^lambda coordinates to mu^lambda coordinates.
pub fn curved_tau_to_mu(val: &ValAlgebra, x: &CurvedValuation) -> Result<CurvedValuation> {
    if x.tag != CurvedTag::TauLambda {
        return Err(Error::DimensionMismatch("expected tau^lambda coordinates".into()));
    }
    convert_curved(val, x, CurvedTag::MuLambda)
}

fn convert_curved(
    val: &ValAlgebra,
    x: &CurvedValuation,
    target: CurvedTag,
) -> Result<CurvedValuation> {
    if x.tag == target {
        return Ok(x.clone());
    }
    // The mu <-> tau change of basis is the same binomial matrix as in the
    // flat algebra, applied degreewise.
    let flat = FlatValuation {
        n: x.n,
        tag: match x.tag {
            CurvedTag::MuLambda => FlatTag::Mu,
            CurvedTag::TauLambda => FlatTag::Tau,
        },
        coords: x.coords.clone(),
    };
    let converted = val.convert(
        &flat,
        match target {
            CurvedTag::MuLambda => FlatTag::Mu,
            CurvedTag::TauLambda => FlatTag::Tau,
        },
    )?;
    Ok(CurvedValuation {
        n: x.n,
        tag: target,
        coords: converted.coords,
    })
}

/// The transfer matrix of r_lambda: one mu^lambda column per flat mu index.
/// Unitriangular with respect to the degree filtration.
pub struct TransferMatrix {
    pub n: usize,
    columns: BTreeMap<(usize, usize), CurvedValuation>,
}

impl TransferMatrix {
    fn new(n: usize, val: &ValAlgebra) -> Result<Self> {
        let mut columns = BTreeMap::new();
        for (l, p) in val.all_indices() {
            let col = expand_r_mu(n, l, p)?;
            let diag = col
                .coords
                .get(&(l as u64, p as u64))
                .cloned()
                .unwrap_or_else(PiLambda::zero);
            if diag != PiLambda::one() {
                return Err(Error::InternalConsistency(format!(
                    "transfer matrix diagonal at ({l},{p}) is {diag}, not 1"
                )));
            }
            for (&(k, _), _) in &col.coords {
                if (k as usize) < l {
                    return Err(Error::InternalConsistency(
                        "transfer matrix is not degree-filtered".into(),
                    ));
                }
            }
            columns.insert((l, p), col);
        }
        Ok(TransferMatrix { n, columns })
    }

    pub fn column(&self, l: usize, p: usize) -> Option<&CurvedValuation> {
        self.columns.get(&(l, p))
    }
}

/// The space form machinery for one complex dimension: r_lambda and its
/// inverse, transported multiplication, curved monomials and the kinematic
/// transfer maps.
pub struct SpaceForm {
    pub n: usize,
    val: Arc<ValAlgebra>,
    transfer: TransferMatrix,
}

static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<SpaceForm>>>> = OnceLock::new();

impl SpaceForm {
    pub fn new(n: usize) -> Result<Self> {
        let val = ValAlgebra::get(n)?;
        let transfer = TransferMatrix::new(n, &val)?;
        Ok(SpaceForm { n, val, transfer })
    }

    pub fn get(n: usize) -> Result<Arc<SpaceForm>> {
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(v) = guard.get(&n) {
            return Ok(v.clone());
        }
        let v = Arc::new(SpaceForm::new(n)?);
        guard.insert(n, v.clone());
        Ok(v)
    }

    pub fn val(&self) -> &ValAlgebra {
        &self.val
    }

    pub fn transfer_matrix(&self) -> &TransferMatrix {
        &self.transfer
    }

    /// r_lambda applied to a flat valuation.
    pub fn r_apply(&self, x: &FlatValuation) -> Result<CurvedValuation> {
        let xm = self.val.convert(x, FlatTag::Mu)?;
        let mut out = CurvedValuation::zero(self.n, CurvedTag::MuLambda);
        for (&(l, p), c) in &xm.coords {
            let col = self
                .transfer
                .column(l as usize, p as usize)
                .ok_or_else(|| Error::InvalidIndex(format!("({l},{p})")))?;
            for (idx, v) in &col.coords {
                out.insert(*idx, c * v);
            }
        }
        Ok(out)
    }

    /// r_lambda^(-1) by back-substitution along the degree filtration.
    pub fn r_inverse(&self, y: &CurvedValuation) -> Result<FlatValuation> {
        if y.tag != CurvedTag::MuLambda {
            return Err(Error::DimensionMismatch(
                "r_inverse expects mu^lambda coordinates".into(),
            ));
        }
        let mut residual = y.coords.clone();
        let mut x = FlatValuation::zero(self.n, FlatTag::Mu);
        for (l, p) in self.val.all_indices() {
            let Some(c) = residual.get(&(l as u64, p as u64)).cloned() else {
                continue;
            };
            if c.is_zero() {
                continue;
            }
            x.insert((l as u64, p as u64), c.clone());
            let col = self.transfer.column(l, p).unwrap();
            for (idx, v) in &col.coords {
                let e = residual.entry(*idx).or_insert_with(PiLambda::zero);
                *e = e.clone() - (&c * v);
                if e.is_zero() {
                    residual.remove(idx);
                }
            }
        }
        if residual.values().any(|v| !v.is_zero()) {
            return Err(Error::InternalConsistency(
                "r_inverse left a nonzero residual".into(),
            ));
        }
        Ok(x)
    }

    /// Transported product: x . y := r(r^(-1) x * r^(-1) y).
    pub fn curved_multiply(
        &self,
        x: &CurvedValuation,
        y: &CurvedValuation,
    ) -> Result<CurvedValuation> {
        if x.n != self.n || y.n != self.n {
            return Err(Error::DimensionMismatch("curved product across different n".into()));
        }
        let fx = self.r_inverse(x)?;
        let fy = self.r_inverse(y)?;
        let prod = self.val.multiply(&fx, &fy)?;
        self.r_apply(&prod)
    }

    /// The unit of V^n_lambda: r(chi).
    pub fn curved_unit(&self) -> Result<CurvedValuation> {
        self.r_apply(&self.val.chi())
    }

    /// sigma_lambda = s/(1 - lambda s) = sum_(i=1..n) lambda^(i-1) s^i as a
    /// flat valuation in monomial coordinates.
    pub fn sigma_lambda(&self) -> FlatValuation {
        let mut terms: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        for i in 1..=self.n as u64 {
            terms.insert((i, 0), PiLambda::monomial(Rational::one(), 0, i - 1));
        }
        self.val.reduce_scalar_poly(terms.iter())
    }

    /// The flat representative (s/(1 + lambda s))^a t^b of the curved
    /// monomial s^a t^b, reduced.
    pub fn curved_monomial_flat_rep(&self, a: u64, b: u64) -> Result<FlatValuation> {
        if 2 * a + b > 2 * self.n as u64 {
            return Err(Error::Degree(format!(
                "curved monomial s^{a} t^{b} exceeds the top degree {}",
                2 * self.n
            )));
        }
        // (1 + lambda s)^(-a) = sum_j binom(-a, j) lambda^j s^j
        let mut terms: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        for j in 0..=(self.n as u64) {
            let mut c = binomial(a as i64 + j as i64 - 1, j as i64);
            if j % 2 == 1 {
                c = -c;
            }
            if c.is_zero() && j > 0 {
                continue;
            }
            let deg = 2 * (a + j) + b;
            if deg > 2 * self.n as u64 {
                continue;
            }
            terms.insert((a + j, b), PiLambda::monomial(c, 0, j));
        }
        Ok(self.val.reduce_scalar_poly(terms.iter()))
    }

    /// Curved monomial s^a t^b in mu^lambda coordinates.
    pub fn curved_monomial_to_mu_lambda(&self, a: u64, b: u64) -> Result<CurvedValuation> {
        let rep = self.curved_monomial_flat_rep(a, b)?;
        self.r_apply(&rep)
    }

    /// tau^lambda_(k,q) as a polynomial in the curved monomials:
    /// (pi^k / (omega_k (k-2q)! (2q)!)) (1 - lambda s) v^(k/2-q) u^q with
    /// v = t^2 (1 - lambda s), u = 4s - v, and sqrt(v) read as
    /// t sqrt(1 - lambda s) for odd k. Terms above degree 2n are dropped.
    pub fn tau_lambda_in_curved_monomials(
        &self,
        k: usize,
        q: usize,
    ) -> Result<BTreeMap<(u64, u64), PiLambda>> {
        check_flat_index(self.n, k, q)?;
        let top = 2 * self.n as u64;
        let truncate = |m: &BTreeMap<(u64, u64), PiLambda>| -> BTreeMap<(u64, u64), PiLambda> {
            m.iter()
                .filter(|(&(a, b), _)| 2 * a + b <= top)
                .map(|(k, v)| (*k, v.clone()))
                .collect()
        };
        let mul = |x: &BTreeMap<(u64, u64), PiLambda>,
                   y: &BTreeMap<(u64, u64), PiLambda>|
         -> BTreeMap<(u64, u64), PiLambda> {
            let mut out: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
            for (&(a1, b1), c1) in x {
                for (&(a2, b2), c2) in y {
                    if 2 * (a1 + a2) + b1 + b2 > top {
                        continue;
                    }
                    let e = out.entry((a1 + a2, b1 + b2)).or_insert_with(PiLambda::zero);
                    *e = e.clone() + (c1 * c2);
                }
            }
            out.retain(|_, v| !v.is_zero());
            out
        };
        // 1 - lambda s
        let mut one_minus: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        one_minus.insert((0, 0), PiLambda::one());
        one_minus.insert((1, 0), PiLambda::monomial(rat_i64(-1), 0, 1));
        // (1 - lambda s)^(half) for odd k: binomial series, finite after
        // degree truncation
        let half_power = |half_num: i64| -> BTreeMap<(u64, u64), PiLambda> {
            // (1 - lambda s)^(half_num / 2) = sum_j binom(half_num/2, j) (-lambda s)^j
            let e = rat(half_num, 2);
            let mut out = BTreeMap::new();
            for j in 0..=(self.n as u64) {
                let mut c = crate::scalar::binomial_rational(&e, j);
                if j % 2 == 1 {
                    c = -c;
                }
                if c.is_zero() && j > 0 {
                    continue;
                }
                if 2 * j > top {
                    continue;
                }
                out.insert((j, 0), PiLambda::monomial(c, 0, j));
            }
            out
        };
        // v = t^2 (1 - lambda s); u = 4s - v
        let t2: BTreeMap<(u64, u64), PiLambda> =
            [((0, 2), PiLambda::one())].into_iter().collect();
        let v = mul(&t2, &one_minus);
        let mut u: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        u.insert((1, 0), PiLambda::from_rational(rat_i64(4)));
        for (key, val) in &v {
            let e = u.entry(*key).or_insert_with(PiLambda::zero);
            *e = e.clone() - val.clone();
            if e.is_zero() {
                u.remove(key);
            }
        }
        // v^(k/2 - q): for odd k this is t^(k-2q) (1-lambda s)^((k-2q)/2)
        let vpow = if k % 2 == 0 {
            let mut acc: BTreeMap<(u64, u64), PiLambda> =
                [((0, 0), PiLambda::one())].into_iter().collect();
            for _ in 0..(k / 2 - q) {
                acc = mul(&acc, &v);
            }
            acc
        } else {
            let tpow: BTreeMap<(u64, u64), PiLambda> =
                [((0, (k - 2 * q) as u64), PiLambda::one())].into_iter().collect();
            mul(&tpow, &half_power((k - 2 * q) as i64))
        };
        let mut upow: BTreeMap<(u64, u64), PiLambda> =
            [((0, 0), PiLambda::one())].into_iter().collect();
        for _ in 0..q {
            upow = mul(&upow, &u);
        }
        let prod = mul(&one_minus, &mul(&vpow, &upow));
        let pref = PiLambda::pi_pow(k as i64)
            .div(&crate::weyl::ball_volume(k as i64)?)?
            .scale(&(factorial((k - 2 * q) as u64) * factorial(2 * q as u64)).recip());
        let mut out: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        for (key, c) in truncate(&prod) {
            out.insert(key, &c * &pref);
        }
        Ok(out)
    }

    /// (1 + lambda s)^(-(n+1)) x as a flat valuation.
    pub fn inv_one_plus_lambda_s_times(&self, x: &FlatValuation) -> Result<FlatValuation> {
        let mut terms: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        for j in 0..=(self.n as u64) {
            // binom(-(n+1), j) = (-1)^j binom(n+j, j)
            let mut c = binomial(self.n as i64 + j as i64, j as i64);
            if j % 2 == 1 {
                c = -c;
            }
            terms.insert((j, 0), PiLambda::monomial(c, 0, j));
        }
        let series = self.val.reduce_scalar_poly(terms.iter());
        self.val.multiply(&series, x)
    }

    /// (1 - lambda s) x as a flat valuation.
    pub fn one_minus_lambda_s_times(&self, x: &FlatValuation) -> Result<FlatValuation> {
        let mut terms: BTreeMap<(u64, u64), PiLambda> = BTreeMap::new();
        terms.insert((0, 0), PiLambda::one());
        terms.insert((1, 0), PiLambda::monomial(rat_i64(-1), 0, 1));
        let series = self.val.reduce_scalar_poly(terms.iter());
        self.val.multiply(&series, x)
    }

    /// J_lambda = (1 - lambda s)^(n+1) r_lambda, computed as
    /// r_lambda((1 + lambda s)^(-(n+1)) x).
    pub fn j_lambda(&self, x: &FlatValuation) -> Result<CurvedValuation> {
        let scaled = self.inv_one_plus_lambda_s_times(x)?;
        self.r_apply(&scaled)
    }

    /// k_lambda(y) := (F_lambda (x) F_lambda) k_0((1 - lambda s) F_lambda^(-1) y).
    pub fn k_lambda(&self, y: &CurvedValuation) -> Result<CurvedTensor> {
        let flat = y.to_flat_mu()?;
        let scaled = self.one_minus_lambda_s_times(&flat)?;
        let k0 = self.val.k0(&scaled)?;
        Ok(CurvedTensor { inner: k0 })
    }

    /// The r_lambda side of the kinematic intertwining:
    /// (r_lambda (x) r_lambda) k_0((1 + lambda s)^(-(n+1)) x).
    pub fn k_lambda_via_r(&self, x: &FlatValuation) -> Result<CurvedTensor> {
        let scaled = self.inv_one_plus_lambda_s_times(x)?;
        let k0 = self.val.k0(&scaled)?;
        // apply r (x) r
        let mut out = FlatTensor::zero(self.n);
        for (&(i1, i2), c) in &k0.coords {
            let col1 = self.transfer.column(i1.0 as usize, i1.1 as usize).unwrap();
            let col2 = self.transfer.column(i2.0 as usize, i2.1 as usize).unwrap();
            for (j1, v1) in &col1.coords {
                for (j2, v2) in &col2.coords {
                    out.insert((*j1, *j2), &(c * v1) * v2);
                }
            }
        }
        Ok(CurvedTensor { inner: out })
    }
}

/// Element of V^n_lambda (x) V^n_lambda in mu^lambda (x) mu^lambda
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvedTensor {
    inner: FlatTensor,
}

impl CurvedTensor {
    pub fn coords(&self) -> &BTreeMap<((u64, u64), (u64, u64)), PiLambda> {
        &self.inner.coords
    }

    pub fn at_lambda_zero(&self) -> CurvedTensor {
        let mut out = FlatTensor::zero(self.inner.n);
        for (k, v) in &self.inner.coords {
            out.insert(*k, v.at_lambda_zero());
        }
        CurvedTensor { inner: out }
    }

    pub fn as_flat(&self) -> &FlatTensor {
        &self.inner
    }
}

/// Bivariate polynomial in (v, u), the image of the arithmetic operator on
/// Taylor series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VuPolynomial {
    pub terms: BTreeMap<(u32, u32), Rational>,
}

/// The operator taking c xi^m eta^p to
/// c binom(m+p, m) / (binom(2m, m) binom(2p, p)) v^m u^p.
pub fn o_operator(p: &PowerSeries2) -> VuPolynomial {
    let mut terms = BTreeMap::new();
    for (&(m, q), c) in p.iter() {
        let factor = binomial((m + q) as i64, m as i64)
            / (binomial(2 * m as i64, m as i64) * binomial(2 * q as i64, q as i64));
        let v = c.clone() * factor;
        if !v.is_zero() {
            terms.insert((m, q), v);
        }
    }
    VuPolynomial { terms }
}
