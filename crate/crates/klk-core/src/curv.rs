//! The abstract translation-invariant curvature-measure space Curv^U(n) in
//! the Delta/N basis: index sets, globalization maps (flat and curved), the
//! R_lambda expansions, and the externally tabulated module structure.

use std::collections::BTreeMap;
use std::io::Read;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat_i64, PiLambda, Rational};
use crate::space_forms::{self, CurvedTag, CurvedValuation};
use crate::valuations::{FlatTag, FlatValuation, ValAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurvSymbol {
    Delta,
    N,
}

impl CurvSymbol {
    pub fn name(&self) -> &'static str {
        match self {
            CurvSymbol::Delta => "Delta",
            CurvSymbol::N => "N",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Delta" => Ok(CurvSymbol::Delta),
            "N" => Ok(CurvSymbol::N),
            other => Err(Error::Parse(format!("unknown curvature basis symbol {other:?}"))),
        }
    }
}

/// Valid Delta and N indices for Curv^U(n), with per-degree cardinalities
/// validated against dim Curv_k = min(k, 2n-k-1) + 1 for k < 2n and 1 at 2n.
#[derive(Debug, Clone)]
pub struct CurvIndexSet {
    pub n: usize,
    pub delta: Vec<(usize, usize)>,
    pub enn: Vec<(usize, usize)>,
}

impl CurvIndexSet {
    pub fn contains(&self, sym: CurvSymbol, k: usize, q: usize) -> bool {
        match sym {
            CurvSymbol::Delta => delta_valid(self.n, k, q),
            CurvSymbol::N => n_valid(self.n, k, q),
        }
    }
}

fn delta_valid(n: usize, k: usize, q: usize) -> bool {
    k <= 2 * n && q <= k / 2 && q >= k.saturating_sub(n)
}

fn n_valid(n: usize, k: usize, q: usize) -> bool {
    k > 0 && k < 2 * n && k >= 1 + 2 * q && q >= (k + 1).saturating_sub(n)
}

/// curv_basis(n): the index sets, with cardinality validation.
pub fn curv_basis(n: usize) -> Result<CurvIndexSet> {
    if n == 0 {
        return Err(Error::Domain("curvature measures need n >= 1".into()));
    }
    let mut delta = Vec::new();
    let mut enn = Vec::new();
    for k in 0..=(2 * n) {
        let mut count = 0usize;
        for q in 0..=k {
            if delta_valid(n, k, q) {
                delta.push((k, q));
                count += 1;
            }
            if n_valid(n, k, q) {
                enn.push((k, q));
                count += 1;
            }
        }
        let expected = if k == 2 * n {
            1
        } else {
            k.min(2 * n - k - 1) + 1
        };
        if count != expected {
            return Err(Error::InternalConsistency(format!(
                "dim Curv_{k} for n={n}: index count {count} != {expected}"
            )));
        }
    }
    Ok(CurvIndexSet { n, delta, enn })
}

/// Element of Curv^U(n): coordinates over PiLambda in the Delta/N basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvElement {
    pub n: usize,
    pub coords: BTreeMap<(CurvSymbol, u64, u64), PiLambda>,
}

impl CurvElement {
    pub fn zero(n: usize) -> Self {
        CurvElement {
            n,
            coords: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn insert(&mut self, key: (CurvSymbol, u64, u64), v: PiLambda) {
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

    pub fn add(&self, rhs: &CurvElement) -> Result<CurvElement> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch("adding curvature measures across n".into()));
        }
        let mut out = self.clone();
        for (k, v) in &rhs.coords {
            out.insert(*k, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &PiLambda) -> CurvElement {
        let mut out = CurvElement::zero(self.n);
        for (k, v) in &self.coords {
            out.insert(*k, v * c);
        }
        out
    }

    pub fn at_lambda_zero(&self) -> CurvElement {
        let mut out = CurvElement::zero(self.n);
        for (k, v) in &self.coords {
            out.insert(*k, v.at_lambda_zero());
        }
        out
    }

    pub fn basis(n: usize, sym: CurvSymbol, k: usize, q: usize) -> Result<CurvElement> {
        let valid = match sym {
            CurvSymbol::Delta => delta_valid(n, k, q),
            CurvSymbol::N => n_valid(n, k, q),
        };
        if !valid {
            return Err(Error::InvalidIndex(format!(
                "{}_({k},{q}) is not a valid index for n={n}",
                sym.name()
            )));
        }
        let mut out = CurvElement::zero(n);
        out.insert((sym, k as u64, q as u64), PiLambda::one());
        Ok(out)
    }
}

/// Flat globalization: Delta_(k,q) -> mu_(k,q), N_(k,q) -> 0.
pub fn glob_flat(x: &CurvElement) -> FlatValuation {
    let mut out = FlatValuation::zero(x.n, FlatTag::Mu);
    for (&(sym, k, q), v) in &x.coords {
        if sym == CurvSymbol::Delta {
            out.insert((k, q), v.clone());
        }
    }
    out
}

/// Curved globalization: Delta_(k,q) -> mu^l_(k,q) - l(q+1)/pi mu^l_(k+2,q+1),
/// N_(k,q) -> -l(q+1)/pi mu^l_(k+2,q+1); out-of-range targets are zero.
pub fn glob_curved(x: &CurvElement) -> CurvedValuation {
    let n = x.n;
    let mut out = CurvedValuation::zero(n, CurvedTag::MuLambda);
    for (&(sym, k, q), v) in &x.coords {
        if sym == CurvSymbol::Delta {
            out.insert((k, q), v.clone());
        }
        // the correction term is shared by Delta and N
        let (k2, q2) = (k + 2, q + 1);
        if k2 <= 2 * n as u64 && q2 >= k2.saturating_sub(n as u64) && q2 <= k2 / 2 {
            let c = v
                .scale(&rat_i64(-(q as i64 + 1)))
                .mul_lambda(1)
                .mul_pi(-1);
            out.insert((k2, q2), c);
        }
    }
    out
}

/// R_lambda(Delta_(l,q)): Taylor expansion of h_(l,q) = f_(l,q)/(1 - eta) on
/// the Delta basis, truncated to valid indices.
pub fn r_lambda_delta(n: usize, l: usize, q: usize) -> Result<CurvElement> {
    if !delta_valid(n, l, q) {
        return Err(Error::InvalidIndex(format!("Delta_({l},{q}) for n={n}")));
    }
    let exp = h_expansion(n, l, q, EtaWeight::One)?;
    let mut out = CurvElement::zero(n);
    for ((k, p), c) in exp {
        if delta_valid(n, k as usize, p as usize) {
            out.insert((CurvSymbol::Delta, k, p), c);
        }
    }
    Ok(out)
}

/// R_lambda(N_(l,q)): Delta part from eta h_(l,q), N part from
/// (1 - eta) h_(l,q) = f_(l,q).
pub fn r_lambda_n(n: usize, l: usize, q: usize) -> Result<CurvElement> {
    if !n_valid(n, l, q) {
        return Err(Error::InvalidIndex(format!("N_({l},{q}) for n={n}")));
    }
    let mut out = CurvElement::zero(n);
    for ((k, p), c) in h_expansion(n, l, q, EtaWeight::Eta)? {
        if delta_valid(n, k as usize, p as usize) {
            out.insert((CurvSymbol::Delta, k, p), c);
        }
    }
    for ((k, p), c) in h_expansion(n, l, q, EtaWeight::OneMinusEta)? {
        if n_valid(n, k as usize, p as usize) {
            out.insert((CurvSymbol::N, k, p), c);
        }
    }
    Ok(out)
}

enum EtaWeight {
    /// h_(l,q)
    One,
    /// eta h_(l,q)
    Eta,
    /// (1 - eta) h_(l,q) = f_(l,q)
    OneMinusEta,
}

/// Taylor targets of a weighted h_(l,q) series.
fn h_expansion(
    n: usize,
    l: usize,
    q: usize,
    weight: EtaWeight,
) -> Result<Vec<((u64, u64), PiLambda)>> {
    let exp = match weight {
        // h = f * (1-eta)^(-1): lower the (1-eta) exponent by one
        EtaWeight::One => weighted_f_expansion(n, l, q, 1, 0)?,
        EtaWeight::Eta => weighted_f_expansion(n, l, q, 1, 1)?,
        EtaWeight::OneMinusEta => weighted_f_expansion(n, l, q, 0, 0)?,
    };
    exp.targets()
}

/// f_(l,q) times (1-eta)^(-extra) times eta^(eta_shift), as a generating
/// function expansion.
fn weighted_f_expansion(
    n: usize,
    l: usize,
    q: usize,
    extra: i64,
    eta_shift: u32,
) -> Result<space_forms::GfExpansion> {
    use crate::series::{series_expand, AffineFactor};
    let r = (l / 2) as u32;
    let parity = (l % 2) as u32;
    let e1 = crate::scalar::rat(2 * (q as i64 - r as i64 - parity as i64) - 1, 2);
    let e2 = crate::scalar::rat(-2 * (r as i64) - 1 - 2 * extra, 2);
    let series = series_expand(
        &[
            AffineFactor::unit(Rational::one(), Rational::one(), e1),
            AffineFactor::unit(Rational::zero(), Rational::one(), e2),
        ],
        (r - q as u32, q as u32 + eta_shift),
        n as u32,
    )?;
    Ok(space_forms::GfExpansion {
        series,
        r,
        parity,
        multiplier: crate::scalar::binomial(r as i64, q as i64)
            / crate::scalar::factorial(r as u64),
    })
}

/// lk_measure(n, k) = sum_p Delta_(k,p) over valid p.
pub fn lk_measure(n: usize, k: usize) -> Result<CurvElement> {
    if k > 2 * n {
        return Err(Error::InvalidIndex(format!("degree {k} out of range for n={n}")));
    }
    let mut out = CurvElement::zero(n);
    for p in k.saturating_sub(n)..=(k / 2) {
        out.insert((CurvSymbol::Delta, k as u64, p as u64), PiLambda::one());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    T,
    Sigma,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::T => "t",
            Generator::Sigma => "sigma",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "t" => Ok(Generator::T),
            "sigma" => Ok(Generator::Sigma),
            other => Err(Error::Parse(format!("unknown module generator {other:?}"))),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Generator::T => 1,
            Generator::Sigma => 2,
        }
    }

    /// The generator as a flat valuation.
    pub fn flat(&self, val: &ValAlgebra) -> FlatValuation {
        let poly = match self {
            Generator::T => crate::gray::GradedPoly::monomial(0, 1, Rational::one()),
            Generator::Sigma => crate::gray::GradedPoly::monomial(1, 0, Rational::one()),
        };
        val.normal_form(&poly)
    }
}

/// One CSV row of the module table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub generator: Generator,
    pub in_sym: CurvSymbol,
    pub in_k: usize,
    pub in_q: usize,
    pub out_sym: CurvSymbol,
    pub out_k: usize,
    pub out_q: usize,
    pub coefficient: PiLambda,
}

/// Structure constants for the Val^U(n)-module action on Curv^U(n), loaded
/// from an external CSV and validated at load time:
/// degree additivity, commutativity of the generator actions, and
/// glob-compatibility glob(gen . Phi) = gen * glob(Phi) on every basis
/// element.
pub struct ModuleTable {
    pub n: usize,
    actions: BTreeMap<(Generator, CurvSymbol, u64, u64), Vec<(CurvSymbol, u64, u64, PiLambda)>>,
}

impl ModuleTable {
    /// Parse and validate a CSV for complex dimension n. Rows with in-indices
    /// invalid for n are dropped; out-entries on invalid indices are zero
    /// measures and are dropped likewise.
    pub fn load(n: usize, reader: impl Read) -> Result<ModuleTable> {
        let rows = parse_csv(reader)?;
        Self::from_rows(n, &rows)
    }

    pub fn load_path(n: usize, path: &std::path::Path) -> Result<ModuleTable> {
        let f = std::fs::File::open(path).map_err(|e| {
            Error::ModuleUnavailable(format!("cannot open {}: {e}", path.display()))
        })?;
        Self::load(n, f)
    }

    /// Load from the KLK_MODULE_TABLE environment variable.
    pub fn from_env(n: usize) -> Result<ModuleTable> {
        let path = std::env::var("KLK_MODULE_TABLE")
            .map_err(|_| Error::ModuleUnavailable("KLK_MODULE_TABLE is not set".into()))?;
        Self::load_path(n, std::path::Path::new(&path))
    }

    pub fn from_rows(n: usize, rows: &[TableRow]) -> Result<ModuleTable> {
        let index = curv_basis(n)?;
        let mut actions: BTreeMap<_, Vec<(CurvSymbol, u64, u64, PiLambda)>> = BTreeMap::new();
        for row in rows {
            if !index.contains(row.in_sym, row.in_k, row.in_q) {
                continue;
            }
            if row.out_k != row.in_k + row.generator.degree() {
                return Err(Error::ModuleUnavailable(format!(
                    "degree additivity violated: {} . {}_({},{}) -> degree {}",
                    row.generator.name(),
                    row.in_sym.name(),
                    row.in_k,
                    row.in_q,
                    row.out_k
                )));
            }
            if !index.contains(row.out_sym, row.out_k, row.out_q) {
                continue;
            }
            actions
                .entry((row.generator, row.in_sym, row.in_k as u64, row.in_q as u64))
                .or_default()
                .push((row.out_sym, row.out_k as u64, row.out_q as u64, row.coefficient.clone()));
        }
        let table = ModuleTable { n, actions };
        table.validate(&index)?;
        Ok(table)
    }

    fn validate(&self, index: &CurvIndexSet) -> Result<()> {
        let val = ValAlgebra::get(self.n)?;
        let basis: Vec<(CurvSymbol, usize, usize)> = index
            .delta
            .iter()
            .map(|&(k, q)| (CurvSymbol::Delta, k, q))
            .chain(index.enn.iter().map(|&(k, q)| (CurvSymbol::N, k, q)))
            .collect();
        for gen in [Generator::T, Generator::Sigma] {
            let gen_val = gen.flat(&val);
            for &(sym, k, q) in &basis {
                let x = CurvElement::basis(self.n, sym, k, q)?;
                let gx = self.apply_generator(gen, &x)?;
                let lhs = val.convert(&glob_flat(&gx), FlatTag::Mu)?;
                let rhs = val.convert(
                    &val.multiply(&gen_val, &glob_flat(&x))?,
                    FlatTag::Mu,
                )?;
                if lhs != rhs {
                    return Err(Error::ModuleUnavailable(format!(
                        "glob-compatibility fails for {} . {}_({k},{q})",
                        gen.name(),
                        sym.name()
                    )));
                }
            }
        }
        // generator actions must commute
        for &(sym, k, q) in &basis {
            let x = CurvElement::basis(self.n, sym, k, q)?;
            let ts = self.apply_generator(Generator::T, &self.apply_generator(Generator::Sigma, &x)?)?;
            let st = self.apply_generator(Generator::Sigma, &self.apply_generator(Generator::T, &x)?)?;
            if ts != st {
                return Err(Error::ModuleUnavailable(format!(
                    "generator actions do not commute on {}_({k},{q})",
                    sym.name()
                )));
            }
        }
        Ok(())
    }

    pub fn apply_generator(&self, gen: Generator, x: &CurvElement) -> Result<CurvElement> {
        let mut out = CurvElement::zero(self.n);
        for (&(sym, k, q), c) in &x.coords {
            if let Some(targets) = self.actions.get(&(gen, sym, k, q)) {
                for (osym, ok, oq, coeff) in targets {
                    out.insert((*osym, *ok, *oq), c * coeff);
                }
            }
        }
        Ok(out)
    }
}

/// module_multiply(phi, x, table): the bilinear degree-additive action of a
/// flat valuation on a curvature measure.
pub fn module_multiply(
    phi: &FlatValuation,
    x: &CurvElement,
    table: &ModuleTable,
) -> Result<CurvElement> {
    if phi.n != x.n || table.n != x.n {
        return Err(Error::DimensionMismatch("module action across different n".into()));
    }
    let val = ValAlgebra::get(x.n)?;
    let phim = val.convert(phi, FlatTag::Monomial)?;
    let mut out = CurvElement::zero(x.n);
    for (&(a, b), c) in &phim.coords {
        // s^a t^b acts as sigma^a compose t^b
        let mut acc = x.scale(c);
        for _ in 0..b {
            acc = table.apply_generator(Generator::T, &acc)?;
        }
        for _ in 0..a {
            acc = table.apply_generator(Generator::Sigma, &acc)?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

/// Element of Curv^U(n) (x) Val^U(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvValTensor {
    pub n: usize,
    pub coords: BTreeMap<((CurvSymbol, u64, u64), (u64, u64)), PiLambda>,
}

impl CurvValTensor {
    pub fn zero(n: usize) -> Self {
        CurvValTensor {
            n,
            coords: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, key: ((CurvSymbol, u64, u64), (u64, u64)), v: PiLambda) {
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

    /// Pair the Val slot against x under pd; the result is a curvature
    /// measure.
    pub fn pair_val_slot(&self, val: &ValAlgebra, x: &FlatValuation) -> Result<CurvElement> {
        let mut out = CurvElement::zero(self.n);
        for (&(curv_idx, (k, p)), v) in &self.coords {
            let mut basis = FlatValuation::zero(self.n, FlatTag::Mu);
            basis.insert((k, p), PiLambda::one());
            let c = val.pairing(&basis, x)?;
            if !c.is_zero() {
                out.insert(curv_idx, &c * v);
            }
        }
        Ok(out)
    }
}

/// Semi-local kinematic operator: kbar_0(x) = sum_alpha (phi_alpha . x) (x)
/// psi^alpha over a graded mu basis with pd-dual psi^alpha.
pub fn semi_local_kbar(x: &CurvElement, table: &ModuleTable) -> Result<CurvValTensor> {
    let n = x.n;
    if table.n != n {
        return Err(Error::DimensionMismatch("table belongs to another n".into()));
    }
    let val = ValAlgebra::get(n)?;
    let duals = val.dual_basis()?;
    let mut out = CurvValTensor::zero(n);
    for (k, p) in val.all_indices() {
        let phi = val.mu(k, p)?;
        let action = module_multiply(&phi, x, table)?;
        if action.is_zero() {
            continue;
        }
        let psi = &duals[&(k, p)];
        for (curv_idx, c) in &action.coords {
            for (val_idx, v) in &psi.coords {
                out.insert((*curv_idx, *val_idx), c * v);
            }
        }
    }
    Ok(out)
}

fn parse_csv(reader: impl Read) -> Result<Vec<TableRow>> {
    let mut text = String::new();
    let mut reader = reader;
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::ModuleUnavailable(format!("cannot read module table: {e}")))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if lineno == 0 && line.starts_with("generator,") {
            continue; // header
        }
        let fields = split_csv_line(line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if fields.len() != 8 {
            return Err(Error::Parse(format!(
                "line {}: expected 8 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse_idx = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {}: bad index {s:?}: {e}", lineno + 1)))
        };
        rows.push(TableRow {
            generator: Generator::parse(fields[0].trim())?,
            in_sym: CurvSymbol::parse(fields[1].trim())?,
            in_k: parse_idx(&fields[2])?,
            in_q: parse_idx(&fields[3])?,
            out_sym: CurvSymbol::parse(fields[4].trim())?,
            out_k: parse_idx(&fields[5])?,
            out_q: parse_idx(&fields[6])?,
            coefficient: crate::json::scalar_from_str(&fields[7])?,
        });
    }
    Ok(rows)
}

/// Minimal CSV field splitter with double-quote quoting.
fn split_csv_line(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        if quoted {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    cur.push('"');
                    chars.next();
                } else {
                    quoted = false;
                }
            } else {
                cur.push(c);
            }
        } else {
            match c {
                '"' => quoted = true,
                ',' => {
                    fields.push(std::mem::take(&mut cur));
                }
                _ => cur.push(c),
            }
        }
    }
    if quoted {
        return Err("unterminated quote".into());
    }
    fields.push(cur);
    Ok(fields)
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Output term in the Delta/B language of the literature's formulas.
#[derive(Debug, Clone)]
enum DbTerm {
    Delta(usize, usize, PiLambda),
    B(usize, usize, PiLambda),
}

/// t . Delta_(k,q) = omega_(k+1)/(pi omega_k)
///   [(k-2q+1) Delta_(k+1,q) + 2(q+1) Delta_(k+1,q+1)]
fn t_dot_delta(k: usize, q: usize) -> Result<Vec<DbTerm>> {
    let (ki, qi) = (k as i64, q as i64);
    let factor = crate::weyl::ball_volume(ki + 1)?.div(&crate::weyl::ball_volume(ki)?.mul_pi(1))?;
    Ok(vec![
        DbTerm::Delta(k + 1, q, factor.scale(&rat_i64(ki - 2 * qi + 1))),
        DbTerm::Delta(k + 1, q + 1, factor.scale(&rat_i64(2 * (qi + 1)))),
    ])
}

/// sigma . Delta_(k,q) = A [(k+2) Delta_(k+2,q) + 2 B_(k+2,q)]
///   + C [(k+2)(k-q+2) Delta_(k+2,q+1) + (k-2q) B_(k+2,q+1)] with
/// A = (k-2q+2)(k-2q+1)/(2 pi (k+2)(k+4)), C = 2(q+1)/(pi (k+2)(k+4)).
fn sigma_dot_delta(k: usize, q: usize) -> Vec<DbTerm> {
    let (ki, qi) = (k as i64, q as i64);
    let a = PiLambda::monomial(
        Rational::new(
            ((ki - 2 * qi + 2) * (ki - 2 * qi + 1)).into(),
            (2 * (ki + 2) * (ki + 4)).into(),
        ),
        -1,
        0,
    );
    let c = PiLambda::monomial(
        Rational::new((2 * (qi + 1)).into(), ((ki + 2) * (ki + 4)).into()),
        -1,
        0,
    );
    vec![
        DbTerm::Delta(k + 2, q, a.scale(&rat_i64(ki + 2))),
        DbTerm::B(k + 2, q, a.scale(&rat_i64(2))),
        DbTerm::Delta(k + 2, q + 1, c.scale(&rat_i64((ki + 2) * (ki - qi + 2)))),
        DbTerm::B(k + 2, q + 1, c.scale(&rat_i64(ki - 2 * qi))),
    ]
}

/// t . B_(k,q) = D [Delta_(k+1,q) + (k+2) B_(k+1,q)]
///   + E [2(k-q+1) Delta_(k+1,q+1) + (k+2)(k-2q-1) B_(k+1,q+1)] with
/// D = omega_(k+1)(k-2q+1)/(pi (k+3) omega_k),
/// E = 2(q+1) omega_(k+1)/(pi (k+3)(k-2q) omega_k). Requires 2q < k.
fn t_dot_b(k: usize, q: usize) -> Result<Vec<DbTerm>> {
    let (ki, qi) = (k as i64, q as i64);
    let base = crate::weyl::ball_volume(ki + 1)?.div(&crate::weyl::ball_volume(ki)?.mul_pi(1))?;
    let d = base.scale(&Rational::new((ki - 2 * qi + 1).into(), (ki + 3).into()));
    let e = base.scale(&Rational::new(
        (2 * (qi + 1)).into(),
        ((ki + 3) * (ki - 2 * qi)).into(),
    ));
    Ok(vec![
        DbTerm::Delta(k + 1, q, d.clone()),
        DbTerm::B(k + 1, q, d.scale(&rat_i64(ki + 2))),
        DbTerm::Delta(k + 1, q + 1, e.scale(&rat_i64(2 * (ki - qi + 1)))),
        DbTerm::B(k + 1, q + 1, e.scale(&rat_i64((ki + 2) * (ki - 2 * qi - 1)))),
    ])
}

/// sigma . B_(k,q) = (k-2q+2)(k-2q+1)/(2 pi (k+2)) B_(k+2,q)
///   + 2(q+1)(k-q+1)/(pi (k+2)) B_(k+2,q+1). Requires 2q < k.
fn sigma_dot_b(k: usize, q: usize) -> Vec<DbTerm> {
    let (ki, qi) = (k as i64, q as i64);
    let f1 = PiLambda::monomial(
        Rational::new(
            ((ki - 2 * qi + 2) * (ki - 2 * qi + 1)).into(),
            (2 * (ki + 2)).into(),
        ),
        -1,
        0,
    );
    let f2 = PiLambda::monomial(
        Rational::new((2 * (qi + 1) * (ki - qi + 1)).into(), (ki + 2).into()),
        -1,
        0,
    );
    vec![DbTerm::B(k + 2, q, f1), DbTerm::B(k + 2, q + 1, f2)]
}

fn negate_terms(terms: Vec<DbTerm>) -> Vec<DbTerm> {
    terms
        .into_iter()
        .map(|t| match t {
            DbTerm::Delta(k, q, c) => DbTerm::Delta(k, q, c.negated()),
            DbTerm::B(k, q, c) => DbTerm::B(k, q, c.negated()),
        })
        .collect()
}

/// Convert Delta/B output terms to accumulated Delta/N coordinates via
/// B = Delta - N.
fn db_to_dn(terms: Vec<DbTerm>) -> BTreeMap<(CurvSymbol, usize, usize), PiLambda> {
    let mut out: BTreeMap<(CurvSymbol, usize, usize), PiLambda> = BTreeMap::new();
    let mut add = |key: (CurvSymbol, usize, usize), c: PiLambda| {
        if c.is_zero() {
            return;
        }
        let e = out.entry(key).or_insert_with(PiLambda::zero);
        *e = e.clone() + c;
    };
    for t in terms {
        match t {
            DbTerm::Delta(k, q, c) => add((CurvSymbol::Delta, k, q), c),
            DbTerm::B(k, q, c) => {
                add((CurvSymbol::Delta, k, q), c.clone());
                add((CurvSymbol::N, k, q), c.negated());
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The reference module structure constants in the Delta/N basis, tabulated
/// from the hermitian integral geometry literature, for in-degrees up to
/// kmax. Actions on N_(k,q) = Delta_(k,q) - B_(k,q) are derived from the
/// Delta and B families.
pub fn reference_table_rows(kmax: usize) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    let push = |gen: Generator,
                    in_sym: CurvSymbol,
                    k: usize,
                    q: usize,
                    terms: BTreeMap<(CurvSymbol, usize, usize), PiLambda>,
                    rows: &mut Vec<TableRow>| {
        for ((out_sym, out_k, out_q), coefficient) in terms {
            rows.push(TableRow {
                generator: gen,
                in_sym,
                in_k: k,
                in_q: q,
                out_sym,
                out_k,
                out_q,
                coefficient,
            });
        }
    };
    for k in 0..=kmax {
        for q in 0..=(k / 2) {
            push(
                Generator::T,
                CurvSymbol::Delta,
                k,
                q,
                db_to_dn(t_dot_delta(k, q)?),
                &mut rows,
            );
            push(
                Generator::Sigma,
                CurvSymbol::Delta,
                k,
                q,
                db_to_dn(sigma_dot_delta(k, q)),
                &mut rows,
            );
            if 2 * q < k {
                // gen . N = gen . Delta - gen . B
                let mut t_n = t_dot_delta(k, q)?;
                t_n.extend(negate_terms(t_dot_b(k, q)?));
                push(Generator::T, CurvSymbol::N, k, q, db_to_dn(t_n), &mut rows);
                let mut s_n = sigma_dot_delta(k, q);
                s_n.extend(negate_terms(sigma_dot_b(k, q)));
                push(Generator::Sigma, CurvSymbol::N, k, q, db_to_dn(s_n), &mut rows);
            }
        }
    }
    Ok(rows)
}

/// Render rows as the CSV format accepted by [`ModuleTable::load`].
pub fn table_rows_to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("generator,inBasis,inK,inQ,outBasis,outK,outQ,coefficientScalarJSON\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.generator.name(),
            r.in_sym.name(),
            r.in_k,
            r.in_q,
            r.out_sym.name(),
            r.out_k,
            r.out_q,
            csv_quote(&crate::json::scalar_to_string(&r.coefficient)),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space_forms::expand_r_mu;

    #[test]
    fn index_sets() {
        let b = curv_basis(2).unwrap();
        assert_eq!(
            b.delta,
            vec![(0, 0), (1, 0), (2, 0), (2, 1), (3, 1), (4, 2)]
        );
        assert_eq!(b.enn, vec![(1, 0)]);
        // n=1: no N indices at all
        let b1 = curv_basis(1).unwrap();
        assert!(b1.enn.is_empty());
        // cardinalities for n <= 4 are validated inside curv_basis
        for n in 1..=4 {
            curv_basis(n).unwrap();
        }
    }

    #[test]
    fn glob_flat_examples() {
        let d21 = CurvElement::basis(2, CurvSymbol::Delta, 2, 1).unwrap();
        let g = glob_flat(&d21);
        assert_eq!(g.coords.len(), 1);
        assert_eq!(g.coords.get(&(2, 1)), Some(&PiLambda::one()));
        let n10 = CurvElement::basis(2, CurvSymbol::N, 1, 0).unwrap();
        assert!(glob_flat(&n10).is_zero());
        // linearity
        let mixed = d21
            .add(&n10.scale(&PiLambda::from_rational(rat_i64(3))))
            .unwrap();
        assert_eq!(glob_flat(&mixed), glob_flat(&d21));
    }

    #[test]
    fn glob_curved_examples() {
        // Delta_(0,0) -> mu^l_(0,0) - (lambda/pi) mu^l_(2,1)
        let d00 = CurvElement::basis(2, CurvSymbol::Delta, 0, 0).unwrap();
        let g = glob_curved(&d00);
        assert_eq!(g.coords.get(&(0, 0)), Some(&PiLambda::one()));
        assert_eq!(
            g.coords.get(&(2, 1)),
            Some(&PiLambda::monomial(rat_i64(-1), -1, 1))
        );
        // B_(1,0) = Delta_(1,0) - N_(1,0) -> mu^l_(1,0)
        let b10 = CurvElement::basis(2, CurvSymbol::Delta, 1, 0)
            .unwrap()
            .add(
                &CurvElement::basis(2, CurvSymbol::N, 1, 0)
                    .unwrap()
                    .scale(&PiLambda::from_rational(rat_i64(-1))),
            )
            .unwrap();
        let g = glob_curved(&b10);
        assert_eq!(g.coords.len(), 1);
        assert_eq!(g.coords.get(&(1, 0)), Some(&PiLambda::one()));
    }

    #[test]
    fn r_lambda_delta_examples() {
        let r = r_lambda_delta(2, 0, 0).unwrap();
        assert_eq!(
            r.coords.get(&(CurvSymbol::Delta, 0, 0)),
            Some(&PiLambda::one())
        );
        // coefficient of Delta_(2,1) is 2 lambda/pi
        assert_eq!(
            r.coords.get(&(CurvSymbol::Delta, 2, 1)),
            Some(&PiLambda::monomial(rat_i64(2), -1, 1))
        );
        // coefficient of Delta_(2,0) is lambda/(2 pi)
        assert_eq!(
            r.coords.get(&(CurvSymbol::Delta, 2, 0)),
            Some(&PiLambda::monomial(crate::scalar::rat(1, 2), -1, 1))
        );
    }

    #[test]
    fn r_lambda_n_examples() {
        // lambda = 0 specialization is the identity
        let r = r_lambda_n(2, 1, 0).unwrap();
        assert_eq!(
            r.at_lambda_zero(),
            CurvElement::basis(2, CurvSymbol::N, 1, 0).unwrap()
        );
        assert_eq!(
            r.coords.get(&(CurvSymbol::N, 1, 0)),
            Some(&PiLambda::one())
        );
        // invalid index
        assert!(r_lambda_n(1, 1, 0).is_err());
    }

    #[test]
    fn glob_diagram() {
        // glob_curved(R_lambda(Delta_(l,q))) = r_lambda(mu_(l,q)) and
        // glob_curved(R_lambda(N_(l,q))) = 0, n <= 3
        for n in 1..=3usize {
            let b = curv_basis(n).unwrap();
            for &(l, q) in &b.delta {
                let lhs = glob_curved(&r_lambda_delta(n, l, q).unwrap());
                let rhs = expand_r_mu(n, l, q).unwrap();
                assert_eq!(lhs, rhs, "glob diagram at Delta_({l},{q}), n={n}");
            }
            for &(l, q) in &b.enn {
                let lhs = glob_curved(&r_lambda_n(n, l, q).unwrap());
                assert!(lhs.is_zero(), "glob of R_lambda(N_({l},{q})) != 0, n={n}");
            }
        }
    }

    #[test]
    fn lk_measure_examples() {
        let lk = lk_measure(2, 2).unwrap();
        let expect = CurvElement::basis(2, CurvSymbol::Delta, 2, 0)
            .unwrap()
            .add(&CurvElement::basis(2, CurvSymbol::Delta, 2, 1).unwrap())
            .unwrap();
        assert_eq!(lk, expect);
        assert_eq!(
            lk_measure(3, 0).unwrap(),
            CurvElement::basis(3, CurvSymbol::Delta, 0, 0).unwrap()
        );
        assert!(lk_measure(2, 5).is_err());
    }

    #[test]
    fn reference_table_loads_and_validates() {
        for n in 1..=3usize {
            let rows = reference_table_rows(2 * n + 2).unwrap();
            let csv = table_rows_to_csv(&rows);
            let table = ModuleTable::load(n, csv.as_bytes()).unwrap();
            // unit acts as identity
            let val = ValAlgebra::get(n).unwrap();
            let x = CurvElement::basis(n, CurvSymbol::Delta, 0, 0).unwrap();
            let chi = val.chi();
            assert_eq!(module_multiply(&chi, &x, &table).unwrap(), x);
        }
    }

    fn repo_table_path() -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/module_table.csv")
    }

    /// Regenerates data/module_table.csv; run with --ignored after changing
    /// the reference formulas.
    #[test]
    #[ignore]
    fn regenerate_module_table() {
        let csv = table_rows_to_csv(&reference_table_rows(10).unwrap());
        std::fs::write(repo_table_path(), csv).unwrap();
    }

    #[test]
    fn bundled_table_in_sync() {
        let csv = table_rows_to_csv(&reference_table_rows(10).unwrap());
        let on_disk = std::fs::read_to_string(repo_table_path()).unwrap();
        assert_eq!(on_disk, csv, "data/module_table.csv is out of sync; rerun regenerate_module_table");
    }

    #[test]
    fn corrupted_table_rejected() {
        let mut rows = reference_table_rows(4).unwrap();
        rows[0].coefficient = rows[0].coefficient.scale(&rat_i64(3));
        assert!(ModuleTable::from_rows(1, &rows).is_err());
    }
}
