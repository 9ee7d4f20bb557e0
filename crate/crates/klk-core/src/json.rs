//! Deterministic JSON encodings of the core types. Entries are emitted in
//! sorted order so identical values serialize to identical bytes; round
//! trips are exact.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::curv::{CurvElement, CurvSymbol};
use crate::error::{Error, Result};
use crate::forms::DoubleForm;
use crate::gray::GradedPoly;
use crate::scalar::{PiLambda, Rational};
use crate::space_forms::{CurvedTag, CurvedValuation};
use crate::valuations::{FlatTag, FlatValuation};

pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rational_from_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
    if d == BigInt::from(0) {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

#[derive(Serialize, Deserialize)]
struct ScalarTermDto {
    pi: i64,
    lambda: u64,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ScalarDto {
    terms: Vec<ScalarTermDto>,
}

fn scalar_to_dto(s: &PiLambda) -> ScalarDto {
    ScalarDto {
        terms: s
            .terms()
            .map(|(&(pi, lambda), q)| ScalarTermDto {
                pi,
                lambda,
                coeff: rational_to_string(q),
            })
            .collect(),
    }
}

fn scalar_from_dto(dto: &ScalarDto) -> Result<PiLambda> {
    let mut out = PiLambda::zero();
    for t in &dto.terms {
        out = out + PiLambda::monomial(rational_from_str(&t.coeff)?, t.pi, t.lambda);
    }
    Ok(out)
}

pub fn scalar_to_string(s: &PiLambda) -> String {
    serde_json::to_string(&scalar_to_dto(s)).expect("scalar serialization")
}

pub fn scalar_from_str(s: &str) -> Result<PiLambda> {
    let dto: ScalarDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("scalar JSON: {e}")))?;
    scalar_from_dto(&dto)
}

#[derive(Serialize, Deserialize)]
struct FormEntryDto {
    #[serde(rename = "I")]
    i: Vec<u8>,
    #[serde(rename = "J")]
    j: Vec<u8>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct DoubleFormDto {
    n: usize,
    p: usize,
    q: usize,
    entries: Vec<FormEntryDto>,
}

pub fn double_form_to_string(f: &DoubleForm) -> String {
    let (p, q) = f.bidegree();
    let dto = DoubleFormDto {
        n: f.n(),
        p,
        q,
        entries: f
            .entries()
            .map(|((i, j), c)| FormEntryDto {
                i: i.clone(),
                j: j.clone(),
                c: rational_to_string(c),
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("double form serialization")
}

pub fn double_form_from_str(s: &str) -> Result<DoubleForm> {
    let dto: DoubleFormDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("double form JSON: {e}")))?;
    let mut f = DoubleForm::zero(dto.n, dto.p, dto.q);
    for e in &dto.entries {
        if e.i.len() != dto.p || e.j.len() != dto.q {
            return Err(Error::Parse("entry tuple length does not match bidegree".into()));
        }
        if e.i.iter().any(|&x| x == 0 || x as usize > 2 * dto.n)
            || e.j.iter().any(|&x| x == 0 || x as usize > 2 * dto.n)
        {
            return Err(Error::Parse("entry index out of range".into()));
        }
        f.add_signed(&e.i, &e.j, rational_from_str(&e.c)?);
    }
    Ok(f)
}

#[derive(Serialize, Deserialize)]
struct PolyTermDto {
    s: u64,
    t: u64,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct GradedPolyDto {
    terms: Vec<PolyTermDto>,
}

pub fn graded_poly_to_string(p: &GradedPoly) -> String {
    let dto = GradedPolyDto {
        terms: p
            .terms()
            .map(|(&(s, t), c)| PolyTermDto {
                s,
                t,
                c: rational_to_string(c),
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("graded poly serialization")
}

pub fn graded_poly_from_str(s: &str) -> Result<GradedPoly> {
    let dto: GradedPolyDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("graded poly JSON: {e}")))?;
    let mut p = GradedPoly::zero();
    for t in &dto.terms {
        p.add_term(t.s, t.t, rational_from_str(&t.c)?);
    }
    Ok(p)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoordDto {
    /// mu/tau coordinates
    Index {
        k: u64,
        p: u64,
        value: ScalarDto,
    },
    /// monomial coordinates
    Monomial {
        s: u64,
        t: u64,
        value: ScalarDto,
    },
}

#[derive(Serialize, Deserialize)]
struct ValuationDto {
    n: usize,
    basis: String,
    coords: Vec<CoordDto>,
}

fn flat_tag_name(tag: FlatTag) -> &'static str {
    match tag {
        FlatTag::Monomial => "monomial",
        FlatTag::Mu => "mu",
        FlatTag::Tau => "tau",
    }
}

pub fn flat_valuation_to_string(v: &FlatValuation) -> String {
    let coords = v
        .coords
        .iter()
        .map(|(&(a, b), val)| match v.tag {
            FlatTag::Monomial => CoordDto::Monomial {
                s: a,
                t: b,
                value: scalar_to_dto(val),
            },
            _ => CoordDto::Index {
                k: a,
                p: b,
                value: scalar_to_dto(val),
            },
        })
        .collect();
    let dto = ValuationDto {
        n: v.n,
        basis: flat_tag_name(v.tag).to_string(),
        coords,
    };
    serde_json::to_string(&dto).expect("valuation serialization")
}

pub fn flat_valuation_from_str(s: &str) -> Result<FlatValuation> {
    let dto: ValuationDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("valuation JSON: {e}")))?;
    let tag = match dto.basis.as_str() {
        "monomial" => FlatTag::Monomial,
        "mu" => FlatTag::Mu,
        "tau" => FlatTag::Tau,
        other => return Err(Error::Parse(format!("unknown flat basis {other:?}"))),
    };
    let mut out = FlatValuation::zero(dto.n, tag);
    for (pos, c) in dto.coords.iter().enumerate() {
        match (tag, c) {
            (FlatTag::Monomial, CoordDto::Monomial { s, t, value }) => {
                if 2 * s + t > 2 * dto.n as u64 {
                    return Err(Error::Parse(format!(
                        "coords[{pos}]: monomial s^{s} t^{t} exceeds the top degree {}",
                        2 * dto.n
                    )));
                }
                out.insert((*s, *t), scalar_from_dto(value)?);
            }
            (FlatTag::Mu | FlatTag::Tau, CoordDto::Index { k, p, value }) => {
                validate_index(dto.n, *k, *p, pos)?;
                out.insert((*k, *p), scalar_from_dto(value)?);
            }
            _ => {
                return Err(Error::Parse(format!(
                    "coords[{pos}]: key style does not match the basis tag"
                )))
            }
        }
    }
    Ok(out)
}

fn curved_tag_name(tag: CurvedTag) -> &'static str {
    match tag {
        CurvedTag::MuLambda => "mu_lambda",
        CurvedTag::TauLambda => "tau_lambda",
    }
}

pub fn curved_valuation_to_string(v: &CurvedValuation) -> String {
    let dto = ValuationDto {
        n: v.n,
        basis: curved_tag_name(v.tag).to_string(),
        coords: v
            .coords
            .iter()
            .map(|(&(k, p), val)| CoordDto::Index {
                k,
                p,
                value: scalar_to_dto(val),
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("curved valuation serialization")
}

pub fn curved_valuation_from_str(s: &str) -> Result<CurvedValuation> {
    let dto: ValuationDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("curved valuation JSON: {e}")))?;
    let tag = match dto.basis.as_str() {
        "mu_lambda" => CurvedTag::MuLambda,
        "tau_lambda" => CurvedTag::TauLambda,
        other => return Err(Error::Parse(format!("unknown curved basis {other:?}"))),
    };
    let mut out = CurvedValuation::zero(dto.n, tag);
    for (pos, c) in dto.coords.iter().enumerate() {
        match c {
            CoordDto::Index { k, p, value } => {
                validate_index(dto.n, *k, *p, pos)?;
                out.insert((*k, *p), scalar_from_dto(value)?)
            }
            CoordDto::Monomial { .. } => {
                return Err(Error::Parse(format!("coords[{pos}]: curved valuations use (k,p) keys")))
            }
        }
    }
    Ok(out)
}

fn validate_index(n: usize, k: u64, p: u64, pos: usize) -> Result<()> {
    if k > 2 * n as u64 || p > k / 2 || p < k.saturating_sub(n as u64) {
        return Err(Error::Parse(format!(
            "coords[{pos}]: ({k},{p}) is not a valid index for n={n}"
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CurvCoordDto {
    basis: String,
    k: u64,
    q: u64,
    value: ScalarDto,
}

#[derive(Serialize, Deserialize)]
struct CurvElementDto {
    n: usize,
    coords: Vec<CurvCoordDto>,
}

pub fn curv_element_to_string(x: &CurvElement) -> String {
    let dto = CurvElementDto {
        n: x.n,
        coords: x
            .coords
            .iter()
            .map(|(&(sym, k, q), v)| CurvCoordDto {
                basis: sym.name().to_string(),
                k,
                q,
                value: scalar_to_dto(v),
            })
            .collect(),
    };
    serde_json::to_string(&dto).expect("curvature measure serialization")
}

pub fn curv_element_from_str(s: &str) -> Result<CurvElement> {
    let dto: CurvElementDto =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("curvature JSON: {e}")))?;
    let index = crate::curv::curv_basis(dto.n)?;
    let mut out = CurvElement::zero(dto.n);
    for (pos, c) in dto.coords.iter().enumerate() {
        let sym = CurvSymbol::parse(&c.basis)?;
        if !index.contains(sym, c.k as usize, c.q as usize) {
            return Err(Error::Parse(format!(
                "coords[{pos}]: {}_({},{}) is not a valid index for n={}",
                sym.name(), c.k, c.q, dto.n
            )));
        }
        out.insert((sym, c.k, c.q), scalar_from_dto(&c.value)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Prng};
    use crate::valuations::FlatTag;

    pub(crate) fn random_scalar(rng: &mut Prng) -> PiLambda {
        let mut s = PiLambda::zero();
        for _ in 0..rng.below(4) {
            let pi = rng.below(7) as i64 - 3;
            let lambda = rng.below(3);
            s = s + PiLambda::monomial(rng.small_rational(20, 7), pi, lambda);
        }
        s
    }

    #[test]
    fn scalar_round_trip() {
        let s = PiLambda::monomial(rat(-3, 7), -1, 2) + PiLambda::monomial(rat(5, 1), 2, 0);
        let text = scalar_to_string(&s);
        assert_eq!(scalar_from_str(&text).unwrap(), s);
        assert_eq!(scalar_to_string(&scalar_from_str(&text).unwrap()), text);
        // a pi^-1 lambda^2 monomial
        let x = PiLambda::monomial(rat(1, 1), -1, 2);
        let t = scalar_to_string(&x);
        assert!(t.contains("\"pi\":-1"));
        assert_eq!(scalar_from_str(&t).unwrap(), x);
    }

    #[test]
    fn randomized_round_trips() {
        let mut rng = Prng::new(42);
        for _ in 0..50 {
            let s = random_scalar(&mut rng);
            let text = scalar_to_string(&s);
            let back = scalar_from_str(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(scalar_to_string(&back), text);
        }
    }

    #[test]
    fn flat_valuation_round_trip() {
        let mut v = FlatValuation::zero(2, FlatTag::Mu);
        v.insert((2, 1), PiLambda::monomial(rat(1, 3), -1, 1));
        v.insert((0, 0), PiLambda::one());
        let text = flat_valuation_to_string(&v);
        assert_eq!(flat_valuation_from_str(&text).unwrap(), v);
        // monomial tag uses s/t keys
        let mut m = FlatValuation::zero(2, FlatTag::Monomial);
        m.insert((1, 2), PiLambda::one());
        let text = flat_valuation_to_string(&m);
        assert!(text.contains("\"s\":1"));
        assert_eq!(flat_valuation_from_str(&text).unwrap(), m);
    }

    #[test]
    fn double_form_round_trip() {
        let f = crate::forms::canonical_form(2, crate::forms::CanonicalKind::Gray);
        let text = double_form_to_string(&f);
        assert_eq!(double_form_from_str(&text).unwrap(), f);
        // malformed input reports a parse error
        assert!(double_form_from_str("{\"n\":1,\"p\":1,\"q\":1,\"entries\":[{\"I\":[1,2],\"J\":[1],\"c\":\"1/1\"}]}").is_err());
    }
}
