//! Expression parser for the compute/gray subcommands. Grammar: integers,
//! rationals a/b, symbols s, t, pi, lambda, operators + - * / ^, parentheses.
//! Values are polynomials in (s, t) with pi/lambda scalar coefficients;
//! division is only by scalar monomials.

use std::collections::BTreeMap;

use klk_core::scalar::PiLambda;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i128),
    Sym(Symbol),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symbol {
    S,
    T,
    Pi,
    Lambda,
}

/// Polynomial in (s, t) over the pi/lambda scalar ring.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly {
    pub terms: BTreeMap<(u64, u64), PiLambda>,
}

impl ScalarPoly {
    fn zero() -> Self {
        ScalarPoly {
            terms: BTreeMap::new(),
        }
    }

    fn constant(c: PiLambda) -> Self {
        let mut p = ScalarPoly::zero();
        p.insert((0, 0), c);
        p
    }

    fn insert(&mut self, key: (u64, u64), c: PiLambda) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(PiLambda::zero);
        *e = e.clone() + c;
        if self.terms[&key].is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert(*k, v.clone());
        }
        out
    }

    fn neg(&self) -> ScalarPoly {
        ScalarPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v.negated())).collect(),
        }
    }

    fn mul(&self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.insert((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    fn div(&self, rhs: &ScalarPoly) -> Result<ScalarPoly, String> {
        if rhs.terms.len() != 1 {
            return Err("division is only defined by scalar monomials".into());
        }
        let (&key, c) = rhs.terms.iter().next().unwrap();
        if key != (0, 0) {
            return Err("division by s or t is not defined".into());
        }
        let mut out = ScalarPoly::zero();
        for (k, v) in &self.terms {
            out.insert(*k, v.div(c).map_err(|e| e.to_string())?);
        }
        Ok(out)
    }

    fn pow(&self, k: u32) -> ScalarPoly {
        let mut acc = ScalarPoly::constant(PiLambda::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The underlying rational polynomial, if no pi/lambda appears.
    pub fn as_rational_poly(&self) -> Result<klk_core::GradedPoly, String> {
        let mut p = klk_core::GradedPoly::zero();
        for (&(a, b), c) in &self.terms {
            let r = c
                .as_rational()
                .map_err(|_| "expression must have rational coefficients".to_string())?;
            p.add_term(a, b, r);
        }
        Ok(p)
    }
}

fn tokenize(input: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '+' => {
                out.push(Token::Plus);
                chars.next();
            }
            '-' => {
                out.push(Token::Minus);
                chars.next();
            }
            '*' => {
                out.push(Token::Star);
                chars.next();
            }
            '/' => {
                out.push(Token::Slash);
                chars.next();
            }
            '^' => {
                out.push(Token::Caret);
                chars.next();
            }
            '(' => {
                out.push(Token::LParen);
                chars.next();
            }
            ')' => {
                out.push(Token::RParen);
                chars.next();
            }
            '0'..='9' => {
                let mut v: i128 = 0;
                while let Some(&(_, d)) = chars.peek() {
                    if let Some(digit) = d.to_digit(10) {
                        v = v
                            .checked_mul(10)
                            .and_then(|x| x.checked_add(digit as i128))
                            .ok_or_else(|| format!("integer literal too large at byte {pos}"))?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(v));
            }
            'a'..='z' => {
                let mut name = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_lowercase() {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let sym = match name.as_str() {
                    "s" => Symbol::S,
                    "t" => Symbol::T,
                    "pi" => Symbol::Pi,
                    "lambda" => Symbol::Lambda,
                    other => return Err(format!("unknown symbol {other:?} at byte {pos}")),
                };
                out.push(Token::Sym(sym));
            }
            other => return Err(format!("unexpected character {other:?} at byte {pos}")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ScalarPoly, String> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.next();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ScalarPoly, String> {
        let mut acc = self.unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Star => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Token::Slash => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ScalarPoly, String> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarPoly, String> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Int(k)) if (0..=64).contains(&k) => Ok(base.pow(k as u32)),
                _ => Err("exponent must be a small nonnegative integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<ScalarPoly, String> {
        match self.next() {
            Some(Token::Int(v)) => Ok(ScalarPoly::constant(PiLambda::from_rational(
                klk_core::scalar::rat_i64(i64::try_from(v).map_err(|_| "integer literal too large".to_string())?),
            ))),
            Some(Token::Sym(Symbol::S)) => {
                let mut p = ScalarPoly::zero();
                p.insert((1, 0), PiLambda::one());
                Ok(p)
            }
            Some(Token::Sym(Symbol::T)) => {
                let mut p = ScalarPoly::zero();
                p.insert((0, 1), PiLambda::one());
                Ok(p)
            }
            Some(Token::Sym(Symbol::Pi)) => Ok(ScalarPoly::constant(PiLambda::pi_pow(1))),
            Some(Token::Sym(Symbol::Lambda)) => {
                Ok(ScalarPoly::constant(PiLambda::lambda_pow(1)))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err("missing closing parenthesis".into()),
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

/// Parse an expression in s, t, pi, lambda.
pub fn parse(input: &str) -> Result<ScalarPoly, String> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err("trailing input after expression".into());
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use klk_core::scalar::rat_i64;

    #[test]
    fn parses_basic_expressions() {
        let p = parse("s*t").unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms.get(&(1, 1)), Some(&PiLambda::one()));
        let p = parse("2*t^2 - 4*s + 1/2").unwrap();
        assert_eq!(p.terms.get(&(0, 2)), Some(&PiLambda::from_rational(rat_i64(2))));
        assert_eq!(
            p.terms.get(&(1, 0)),
            Some(&PiLambda::from_rational(rat_i64(-4)))
        );
        assert_eq!(
            p.terms.get(&(0, 0)),
            Some(&PiLambda::from_rational(klk_core::scalar::rat(1, 2)))
        );
        let p = parse("lambda*s^2/pi").unwrap();
        assert_eq!(
            p.terms.get(&(2, 0)),
            Some(&PiLambda::monomial(rat_i64(1), -1, 1))
        );
    }

    #[test]
    fn parse_errors() {
        assert!(parse("s +").is_err());
        assert!(parse("x").is_err());
        assert!(parse("(s").is_err());
        assert!(parse("1/t").is_err());
        assert!(parse("s^t").is_err());
    }
}
