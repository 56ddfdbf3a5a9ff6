//! Recursive-descent reader for the polynomial text grammar
//!
//! ```text
//! expr   := ['-'|'+'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' UINT)*
//! atom   := INT | VAR | '(' expr ')'
//! ```
//!
//! Implicit multiplication is rejected. Division is evaluated as a rational
//! function; `parse_poly` only accepts it when the divisor is a constant.

use num_bigint::BigInt;

use super::{Poly, PolyError, RationalFunction, Vars};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(PolyError::Syntax { pos: start, msg: format!("unexpected character '{c}'") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Intermediate value: numerator and denominator, not yet reduced.
struct Frac {
    num: Poly,
    den: Poly,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Frac, PolyError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc.num = acc.num.neg();
        }
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            let rhs = t.num.mul(&acc.den);
            let lhs = acc.num.mul(&t.den);
            acc.num = if sign { lhs.sub(&rhs) } else { lhs.add(&rhs) };
            acc.den = acc.den.mul(&t.den);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac, PolyError> {
        let mut acc = self.factor()?;
        loop {
            let div = match self.peek() {
                Some(Tok::Star) => false,
                Some(Tok::Slash) => true,
                _ => break,
            };
            self.pos += 1;
            let at = self.offset();
            let f = self.factor()?;
            if div {
                if f.num.is_zero() {
                    return Err(PolyError::Syntax { pos: at, msg: "division by zero".into() });
                }
                acc = Frac { num: acc.num.mul(&f.den), den: acc.den.mul(&f.num) };
            } else {
                acc = Frac { num: acc.num.mul(&f.num), den: acc.den.mul(&f.den) };
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Frac, PolyError> {
        let mut base = self.atom()?;
        while let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Int(e)) => e.clone(),
                _ => return self.err("expected a non-negative integer exponent"),
            };
            let e: u32 = match u32::try_from(e) {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            self.pos += 1;
            base = Frac { num: base.num.pow(e), den: base.den.pow(e) };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac, PolyError> {
        let one = Poly::one(self.vars);
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Frac { num: Poly::constant(self.vars, super::Rational::from_integer(v)), den: one })
            }
            Some(Tok::Ident(name)) => {
                let Some(i) = self.vars.iter().position(|v| *v == name) else {
                    return Err(PolyError::UnknownVariable(name));
                };
                self.pos += 1;
                Ok(Frac { num: Poly::var(self.vars, i), den: one })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_frac(text: &str, vars: &Vars) -> Result<Frac, PolyError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), vars };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parses and expands a polynomial over the given variable list.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<Poly, PolyError> {
    let f = parse_frac(text, vars)?;
    match f.den.constant_value() {
        Some(c) => Ok(f.num.scale(&c.recip())),
        None => Err(PolyError::Syntax { pos: 0, msg: "division by a non-constant polynomial".into() }),
    }
}

/// Parses a quotient of polynomials, e.g. `(n^2+2*k^2)/(k+n+1)`.
pub fn parse_rational_function(text: &str, vars: &Vars) -> Result<RationalFunction, PolyError> {
    let f = parse_frac(text, vars)?;
    RationalFunction::new(f.num, f.den)
}

/// Sign flag and factors with multiplicities.
pub(crate) type ProductFactors = (bool, Vec<(Poly, u32)>);

/// Splits a top-level product `[-] f1 * f2 * ...` into its syntactic factors.
/// Returns `None` when the text is not a pure product (e.g. a sum at top level).
pub(crate) fn parse_product_factors(text: &str, vars: &Vars) -> Result<Option<ProductFactors>, PolyError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), vars };
    let neg = matches!(p.peek(), Some(Tok::Minus));
    if neg {
        p.pos += 1;
    }
    let mut factors = Vec::new();
    loop {
        let f = p.atom()?;
        let mut e = 1u32;
        while let Some(Tok::Caret) = p.peek() {
            p.pos += 1;
            match p.peek() {
                Some(Tok::Int(x)) => {
                    e *= u32::try_from(x.clone())
                        .map_err(|_| PolyError::Syntax { pos: p.offset(), msg: "exponent too large".into() })?;
                    p.pos += 1;
                }
                _ => return p.err("expected a non-negative integer exponent"),
            }
        }
        if !f.den.is_one() {
            return Ok(None);
        }
        factors.push((f.num, e));
        match p.peek() {
            Some(Tok::Star) => p.pos += 1,
            None => break,
            _ => return Ok(None),
        }
    }
    Ok(Some((neg, factors)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{make_vars, Rational};

    fn vars() -> Vars {
        make_vars(&["n", "k"])
    }

    #[test]
    fn expands_products() {
        let v = vars();
        let p = parse_poly("(4*k-2*n+1)*(k+n+1)", &v).unwrap();
        assert_eq!(p, parse_poly("4*k^2+2*k*n-2*n^2+5*k-n+1", &v).unwrap());
        assert!(parse_poly("0", &v).unwrap().is_zero());
        assert_eq!(parse_poly("k+n+1", &v).unwrap().to_string(), "n+k+1");
    }

    #[test]
    fn errors_carry_position() {
        let v = vars();
        match parse_poly("n + * k", &v) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("n+x", &v), Err(PolyError::UnknownVariable(x)) if x == "x"));
        assert!(matches!(parse_poly("2n", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("n^-1", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("(n+1", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("", &v), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("1/n", &v), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn constant_division_and_powers() {
        let v = vars();
        let p = parse_poly("3/2*k", &v).unwrap();
        assert_eq!(p.leading_coeff(), Rational::new(3.into(), 2.into()));
        assert_eq!(parse_poly("(n+1)^2^2", &v).unwrap(), parse_poly("(n+1)^4", &v).unwrap());
        assert_eq!(parse_poly("n^0", &v).unwrap(), Poly::one(&v));
    }

    #[test]
    fn rational_functions() {
        let v = vars();
        let y = parse_rational_function("(n^2+2*k^2)/(k+n+1)", &v).unwrap();
        assert_eq!(y.den(), &parse_poly("n+k+1", &v).unwrap());
        let z = parse_rational_function("(n^2-1)/(2*n-2)", &v).unwrap();
        assert_eq!(z.num(), &parse_poly("1/2*n+1/2", &v).unwrap());
        assert!(z.den().is_one());
    }

    #[test]
    fn product_splitting() {
        let v = vars();
        let (neg, f) = parse_product_factors("-(k+n+1)*(2*k+3*n+1)^2", &v).unwrap().unwrap();
        assert!(neg);
        assert_eq!(f.len(), 2);
        assert_eq!(f[1].1, 2);
        assert!(parse_product_factors("n^2+1", &v).unwrap().is_none());
        assert_eq!(parse_product_factors("3", &v).unwrap().unwrap().1.len(), 1);
    }
}
