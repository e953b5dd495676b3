//! ASCII polynomial expressions.
//!
//! Grammar: integers, the variables `X, Y, Z` (or `U, V, W`, or lower case),
//! the extension generator `a`, the parameter `t`, parentheses, `+ - * ^`,
//! and division by monomials so Čech classes such as `a*Z^3/(X^2*Y)` can be
//! written directly.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf::{Elem, Field, ParamPoly};
use crate::poly::{HomogPoly, Monomial, ParamRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at offset {pos}")]
    Expected { expected: &'static str, pos: usize },
    #[error("division is only allowed by a monomial with unit coefficient")]
    BadDivisor,
    #[error("expression is not homogeneous")]
    NotHomogeneous,
    #[error("expression involves the parameter t; give a param_value or use a parameter-aware entry point")]
    HasParameter,
    #[error("empty expression")]
    Empty,
    #[error("exponent too large")]
    ExponentTooLarge,
}

/// A parsed Laurent polynomial with coefficients in `F_q[t]`.
#[derive(Debug, Clone)]
pub struct Parsed {
    field: Field,
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl Parsed {
    fn constant(field: &Field, c: ParamPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::ONE, c);
        }
        Parsed {
            field: field.clone(),
            terms,
        }
    }

    fn var(field: &Field, v: usize) -> Self {
        let mut e = [0; 3];
        e[v] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial::new(e[0], e[1], e[2]),
            ParamPoly::constant(field, Elem::ONE),
        );
        Parsed {
            field: field.clone(),
            terms,
        }
    }

    fn add(mut self, other: Parsed) -> Parsed {
        for (m, c) in other.terms {
            let v = match self.terms.remove(&m) {
                Some(old) => old.add(&c),
                None => c,
            };
            if !v.is_zero() {
                self.terms.insert(m, v);
            }
        }
        self
    }

    fn neg(mut self) -> Parsed {
        for c in self.terms.values_mut() {
            *c = c.neg();
        }
        self
    }

    fn mul(&self, other: &Parsed) -> Parsed {
        let mut out = Parsed::constant(&self.field, ParamPoly::zero(&self.field));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let term = Parsed {
                    field: self.field.clone(),
                    terms: [(m1.mul(m2), c1.mul(c2))].into_iter().collect(),
                };
                out = out.add(term);
            }
        }
        out
    }

    fn div(&self, other: &Parsed) -> Result<Parsed, ParseError> {
        if other.terms.len() != 1 {
            return Err(ParseError::BadDivisor);
        }
        let (m, c) = other.terms.iter().next().unwrap();
        let c = c.as_constant().ok_or(ParseError::BadDivisor)?;
        let inv = self.field.inv(c).ok_or(ParseError::BadDivisor)?;
        let recip = Parsed {
            field: self.field.clone(),
            terms: [(m.scale(-1), ParamPoly::constant(&self.field, inv))]
                .into_iter()
                .collect(),
        };
        Ok(self.mul(&recip))
    }

    fn pow(&self, n: u32) -> Parsed {
        let mut acc = Parsed::constant(&self.field, ParamPoly::constant(&self.field, Elem::ONE));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Common degree of all terms; `None` for the zero expression.
    pub fn degree(&self) -> Result<Option<i32>, ParseError> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = match degs.next() {
            Some(d) => d,
            None => return Ok(None),
        };
        if degs.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(ParseError::NotHomogeneous)
        }
    }

    pub fn has_parameter(&self) -> bool {
        self.terms.values().any(|c| c.as_constant().is_none())
    }

    /// Homogeneous polynomial with parameter coefficients.
    pub fn into_param(self) -> Result<HomogPoly<ParamRing>, ParseError> {
        let degree = self.degree()?.unwrap_or(0);
        let ring = ParamRing::new(&self.field);
        Ok(HomogPoly::from_terms(&ring, degree, self.terms))
    }

    /// Homogeneous polynomial over the field; fails if `t` occurs.
    pub fn into_field(self) -> Result<HomogPoly<Field>, ParseError> {
        if self.has_parameter() {
            return Err(ParseError::HasParameter);
        }
        let field = self.field.clone();
        self.into_param()?
            .constant_coeffs()
            .map(|p| p.map_coeffs(&field, |c| *c))
            .ok_or(ParseError::HasParameter)
    }

    /// Homogeneous polynomial over the field with `t := value`.
    pub fn specialize(self, value: Elem) -> Result<HomogPoly<Field>, ParseError> {
        Ok(self.into_param()?.specialize(value))
    }
}

struct Parser<'a> {
    field: &'a Field,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<char> {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Parsed, ParseError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Parsed, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some('/') => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                // implicit multiplication, e.g. `2X` or `X(Y+Z)`
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Parsed, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.integer()?;
            let n = u32::try_from(n).map_err(|_| ParseError::ExponentTooLarge)?;
            if n > 100_000 {
                return Err(ParseError::ExponentTooLarge);
            }
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let start = match self.peek() {
            Some(c) if c.is_ascii_digit() => self.pos,
            Some(_) => {
                return Err(ParseError::Expected {
                    expected: "integer",
                    pos: self.pos,
                })
            }
            None => return Err(ParseError::UnexpectedEnd),
        };
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| ParseError::ExponentTooLarge)
    }

    fn atom(&mut self) -> Result<Parsed, ParseError> {
        let f = self.field;
        match self.peek() {
            None => Err(ParseError::UnexpectedEnd),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(ParseError::Expected {
                        expected: "')'",
                        pos: self.pos,
                    });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let p = f.characteristic() as u64;
                let c = f.from_int((n % p) as i64);
                Ok(Parsed::constant(f, ParamPoly::constant(f, c)))
            }
            Some(c) => {
                self.pos += 1;
                match c {
                    'X' | 'x' | 'U' | 'u' => Ok(Parsed::var(f, 0)),
                    'Y' | 'y' | 'V' | 'v' => Ok(Parsed::var(f, 1)),
                    'Z' | 'z' | 'W' | 'w' => Ok(Parsed::var(f, 2)),
                    'a' => Ok(Parsed::constant(f, ParamPoly::constant(f, f.generator()))),
                    't' | 'T' => Ok(Parsed::constant(f, ParamPoly::t(f))),
                    _ => Err(ParseError::UnexpectedChar {
                        ch: c,
                        pos: self.pos - 1,
                    }),
                }
            }
        }
    }
}

/// Parses an expression over `field`.
pub fn parse(field: &Field, src: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser {
        field,
        chars: src.chars().collect(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(ch) => Err(ParseError::UnexpectedChar { ch, pos: p.pos }),
    }
}

/// Parses a homogeneous polynomial over `field` (no parameter).
pub fn parse_poly(field: &Field, src: &str) -> Result<HomogPoly<Field>, ParseError> {
    parse(field, src)?.into_field()
}

/// Parses a constant such as `2`, `a+1` or `t^2+t` with `t := param`.
pub fn parse_constant(field: &Field, src: &str, param: Option<Elem>) -> Result<Elem, ParseError> {
    let parsed = parse(field, src)?;
    if parsed.degree()?.unwrap_or(0) != 0 || parsed.terms.keys().any(|m| *m != Monomial::ONE) {
        return Err(ParseError::NotHomogeneous);
    }
    let poly = match param {
        Some(v) => parsed.specialize(v)?,
        None => parsed.into_field()?,
    };
    Ok(poly.coeff(&Monomial::ONE))
}

/// Comma-separated list of homogeneous polynomials, e.g. `"X^2,Y^2,Z^2"`.
pub fn parse_poly_list(field: &Field, src: &str) -> Result<Vec<HomogPoly<Field>>, ParseError> {
    src.split(',').map(|s| parse_poly(field, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_curve_equation() {
        let f3 = Field::prime(3).unwrap();
        let h = parse(&f3, "Z^4 - X*Y*(X+Y)*(X+t*Y)").unwrap();
        assert!(h.has_parameter());
        let h2 = h.specialize(Elem(2)).unwrap();
        assert_eq!(h2.degree(), 4);
        assert!(parse_poly(&f3, "Z^4 - X*Y*(X+Y)*(X+t*Y)").is_err());
    }

    #[test]
    fn parses_cech_class() {
        let f = Field::new(crate::gf::FieldSpec {
            p: 5,
            d: 4,
            modulus: vec![3, 0, 0, 0, 1],
        })
        .unwrap();
        let c = parse_poly(&f, "a*Z^3/(X^2*Y) + a*Z^3/(X*Y^2)").unwrap();
        assert_eq!(c.degree(), 0);
        assert_eq!(c.coeff(&Monomial::new(-2, -1, 3)), f.generator());
    }

    #[test]
    fn errors() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(
            parse_poly(&f2, "X + Y^2").unwrap_err(),
            ParseError::NotHomogeneous
        );
        assert_eq!(
            parse_poly(&f2, "X / (X+Y)").unwrap_err(),
            ParseError::BadDivisor
        );
        assert!(matches!(
            parse_poly(&f2, "X + ?"),
            Err(ParseError::UnexpectedChar { .. })
        ));
        assert_eq!(parse_poly(&f2, "   ").unwrap_err(), ParseError::Empty);
        assert!(matches!(
            parse_poly(&f2, "(X+Y"),
            Err(ParseError::Expected { .. })
        ));
    }

    #[test]
    fn uvw_variables() {
        let f3 = Field::prime(3).unwrap();
        let a = parse_poly(&f3, "U^4+V^4").unwrap();
        let b = parse_poly(&f3, "X^4+Y^4").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.format_with(["U", "V", "W"]), "U^4+V^4");
    }

    #[test]
    fn constants() {
        let f4 = Field::extension(2, 2).unwrap();
        let a = f4.generator();
        assert_eq!(parse_constant(&f4, "t+t^2", Some(a)).unwrap(), Elem::ONE);
        assert_eq!(parse_constant(&f4, "a", None).unwrap(), a);
    }
}
