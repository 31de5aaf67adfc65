//! Recursive-descent parser for the polynomial text grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' '-'? int)?
//! atom   := int | 'x' int | 'g' | '(' expr ')'
//! ```
//!
//! Implicit multiplication (`2x1`) is rejected.

use std::sync::Arc;

use super::{ExponentVector, LaurentPoly};
use crate::error::{Error, Result};
use crate::gfq::{FieldParams, FqElem};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Var(usize),
    Gen,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let read_int = |i: &mut usize| -> Result<i64> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        text[start..*i].parse::<i64>().map_err(|_| syntax(start, "integer literal too large"))
    };
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let v = read_int(&mut i)?;
                out.push((Tok::Int(v), pos));
                continue;
            }
            b'x' => {
                i += 1;
                if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                    return Err(syntax(pos, "expected variable index after 'x'"));
                }
                let v = read_int(&mut i)?;
                out.push((Tok::Var(v as usize), pos));
                continue;
            }
            b'g' => out.push((Tok::Gen, pos)),
            b'+' => out.push((Tok::Plus, pos)),
            b'-' => out.push((Tok::Minus, pos)),
            b'*' => out.push((Tok::Star, pos)),
            b'^' => out.push((Tok::Caret, pos)),
            b'(' => out.push((Tok::LParen, pos)),
            b')' => out.push((Tok::RParen, pos)),
            _ => return Err(syntax(pos, format!("unexpected character {:?}", c as char))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    n: usize,
    field: &'a Arc<FieldParams>,
}

type Poly = LaurentPoly<FqElem>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn constant(&self, c: FqElem) -> Poly {
        Poly::monomial(ExponentVector::zero(self.n), c)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = acc.mul(&self.factor()?);
                }
                // adjacency without an operator is implicit multiplication
                Some(Tok::Int(_) | Tok::Var(_) | Tok::Gen | Tok::LParen) => {
                    return Err(syntax(self.pos(), "implicit multiplication is not allowed; use '*'"))
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let epos = self.pos();
        let k = match self.peek() {
            Some(&Tok::Int(k)) => {
                self.at += 1;
                k
            }
            _ => return Err(syntax(epos, "expected integer exponent")),
        };
        if neg {
            self.inverse_power(base, k, epos)
        } else {
            let mut out = self.constant(FqElem::from_int(self.field, 1));
            for _ in 0..k {
                out = out.mul(&base);
            }
            Ok(out)
        }
    }

    fn inverse_power(&self, base: Poly, k: i64, pos: usize) -> Result<Poly> {
        if base.len() != 1 {
            return Err(syntax(pos, "negative power of a non-monomial"));
        }
        let (e, c) = base.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let inv = c.inv().ok_or_else(|| Error::NotInField("division by zero".into()))?;
        Ok(Poly::monomial(e.scale(-k), inv.pow(k as u64)))
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(self.constant(FqElem::from_int(self.field, v)))
            }
            Some(Tok::Var(i)) => {
                self.at += 1;
                if i == 0 || i > self.n {
                    return Err(Error::VariableOutOfRange { index: i, n: self.n, pos });
                }
                Ok(Poly::monomial(ExponentVector::unit(self.n, i - 1), FqElem::from_int(self.field, 1)))
            }
            Some(Tok::Gen) => {
                self.at += 1;
                if self.field.a == 1 {
                    return Err(Error::NotInField(format!(
                        "generator 'g' used at position {pos} but F_{} is a prime field",
                        self.field.p
                    )));
                }
                Ok(self.constant(FqElem::generator(self.field)))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.at += 1;
                Ok(inner)
            }
            Some(_) => Err(syntax(pos, "expected a number, variable, 'g' or '('")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parses `text` as a Laurent polynomial in `x1..xn` over `field`.
pub fn parse_laurent(text: &str, n: usize, field: &Arc<FieldParams>) -> Result<LaurentPoly<FqElem>> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), n, field };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(out)
}

/// Parses a coefficient expression (no variables) into `F_q`.
pub fn parse_coefficient(text: &str, field: &Arc<FieldParams>) -> Result<FqElem> {
    let poly = parse_laurent(text, 0, field)?;
    Ok(poly.coeff(&ExponentVector::zero(0)).cloned().unwrap_or_else(|| FqElem::zero(field)))
}

/// Largest variable index mentioned in `text`, used to infer `n`.
pub fn max_variable_index(text: &str) -> Result<usize> {
    Ok(lex(text)?
        .into_iter()
        .filter_map(|(t, _)| if let Tok::Var(i) = t { Some(i) } else { None })
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::make_field;

    fn terms(p: &Poly) -> Vec<(Vec<i64>, u64)> {
        p.terms().map(|(e, c)| (e.0.clone(), c.index())).collect()
    }

    #[test]
    fn direct_reading() {
        let f = parse_laurent("x1 + x1^-1", 1, &make_field(3, 1).unwrap()).unwrap();
        assert_eq!(terms(&f), vec![(vec![-1], 1), (vec![1], 1)]);
    }

    #[test]
    fn cancellation() {
        let f = parse_laurent("x1 - x1", 1, &make_field(5, 1).unwrap()).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn like_terms_mod_seven() {
        let f = parse_laurent("2*x1^2*x2^-3 + 3*x1^2*x2^-3", 2, &make_field(7, 1).unwrap()).unwrap();
        assert_eq!(terms(&f), vec![(vec![2, -3], 5)]);
    }

    #[test]
    fn errors_carry_positions() {
        let k = make_field(3, 1).unwrap();
        assert_eq!(parse_laurent("x1 + 2x1", 1, &k).unwrap_err(), Error::Syntax {
            pos: 6,
            msg: "implicit multiplication is not allowed; use '*'".into()
        });
        assert!(matches!(parse_laurent("x1 + x3", 2, &k), Err(Error::VariableOutOfRange { index: 3, n: 2, pos: 5 })));
        assert!(matches!(parse_laurent("x1 +", 1, &k), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_laurent("x1 / 2", 1, &k), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_laurent("g*x1", 1, &k), Err(Error::NotInField(_))));
        assert!(matches!(parse_laurent("(x1+1)^-1", 1, &k), Err(Error::Syntax { .. })));
    }

    #[test]
    fn generator_arithmetic() {
        let k = make_field(3, 2).unwrap();
        // g^2 = -1 in F_9 = F_3[g]/(g^2+1)
        let f = parse_laurent("g^2*x1", 1, &k).unwrap();
        assert_eq!(terms(&f), vec![(vec![1], 2)]);
        let h = parse_laurent("g^-1", 0, &k).unwrap();
        assert_eq!(h.coeff(&ExponentVector::zero(0)).unwrap().to_string(), "2*g");
    }

    #[test]
    fn print_parse_identity() {
        let k = make_field(3, 2).unwrap();
        for src in ["x1 + x1^-1", "2*x1^2*x2^-3 + (g + 2)*x2 + g", "0", "x1*x2^-1 - 1"] {
            let f = parse_laurent(src, 2, &k).unwrap();
            let back = parse_laurent(&f.to_string(), 2, &k).unwrap();
            assert_eq!(back, f, "{src}");
        }
    }
}
