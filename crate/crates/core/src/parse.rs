//! Text grammar for scalars, words and vectors.
//!
//! One expression language covers all three: sums, differences, products
//! (`*` or juxtaposition), division by scalars, integer powers and
//! parentheses over the atoms `d`, `s3`, integers, `u1 u2 v1 v2`, `chiN`
//! and `<identity>`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::Algebra;
use crate::field::{QSqrt3, Scalar};
use crate::vector::Vector;
use crate::word::{reduce_letters, Letter, ScaledWord, Word};
use crate::ExactVector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        column,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Identity,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((col, t));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((col, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
        } else if c == '<' {
            let rest: String = chars[i..].iter().collect();
            if rest.starts_with("<identity>") {
                out.push((col, Tok::Identity));
                i += "<identity>".len();
            } else {
                return err(col, "expected <identity>");
            }
        } else {
            return err(col, format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    alg: Algebra<Scalar>,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            end_col: src.chars().count() + 1,
            alg: Algebra::default(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<ExactVector, ParseError> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Identity) | Some(Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<ExactVector, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.alg.mul_vec(&acc, &rhs);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let col = self.col();
                    let rhs = self.unary()?;
                    let Some(s) = as_scalar(&rhs) else {
                        return err(col, "can only divide by a scalar");
                    };
                    let Some(inv) = s.inv() else {
                        return err(col, "division by zero");
                    };
                    acc = acc.scale(&inv);
                }
                _ if self.starts_atom() => {
                    let rhs = self.unary()?;
                    acc = self.alg.mul_vec(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExactVector, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExactVector, ParseError> {
        let base_col = self.col();
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let Some(Tok::Int(n)) = self.bump() else {
            return err(col, "expected an integer exponent");
        };
        let Ok(n) = i64::try_from(n) else {
            return err(col, "exponent too large");
        };
        let n = if neg { -n } else { n };
        self.pow(base, n, base_col)
    }

    fn pow(&self, base: ExactVector, n: i64, col: usize) -> Result<ExactVector, ParseError> {
        let base = if n < 0 {
            let mut it = base.iter();
            match (it.next(), it.next()) {
                (Some((w, c)), None) => {
                    // (c·w)⁻¹ = c⁻¹ · w*
                    let Some(ci) = c.inv() else {
                        return err(col, "division by zero");
                    };
                    let a = w.adjoint();
                    Vector::monomial(ci.mul_d_pow(a.phase), a.word)
                }
                (None, _) => return err(col, "division by zero"),
                _ => return err(col, "negative power of a sum"),
            }
        } else {
            base
        };
        let mut acc = Vector::identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.alg.mul_vec(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<ExactVector, ParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(scalar_vec(Scalar::from_qsqrt3(QSqrt3::from_rational(BigRational::from_integer(n))))),
            Some(Tok::Identity) => Ok(Vector::identity()),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return err(self.toks.get(self.pos - 1).map(|(c, _)| *c).unwrap_or(self.end_col), "expected ')'");
                }
                Ok(v)
            }
            Some(Tok::Ident(name)) => ident(&name, col, &self.alg),
            Some(t) => err(col, format!("unexpected token {t:?}")),
            None => err(col, "unexpected end of input"),
        }
    }
}

fn scalar_vec(s: Scalar) -> ExactVector {
    Vector::monomial(s, Word::identity())
}

fn ident(name: &str, col: usize, alg: &Algebra<Scalar>) -> Result<ExactVector, ParseError> {
    match name {
        "d" => return Ok(scalar_vec(Scalar::d())),
        "s3" => return Ok(scalar_vec(Scalar::sqrt3())),
        _ => {}
    }
    if let Some(l) = letter(name) {
        let p = reduce_letters(&[l]);
        return Ok(Vector::from_word(p.word));
    }
    if let Some(n) = name.strip_prefix("chi") {
        if let Ok(n) = n.parse::<usize>() {
            return Ok(alg.chi(n));
        }
    }
    err(col, format!("unknown symbol '{name}'"))
}

fn letter(name: &str) -> Option<Letter> {
    match name {
        "u1" => Some(Letter::u(1, 1)),
        "u2" => Some(Letter::u(2, 1)),
        "v1" => Some(Letter::v(1, 1)),
        "v2" => Some(Letter::v(2, 1)),
        _ => None,
    }
}

/// The scalar of an identity-only vector.
fn as_scalar(v: &ExactVector) -> Option<Scalar> {
    if v.is_zero() {
        return Some(Scalar::zero());
    }
    let mut it = v.iter();
    match (it.next(), it.next()) {
        (Some((w, c)), None) if w.is_identity() => Some(c.clone()),
        _ => None,
    }
}

/// Parses a vector expression such as `2*u1 + (d - 1) * v1 u2^-1` or `chi1*chi1`.
pub fn parse_vector(src: &str) -> Result<ExactVector, ParseError> {
    let mut p = Parser::new(src)?;
    if p.toks.is_empty() {
        return err(1, "empty input");
    }
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return err(p.col(), "unexpected trailing input");
    }
    Ok(v)
}

/// Parses a scalar such as `(1/2 + 3/2*s3)*d^-2` or `(d + 1) / (d - 1)`.
pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    let v = parse_vector(src)?;
    as_scalar(&v).ok_or(ParseError {
        column: 1,
        message: "expression is not a scalar".into(),
    })
}

/// Strict word literal: whitespace-separated `u1 u2 v1 v2` each with an
/// optional `^<signed-int>`, or `<identity>`.
pub fn parse_letters(src: &str) -> Result<Vec<Letter>, ParseError> {
    let mut out = Vec::new();
    let mut col = 1;
    for piece in src.split(' ') {
        let here = col;
        col += piece.chars().count() + 1;
        let tok = piece.trim();
        if tok.is_empty() {
            continue;
        }
        if tok == "<identity>" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let ecol = here + n.chars().count() + 1;
                match e.parse::<i32>() {
                    Ok(e) => (n, e),
                    Err(_) => return err(ecol, format!("bad exponent '{e}'")),
                }
            }
            None => (tok, 1),
        };
        let Some(l) = letter(name) else {
            return err(here, format!("unknown generator '{name}'"));
        };
        out.push(Letter { exp, ..l });
    }
    Ok(out)
}

/// Reduces a word literal to `d^k · w`.
pub fn parse_word(src: &str) -> Result<ScaledWord, ParseError> {
    Ok(reduce_letters(&parse_letters(src)?))
}

impl FromStr for Scalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Scalar, ParseError> {
        parse_scalar(s)
    }
}

impl FromStr for Vector<Scalar> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_vector(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn scalar_roundtrip_examples() {
        for src in ["(1/2 + 3/2*s3)*d^-2", "d + d^-1", "(d + 1) / (d - 1)", "-s3", "0"] {
            let s = parse_scalar(src).unwrap();
            assert_eq!(parse_scalar(&s.to_string()).unwrap(), s, "{src}");
        }
    }

    #[test]
    fn word_literals_reduce() {
        let w = parse_word("v1 u1").unwrap();
        assert_eq!(w.to_string(), "d^-1 * u1 v1");
        assert_eq!(parse_word("u1 u1^-1").unwrap().to_string(), "1 * <identity>");
        assert_eq!(parse_word("u1 v1 u1 v1^-1").unwrap().to_string(), "d^-1 * u1^2");
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_letters("u1 w3").unwrap_err();
        assert_eq!(e.column, 4);
        let e = parse_letters("u1 v1^x").unwrap_err();
        assert_eq!(e.column, 7);
        let e = parse_vector("u1 + $").unwrap_err();
        assert_eq!(e.column, 6);
    }

    #[test]
    fn expressions() {
        let v = parse_vector("chi1*chi1").unwrap();
        assert_eq!(v.trace(), Scalar::from_int(4));
        let v = parse_vector("1*<identity> + 2*u1").unwrap();
        assert_eq!(v.trace(), Scalar::one());
        let v = parse_vector("u1 v1").unwrap();
        assert_eq!(v.norm_sq(), Scalar::one());
        let w = parse_vector("(v1 u1)^-1 v1 u1").unwrap();
        assert_eq!(w, Vector::identity());
    }
}
