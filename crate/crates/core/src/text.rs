//! Parser for the textual form of scalars and plane-algebra elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := atom ['^' ['-'] digits]
//! atom   := digits | 'i' | 'h' | ('x' | 'y') [digits] | '(' expr ')' | '-' power
//! ```
//!
//! Products are taken in the written order and normal-ordered, so
//! `y*x` parses to `x*y + (2*i*h)*y`. A letter without a suffix is copy 0.

use thiserror::Error;

use crate::plane::{AlgebraElement, PlaneMonomial};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("negative or invalid exponent on a non-invertible factor at offset {0}")]
    BadExponent(usize),
    #[error("division by a non-invertible factor at offset {0}")]
    BadDivisor(usize),
    #[error("number too large at offset {0}")]
    Overflow(usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            Some(c) => ParseError::Unexpected(c as char, self.pos),
            None => ParseError::Eof,
        }
    }

    /// Digits immediately at the cursor (no whitespace skipping).
    fn digits(&mut self) -> Option<Result<i64, ParseError>> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Some(text.parse().map_err(|_| ParseError::Overflow(start)))
    }

    fn expr(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = if self.eat(b'-') { -self.term()? } else { self.term()? };
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.power()?;
                let inv = d
                    .as_scalar()
                    .and_then(|s| s.inv_monomial())
                    .ok_or(ParseError::BadDivisor(at))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<AlgebraElement, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let neg = self.eat(b'-');
        self.skip_ws();
        let e = self.digits().ok_or_else(|| self.unexpected())??;
        let e = if neg { -e } else { e };
        raise(&base, e).ok_or(ParseError::BadExponent(at))
    }

    fn atom(&mut self) -> Result<AlgebraElement, ParseError> {
        let c = self.peek().ok_or(ParseError::Eof)?;
        match c {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.unexpected());
                }
                Ok(e)
            }
            b'-' => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            b'0'..=b'9' => {
                let n = self.digits().expect("peeked a digit")?;
                Ok(AlgebraElement::scalar(Scalar::int(n)))
            }
            b'i' => {
                self.pos += 1;
                Ok(AlgebraElement::scalar(Scalar::i()))
            }
            b'h' => {
                self.pos += 1;
                Ok(AlgebraElement::scalar(Scalar::h()))
            }
            b'x' | b'y' => {
                self.pos += 1;
                let at = self.pos;
                let copy = match self.digits() {
                    Some(n) => usize::try_from(n?).map_err(|_| ParseError::Overflow(at))?,
                    None => 0,
                };
                if copy > u8::MAX as usize {
                    return Err(ParseError::Overflow(at));
                }
                Ok(if c == b'x' { AlgebraElement::x(copy) } else { AlgebraElement::y(copy) })
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// `base^e`, allowing negative `e` for invertible monomials (`y`, `h`,
/// nonzero constants).
fn raise(base: &AlgebraElement, e: i64) -> Option<AlgebraElement> {
    let e32 = i32::try_from(e).ok()?;
    if e >= 0 {
        return Some(base.pow(e32 as u32));
    }
    if let Some(s) = base.as_scalar() {
        let inv = s.inv_monomial()?;
        return Some(AlgebraElement::scalar(inv.pow(e32.unsigned_abs())));
    }
    let mut terms = base.terms();
    let (m, c) = terms.next()?;
    if terms.next().is_some() || !c.is_one() {
        return None;
    }
    // a single pure y power
    let exps = m.exponents();
    let copy = exps.iter().position(|&p| p != (0, 0))?;
    let (xe, ye) = exps[copy];
    if xe != 0 || exps[copy + 1..].iter().any(|&p| p != (0, 0)) {
        return None;
    }
    Some(AlgebraElement::monomial(
        Scalar::one(),
        PlaneMonomial::single(copy, 0, ye.checked_mul(e32)?),
    ))
}

/// Parse a plane-algebra element (or a scalar, which is a special case).
pub fn parse_plane(s: &str) -> Result<AlgebraElement, ParseError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(_) => Err(p.unexpected()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_roundtrip() {
        for text in ["(-4)*h^2 + (2*i)*h^-1", "1/2 - 3*i*h", "0", "h^-3 + 7"] {
            let s: Scalar = text.parse().unwrap();
            let back: Scalar = s.to_string().parse().unwrap();
            assert_eq!(s, back, "{text}");
        }
        let s: Scalar = "(-4)*h^2 + (2*i)*h^-1".parse().unwrap();
        assert_eq!(s.to_string(), "(-4)*h^2 + (2*i)*h^-1");
    }

    #[test]
    fn ordering_happens_while_parsing() {
        let e = parse_plane("y*x").unwrap();
        assert_eq!(e, parse_plane("x*y + 2*i*h*y").unwrap());
        assert_eq!(parse_plane("y*y^-1").unwrap(), AlgebraElement::one());
    }

    #[test]
    fn elements_roundtrip() {
        for text in ["y*x^2", "x1*x0 - y^-2", "(x - x1)^2*y1^-1", "x^3 + h*x*y^-1*x"] {
            let e = parse_plane(text).unwrap();
            assert_eq!(parse_plane(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_plane("x +").is_err());
        assert!(parse_plane("x^-1").is_err());
        assert!(parse_plane("x / (1 + h)").is_err());
        assert!(parse_plane("z").is_err());
    }
}
