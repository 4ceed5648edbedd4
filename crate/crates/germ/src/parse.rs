//! Parser for polynomial expressions in `x` and `y` with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly2::Poly2;

pub type Germ = Poly2<BigRational>;

/// Parses and expands an expression such as `x*y + y^2 + x^3` or
/// `(x^3+y^5)+y*(y^2-3*x^2)`. Division is allowed only by nonzero constants.
pub fn parse_germ(text: &str) -> Result<Germ> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err(format!("unexpected '{}'", p.s[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Germ> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Germ> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') if self.s.get(self.pos + 1) != Some(&b'*') => {
                    self.pos += 1;
                    let u = self.unary()?;
                    acc = &acc * &u;
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let u = self.unary()?;
                    if !u.is_constant() {
                        return Err(Error::NonPolynomial(format!("division by a non-constant at byte {at}")));
                    }
                    let c = u.coeff(0, 0);
                    if c.is_zero() {
                        return Err(Error::Parse { position: at, message: "division by zero".into() });
                    }
                    acc = acc.scale(&(BigRational::from_integer(1.into()) / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Germ> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Germ> {
        let base = self.atom()?;
        let caret = match self.peek() {
            Some(b'^') => 1,
            Some(b'*') if self.s.get(self.pos + 1) == Some(&b'*') => 2,
            _ => return Ok(base),
        };
        self.pos += caret;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a non-negative integer exponent"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        let e: u32 = digits
            .parse()
            .ok()
            .filter(|&e| e <= 1000)
            .ok_or(Error::Parse { position: start, message: "exponent too large".into() })?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Germ> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Germ::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Germ::y())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                Err(self.err(format!("unknown variable '{}' (only x and y are allowed)", c as char)))
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Germ> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let mut frac_digits = 0u32;
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
                frac_digits += 1;
            }
        }
        let text: String = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").replace('.', "");
        let n: BigInt = text.parse().map_err(|_| Error::Parse { position: start, message: "bad number".into() })?;
        let den = BigInt::from(10u32).pow(frac_digits);
        let value = BigRational::new(n, den);
        Ok(Germ::constant(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_examples() {
        assert_eq!(parse_germ("x*y + y^2 + x^3").unwrap().to_string(), "x*y + y^2 + x^3");
        let s = parse_germ("(x^3+y^5)+y*(y^2-3*x^2)").unwrap();
        assert_eq!(s.to_string(), "x^3 - 3*x^2*y + y^3 + y^5");
        assert!(parse_germ("0").unwrap().is_zero());
        assert_eq!(parse_germ("x/2 - 1.5*y").unwrap().to_string(), "1/2*x - 3/2*y");
        assert_eq!(parse_germ("-(x+y)**2").unwrap(), parse_germ("-x^2-2*x*y-y^2").unwrap());
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_germ("x + z").unwrap_err(), Error::Parse { position: 4, message: "unknown variable 'z' (only x and y are allowed)".into() });
        assert!(matches!(parse_germ("x/y"), Err(Error::NonPolynomial(_))));
        assert!(matches!(parse_germ("(x+y"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse_germ("x^"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_germ("x/0"), Err(Error::Parse { position: 1, .. })));
    }
}
