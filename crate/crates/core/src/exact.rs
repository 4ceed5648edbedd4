//! Exact values in `Q` or a quadratic extension `Q(sqrt d)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `a + b sqrt(d)` with `d` squarefree. Rational values have `b = 0, d = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exact {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl Exact {
    pub fn rational(a: BigRational) -> Self {
        Exact { a, b: BigRational::zero(), d: 1 }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    /// `a + b sqrt(d)`; `d` is reduced to its squarefree part.
    pub fn quadratic(a: BigRational, b: BigRational, d: i64) -> Result<Self> {
        if d == 0 {
            return Ok(Self::rational(a));
        }
        let (square, free) = split_square(d);
        let b = b * BigRational::from_integer(BigInt::from(square));
        if free == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(Exact { a, b, d: free }.normalized())
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.d = 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn radicand(&self) -> Option<i64> {
        (!self.b.is_zero()).then_some(self.d)
    }

    fn common_d(&self, other: &Exact) -> Result<i64> {
        match (self.radicand(), other.radicand()) {
            (Some(x), Some(y)) if x != y => Err(Error::IncompatibleRadicands(x, y)),
            (Some(x), _) | (_, Some(x)) => Ok(x),
            (None, None) => Ok(1),
        }
    }

    pub fn add(&self, other: &Exact) -> Result<Exact> {
        let d = self.common_d(other)?;
        Ok(Exact { a: &self.a + &other.a, b: &self.b + &other.b, d }.normalized())
    }

    pub fn sub(&self, other: &Exact) -> Result<Exact> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Exact {
        Exact { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn mul(&self, other: &Exact) -> Result<Exact> {
        let d = self.common_d(other)?;
        let dq = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dq;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Exact { a, b, d }.normalized())
    }

    pub fn scale(&self, c: &BigRational) -> Exact {
        Exact { a: &self.a * c, b: &self.b * c, d: self.d }.normalized()
    }

    pub fn recip(&self) -> Result<Exact> {
        let dq = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - &self.b * &self.b * dq;
        if norm.is_zero() {
            return Err(Error::DivisionByZero(self.to_string()));
        }
        Ok(Exact { a: &self.a / &norm, b: -(&self.b / &norm), d: self.d }.normalized())
    }

    pub fn div(&self, other: &Exact) -> Result<Exact> {
        self.mul(&other.recip()?)
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Exact>) -> Result<Exact> {
        items.into_iter().try_fold(Exact::zero(), |acc, x| acc.add(x))
    }
}

impl From<BigInt> for Exact {
    fn from(n: BigInt) -> Self {
        Exact::integer(n)
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Exact::integer(n)
    }
}

impl From<BigRational> for Exact {
    fn from(q: BigRational) -> Self {
        Exact::rational(q)
    }
}

/// `d = square^2 * free` with `free` squarefree.
fn split_square(d: i64) -> (i64, i64) {
    let mut free = d;
    let mut square = 1i64;
    let mut p = 2i64;
    while p * p <= free.abs() {
        while free % (p * p) == 0 {
            free /= p * p;
            square *= p;
        }
        p += 1;
    }
    (square, free)
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let coef = if self.b.abs().is_one() { String::new() } else { format!("{}*", fmt_rational(&self.b.abs())) };
        let radical = format!("{coef}sqrt({})", self.d);
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => write!(f, "{radical}"),
            (true, true) => write!(f, "-{radical}"),
            (false, false) => write!(f, "{} + {radical}", fmt_rational(&self.a)),
            (false, true) => write!(f, "{} - {radical}", fmt_rational(&self.a)),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn parse_term(t: &str) -> Option<Exact> {
    let t = t.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    let value = if let Some(pos) = body.find("sqrt(") {
        let coef = body[..pos].trim().trim_end_matches('*').trim();
        let coef = if coef.is_empty() { BigRational::one() } else { parse_rational(coef)? };
        let inner = body[pos + 5..].strip_suffix(')')?;
        let d: i64 = inner.trim().parse().ok()?;
        Exact::quadratic(BigRational::zero(), coef, d).ok()?
    } else {
        Exact::rational(parse_rational(body)?)
    };
    Some(if neg { value.neg() } else { value })
}

impl FromStr for Exact {
    type Err = Error;

    /// Accepts `p/q`, `sqrt(d)`, `c*sqrt(d)` and sums of such terms.
    fn from_str(s: &str) -> Result<Exact> {
        let bad = || Error::ParseValue(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut depth = 0;
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if i > 0 && depth == 0 && bytes[i - 1] != b'(' && bytes[i - 1] != b'*' => {
                    terms.push(&compact[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&compact[start..]);
        let mut acc = Exact::zero();
        for t in terms {
            acc = acc.add(&parse_term(t).ok_or_else(bad)?)?;
        }
        Ok(acc)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Exact::integer(n)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Exact {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(e("3/6").to_string(), "1/2");
        assert_eq!(e("1 + 2*sqrt(12)").to_string(), "1 + 4*sqrt(3)");
        assert_eq!(e("-sqrt(-6)").to_string(), "-sqrt(-6)");
        assert_eq!(e("-1/2 - 3/2*sqrt(5)").to_string(), "-1/2 - 3/2*sqrt(5)");
        assert!("sqrt(x)".parse::<Exact>().is_err());
        assert!("1/0".parse::<Exact>().is_err());
    }

    #[test]
    fn field_operations() {
        let phi = e("1/2 + 1/2*sqrt(5)");
        // phi^2 = phi + 1
        assert_eq!(phi.mul(&phi).unwrap(), phi.add(&Exact::integer(1)).unwrap());
        assert_eq!(phi.mul(&phi.recip().unwrap()).unwrap(), Exact::integer(1));
        assert!(e("sqrt(2)").add(&e("sqrt(3)")).is_err());
        assert_eq!(e("sqrt(2)").mul(&e("sqrt(2)")).unwrap(), Exact::integer(2));
    }
}
