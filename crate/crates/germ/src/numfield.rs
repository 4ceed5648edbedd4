//! Simple algebraic extensions of Q and their elements.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::poly::Poly;

pub type Q = BigRational;

/// `Q[a]/(m(a))` for a monic irreducible `m`.
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: Poly<Q>,
}

impl NumberField {
    /// The caller guarantees irreducibility; the modulus is made monic.
    pub fn new(modulus: &Poly<Q>) -> Arc<Self> {
        assert!(modulus.deg() >= 1, "modulus must have positive degree");
        Arc::new(NumberField { modulus: modulus.monic() })
    }

    pub fn modulus(&self) -> &Poly<Q> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn generator(self: &Arc<Self>) -> Nf {
        self.element(Poly::x())
    }

    pub fn element(self: &Arc<Self>, p: Poly<Q>) -> Nf {
        Nf { c: p.rem(&self.modulus), field: Some(self.clone()) }
    }
}

/// An element of a number field, or a bare rational when no field is attached.
///
/// Constants from `Zero`/`One` carry no field; binary operations adopt the
/// field of whichever operand has one.
#[derive(Clone)]
pub struct Nf {
    c: Poly<Q>,
    field: Option<Arc<NumberField>>,
}

impl Nf {
    pub fn rational(q: Q) -> Self {
        Nf { c: Poly::constant(q), field: None }
    }

    pub fn repr(&self) -> &Poly<Q> {
        &self.c
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.c.is_constant().then(|| self.c.coeff(0))
    }

    pub fn in_field(&self, k: &Arc<NumberField>) -> Self {
        k.element(self.c.clone())
    }

    fn join(a: &Option<Arc<NumberField>>, b: &Option<Arc<NumberField>>) -> Option<Arc<NumberField>> {
        match (a, b) {
            (Some(x), _) => Some(x.clone()),
            (None, y) => y.clone(),
        }
    }

    fn with(c: Poly<Q>, field: Option<Arc<NumberField>>) -> Self {
        match field {
            Some(k) => k.element(c),
            None => Nf { c, field: None },
        }
    }

    pub fn inverse(&self) -> Self {
        assert!(!self.c.is_zero(), "division by zero in a number field");
        match &self.field {
            None => Nf::rational(Q::one() / self.c.coeff(0)),
            Some(k) => {
                let (g, s, _) = self.c.ext_gcd(k.modulus());
                assert!(g.is_constant(), "modulus is not irreducible");
                let inv = s.scale(&(Q::one() / g.coeff(0)));
                k.element(inv)
            }
        }
    }

    /// Evaluates a rational polynomial at this element.
    pub fn eval_poly(&self, p: &Poly<Q>) -> Self {
        let mut acc = Nf::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc * self.clone() + Nf::rational(c.clone());
        }
        match &self.field {
            Some(k) => acc.in_field(k),
            None => acc,
        }
    }
}

impl PartialEq for Nf {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl Eq for Nf {}

impl fmt::Debug for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_constant() {
            write!(f, "{}", self.c.coeff(0))
        } else {
            write!(f, "({})", self.c.to_string_in("a"))
        }
    }
}

impl Zero for Nf {
    fn zero() -> Self {
        Nf::rational(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero()
    }
}

impl One for Nf {
    fn one() -> Self {
        Nf::rational(Q::one())
    }
}

impl Add for Nf {
    type Output = Nf;
    fn add(self, o: Nf) -> Nf {
        let k = Nf::join(&self.field, &o.field);
        Nf { c: &self.c + &o.c, field: k }
    }
}

impl Sub for Nf {
    type Output = Nf;
    fn sub(self, o: Nf) -> Nf {
        let k = Nf::join(&self.field, &o.field);
        Nf { c: &self.c - &o.c, field: k }
    }
}

impl Mul for Nf {
    type Output = Nf;
    fn mul(self, o: Nf) -> Nf {
        let k = Nf::join(&self.field, &o.field);
        Nf::with(&self.c * &o.c, k)
    }
}

impl Div for Nf {
    type Output = Nf;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Nf) -> Nf {
        let k = Nf::join(&self.field, &o.field);
        let inv = match (&o.field, &k) {
            (None, Some(k)) => o.in_field(k).inverse(),
            _ => o.inverse(),
        };
        self * inv
    }
}

impl Rem for Nf {
    type Output = Nf;
    fn rem(self, _o: Nf) -> Nf {
        Nf::zero()
    }
}

impl Neg for Nf {
    type Output = Nf;
    fn neg(self) -> Nf {
        Nf { c: -&self.c, field: self.field }
    }
}

impl Num for Nf {
    type FromStrRadixErr = <Q as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        Q::from_str_radix(s, radix).map(Nf::rational)
    }
}

impl dicrit_core::Field for Nf {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::from_int;

    fn q(k: i64) -> Q {
        from_int(k)
    }

    #[test]
    fn sqrt_three_arithmetic() {
        let k = NumberField::new(&Poly::new(vec![q(-3), q(0), q(1)]));
        let a = k.generator();
        assert_eq!(a.clone() * a.clone(), Nf::rational(q(3)));
        let x = a.clone() + Nf::one();
        let y = x.inverse();
        assert_eq!(x * y, Nf::one());
        assert_eq!((a.clone() / a).as_rational(), Some(q(1)));
    }

    #[test]
    fn cubic_field_inverse() {
        // a^3 - 3a + 1
        let k = NumberField::new(&Poly::new(vec![q(1), q(-3), q(0), q(1)]));
        let a = k.generator();
        let z = a.clone() * a.clone() - Nf::rational(q(2));
        assert_eq!(z.clone() * z.inverse(), Nf::one());
        assert_eq!(a.eval_poly(k.modulus()), Nf::zero());
    }
}
