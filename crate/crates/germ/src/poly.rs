//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dicrit_core::Field;

/// Coefficients from the constant term up; never has a zero leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<T> {
    c: Vec<T>,
}

/// The integer `k` as a field element.
pub fn from_int<T: Field>(k: i64) -> T {
    let mut acc = T::zero();
    let mut base = T::one();
    let mut n = k.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        n >>= 1;
    }
    if k < 0 {
        -acc
    } else {
        acc
    }
}

impl<T: Field> Poly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(a: T) -> Self {
        Self::new(vec![a])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(a: T, k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    /// `x - a`.
    pub fn linear_root(a: T) -> Self {
        Self::new(vec![-a, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> T {
        self.c.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lc(&self) -> T {
        self.c.last().cloned().unwrap_or_else(T::zero)
    }

    /// Largest `k` with `x^k` dividing `self`; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn scale(&self, a: &T) -> Self {
        Self::new(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = T::one() / self.lc();
        self.scale(&inv)
    }

    pub fn eval(&self, x: &T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a.clone() * from_int::<T>(i as i64)).collect())
    }

    /// `self(other)`.
    pub fn compose(&self, other: &Self) -> Self {
        self.c.iter().rev().fold(Self::zero(), |acc, a| &(&acc * other) + &Self::constant(a.clone()))
    }

    /// `self(x + a)`.
    pub fn shift(&self, a: &T) -> Self {
        self.compose(&Self::new(vec![a.clone(), T::one()]))
    }

    /// `x^deg self(1/x)`.
    pub fn reverse(&self) -> Self {
        Self::new(self.c.iter().rev().cloned().collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.c.len() < d.c.len() {
            return (Self::zero(), self.clone());
        }
        let inv = T::one() / d.lc();
        let mut r = self.c.clone();
        let mut q = vec![T::zero(); self.c.len() - dd];
        for k in (0..q.len()).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let coef = top * inv.clone();
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] = r[k + j].clone() - coef.clone() * dj.clone();
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `g = s self + t other` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = T::one() / r0.lc();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Yun's algorithm in characteristic zero: monic `a_i` with
    /// `self = lc * prod a_i^i`, returned as `(a_i, i)` for nonconstant `a_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.is_constant() {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Squarefree part, monic.
    pub fn squarefree_part(&self) -> Self {
        self.squarefree_decomposition().iter().fold(Self::one(), |acc, (a, _)| &acc * a)
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.c.iter().map(f).collect())
    }

    /// Interpolating polynomial through `(xs[i], ys[i])`, by Newton's scheme.
    pub fn interpolate(xs: &[T], ys: &[T]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut coef = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (coef[i].clone() - coef[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
            }
        }
        let mut p = Self::zero();
        for i in (0..n).rev() {
            p = &(&p * &Self::linear_root(xs[i].clone())) + &Self::constant(coef[i].clone());
        }
        p
    }
}

impl<T: Field> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Field> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Field> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }
}

impl<T: Field> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.c.iter().map(|x| -x.clone()).collect())
    }
}

impl<T: Field> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_var(f, "x")
    }
}

impl<T: Field> Poly<T> {
    pub fn to_string_in(&self, var: &str) -> String {
        struct W<'a, T>(&'a Poly<T>, &'a str);
        impl<T: Field> fmt::Display for W<'_, T> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_var(f, self.1)
            }
        }
        W(self, var).to_string()
    }

    fn fmt_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let s = a.to_string();
            let needs_paren = s.contains(['+', ' ']) || (s.contains('-') && !s.starts_with('-'));
            let coef = if needs_paren { format!("({s})") } else { s };
            let (sign, body) = match coef.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coef),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            match (body.as_str(), mono.is_empty()) {
                (b, true) => write!(f, "{b}")?,
                ("1", false) => write!(f, "{mono}")?,
                (b, false) => write!(f, "{b}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::new(c.iter().map(|&x| from_int::<Q>(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[2, 3, 1]).gcd(&p(&[-1, 0, 1])), p(&[1, 1]));
        let (g, s, t) = p(&[2, 3, 1]).ext_gcd(&p(&[-1, 0, 1]));
        assert_eq!(&(&s * &p(&[2, 3, 1])) + &(&t * &p(&[-1, 0, 1])), g);
    }

    #[test]
    fn yun_decomposition() {
        // (x-1) (x+2)^2 x^3
        let f = &(&p(&[-1, 1]) * &p(&[2, 1]).pow(2)) * &p(&[0, 1]).pow(3);
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[-1, 1]), 1), (p(&[2, 1]), 2), (p(&[0, 1]), 3)]);
        assert_eq!(f.squarefree_part(), &(&p(&[-1, 1]) * &p(&[2, 1])) * &p(&[0, 1]));
    }

    #[test]
    fn interpolation_and_shift() {
        let f = p(&[3, -2, 0, 5]);
        let xs: Vec<Q> = (0..4).map(from_int).collect();
        let ys: Vec<Q> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys), f);
        let one = from_int::<Q>(1);
        assert_eq!(f.shift(&one).eval(&from_int(2)), f.eval(&from_int(3)));
        assert_eq!(p(&[1, 2, 0, -1]).to_string(), "-x^3 + 2*x + 1");
    }
}
