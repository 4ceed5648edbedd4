//! Sparse bivariate polynomials in `x`, `y` over an exact field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dicrit_core::Field;

use crate::poly::{from_int, Poly};

/// Terms keyed by `(exponent of x, exponent of y)`; no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly2<T> {
    terms: BTreeMap<(usize, usize), T>,
}

impl<T: Field> Default for Poly2<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Field> Poly2<T> {
    pub fn from_terms(it: impl IntoIterator<Item = ((usize, usize), T)>) -> Self {
        let mut terms: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (k, c) in it {
            let e = terms.entry(k).or_insert_with(T::zero);
            *e = e.clone() + c;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly2 { terms }
    }

    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: T, i: usize, j: usize) -> Self {
        Self::from_terms([((i, j), c)])
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), T> {
        &self.terms
    }

    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i + j == 0)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Order at the origin: the lowest total degree of a term.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&(0, 0))
    }

    pub fn scale(&self, a: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, c)| (k, c.clone() * a.clone())))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Poly2<U> {
        Poly2::from_terms(self.terms.iter().map(|(&k, c)| (k, f(c))))
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c.clone() * crate::poly::from_int::<T>(i as i64))),
        )
    }

    pub fn derivative_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c.clone() * crate::poly::from_int::<T>(j as i64))),
        )
    }

    pub fn swap(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    /// `f(a x + b y, c x + d y)`.
    pub fn linear_change(&self, a: &T, b: &T, c: &T, d: &T) -> Self {
        let lx = Self::from_terms([((1, 0), a.clone()), ((0, 1), b.clone())]);
        let ly = Self::from_terms([((1, 0), c.clone()), ((0, 1), d.clone())]);
        let mut px = vec![Self::one()];
        let mut py = vec![Self::one()];
        for _ in 0..self.deg_x().unwrap_or(0) {
            let next = px.last().unwrap() * &lx;
            px.push(next);
        }
        for _ in 0..self.deg_y().unwrap_or(0) {
            let next = py.last().unwrap() * &ly;
            py.push(next);
        }
        let mut out = Self::zero();
        for (&(i, j), coef) in &self.terms {
            out = &out + &(&px[i] * &py[j]).scale(coef);
        }
        out
    }

    /// `f(x, y + y0)`.
    pub fn translate_y(&self, y0: &T) -> Self {
        let mut out = Self::zero();
        for (x_exp, py) in self.y_coeffs_by_x() {
            let shifted = py.shift(y0);
            for (j, c) in shifted.coeffs().iter().enumerate() {
                out = &out + &Self::monomial(c.clone(), x_exp, j);
            }
        }
        out
    }

    /// Groups terms as `sum_i x^i p_i(y)`.
    fn y_coeffs_by_x(&self) -> BTreeMap<usize, Poly<T>> {
        let mut rows: BTreeMap<usize, Vec<T>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let row = rows.entry(i).or_default();
            if row.len() <= j {
                row.resize(j + 1, T::zero());
            }
            row[j] = c.clone();
        }
        rows.into_iter().map(|(i, r)| (i, Poly::new(r))).collect()
    }

    /// Strict transform in the chart `(x, y) -> (x, x y)`, divided by `x^m`
    /// with `m` the order.
    pub fn chart_a(&self) -> Self {
        let m = self.order().unwrap_or(0);
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((i + j - m, j), c.clone())))
    }

    /// Strict transform in the chart `(x, y) -> (x y, y)` with the roles of
    /// the coordinates exchanged afterwards, so that the new exceptional
    /// curve is again `x = 0` and the old line `x = 0` becomes `y = 0`.
    pub fn chart_b_swapped(&self) -> Self {
        let m = self.order().unwrap_or(0);
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((i + j - m, i), c.clone())))
    }

    /// The lowest homogeneous part, dehomogenized at `x = 1` as a polynomial in `y`.
    pub fn tangent_poly(&self) -> Poly<T> {
        let Some(m) = self.order() else { return Poly::zero() };
        let mut c = vec![T::zero(); m + 1];
        for (&(i, j), v) in &self.terms {
            if i + j == m {
                c[j] = v.clone();
            }
        }
        Poly::new(c)
    }

    /// Coefficient of `y^n` where `n` is the total degree.
    pub fn top_y_coeff(&self) -> T {
        match self.total_degree() {
            Some(n) => self.coeff(0, n),
            None => T::zero(),
        }
    }

    /// `f(0, y)`.
    pub fn restrict_x_zero(&self) -> Poly<T> {
        self.at_x(&T::zero())
    }

    /// `f(x0, y)`.
    pub fn at_x(&self, x0: &T) -> Poly<T> {
        let n = self.deg_y().map_or(0, |d| d + 1);
        let mut c = vec![T::zero(); n];
        let mut powers: Vec<T> = vec![T::one()];
        for (&(i, j), v) in &self.terms {
            while powers.len() <= i {
                let next = powers.last().unwrap().clone() * x0.clone();
                powers.push(next);
            }
            c[j] = c[j].clone() + v.clone() * powers[i].clone();
        }
        Poly::new(c)
    }

    /// Coefficients of the powers of `y`, as polynomials in `x`.
    pub fn to_y_coeffs(&self) -> Vec<Poly<T>> {
        let n = self.deg_y().map_or(0, |d| d + 1);
        let mut cols: Vec<Vec<T>> = vec![Vec::new(); n];
        for (&(i, j), c) in &self.terms {
            let col = &mut cols[j];
            if col.len() <= i {
                col.resize(i + 1, T::zero());
            }
            col[i] = c.clone();
        }
        cols.into_iter().map(Poly::new).collect()
    }

    pub fn from_y_coeffs(cs: &[Poly<T>]) -> Self {
        Self::from_terms(
            cs.iter()
                .enumerate()
                .flat_map(|(j, p)| p.coeffs().iter().enumerate().map(move |(i, c)| ((i, j), c.clone()))),
        )
    }

    /// Content with respect to `y`: the gcd of the coefficients in `K[x]`.
    pub fn content_x(&self) -> Poly<T> {
        self.to_y_coeffs().iter().fold(Poly::zero(), |g, c| g.gcd(c))
    }

    /// Greatest common divisor in `K[x, y]`, up to a constant factor,
    /// by the primitive remainder sequence over `K[x]`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let c = self.content_x().gcd(&other.content_x());
        if self.coprime_in_y(other) {
            return Self::from_y_coeffs(&[c]);
        }
        let mut a = primitive(self.to_y_coeffs());
        let mut b = primitive(other.to_y_coeffs());
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive(r);
        }
        let g = if b.is_empty() { a } else { vec![Poly::one()] };
        let lead = g.last().expect("nonzero").lc();
        let g: Vec<Poly<T>> = g.iter().map(|p| p.scale(&(T::one() / lead.clone()))).collect();
        &Self::from_y_coeffs(&g) * &Self::from_y_coeffs(&[c])
    }

    /// Sufficient test that no factor of positive `y`-degree is shared:
    /// a common factor would survive specializing `x` at a point where
    /// both leading coefficients are nonzero.
    fn coprime_in_y(&self, other: &Self) -> bool {
        let (la, lb) = (self.top_y_coeffs_x(), other.top_y_coeffs_x());
        for k in 0..4 {
            let x0 = from_int::<T>([1, -2, 3, 7][k]);
            if la.eval(&x0).is_zero() || lb.eval(&x0).is_zero() {
                continue;
            }
            return self.at_x(&x0).gcd(&other.at_x(&x0)).deg() == 0;
        }
        false
    }

    fn top_y_coeffs_x(&self) -> Poly<T> {
        self.to_y_coeffs().pop().unwrap_or_else(Poly::zero)
    }

    /// Exact quotient in `K[x, y]`, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dc = d.to_y_coeffs();
        let n = dc.len() - 1;
        let mut r = self.to_y_coeffs();
        if r.len() < dc.len() {
            return None;
        }
        let mut q = vec![Poly::zero(); r.len() - n];
        while r.len() > n {
            let k = r.len() - 1 - n;
            let (c, rem) = r[r.len() - 1].div_rem(&dc[n]);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in dc.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dj);
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Poly::is_zero) {
                r.pop();
            }
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_y_coeffs(&q))
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(usize, usize)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, j)| (i + j, std::cmp::Reverse(i)));
        for (n, &&(i, j)) in keys.iter().enumerate() {
            let c = self.terms[&(i, j)].to_string();
            let (neg, body) = match c.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, c),
            };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if body != "1" || i + j == 0 {
                parts.push(body);
            }
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Divides out the content in `K[x]`; the zero polynomial maps to `[]`.
fn primitive<T: Field>(mut cs: Vec<Poly<T>>) -> Vec<Poly<T>> {
    while cs.last().is_some_and(Poly::is_zero) {
        cs.pop();
    }
    let content = cs.iter().fold(Poly::zero(), |g, c| g.gcd(c));
    if content.is_zero() || content.deg() == 0 {
        return cs;
    }
    cs.iter().map(|c| c.div_exact(&content).expect("content divides")).collect()
}

/// `lc(b)^k a mod b` in `K[x][y]`, coefficients listed by increasing power of `y`.
fn pseudo_rem<T: Field>(a: &[Poly<T>], b: &[Poly<T>]) -> Vec<Poly<T>> {
    let n = b.len() - 1;
    let beta = &b[n];
    let mut r = a.to_vec();
    while r.len() > n && !r.is_empty() {
        let k = r.len() - 1 - n;
        let lead = r[r.len() - 1].clone();
        for c in r.iter_mut() {
            *c = &*c * beta;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&lead * bj);
        }
        r.pop();
        while r.last().is_some_and(Poly::is_zero) {
            r.pop();
        }
    }
    r
}

impl<T: Field> fmt::Display for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

impl<T: Field> Add for &Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, o: &Poly2<T>) -> Poly2<T> {
        Poly2::from_terms(self.terms.iter().chain(o.terms.iter()).map(|(&k, c)| (k, c.clone())))
    }
}

impl<T: Field> Sub for &Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, o: &Poly2<T>) -> Poly2<T> {
        Poly2::from_terms(
            self.terms.iter().map(|(&k, c)| (k, c.clone())).chain(o.terms.iter().map(|(&k, c)| (k, -c.clone()))),
        )
    }
}

impl<T: Field> Mul for &Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, o: &Poly2<T>) -> Poly2<T> {
        let mut terms: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                let e = terms.entry((i + k, j + l)).or_insert_with(T::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly2 { terms }
    }
}

impl<T: Field> Neg for &Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        self.map(|c| -c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::from_int;
    use num_rational::BigRational as Q;

    fn q(k: i64) -> Q {
        from_int(k)
    }

    fn genzmer_f() -> Poly2<Q> {
        Poly2::from_terms([((1, 1), q(1)), ((0, 2), q(1)), ((3, 0), q(1))])
    }

    #[test]
    fn charts_and_tangent() {
        let f = genzmer_f();
        assert_eq!(f.order(), Some(2));
        assert_eq!(f.tangent_poly(), Poly::new(vec![q(0), q(1), q(1)]));
        // chart A: x^2 y + x^2 y^2 + x^3, divided by x^2
        assert_eq!(f.chart_a(), Poly2::from_terms([((0, 1), q(1)), ((0, 2), q(1)), ((1, 0), q(1))]));
        assert_eq!(f.to_string(), "x*y + y^2 + x^3");
    }

    #[test]
    fn linear_change_round_trip() {
        let f = genzmer_f();
        let g = f.linear_change(&q(2), &q(1), &q(1), &q(1));
        let back = g.linear_change(&q(1), &q(-1), &q(-1), &q(2));
        assert_eq!(back, f);
    }

    #[test]
    fn bivariate_gcd_and_division() {
        let a = &Poly2::x() + &Poly2::y().pow(2);
        let b = &Poly2::y() - &Poly2::constant(q(1));
        let c = &Poly2::x() + &Poly2::constant(q(3));
        let f = &(&a * &b) * &c;
        let g = &(&a * &c) * &Poly2::y();
        let h = f.gcd(&g);
        assert!(h.div_exact(&(&a * &c)).is_some_and(|u| u.is_constant()));
        assert!(f.div_exact(&h).unwrap().gcd(&g.div_exact(&h).unwrap()).is_constant());
        assert!(f.div_exact(&Poly2::y()).is_none());
    }
}
