//! Local intersection multiplicities at the origin via resultant valuations.
//!
//! After a random unimodular change of coordinates both germs have constant
//! leading coefficient in `y` and no common zero on the line `x = 0` other
//! than the origin. Then `ord_x Res_y(f, g)` is the intersection
//! multiplicity at the origin. Each query is repeated over several
//! independent changes and the answers must agree.

use std::fmt;

use dicrit_core::Field;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::modp::{self, PolyP};
use crate::numfield::Nf;
use crate::poly::{from_int, Poly};
use crate::poly2::Poly2;

/// An intersection multiplicity, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(k) => Some(k),
            Multiplicity::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Multiplicity::Infinite
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    /// Number of independent coordinate changes that must agree.
    pub changes: usize,
    /// Total number of random matrices drawn before giving up.
    pub attempts: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { seed: 0x0dd5_eed5, changes: 3, attempts: 400 }
    }
}

/// Coefficient fields the oracle can run over.
pub trait OracleField: Field {
    /// `ord_x Res_y(f, g)` for properly positioned `f`, `g`; `None` if the
    /// resultant vanishes identically.
    fn resultant_valuation(f: &Poly2<Self>, g: &Poly2<Self>) -> Option<usize>;
}

impl OracleField for BigRational {
    fn resultant_valuation(f: &Poly2<Self>, g: &Poly2<Self>) -> Option<usize> {
        valuation_multimodular(f, g)
    }
}

impl OracleField for Nf {
    fn resultant_valuation(f: &Poly2<Self>, g: &Poly2<Self>) -> Option<usize> {
        valuation_generic(f, g)
    }
}

/// Resultant of two univariate polynomials over a field (Euclidean scheme).
pub fn resultant<T: Field>(a: &Poly<T>, b: &Poly<T>) -> T {
    if a.is_zero() || b.is_zero() {
        return T::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = T::one();
    loop {
        let (m, n) = (a.deg(), b.deg());
        if n == 0 {
            return acc * pow(&b.lc(), m);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return T::zero();
        }
        if m % 2 == 1 && n % 2 == 1 {
            acc = -acc;
        }
        acc = acc * pow(&b.lc(), m - r.deg());
        a = b;
        b = r;
    }
}

fn pow<T: Field>(a: &T, e: usize) -> T {
    (0..e).fold(T::one(), |acc, _| acc * a.clone())
}

fn resultant_modp(a: &PolyP, b: &PolyP, p: u64) -> u64 {
    let (mut a, mut b) = (modp::trim(a.clone()), modp::trim(b.clone()));
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut acc = 1u64;
    loop {
        let (m, n) = (a.len() - 1, b.len() - 1);
        let lb = *b.last().unwrap();
        if n == 0 {
            return modp::mul_mod(acc, modp::pow_mod(lb, m as u64, p), p);
        }
        let r = modp::prem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        if m % 2 == 1 && n % 2 == 1 {
            acc = modp::sub_mod(0, acc, p);
        }
        acc = modp::mul_mod(acc, modp::pow_mod(lb, (m - (r.len() - 1)) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Resultant valuation by evaluation at `x = 0, 1, ..., D` and
/// interpolation, over any field.
pub fn valuation_generic<T: Field>(f: &Poly2<T>, g: &Poly2<T>) -> Option<usize> {
    let d = f.total_degree().unwrap_or(0) * g.total_degree().unwrap_or(0);
    let xs: Vec<T> = (0..=d as i64).map(from_int::<T>).collect();
    let ys: Vec<T> = xs.iter().map(|x0| resultant(&f.at_x(x0), &g.at_x(x0))).collect();
    Poly::interpolate(&xs, &ys).order()
}

fn integerize(f: &Poly2<BigRational>) -> Vec<((usize, usize), BigInt)> {
    let l = f.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    f.terms().iter().map(|(&k, c)| (k, (c * BigRational::from_integer(l.clone())).to_integer())).collect()
}

fn l1(f: &[((usize, usize), BigInt)]) -> BigInt {
    f.iter().map(|(_, c)| c.abs()).sum()
}

/// Resultant valuation over Q by working modulo 62-bit primes until their
/// product exceeds a bound on the coefficients of the resultant; the
/// valuation is the minimum of the modular valuations.
pub fn valuation_multimodular(f: &Poly2<BigRational>, g: &Poly2<BigRational>) -> Option<usize> {
    let (tf, tg) = (f.total_degree().unwrap_or(0), g.total_degree().unwrap_or(0));
    let d = tf * tg;
    let (fz, gz) = (integerize(f), integerize(g));
    let bound = num_traits::pow(l1(&fz), tg) * num_traits::pow(l1(&gz), tf);
    let lf = fz.iter().find(|(k, _)| *k == (0, tf)).map(|(_, c)| c.clone()).unwrap_or_default();
    let lg = gz.iter().find(|(k, _)| *k == (0, tg)).map(|(_, c)| c.clone()).unwrap_or_default();
    let mut best: Option<usize> = None;
    let mut prod = BigInt::one();
    for p in modp::primes_below(1u64 << 62) {
        let pb = BigInt::from(p);
        if (&lf % &pb).is_zero() || (&lg % &pb).is_zero() {
            continue;
        }
        let reduce = |h: &[((usize, usize), BigInt)]| -> Vec<(usize, usize, u64)> {
            h.iter().map(|((i, j), c)| (*i, *j, c.mod_floor(&pb).to_u64().expect("reduced"))).collect()
        };
        let (fp, gp) = (reduce(&fz), reduce(&gz));
        let eval = |h: &[(usize, usize, u64)], deg: usize, x0: u64| -> PolyP {
            let mut c = vec![0u64; deg + 1];
            for &(i, j, v) in h {
                c[j] = modp::add_mod(c[j], modp::mul_mod(v, modp::pow_mod(x0, i as u64, p), p), p);
            }
            modp::trim(c)
        };
        let ys: Vec<u64> = (0..=d as u64).map(|x0| resultant_modp(&eval(&fp, tf, x0), &eval(&gp, tg, x0), p)).collect();
        let coeffs = interpolate_modp(&ys, p);
        if let Some(k) = coeffs.iter().position(|&c| c != 0) {
            best = Some(best.map_or(k, |b| b.min(k)));
        }
        prod *= pb;
        if prod > bound {
            break;
        }
    }
    best
}

/// Coefficients of the polynomial through `(k, ys[k])`, `k = 0..n`.
fn interpolate_modp(ys: &[u64], p: u64) -> Vec<u64> {
    let n = ys.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let diff = modp::sub_mod(coef[i], coef[i - 1], p);
            coef[i] = modp::mul_mod(diff, modp::inv_mod(j as u64, p), p);
        }
    }
    // Newton form in the nodes 0, 1, ..., n-1 back to monomials.
    let mut out = vec![0u64; n];
    for i in (0..n).rev() {
        // out = out * (x - i) + coef[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if out[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = modp::add_mod(next[k + 1], out[k], p);
            }
            next[k] = modp::sub_mod(next[k], modp::mul_mod(out[k], i as u64 % p, p), p);
        }
        next[0] = modp::add_mod(next[0], coef[i], p);
        out = next;
    }
    out
}

/// A unimodular matrix `[[a, b], [c, d]]` with entries in `[-9, 9]`.
pub fn draw_change(rng: &mut impl Rng) -> [i64; 4] {
    loop {
        let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        if m[0] * m[3] - m[1] * m[2] == 1 {
            return m;
        }
    }
}

pub fn apply_change<T: Field>(f: &Poly2<T>, m: [i64; 4]) -> Poly2<T> {
    let [a, b, c, d] = m.map(from_int::<T>);
    f.linear_change(&a, &b, &c, &d)
}

/// Both germs have constant leading coefficient in `y`.
pub fn leading_constant<T: Field>(f: &Poly2<T>) -> bool {
    !f.top_y_coeff().is_zero()
}

/// No common zero of `f(0, y)` and `g(0, y)` besides `y = 0`.
pub fn clean_axis<T: Field>(f: &Poly2<T>, g: &Poly2<T>) -> bool {
    let h = f.restrict_x_zero().gcd(&g.restrict_x_zero());
    h.coeffs().iter().rev().skip(1).all(Zero::is_zero)
}

/// Removes a common factor not through the origin, or reports that one
/// passes through it.
fn strip_common<T: OracleField>(f: &Poly2<T>, g: &Poly2<T>, rng: &mut ChaCha8Rng, cfg: &OracleConfig) -> Result<Option<(Poly2<T>, Poly2<T>)>> {
    for _ in 0..cfg.attempts {
        let m = draw_change(rng);
        let (ft, gt) = (apply_change(f, m), apply_change(g, m));
        if !(leading_constant(&ft) && leading_constant(&gt)) {
            continue;
        }
        for _ in 0..2 {
            let x0 = from_int::<T>(rng.gen_range(-1000..=1000));
            if !resultant(&ft.at_x(&x0), &gt.at_x(&x0)).is_zero() {
                return Ok(Some((f.clone(), g.clone())));
            }
        }
        break;
    }
    let h = f.gcd(g);
    if h.is_constant() {
        return Ok(Some((f.clone(), g.clone())));
    }
    if h.vanishes_at_origin() {
        return Ok(None);
    }
    Ok(Some((f.div_exact(&h).expect("gcd divides"), g.div_exact(&h).expect("gcd divides"))))
}

/// Local intersection multiplicity of `f` and `g` at the origin.
pub fn intersection<T: OracleField>(f: &Poly2<T>, g: &Poly2<T>, cfg: &OracleConfig) -> Result<Multiplicity> {
    Ok(intersection_traced(f, g, cfg)?.0)
}

/// As [`intersection`], also returning the answer under each coordinate change.
pub fn intersection_traced<T: OracleField>(
    f: &Poly2<T>,
    g: &Poly2<T>,
    cfg: &OracleConfig,
) -> Result<(Multiplicity, Vec<([i64; 4], u64)>)> {
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        let m = if other.vanishes_at_origin() { Multiplicity::Infinite } else { Multiplicity::Finite(0) };
        return Ok((m, Vec::new()));
    }
    if !f.vanishes_at_origin() || !g.vanishes_at_origin() {
        return Ok((Multiplicity::Finite(0), Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let Some((f, g)) = strip_common(f, g, &mut rng, cfg)? else {
        return Ok((Multiplicity::Infinite, Vec::new()));
    };
    if !f.vanishes_at_origin() || !g.vanishes_at_origin() {
        return Ok((Multiplicity::Finite(0), Vec::new()));
    }
    let mut trace = Vec::new();
    let mut attempts = 0;
    while trace.len() < cfg.changes {
        attempts += 1;
        if attempts > cfg.attempts {
            return Err(Error::ChangeOfCoordinatesFailed { attempts: cfg.attempts });
        }
        let m = draw_change(&mut rng);
        if trace.iter().any(|(prev, _)| *prev == m) {
            continue;
        }
        let (ft, gt) = (apply_change(&f, m), apply_change(&g, m));
        if !(leading_constant(&ft) && leading_constant(&gt) && clean_axis(&ft, &gt)) {
            continue;
        }
        let v = T::resultant_valuation(&ft, &gt)
            .ok_or_else(|| Error::OracleMismatch("resultant vanished after removing common factors".into()))?;
        trace.push((m, v as u64));
    }
    let first = trace[0].1;
    if let Some((m, v)) = trace.iter().find(|(_, v)| *v != first) {
        return Err(Error::OracleMismatch(format!("coordinate change {m:?} gave {v}, expected {first}")));
    }
    Ok((Multiplicity::Finite(first), trace))
}

/// Milnor number `i(f_x, f_y)`.
pub fn milnor<T: OracleField>(f: &Poly2<T>, cfg: &OracleConfig) -> Result<Multiplicity> {
    intersection(&f.derivative_x(), &f.derivative_y(), cfg)
}

/// The coefficients `(P, Q)` of `g df - f dg`.
pub fn pencil_form<T: Field>(f: &Poly2<T>, g: &Poly2<T>) -> (Poly2<T>, Poly2<T>) {
    let p = &(&f.derivative_x() * g) - &(&g.derivative_x() * f);
    let q = &(&f.derivative_y() * g) - &(&g.derivative_y() * f);
    (p, q)
}

/// Milnor number of the pair, `i(f_x g - g_x f, f_y g - g_y f)`.
pub fn mu_pair<T: OracleField>(f: &Poly2<T>, g: &Poly2<T>, cfg: &OracleConfig) -> Result<Multiplicity> {
    let (p, q) = pencil_form(f, g);
    intersection(&p, &q, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ;

    fn i0(a: &str, b: &str) -> Multiplicity {
        intersection(&parse_germ(a).unwrap(), &parse_germ(b).unwrap(), &OracleConfig::default()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(i0("x", "y"), Multiplicity::Finite(1));
        assert_eq!(i0("x*y+y^2+x^3", "x*y"), Multiplicity::Finite(5));
        assert_eq!(i0("y^2-x^3", "y^2-2*x^3"), Multiplicity::Finite(6));
        assert_eq!(i0("x^2", "x*y"), Multiplicity::Infinite);
        assert_eq!(i0("x*(1+y)", "y*(1+y)"), Multiplicity::Finite(1));
        assert_eq!(i0("x+1", "y"), Multiplicity::Finite(0));
        assert_eq!(i0("0", "y"), Multiplicity::Infinite);
    }

    #[test]
    fn milnor_examples() {
        let cfg = OracleConfig::default();
        let mu = |s: &str| milnor(&parse_germ(s).unwrap(), &cfg).unwrap();
        assert_eq!(mu("x^2+y^2"), Multiplicity::Finite(1));
        assert_eq!(mu("y^2+x^3"), Multiplicity::Finite(2));
        assert_eq!(mu("x*y+y^2+x^3"), Multiplicity::Finite(1));
        assert_eq!(mu("x^3+y^5"), Multiplicity::Finite(8));
        assert_eq!(mu("x^2"), Multiplicity::Infinite);
    }

    #[test]
    fn pair_examples() {
        let cfg = OracleConfig::default();
        let mp = |a: &str, b: &str| mu_pair(&parse_germ(a).unwrap(), &parse_germ(b).unwrap(), &cfg).unwrap();
        assert_eq!(mp("x", "y"), Multiplicity::Finite(1));
        assert_eq!(mp("x*y+y^2+x^3", "x*y"), Multiplicity::Finite(12));
        assert_eq!(mp("x^2", "x*y"), Multiplicity::Infinite);
    }

    #[test]
    fn modular_and_generic_valuations_agree() {
        let f = parse_germ("(y-x^2)^2 - x^5 + 3*y^3").unwrap();
        let g = parse_germ("y^2 - x^3 + x*y").unwrap();
        let m = [2, 1, 1, 1];
        let (ft, gt) = (apply_change(&f, m), apply_change(&g, m));
        assert!(leading_constant(&ft) && leading_constant(&gt) && clean_axis(&ft, &gt));
        assert_eq!(valuation_multimodular(&ft, &gt), valuation_generic(&ft, &gt));
    }

    #[test]
    fn resultant_of_linear_factors() {
        let q = |k: i64| from_int::<BigRational>(k);
        // (y-1)(y-2) and (y-3): product of differences 2 * 1
        let a = Poly::new(vec![q(2), q(-3), q(1)]);
        let b = Poly::new(vec![q(-3), q(1)]);
        assert_eq!(resultant(&a, &b), q(2));
        assert_eq!(resultant(&b, &a), q(2));
    }
}
