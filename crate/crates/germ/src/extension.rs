//! Factoring over number fields (Trager's norm method) and adjoining roots.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::factor_rational;
use crate::numfield::{NumberField, Nf, Q};
use crate::oracle::resultant;
use crate::poly::{from_int, Poly};

/// A coefficient field: `None` is Q itself.
pub type FieldRef = Option<Arc<NumberField>>;

pub fn field_degree(k: &FieldRef) -> usize {
    k.as_ref().map_or(1, |k| k.degree())
}

pub fn rational_poly(p: &Poly<Q>) -> Poly<Nf> {
    p.map(|c| Nf::rational(c.clone()))
}

/// The rational coefficients of `p`, if all of them are rational.
pub fn as_rational_poly(p: &Poly<Nf>) -> Option<Poly<Q>> {
    let cs: Option<Vec<Q>> = p.coeffs().iter().map(Nf::as_rational).collect();
    cs.map(Poly::new)
}

/// `Res_z(m(z), A(y0 - s z))` where the coefficients of `A` are read as
/// polynomials in the generator `z`.
fn norm_at(a: &Poly<Nf>, m: &Poly<Q>, s: i64, y0: &Q) -> Q {
    let lin = Poly::new(vec![y0.clone(), from_int::<Q>(-s)]);
    let mut acc = Poly::<Q>::zero();
    for c in a.coeffs().iter().rev() {
        acc = &(&acc * &lin) + c.repr();
    }
    resultant(m, &acc)
}

/// The norm `N(y) = Res_z(m(z), A(y - s z))` over Q.
fn shifted_norm(a: &Poly<Nf>, m: &Poly<Q>, s: i64) -> Poly<Q> {
    let d = a.deg() * m.deg();
    let xs: Vec<Q> = (0..=d as i64).map(from_int::<Q>).collect();
    let ys: Vec<Q> = xs.iter().map(|y0| norm_at(a, m, s, y0)).collect();
    Poly::interpolate(&xs, &ys)
}

fn shifts() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
}

/// A squarefree norm of `a`, with its shift.
fn squarefree_norm(a: &Poly<Nf>, k: &Arc<NumberField>) -> (Poly<Q>, i64) {
    for s in shifts().take(200) {
        let n = shifted_norm(a, k.modulus(), s);
        if n.is_squarefree() {
            return (n, s);
        }
    }
    unreachable!("a squarefree norm exists for all but finitely many shifts")
}

fn in_field(p: &Poly<Nf>, k: &FieldRef) -> Poly<Nf> {
    match k {
        Some(k) => p.map(|c| c.in_field(k)),
        None => p.clone(),
    }
}

/// Monic irreducible factors over `k`, with multiplicities.
pub fn factor_over(t: &Poly<Nf>, k: &FieldRef) -> Vec<(Poly<Nf>, usize)> {
    let Some(kf) = k else {
        let tq = as_rational_poly(t).expect("polynomial over Q");
        return factor_rational(&tq).into_iter().map(|(g, e)| (rational_poly(&g), e)).collect();
    };
    let t = in_field(t, k);
    let mut out = Vec::new();
    for (part, mult) in t.squarefree_decomposition() {
        if part.deg() == 1 {
            out.push((part, mult));
            continue;
        }
        let (n, s) = squarefree_norm(&part, kf);
        let alpha = kf.generator();
        // y -> y + s a
        let shift = Poly::new(vec![alpha.clone() * Nf::rational(from_int(s)), Nf::one()]);
        for (ni, _) in factor_rational(&n) {
            let lifted = rational_poly(&ni).compose(&shift);
            let g = in_field(&part.gcd(&in_field(&lifted, k)), k);
            if g.deg() >= 1 {
                out.push((g, mult));
            }
        }
    }
    out
}

/// The map from a field into an extension of it.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub target: FieldRef,
    /// Image of the generator of the source field.
    alpha: Option<Nf>,
}

impl Embedding {
    pub fn identity(k: &FieldRef) -> Self {
        Embedding { target: k.clone(), alpha: k.as_ref().map(|k| k.generator()) }
    }

    pub fn map(&self, c: &Nf) -> Nf {
        let v = match &self.alpha {
            Some(a) => a.eval_poly(c.repr()),
            None => c.clone(),
        };
        match &self.target {
            Some(t) => v.in_field(t),
            None => v,
        }
    }

    pub fn map_poly(&self, p: &Poly<Nf>) -> Poly<Nf> {
        p.map(|c| self.map(c))
    }
}

/// A root `beta` of the irreducible `q` over `k`, the field `k(beta)` and the
/// embedding of `k` into it. Fails when `[k(beta) : Q]` would exceed `bound`.
pub fn adjoin_root(q: &Poly<Nf>, k: &FieldRef, bound: usize) -> Result<(Nf, Embedding)> {
    let q = in_field(&q.monic(), k);
    if q.deg() == 1 {
        return Ok((-q.coeff(0), Embedding::identity(k)));
    }
    let needed = q.deg() * field_degree(k);
    if needed > bound {
        return Err(Error::ExtensionDegreeExceeded { needed, bound });
    }
    match k {
        None => {
            let qq = as_rational_poly(&q).expect("rational");
            let kp = NumberField::new(&qq);
            Ok((kp.generator(), Embedding { target: Some(kp), alpha: None }))
        }
        Some(kf) => {
            let (n, s) = squarefree_norm(&q, kf);
            debug_assert_eq!(factor_rational(&n).len(), 1, "norm of an irreducible factor");
            let kp = NumberField::new(&n);
            let gamma = kp.generator();
            // gcd over k' of m(z) and q(gamma - s z) recovers z = alpha.
            let m = rational_poly(kf.modulus()).map(|c| c.in_field(&kp));
            let lin = Poly::new(vec![gamma.clone(), Nf::rational(from_int(-s))]).map(|c| c.in_field(&kp));
            let mut acc = Poly::<Nf>::zero();
            for c in q.coeffs().iter().rev() {
                let cz = rational_poly(c.repr()).map(|v| v.in_field(&kp));
                acc = &(&acc * &lin) + &cz;
            }
            let g = m.gcd(&acc);
            if g.deg() != 1 {
                return Err(Error::Unsupported(format!("primitive element recovery failed (gcd degree {})", g.deg())));
            }
            let alpha_img = (-g.coeff(0)).in_field(&kp);
            let beta = gamma - alpha_img.clone() * Nf::rational(from_int(s));
            Ok((beta, Embedding { target: Some(kp), alpha: Some(alpha_img) }))
        }
    }
}

/// Shorthand for a rational constant.
pub fn nq(k: i64) -> Nf {
    Nf::rational(BigRational::from_integer(k.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> Poly<Q> {
        Poly::new(c.iter().map(|&k| from_int::<Q>(k)).collect())
    }

    #[test]
    fn splits_over_quadratic_field() {
        let k: FieldRef = Some(NumberField::new(&qp(&[-3, 0, 1])));
        // y^2 - 3 = (y - a)(y + a) over Q(sqrt 3); y^2 + 1 stays irreducible.
        let t = rational_poly(&(&qp(&[-3, 0, 1]) * &qp(&[1, 0, 1])));
        let fs = factor_over(&t, &k);
        let mut degs: Vec<usize> = fs.iter().map(|(g, _)| g.deg()).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    #[test]
    fn tower_of_quadratics() {
        // Q(sqrt 2), then adjoin a root of y^2 - 3.
        let k: FieldRef = Some(NumberField::new(&qp(&[-2, 0, 1])));
        let q = rational_poly(&qp(&[-3, 0, 1]));
        let fs = factor_over(&q, &k);
        assert_eq!(fs.len(), 1);
        let (beta, emb) = adjoin_root(&fs[0].0, &k, 8).unwrap();
        assert_eq!(field_degree(&emb.target), 4);
        assert_eq!(beta.clone() * beta, nq(3).in_field(emb.target.as_ref().unwrap()));
        let a = emb.map(&k.as_ref().unwrap().generator());
        assert_eq!(a.clone() * a, nq(2).in_field(emb.target.as_ref().unwrap()));
        assert!(matches!(adjoin_root(&fs[0].0, &k, 3), Err(Error::ExtensionDegreeExceeded { needed: 4, bound: 3 })));
    }
}
