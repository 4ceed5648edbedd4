//! Special members of a pencil `f + t g`: the parameters where the Milnor
//! number of the member jumps above its generic value.
//!
//! For a fixed proper coordinate change, `Res_y(d_x h_t, d_y h_t)` is a
//! polynomial in `x` whose coefficients are polynomials in `t`. Its
//! `x`-valuation is the generic Milnor number, and every special parameter
//! is a root of the coefficient `c(t)` of that power of `x`. Candidates are
//! the roots of the gcd of `c(t)` over two coordinate changes; each
//! irreducible factor is then certified by computing the Milnor number of
//! the member over `Q[t]/(p)`.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::factor_rational;
use crate::numfield::{Nf, NumberField, Q};
use crate::oracle::{apply_change, clean_axis, draw_change, leading_constant, milnor, resultant, Multiplicity, OracleConfig};
use crate::parse::Germ;
use crate::poly::{from_int, Poly};
use crate::poly2::Poly2;

/// A special member, or a Galois orbit of them, given by the minimal
/// polynomial of the parameter `t` in `f + t g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialMember {
    pub minpoly: Poly<Q>,
    pub mu: u64,
}

impl SpecialMember {
    pub fn conjugates(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn rational_parameter(&self) -> Option<Q> {
        (self.minpoly.deg() == 1).then(|| -self.minpoly.coeff(0) / self.minpoly.coeff(1))
    }

    /// Readable form such as `2f - 3g`, or `f + t*g, t^2 - 2 = 0`.
    pub fn describe(&self) -> String {
        match self.rational_parameter() {
            Some(t) => describe_member(&t),
            None => format!("f + t*g with {} = 0", self.minpoly.to_string_in("t")),
        }
    }
}

/// `a f + b g` with coprime integers, for the member `f + t g`.
pub fn describe_member(t: &Q) -> String {
    let (a, b) = (t.denom().clone(), t.numer().clone());
    let lead = if a.is_one() { "f".to_string() } else { format!("{a}f") };
    if b.is_zero() {
        return lead;
    }
    let sign = if b.is_negative() { "-" } else { "+" };
    let mag = b.abs();
    let tail = if mag.is_one() { "g".to_string() } else { format!("{mag}g") };
    format!("{lead} {sign} {tail}")
}

#[derive(Debug, Clone)]
pub struct BifurcationSet {
    pub mu_generic: u64,
    pub mu_f: Multiplicity,
    pub mu_g: Multiplicity,
    /// Certified special members with `t` different from `0` and infinity.
    pub interior: Vec<SpecialMember>,
    /// Candidate factors whose members turned out to be generic.
    pub rejected: Vec<Poly<Q>>,
    /// The candidate polynomial in `t`.
    pub candidates: Poly<Q>,
}

impl BifurcationSet {
    pub fn f_special(&self) -> bool {
        self.mu_f != Multiplicity::Finite(self.mu_generic)
    }

    pub fn g_special(&self) -> bool {
        self.mu_g != Multiplicity::Finite(self.mu_generic)
    }

    /// Whether `t` is a root of the candidate polynomial.
    pub fn is_candidate(&self, t: &Q) -> bool {
        t.is_zero() || self.candidates.eval(t).is_zero()
    }
}

fn member<T: crate::oracle::OracleField>(f: &Poly2<T>, g: &Poly2<T>, t: &T) -> Poly2<T> {
    f + &g.scale(t)
}

fn to_nf(f: &Germ) -> Poly2<Nf> {
    f.map(|c| Nf::rational(c.clone()))
}

/// The member polynomial of a whole orbit: `sum_k p~_k f^k g^(d-k)` with
/// `p~(s) = (-1)^d p(-s)` for monic `p`.
pub fn orbit_curve(f: &Germ, g: &Germ, minpoly: &Poly<Q>) -> Germ {
    let p = minpoly.monic();
    let d = p.deg();
    let sign = if d.is_multiple_of(2) { Q::one() } else { -Q::one() };
    let mut out = Germ::zero();
    for k in 0..=d {
        let alt = if k % 2 == 0 { Q::one() } else { -Q::one() };
        let coef = sign.clone() * alt * p.coeff(k);
        if coef.is_zero() {
            continue;
        }
        out = &out + &(&f.pow(k as u32) * &g.pow((d - k) as u32)).scale(&coef);
    }
    out
}

struct Symbolic {
    valuation: usize,
    coefficient: Poly<Q>,
}

/// The `x`-valuation of `Res_y` over sampled `t` and the interpolated
/// coefficient of that power, for one coordinate change.
fn symbolic_jump(f: &Germ, g: &Germ, m: [i64; 4]) -> Option<Symbolic> {
    let (fx, fy, gx, gy) = (f.derivative_x(), f.derivative_y(), g.derivative_x(), g.derivative_y());
    let (ft, gt) = ((apply_change(&fx, m), apply_change(&fy, m)), (apply_change(&gx, m), apply_change(&gy, m)));
    let dp = ft.0.total_degree().max(gt.0.total_degree()).unwrap_or(0);
    let dq = ft.1.total_degree().max(gt.1.total_degree()).unwrap_or(0);
    let lc_p = Poly::new(vec![ft.0.coeff(0, dp), gt.0.coeff(0, dp)]);
    let lc_q = Poly::new(vec![ft.1.coeff(0, dq), gt.1.coeff(0, dq)]);
    if lc_p.is_zero() || lc_q.is_zero() {
        return None;
    }
    let dt = dp + dq;
    let dx = dp * dq;
    let mut ts = Vec::new();
    let mut rows = Vec::new();
    let mut cand = 0i64;
    while ts.len() <= dt {
        let t = from_int::<Q>(cand);
        cand += 1;
        if lc_p.eval(&t).is_zero() || lc_q.eval(&t).is_zero() {
            continue;
        }
        let p = member(&ft.0, &gt.0, &t);
        let q = member(&ft.1, &gt.1, &t);
        let xs: Vec<Q> = (0..=dx as i64).map(from_int::<Q>).collect();
        let ys: Vec<Q> = xs.iter().map(|x0| resultant(&p.at_x(x0), &q.at_x(x0))).collect();
        rows.push(Poly::interpolate(&xs, &ys));
        ts.push(t);
    }
    let valuation = rows.iter().filter_map(Poly::order).min()?;
    let vals: Vec<Q> = rows.iter().map(|r| r.coeff(valuation)).collect();
    Some(Symbolic { valuation, coefficient: Poly::interpolate(&ts, &vals) })
}

fn is_generically_proper(f: &Germ, g: &Germ, m: [i64; 4], t: &Q) -> bool {
    let h = member(f, g, t);
    let (p, q) = (apply_change(&h.derivative_x(), m), apply_change(&h.derivative_y(), m));
    leading_constant(&p) && leading_constant(&q) && clean_axis(&p, &q)
}

pub fn bifurcation_candidates(f: &Germ, g: &Germ, cfg: &OracleConfig) -> Result<BifurcationSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb1f0_0000);
    let random_t = |rng: &mut ChaCha8Rng| Q::new(rng.gen_range(-10_000i64..=10_000).into(), rng.gen_range(1i64..=97).into());
    let t_ref = random_t(&mut rng);
    let mu_ref = milnor(&member(f, g, &t_ref), cfg)?;
    let Multiplicity::Finite(mu_ref) = mu_ref else {
        return Err(Error::NonReduced("a generic member of the pencil".into()));
    };

    let mut found: Vec<Symbolic> = Vec::new();
    let mut attempts = 0;
    while found.len() < 2 {
        attempts += 1;
        if attempts > cfg.attempts {
            return Err(Error::ChangeOfCoordinatesFailed { attempts: cfg.attempts });
        }
        let m = draw_change(&mut rng);
        if !is_generically_proper(f, g, m, &t_ref) {
            continue;
        }
        let Some(sym) = symbolic_jump(f, g, m) else { continue };
        if sym.valuation as u64 != mu_ref || sym.coefficient.is_zero() {
            continue;
        }
        found.push(sym);
    }
    let mut cands = found[0].coefficient.gcd(&found[1].coefficient);
    while cands.coeff(0).is_zero() && cands.deg() > 0 {
        cands = Poly::new(cands.coeffs()[1..].to_vec());
    }

    let mu_f = milnor(f, cfg)?;
    let mu_g = milnor(g, cfg)?;
    let mut interior = Vec::new();
    let mut rejected = Vec::new();
    let (fq, gq) = (to_nf(f), to_nf(g));
    for (p, _) in factor_rational(&cands) {
        let mu = if p.deg() == 1 {
            let t = -p.coeff(0) / p.coeff(1);
            milnor(&member(f, g, &t), cfg)?
        } else {
            let k = NumberField::new(&p);
            let tau = k.generator();
            milnor(&(&fq + &gq.scale(&tau)), cfg)?
        };
        let Multiplicity::Finite(mu) = mu else {
            return Err(Error::NonReduced(format!("the member f + t*g with {} = 0", p.to_string_in("t"))));
        };
        match mu.cmp(&mu_ref) {
            std::cmp::Ordering::Greater => interior.push(SpecialMember { minpoly: p, mu }),
            std::cmp::Ordering::Equal => rejected.push(p),
            std::cmp::Ordering::Less => {
                return Err(Error::CandidateUncertified(format!(
                    "{}: Milnor number {mu} below the generic value {mu_ref}",
                    p.to_string_in("t")
                )))
            }
        }
    }
    interior.sort_by(|a, b| {
        b.mu.cmp(&a.mu)
            .then(a.minpoly.deg().cmp(&b.minpoly.deg()))
            .then_with(|| match (a.rational_parameter(), b.rational_parameter()) {
                (Some(x), Some(y)) => y.cmp(&x),
                _ => a.minpoly.to_string().cmp(&b.minpoly.to_string()),
            })
    });
    Ok(BifurcationSet { mu_generic: mu_ref, mu_f, mu_g, interior, rejected, candidates: cands })
}

/// Total excess `sum (mu(member) - mu_gen)` over all special members,
/// including `f` and `g` when they are special.
pub fn total_excess(set: &BifurcationSet) -> Option<u64> {
    let mut total = 0;
    for m in [set.mu_f, set.mu_g] {
        total += m.finite()? - set.mu_generic;
    }
    for s in &set.interior {
        total += (s.mu - set.mu_generic) * s.conjugates() as u64;
    }
    Some(total)
}

/// A rational parameter that is not a candidate, drawn from `rng`.
pub fn generic_parameter(set: &BifurcationSet, rng: &mut impl Rng, avoid: &[Q]) -> Q {
    loop {
        let t = Q::from_integer(rng.gen_range(-40i64..=40).into());
        if !set.is_candidate(&t) && !avoid.contains(&t) {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ;
    use num_rational::BigRational;

    fn q(a: i64, b: i64) -> Q {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn genzmer_pencil() {
        let f = parse_germ("x*y + y^2 + x^3").unwrap();
        let g = parse_germ("x*y").unwrap();
        let b = bifurcation_candidates(&f, &g, &OracleConfig::default()).unwrap();
        assert_eq!(b.mu_generic, 1);
        assert_eq!(b.interior.len(), 1);
        assert_eq!(b.interior[0].rational_parameter(), Some(q(-1, 1)));
        assert_eq!(b.interior[0].mu, 2);
        assert_eq!(b.interior[0].describe(), "f - g");
        assert_eq!(total_excess(&b), Some(1));
    }

    #[test]
    fn szawlowski_pencil() {
        let f = parse_germ("(x^3+y^5)+y*(y^2-3*x^2)").unwrap();
        let g = parse_germ("y*(y^2-3*x^2)").unwrap();
        let b = bifurcation_candidates(&f, &g, &OracleConfig::default()).unwrap();
        assert_eq!(b.mu_generic, 4);
        let got: Vec<(String, u64)> = b.interior.iter().map(|s| (s.describe(), s.mu)).collect();
        assert_eq!(got, vec![("f - g".to_string(), 8), ("2f - g".to_string(), 6), ("2f - 3g".to_string(), 6)]);
        assert_eq!(total_excess(&b), Some(8));
    }

    #[test]
    fn transverse_lines_have_no_special_members() {
        let b = bifurcation_candidates(&parse_germ("x").unwrap(), &parse_germ("y").unwrap(), &OracleConfig::default()).unwrap();
        assert!(b.interior.is_empty());
        assert_eq!(b.mu_generic, 0);
    }

    #[test]
    fn conjugate_special_members() {
        // The quadratic part y^2 + t x y - 2 x^2 degenerates for t^2 = -8.
        let f = parse_germ("y^2 - 2*x^2").unwrap();
        let g = parse_germ("x*y + y^3").unwrap();
        let b = bifurcation_candidates(&f, &g, &OracleConfig::default()).unwrap();
        assert_eq!(b.mu_generic, 1);
        assert_eq!(b.interior.len(), 1);
        assert_eq!(b.interior[0].minpoly, Poly::new(vec![q(8, 1), q(0, 1), q(1, 1)]));
        assert_eq!(b.interior[0].mu, 2);
        assert_eq!(b.interior[0].conjugates(), 2);
        let orbit = orbit_curve(&f, &g, &b.interior[0].minpoly);
        assert_eq!(orbit, &(&f * &f) + &(&g * &g).scale(&q(8, 1)));
    }
}
