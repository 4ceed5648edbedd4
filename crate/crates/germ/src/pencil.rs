//! From a pair of germs to the combinatorial pencil model.

use dicrit_core::pencil::{Fiber, GenericFiber, Generator, Generators, PencilData};
use dicrit_core::PencilModel;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bifurcation::{bifurcation_candidates, describe_member, generic_parameter, orbit_curve, total_excess, BifurcationSet};
use crate::error::{Error, Result};
use crate::numfield::Q;
use crate::oracle::{intersection, milnor, mu_pair, Multiplicity, OracleConfig};
use crate::parse::Germ;
use crate::resolve::{oracle_cross_check, resolve_curves, CrossCheck, ResolveConfig, Resolution};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PencilConfig {
    pub oracle: OracleConfig,
    pub resolve: ResolveConfig,
}

/// A curve entering the resolution of the pencil.
#[derive(Debug, Clone)]
pub struct NamedCurve {
    pub name: String,
    /// Which member(s) of the pencil this is, e.g. `2f - g`.
    pub member: String,
    pub equation: Germ,
    pub conjugates: usize,
    pub mu: u64,
}

#[derive(Debug, Clone)]
pub struct PencilAnalysis {
    /// Generators actually used.
    pub f: Germ,
    pub g: Germ,
    /// Set when the given generators were special and were replaced by
    /// `f + t1 g` and `f + t2 g`.
    pub regenerated: Option<(Q, Q)>,
    pub mu_pair: u64,
    pub i0: u64,
    /// Milnor number of `f g`.
    pub mu_product: u64,
    pub bifurcation: BifurcationSet,
    pub generic_parameters: [Q; 2],
    /// `f`, `g`, the special members `h1, h2, ...`, then two generic members.
    pub curves: Vec<NamedCurve>,
    pub resolution: Resolution,
    pub iota: Vec<u8>,
    pub data: PencilData,
}

impl PencilAnalysis {
    pub fn model(&self) -> Result<PencilModel> {
        Ok(PencilModel::new(self.resolution.program.clone(), self.iota.clone(), self.data.clone())?)
    }

    /// The bifurcation formula evaluated with oracle values only.
    pub fn oracle_formula_holds(&self) -> bool {
        total_excess(&self.bifurcation).is_some_and(|e| self.mu_pair == self.mu_product + e)
    }

    /// Oracle comparisons for the generators and the special members.
    pub fn cross_check(&self, cfg: &OracleConfig) -> Result<Vec<CrossCheck>> {
        let k = self.curves.len() - 2;
        let germs: Vec<(String, Germ)> = self.curves[..k].iter().map(|c| (c.name.clone(), c.equation.clone())).collect();
        let mut sub = self.resolution.clone();
        sub.s.truncate(k);
        oracle_cross_check(&sub, &germs, cfg)
    }
}

fn finite(m: Multiplicity, what: &str) -> Result<u64> {
    m.finite().ok_or_else(|| Error::NonReduced(what.to_string()))
}

pub fn analyse_pencil(f: &Germ, g: &Germ, cfg: &PencilConfig) -> Result<PencilAnalysis> {
    for (name, h) in [("f", f), ("g", g)] {
        if h.is_zero() || !h.vanishes_at_origin() {
            return Err(Error::NotThroughOrigin(name.into()));
        }
    }
    if !f.gcd(g).is_constant() {
        return Err(Error::CommonComponent);
    }
    let mu_pair = finite(mu_pair(f, g, &cfg.oracle)?, "some member of the pencil (mu(f,g) is infinite)")?;
    let bif = bifurcation_candidates(f, g, &cfg.oracle)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.oracle.seed ^ 0x9e4c_11a0);
    if bif.f_special() || bif.g_special() {
        let t1 = generic_parameter(&bif, &mut rng, &[]);
        let t2 = generic_parameter(&bif, &mut rng, std::slice::from_ref(&t1));
        let nf = f + &g.scale(&t1);
        let ng = f + &g.scale(&t2);
        let mut out = analyse_pencil(&nf, &ng, cfg)?;
        out.regenerated = Some((t1, t2));
        return Ok(out);
    }
    let i0 = finite(intersection(f, g, &cfg.oracle)?, "f and g share a component")?;
    let mu_product = finite(milnor(&(f * g), &cfg.oracle)?, "f g")?;

    let ta = generic_parameter(&bif, &mut rng, &[]);
    let tb = generic_parameter(&bif, &mut rng, std::slice::from_ref(&ta));
    let mut curves = vec![
        NamedCurve { name: "f".into(), member: "f".into(), equation: f.clone(), conjugates: 1, mu: bif.mu_generic },
        NamedCurve { name: "g".into(), member: "g".into(), equation: g.clone(), conjugates: 1, mu: bif.mu_generic },
    ];
    for (k, s) in bif.interior.iter().enumerate() {
        curves.push(NamedCurve {
            name: format!("h{}", k + 1),
            member: s.describe(),
            equation: orbit_curve(f, g, &s.minpoly),
            conjugates: s.conjugates(),
            mu: s.mu,
        });
    }
    for (name, t) in [("phi_a", &ta), ("phi_b", &tb)] {
        curves.push(NamedCurve {
            name: name.into(),
            member: describe_member(t),
            equation: f + &g.scale(t),
            conjugates: 1,
            mu: bif.mu_generic,
        });
    }
    let eqs: Vec<Germ> = curves.iter().map(|c| c.equation.clone()).collect();
    let resolution = resolve_curves(&eqs, &cfg.resolve)?;
    let last = curves.len() - 1;
    let (sa, sb) = (&resolution.s[last - 1], &resolution.s[last]);
    for (i, c) in curves.iter().enumerate().take(2) {
        if &resolution.s[i] != sa {
            return Err(Error::OracleMismatch(format!("generator {} attaches unlike a generic member", c.name)));
        }
    }
    if sa != sb {
        return Err(Error::OracleMismatch("the two sampled generic members attach differently".into()));
    }
    let iota: Vec<u8> = sa.iter().map(|v| if v.is_zero() { 1 } else { 0 }).collect();
    let fibers = curves[2..last - 1]
        .iter()
        .enumerate()
        .map(|(k, c)| Fiber {
            name: c.name.clone(),
            s: resolution.s[k + 2].clone(),
            mu: Some(BigInt::from(c.mu)),
            conjugates: c.conjugates as u32,
        })
        .collect();
    let data = PencilData {
        fibers,
        generic: GenericFiber { s: sa.clone(), mu: Some(BigInt::from(bif.mu_generic)) },
        i0: BigInt::from(i0),
        generators: Generators { f: Generator::Generic, g: Generator::Generic },
    };
    Ok(PencilAnalysis {
        f: f.clone(),
        g: g.clone(),
        regenerated: None,
        mu_pair,
        i0,
        mu_product,
        bifurcation: bif,
        generic_parameters: [ta, tb],
        curves,
        resolution,
        iota,
        data,
    })
}
