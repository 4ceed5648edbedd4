//! Embedded resolution of plane curve germs by tracking closed points.
//!
//! A closed point over a number field `K` of relative degree `e` stands for
//! `e` conjugate geometric points; each one gets its own exceptional
//! component when the tree is linearized into a blow-up program.

use dicrit_core::program::build_cholesky;
use dicrit_core::{BlowUpProgram, Engine, HypothesisLedger};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::extension::{adjoin_root, as_rational_poly, factor_over, field_degree, FieldRef};
use crate::numfield::{Nf, Q};
use crate::oracle::{intersection, milnor, Multiplicity, OracleConfig};
use crate::parse::Germ;
use crate::poly::Poly;
use crate::poly2::Poly2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolveConfig {
    /// Largest degree over Q of a residue field the resolution may need.
    pub max_extension_degree: usize,
    /// Largest number of exceptional components.
    pub max_components: usize,
}

impl Default for ResolveConfig {
    fn default() -> Self {
        ResolveConfig { max_extension_degree: 8, max_components: 400 }
    }
}

/// Tangent line of a branch at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Direction {
    /// The line `x = 0`.
    Vertical,
    /// The line `y = r x` for the root number `index` of `minpoly(r)`;
    /// conjugate roots are distinguished only by their index.
    Slope { minpoly: Poly<Q>, index: usize },
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Vertical => write!(f, "x = 0"),
            Direction::Slope { minpoly, .. } if minpoly.deg() == 1 => {
                let r = -minpoly.coeff(0) / minpoly.coeff(1);
                if r.is_zero() {
                    write!(f, "y = 0")
                } else if r == Q::from_integer(1.into()) {
                    write!(f, "y = x")
                } else {
                    write!(f, "y = {r}*x")
                }
            }
            Direction::Slope { minpoly, index } => {
                write!(f, "y = r*x, r root {} of {}", index + 1, minpoly.to_string_in("r"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Orbit {
    Vertical,
    Slope(Poly<Q>),
}

impl Orbit {
    fn direction(&self, index: usize) -> Direction {
        match self {
            Orbit::Vertical => Direction::Vertical,
            Orbit::Slope(q) => Direction::Slope { minpoly: q.clone(), index },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Origin,
    /// The point of the new component on the strict transform of the
    /// component the blown-up point was free on.
    Infinity,
    /// The corner with the second component through the blown-up point.
    Corner,
    Free,
}

#[derive(Debug, Clone)]
struct AttachOrbit {
    curve: usize,
    count: usize,
    orbit: Option<Orbit>,
}

#[derive(Debug, Clone)]
struct Node {
    kind: PointKind,
    copies: usize,
    field_degree: usize,
    orbit: Option<Orbit>,
    mult: Vec<usize>,
    attach: Vec<AttachOrbit>,
    children: Vec<Node>,
}

/// One exceptional component of the linearized resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub kind: PointKind,
    /// Degree over Q of the residue field of the blown-up point.
    pub field_degree: usize,
    pub depth: usize,
    pub direction: Option<Direction>,
}

/// A branch of one of the curves, attached transversally at a free point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPoint {
    pub curve: usize,
    /// 0-based component.
    pub component: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub program: BlowUpProgram,
    pub components: Vec<ComponentInfo>,
    /// Attachment vector of each curve.
    pub s: Vec<Vec<BigInt>>,
    /// Multiplicity of each curve at each blown-up point.
    pub nu: Vec<Vec<BigInt>>,
    pub branches: Vec<BranchPoint>,
}

struct Builder {
    cfg: ResolveConfig,
    ncurves: usize,
    geometric: usize,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn node(
        &mut self,
        kind: PointKind,
        copies: usize,
        field: FieldRef,
        orbit: Option<Orbit>,
        curves: Vec<(usize, Poly2<Nf>)>,
        has_x: bool,
        has_y: bool,
        multiplier: usize,
    ) -> Result<Node> {
        self.geometric += multiplier * copies;
        if self.geometric > self.cfg.max_components {
            return Err(Error::Unsupported(format!("resolution needs more than {} components", self.cfg.max_components)));
        }
        let is_origin = kind == PointKind::Origin;
        let mut mult = vec![0usize; self.ncurves];
        let mut attach = Vec::new();
        let mut children = Vec::new();
        let mut charts = Vec::new();
        for (c, eq) in &curves {
            let m = eq.order().expect("nonzero local equation");
            debug_assert!(m >= 1, "curve must pass through the point");
            mult[*c] = m;
            let a = eq.chart_a();
            let t = a.restrict_x_zero();
            let inf = m - t.deg();
            charts.push((*c, eq, a, t, inf));
        }
        let sub_orbit = |o: Orbit| if is_origin { Some(o) } else { orbit.clone() };

        let at_inf: Vec<_> = charts.iter().filter(|ch| ch.4 > 0).collect();
        let inf_total: usize = at_inf.iter().map(|ch| ch.4).sum();
        if !at_inf.is_empty() {
            if has_x || inf_total >= 2 {
                let eqs = at_inf.iter().map(|ch| (ch.0, ch.1.chart_b_swapped())).collect();
                let o = sub_orbit(Orbit::Vertical);
                children.push(self.node(PointKind::Infinity, 1, field.clone(), o, eqs, true, has_x, multiplier * copies)?);
            } else {
                attach.push(AttachOrbit { curve: at_inf[0].0, count: 1, orbit: sub_orbit(Orbit::Vertical) });
            }
        }

        if has_y {
            let through: Vec<_> = charts.iter().filter(|ch| ch.3.coeff(0).is_zero()).collect();
            if !through.is_empty() {
                let eqs = through.iter().map(|ch| (ch.0, ch.2.clone())).collect();
                children.push(self.node(PointKind::Corner, 1, field.clone(), orbit.clone(), eqs, true, true, multiplier * copies)?);
            }
        }

        let mut groups: Vec<(Poly<Nf>, Vec<(usize, usize)>)> = Vec::new();
        for ch in &charts {
            let mut t = ch.3.clone();
            if has_y {
                let k = t.order().unwrap_or(0);
                t = Poly::new(t.coeffs()[k..].to_vec());
            }
            if t.deg() == 0 {
                continue;
            }
            for (q, e) in factor_over(&t, &field) {
                match groups.iter_mut().find(|(g, _)| *g == q) {
                    Some((_, list)) => list.push((ch.0, e)),
                    None => groups.push((q, vec![(ch.0, e)])),
                }
            }
        }
        groups.sort_by_key(|(q, _)| (q.deg(), q.to_string()));
        for (q, list) in groups {
            let total: usize = list.iter().map(|(_, e)| e).sum();
            let q_orbit = || Orbit::Slope(as_rational_poly(&q).expect("directions at the origin are rational"));
            if total >= 2 {
                let (beta, emb) = adjoin_root(&q, &field, self.cfg.max_extension_degree)?;
                let eqs = list
                    .iter()
                    .map(|(c, _)| {
                        let a = &charts.iter().find(|ch| ch.0 == *c).expect("curve").2;
                        (*c, a.map(|v| emb.map(v)).translate_y(&beta))
                    })
                    .collect();
                let o = if is_origin { Some(q_orbit()) } else { orbit.clone() };
                let target = emb.target.clone();
                children.push(self.node(PointKind::Free, q.deg(), target, o, eqs, true, false, multiplier * copies)?);
            } else {
                let o = if is_origin { Some(q_orbit()) } else { orbit.clone() };
                attach.push(AttachOrbit { curve: list[0].0, count: q.deg(), orbit: o });
            }
        }
        Ok(Node { kind, copies, field_degree: field_degree(&field), orbit, mult, attach, children })
    }
}

struct Layout {
    centers: Vec<Vec<usize>>,
    components: Vec<ComponentInfo>,
    s: Vec<Vec<BigInt>>,
    nu: Vec<Vec<BigInt>>,
    branches: Vec<BranchPoint>,
}

impl Layout {
    fn emit(&mut self, node: &Node, x: Option<usize>, y: Option<usize>, depth: usize, direction: Option<Direction>) {
        for copy in 0..node.copies {
            let k = self.centers.len();
            let mut center: Vec<usize> = x.into_iter().chain(y).collect();
            center.sort();
            self.centers.push(center);
            let dir = match (&direction, &node.orbit) {
                (Some(d), _) => Some(d.clone()),
                (None, Some(o)) => Some(o.direction(copy)),
                (None, None) => None,
            };
            self.components.push(ComponentInfo { kind: node.kind, field_degree: node.field_degree, depth, direction: dir.clone() });
            for c in 0..self.s.len() {
                self.s[c].push(BigInt::zero());
                self.nu[c].push(BigInt::from(node.mult[c]));
            }
            for a in &node.attach {
                self.s[a.curve][k] += a.count;
                for i in 0..a.count {
                    let d = match (&dir, &a.orbit) {
                        (Some(d), _) => d.clone(),
                        (None, Some(o)) => o.direction(i),
                        (None, None) => unreachable!("attachments below the origin inherit a direction"),
                    };
                    self.branches.push(BranchPoint { curve: a.curve, component: k, direction: d });
                }
            }
            for child in &node.children {
                let (cx, cy) = match child.kind {
                    PointKind::Infinity => (Some(k), x),
                    PointKind::Corner => (Some(k), y),
                    _ => (Some(k), None),
                };
                self.emit(child, cx, cy, depth + 1, dir.clone());
            }
        }
    }
}

/// Squarefree test over Q: no factor divides `f`, `f_x` and `f_y`.
pub fn is_reduced(f: &Germ) -> bool {
    let g = f.gcd(&f.derivative_x()).gcd(&f.derivative_y());
    g.is_constant()
}

fn to_nf(f: &Germ) -> Poly2<Nf> {
    f.map(|c| Nf::rational(c.clone()))
}

/// Minimal embedded resolution of the union of the given germs, which must be
/// nonzero, vanish at the origin, be reduced and pairwise coprime. The
/// origin is always blown up.
pub fn resolve_curves(germs: &[Germ], cfg: &ResolveConfig) -> Result<Resolution> {
    for (i, f) in germs.iter().enumerate() {
        if f.is_zero() || !f.vanishes_at_origin() {
            return Err(Error::NotThroughOrigin(format!("germ {} ({f})", i + 1)));
        }
        if !is_reduced(f) {
            return Err(Error::NonReduced(format!("germ {} ({f})", i + 1)));
        }
        for g in &germs[..i] {
            if !f.gcd(g).is_constant() {
                return Err(Error::CommonComponent);
            }
        }
    }
    let mut b = Builder { cfg: *cfg, ncurves: germs.len(), geometric: 0 };
    let curves = germs.iter().enumerate().map(|(i, f)| (i, to_nf(f))).collect();
    let root = b.node(PointKind::Origin, 1, None, None, curves, false, false, 1)?;
    let n = germs.len();
    let mut layout = Layout { centers: Vec::new(), components: Vec::new(), s: vec![Vec::new(); n], nu: vec![Vec::new(); n], branches: Vec::new() };
    layout.emit(&root, None, None, 0, None);
    let program = BlowUpProgram::from_zero_based(layout.centers)?;
    let ft = build_cholesky(&program);
    for c in 0..n {
        let expected = ft.matrix().tr_mul_vec(&layout.nu[c]);
        if expected != layout.s[c] {
            return Err(Error::OracleMismatch(format!(
                "germ {}: attachment counts {:?} differ from the proximity prediction {:?}",
                c + 1,
                layout.s[c],
                expected
            )));
        }
    }
    Ok(Resolution { program, components: layout.components, s: layout.s, nu: layout.nu, branches: layout.branches })
}

/// A comparison between a value read off the resolution and the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub what: String,
    pub combinatorial: BigInt,
    pub oracle: Multiplicity,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.oracle.finite().map(BigInt::from).as_ref() == Some(&self.combinatorial)
    }
}

/// Milnor numbers of every curve and intersection numbers of every pair,
/// from the attachment vectors and from the resultant oracle.
pub fn oracle_cross_check(res: &Resolution, germs: &[(String, Germ)], cfg: &OracleConfig) -> Result<Vec<CrossCheck>> {
    let n = res.program.len();
    let engine = Engine::new(res.program.clone(), vec![1; n], HypothesisLedger::default())?;
    let mut out = Vec::new();
    for (i, (name, f)) in germs.iter().enumerate() {
        out.push(CrossCheck {
            what: format!("mu({name})"),
            combinatorial: engine.milnor_curve(&res.s[i])?,
            oracle: milnor(f, cfg)?,
        });
        for (j, (other, g)) in germs.iter().enumerate().take(i) {
            out.push(CrossCheck {
                what: format!("i0({other}, {name})"),
                combinatorial: engine.intersection_number(&res.s[j], &res.s[i])?,
                oracle: intersection(g, f, cfg)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ;
    use dicrit_core::program::int_vec;

    fn res(fs: &[&str]) -> Resolution {
        let gs: Vec<Germ> = fs.iter().map(|s| parse_germ(s).unwrap()).collect();
        resolve_curves(&gs, &ResolveConfig::default()).unwrap()
    }

    #[test]
    fn smooth_line() {
        let r = res(&["x"]);
        assert_eq!(r.program.centers_one_based(), vec![Vec::<usize>::new()]);
        assert_eq!(r.s[0], int_vec(&[1]));
    }

    #[test]
    fn cusp() {
        let r = res(&["y^2+x^3"]);
        assert_eq!(r.program.centers_one_based(), vec![vec![], vec![1], vec![1, 2]]);
        assert_eq!(r.s[0], int_vec(&[0, 0, 1]));
        assert_eq!(r.nu[0], int_vec(&[2, 1, 1]));
    }

    #[test]
    fn three_lines_over_sqrt3() {
        let r = res(&["y*(y^2-3*x^2)"]);
        assert_eq!(r.program.len(), 1);
        assert_eq!(r.s[0], int_vec(&[3]));
        assert_eq!(r.branches.len(), 3);
    }

    #[test]
    fn irrational_double_point_needs_extension() {
        // Two branches tangent to each of y = +-sqrt(2) x.
        let r = res(&["((y^2-2*x^2)^2 - x^5)"]);
        assert!(r.components.iter().any(|c| c.field_degree == 2));
        let gs = vec![parse_germ("((y^2-2*x^2)^2 - x^5)").unwrap()];
        let tight = ResolveConfig { max_extension_degree: 1, ..Default::default() };
        assert!(matches!(resolve_curves(&gs, &tight), Err(Error::ExtensionDegreeExceeded { .. })));
    }
}
