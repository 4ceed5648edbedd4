//! Branch data of a plane curve germ read off its embedded resolution.

use dicrit_core::{BlowUpProgram, Engine, HypothesisLedger};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::Result;
use crate::parse::Germ;
use crate::resolve::{resolve_curves, Direction, ResolveConfig, Resolution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    /// 0-based component the branch crosses after resolution.
    pub component: usize,
    pub direction: Direction,
    /// Multiplicities at the successive blown-up points on the branch.
    pub multiplicity_sequence: Vec<u64>,
    /// `(n; b1, ..., bg)` with `n` the multiplicity at the origin.
    pub characteristic_exponents: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct BranchData {
    pub resolution: Resolution,
    pub branches: Vec<Branch>,
    /// Pairwise intersection multiplicities (zero diagonal).
    pub intersections: Vec<Vec<BigInt>>,
    pub milnor: BigInt,
}

/// Characteristic exponents from the multiplicities and satellite flags of
/// the points on a branch: each run of free points followed by a run of
/// satellite points contributes one exponent through
/// `b_j = b_{j-1} + sum(m) - e_{j-1} + e_j`.
pub fn characteristic_from_points(points: &[(u64, bool)]) -> Vec<u64> {
    let Some(&(n, _)) = points.first() else { return Vec::new() };
    let mut out = vec![n];
    let (mut beta, mut e) = (0u64, n);
    let mut sum = 0u64;
    for (k, &(m, sat)) in points.iter().enumerate() {
        sum += m;
        let next_free = points.get(k + 1).is_none_or(|&(_, s)| !s);
        if sat && next_free {
            beta = beta + sum + m - e;
            out.push(beta);
            e = m;
            sum = 0;
        }
    }
    out
}

fn engine_for(program: &BlowUpProgram) -> Result<Engine> {
    Ok(Engine::new(program.clone(), vec![1; program.len()], HypothesisLedger::default())?)
}

fn unit(n: usize, j: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[j] = 1.into();
    v
}

pub fn branch_analysis(f: &Germ, cfg: &ResolveConfig) -> Result<BranchData> {
    let resolution = resolve_curves(std::slice::from_ref(f), cfg)?;
    let program = &resolution.program;
    let n = program.len();
    let engine = engine_for(program)?;
    let mut branches = Vec::new();
    for bp in &resolution.branches {
        let nu = engine.curve_multiplicity_sequence(&unit(n, bp.component))?;
        let points: Vec<(u64, bool)> = (0..n)
            .filter(|&k| !nu[k].is_zero())
            .map(|k| (nu[k].to_u64().expect("small multiplicity"), program.is_satellite(k)))
            .collect();
        branches.push(Branch {
            component: bp.component,
            direction: bp.direction.clone(),
            multiplicity_sequence: points.iter().map(|p| p.0).collect(),
            characteristic_exponents: characteristic_from_points(&points),
        });
    }
    let r = branches.len();
    let mut intersections = vec![vec![BigInt::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            if i != j {
                intersections[i][j] = engine.form(&unit(n, branches[i].component), &unit(n, branches[j].component));
            }
        }
    }
    let milnor = engine.milnor_curve(&resolution.s[0])?;
    Ok(BranchData { resolution, branches, intersections, milnor })
}
