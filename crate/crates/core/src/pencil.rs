//! Pencils `f + t g` of plane curve germs through their reduction data.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::{is_balanced, BranchAttachment, SeparatrixDivisor};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::hypotheses::{HypothesisLedger, HypothesisStatus};
use crate::invariants::{Engine, Location, ReducedData, ReducedRecord};
use crate::matrix::{vec_add, vec_scale, vec_sub};
use crate::program::BlowUpProgram;

/// A special member of the pencil, or a Galois orbit of `conjugates` such
/// members recorded through the sum of their attachment vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub name: String,
    #[serde(with = "crate::serde_int::vec")]
    pub s: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    #[serde(with = "crate::serde_int::option")]
    pub mu: Option<BigInt>,
    #[serde(default = "one_u32")]
    pub conjugates: u32,
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericFiber {
    #[serde(with = "crate::serde_int::vec")]
    pub s: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    #[serde(with = "crate::serde_int::option")]
    pub mu: Option<BigInt>,
}

/// Which member a generator of the pencil is: a generic one or a listed fiber.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum Generator {
    #[default]
    Generic,
    Fiber(String),
}

impl From<String> for Generator {
    fn from(s: String) -> Self {
        if s == "generic" {
            Generator::Generic
        } else {
            Generator::Fiber(s)
        }
    }
}

impl From<Generator> for String {
    fn from(g: Generator) -> Self {
        match g {
            Generator::Generic => "generic".into(),
            Generator::Fiber(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Generators {
    #[serde(default)]
    pub f: Generator,
    #[serde(default)]
    pub g: Generator,
}

/// Raw pencil data as it appears in scenes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilData {
    pub fibers: Vec<Fiber>,
    pub generic: GenericFiber,
    #[serde(with = "crate::serde_int")]
    pub i0: BigInt,
    #[serde(default)]
    pub generators: Generators,
}

/// A validated pencil with its reduction.
#[derive(Debug, Clone)]
pub struct PencilModel {
    engine: Engine,
    data: PencilData,
    fiber_mu: Vec<BigInt>,
    generic_mu: BigInt,
    divisor: SeparatrixDivisor,
}

/// Milnor number of one member from the combined vector of `d` conjugate
/// members, which pairwise meet with multiplicity `i0`.
fn member_milnor(engine: &Engine, s: &[BigInt], d: u32, i0: &BigInt) -> Result<BigInt> {
    let d = BigInt::from(d);
    let total = engine.milnor_form(s)?;
    let numer: BigInt = total - &d * (&d - 1) * i0 + &d - 1;
    if !(&numer % &d).is_zero() {
        return Err(Error::NonIntegerResult { quantity: "member Milnor number".into(), value: format!("{numer}/{d}") });
    }
    let mu = numer / d;
    if mu.is_negative() {
        return Err(Error::InconsistentPencil(format!("negative Milnor number {mu}")));
    }
    Ok(mu)
}

fn resolve_mu(computed: BigInt, given: &Option<BigInt>, what: &str) -> Result<BigInt> {
    match given {
        Some(g) if *g != computed => Err(Error::PathMismatch {
            what: format!("Milnor number of {what} (given vs attachment data)"),
            left: g.to_string(),
            right: computed.to_string(),
        }),
        _ => Ok(computed),
    }
}

impl PencilModel {
    pub fn new(program: BlowUpProgram, iota: Vec<u8>, data: PencilData) -> Result<Self> {
        let mut hyps = HypothesisLedger::generalized_curve();
        hyps.balanced_divisor_checked = HypothesisStatus::Unknown;
        let mut engine = Engine::new(program, iota, hyps)?;
        let n = engine.dim();
        let marking = engine.marking().clone();
        let bad = |m: String| Error::InconsistentPencil(m);

        let check_dim = |s: &[BigInt]| {
            if s.len() != n {
                Err(Error::DimensionMismatch { expected: n, found: s.len() })
            } else {
                Ok(())
            }
        };
        check_dim(&data.generic.s)?;
        for i in 0..n {
            let on = data.generic.s[i].is_positive();
            if data.generic.s[i].is_negative() || on != marking.is_dicritical(i) {
                return Err(bad(format!(
                    "generic fibers must meet exactly the dicritical components (component {})",
                    i + 1
                )));
            }
        }
        let mut names = BTreeMap::new();
        for fb in &data.fibers {
            check_dim(&fb.s)?;
            if fb.conjugates == 0 {
                return Err(bad(format!("fiber {} has no members", fb.name)));
            }
            if names.insert(fb.name.clone(), ()).is_some() {
                return Err(bad(format!("duplicate fiber name {}", fb.name)));
            }
            if fb.s.iter().any(Signed::is_negative) {
                return Err(bad(format!("fiber {} has a negative intersection number", fb.name)));
            }
            if !(0..n).any(|i| marking.is_invariant(i) && fb.s[i].is_positive()) {
                return Err(bad(format!("special fiber {} meets no invariant component", fb.name)));
            }
        }
        for gen in [&data.generators.f, &data.generators.g] {
            if let Generator::Fiber(name) = gen {
                let fb = data
                    .fibers
                    .iter()
                    .find(|f| &f.name == name)
                    .ok_or_else(|| bad(format!("generator {name} is not a listed fiber")))?;
                if fb.conjugates != 1 {
                    return Err(bad(format!("generator {name} must be a single member")));
                }
            }
        }
        if data.generators.f != Generator::Generic && data.generators.f == data.generators.g {
            return Err(bad("the two generators coincide".into()));
        }

        let i0 = &data.i0;
        let gen = &data.generic.s;
        let expect = |what: String, got: BigInt, want: BigInt| {
            if got == want {
                Ok(())
            } else {
                Err(bad(format!("{what}: intersection {got}, expected {want}")))
            }
        };
        expect("generic with generic".into(), engine.form(gen, gen), i0.clone())?;
        for (k, fa) in data.fibers.iter().enumerate() {
            let da = BigInt::from(fa.conjugates);
            expect(format!("{} with generic", fa.name), engine.form(&fa.s, gen), &da * i0)?;
            for fb in &data.fibers[k + 1..] {
                let db = BigInt::from(fb.conjugates);
                expect(format!("{} with {}", fa.name, fb.name), engine.form(&fa.s, &fb.s), &da * &db * i0)?;
            }
        }

        let generic_mu = resolve_mu(member_milnor(&engine, gen, 1, i0)?, &data.generic.mu, "generic fiber")?;
        let mut fiber_mu = Vec::new();
        for fb in &data.fibers {
            let mu = resolve_mu(member_milnor(&engine, &fb.s, fb.conjugates, i0)?, &fb.mu, &fb.name)?;
            fiber_mu.push(mu);
        }

        let divisor = build_divisor(&engine, &data)?;
        let isolated: Vec<BranchAttachment> = isolated_parts(&engine, &data)?;
        let report = is_balanced(&divisor, engine.marking(), engine.intersection(), Some(&isolated))?;
        if !report.balanced {
            return Err(bad(format!("pencil divisor is not balanced: {}", report.failures.join("; "))));
        }
        engine.hypotheses_mut().balanced_divisor_checked = HypothesisStatus::Verified;
        Ok(PencilModel { engine, data, fiber_mu, generic_mu, divisor })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn data(&self) -> &PencilData {
        &self.data
    }

    pub fn i0(&self) -> &BigInt {
        &self.data.i0
    }

    pub fn generic_mu(&self) -> &BigInt {
        &self.generic_mu
    }

    /// Milnor number of a single member of each fiber group.
    pub fn fiber_mu(&self) -> &[BigInt] {
        &self.fiber_mu
    }

    /// Number of special members counted over the algebraic closure.
    pub fn special_member_count(&self) -> u32 {
        self.data.fibers.iter().map(|f| f.conjugates).sum()
    }

    /// `S_B = sum S_h + (2 - r) S_gen`.
    pub fn balanced_vector(&self) -> Vec<BigInt> {
        self.divisor.total_vector(self.engine.dim()).expect("dimensions validated")
    }

    fn is_generator(&self, name: &str) -> bool {
        [&self.data.generators.f, &self.data.generators.g]
            .iter()
            .any(|g| matches!(g, Generator::Fiber(n) if n == name))
    }

    fn generator_vector(&self, g: &Generator) -> Vec<BigInt> {
        match g {
            Generator::Generic => self.data.generic.s.clone(),
            Generator::Fiber(name) => {
                self.data.fibers.iter().find(|f| &f.name == name).expect("validated").s.clone()
            }
        }
    }

    /// `mu(fg)` of the two generators.
    pub fn generator_product_milnor(&self) -> Result<BigInt> {
        let s = vec_add(
            &self.generator_vector(&self.data.generators.f),
            &self.generator_vector(&self.data.generators.g),
        );
        self.engine.milnor_curve(&s)
    }
}

fn split_name(name: &str, part: &str, both: bool) -> String {
    if both {
        format!("{name}:{part}")
    } else {
        name.to_string()
    }
}

/// Splits a fiber vector into its invariant and dicritical parts.
fn fiber_parts(engine: &Engine, fb: &Fiber) -> (Vec<BigInt>, Vec<BigInt>) {
    let m = engine.marking();
    let inv: Vec<BigInt> =
        fb.s.iter().enumerate().map(|(i, x)| if m.is_invariant(i) { x.clone() } else { BigInt::zero() }).collect();
    let dic = vec_sub(&fb.s, &inv);
    (inv, dic)
}

/// Branch name under which the isolated part of a fiber enters the divisor.
pub fn isolated_part_name(engine: &Engine, fb: &Fiber) -> String {
    let (_, dic) = fiber_parts(engine, fb);
    split_name(&fb.name, "isolated", dic.iter().any(|x| !x.is_zero()))
}

fn isolated_parts(engine: &Engine, data: &PencilData) -> Result<Vec<BranchAttachment>> {
    data.fibers
        .iter()
        .map(|fb| {
            let (inv, _) = fiber_parts(engine, fb);
            Ok(BranchAttachment::new(isolated_part_name(engine, fb), inv)?.with_isolated(true))
        })
        .collect()
}

fn build_divisor(engine: &Engine, data: &PencilData) -> Result<SeparatrixDivisor> {
    let mut terms = Vec::new();
    for fb in &data.fibers {
        let (inv, dic) = fiber_parts(engine, fb);
        let has_dic = dic.iter().any(|x| !x.is_zero());
        terms.push((BranchAttachment::new(isolated_part_name(engine, fb), inv)?.with_isolated(true), BigInt::one()));
        if has_dic {
            terms.push((
                BranchAttachment::new(split_name(&fb.name, "dicritical", true), dic)?.with_isolated(false),
                BigInt::one(),
            ));
        }
    }
    let gen = &data.generic.s;
    for name in ["generic_f", "generic_g"] {
        terms.push((BranchAttachment::new(name, gen.clone())?.with_isolated(false), BigInt::one()));
    }
    let r: u32 = data.fibers.iter().map(|f| f.conjugates).sum();
    for k in 1..=r {
        terms.push((BranchAttachment::new(format!("phi{k}"), gen.clone())?.with_isolated(false), -BigInt::one()));
    }
    SeparatrixDivisor::new(terms)
}

/// The balanced divisor `sum h_i + (f) + (g) - sum phi_i` of the pencil
/// foliation, with each special fiber split into isolated and dicritical parts.
pub fn fiber_balanced_divisor(model: &PencilModel) -> &SeparatrixDivisor {
    &model.divisor
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberTrace {
    pub name: String,
    #[serde(with = "crate::serde_int")]
    pub milnor_along: BigInt,
    #[serde(with = "crate::serde_int")]
    pub expected: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BifurcationCheck {
    /// `mu(f, g)` from the quadratic form on `S_B`.
    #[serde(with = "crate::serde_int")]
    pub mu_pair: BigInt,
    /// `mu(f, g)` telescoped over the fibers, each contributing `i0 + mu(h)`.
    #[serde(with = "crate::serde_int")]
    pub mu_pair_telescoped: BigInt,
    #[serde(with = "crate::serde_int")]
    pub mu_fg: BigInt,
    /// `sum over special non-generator members of mu(h) - mu_gen`.
    #[serde(with = "crate::serde_int")]
    pub excess: BigInt,
    pub traces: Vec<FiberTrace>,
    pub holds: bool,
}

/// `mu(f, g) = mu(fg) + sum (mu(h) - mu_gen)` checked along two routes.
pub fn bifurcation_formula_check(model: &PencilModel) -> Result<BifurcationCheck> {
    let e = &model.engine;
    let s_b = model.balanced_vector();
    let i0 = model.i0();
    let mu_pair = e.milnor_foliation(&s_b)?;

    let mut traces = Vec::new();
    let mut telescoped = BigInt::zero();
    for (fb, mu) in model.data.fibers.iter().zip(&model.fiber_mu) {
        let d = BigInt::from(fb.conjugates);
        let along = e.milnor_along(&s_b, &fb.s)?;
        let expected = &d * (i0 + mu) - &d + 1;
        telescoped += &d * (i0 + mu);
        traces.push(FiberTrace { name: fb.name.clone(), milnor_along: along, expected });
    }
    let gen_along = e.milnor_along(&s_b, &model.data.generic.s)?;
    traces.push(FiberTrace { name: "generic".into(), milnor_along: gen_along, expected: i0 + model.generic_mu() });
    let r = BigInt::from(model.special_member_count());
    telescoped += (BigInt::from(2) - r) * (i0 + model.generic_mu()) - 1;

    for t in &traces {
        if t.milnor_along != t.expected {
            return Err(Error::PathMismatch {
                what: format!("Milnor number along {} vs i0 + mu", t.name),
                left: t.milnor_along.to_string(),
                right: t.expected.to_string(),
            });
        }
    }
    if telescoped != mu_pair {
        return Err(Error::PathMismatch {
            what: "mu(f,g) by quadratic form vs telescoping".into(),
            left: mu_pair.to_string(),
            right: telescoped.to_string(),
        });
    }

    let mu_fg = model.generator_product_milnor()?;
    let mut excess = BigInt::zero();
    for (fb, mu) in model.data.fibers.iter().zip(&model.fiber_mu) {
        if !model.is_generator(&fb.name) {
            excess += BigInt::from(fb.conjugates) * (mu - model.generic_mu());
        }
    }
    let holds = mu_pair == &mu_fg + &excess;
    Ok(BifurcationCheck { mu_pair, mu_pair_telescoped: telescoped, mu_fg, excess, traces, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberGsv {
    pub name: String,
    #[serde(with = "crate::serde_int")]
    pub gsv: BigInt,
    #[serde(with = "crate::serde_int")]
    pub expected: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberGsvCheck {
    pub fibers: Vec<FiberGsv>,
    pub holds: bool,
}

/// Every member of the pencil has GSV index `i0` along the pencil foliation.
/// A group of `d` conjugate members then has `d (2 - d) i0`.
pub fn fiber_gsv_check(model: &PencilModel) -> Result<FiberGsvCheck> {
    let e = &model.engine;
    let s_b = model.balanced_vector();
    let i0 = model.i0();
    let mut fibers = Vec::new();
    for fb in &model.data.fibers {
        let d = BigInt::from(fb.conjugates);
        fibers.push(FiberGsv {
            name: fb.name.clone(),
            gsv: e.gsv(&s_b, &fb.s)?,
            expected: &d * (BigInt::from(2) - &d) * i0,
        });
    }
    fibers.push(FiberGsv { name: "generic".into(), gsv: e.gsv(&s_b, &model.data.generic.s)?, expected: i0.clone() });
    let holds = fibers.iter().all(|f| f.gsv == f.expected);
    Ok(FiberGsvCheck { fibers, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemitameCheck {
    pub semitame: bool,
    #[serde(with = "crate::serde_int")]
    pub mu_pair: BigInt,
    #[serde(with = "crate::serde_int")]
    pub mu_fg: BigInt,
    /// `mu(f, g) >= mu(fg)` always holds; equality exactly when semitame.
    pub inequality_holds: bool,
}

pub fn semitame_check(model: &PencilModel) -> Result<SemitameCheck> {
    let check = bifurcation_formula_check(model)?;
    let semitame = model.data.fibers.iter().all(|f| model.is_generator(&f.name));
    let inequality_holds = check.mu_pair >= check.mu_fg && (semitame == (check.mu_pair == check.mu_fg));
    Ok(SemitameCheck { semitame, mu_pair: check.mu_pair, mu_fg: check.mu_fg, inequality_holds })
}

/// `mu(f, g) - i0`.
pub fn unfolding_dimension(model: &PencilModel) -> Result<BigInt> {
    let s_b = model.balanced_vector();
    Ok(model.engine.milnor_foliation(&s_b)? - model.i0())
}

/// Indices of the reduced singularities of the pencil foliation, read off
/// from the vanishing orders of the special members along the invariant
/// components. Checks the Camacho-Sad index theorem on every invariant
/// component.
pub fn reduced_singularities(model: &PencilModel) -> Result<ReducedData> {
    let e = &model.engine;
    let n = e.dim();
    let marking = e.marking();
    let bad = |m: String| Error::InconsistentPencil(m);
    let gen = &model.data.generic.s;

    let excess: Vec<Vec<BigInt>> = model
        .data
        .fibers
        .iter()
        .map(|fb| e.neg_inverse().mul_vec(&vec_sub(&fb.s, &vec_scale(&BigInt::from(fb.conjugates), gen))))
        .collect();
    let mut owner = vec![None; n];
    let mut order = vec![BigInt::zero(); n];
    for (k, v) in excess.iter().enumerate() {
        for j in 0..n {
            if v[j].is_negative() || (marking.is_dicritical(j) && !v[j].is_zero()) {
                return Err(bad(format!(
                    "fiber {} has unexpected excess order {} along E{}",
                    model.data.fibers[k].name,
                    v[j],
                    j + 1
                )));
            }
            if v[j].is_positive() {
                if owner[j].is_some() {
                    return Err(bad(format!("E{} lies in two special fibers", j + 1)));
                }
                owner[j] = Some(k);
                order[j] = v[j].clone();
            }
        }
    }
    for j in marking.invariants() {
        if owner[j].is_none() {
            return Err(bad(format!("invariant component E{} lies in no listed special fiber", j + 1)));
        }
    }

    let q = |x: &BigInt| Exact::rational(BigRational::from_integer(x.clone()));
    let mut records = Vec::new();
    let mut index_sums: Vec<Exact> = vec![Exact::zero(); n];
    for (k, fb) in model.data.fibers.iter().enumerate() {
        let name = isolated_part_name(e, fb);
        for j in marking.invariants() {
            if fb.s[j].is_zero() {
                continue;
            }
            if owner[j] != Some(k) {
                return Err(bad(format!("fiber {} meets E{}, which lies in another fiber", fb.name, j + 1)));
            }
            let a = q(&order[j]);
            let mut rec = ReducedRecord::new(Location::Attachment { branch: name.clone(), component: j });
            rec.cs = Some(a.neg());
            rec.bb = Some(rec.baum_bott()?);
            let along_e = a.recip()?.neg().scale(&BigRational::from_integer(fb.s[j].clone()));
            index_sums[j] = index_sums[j].add(&along_e)?;
            records.push(rec);
        }
    }
    for (i, j) in e.intersection().corners() {
        if !(marking.is_invariant(i) && marking.is_invariant(j)) {
            continue;
        }
        if owner[i] != owner[j] {
            return Err(bad(format!("meeting components E{} and E{} lie in different fibers", i + 1, j + 1)));
        }
        let (ai, aj) = (q(&order[i]), q(&order[j]));
        let mut rec = ReducedRecord::new(Location::Corner { first: i, second: j });
        rec.cs = Some(aj.div(&ai)?.neg());
        rec.bb = Some(rec.baum_bott()?);
        index_sums[i] = index_sums[i].add(&aj.div(&ai)?.neg())?;
        index_sums[j] = index_sums[j].add(&ai.div(&aj)?.neg())?;
        records.push(rec);
    }
    for j in marking.invariants() {
        let want = q(e.intersection().self_intersection(j));
        if index_sums[j] != want {
            return Err(Error::PathMismatch {
                what: format!("Camacho-Sad indices along E{} vs self-intersection", j + 1),
                left: index_sums[j].to_string(),
                right: want.to_string(),
            });
        }
    }
    Ok(ReducedData { records })
}
