//! Randomized property runner over blow-up programs and divisors.

use std::collections::BTreeMap;

use dicrit_core::divisor::{bal_pairing_check, enumerate_balanced, is_balanced};
use dicrit_core::hypotheses::HypothesisStatus;
use dicrit_core::matrix::dot;
use dicrit_core::program::{build_cholesky, build_intersection};
use dicrit_core::{BlowUpProgram, BranchAttachment, Engine, HypothesisLedger, InvariantMarking};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::oracle_suite::oracle_robustness;
use crate::properties::structure_checks;
use crate::report::{fmt_vec, Report};
use crate::scene::{Scene, SceneKind};

/// Deliberate corruptions used to confirm that the runner catches bugs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    FlipIntersectionSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub count: usize,
    pub seed: u64,
    pub max_n: usize,
    pub fault: Option<Fault>,
    /// Random germ pairs for the intersection oracle; zero skips that part.
    pub oracle_pairs: usize,
    pub max_degree: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { count: 200, seed: 1, max_n: 12, fault: None, oracle_pairs: 0, max_degree: 6 }
    }
}

#[derive(Debug, Clone)]
struct Failure {
    property: String,
    detail: String,
}

#[derive(Debug, Clone, Default)]
struct CaseOutcome {
    checks: BTreeMap<String, usize>,
    failures: Vec<Failure>,
    divisors: usize,
    marking: Vec<u8>,
}

impl CaseOutcome {
    fn record(&mut self, property: &str, holds: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(property.to_string()).or_default() += 1;
        if !holds {
            self.failures.push(Failure { property: property.to_string(), detail: detail() });
        }
    }
}

/// Independent stream for case `i` of a run.
fn case_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

pub fn random_program(rng: &mut impl Rng, max_n: usize) -> BlowUpProgram {
    let n = rng.gen_range(1..=max_n.max(1));
    let choices: Vec<(bool, usize)> = (1..n).map(|_| (rng.gen_bool(0.5), rng.gen_range(0..64))).collect();
    BlowUpProgram::from_choices(&choices)
}

fn small_vector(rng: &mut impl Rng, n: usize) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(rng.gen_range(0..3))).collect()
}

fn checked_ledger() -> HypothesisLedger {
    let mut h = HypothesisLedger::generalized_curve();
    h.balanced_divisor_checked = HypothesisStatus::Asserted;
    h
}

fn run_case(program: &BlowUpProgram, rng: &mut ChaCha8Rng, fault: Option<Fault>) -> CaseOutcome {
    let mut out = CaseOutcome::default();
    let n = program.len();
    for c in structure_checks(program, fault == Some(Fault::FlipIntersectionSign)) {
        let detail = c.detail.clone();
        out.record(&c.name, c.holds, || detail);
    }

    let f = build_cholesky(program);
    let a = build_intersection(&f);
    let wishes: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    let marking = InvariantMarking::from_wishes(&wishes, &a);
    out.marking = marking.raw().to_vec();
    let iso_raw = small_vector(rng, n);
    let iso: Vec<BigInt> =
        (0..n).map(|i| if marking.is_invariant(i) { iso_raw[i].clone() } else { BigInt::zero() }).collect();
    let c1 = small_vector(rng, n);
    let c2 = small_vector(rng, n);
    let extra = rng.gen_range(0..3usize);
    let e = match Engine::new(program.clone(), marking.raw().to_vec(), checked_ledger()) {
        Ok(e) => e,
        Err(err) => {
            out.record("engine construction", false, || err.to_string());
            return out;
        }
    };

    // Curve identities on random attachment vectors.
    if let (Ok(cs), Ok(prod)) = (e.cs_sum_rule_check(&c1, &c2), e.milnor_product_rule_check(&c1, &c2)) {
        out.record("CS sum rule", cs.holds, || format!("{} vs {}", cs.lhs, cs.rhs));
        out.record("mu(fg) = mu(f) + mu(g) + 2 i0 - 1", prod.holds, || format!("{} vs {}", prod.lhs, prod.rhs));
    }
    if let (Ok(i0), Ok(m1), Ok(m2)) =
        (e.intersection_number(&c1, &c2), e.curve_multiplicity_sequence(&c1), e.curve_multiplicity_sequence(&c2))
    {
        let noether = dot(&m1, &m2);
        out.record("i0 = sum of multiplicity products", i0 == noether, || format!("{i0} vs {noether}"));
    }

    let isolated: Vec<BranchAttachment> = if iso.iter().all(Zero::is_zero) {
        Vec::new()
    } else {
        vec![BranchAttachment::new("I", iso.clone()).expect("nonzero, nonnegative")]
    };
    let divisors = match enumerate_balanced(&marking, &a, &isolated, 2 + extra, 20) {
        Ok(d) => d,
        Err(err) => {
            out.record("balanced divisor enumeration", false, || err.to_string());
            return out;
        }
    };
    out.divisors = divisors.len();
    let mut values = Vec::new();
    for d in &divisors {
        let s_b = d.total_vector(n).expect("dimensions match");
        let balanced = is_balanced(d, &marking, &a, Some(&isolated)).map(|r| r.balanced).unwrap_or(false);
        out.record("enumerated divisors are balanced", balanced, || fmt_vec(&s_b));
        let pairing = bal_pairing_check(&s_b, &marking, &a, &f).unwrap_or_else(|_| BigInt::from(-1));
        out.record("balanced pairing = 0", pairing.is_zero(), || format!("pairing {pairing} on {}", fmt_vec(&s_b)));
        let (Ok(mu), Ok(dec)) = (e.milnor_foliation(&s_b), e.milnor_decomposition(&s_b, &iso)) else {
            out.record("foliation invariants defined", false, || fmt_vec(&s_b));
            continue;
        };
        out.record("milnor decomposition total = milnor_foliation", dec.total == mu, || {
            format!("{} vs {mu}", dec.total)
        });
        if let (Ok(ell), Ok(bb)) = (e.discrepancies(&s_b), e.bb_correction(&s_b)) {
            let ll = dot(&ell, &ell);
            out.record("bb correction = <l,l>", bb == ll, || format!("{bb} vs {ll}"));
        }
        if let (Ok(along), Ok(gsv), Ok(mc)) = (e.milnor_along(&s_b, &c1), e.gsv(&s_b, &c1), e.milnor_form(&c1)) {
            out.record("mu(F,C) = GSV + mu(C)", along == &gsv + &mc, || format!("{along} vs {gsv} + {mc}"));
        }
        if let Ok(rule) = e.gsv_sum_rule_check(&s_b, &c1, &iso) {
            out.record("GSV sum rule", rule.holds, || format!("{} vs {}", rule.lhs, rule.rhs));
        }
        values.push(mu);
    }
    let same = values.windows(2).all(|w| w[0] == w[1]);
    out.record("mu independent of the balanced divisor", same, || fmt_vec(&values));
    out
}

/// Shortest prefix of the program that still violates `property`.
fn minimize(program: &BlowUpProgram, seed: u64, i: usize, property: &str, fault: Option<Fault>) -> (BlowUpProgram, Vec<u8>) {
    for k in 1..=program.len() {
        let p = program.prefix(k);
        let out = run_case(&p, &mut case_rng(seed, i), fault);
        if out.failures.iter().any(|f| f.property == property) {
            return (p, out.marking);
        }
    }
    let out = run_case(program, &mut case_rng(seed, i), fault);
    (program.clone(), out.marking)
}

pub fn verify(cfg: &VerifyConfig) -> Report {
    let mut report = Report::new("verify", "random programs", cfg.seed);
    let outcomes: Vec<(BlowUpProgram, CaseOutcome)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(cfg.seed, i);
            let p = random_program(&mut rng, cfg.max_n);
            let out = run_case(&p, &mut rng, cfg.fault);
            (p, out)
        })
        .collect();

    let mut totals: BTreeMap<String, (usize, usize, Option<usize>)> = BTreeMap::new();
    let mut divisors = 0usize;
    for (i, (_, out)) in outcomes.iter().enumerate() {
        divisors += out.divisors;
        for (name, count) in &out.checks {
            totals.entry(name.clone()).or_default().0 += count;
        }
        for f in &out.failures {
            let t = totals.entry(f.property.clone()).or_default();
            t.1 += 1;
            t.2.get_or_insert(i);
        }
    }
    report.value("cases", cfg.count);
    report.value("max_n", cfg.max_n);
    report.value("balanced_divisors", divisors);
    report.value("property_evaluations", totals.values().map(|t| t.0).sum::<usize>());
    for (name, (count, failed, first)) in &totals {
        let detail = match first {
            Some(i) => format!("{failed} of {count} failed, first in case {i}: {}", outcomes[*i].1.failures.iter().find(|f| &f.property == name).map_or("", |f| f.detail.as_str())),
            None => format!("{count} evaluations"),
        };
        report.check(name.clone(), *failed == 0, detail);
        if let Some(i) = first {
            if report.counterexamples.len() < 5 {
                let (p, marking) = minimize(&outcomes[*i].0, cfg.seed, *i, name, cfg.fault);
                let mut scene = Scene::new(SceneKind::Combinatorial, format!("counterexample-{i}"));
                scene.metadata.description = format!("violates `{name}` (case {i}, seed {})", cfg.seed);
                scene.blowups = Some(p);
                scene.invariant = Some(marking);
                report.counterexamples.push(scene);
            }
        }
    }
    let scenes = (cfg.count / 10).max(cfg.count.min(20));
    if scenes > 0 {
        let ind = balanced_choice_independence(cfg.seed, scenes, cfg.max_n);
        report.value("dicritical_scenes", ind.scenes);
        report.value("dicritical_scene_divisors", ind.divisors);
        report.check("mu equal on all balanced divisors of dicritical scenes", ind.disagreements.is_empty(), ind.disagreements.join("; "));
    }
    if cfg.oracle_pairs > 0 {
        let run = oracle_robustness(cfg.seed, cfg.oracle_pairs, cfg.max_degree);
        report.value("germ_pairs", run.pairs);
        report.value("coordinate_changes", run.changes);
        report.value("largest_i0", run.max_i0);
        report.check("oracle agrees across coordinate changes and is additive", run.failures.is_empty(), run.failures.join("; "));
    }
    report.passed = report.checks.iter().all(|c| c.holds);
    report
}

/// Result of comparing the Milnor number across all balanced divisors of
/// random dicritical scenes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceRun {
    pub scenes: usize,
    pub divisors: usize,
    /// Scenes where two balanced divisors gave different Milnor numbers.
    pub disagreements: Vec<String>,
}

pub fn balanced_choice_independence(seed: u64, scenes: usize, max_n: usize) -> IndependenceRun {
    let runs: Vec<(usize, Option<String>)> = (0..scenes)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(seed ^ 0x5eed_d1c7, i);
            loop {
                let p = random_program(&mut rng, max_n.max(2));
                let a = build_intersection(&build_cholesky(&p));
                let n = p.len();
                let wishes: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
                let marking = InvariantMarking::from_wishes(&wishes, &a);
                if marking.dicriticals().is_empty() {
                    continue;
                }
                let iso: Vec<BigInt> = (0..n)
                    .map(|k| if marking.is_invariant(k) { BigInt::from(rng.gen_range(0..2)) } else { BigInt::zero() })
                    .collect();
                let isolated: Vec<BranchAttachment> =
                    BranchAttachment::new("I", iso).map(|b| vec![b]).unwrap_or_default();
                let Ok(all) = enumerate_balanced(&marking, &a, &isolated, 3, 100) else { continue };
                if all.len() < 2 {
                    continue;
                }
                let e = Engine::new(p.clone(), marking.raw().to_vec(), checked_ledger()).expect("valid marking");
                let values: Vec<BigInt> = all
                    .iter()
                    .map(|d| e.milnor_foliation(&d.total_vector(n).expect("dims")).expect("balanced"))
                    .collect();
                let bad = values.windows(2).any(|w| w[0] != w[1]);
                let msg = bad.then(|| format!("{:?} marking {:?}: {}", p.centers_one_based(), marking.raw(), fmt_vec(&values)));
                return (all.len(), msg);
            }
        })
        .collect();
    IndependenceRun {
        scenes,
        divisors: runs.iter().map(|r| r.0).sum(),
        disagreements: runs.into_iter().filter_map(|r| r.1).collect(),
    }
}
