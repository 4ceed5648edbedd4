//! The invariant computations run on a scene, recorded into a report.

use dicrit_core::divisor::{enumerate_balanced, is_balanced, BranchKind};
use dicrit_core::pencil::{
    bifurcation_formula_check, fiber_balanced_divisor, fiber_gsv_check, reduced_singularities, semitame_check,
    unfolding_dimension,
};
use dicrit_core::program::{build_cholesky, build_intersection};
use dicrit_core::{
    BlowUpProgram, BranchAttachment, Engine, Exact, Foliation, HypothesisLedger, PencilModel, SeparatrixDivisor,
};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{CliError, Result};
use crate::properties::structure_checks;
use crate::report::{fmt_matrix, fmt_vec, Report};
use crate::scene::Scene;

const FOLIATION: &[&str] = &["generalized_curve", "balanced_divisor_checked"];

/// Turns a disagreement between two computation paths into a failed check;
/// other errors propagate.
fn soft<T>(report: &mut Report, stanza: &str, r: dicrit_core::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(dicrit_core::Error::PathMismatch { what, left, right }) => {
            report.check(what, false, format!("{left} != {right}"));
            Ok(None)
        }
        Err(e) => Err(CliError::core(stanza, e)),
    }
}

fn core<T>(stanza: &str, r: dicrit_core::Result<T>) -> Result<T> {
    r.map_err(|e| CliError::core(stanza, e))
}

/// Matrices of the program and their identities.
pub fn structure(report: &mut Report, program: &BlowUpProgram) -> Result<()> {
    let f = build_cholesky(program);
    let a = build_intersection(&f);
    report.value("n", program.len());
    report.value("blowups", format!("{:?}", program.centers_one_based()));
    report.entry("F", fmt_matrix(f.matrix()), "unit lower triangular, F_kj = -1 when center k lies on E_j", &[]);
    report.entry("A", fmt_matrix(a.matrix()), "-F^T F", &[]);
    report.entry("N", fmt_matrix(&core("blowups", a.neg_inverse())?), "-A^-1", &[]);
    for c in structure_checks(program, false) {
        report.checks.push(c);
    }
    Ok(())
}

fn curve_entries(report: &mut Report, e: &Engine, branches: &[BranchAttachment]) -> Result<()> {
    for b in branches {
        let s = b.s();
        report.entry(format!("S({})", b.name), fmt_vec(s), "attachment vector", &[]);
        report.entry(format!("mu({})", b.name), core("branches", e.milnor_curve(s))?, "<NS,S> - <S,w> + 1, w = (I + F^-1) u", &[]);
        let m = core("branches", e.curve_multiplicity_sequence(s))?;
        report.entry(format!("multiplicities({})", b.name), fmt_vec(&m), "F^-T S", &[]);
        let orders = core("branches", e.vanishing_orders(s))?;
        report.entry(format!("orders({})", b.name), fmt_vec(&orders.total), "-A^-1 S", &[]);
    }
    for (k, a) in branches.iter().enumerate() {
        for b in &branches[k + 1..] {
            let i0 = core("branches", e.intersection_number(a.s(), b.s()))?;
            report.entry(format!("i0({},{})", a.name, b.name), &i0, "<NS_a,S_b>", &[]);
            let ma = core("branches", e.curve_multiplicity_sequence(a.s()))?;
            let mb = core("branches", e.curve_multiplicity_sequence(b.s()))?;
            let noether: BigInt = ma.iter().zip(&mb).map(|(x, y)| x * y).sum();
            report.check(format!("i0({},{}) = sum of multiplicity products", a.name, b.name), noether == i0, format!("{noether}"));
            let rule = core("branches", e.milnor_product_rule_check(a.s(), b.s()))?;
            report.check(format!("mu({}{}) = mu + mu + 2 i0 - 1", a.name, b.name), rule.holds, format!("{} vs {}", rule.lhs, rule.rhs));
            let cs = core("branches", e.cs_sum_rule_check(a.s(), b.s()))?;
            report.check(format!("CS sum rule for {}, {}", a.name, b.name), cs.holds, format!("{} vs {}", cs.lhs, cs.rhs));
        }
    }
    Ok(())
}

fn valences(report: &mut Report, e: &Engine) -> Result<()> {
    for i in e.marking().dicriticals() {
        report.entry(format!("val(E{})", i + 1), core("blowups", e.intersection().valence(i))?, "number of neighbours", &[]);
    }
    Ok(())
}

/// The milnor number on every balanced divisor built from `isolated`.
fn balanced_choices(report: &mut Report, e: &Engine, isolated: &[BranchAttachment], mu: &BigInt) -> Result<()> {
    let all = core("divisor", enumerate_balanced(e.marking(), e.intersection(), isolated, 2, 100))?;
    let mut distinct = Vec::new();
    for d in &all {
        let s = core("divisor", d.total_vector(e.dim()))?;
        let v = core("divisor", e.milnor_foliation(&s))?;
        if !distinct.contains(&v) {
            distinct.push(v);
        }
    }
    report.value("balanced_divisors_enumerated", all.len());
    let holds = distinct.iter().all(|v| v == mu);
    report.check("mu independent of the balanced divisor", holds, format!("values {}", fmt_vec(&distinct)));
    Ok(())
}

/// Local indices along single branches and their sum rule.
fn per_branch_indices(
    report: &mut Report,
    e: &Engine,
    s_b: &[BigInt],
    groups: &[(String, Vec<BranchAttachment>, Vec<BigInt>)],
    reduced: &dicrit_core::invariants::ReducedData,
) -> Result<()> {
    for (name, parts, s) in groups {
        let c = core("divisor", SeparatrixDivisor::new(parts.iter().map(|b| (b.clone(), BigInt::from(1))).collect()))?;
        let (cs, var) = match (e.cs_total(&c, reduced), e.var_total(s_b, &c, reduced)) {
            (Ok(cs), Ok(var)) => (cs, var),
            (Err(err), _) | (_, Err(err)) => {
                report.note(format!("indices along {name} skipped: {err}"));
                continue;
            }
        };
        let gsv = Exact::integer(core("divisor", e.gsv(s_b, s))?);
        report.entry(format!("cs({name})"), &cs, "local indices + <NS,S> correction", &["generalized_curve"]);
        report.entry(format!("var({name})"), &var, "local indices + <NS_B - iota, S>", FOLIATION);
        let sum = core("reduced", cs.add(&gsv))?;
        report.check(format!("Var = CS + GSV along {name}"), var == sum, format!("{var} vs {cs} + {gsv}"));
    }
    Ok(())
}

fn index_totals(
    report: &mut Report,
    e: &Engine,
    s_b: &[BigInt],
    divisor: &SeparatrixDivisor,
    isolated: &[BranchAttachment],
    reduced: &dicrit_core::invariants::ReducedData,
) -> Result<()> {
    let cs = core("reduced", e.cs_total(divisor, reduced))?;
    let var = core("reduced", e.var_total(s_b, divisor, reduced))?;
    let bb = core("reduced", e.bb_total(s_b, isolated, reduced))?;
    report.entry("cs_total", &cs, "Camacho-Sad index along the balanced divisor", &["generalized_curve"]);
    report.entry("var_total", &var, "variation index along the balanced divisor", FOLIATION);
    report.entry("bb_total", &bb, "local Baum-Bott indices + <l,l>", &["second_class", "balanced_divisor_checked"]);
    report.check("cs_total = bb_total", cs == bb, format!("{cs} vs {bb}"));
    report.check("var_total = bb_total", var == bb, format!("{var} vs {bb}"));
    Ok(())
}

/// Everything computable from a combinatorial scene.
pub fn combinatorial(report: &mut Report, scene: &Scene) -> Result<()> {
    let program = scene.program()?.clone();
    let iota = scene.iota()?;
    structure(report, &program)?;
    let hyps = scene.hypotheses.clone().unwrap_or_else(HypothesisLedger::generalized_curve);
    let e = core("invariant", Engine::new(program.clone(), iota.clone(), hyps.clone()))?;
    valences(report, &e)?;
    curve_entries(report, &e, &scene.branches)?;
    if scene.branches.is_empty() {
        return Ok(());
    }

    let coefs: Vec<(String, BigInt)> = match &scene.divisor {
        Some(d) => d.iter().map(|t| (t.branch.clone(), BigInt::from(t.coefficient))).collect(),
        None if e.marking().dicriticals().is_empty() => {
            report.note("no divisor given: using the sum of all separatrices");
            scene.branches.iter().map(|b| (b.name.clone(), BigInt::from(1))).collect()
        }
        None => return Err(CliError::Input("a scene with dicritical components needs a `divisor` stanza".into())),
    };
    let reduced = scene.reduced_data()?;
    let fol = core("divisor", Foliation::new(program, iota, scene.branches.clone(), &coefs, hyps, reduced.clone()))?;
    let balance = fol.balance().clone();
    for c in &balance.components {
        report.entry(format!("S_B[E{}]", c.component), &c.lhs, &format!("2 - val = {}", c.rhs), &[]);
    }
    report.check("divisor is balanced", balance.balanced, balance.failures.join("; "));
    if !balance.balanced {
        return Ok(());
    }
    let e = fol.engine();
    let v = fol.vectors();
    let s_b = &v.balanced;
    report.entry("S_B", fmt_vec(s_b), "sum of coefficient times attachment vector", &[]);
    let mu = core("divisor", e.milnor_foliation(s_b))?;
    report.entry("mu", &mu, "<NS_B,S_B> - <S_B,w> + 1, w = (I + F^-1) u", FOLIATION);
    let ell = core("divisor", e.discrepancies(s_b))?;
    report.entry("l", fmt_vec(&ell), "F^-T S_B - F iota", &["second_class", "balanced_divisor_checked"]);
    report.entry("bb_correction", core("divisor", e.bb_correction(s_b))?, "<l,l>", &[]);
    report.entry("cs_combinatorial", core("divisor", e.cs_combinatorial(s_b))?, "<NS_B,S_B> correction", &[]);
    let dec = core("divisor", e.milnor_decomposition(s_b, &v.isolated))?;
    report.entry("N(l)", &dec.n_of_ell, "<l,l> - <l,u> - n", FOLIATION);
    report.entry("reduced_singularities", &dec.singularity_count, "points of the reduced foliation", FOLIATION);
    report.check("mu = N(l) + reduced singularities", dec.total == mu, format!("{} vs {mu}", dec.total));

    for b in &scene.branches {
        let gsv = core("divisor", e.gsv(s_b, b.s()))?;
        let along = core("divisor", e.milnor_along(s_b, b.s()))?;
        let mu_c = core("divisor", e.milnor_curve(b.s()))?;
        report.entry(format!("gsv({})", b.name), &gsv, "<N(S_B - S_C),S_C>", FOLIATION);
        report.entry(format!("milnor_along({})", b.name), &along, "mu of the foliation along C", FOLIATION);
        report.check(format!("mu(F,{0}) = GSV + mu({0})", b.name), along == &gsv + &mu_c, format!("{along} vs {gsv} + {mu_c}"));
    }
    let isolated = fol.isolated();
    for b in &isolated {
        let rule = core("divisor", e.gsv_sum_rule_check(s_b, b.s(), &v.isolated))?;
        report.check(format!("GSV sum rule for {}", b.name), rule.holds, format!("{} vs {}", rule.lhs, rule.rhs));
    }
    balanced_choices(report, e, &isolated, &mu)?;

    if let Some(rd) = &reduced {
        index_totals(report, e, s_b, fol.divisor(), &isolated, rd)?;
        let groups: Vec<(String, Vec<BranchAttachment>, Vec<BigInt>)> =
            scene.branches.iter().map(|b| (b.name.clone(), vec![b.clone()], b.s().to_vec())).collect();
        per_branch_indices(report, e, s_b, &groups, rd)?;
    }
    Ok(())
}

/// The pencil checks, with both computation paths of `mu(f, g)` traced.
pub fn pencil(report: &mut Report, model: &PencilModel) -> Result<()> {
    let e = model.engine();
    let data = model.data();
    report.entry("i0", model.i0(), "intersection of two generic members", &[]);
    report.entry("mu_generic", model.generic_mu(), "mu of a generic member", &[]);
    for (fb, mu) in data.fibers.iter().zip(model.fiber_mu()) {
        report.entry(format!("mu({})", fb.name), mu, "from the attachment vector of the member", &[]);
        if fb.conjugates > 1 {
            report.value(format!("conjugates({})", fb.name), fb.conjugates);
        }
    }
    valences(report, e)?;
    let s_b = model.balanced_vector();
    report.entry("S_B", fmt_vec(&s_b), "sum S_h + (2 - r) S_gen", &[]);
    let divisor = fiber_balanced_divisor(model);
    let isolated: Vec<BranchAttachment> =
        divisor.terms().iter().filter(|t| t.branch.isolated_label() == Some(true)).map(|t| t.branch.clone()).collect();
    let balance = core("pencil", is_balanced(divisor, e.marking(), e.intersection(), Some(&isolated)))?;
    for c in &balance.components {
        report.entry(format!("S_B[E{}]", c.component), &c.lhs, &format!("2 - val = {}", c.rhs), &[]);
    }
    report.check("fiber divisor is balanced", balance.balanced, balance.failures.join("; "));

    let Some(check) = soft(report, "pencil", bifurcation_formula_check(model))? else {
        return Ok(());
    };
    report.entry("mu(f,g)", &check.mu_pair, "quadratic form on S_B", FOLIATION);
    report.entry("mu(f,g) telescoped", &check.mu_pair_telescoped, "sum over members of i0 + mu(h)", FOLIATION);
    report.entry("mu(fg)", &check.mu_fg, "mu of the product of the generators", &[]);
    report.entry("excess", &check.excess, "sum of mu(h) - mu_generic over special members", &[]);
    for t in &check.traces {
        report.entry(format!("milnor_along({})", t.name), &t.milnor_along, &format!("expected {}", t.expected), FOLIATION);
    }
    report.check(
        "quadratic form = telescoped sum",
        check.mu_pair == check.mu_pair_telescoped,
        format!("{} vs {}", check.mu_pair, check.mu_pair_telescoped),
    );
    report.check(
        "mu(f,g) = mu(fg) + excess",
        check.holds,
        format!("{} = {} + {}", check.mu_pair, check.mu_fg, check.excess),
    );
    let gsv = core("pencil", fiber_gsv_check(model))?;
    for f in &gsv.fibers {
        report.entry(format!("gsv({})", f.name), &f.gsv, &format!("expected {}", f.expected), FOLIATION);
    }
    report.check("GSV of every member is i0", gsv.holds, String::new());
    let st = core("pencil", semitame_check(model))?;
    report.value("semitame", st.semitame);
    report.check("mu(f,g) >= mu(fg), equality iff semitame", st.inequality_holds, String::new());
    report.entry("unfolding_dimension", core("pencil", unfolding_dimension(model))?, "mu(f,g) - i0", FOLIATION);
    balanced_choices(report, e, &isolated, &check.mu_pair)?;

    let Some(reduced) = soft(report, "pencil", reduced_singularities(model))? else {
        return Ok(());
    };
    index_totals(report, e, &s_b, divisor, &isolated, &reduced)?;
    let marking = e.marking();
    let mut groups = Vec::new();
    for fb in &data.fibers {
        let parts: Vec<BranchAttachment> = divisor
            .terms()
            .iter()
            .filter(|t| t.branch.name == fb.name || t.branch.name.starts_with(&format!("{}:", fb.name)))
            .map(|t| t.branch.clone())
            .collect();
        groups.push((fb.name.clone(), parts, fb.s.clone()));
    }
    if data.generic.s.iter().any(|x| !x.is_zero()) {
        let g = core("pencil", BranchAttachment::new("generic", data.generic.s.clone()))?;
        if core("pencil", g.kind(marking))? == BranchKind::Dicritical {
            groups.push(("generic".into(), vec![g], data.generic.s.clone()));
        }
    }
    per_branch_indices(report, e, &s_b, &groups, &reduced)
}
