//! End-to-end acceptance run: one line per criterion, exact equality only.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use dicrit::oracle_suite::oracle_robustness;
use dicrit::verify::{balanced_choice_independence, verify, VerifyConfig};
use dicrit::{commands, Options, Report, Scene};
use dicrit_core::hypotheses::HypothesisStatus;
use dicrit_core::pencil::bifurcation_formula_check;
use dicrit_core::program::{build_cholesky, build_intersection};
use dicrit_core::{BlowUpProgram, Engine, HypothesisLedger, PencilModel};
use dicrit_germ::oracle::{milnor, mu_pair, Multiplicity, OracleConfig};
use dicrit_germ::parse::parse_germ;
use dicrit_germ::pencil::{analyse_pencil, PencilAnalysis, PencilConfig};
use dicrit_germ::resolve::ResolveConfig;
use num_bigint::BigInt;

type Outcome = Result<(), String>;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&k| BigInt::from(k)).collect()
}

fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
    v.iter().map(|r| ints(r)).collect()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn within(what: &str, elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

fn scene(name: &str) -> Scene {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes").join(name);
    Scene::load(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn checked_ledger() -> HypothesisLedger {
    let mut h = HypothesisLedger::generalized_curve();
    h.balanced_divisor_checked = HypothesisStatus::Asserted;
    h
}

fn clean(report: &Report) -> Outcome {
    let failed: Vec<String> = report.failed_checks().iter().map(|c| format!("{} ({})", c.name, c.detail)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(format!("{}: failed checks {}", report.scene, failed.join("; ")))
    }
}

fn entry(report: &Report, name: &str, want: &str) -> Outcome {
    expect(&format!("{} {name}", report.scene), report.get(name), Some(want))
}

fn pencil_analysis(f: &str, g: &str, max_extension_degree: usize) -> Result<PencilAnalysis, String> {
    let cfg = PencilConfig {
        oracle: OracleConfig::default(),
        resolve: ResolveConfig { max_extension_degree, ..ResolveConfig::default() },
    };
    analyse_pencil(&parse_germ(f).unwrap(), &parse_germ(g).unwrap(), &cfg).map_err(|e| e.to_string())
}

/// `mu(f,g)` from the Milnor numbers along each member alone:
/// every member contributes `along + d - 1`, generic ones `2 - r` times.
fn telescoped_from_along(model: &PencilModel) -> Result<BigInt, String> {
    let e = model.engine();
    let s_b = model.balanced_vector();
    let mut total = BigInt::from(-1);
    for fb in &model.data().fibers {
        let along = e.milnor_along(&s_b, &fb.s).map_err(|e| e.to_string())?;
        total += along + BigInt::from(fb.conjugates) - 1;
    }
    let generic = e.milnor_along(&s_b, &model.data().generic.s).map_err(|e| e.to_string())?;
    total += (BigInt::from(2) - BigInt::from(model.special_member_count())) * generic;
    Ok(total)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let program = BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2]]).map_err(|e| e.to_string())?;
    let f = build_cholesky(&program);
    let a = build_intersection(&f);
    let elapsed = start.elapsed();
    expect("F", f.matrix().to_rows(), rows(&[&[1, 0, 0], &[-1, 1, 0], &[-1, -1, 1]]))?;
    expect("A", a.matrix().to_rows(), rows(&[&[-3, 0, 1], &[0, -2, 1], &[1, 1, -1]]))?;
    within("matrices", elapsed, Duration::from_millis(1))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (f, g) = ("x*y + y^2 + x^3", "x*y");
    let oracle = mu_pair(&parse_germ(f).unwrap(), &parse_germ(g).unwrap(), &OracleConfig::default()).map_err(|e| e.to_string())?;
    let a = pencil_analysis(f, g, ResolveConfig::default().max_extension_degree)?;
    let model = a.model().map_err(|e| e.to_string())?;
    let by_form = model.engine().milnor_foliation(&model.balanced_vector()).map_err(|e| e.to_string())?;
    let by_along = telescoped_from_along(&model)?;
    let check = bifurcation_formula_check(&model).map_err(|e| e.to_string())?;
    let fg = &parse_germ(f).unwrap() * &parse_germ(g).unwrap();
    let mu_fg_oracle = milnor(&fg, &OracleConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    expect("mu(f,g) by the resultant oracle", oracle, Multiplicity::Finite(12))?;
    expect("mu(f,g) by the quadratic form", by_form, BigInt::from(12))?;
    expect("mu(f,g) by milnor_along", by_along, BigInt::from(12))?;
    expect("mu(fg) combinatorial", check.mu_fg.clone(), BigInt::from(11))?;
    expect("mu(fg) oracle", mu_fg_oracle, Multiplicity::Finite(11))?;
    expect("excess", check.excess.clone(), BigInt::from(1))?;
    expect("bifurcation formula", check.holds, true)?;
    let specials: Vec<(&str, u64)> = a.curves.iter().filter(|c| c.name.starts_with('h')).map(|c| (c.member.as_str(), c.mu)).collect();
    expect("special members (oracle)", specials, vec![("f - g", 2)])?;
    expect("mu(h) combinatorial", model.fiber_mu().to_vec(), ints(&[2]))?;
    expect("mu_gen combinatorial", model.generic_mu().clone(), BigInt::from(1))?;
    expect("mu_gen oracle", a.bifurcation.mu_generic, 1)?;
    within("Genzmer pencil", elapsed, Duration::from_secs(1))
}

fn szawlowski_model_checks(label: &str, model: &PencilModel) -> Outcome {
    let mut mus: Vec<BigInt> = model.fiber_mu().to_vec();
    mus.sort();
    expect(&format!("{label} mu(h_i)"), mus, ints(&[6, 6, 8]))?;
    expect(&format!("{label} mu_gen"), model.generic_mu().clone(), BigInt::from(4))?;
    let val = model.engine().intersection().neighbours(0).len();
    expect(&format!("{label} val(E1)"), val, 3)?;
    let s_b = model.balanced_vector();
    expect(&format!("{label} S_B[E1] = 2 - val"), s_b[0].clone(), BigInt::from(2 - val as i64))?;
    expect(&format!("{label} S_B[E1]"), s_b[0].clone(), BigInt::from(-1))?;
    let check = bifurcation_formula_check(model).map_err(|e| e.to_string())?;
    expect(&format!("{label} bifurcation formula"), check.holds, true)?;
    expect(&format!("{label} mu(f,g)"), check.mu_pair.clone(), BigInt::from(33))?;
    expect(&format!("{label} mu(f,g) telescoped"), telescoped_from_along(model)?, BigInt::from(33))?;
    expect(&format!("{label} mu(fg) + excess"), (check.mu_fg, check.excess), (BigInt::from(25), BigInt::from(8)))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let a = pencil_analysis("(x^3+y^5)+y*(y^2-3*x^2)", "y*(y^2-3*x^2)", 8)?;
    let specials: Vec<(&str, u64)> = a.curves.iter().filter(|c| c.name.starts_with('h')).map(|c| (c.member.as_str(), c.mu)).collect();
    expect("special members (oracle)", specials, vec![("f - g", 8), ("2f - g", 6), ("2f - 3g", 6)])?;
    expect("mu_gen oracle", a.bifurcation.mu_generic, 4)?;
    expect("oracle bifurcation formula", a.oracle_formula_holds(), true)?;
    expect("mu(f,g) oracle", (a.mu_pair, a.mu_product), (33, 25))?;
    szawlowski_model_checks("resolved", &a.model().map_err(|e| e.to_string())?)?;

    let fixture = scene("szawlowski-pencil.json");
    let model = PencilModel::new(
        fixture.program().map_err(|e| e.to_string())?.clone(),
        fixture.iota().map_err(|e| e.to_string())?,
        fixture.pencil.clone().ok_or("fixture has no pencil stanza")?,
    )
    .map_err(|e| e.to_string())?;
    szawlowski_model_checks("fixture", &model)?;
    expect("resolved program = fixture program", &a.resolution.program, fixture.program().map_err(|e| e.to_string())?)?;
    within("Szawlowski pencil", start.elapsed(), Duration::from_secs(10))
}

fn criterion_4() -> Outcome {
    let program = BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2]]).map_err(|e| e.to_string())?;
    let e = Engine::new(program, vec![1, 1, 1], checked_ledger()).map_err(|e| e.to_string())?;
    let s = ints(&[0, 0, 1]);
    expect("milnor_curve", e.milnor_curve(&s).map_err(|e| e.to_string())?, BigInt::from(2))?;
    expect("multiplicity sequence", e.curve_multiplicity_sequence(&s).map_err(|e| e.to_string())?, ints(&[2, 1, 1]))?;
    expect("vanishing orders", e.vanishing_orders(&s).map_err(|e| e.to_string())?.total, ints(&[2, 3, 6]))?;
    expect("gsv", e.gsv(&s, &s).map_err(|e| e.to_string())?, BigInt::from(0))?;
    let oracle = milnor(&parse_germ("y^2 + x^3").unwrap(), &OracleConfig::default()).map_err(|e| e.to_string())?;
    expect("oracle mu", oracle, Multiplicity::Finite(2))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = VerifyConfig { count: 200, max_n: 12, seed: 1, ..VerifyConfig::default() };
    let report = verify(&cfg);
    let elapsed = start.elapsed();
    clean(&report)?;
    for name in [
        "A = -F^T F",
        "F^T u = 2u + diag A",
        "sum_{i<j} A_ij = n - 1",
        "det F = 1",
        "-A^-1 > 0",
        "balanced pairing = 0",
        "GSV sum rule",
        "CS sum rule",
        "milnor decomposition total = milnor_foliation",
    ] {
        let c = report.checks.iter().find(|c| c.name == name).ok_or_else(|| format!("property {name} not evaluated"))?;
        expect(name, c.holds, true)?;
    }
    expect("cases", report.get("cases"), Some("200"))?;
    within("verify", elapsed, Duration::from_secs(30))
}

fn criterion_6() -> Outcome {
    let run = balanced_choice_independence(1, 20, 12);
    expect("scenes", run.scenes >= 20, true)?;
    expect("at least two divisors per scene", run.divisors >= 2 * run.scenes, true)?;
    expect("disagreements", run.disagreements, Vec::<String>::new())
}

fn criterion_7() -> Outcome {
    let opts = Options::default();
    let report = commands::invariants(&scene("genzmer.json"), &opts).map_err(|e| e.to_string())?;
    clean(&report)?;
    for name in ["cs_total", "var_total", "bb_total"] {
        entry(&report, name, "20")?;
    }
    for b in ["h", "f", "g", "phi"] {
        let c = report
            .checks
            .iter()
            .find(|c| c.name == format!("Var = CS + GSV along {b}"))
            .ok_or_else(|| format!("no Var = CS + GSV check along {b}"))?;
        expect(&format!("Var = CS + GSV along {b}"), c.holds, true)?;
    }
    let pencil = commands::pencil(&scene("genzmer-pencil.json"), &opts).map_err(|e| e.to_string())?;
    clean(&pencil)?;
    for name in ["cs_total", "var_total", "bb_total"] {
        entry(&pencil, name, "20")?;
    }
    let fibers = pencil.checks.iter().filter(|c| c.name.starts_with("Var = CS + GSV along")).count();
    expect("fibers with Var = CS + GSV", fibers >= 2, true)
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let run = oracle_robustness(1, 100, 6);
    let elapsed = start.elapsed();
    expect("pairs", run.pairs, 100)?;
    expect("failures", run.failures, Vec::<String>::new())?;
    expect("nontrivial sample", run.max_i0 > 1, true)?;
    within("oracle robustness", elapsed, Duration::from_secs(60))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 Genzmer F and A", criterion_1),
        ("2 Genzmer pencil end to end", criterion_2),
        ("3 Szawlowski pencil", criterion_3),
        ("4 cusp suite", criterion_4),
        ("5 property suite", criterion_5),
        ("6 balanced-choice independence", criterion_6),
        ("7 index totals on Genzmer", criterion_7),
        ("8 oracle robustness", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match &outcome {
            Ok(()) => println!("criterion {name}: PASS ({ms:.1} ms)"),
            Err(e) => {
                println!("criterion {name}: FAIL ({ms:.1} ms): {e}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
