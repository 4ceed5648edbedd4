//! Polynomial scenes: germs in, combinatorial data and oracle values out.

use dicrit_core::BranchAttachment;
use dicrit_germ::branch::branch_analysis;
use dicrit_germ::oracle::{milnor, OracleConfig};
use dicrit_germ::parse::{parse_germ, Germ};
use dicrit_germ::pencil::{analyse_pencil, PencilAnalysis, PencilConfig};
use dicrit_germ::resolve::{CrossCheck, ResolveConfig, Resolution};

use crate::battery;
use crate::commands::Options;
use crate::error::{CliError, Result};
use crate::report::{fmt_vec, OracleOutcome, Report};
use crate::scene::{PolynomialStanza, Scene, SceneKind};

pub const DEFAULT_SEED: u64 = 0x0dd5_eed5;

fn stanza(scene: &Scene) -> Result<&PolynomialStanza> {
    scene.polynomial.as_ref().ok_or_else(|| CliError::Input("missing `polynomial` stanza".into()))
}

fn germ(text: &str, field: &str) -> Result<Germ> {
    parse_germ(text).map_err(|e| CliError::germ(field, e))
}

/// Seed and bounds for a run: command-line flags win over the scene.
pub fn config(scene: &Scene, opts: &Options) -> Result<PencilConfig> {
    let st = stanza(scene)?;
    let seed = opts.seed.or(st.seed).unwrap_or(DEFAULT_SEED);
    let max_extension_degree = opts.max_ext_degree.or(st.max_extension_degree).unwrap_or(ResolveConfig::default().max_extension_degree);
    Ok(PencilConfig {
        oracle: OracleConfig { seed, ..OracleConfig::default() },
        resolve: ResolveConfig { max_extension_degree, ..ResolveConfig::default() },
    })
}

fn attach(report: &mut Report, name: &str, oracle: impl ToString) {
    let oracle = oracle.to_string();
    if let Some(e) = report.entries.iter_mut().find(|e| e.name == name) {
        let agrees = e.value == oracle;
        e.oracle = Some(OracleOutcome { value: oracle, agrees });
    }
}

fn cross_checks(report: &mut Report, checks: &[CrossCheck]) {
    for c in checks {
        report.check(
            format!("resolution vs oracle: {}", c.what),
            c.agrees(),
            format!("combinatorial {}, oracle {}", c.combinatorial, c.oracle),
        );
    }
}

fn resolution_entries(report: &mut Report, res: &Resolution) {
    for (k, c) in res.components.iter().enumerate() {
        let dir = c.direction.as_ref().map_or_else(|| "-".to_string(), ToString::to_string);
        report.value(
            format!("E{}", k + 1),
            format!("{:?} point at depth {}, residue degree {}, direction {dir}", c.kind, c.depth, c.field_degree),
        );
    }
}

pub struct PolynomialRun {
    pub replay: Scene,
    pub pencil: Option<PencilAnalysis>,
}

/// Runs the polynomial scene. With `full` the complete invariant battery is
/// recorded; otherwise only the resolution and its replay.
pub fn run(report: &mut Report, scene: &Scene, opts: &Options, full: bool) -> Result<PolynomialRun> {
    let st = stanza(scene)?;
    let cfg = config(scene, opts)?;
    report.seed = cfg.oracle.seed;
    let f = germ(&st.f, "polynomial.f")?;
    report.value("f", &f);
    let source = format!("resolved from polynomial scene {} with seed {}", scene.name(), cfg.oracle.seed);
    let mut replay = Scene::new(SceneKind::Pencil, format!("{}-replay", scene.name()));
    replay.metadata.source = Some(source);

    let Some(g_text) = &st.g else {
        let bd = branch_analysis(&f, &cfg.resolve).map_err(|e| CliError::germ("polynomial", e))?;
        for (k, b) in bd.branches.iter().enumerate() {
            let name = format!("f.{}", k + 1);
            report.value(format!("direction({name})"), &b.direction);
            report.value(format!("multiplicity_sequence({name})"), fmt_vec(&b.multiplicity_sequence));
            report.value(format!("characteristic_exponents({name})"), fmt_vec(&b.characteristic_exponents));
        }
        for (i, row) in bd.intersections.iter().enumerate() {
            for (j, v) in row.iter().enumerate().skip(i + 1) {
                report.value(format!("i0(f.{},f.{})", i + 1, j + 1), v);
            }
        }
        let res = &bd.resolution;
        if !full {
            resolution_entries(report, res);
        }
        replay.kind = SceneKind::Combinatorial;
        replay.blowups = Some(res.program.clone());
        replay.invariant = Some(vec![1; res.program.len()]);
        replay.branches = vec![BranchAttachment::new("f", res.s[0].clone()).map_err(|e| CliError::core("polynomial", e))?];
        if full {
            battery::combinatorial(report, &replay)?;
            attach(report, "mu(f)", milnor(&f, &cfg.oracle).map_err(|e| CliError::germ("polynomial", e))?);
        }
        return Ok(PolynomialRun { replay, pencil: None });
    };

    let g = germ(g_text, "polynomial.g")?;
    report.value("g", &g);
    let a = analyse_pencil(&f, &g, &cfg).map_err(|e| CliError::germ("polynomial", e))?;
    if let Some((t1, t2)) = &a.regenerated {
        report.note(format!("the given generators are special; using f + ({t1}) g and f + ({t2}) g"));
        report.value("generator f", &a.f);
        report.value("generator g", &a.g);
    }
    report.value("bifurcation_candidates", a.bifurcation.candidates.to_string_in("t"));
    for c in &a.curves {
        if c.name.starts_with('h') {
            report.value(format!("member({})", c.name), &c.member);
        }
    }
    report.value(
        "generic_parameters",
        format!("{}, {}", a.generic_parameters[0], a.generic_parameters[1]),
    );
    replay.blowups = Some(a.resolution.program.clone());
    replay.invariant = Some(a.iota.clone());
    replay.pencil = Some(a.data.clone());
    if !full {
        resolution_entries(report, &a.resolution);
        for (c, s) in a.curves.iter().zip(&a.resolution.s) {
            report.value(format!("S({})", c.name), fmt_vec(s));
        }
        return Ok(PolynomialRun { replay, pencil: Some(a) });
    }

    let model = a.model().map_err(|e| CliError::germ("polynomial", e))?;
    battery::structure(report, &a.resolution.program)?;
    battery::pencil(report, &model)?;
    attach(report, "mu(f,g)", a.mu_pair);
    attach(report, "mu(f,g) telescoped", a.mu_pair);
    attach(report, "i0", a.i0);
    attach(report, "mu(fg)", a.mu_product);
    attach(report, "mu_generic", a.bifurcation.mu_generic);
    for c in &a.curves {
        if c.name.starts_with('h') {
            attach(report, &format!("mu({})", c.name), c.mu);
        }
    }
    report.check(
        "oracle: mu(f,g) = mu(fg) + excess",
        a.oracle_formula_holds(),
        format!("{} vs {}", a.mu_pair, a.mu_product),
    );
    if opts.oracle {
        let checks = a.cross_check(&cfg.oracle).map_err(|e| CliError::germ("polynomial", e))?;
        cross_checks(report, &checks);
    }
    Ok(PolynomialRun { replay, pencil: Some(a) })
}
