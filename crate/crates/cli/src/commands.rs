//! The subcommands, each producing a report.

use dicrit_core::PencilModel;

use crate::battery;
use crate::error::{CliError, Result};
use crate::polynomial;
use crate::report::Report;
use crate::scene::{Scene, SceneKind};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: Option<u64>,
    pub max_ext_degree: Option<usize>,
    /// Cross-check every derived intersection number against the oracle.
    pub oracle: bool,
}

fn pencil_model(scene: &Scene) -> Result<PencilModel> {
    let data = scene.pencil.clone().ok_or_else(|| CliError::Input("missing `pencil` stanza".into()))?;
    PencilModel::new(scene.program()?.clone(), scene.iota()?, data).map_err(|e| CliError::core("pencil", e))
}

pub fn invariants(scene: &Scene, opts: &Options) -> Result<Report> {
    let mut report = Report::new("invariants", scene.name(), opts.seed.unwrap_or(0));
    match scene.kind {
        SceneKind::Combinatorial => battery::combinatorial(&mut report, scene)?,
        SceneKind::Pencil => {
            battery::structure(&mut report, scene.program()?)?;
            battery::pencil(&mut report, &pencil_model(scene)?)?;
        }
        SceneKind::Polynomial => {
            let run = polynomial::run(&mut report, scene, opts, true)?;
            report.replay = Some(run.replay);
        }
    }
    report.finish(&scene.metadata);
    Ok(report)
}

pub fn pencil(scene: &Scene, opts: &Options) -> Result<Report> {
    let mut report = Report::new("pencil", scene.name(), opts.seed.unwrap_or(0));
    match scene.kind {
        SceneKind::Pencil => battery::pencil(&mut report, &pencil_model(scene)?)?,
        SceneKind::Polynomial if scene.polynomial.as_ref().is_some_and(|p| p.g.is_some()) => {
            let run = polynomial::run(&mut report, scene, opts, true)?;
            report.replay = Some(run.replay);
        }
        _ => return Err(CliError::Input("`pencil` needs a pencil scene or a polynomial scene with f and g".into())),
    }
    report.finish(&scene.metadata);
    Ok(report)
}

/// Derives the combinatorial data of a polynomial scene. The replay scene is
/// attached to the report.
pub fn resolve(scene: &Scene, opts: &Options) -> Result<Report> {
    if scene.kind != SceneKind::Polynomial {
        return Err(CliError::Input("`resolve` needs a polynomial scene".into()));
    }
    let mut report = Report::new("resolve", scene.name(), opts.seed.unwrap_or(0));
    let run = polynomial::run(&mut report, scene, opts, false)?;
    report.replay = Some(run.replay);
    report.finish(&Default::default());
    Ok(report)
}
