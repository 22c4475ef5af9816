//! Scenario dispatch.

pub mod scale;
pub mod swim;
pub mod wing;

use chrono::{SecondsFormat, Utc};

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::Result;
use crate::export::{self, View};
use crate::output::{CheckResult, RunManifest, RunOutput};
use crate::validate;

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunManifest> {
    cfg.validate()?;
    let started = Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
    let mut out = RunOutput::new(cfg.output_path())?;
    let checks: Vec<CheckResult> = match cfg.kind {
        ScenarioKind::Swim => swim::run(cfg, cfg.swim.as_ref().expect("validated"), &mut out)?,
        ScenarioKind::Wing => wing::run(cfg, cfg.wing.as_ref().expect("validated"), &mut out)?,
        ScenarioKind::Scale => scale::run(cfg, cfg.scale.as_ref().expect("validated"), &mut out)?,
        ScenarioKind::Validate => {
            let suite = &cfg.validate.as_ref().expect("validated").suite;
            let report = validate::validate(suite, cfg.seed, &cfg.tolerances)?;
            out.table(&format!("validate_{suite}.csv"), &report.table())?;
            report.checks()
        }
    };
    for view in View::defaults(cfg.kind) {
        export::render(&mut out, *view)?;
    }
    let manifest = RunManifest {
        scenario: cfg.name.clone(),
        kind: cfg.kind,
        config_hash: cfg.hash.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        started,
        finished: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        files: out.files.clone(),
        checks,
    };
    manifest.save(&out.dir)?;
    Ok(manifest)
}
