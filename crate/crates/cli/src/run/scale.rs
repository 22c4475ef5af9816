//! `scale` scenarios: C_P-Re fits per activity level and the exponent analysis.

use std::fs::File;

use swimwake_core::energetics::{
    fit_cp_lines, intersection_analysis, load_records, power_coefficient, Crossing, DragLaw, FluidEnvironment,
    Quantity, SurfaceModel,
};

use crate::config::{ScaleBlock, ScenarioConfig};
use crate::error::{CliError, Context, Result};
use crate::output::{num, CheckResult, RunOutput, Table};

const MODULE: &str = "energetics";

pub(crate) fn run(cfg: &ScenarioConfig, block: &ScaleBlock, out: &mut RunOutput) -> Result<Vec<CheckResult>> {
    let path = cfg.base_dir.join(&block.data);
    let file = File::open(&path).map_err(|_| CliError::NotFound(path.clone()))?;
    let records = load_records(file, &block.ingest).within(MODULE)?;
    let env = block.fluid.unwrap_or_else(FluidEnvironment::water_cgs);
    let surface = block
        .surface_prefactor
        .map(|prefactor| SurfaceModel { prefactor })
        .unwrap_or_default();

    let mut pts = Table::new(&["level", "mass", "length", "speed", "power", "re", "cp"]);
    for r in records.iter().filter(|r| r.speed > 0.0) {
        pts.push(vec![
            r.level.label().into(),
            num(r.mass),
            num(r.length),
            num(r.speed),
            num(r.power),
            num(r.speed * r.length / env.nu),
            num(power_coefficient(r, &env, &surface)),
        ]);
    }
    out.table("cp_points.csv", &pts)?;

    let fits = fit_cp_lines(&records, &env, &surface).within(MODULE)?;
    let mut ft = Table::new(&["level", "count", "slope", "intercept", "mass_exponent", "beta", "gamma", "re_min", "re_max"]);
    for f in &fits {
        ft.push(vec![
            f.level.label().into(),
            f.count.to_string(),
            num(f.slope),
            num(f.intercept),
            num(f.mass_exponent),
            num(f.beta()),
            num(f.gamma()),
            num(f.re_min),
            num(f.re_max),
        ]);
    }
    out.table("fits.csv", &ft)?;

    let points: Vec<(f64, f64)> = fits.iter().map(|f| (f.mass_exponent, f.beta())).collect();
    let report = intersection_analysis(&points, (block.b_range[0], block.b_range[1])).within(MODULE)?;
    let mut it = Table::new(&["quantity", "law", "crossing", "b", "line_slope", "line_intercept"]);
    for &(q, law, c) in &report.crossings {
        let line = match q {
            Quantity::Beta => report.beta_line,
            Quantity::Gamma => report.gamma_line,
        };
        let (kind, b) = match c {
            Crossing::At(b) => ("at", num(b)),
            Crossing::Coincident => ("coincident", String::new()),
            Crossing::None => ("none", String::new()),
        };
        it.push(vec![
            quantity_name(q).into(),
            law.name().into(),
            kind.into(),
            b,
            num(line.slope),
            num(line.intercept),
        ]);
    }
    out.table("intersection.csv", &it)?;

    let mut checks = vec![];
    for (level, want) in &block.expect_slopes {
        let name = format!("slope {}", level.label());
        checks.push(match fits.iter().find(|f| f.level == *level) {
            Some(f) => CheckResult::new(&name, (f.slope - want).abs() <= block.slope_tol, f.slope, block.slope_tol, format!("target {want}")),
            None => CheckResult::new(&name, false, f64::NAN, block.slope_tol, "level absent from the data"),
        });
    }
    if let Some(law) = block.expect_law {
        for q in [Quantity::Beta, Quantity::Gamma] {
            let sel = report.selected(q);
            let names: Vec<&str> = sel.iter().map(|l| l.name()).collect();
            checks.push(CheckResult::new(
                &format!("{}-line law", quantity_name(q)),
                sel == [law],
                f64::NAN,
                f64::NAN,
                format!("selected {names:?}, expected [{}]", law.name()),
            ));
        }
    }
    if let Some(target) = block.expect_crossing {
        let law = block.expect_law.unwrap_or(DragLaw::Laminar);
        for q in [Quantity::Beta, Quantity::Gamma] {
            let name = format!("{}-line crossing", quantity_name(q));
            checks.push(match report.crossing(q, law) {
                Crossing::At(b) => CheckResult::new(&name, (b - target.value).abs() <= target.tol, b, target.tol, format!("target b = {}", target.value)),
                other => CheckResult::new(&name, false, f64::NAN, target.tol, format!("{other:?}")),
            });
        }
    }
    Ok(checks)
}

pub fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Beta => "beta",
        Quantity::Gamma => "gamma",
    }
}
