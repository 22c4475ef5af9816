//! `swim` scenarios: station loads and P/E/T histories of a slender swimmer.

use std::f64::consts::PI;

use swimwake_core::kinematics::PlateMotion;
use swimwake_core::slender_body::{instantaneous_pet, mean_performance, section_lift, Regime};

use crate::config::{ScenarioConfig, SwimBlock};
use crate::error::{CliError, Context, Result};
use crate::output::{num, CheckResult, RunOutput, Table};

const MODULE: &str = "slender_body";

pub fn motion_period(m: &PlateMotion) -> Option<f64> {
    let omega = match m {
        PlateMotion::TravelingWave { wavenumber, speed, .. } => (wavenumber * speed).abs(),
        PlateMotion::AnalyticWaveform { modes, .. } => modes
            .iter()
            .map(|m| m.omega.abs())
            .filter(|w| *w > 0.0)
            .reduce(f64::min)
            .unwrap_or(0.0),
        PlateMotion::HeavePitch { omega, .. } => omega.abs(),
    };
    (omega > 0.0).then(|| 2.0 * PI / omega)
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Ribbon => "ribbon",
        Regime::Anterior => "anterior",
        Regime::TrailingSideEdge => "trailing-side-edge",
        Regime::AbruptFinWake => "abrupt-fin-wake",
        Regime::Caudal => "caudal",
    }
}

pub(crate) fn run(cfg: &ScenarioConfig, block: &SwimBlock, out: &mut RunOutput) -> Result<Vec<CheckResult>> {
    block.planform.validate().within(MODULE)?;
    let period = motion_period(&block.motion).ok_or_else(|| CliError::config("swim.motion", "motion has no oscillation frequency"))?;
    let u = block.speed;
    let n = (block.periods * block.samples_per_period as f64).round().max(1.0) as usize;
    let dt = period / block.samples_per_period as f64;
    let length = block.planform.length;

    let mut pet = Table::new(&["t", "power", "energy", "thrust", "speed"]);
    let mut loads = Table::new(&["t", "x", "regime", "momentum", "lift"]);
    let (mut sp, mut se, mut st) = (0.0, 0.0, 0.0);
    let mut worst = 0.0f64;
    for i in 0..n {
        let t = i as f64 * dt;
        let rec = instantaneous_pet(&block.planform, &block.motion, u, t).within(MODULE)?;
        worst = worst.max(rec.conservation_residual());
        sp += rec.power;
        se += rec.energy;
        st += rec.thrust;
        pet.push_nums(&[t, rec.power, rec.energy, rec.thrust, u]);
        for j in 0..block.stations {
            let x = length * (j as f64 + 0.5) / block.stations as f64;
            let load = section_lift(&block.planform, &block.motion, u, x, t).within(MODULE)?;
            loads.push(vec![num(t), num(x), regime_name(load.regime).into(), num(load.momentum), num(load.lift)]);
        }
    }
    out.table("pet.csv", &pet)?;
    out.table("loads.csv", &loads)?;
    let (p, e, th) = (sp / n as f64, se / n as f64, st / n as f64);

    // tail closed form for a traveling wave
    let closed = match block.motion {
        PlateMotion::TravelingWave {
            amplitude,
            wavenumber,
            speed: c,
            ..
        } => {
            let s = 0.5 * (amplitude * wavenumber).powi(2);
            let m_tail = block.planform.added_mass(length).0;
            let rec = mean_performance(m_tail, u, c, s).within(MODULE)?;
            Some((rec, s > 0.0 && m_tail > 0.0))
        }
        _ => None,
    };
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let mut summary = Table::new(&[
        "mean_power",
        "mean_energy",
        "mean_thrust",
        "efficiency",
        "efficiency_body_integral",
        "closed_power",
        "closed_energy",
        "closed_thrust",
        "max_conservation_residual",
    ]);
    let eta = closed.and_then(|(r, moving)| if moving { r.efficiency } else { None });
    summary.push(vec![
        num(p),
        num(e),
        num(th),
        opt(eta),
        opt((p > 0.0).then(|| th * u / p)),
        opt(closed.map(|c| c.0.power)),
        opt(closed.map(|c| c.0.energy)),
        opt(closed.map(|c| c.0.thrust)),
        num(worst),
    ]);
    out.table("summary.csv", &summary)?;

    let tol = cfg.tolerances.conservation;
    let mut checks = vec![CheckResult::new(
        "conservation",
        worst <= tol,
        worst,
        tol,
        format!("max |P - E - TU| / (|P| + |E| + |TU|) over {n} samples"),
    )];
    if let Some(target) = block.expect_efficiency {
        checks.push(match eta {
            Some(v) => CheckResult::new(
                "efficiency",
                (v - target.value).abs() <= target.tol,
                v,
                target.tol,
                format!("target {}", target.value),
            ),
            None => CheckResult::new("efficiency", false, f64::NAN, target.tol, "no closed-form efficiency for this motion"),
        });
    }
    Ok(checks)
}
