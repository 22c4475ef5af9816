//! `wing` scenarios: march the vortex-sheet solver and post-process the wake.

use std::f64::consts::PI;

use num_complex::Complex64;
use swimwake_core::kinematics::{Camber, WingShape};
use swimwake_core::nonlinear_wing::{
    clusters, linear_quasisteady_circulation, mean_performance, second_pair_spacing, wagner_solve, wake_impulse,
    ForceSample, WingSolver,
};

use crate::config::{ProbeFrame, ScenarioConfig, StreetOrientation, WingBlock, WingCheck};
use crate::error::{Context, Result};
use crate::output::{num, CheckResult, RunOutput, Table};

const MODULE: &str = "nonlinear_wing";

/// Oscillation period of the prescribed motion, if any part oscillates.
pub fn motion_period(shape: &WingShape) -> Option<f64> {
    let mut omegas = vec![];
    for o in [shape.heave, shape.incidence] {
        if o.amplitude != 0.0 && o.omega != 0.0 {
            omegas.push(o.omega.abs());
        }
    }
    if let Camber::CircularArc { curvature } = &shape.camber {
        if curvature.amplitude != 0.0 && curvature.omega != 0.0 {
            omegas.push(curvature.omega.abs());
        }
    }
    omegas.into_iter().reduce(f64::min).map(|w| 2.0 * PI / w)
}

pub struct WingRun {
    pub solver: WingSolver,
    /// (t, u, v) per probe
    pub probes: Vec<Vec<(f64, f64, f64)>>,
    /// (t, streamwise wake impulse about the mean heave line)
    pub wake_momentum: Vec<(f64, f64)>,
    /// shed circulations that changed after shedding
    pub mutated: usize,
    pub snapshots: Table,
}

pub fn march(block: &WingBlock) -> Result<WingRun> {
    let mut solver = WingSolver::new(block.shape.clone(), block.solver.clone()).within(MODULE)?;
    let u = block.shape.speed;
    let y_mean = block.shape.heave.mean;
    let rho = block.solver.rho;
    let mut probes = vec![vec![]; block.probes.len()];
    let mut wake_momentum = vec![];
    let mut frozen: Vec<u64> = vec![];
    let mut mutated = 0;
    let mut snapshots = Table::new(&["step", "t", "label", "x", "y", "circulation"]);
    for step in 1..=block.steps {
        solver.step().within(MODULE)?;
        let st = &solver.state;
        let els = &st.wake.elements;
        mutated += frozen
            .iter()
            .zip(els)
            .filter(|(g, e)| **g != e.circulation.to_bits())
            .count();
        frozen.extend(els[frozen.len().min(els.len())..].iter().map(|e| e.circulation.to_bits()));
        for (k, p) in block.probes.iter().enumerate() {
            let z = match p.frame {
                ProbeFrame::Tunnel => Complex64::new(p.x - u * st.t, p.y),
                ProbeFrame::Fluid => Complex64::new(p.x, p.y),
            };
            let w = solver.velocity_at(z);
            probes[k].push((st.t, w.re, -w.im));
        }
        let total: f64 = els.iter().map(|e| e.circulation).sum();
        wake_momentum.push((st.t, wake_impulse(&st.wake, rho).re + rho * total * y_mean));
        let stride = block.snapshot_stride;
        if (stride > 0 && step % stride == 0) || step == block.steps {
            for e in els {
                snapshots.push(vec![
                    step.to_string(),
                    num(st.t),
                    num(e.label),
                    num(e.z.re),
                    num(e.z.im),
                    num(e.circulation),
                ]);
            }
        }
    }
    Ok(WingRun {
        solver,
        probes,
        wake_momentum,
        mutated,
        snapshots,
    })
}

/// Sup-norm error of the cumulative wake circulation against the Wagner
/// solution on a grid refined `refine` times, after `skip` steps, relative to
/// the largest oracle value in that range.
pub fn wagner_error(solver: &WingSolver, skip: usize, refine: usize) -> Result<f64> {
    let st = &solver.state;
    let times: Vec<f64> = st.history.iter().map(|h| h.t).collect();
    let mut fine = vec![times[0]];
    for w in times.windows(2) {
        for j in 1..=refine {
            fine.push(w[0] + (w[1] - w[0]) * j as f64 / refine as f64);
        }
    }
    let shape = solver.shape.clone();
    let oracle = wagner_solve(&fine, &|t| linear_quasisteady_circulation(&shape, t), shape.speed).within(MODULE)?;
    let t_skip = skip as f64 * solver.config.dt;
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for (i, entry) in st.ledger.iter().enumerate() {
        if entry.t <= t_skip + 1e-12 {
            continue;
        }
        let o = oracle.wake_circulation((i + 1) * refine);
        err = err.max((entry.gamma_w - o).abs());
        scale = scale.max(o.abs());
    }
    Ok(if scale > 0.0 { err / scale } else { err })
}

fn mean_of(samples: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = samples.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

fn last_period_mean(forces: &[ForceSample], speed: f64, period: Option<f64>) -> Option<swimwake_core::nonlinear_wing::MeanPerformance> {
    let period = period?;
    let t1 = forces.last()?.t;
    if t1 < period || forces[0].t > t1 - period + 0.1 * period {
        return None;
    }
    mean_performance(forces, speed, t1 - period, t1).ok()
}

pub(crate) fn run(cfg: &ScenarioConfig, block: &WingBlock, out: &mut RunOutput) -> Result<Vec<CheckResult>> {
    let run = march(block)?;
    let solver = &run.solver;
    let st = &solver.state;
    let shape = &block.shape;
    let period = motion_period(shape);
    let forces = solver.forces();

    let mut ledger = Table::new(&["t", "gamma0", "gamma1", "gamma_w", "residual"]);
    for l in &st.ledger {
        ledger.push_nums(&[l.t, l.gamma0, l.gamma1, l.gamma_w, l.residual]);
    }
    out.table("ledger.csv", &ledger)?;
    let mut ft = Table::new(&["t", "fx", "fz", "torque", "pivot_moment", "power"]);
    for f in &forces {
        ft.push_nums(&[f.t, f.fx, f.fz, f.torque, f.pivot_moment, f.power]);
    }
    out.table("forces.csv", &ft)?;
    let mut pt = Table::new(&["t", "probe", "x", "y", "u", "v"]);
    for (k, series) in run.probes.iter().enumerate() {
        let p = &block.probes[k];
        for &(t, u, v) in series {
            pt.push(vec![num(t), k.to_string(), num(p.x), num(p.y), num(u), num(v)]);
        }
    }
    out.table("probes.csv", &pt)?;
    out.table("wake_snapshots.csv", &run.snapshots)?;
    let mut bt = Table::new(&["label", "x", "y", "circulation"]);
    for k in 0..st.bound.labels.len() {
        bt.push_nums(&[st.bound.labels[k], st.bound.z[k].re, st.bound.z[k].im, st.bound.circulation(k)]);
    }
    out.table("bound.csv", &bt)?;

    let max_residual = st.ledger.iter().map(|l| l.residual).fold(0.0, f64::max);
    let mean = last_period_mean(&forces, shape.speed, period);
    let mut summary = Table::new(&[
        "steps",
        "t",
        "n_bound",
        "wake_elements",
        "wake_circulation",
        "max_kelvin_residual",
        "mean_thrust",
        "mean_lift",
        "mean_power",
        "efficiency",
        "diagnostics",
    ]);
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    summary.push(vec![
        st.step.to_string(),
        num(st.t),
        solver.bound_count().to_string(),
        st.wake.elements.len().to_string(),
        num(st.wake.total_circulation()),
        num(max_residual),
        opt(mean.map(|m| m.thrust)),
        opt(mean.map(|m| m.lift)),
        opt(mean.map(|m| m.power)),
        opt(mean.map(|m| m.efficiency)),
        st.diagnostics.len().to_string(),
    ]);
    out.table("summary.csv", &summary)?;

    let mut checks = vec![
        CheckResult::new(
            "kelvin",
            max_residual <= cfg.tolerances.kelvin,
            max_residual,
            cfg.tolerances.kelvin,
            format!("max |G0 + G1 + Gw| over {} ledger entries", st.ledger.len()),
        ),
        CheckResult::new(
            "helmholtz",
            run.mutated == 0,
            run.mutated as f64,
            0.0,
            "shed circulations compared bitwise after every step",
        ),
    ];
    for c in &block.checks {
        checks.push(wing_check(c, &run, block, period, &forces)?);
    }
    Ok(checks)
}

fn wing_check(c: &WingCheck, run: &WingRun, block: &WingBlock, period: Option<f64>, forces: &[ForceSample]) -> Result<CheckResult> {
    let st = &run.solver.state;
    let shape = &block.shape;
    Ok(match *c {
        WingCheck::PairSpacing { target, tol, min_cluster } => {
            let cl = clusters(&st.wake, min_cluster);
            match second_pair_spacing(&cl) {
                Some(d) => {
                    let chords = 0.5 * d;
                    CheckResult::new(
                        "pair-spacing",
                        (chords - target).abs() <= tol,
                        chords,
                        tol,
                        format!("{} clusters; target {target} chord", cl.len()),
                    )
                }
                None => CheckResult::new("pair-spacing", false, f64::NAN, tol, format!("only {} clusters", cl.len())),
            }
        }
        WingCheck::ProbeSignature { probe } => {
            let series = &run.probes[probe];
            let Some(t_per) = period else {
                return Ok(CheckResult::new("probe-signature", false, f64::NAN, f64::NAN, "motion is not periodic"));
            };
            let whole = (st.t / t_per + 1e-9).floor();
            if whole < 2.0 {
                return Ok(CheckResult::new("probe-signature", false, f64::NAN, f64::NAN, "run shorter than two periods"));
            }
            let first = mean_of(series.iter().filter(|s| s.0 <= 0.5 * t_per + 1e-12).map(|s| s.1));
            let later = mean_of(
                series
                    .iter()
                    .filter(|s| s.0 > t_per + 1e-12 && s.0 <= whole * t_per + 1e-12)
                    .map(|s| s.1),
            );
            CheckResult::new(
                "probe-signature",
                first < 0.0 && later > 0.0,
                first,
                0.0,
                format!("first half-period mean u = {first:e}; mean over periods 2..{whole} = {later:e}"),
            )
        }
        WingCheck::Wagner { tol, skip, refine } => {
            let e = wagner_error(&run.solver, skip, refine)?;
            CheckResult::new(
                "wagner",
                e <= tol,
                e,
                tol,
                format!("relative sup-norm wake circulation error after step {skip}, oracle refined x{refine}"),
            )
        }
        WingCheck::SteadyLift { tol, chords } => {
            let t_star = 2.0 * chords / shape.speed;
            let alpha = shape.incidence.mean;
            let oracle = 2.0 * PI * alpha * block.solver.rho * shape.speed * shape.speed;
            match forces.iter().min_by(|a, b| (a.t - t_star).abs().total_cmp(&(b.t - t_star).abs())) {
                Some(f) if (f.t - t_star).abs() <= block.solver.dt => {
                    let ratio = f.fz / oracle;
                    CheckResult::new(
                        "steady-lift",
                        (ratio - 1.0).abs() <= tol,
                        (ratio - 1.0).abs(),
                        tol,
                        format!("F_z / (2 pi alpha rho U^2) = {ratio} at t = {}", f.t),
                    )
                }
                _ => CheckResult::new("steady-lift", false, f64::NAN, tol, format!("no force sample near t = {t_star}")),
            }
        }
        WingCheck::WakeStreet {
            orientation,
            min_cluster,
            min_pairs,
        } => {
            let cl = clusters(&st.wake, min_cluster);
            // drop the starting vortex and the cluster still attached to the edge
            let body = if cl.len() > 2 { &cl[1..cl.len() - 1] } else { &cl[..0] };
            if body.len() < 2 * min_pairs {
                return Ok(CheckResult::new(
                    "wake-street",
                    false,
                    body.len() as f64,
                    f64::NAN,
                    format!("{} free clusters, need {}", body.len(), 2 * min_pairs),
                ));
            }
            let y_bar = mean_of(body.iter().map(|c| c.centroid.im));
            let offsets: Vec<f64> = body.iter().map(|c| c.centroid.im - y_bar).collect();
            let alternating = offsets.windows(2).all(|w| w[0] * w[1] < 0.0);
            // counter-clockwise is negative in the clockwise-positive convention
            let ccw_above = body.iter().zip(&offsets).filter(|(c, _)| c.circulation < 0.0).all(|(_, d)| *d > 0.0);
            let ccw_below = body.iter().zip(&offsets).filter(|(c, _)| c.circulation < 0.0).all(|(_, d)| *d < 0.0);
            let oriented = match orientation {
                StreetOrientation::Reverse => ccw_above,
                StreetOrientation::Karman => ccw_below,
                StreetOrientation::Any => ccw_above || ccw_below,
            };
            CheckResult::new(
                "wake-street",
                alternating && oriented,
                body.len() as f64,
                f64::NAN,
                format!(
                    "alternating = {alternating}, counter-clockwise row {}",
                    if ccw_above { "above" } else if ccw_below { "below" } else { "mixed" }
                ),
            )
        }
        WingCheck::MomentumRegime => {
            let mean = last_period_mean(forces, shape.speed, period);
            let (Some(t_per), Some(mean)) = (period, mean) else {
                return Ok(CheckResult::new("momentum-regime", false, f64::NAN, f64::NAN, "needs at least one full period of forces"));
            };
            let (t1, i1) = *run.wake_momentum.last().expect("at least one step");
            let (t0, i0) = *run
                .wake_momentum
                .iter()
                .min_by(|a, b| (a.0 - (t1 - t_per)).abs().total_cmp(&(b.0 - (t1 - t_per)).abs()))
                .expect("at least one step");
            let flux = (i1 - i0) / (t1 - t0);
            CheckResult::new(
                "momentum-regime",
                flux * mean.thrust > 0.0,
                flux,
                f64::NAN,
                format!(
                    "wake momentum gain rate {flux:e} over the last period; mean thrust {:e} ({})",
                    mean.thrust,
                    if mean.thrust > 0.0 { "thrust" } else { "drag" }
                ),
            )
        }
    })
}
