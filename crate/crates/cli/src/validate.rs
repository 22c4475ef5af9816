//! Built-in validation suites over the core invariants.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swimwake_core::energetics::{
    angular_frequency, cost_exponent, nondim, scaling_residual, velocity_scaling_exponent, DragLaw, FluidEnvironment,
};
use swimwake_core::kinematics::{Envelope, Oscillation, PlateMotion, WaveMode, WingShape};
use swimwake_core::nonlinear_wing::SolverConfig;
use swimwake_core::singular_kernels::{invert_upwash, pv_integral, upwash_from_vorticity, ChebGrid, Endpoint};
use swimwake_core::slender_body::{instantaneous_pet, Planform, Profile};

use crate::config::{Tolerances, WingBlock};
use crate::error::{CliError, Context, Result};
use crate::output::{num, CheckResult, Table};
use crate::run::wing;

pub const SUITES: [&str; 5] = ["conservation", "operators", "kelvin", "oracles", "scaling"];

#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: String,
    pub rows: Vec<SuiteRow>,
}

impl Report {
    fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.rows.push(SuiteRow {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        });
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["check", "residual", "tolerance", "passed"]);
        for r in &self.rows {
            t.push(vec![r.name.clone(), num(r.residual), num(r.tolerance), r.passed.to_string()]);
        }
        t
    }

    pub fn checks(&self) -> Vec<CheckResult> {
        self.rows
            .iter()
            .map(|r| CheckResult::new(&format!("{}: {}", self.suite, r.name), r.passed, r.residual, r.tolerance, ""))
            .collect()
    }

    pub fn render(&self) -> String {
        let w = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(5).max(5);
        let mut s = format!("{:<w$}  {:>12}  {:>9}  result\n", "check", "residual", "tolerance");
        for r in &self.rows {
            s += &format!(
                "{:<w$}  {:>12.3e}  {:>9.1e}  {}\n",
                r.name,
                r.residual,
                r.tolerance,
                if r.passed { "pass" } else { "FAIL" }
            );
        }
        let n = self.rows.iter().filter(|r| r.passed).count();
        s += &format!("{}: {n}/{} passed\n", self.suite, self.rows.len());
        s
    }
}

pub fn validate(suite: &str, seed: u64, tol: &Tolerances) -> Result<Report> {
    let mut report = Report {
        suite: suite.to_string(),
        rows: vec![],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        "conservation" => conservation(&mut report, &mut rng, tol.conservation)?,
        "operators" => operators(&mut report, &mut rng, tol.round_trip)?,
        "kelvin" => kelvin(&mut report, tol.kelvin)?,
        "oracles" => oracles(&mut report)?,
        "scaling" => scaling(&mut report)?,
        other => {
            return Err(CliError::Usage(format!("unknown suite `{other}`; expected one of {SUITES:?}")));
        }
    }
    Ok(report)
}

fn random_motion(rng: &mut ChaCha8Rng) -> (Planform, PlateMotion, f64) {
    let planform = Planform {
        profile: Profile::Linear {
            b0: rng.gen_range(0.0..0.1),
            slope: rng.gen_range(0.0..0.2),
        },
        ..Planform::ribbon(1.0, 0.1)
    };
    let modes = (0..rng.gen_range(1..=3))
        .map(|_| WaveMode {
            amplitude: rng.gen_range(0.0..0.1),
            wavenumber: rng.gen_range(0.5..8.0),
            omega: rng.gen_range(0.5..8.0),
            phase: rng.gen_range(0.0..2.0 * PI),
            envelope: Envelope::Polynomial {
                coefficients: vec![rng.gen_range(0.2..1.0), rng.gen_range(-0.5..0.5), rng.gen_range(0.0..0.5)],
            },
        })
        .collect();
    (planform, PlateMotion::AnalyticWaveform { modes, length: 1.0 }, rng.gen_range(0.1..2.0))
}

fn conservation(report: &mut Report, rng: &mut ChaCha8Rng, tol: f64) -> Result<()> {
    for i in 0..50 {
        let (planform, motion, speed) = random_motion(rng);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let t = rng.gen_range(0.0..10.0);
            let rec = instantaneous_pet(&planform, &motion, speed, t).within("slender_body")?;
            worst = worst.max(rec.conservation_residual());
        }
        report.push(format!("motion {i:02}"), worst, tol);
    }
    Ok(())
}

fn simpson(g: &dyn Fn(f64) -> f64, a: f64, c: f64, n: usize) -> f64 {
    let h = (c - a) / n as f64;
    let mut acc = g(a) + g(c);
    for i in 1..n {
        acc += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn operators(report: &mut Report, rng: &mut ChaCha8Rng, tol: f64) -> Result<()> {
    let grid = ChebGrid::new(256, 1.0).within("singular_kernels")?;
    let check = ChebGrid::new(301, 1.0).within("singular_kernels")?;
    for case in 0..12 {
        let degree = if case == 0 { 64 } else { rng.gen_range(0..=64) };
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w = |y: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c);
        let field = invert_upwash(&grid, &w, 1e-9).within("singular_kernels")?;
        let dens = |y: f64| field.density(y);
        let scale: f64 = coeffs.iter().map(|c| c.abs()).sum();
        let worst = (0..41)
            .map(|k| {
                let y = -0.975 + 0.04875 * k as f64;
                (upwash_from_vorticity(&check, &dens, Endpoint::InverseSqrt, y) - w(y)).abs()
            })
            .fold(0.0, f64::max);
        report.push(format!("round trip, degree {degree}"), worst / scale, tol);
    }
    // principal value against a folded Simpson rule
    let f = |s: f64| (1.3 * s).exp() + s * s;
    let g = ChebGrid::new(32, 1.0).within("singular_kernels")?;
    let mut worst = 0.0f64;
    for y in [-0.9f64, -0.31, 0.0, 0.47, 0.8] {
        let d = (1.0 - y).min(y + 1.0);
        let folded = simpson(&|u: f64| (f(y + u) - f(y - u)) / u, 1e-12, d, 20_000);
        let rest = if 1.0 - y > y + 1.0 {
            simpson(&|s: f64| f(s) / (s - y), y + d, 1.0, 20_000)
        } else {
            simpson(&|s: f64| f(s) / (s - y), -1.0, y - d, 20_000)
        };
        worst = worst.max((pv_integral(&g, &f, Endpoint::Bounded, y) - folded - rest).abs());
    }
    report.push("principal value vs folded quadrature", worst, tol);
    Ok(())
}

fn kelvin(report: &mut Report, tol: f64) -> Result<()> {
    let cases = [
        ("heave", WingShape::heave_pitch(1.0, 0.2, 0.0, 2.0, 0.0)),
        ("pitch about quarter chord", WingShape::heave_pitch(1.0, 0.0, 5f64.to_radians(), 4.0, -0.5)),
        (
            "impulsive start",
            WingShape {
                incidence: Oscillation::steady(4f64.to_radians()),
                ..WingShape::flat(1.0)
            },
        ),
    ];
    for (name, shape) in cases {
        let block = WingBlock {
            shape,
            solver: SolverConfig {
                dt: 0.05,
                kelvin_tol: 1.0,
                ..Default::default()
            },
            steps: 200,
            snapshot_stride: 0,
            probes: vec![],
            checks: vec![],
        };
        let run = wing::march(&block)?;
        let worst = run.solver.state.ledger.iter().map(|l| l.residual).fold(0.0, f64::max);
        report.push(format!("{name}: ledger"), worst, tol);
        report.push(format!("{name}: shed strengths altered"), run.mutated as f64, 0.0);
    }
    Ok(())
}

/// Heave h0 cos(2t) with h0 = 1e-3 chord, checked against the Wagner solution.
pub fn wagner_heave_block() -> WingBlock {
    WingBlock {
        shape: WingShape::heave_pitch(1.0, 0.002, 0.0, 2.0, 0.0),
        solver: SolverConfig {
            dt: 0.05,
            ..Default::default()
        },
        steps: 500,
        snapshot_stride: 0,
        probes: vec![],
        checks: vec![],
    }
}

fn oracles(report: &mut Report) -> Result<()> {
    let run = wing::march(&wagner_heave_block())?;
    let e = wing::wagner_error(&run.solver, 10, 16)?;
    report.push("heave 1e-3 chord vs Wagner, 500 steps", e, 0.02);
    Ok(())
}

fn scaling(report: &mut Report) -> Result<()> {
    let mut worst = 0.0f64;
    let mut lam = 0.0f64;
    for k in 0..=40 {
        let b = 0.62 + 0.01 * k as f64;
        for law in DragLaw::ALL {
            let beta = velocity_scaling_exponent(b, law).within("energetics")?;
            worst = worst.max(scaling_residual(b, beta, law).abs());
        }
        let beta = velocity_scaling_exponent(b, DragLaw::Laminar).within("energetics")?;
        lam = lam.max((cost_exponent(b, beta) - (0.8 - 0.6 * b)).abs());
    }
    report.push("beta self-consistency", worst, 1e-12);
    report.push("laminar gamma = 0.8 - 0.6 b", lam, 1e-12);
    let beta = velocity_scaling_exponent(0.890, DragLaw::Laminar).within("energetics")?;
    report.push("gamma(b = 0.890, laminar) = 0.266", (cost_exponent(0.890, beta) - 0.266).abs(), 1e-12);
    let air = FluidEnvironment::new(1.2, 1.5e-5).within("energetics")?;
    let n = nondim(4.0, 0.0075, angular_frequency(20.0), &air).within("energetics")?;
    report.push("locust Re = 2000", (n.reynolds - 2000.0).abs() / 2000.0, 1e-12);
    report.push("locust St = 0.236", (n.strouhal - 0.236).abs(), 0.005);
    report.push("locust Stokes layer = 0.48 mm", (n.stokes_thickness * 1e3 - 0.48).abs(), 0.02);
    Ok(())
}
