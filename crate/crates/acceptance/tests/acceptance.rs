//! Acceptance criteria 1-13, one test each. Every test prints a single
//! `criterion NN PASS|FAIL` line (visible with `--nocapture`) and fails when
//! the criterion is not met.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swimwake::config::{ScenarioConfig, ScenarioKind, Tolerances};
use swimwake::{run_scenario, validate, RunManifest};
use swimwake_core::energetics::*;
use swimwake_core::kinematics::{Envelope, PlateMotion, WaveMode, WingShape};
use swimwake_core::nonlinear_wing::{mean_performance as wing_means, SolverConfig, WingSolver};
use swimwake_core::slender_body::{instantaneous_pet, mean_performance, Planform, Profile};

fn report(n: u32, passed: bool, detail: String) {
    println!("criterion {n:02} {}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {n} failed: {detail}");
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn out_root() -> &'static Path {
    static ROOT: OnceLock<tempfile::TempDir> = OnceLock::new();
    ROOT.get_or_init(|| tempfile::tempdir().unwrap()).path()
}

fn run_file(file: &str) -> RunManifest {
    let mut cfg = ScenarioConfig::load(&scenarios_dir().join(file)).unwrap();
    cfg.output_dir = Some(out_root().join(&cfg.name));
    run_scenario(&cfg).unwrap()
}

macro_rules! cached_run {
    ($name:ident, $file:expr) => {
        fn $name() -> &'static RunManifest {
            static RUN: OnceLock<RunManifest> = OnceLock::new();
            RUN.get_or_init(|| run_file($file))
        }
    };
}

cached_run!(lai, "lai_heave.json");
cached_run!(koochesfahani, "koochesfahani_pitch.json");
cached_run!(impulsive, "impulsive_start.json");
cached_run!(wagner, "wagner_heave.json");

fn check_line(m: &RunManifest, name: &str) -> (bool, String) {
    match m.check(name) {
        Some(c) => (c.passed, format!("{name} = {} ({})", c.value.map_or("-".into(), |v| format!("{v:.4e}")), c.detail)),
        None => (false, format!("{name} missing")),
    }
}

#[test]
fn criterion_01_efficiency_law() {
    let mut worst = 0.0f64;
    for (u, want) in [(0.8, 0.9), (0.9, 0.95)] {
        let r = mean_performance(0.3, u, 1.0, 0.02).unwrap();
        worst = worst.max((r.efficiency.unwrap() - want).abs());
        // the thrust, power and speed recombine to the same value
        worst = worst.max((r.thrust * u / r.power - want).abs());
    }
    let m = run_file("swim_traveling_wave.json");
    let swim = m.check("efficiency").map_or(false, |c| c.passed);
    report(1, worst < 1e-12 && swim, format!("max |eta - (c+U)/2c| = {worst:e}; swim scenario efficiency check {swim}"));
}

#[test]
fn criterion_02_energy_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let planform = Planform {
            profile: Profile::Linear {
                b0: rng.gen_range(0.0..0.1),
                slope: rng.gen_range(0.0..0.2),
            },
            ..Planform::ribbon(1.0, 0.1)
        };
        let modes = (0..rng.gen_range(1..=3))
            .map(|_| WaveMode {
                amplitude: rng.gen_range(0.001..0.1),
                wavenumber: rng.gen_range(0.5..8.0),
                omega: rng.gen_range(0.5..8.0),
                phase: rng.gen_range(0.0..2.0 * PI),
                envelope: Envelope::Polynomial {
                    coefficients: vec![rng.gen_range(0.2..1.0), rng.gen_range(-0.5..0.5), rng.gen_range(0.0..0.5)],
                },
            })
            .collect();
        let motion = PlateMotion::AnalyticWaveform { modes, length: 1.0 };
        let u = rng.gen_range(0.1..2.0);
        for _ in 0..100 {
            let r = instantaneous_pet(&planform, &motion, u, rng.gen_range(0.0..20.0)).unwrap();
            let tu = r.thrust * u;
            worst = worst.max((r.power - (r.energy + tu)).abs() / (r.power.abs() + r.energy.abs() + tu.abs()));
        }
    }
    report(2, worst < 1e-10, format!("50 motions x 100 times, max relative |P - (E + TU)| = {worst:e}"));
}

#[test]
fn criterion_03_closed_form_means() {
    let m = 0.3;
    let samples = 256;
    let mut worst = 0.0f64;
    for i in 0..10 {
        let (a, k, c, u) = (0.01 + 0.01 * i as f64, 2.0 + i as f64, 0.6 + 0.1 * i as f64, 0.3 + 0.07 * i as f64);
        let motion = PlateMotion::TravelingWave {
            amplitude: a,
            wavenumber: k,
            speed: c,
            phase: 0.3,
            length: 1.0,
        };
        let period = 2.0 * PI / (k * c);
        // tail-point integrands, averaged by the periodic trapezoid rule
        let (mut p, mut e, mut t) = (0.0, 0.0, 0.0);
        for s in 0..samples {
            let j = motion.jet(1.0, period * s as f64 / samples as f64);
            let w = j.ht + u * j.hx;
            p += m * u * w * j.ht;
            e += 0.5 * m * u * w * w;
            t += 0.5 * m * (j.ht * j.ht - u * u * j.hx * j.hx);
        }
        let n = samples as f64;
        let closed = mean_performance(m, u, c, 0.5 * (a * k).powi(2)).unwrap();
        for (num, cf) in [(p / n, closed.power), (e / n, closed.energy), (t / n, closed.thrust)] {
            worst = worst.max((num - cf).abs() / cf.abs());
        }
    }
    report(3, worst < 1e-6, format!("10 traveling waves, max relative deviation {worst:e}"));
}

#[test]
fn criterion_04_operator_round_trip() {
    let r = validate("operators", 4, &Tolerances::default()).unwrap();
    let worst = r.rows.iter().map(|x| x.residual).fold(0.0, f64::max);
    report(4, r.passed(), format!("{} cases at N = 256 incl. degree 64 and the PV oracle; max residual {worst:e} (tol 1e-8)", r.rows.len()));
}

#[test]
fn criterion_05_kelvin_ledger() {
    let mut lines = vec![];
    let mut ok = true;
    let mut files: Vec<PathBuf> = std::fs::read_dir(scenarios_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    for f in files {
        let cfg = ScenarioConfig::load(&f).unwrap();
        if cfg.kind != ScenarioKind::Wing {
            continue;
        }
        let m = match f.file_name().unwrap().to_str().unwrap() {
            "lai_heave.json" => lai(),
            "koochesfahani_pitch.json" => koochesfahani(),
            "impulsive_start.json" => impulsive(),
            "wagner_heave.json" => wagner(),
            other => Box::leak(Box::new(run_file(other))),
        };
        for name in ["kelvin", "helmholtz"] {
            let (p, _) = check_line(m, name);
            ok &= p;
        }
        let k = m.check("kelvin").and_then(|c| c.value).unwrap_or(f64::NAN);
        ok &= k < 1e-10;
        lines.push(format!("{} {k:.1e}", cfg.name));
    }
    report(5, ok && !lines.is_empty(), format!("max ledger residual per scenario: {}; shed strengths unchanged", lines.join(", ")));
}

#[test]
fn criterion_06_wagner_limit() {
    let (ok, line) = check_line(wagner(), "wagner");
    report(6, ok, line);
}

#[test]
fn criterion_07_lai_heaving_case() {
    let m = lai();
    let mut ok = true;
    let mut parts = vec![];
    for name in ["pair-spacing", "probe-signature", "wake-street"] {
        let (p, l) = check_line(m, name);
        ok &= p;
        parts.push(l);
    }
    report(7, ok, parts.join("; "));
}

#[test]
fn criterion_08_koochesfahani_pitching_case() {
    let m = koochesfahani();
    let mut ok = true;
    let mut parts = vec![];
    for name in ["wake-street", "momentum-regime"] {
        let (p, l) = check_line(m, name);
        ok &= p;
        parts.push(l);
    }
    report(8, ok, parts.join("; "));
}

#[test]
fn criterion_09_steady_thin_airfoil_limit() {
    let (ok, line) = check_line(impulsive(), "steady-lift");
    report(9, ok, line);
}

/// Bessel functions of integer order from their integral representations.
fn bessel_jy(n: i32, x: f64) -> (f64, f64) {
    let m = 4000;
    let h = PI / m as f64;
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, h: f64, m: usize| {
        let mut s = f(a) + f(a + h * m as f64);
        for i in 1..m {
            s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let nf = n as f64;
    let j = simpson(&|t| (nf * t - x * t.sin()).cos(), 0.0, h, m) / PI;
    let y1 = simpson(&|t| (x * t.sin() - nf * t).sin(), 0.0, h, m) / PI;
    let upper = 12.0;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let y2 = simpson(&|t| ((nf * t).exp() + sign * (-nf * t).exp()) * (-x * t.sinh()).exp(), 0.0, upper / 8000.0, 8000) / PI;
    (j, y1 - y2)
}

/// Theodorsen C(k) = F + i G.
fn theodorsen(k: f64) -> (f64, f64) {
    let (j0, y0) = bessel_jy(0, k);
    let (j1, y1) = bessel_jy(1, k);
    // C = H1 / (H1 + i H0) with H = J - i Y
    let (a, b) = (j1, -y1);
    let (c, d) = (j1 + y0, j0 - y1);
    let den = c * c + d * d;
    ((a * c + b * d) / den, (b * c - a * d) / den)
}

fn mean_over_last_two(shape: WingShape, sigma: f64) -> swimwake_core::nonlinear_wing::MeanPerformance {
    let period = 2.0 * PI / sigma;
    let cfg = SolverConfig {
        dt: period / 64.0,
        ..Default::default()
    };
    let mut s = WingSolver::new(shape, cfg).unwrap();
    s.run(64 * 6).unwrap();
    let f = s.forces();
    let t1 = f.last().unwrap().t;
    wing_means(&f, 1.0, t1 - 2.0 * period, t1).unwrap()
}

#[test]
fn criterion_10_oscillating_foil_trends() {
    let sigmas = [0.1, 0.25, 0.5, 1.0, 2.0, 4.0];
    let mut heave = vec![];
    let mut garrick = vec![];
    for &s in &sigmas {
        heave.push(mean_over_last_two(WingShape::heave_pitch(1.0, 0.02, 0.0, s, 0.0), s).efficiency);
        let (f, g) = theodorsen(s);
        garrick.push((f * f + g * g) / f);
    }
    let monotone = heave.windows(2).all(|w| w[1] < w[0]);
    let near_one = heave[0] > 0.8;
    let at4 = heave[5];
    let oracle_trend = garrick.windows(2).all(|w| w[1] < w[0]) && (garrick[5] - 0.5).abs() < 0.01;

    let mut thrust = vec![];
    for k in 0..9 {
        let s = 1.0 + 0.25 * k as f64;
        thrust.push((s, mean_over_last_two(WingShape::heave_pitch(1.0, 0.0, 1f64.to_radians(), s, 0.0), s).thrust));
    }
    let changes: Vec<f64> = thrust
        .windows(2)
        .filter(|w| w[0].1 <= 0.0 && w[1].1 > 0.0)
        .map(|w| w[0].0 - w[0].1 * (w[1].0 - w[0].0) / (w[1].1 - w[0].1))
        .collect();
    let single = changes.len() == 1 && thrust.iter().all(|(s, t)| (*t > 0.0) == (*s > changes[0]));
    let crossing = changes.first().copied().unwrap_or(f64::NAN);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    report(
        10,
        monotone && near_one && (at4 - 0.5).abs() <= 0.1 && oracle_trend && single && (1.5..=2.1).contains(&crossing),
        format!(
            "heave eta {} (Garrick {}), eta(4) = {at4:.3}; pitch thrust changes sign once at sigma = {crossing:.3}",
            fmt(&heave),
            fmt(&garrick)
        ),
    );
}

#[test]
fn criterion_11_nondimensional_numbers() {
    let air = FluidEnvironment::new(1.2, 1.5e-5).unwrap();
    let n = nondim(4.0, 0.0075, angular_frequency(20.0), &air).unwrap();
    let ok = (n.reynolds - 2000.0).abs() <= 1e-9
        && (n.strouhal - 0.236).abs() <= 0.005
        && (n.stokes_thickness * 1e3 - 0.48).abs() <= 0.02;
    report(
        11,
        ok,
        format!("Re = {}, St = {:.4}, Stokes layer = {:.4} mm", n.reynolds, n.strouhal, n.stokes_thickness * 1e3),
    );
}

#[test]
fn criterion_12_scaling_arithmetic() {
    let mut worst = 0.0f64;
    let mut lam = 0.0f64;
    for k in 0..=400 {
        let b = 0.61 + 0.001 * k as f64;
        for law in DragLaw::ALL {
            let beta = velocity_scaling_exponent(b, law).unwrap();
            worst = worst.max(scaling_residual(b, beta, law).abs());
        }
        let beta = velocity_scaling_exponent(b, DragLaw::Laminar).unwrap();
        lam = lam.max((cost_exponent(b, beta) - (0.8 - 0.6 * b)).abs());
    }
    // gamma is affine in b for the laminar law: recover its coefficients
    let g = |b: f64| cost_exponent(b, velocity_scaling_exponent(b, DragLaw::Laminar).unwrap());
    let slope = (g(1.0) - g(0.7)) / 0.3;
    let coeffs = ((slope + 0.6).abs(), (g(1.0) - slope - 0.8).abs());
    report(
        12,
        worst < 1e-12 && lam < 1e-12 && coeffs.0 < 1e-9 && coeffs.1 < 1e-9,
        format!("max residual {worst:e}; max |gamma - (0.8 - 0.6 b)| = {lam:e}"),
    );
}

#[test]
fn criterion_13_dataset_reproduction() {
    // dataset-conditional: the shipped data are a labeled reconstruction
    let m = run_file("salmon_scaling.json");
    let mut parts = vec![];
    for c in &m.checks {
        parts.push(format!("{} {} {}", c.name, c.value.map_or("-".into(), |v| format!("{v:.3}")), if c.passed { "ok" } else { "off" }));
    }
    report(13, m.passed(), format!("reconstructed dataset: {}", parts.join("; ")));
}
