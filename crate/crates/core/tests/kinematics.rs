use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use swimwake_core::kinematics::*;
use swimwake_core::Error;

fn wave(a: f64, k: f64, c: f64) -> PlateMotion {
    PlateMotion::TravelingWave {
        amplitude: a,
        wavenumber: k,
        speed: c,
        phase: 0.0,
        length: 1.0,
    }
}

#[test]
fn traveling_wave_at_origin() {
    let spec = MotionSpec::Plate(wave(0.1, 1.0, 1.0));
    let (h, hx, ht) = eval_plate_motion(&spec, 0.0, 0.0).unwrap();
    assert_eq!(h, 0.0);
    assert!((hx - 0.1).abs() < 1e-15);
    assert!((ht + 0.1).abs() < 1e-15);
}

#[test]
fn plate_domain_and_kind_errors() {
    let spec = MotionSpec::Plate(wave(0.1, 1.0, 1.0));
    assert!(matches!(eval_plate_motion(&spec, 1.5, 0.0), Err(Error::Domain { .. })));
    assert!(matches!(eval_plate_motion(&spec, 0.5, -1.0), Err(Error::Domain { .. })));
    let wing = MotionSpec::Wing(WingShape::flat(1.0));
    assert!(matches!(eval_plate_motion(&wing, 0.0, 0.0), Err(Error::KindMismatch { .. })));
}

fn waveform(modes: Vec<(f64, f64, f64, f64, Vec<f64>)>) -> PlateMotion {
    PlateMotion::AnalyticWaveform {
        modes: modes
            .into_iter()
            .map(|(amplitude, wavenumber, omega, phase, coefficients)| WaveMode {
                amplitude,
                wavenumber,
                omega,
                phase,
                envelope: Envelope::Polynomial { coefficients },
            })
            .collect(),
        length: 1.0,
    }
}

fn mode_strategy() -> impl Strategy<Value = (f64, f64, f64, f64, Vec<f64>)> {
    (
        -0.2..0.2f64,
        0.0..8.0f64,
        0.0..6.0f64,
        0.0..6.3f64,
        prop::collection::vec(-1.0..1.0f64, 1..4),
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn plate_derivatives_match_central_differences(
        modes in prop::collection::vec(mode_strategy(), 1..4),
        x in 0.01..0.99f64,
        t in 0.01..5.0f64,
    ) {
        let m = waveform(modes);
        let h = 1e-5;
        let j = m.jet(x, t);
        let fdx = (m.jet(x + h, t).h - m.jet(x - h, t).h) / (2.0 * h);
        let fdt = (m.jet(x, t + h).h - m.jet(x, t - h).h) / (2.0 * h);
        let fdxx = (m.jet(x + h, t).hx - m.jet(x - h, t).hx) / (2.0 * h);
        let fdxt = (m.jet(x, t + h).hx - m.jet(x, t - h).hx) / (2.0 * h);
        let fdtt = (m.jet(x, t + h).ht - m.jet(x, t - h).ht) / (2.0 * h);
        prop_assert!(rel(j.hx, fdx) < 1e-6);
        prop_assert!(rel(j.ht, fdt) < 1e-6);
        prop_assert!(rel(j.hxx, fdxx) < 1e-6);
        prop_assert!(rel(j.hxt, fdxt) < 1e-6);
        prop_assert!(rel(j.htt, fdtt) < 1e-6);
    }

    #[test]
    fn traveling_wave_is_a_function_of_x_minus_ct(
        a in 0.01..0.3f64, k in 0.1..10.0f64, c in 0.1..3.0f64,
        x in 0.0..1.0f64, t in 0.0..10.0f64,
    ) {
        let m = wave(a, k, c);
        let (_, hx, ht) = eval_plate_motion(&MotionSpec::Plate(m.clone()), x, t).unwrap();
        prop_assert!((ht + c * hx).abs() < 1e-12 * (1.0 + (c * hx).abs()));
        let j = m.jet(x, t);
        prop_assert!((j.htt - c * c * j.hxx).abs() < 1e-11 * (1.0 + j.htt.abs()));
    }

    #[test]
    fn backbone_is_inextensible_and_consistent(
        slope in 0.0..0.8f64, k in 0.5..8.0f64, w in 0.5..6.0f64,
        rate in -0.5..0.5f64, xi in 0.05..0.95f64, t in 0.0..4.0f64,
    ) {
        let bb = Backbone {
            length: 1.0,
            head: HeadMotion { vx: -0.7, heave: 0.05, heave_omega: 2.0, ..Default::default() },
            angle: AngleField {
                rotation_rate: rate, slope, wavenumber: k, omega: w,
                ramp: Ramp { duration: 0.5 }, ..Default::default()
            },
        };
        let st = backbone_state(&bb, xi, t).unwrap();
        let h = 1e-5;
        let pa = bb.state(xi - h, t).position;
        let pb = bb.state(xi + h, t).position;
        let speed = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt() / (2.0 * h);
        prop_assert!((speed - 1.0).abs() < 1e-8);
        let ta = bb.state(xi, t - h).position;
        let tb = bb.state(xi, t + h).position;
        for i in 0..2 {
            let fd = (tb[i] - ta[i]) / (2.0 * h);
            prop_assert!(rel(st.velocity[i], fd) < 1e-6);
            let va = bb.state(xi, t - h).velocity[i];
            let vb = bb.state(xi, t + h).velocity[i];
            prop_assert!(rel(st.acceleration[i], (vb - va) / (2.0 * h)) < 1e-6);
        }
        let dot = st.tangent[0] * st.normal[0] + st.tangent[1] * st.normal[1];
        prop_assert!(dot.abs() < 1e-15);
        let u = st.velocity[0] * st.tangent[0] + st.velocity[1] * st.tangent[1];
        prop_assert!((u - st.u).abs() < 1e-14);
    }

    #[test]
    fn wing_points_are_inextensible_and_differentiate_correctly(
        k0 in -0.3..0.3f64, k1 in 0.0..0.3f64, h in 0.0..0.3f64, a in 0.0..0.3f64,
        xi in -0.98..0.98f64, t in 0.0..5.0f64, pivot in -1.0..1.0f64,
    ) {
        let shape = WingShape {
            speed: 1.0,
            heave: Oscillation::harmonic(h, 2.0, 0.3),
            incidence: Oscillation { mean: 0.05, amplitude: a, omega: 2.0, phase: 1.0 },
            pivot,
            camber: Camber::CircularArc { curvature: Oscillation { mean: k0, amplitude: k1, omega: 3.0, phase: 0.0 } },
        };
        let p = wing_kinematics(&shape, xi, t).unwrap();
        let d = 1e-5;
        let zx = (shape.point(xi + d, t).z - shape.point(xi - d, t).z) / (2.0 * d);
        prop_assert!((zx.norm() - 1.0).abs() < 1e-8);
        prop_assert!((zx - p.z_xi).norm() < 1e-6);
        let zt = (shape.point(xi, t + d).z - shape.point(xi, t - d).z) / (2.0 * d);
        prop_assert!((zt.conj() - p.w).norm() < 1e-6 * (1.0 + p.w.norm()));
        let q = p.w * p.z_xi;
        prop_assert!((q - Complex64::new(p.us, -p.un)).norm() < 1e-14);
    }
}

#[test]
fn rigid_glide_backbone() {
    let v = 0.6;
    let bb = Backbone {
        length: 1.0,
        head: HeadMotion {
            vx: -v,
            ..Default::default()
        },
        angle: AngleField::default(),
    };
    let st = backbone_state(&bb, 0.4, 2.0).unwrap();
    assert_eq!(st.tangent, [1.0, 0.0]);
    assert_eq!(st.normal, [-0.0, 1.0]);
    assert!((st.u + v).abs() < 1e-15);
    assert!(st.w.abs() < 1e-15);
}

#[test]
fn rigid_rotation_backbone() {
    let w0 = 0.7;
    let bb = Backbone {
        length: 1.0,
        head: HeadMotion::default(),
        angle: AngleField {
            rotation_rate: w0,
            ..Default::default()
        },
    };
    for xi in [0.2, 0.5, 1.0] {
        let st = backbone_state(&bb, xi, 1.3).unwrap();
        assert!((st.w.abs() - w0 * xi).abs() < 1e-13);
        assert!(st.u.abs() < 1e-13);
    }
}

#[test]
fn backbone_starts_straight() {
    let bb = Backbone {
        length: 2.0,
        head: HeadMotion::default(),
        angle: AngleField {
            slope: 0.5,
            wavenumber: 3.0,
            omega: 2.0,
            phase: 0.4,
            ramp: Ramp { duration: 1.0 },
            ..Default::default()
        },
    };
    for xi in [0.0, 0.7, 2.0] {
        let p = bb.state(xi, 0.0).position;
        assert!((p[0] - xi).abs() < 1e-14 && p[1].abs() < 1e-14);
    }
    assert!(matches!(backbone_state(&bb, 2.5, 0.0), Err(Error::Domain { .. })));
}

#[test]
fn small_backbone_wave_matches_plate_upwash() {
    // theta = a sin(k s - w t), head translating at -U:
    // h(x, t) = (a/k) [cos(w t) - cos(k x - w t)] to first order in a
    let (a, k, w, u) = (1e-3, 4.0, 3.0, 0.8);
    let bb = Backbone {
        length: 1.0,
        head: HeadMotion {
            vx: -u,
            ..Default::default()
        },
        angle: AngleField {
            slope: a,
            wavenumber: k,
            omega: w,
            ..Default::default()
        },
    };
    let plate = MotionSpec::Plate(PlateMotion::AnalyticWaveform {
        modes: vec![
            WaveMode {
                amplitude: a / k,
                wavenumber: 0.0,
                omega: -w,
                phase: PI / 2.0,
                envelope: Envelope::Uniform,
            },
            WaveMode {
                amplitude: a / k,
                wavenumber: k,
                omega: w,
                phase: -PI / 2.0,
                envelope: Envelope::Uniform,
            },
        ],
        length: 1.0,
    });
    for &(xi, t) in &[(0.3, 0.2), (0.7, 1.1), (1.0, 2.5)] {
        let st = backbone_state(&bb, xi, t).unwrap();
        let (_, hx, ht) = eval_plate_motion(&plate, xi, t).unwrap();
        let w_plate = ht + u * hx;
        assert!((st.w - w_plate).abs() < 1e-5, "xi={xi} t={t}: {} vs {w_plate}", st.w);
    }
}

#[test]
fn pure_heave_wing() {
    let (h0, om) = (0.1, 2.0);
    let shape = WingShape {
        speed: 0.0,
        heave: Oscillation::harmonic(h0, om, 0.0),
        ..WingShape::flat(0.0)
    };
    let p = wing_kinematics(&shape, 0.3, 0.0).unwrap();
    assert!((p.w - Complex64::new(0.0, -h0 * om)).norm() < 1e-15);
    assert!(p.us.abs() < 1e-15);
    assert!((p.un - h0 * om).abs() < 1e-15);
}

#[test]
fn pure_pitch_wing() {
    // theta = alpha sin(omega t), i.e. incidence -alpha sin(omega t)
    let (alpha, om, axis) = (0.05, 3.0, -0.5);
    let shape = WingShape {
        incidence: Oscillation::harmonic(alpha, om, PI),
        pivot: axis,
        ..WingShape::flat(0.0)
    };
    for xi in [-1.0, -0.2, 0.4, 1.0] {
        let p = wing_kinematics(&shape, xi, 0.0).unwrap();
        assert!((p.un - alpha * om * (xi - axis)).abs() < 1e-15);
    }
}

#[test]
fn heave_pitch_wing_is_the_two_mode_plate() {
    let (h, a, om, b) = (0.02, 0.03, 2.0, 0.4);
    let wing = WingShape::heave_pitch(0.0, h, a, om, b);
    let plate = PlateMotion::HeavePitch {
        heave: h,
        pitch: a,
        omega: om,
        axis: b,
    };
    for t in [0.0, 0.4, 1.3] {
        for x in [-1.0, 0.0, 0.7] {
            let z = wing.point(x, t).z;
            let theta = a * (om * t).sin();
            let exact = h * (om * t).cos() + (x - b) * theta.sin();
            assert!((z.im - exact).abs() < 1e-15);
            let linear = plate.jet(x, t).h;
            assert!((z.im - linear).abs() <= (x - b).abs() * a.powi(3) / 6.0 + 1e-15);
        }
    }
}

#[test]
fn chord_matches_camber_frame() {
    let flat = WingShape::flat(1.0);
    assert!((flat.chord(0.7) - 2.0).abs() < 1e-14);
    let kappa = 0.3;
    let arc = WingShape {
        camber: Camber::CircularArc {
            curvature: Oscillation::steady(kappa),
        },
        ..WingShape::flat(1.0)
    };
    assert!((arc.chord(0.0) - 2.0 * kappa.sin() / kappa).abs() < 1e-13);
}

#[test]
fn porpoise_pivot_is_behind_three_quarter_chord() {
    let b = axis_from_chord_fraction(0.793);
    assert!((b - 0.586).abs() < 1e-12);
    assert!(b > axis_from_chord_fraction(0.75));
}

#[test]
fn feathering() {
    assert!((feathering_parameter(1.0, 0.2, 0.1, 2.0).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(feathering_parameter(0.0, 0.2, 0.1, 2.0).unwrap(), 0.0);
    assert!(matches!(feathering_parameter(1.0, 0.2, 0.0, 2.0), Err(Error::DivisionDomain(_))));
    let (u, c, om) = (0.8, 1.1, 3.0);
    for h in [0.01, 0.1, 0.5] {
        let alpha = om / c * h;
        assert!((feathering_parameter(u, alpha, h, om).unwrap() - u / c).abs() < 1e-14);
    }
}

#[test]
fn tail_slope_mean_square_is_time_invariant() {
    let m = wave(0.1, 5.0, 1.2);
    let period = 2.0 * PI / (5.0 * 1.2);
    let ms = |t0: f64| {
        swimwake_core::quadrature::periodic_mean(period, 64, t0, |t| m.jet(1.0, t).hx.powi(2))
    };
    assert!((ms(0.0) - ms(0.37)).abs() < 1e-15);
    assert!((ms(0.0) - 0.5 * (0.1f64 * 5.0).powi(2)).abs() < 1e-14);
}
