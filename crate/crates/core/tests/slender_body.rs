use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use swimwake_core::kinematics::*;
use swimwake_core::quadrature::periodic_mean;
use swimwake_core::singular_kernels::cross_flow_solution;
use swimwake_core::slender_body::*;
use swimwake_core::Error;

fn traveling(a: f64, k: f64, c: f64, length: f64) -> PlateMotion {
    PlateMotion::TravelingWave {
        amplitude: a,
        wavenumber: k,
        speed: c,
        phase: 0.3,
        length,
    }
}

/// h = s x, a static inclined plate.
fn inclined(s: f64) -> PlateMotion {
    PlateMotion::AnalyticWaveform {
        modes: vec![WaveMode {
            amplitude: 1.0,
            wavenumber: 0.0,
            omega: 0.0,
            phase: PI / 2.0,
            envelope: Envelope::Polynomial {
                coefficients: vec![0.0, s],
            },
        }],
        length: 1.0,
    }
}

#[test]
fn mean_performance_examples() {
    let r = mean_performance(1.0, 0.8, 1.0, 0.005).unwrap();
    assert!((r.power - 8.0e-4).abs() < 1e-15);
    assert!((r.energy - 8.0e-5).abs() < 1e-16);
    assert!((r.thrust - 9.0e-4).abs() < 1e-15);
    assert!((r.efficiency.unwrap() - 0.9).abs() < 1e-12);
    let r = mean_performance(2.0, 0.9, 1.0, 0.01).unwrap();
    assert!((r.efficiency.unwrap() - 0.95).abs() < 1e-12);
    assert!(r.conservation_residual() < 1e-14);
    assert!(matches!(mean_performance(1.0, 0.5, -1.0, 0.1), Err(Error::Domain { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn efficiency_is_amplitude_invariant(m in 0.1..5.0f64, u in 0.0..2.0f64, c in 0.1..2.0f64, s in 1e-4..1.0f64, scale in 0.01..100.0f64) {
        let a = mean_performance(m, u, c, s).unwrap();
        let b = mean_performance(m, u, c, s * scale).unwrap();
        prop_assert!((a.efficiency.unwrap() - b.efficiency.unwrap()).abs() < 1e-15);
        prop_assert!((b.power - scale * a.power).abs() <= 1e-12 * b.power.abs());
    }

    #[test]
    fn ribbon_energy_identity(
        amps in prop::collection::vec(-0.1..0.1f64, 3),
        ks in prop::collection::vec(0.0..10.0f64, 3),
        ws in prop::collection::vec(0.0..8.0f64, 3),
        u in 0.1..2.0f64,
        t in 0.0..10.0f64,
    ) {
        let modes = (0..3).map(|i| WaveMode {
            amplitude: amps[i], wavenumber: ks[i], omega: ws[i], phase: i as f64,
            envelope: Envelope::Polynomial { coefficients: vec![0.2, 0.5, 0.3] },
        }).collect();
        let motion = PlateMotion::AnalyticWaveform { modes, length: 1.0 };
        let rec = instantaneous_pet(&Planform::ribbon(1.0, 0.1), &motion, u, t).unwrap();
        prop_assert!(rec.conservation_residual() < 1e-10);
    }
}

#[test]
fn transverse_velocity_cases() {
    let (a, k, c, u) = (0.1, 3.0, 1.2, 0.7);
    let m = traveling(a, k, c, 1.0);
    for x in [0.1, 0.5, 0.9] {
        let t = 0.4;
        let gp = a * k * (k * (x - c * t) + 0.3).cos();
        assert!((transverse_velocity(&m, u, x, t).unwrap() - (u - c) * gp).abs() < 1e-14);
        assert!(transverse_velocity(&traveling(a, k, c, 1.0), c, x, t).unwrap().abs() < 1e-15);
    }
    let rigid = PlateMotion::AnalyticWaveform {
        modes: vec![],
        length: 1.0,
    };
    assert_eq!(transverse_velocity(&rigid, u, 0.5, 1.0).unwrap(), 0.0);
}

#[test]
fn heaving_ribbon_lift() {
    // h = -cos(w t)/w so that W = sin(w t)
    let w = 2.5;
    let motion = PlateMotion::AnalyticWaveform {
        modes: vec![WaveMode {
            amplitude: 1.0 / w,
            wavenumber: 0.0,
            omega: -w,
            phase: -PI / 2.0,
            envelope: Envelope::Uniform,
        }],
        length: 1.0,
    };
    let p = Planform::ribbon(1.0, 0.1);
    let m = PI * 0.01;
    for t in [0.0, 0.3, 1.7] {
        let load = section_lift(&p, &motion, 0.8, 0.4, t).unwrap();
        assert_eq!(load.regime, Regime::Ribbon);
        assert!((load.lift + m * w * (w * t).cos()).abs() < 1e-14);
    }
    assert!(matches!(section_lift(&p, &motion, 0.8, 1.0, 0.0), Err(Error::Domain { .. })));
}

#[test]
fn lift_continuous_across_max_span() {
    let p = Planform {
        profile: Profile::Sampled {
            x: vec![0.0, 0.3, 0.7, 1.0],
            b: vec![0.02, 0.1, 0.06, 0.05],
        },
        x_e: Some(0.3),
        x_c: Some(0.9),
        ..Planform::ribbon(1.0, 0.1)
    };
    p.validate().unwrap();
    assert_eq!(p.profile.eval(0.3).1, 0.0);
    let m = traveling(0.05, 6.0, 1.0, 1.0);
    let a = section_lift_in(Regime::Anterior, &p, &m, 0.7, 0.3, 0.9).unwrap();
    let b = section_lift_in(Regime::TrailingSideEdge, &p, &m, 0.7, 0.3, 0.9).unwrap();
    assert!((a.lift - b.lift).abs() < 1e-15);
    let left = section_lift(&p, &m, 0.7, 0.3 - 1e-9, 0.9).unwrap();
    let right = section_lift(&p, &m, 0.7, 0.3 + 1e-9, 0.9).unwrap();
    assert_eq!((left.regime, right.regime), (Regime::Anterior, Regime::TrailingSideEdge));
    assert!((left.lift - right.lift).abs() < 1e-7);
}

#[test]
fn tapered_steady_section_regimes_differ_by_transport_term() {
    let (b0, l, u, s) = (0.1, 1.0, 0.8, 0.05);
    let p = Planform {
        profile: Profile::Linear {
            b0,
            slope: -b0 / (2.0 * l),
        },
        ..Planform::ribbon(l, b0)
    };
    let m = inclined(s);
    let w0 = u * s;
    for x in [0.2, 0.6] {
        let (_, dm) = p.added_mass(x);
        let ant = section_lift_in(Regime::Anterior, &p, &m, u, x, 1.0).unwrap();
        let tse = section_lift_in(Regime::TrailingSideEdge, &p, &m, u, x, 1.0).unwrap();
        assert!((ant.lift + u * w0 * dm).abs() < 1e-15);
        assert!(ant.lift.abs() > 1e-4);
        assert_eq!(tse.lift, 0.0);
    }
}

#[test]
fn abrupt_fin_wake_starts_at_the_fin_edge() {
    let p = Planform {
        profile: Profile::Sampled {
            x: vec![0.0, 0.3, 0.5, 1.0],
            b: vec![0.02, 0.1, 0.08, 0.04],
        },
        x_e: Some(0.3),
        x_s: Some(0.5),
        x_c: Some(0.9),
        ..Planform::ribbon(1.0, 0.1)
    };
    p.validate().unwrap();
    let m = traveling(0.05, 6.0, 1.0, 1.0);
    let (u, t) = (0.7, 1.3);
    // at x_s the frozen segment carries W(x_s, t) and has zero added mass
    let fin = section_lift_in(Regime::AbruptFinWake, &p, &m, u, 0.5, t).unwrap();
    let tse = section_lift_in(Regime::TrailingSideEdge, &p, &m, u, 0.5, t).unwrap();
    assert!((fin.momentum - tse.momentum).abs() < 1e-16);
    let (_, dmt) = p.fin_wake_mass(0.5);
    let ws = transverse_velocity(&m, u, 0.5, t).unwrap();
    let anterior = section_lift_in(Regime::Anterior, &p, &m, u, 0.5, t).unwrap();
    assert!((fin.lift - (anterior.lift - u * dmt * ws)).abs() < 1e-15);
    assert!(matches!(section_lift(&p, &m, u, 0.8, 0.1), Err(Error::NotYetShed { .. })));
}

#[test]
fn perfect_feathering_gives_zero_pet() {
    let c = 1.1;
    let rec = instantaneous_pet(&Planform::ribbon(1.0, 0.1), &traveling(0.1, 4.0, c, 1.0), c, 0.7).unwrap();
    assert!(rec.power.abs() < 1e-15 && rec.energy.abs() < 1e-15 && rec.thrust.abs() < 1e-15);
}

#[test]
fn body_integral_means_with_pointed_nose() {
    // pointed nose (m(0) = 0) so the only end contribution is the tail
    let p = Planform {
        profile: Profile::Linear { b0: 0.0, slope: 0.1 },
        ..Planform::ribbon(1.0, 0.1)
    };
    for &(a, k, c, u) in &[(0.05, 6.0, 1.0, 0.8), (0.02, 9.0, 1.3, 0.5), (0.1, 3.0, 0.9, 1.1)] {
        let m = traveling(a, k, c, 1.0);
        let period = 2.0 * PI / (k * c);
        let mut acc = [0.0; 3];
        let n = 48;
        for i in 0..n {
            let r = instantaneous_pet(&p, &m, u, i as f64 * period / n as f64).unwrap();
            acc[0] += r.power / n as f64;
            acc[1] += r.energy / n as f64;
            acc[2] += r.thrust / n as f64;
        }
        let (mt, _) = p.added_mass(1.0);
        let closed = mean_performance(mt, u, c, 0.5 * (a * k).powi(2)).unwrap();
        // the spanwise growth term U m' W adds U/2 int m' <W^2> dx to the
        // mean energy; for a uniform wave that doubles the tail value
        let energy = 2.0 * closed.energy;
        let thrust = (closed.power - energy) / u;
        for (got, want) in acc.iter().zip([closed.power, energy, thrust]) {
            assert!((got - want).abs() < 1e-6 * want.abs(), "{got} vs {want}");
        }
    }
}

#[test]
fn bound_sheet_fields() {
    let p = Planform::ribbon(1.0, 0.2);
    let m = traveling(0.1, 5.0, 1.0, 1.0);
    let (u, t, x) = (0.6, 0.4, 0.45);
    let j = m.jet(x, t);
    let wx = j.hxt + u * j.hxx;
    let (g1, g2) = bound_vortex_sheet(&p, &m, u, x, 0.0, t).unwrap();
    assert_eq!(g1, 0.0);
    assert!((g2 + 2.0 * wx * 0.2).abs() < 1e-15);
    for y in [0.05, 0.15, 0.199] {
        let (a1, a2) = bound_vortex_sheet(&p, &m, u, x, y, t).unwrap();
        let (b1, b2) = bound_vortex_sheet(&p, &m, u, x, -y, t).unwrap();
        assert_eq!(a1, -b1);
        assert_eq!(a2, b2);
        let (dx, dy) = bound_vortex_sheet_divergence_terms(&p, &m, u, x, y, t).unwrap();
        assert!((dx + dy).abs() < 1e-8);
        // FD cross-check of the analytic derivative terms
        let h = 1e-6;
        let fx = (bound_vortex_sheet(&p, &m, u, x + h, y, t).unwrap().0 - bound_vortex_sheet(&p, &m, u, x - h, y, t).unwrap().0) / (2.0 * h);
        let fy = (bound_vortex_sheet(&p, &m, u, x, y + h * 1e-2, t).unwrap().1 - bound_vortex_sheet(&p, &m, u, x, y - h * 1e-2, t).unwrap().1) / (2e-2 * h);
        assert!((fx - dx).abs() < 1e-5 * (1.0 + dx.abs()));
        assert!((fy - dy).abs() < 1e-4 * (1.0 + dy.abs()));
    }
    assert!(matches!(bound_vortex_sheet(&p, &m, u, x, 0.2, t), Err(Error::Domain { .. })));
    let uniform = inclined(0.1);
    let (_, g2) = bound_vortex_sheet(&p, &uniform, u, x, 0.1, t).unwrap();
    assert_eq!(g2, 0.0);
}

#[test]
fn circulation_of_ribbon_sheet() {
    let p = Planform::ribbon(1.0, 0.2);
    let m = traveling(0.1, 5.0, 1.0, 1.0);
    let (u, t) = (0.6, 3.0);
    let g2 = ribbon_gamma2(&p, &m, u, t);
    assert_eq!(circulation(&g2, 0.0, 1.0 + u * t).unwrap(), 0.0);
    assert_eq!(circulation(&g2, 1.0 + u * t + 0.1, 1.0 + u * t).unwrap(), 0.0);
    for x in [0.3, 0.8, 1.0] {
        let w = |xx: f64| transverse_velocity(&m, u, xx, t).unwrap();
        let want = -2.0 * 0.2 * (w(x) - w(0.0));
        assert!((circulation(&g2, x, 1.0 + u * t).unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn reactive_force_vanishes_for_rigid_glide() {
    let bb = Backbone {
        length: 1.0,
        head: HeadMotion {
            vx: -0.8,
            ..Default::default()
        },
        angle: AngleField::default(),
    };
    let f = reactive_force(&bb, &Planform::ribbon(1.0, 0.1), 1.0).unwrap();
    assert_eq!(f, [0.0, 0.0]);
}

fn swimmer(a: f64, k: f64, w: f64, u: f64) -> Backbone {
    // theta = a cos(k s - w t) with the head heaving as (a/k) sin(-w t):
    // the midline is h = (a/k) sin(k x - w t) to first order
    Backbone {
        length: 1.0,
        head: HeadMotion {
            vx: -u,
            heave: a / k,
            heave_omega: w,
            heave_phase: PI,
            ..Default::default()
        },
        angle: AngleField {
            slope: a,
            wavenumber: k,
            omega: w,
            phase: PI / 2.0,
            ..Default::default()
        },
    }
}

#[test]
fn momentum_rate_matches_time_differences() {
    let bb = swimmer(0.3, 6.0, 5.0, 0.7);
    let p = Planform::ribbon(1.0, 0.1);
    let h = 1e-5;
    for t in [0.4, 1.1] {
        let a = lateral_momentum(&bb, &p, t - h);
        let b = lateral_momentum(&bb, &p, t + h);
        let r = lateral_momentum_rate(&bb, &p, t);
        for i in 0..2 {
            let fd = (b[i] - a[i]) / (2.0 * h);
            assert!((fd - r[i]).abs() < 1e-6 * (1.0 + r[i].abs()), "{fd} vs {}", r[i]);
        }
    }
}

#[test]
fn small_amplitude_thrust_matches_closed_form() {
    let (k, w, u) = (2.0 * PI, 2.0 * PI, 0.8);
    let eps = 1e-2;
    let a = eps * k;
    let bb = swimmer(a, k, w, u);
    let p = Planform::ribbon(1.0, 0.1);
    let period = 2.0 * PI / w;
    let thrust = periodic_mean(period, 64, 2.0, |t| -reactive_force(&bb, &p, t).unwrap()[0]);
    let (m, _) = p.added_mass(1.0);
    let closed = mean_performance(m, u, w / k, 0.5 * a * a).unwrap().thrust;
    assert!((thrust - closed).abs() < 1e-2 * closed, "{thrust} vs {closed}");
}

#[test]
fn caudal_superposition_limits() {
    let fin_upwash = |y: f64| 0.3 + 0.1 * y;
    assert!(matches!(caudal_superposition(None, &fin_upwash, 0.5, 64), Err(Error::Sequencing(_))));

    let zero = |_: Complex64| Complex64::new(0.0, 0.0);
    let c = caudal_superposition(Some(&zero), &fin_upwash, 0.5, 64).unwrap();
    let anterior = cross_flow_solution(&fin_upwash, 0.5, 64).unwrap();
    for z in [Complex64::new(0.1, 0.2), Complex64::new(-0.7, 0.05), Complex64::new(2.0, -1.0)] {
        assert!((c.chi(z) - anterior.chi(z)).norm() < 1e-12);
    }

    // a wider upstream strip with uniform upwash W0 carries sidewash W0 across the fin
    let w0 = 0.3;
    let wide = cross_flow_solution(&|_| w0, 0.8, 64).unwrap();
    let same = move |z: Complex64| wide.chi(z);
    let c = caudal_superposition(Some(&same), &|_| w0, 0.5, 64).unwrap();
    assert!(c.fin.momentum(1.0).abs() < 1e-10);

    let opposed = cross_flow_solution(&|_| -w0, 0.8, 64).unwrap();
    let anti = move |z: Complex64| opposed.chi(z);
    let c_anti = caudal_superposition(Some(&anti), &|_| w0, 0.5, 64).unwrap();
    let alone = cross_flow_solution(&|_| w0, 0.5, 64).unwrap();
    assert!(c_anti.fin.momentum(1.0).abs() > alone.momentum(1.0).abs());
    assert!((c_anti.fin.momentum(1.0) - 2.0 * alone.momentum(1.0)).abs() < 1e-9);
}

#[test]
fn tail_point_means_match_closed_form() {
    let m = 0.3;
    for i in 0..10 {
        let (a, k, c, u) = (0.01 + 0.01 * i as f64, 2.0 + i as f64, 0.6 + 0.1 * i as f64, 0.3 + 0.07 * i as f64);
        let motion = traveling(a, k, c, 1.0);
        let period = 2.0 * PI / (k * c);
        let jet = |t: f64| motion.jet(1.0, t);
        let p = m * u * periodic_mean(period, 64, 0.0, |t| {
            let j = jet(t);
            j.ht * (j.ht + u * j.hx)
        });
        let e = 0.5 * m * u * periodic_mean(period, 64, 0.0, |t| {
            let j = jet(t);
            (j.ht + u * j.hx).powi(2)
        });
        let th = 0.5 * m * periodic_mean(period, 64, 0.0, |t| {
            let j = jet(t);
            j.ht * j.ht - u * u * j.hx * j.hx
        });
        let closed = mean_performance(m, u, c, 0.5 * (a * k).powi(2)).unwrap();
        assert!((p - closed.power).abs() < 1e-6 * closed.power.abs());
        assert!((e - closed.energy).abs() < 1e-6 * closed.energy.abs());
        assert!((th - closed.thrust).abs() < 1e-6 * closed.thrust.abs());
    }
}
