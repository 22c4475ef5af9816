//! Prescribed motions: small-amplitude plate waveforms, large-amplitude
//! backbones parameterized by the midline angle, and flexible-wing shape
//! functions. Every evaluator returns exact derivatives.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_domain, Error, Result};
use crate::quadrature::GaussLegendre;

type C64 = Complex64;

/// Value of a plate displacement h(x, t) with all partials up to second order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PlateJet {
    pub h: f64,
    pub hx: f64,
    pub ht: f64,
    pub hxx: f64,
    pub hxt: f64,
    pub htt: f64,
}

impl PlateJet {
    fn add(&mut self, o: &PlateJet) {
        self.h += o.h;
        self.hx += o.hx;
        self.ht += o.ht;
        self.hxx += o.hxx;
        self.hxt += o.hxt;
        self.htt += o.htt;
    }
}

/// Spatial amplitude envelope E(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Envelope {
    Uniform,
    /// c0 + c1 x + c2 x^2 + ...
    Polynomial { coefficients: Vec<f64> },
    /// 3s^2 - 2s^3 with s = x/ramp, held at 1 beyond the ramp.
    Smoothstep { ramp: f64 },
}

impl Default for Envelope {
    fn default() -> Self {
        Envelope::Uniform
    }
}

impl Envelope {
    /// (E, E', E'')
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        match self {
            Envelope::Uniform => (1.0, 0.0, 0.0),
            Envelope::Polynomial { coefficients } => {
                let (mut e, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &c in coefficients.iter().rev() {
                    e = e * x + c;
                }
                for (j, &c) in coefficients.iter().enumerate().skip(1) {
                    let jf = j as f64;
                    d1 += jf * c * x.powi(j as i32 - 1);
                    if j >= 2 {
                        d2 += jf * (jf - 1.0) * c * x.powi(j as i32 - 2);
                    }
                }
                (e, d1, d2)
            }
            Envelope::Smoothstep { ramp } => smoothstep(x, *ramp),
        }
    }
}

fn smoothstep(x: f64, ramp: f64) -> (f64, f64, f64) {
    if x <= 0.0 {
        (0.0, 0.0, 0.0)
    } else if x >= ramp {
        (1.0, 0.0, 0.0)
    } else {
        let s = x / ramp;
        (
            s * s * (3.0 - 2.0 * s),
            6.0 * s * (1.0 - s) / ramp,
            (6.0 - 12.0 * s) / (ramp * ramp),
        )
    }
}

/// One term E(x) A sin(k x - omega t + phase).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveMode {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub omega: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub envelope: Envelope,
}

impl WaveMode {
    pub fn jet(&self, x: f64, t: f64) -> PlateJet {
        let (a, k, w) = (self.amplitude, self.wavenumber, self.omega);
        let psi = k * x - w * t + self.phase;
        let (s, c) = psi.sin_cos();
        let g = a * s;
        let gx = a * k * c;
        let gt = -a * w * c;
        let gxx = -a * k * k * s;
        let gxt = a * k * w * s;
        let gtt = -a * w * w * s;
        let (e, e1, e2) = self.envelope.eval(x);
        PlateJet {
            h: e * g,
            hx: e1 * g + e * gx,
            ht: e * gt,
            hxx: e2 * g + 2.0 * e1 * gx + e * gxx,
            hxt: e1 * gt + e * gxt,
            htt: e * gtt,
        }
    }
}

/// Small-amplitude plate displacement z = h(x, t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlateMotion {
    /// h = A sin(k (x - c t) + phase)
    TravelingWave {
        amplitude: f64,
        wavenumber: f64,
        speed: f64,
        #[serde(default)]
        phase: f64,
        length: f64,
    },
    /// Superposition of enveloped modes.
    AnalyticWaveform { modes: Vec<WaveMode>, length: f64 },
    /// h = h0 cos(omega t) + alpha (x - b) sin(omega t) on -1 < x < 1.
    HeavePitch {
        heave: f64,
        pitch: f64,
        omega: f64,
        axis: f64,
    },
}

impl PlateMotion {
    pub fn span(&self) -> (f64, f64) {
        match self {
            PlateMotion::TravelingWave { length, .. } => (0.0, *length),
            PlateMotion::AnalyticWaveform { length, .. } => (0.0, *length),
            PlateMotion::HeavePitch { .. } => (-1.0, 1.0),
        }
    }

    /// Full second-order jet without domain checks.
    pub fn jet(&self, x: f64, t: f64) -> PlateJet {
        match self {
            PlateMotion::TravelingWave {
                amplitude,
                wavenumber,
                speed,
                phase,
                ..
            } => WaveMode {
                amplitude: *amplitude,
                wavenumber: *wavenumber,
                omega: wavenumber * speed,
                phase: *phase,
                envelope: Envelope::Uniform,
            }
            .jet(x, t),
            PlateMotion::AnalyticWaveform { modes, .. } => {
                let mut j = PlateJet::default();
                for m in modes {
                    j.add(&m.jet(x, t));
                }
                j
            }
            PlateMotion::HeavePitch {
                heave,
                pitch,
                omega,
                axis,
            } => {
                let (s, c) = (omega * t).sin_cos();
                let w = *omega;
                let d = x - axis;
                PlateJet {
                    h: heave * c + pitch * d * s,
                    hx: pitch * s,
                    ht: -heave * w * s + pitch * d * w * c,
                    hxx: 0.0,
                    hxt: pitch * w * c,
                    htt: -w * w * (heave * c + pitch * d * s),
                }
            }
        }
    }

    /// Second-order jet with the domain checks of `eval_plate_motion`.
    pub fn checked_jet(&self, x: f64, t: f64) -> Result<PlateJet> {
        let (a, b) = self.span();
        let tol = 1e-12 * (b - a).abs().max(1.0);
        check_domain("x", x, a - tol, b + tol)?;
        check_domain("t", t, 0.0, f64::INFINITY)?;
        Ok(self.jet(x, t))
    }

    /// Wave speed of the traveling-wave kind.
    pub fn wave_speed(&self) -> Option<f64> {
        match self {
            PlateMotion::TravelingWave { speed, .. } => Some(*speed),
            _ => None,
        }
    }
}

/// Any prescribed motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MotionSpec {
    Plate(PlateMotion),
    Backbone(Backbone),
    Wing(WingShape),
}

impl MotionSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MotionSpec::Plate(PlateMotion::TravelingWave { .. }) => "traveling-wave",
            MotionSpec::Plate(PlateMotion::AnalyticWaveform { .. }) => "analytic-waveform",
            MotionSpec::Plate(PlateMotion::HeavePitch { .. }) => "heave-pitch",
            MotionSpec::Backbone(_) => "backbone",
            MotionSpec::Wing(_) => "flexible-wing",
        }
    }

    pub fn as_plate(&self) -> Result<&PlateMotion> {
        match self {
            MotionSpec::Plate(p) => Ok(p),
            other => Err(Error::KindMismatch {
                expected: "plate waveform",
                got: other.kind_name(),
            }),
        }
    }
}

/// (h, h_x, h_t) of a plate waveform.
pub fn eval_plate_motion(spec: &MotionSpec, x: f64, t: f64) -> Result<(f64, f64, f64)> {
    let j = spec.as_plate()?.checked_jet(x, t)?;
    Ok((j.h, j.hx, j.ht))
}

/// Proportional feathering U alpha / (h omega).
pub fn feathering_parameter(speed: f64, alpha: f64, heave: f64, omega: f64) -> Result<f64> {
    let ho = heave * omega;
    if ho == 0.0 {
        return Err(Error::DivisionDomain("h*omega"));
    }
    Ok(speed * alpha / ho)
}

/// Pitch-axis coordinate on -1 < x < 1 for a point given as a fraction of the
/// chord measured from the leading edge.
pub fn axis_from_chord_fraction(fraction: f64) -> f64 {
    2.0 * fraction - 1.0
}

// ---------------------------------------------------------------------------
// Backbone

/// C1 start-up ramp: 0 before t = 0, 1 after t = duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ramp {
    pub duration: f64,
}

impl Ramp {
    /// (r, r', r'')
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        if self.duration <= 0.0 {
            return (1.0, 0.0, 0.0);
        }
        smoothstep(t, self.duration)
    }
}

/// Head (xi = 0) trajectory: x0 + vx t, z0 + vz t + a sin(omega t + phase).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeadMotion {
    pub x0: f64,
    pub z0: f64,
    pub vx: f64,
    pub vz: f64,
    pub heave: f64,
    pub heave_omega: f64,
    pub heave_phase: f64,
}

impl HeadMotion {
    /// position, velocity, acceleration
    fn eval(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let (s, c) = (self.heave_omega * t + self.heave_phase).sin_cos();
        let w = self.heave_omega;
        (
            [self.x0 + self.vx * t, self.z0 + self.vz * t + self.heave * s],
            [self.vx, self.vz + self.heave * w * c],
            [0.0, -self.heave * w * w * s],
        )
    }
}

/// Midline angle theta(s, t) = rate t + r(t) A(s) sin(k s - omega t + phase),
/// A(s) = slope * E(s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AngleField {
    pub rotation_rate: f64,
    pub slope: f64,
    pub wavenumber: f64,
    pub omega: f64,
    pub phase: f64,
    pub envelope: Envelope,
    pub ramp: Ramp,
}

impl Default for AngleField {
    fn default() -> Self {
        Self {
            rotation_rate: 0.0,
            slope: 0.0,
            wavenumber: 0.0,
            omega: 0.0,
            phase: 0.0,
            envelope: Envelope::Uniform,
            ramp: Ramp { duration: 0.0 },
        }
    }
}

impl AngleField {
    /// (theta, theta_s, theta_t, theta_tt)
    pub fn eval(&self, s: f64, t: f64) -> (f64, f64, f64, f64) {
        let (r, r1, r2) = self.ramp.eval(t);
        let (e, e1, _) = self.envelope.eval(s);
        let psi = self.wavenumber * s - self.omega * t + self.phase;
        let (sn, cs) = psi.sin_cos();
        let a = self.slope * e;
        let a1 = self.slope * e1;
        let w = self.omega;
        let g = a * sn;
        let gs = a1 * sn + a * self.wavenumber * cs;
        let gt = -a * w * cs;
        let gtt = -a * w * w * sn;
        (
            self.rotation_rate * t + r * g,
            r * gs,
            self.rotation_rate + r1 * g + r * gt,
            r2 * g + 2.0 * r1 * gt + r * gtt,
        )
    }
}

/// Inextensible midline X(xi, t), Z(xi, t), xi in [0, length], built from the
/// midline angle so that (X_xi, Z_xi) = (cos theta, sin theta).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Backbone {
    pub length: f64,
    #[serde(default)]
    pub head: HeadMotion,
    #[serde(default)]
    pub angle: AngleField,
}

/// Kinematic state of a backbone point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackboneState {
    pub position: [f64; 2],
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
    /// tangential velocity u . tau
    pub u: f64,
    /// normal velocity u . n
    pub w: f64,
    pub velocity: [f64; 2],
    pub acceleration: [f64; 2],
    pub theta: f64,
    pub theta_t: f64,
}

fn backbone_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(40))
}

impl Backbone {
    /// Full state without domain checks.
    pub fn state(&self, xi: f64, t: f64) -> BackboneState {
        let (p0, v0, a0) = self.head.eval(t);
        let (mut x, mut z) = (p0[0], p0[1]);
        let (mut xt, mut zt) = (v0[0], v0[1]);
        let (mut xtt, mut ztt) = (a0[0], a0[1]);
        if xi > 0.0 {
            for (s, w) in backbone_rule().mapped(0.0, xi) {
                let (th, _, tht, thtt) = self.angle.eval(s, t);
                let (sn, cs) = th.sin_cos();
                x += w * cs;
                z += w * sn;
                xt -= w * sn * tht;
                zt += w * cs * tht;
                xtt -= w * (cs * tht * tht + sn * thtt);
                ztt += w * (-sn * tht * tht + cs * thtt);
            }
        }
        let (th, _, tht, _) = self.angle.eval(xi, t);
        let (sn, cs) = th.sin_cos();
        let tangent = [cs, sn];
        let normal = [-sn, cs];
        BackboneState {
            position: [x, z],
            tangent,
            normal,
            u: xt * tangent[0] + zt * tangent[1],
            w: xt * normal[0] + zt * normal[1],
            velocity: [xt, zt],
            acceleration: [xtt, ztt],
            theta: th,
            theta_t: tht,
        }
    }

    /// |(X_xi, Z_xi)| - 1 evaluated from the assembled midline by a central
    /// difference in xi.
    pub fn stretch_residual(&self, xi: f64, t: f64) -> f64 {
        let h = 1e-4 * self.length;
        let a = (xi - h).max(0.0);
        let b = (xi + h).min(self.length);
        let pa = self.state(a, t).position;
        let pb = self.state(b, t).position;
        let d = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        // exact chord of a curve with unit speed differs from the arc by O(h^2 kappa^2)
        d / (b - a) - 1.0
    }
}

/// Position, tangent, normal, tangential velocity U = u.tau and normal
/// velocity W = u.n at arc coordinate xi.
pub fn backbone_state(bb: &Backbone, xi: f64, t: f64) -> Result<BackboneState> {
    check_domain("xi", xi, 0.0, bb.length)?;
    check_domain("t", t, 0.0, f64::INFINITY)?;
    let st = bb.state(xi, t);
    let res = (st.tangent[0].hypot(st.tangent[1]) - 1.0).abs();
    if res > 1e-6 {
        return Err(Error::InvalidBackbone { residual: res, xi, t });
    }
    Ok(st)
}

// ---------------------------------------------------------------------------
// Flexible wing

/// mean + amplitude sin(omega t + phase)
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Oscillation {
    pub mean: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
}

impl Oscillation {
    pub fn steady(mean: f64) -> Self {
        Self {
            mean,
            ..Default::default()
        }
    }

    pub fn harmonic(amplitude: f64, omega: f64, phase: f64) -> Self {
        Self {
            mean: 0.0,
            amplitude,
            omega,
            phase,
        }
    }

    /// (value, rate, second rate)
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let (s, c) = (self.omega * t + self.phase).sin_cos();
        let w = self.omega;
        (
            self.mean + self.amplitude * s,
            self.amplitude * w * c,
            -self.amplitude * w * w * s,
        )
    }
}

/// Camber line in the chord frame, parameterized by arc length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Camber {
    Flat,
    /// Tangent angle kappa(t) xi, a circular arc symmetric about mid-chord.
    CircularArc { curvature: Oscillation },
}

impl Default for Camber {
    fn default() -> Self {
        Camber::Flat
    }
}

/// Z(xi, t) = Z0(t) + exp(i theta(t)) Zhat(xi, t), xi in [-1, 1], leading edge
/// at xi = -1. The wing advances toward -x at `speed`; theta = -incidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WingShape {
    pub speed: f64,
    #[serde(default)]
    pub heave: Oscillation,
    #[serde(default)]
    pub incidence: Oscillation,
    #[serde(default)]
    pub pivot: f64,
    #[serde(default)]
    pub camber: Camber,
}

/// Kinematics of one wing point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WingPoint {
    pub z: C64,
    pub z_xi: C64,
    /// conj(Z_t)
    pub w: C64,
    pub us: f64,
    pub un: f64,
}

fn camber_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(24))
}

impl WingShape {
    pub fn flat(speed: f64) -> Self {
        Self {
            speed,
            heave: Oscillation::default(),
            incidence: Oscillation::default(),
            pivot: 0.0,
            camber: Camber::Flat,
        }
    }

    /// The two-mode plate motion h0 cos(wt) + alpha (x - b) sin(wt) as a rigid wing.
    pub fn heave_pitch(speed: f64, heave: f64, pitch: f64, omega: f64, axis: f64) -> Self {
        Self {
            speed,
            heave: Oscillation::harmonic(heave, omega, PI / 2.0),
            incidence: Oscillation::harmonic(pitch, omega, PI),
            pivot: axis,
            camber: Camber::Flat,
        }
    }

    /// (theta, theta_t)
    pub fn angle(&self, t: f64) -> (f64, f64) {
        let (a, ad, _) = self.incidence.eval(t);
        (-a, -ad)
    }

    /// Pivot position Z0 and velocity.
    pub fn pivot_motion(&self, t: f64) -> (C64, C64) {
        let (y, yd, _) = self.heave.eval(t);
        (
            C64::new(-self.speed * t, y),
            C64::new(-self.speed, yd),
        )
    }

    pub fn is_rigid(&self) -> bool {
        match &self.camber {
            Camber::Flat => true,
            Camber::CircularArc { curvature } => curvature.amplitude == 0.0 || curvature.omega == 0.0,
        }
    }

    /// (Zhat, Zhat_xi, Zhat_t)
    pub fn camber_frame(&self, xi: f64, t: f64) -> (C64, C64, C64) {
        match &self.camber {
            Camber::Flat => (C64::new(xi - self.pivot, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            Camber::CircularArc { curvature } => {
                let (k, kd, _) = curvature.eval(t);
                let mut z = C64::new(0.0, 0.0);
                let mut zk = C64::new(0.0, 0.0);
                for (s, w) in camber_rule().mapped(self.pivot, xi) {
                    let e = C64::from_polar(1.0, k * s);
                    z += w * e;
                    zk += w * C64::new(0.0, s) * e;
                }
                (z, C64::from_polar(1.0, k * xi), kd * zk)
            }
        }
    }

    pub fn point(&self, xi: f64, t: f64) -> WingPoint {
        let (zh, zh_xi, zh_t) = self.camber_frame(xi, t);
        let (th, thd) = self.angle(t);
        let rot = C64::from_polar(1.0, th);
        let (z0, z0t) = self.pivot_motion(t);
        let z = z0 + rot * zh;
        let z_xi = rot * zh_xi;
        let zt = z0t + C64::new(0.0, thd) * rot * zh + rot * zh_t;
        let w = zt.conj();
        let q = w * z_xi;
        WingPoint {
            z,
            z_xi,
            w,
            us: q.re,
            un: -q.im,
        }
    }

    pub fn trailing_edge(&self, t: f64) -> C64 {
        self.point(1.0, t).z
    }

    pub fn chord(&self, t: f64) -> f64 {
        (self.point(1.0, t).z - self.point(-1.0, t).z).norm()
    }
}

/// (Z, conj(Z_t), U_s, U_n) with U_s - i U_n = conj(Z_t) Z_xi.
pub fn wing_kinematics(w: &WingShape, xi: f64, t: f64) -> Result<WingPoint> {
    check_domain("xi", xi, -1.0, 1.0)?;
    let p = w.point(xi, t);
    let res = (p.z_xi.norm() - 1.0).abs();
    if res > 1e-6 {
        return Err(Error::InvalidShape { residual: res, xi, t });
    }
    Ok(p)
}
