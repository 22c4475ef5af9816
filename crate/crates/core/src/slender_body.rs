//! Reactive slender-body loads: added mass, sectional lift for each planform
//! regime, instantaneous and mean power/energy/thrust, the bound vortex sheet,
//! and the large-amplitude reactive force on a backbone.
//!
//! The body swims toward -x at speed U; D = d/dt + U d/dx.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_domain, Error, Result};
use crate::kinematics::{Backbone, PlateJet, PlateMotion};
use crate::quadrature::{GaussLegendre, PanelRule};
use crate::singular_kernels::{invert_samples, ChebGrid, CrossFlowField};

type C64 = Complex64;

/// Half-depth profile b(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Profile {
    Constant { b: f64 },
    /// b0 + slope x
    Linear { b0: f64, slope: f64 },
    /// Monotone piecewise-cubic through (x, b) samples.
    Sampled { x: Vec<f64>, b: Vec<f64> },
}

impl Profile {
    /// (b, b')
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self {
            Profile::Constant { b } => (*b, 0.0),
            Profile::Linear { b0, slope } => (b0 + slope * x, *slope),
            Profile::Sampled { x: xs, b } => monotone_cubic(xs, b, x),
        }
    }
}

/// Fritsch–Carlson monotone cubic Hermite interpolation, (value, slope).
fn monotone_cubic(xs: &[f64], ys: &[f64], x: f64) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    if n == 1 {
        return (ys[0], 0.0);
    }
    let delta: Vec<f64> = (0..n - 1)
        .map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
        .collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        m[i] = if delta[i - 1] * delta[i] <= 0.0 {
            0.0
        } else {
            (delta[i - 1] + delta[i]) / 2.0
        };
    }
    for i in 0..n - 1 {
        if delta[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
        } else {
            let a = m[i] / delta[i];
            let b = m[i + 1] / delta[i];
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                m[i] = tau * a * delta[i];
                m[i + 1] = tau * b * delta[i];
            }
        }
    }
    let i = match xs.iter().position(|&xi| xi > x) {
        Some(0) => 0,
        Some(k) => k - 1,
        None => n - 2,
    };
    let h = xs[i + 1] - xs[i];
    let s = (x - xs[i]) / h;
    let (h00, h10, h01, h11) = (
        (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
        s * (1.0 - s) * (1.0 - s),
        s * s * (3.0 - 2.0 * s),
        s * s * (s - 1.0),
    );
    let v = h00 * ys[i] + h10 * h * m[i] + h01 * ys[i + 1] + h11 * h * m[i + 1];
    let d = (6.0 * s * s - 6.0 * s) / h * ys[i]
        + (3.0 * s * s - 4.0 * s + 1.0) * m[i]
        + (-6.0 * s * s + 6.0 * s) / h * ys[i + 1]
        + (3.0 * s * s - 2.0 * s) * m[i + 1];
    (v, d)
}

/// Added mass of the frozen fin-wake segment behind an abrupt fin end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FinWakeMass {
    /// rho pi (b_s^2 - b(x)^2) with b_s = b(x_s)
    #[default]
    GapFilling,
    /// m~(x) given directly as a profile
    Custom { profile: Profile },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Planform {
    pub length: f64,
    pub profile: Profile,
    #[serde(default)]
    pub x_e: Option<f64>,
    #[serde(default)]
    pub x_s: Option<f64>,
    #[serde(default)]
    pub x_c: Option<f64>,
    #[serde(default = "one")]
    pub added_mass_factor: f64,
    #[serde(default = "one")]
    pub rho: f64,
    #[serde(default)]
    pub fin_wake_mass: FinWakeMass,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Ribbon,
    Anterior,
    TrailingSideEdge,
    AbruptFinWake,
    Caudal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionLoad {
    pub x: f64,
    pub momentum: f64,
    pub lift: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerformanceRecord {
    pub power: f64,
    pub energy: f64,
    pub thrust: f64,
    pub speed: f64,
    pub efficiency: Option<f64>,
}

impl PerformanceRecord {
    fn new(power: f64, energy: f64, thrust: f64, speed: f64) -> Self {
        let efficiency = (power > 0.0).then(|| thrust * speed / power);
        Self {
            power,
            energy,
            thrust,
            speed,
            efficiency,
        }
    }

    /// |P - (E + T U)| / (|P| + |E| + |T U|), zero when all vanish.
    pub fn conservation_residual(&self) -> f64 {
        let tu = self.thrust * self.speed;
        let scale = self.power.abs() + self.energy.abs() + tu.abs();
        if scale == 0.0 {
            0.0
        } else {
            (self.power - self.energy - tu).abs() / scale
        }
    }
}

impl Planform {
    pub fn ribbon(length: f64, b: f64) -> Self {
        Self {
            length,
            profile: Profile::Constant { b },
            x_e: None,
            x_s: None,
            x_c: None,
            added_mass_factor: 1.0,
            rho: 1.0,
            fin_wake_mass: FinWakeMass::GapFilling,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_domain("length", self.length, f64::MIN_POSITIVE, f64::INFINITY)?;
        check_domain("rho", self.rho, f64::MIN_POSITIVE, f64::INFINITY)?;
        let mut prev = 0.0;
        for (name, m) in [("x_e", self.x_e), ("x_s", self.x_s), ("x_c", self.x_c)] {
            if let Some(v) = m {
                let ok = if name == "x_s" { v >= prev } else { v > prev };
                if !ok || v >= self.length {
                    return Err(Error::Domain {
                        what: name,
                        value: v,
                        domain: format!("({prev}, {})", self.length),
                    });
                }
                prev = v;
            }
        }
        if self.x_s.is_some() && (self.x_e.is_none() || self.x_c.is_none()) {
            return Err(Error::Domain {
                what: "x_s",
                value: self.x_s.unwrap_or(f64::NAN),
                domain: "requires x_e and x_c".into(),
            });
        }
        for i in 1..64 {
            let x = self.length * i as f64 / 64.0;
            let (b, _) = self.profile.eval(x);
            if !(b > 0.0) {
                return Err(Error::Domain {
                    what: "b(x)",
                    value: b,
                    domain: format!("(0, inf) at x = {x}"),
                });
            }
        }
        Ok(())
    }

    /// (m, m')
    pub fn added_mass(&self, x: f64) -> (f64, f64) {
        let (b, db) = self.profile.eval(x);
        let k = self.added_mass_factor * self.rho * PI;
        (k * b * b, 2.0 * k * b * db)
    }

    /// (m~, m~')
    pub fn fin_wake_mass(&self, x: f64) -> (f64, f64) {
        match &self.fin_wake_mass {
            FinWakeMass::GapFilling => {
                let bs = self.profile.eval(self.x_s.unwrap_or(x)).0;
                let (b, db) = self.profile.eval(x);
                (self.rho * PI * (bs * bs - b * b), -2.0 * self.rho * PI * b * db)
            }
            FinWakeMass::Custom { profile } => profile.eval(x),
        }
    }

    pub fn regime(&self, x: f64) -> Regime {
        let Some(xe) = self.x_e else {
            return Regime::Ribbon;
        };
        if x < xe {
            return Regime::Anterior;
        }
        if let Some(xc) = self.x_c {
            if x >= xc {
                return Regime::Caudal;
            }
        }
        match self.x_s {
            Some(xs) if x >= xs => Regime::AbruptFinWake,
            _ => Regime::TrailingSideEdge,
        }
    }

    fn breaks(&self) -> Vec<f64> {
        [self.x_e, self.x_s, self.x_c].iter().flatten().copied().collect()
    }
}

/// W = h_t + U h_x
pub fn transverse_velocity(motion: &PlateMotion, speed: f64, x: f64, t: f64) -> Result<f64> {
    let j = motion.checked_jet(x, t)?;
    Ok(j.ht + speed * j.hx)
}

fn w_and_dw(j: &PlateJet, u: f64) -> (f64, f64, f64) {
    let w = j.ht + u * j.hx;
    let wx = j.hxt + u * j.hxx;
    let dw = j.htt + 2.0 * u * j.hxt + u * u * j.hxx;
    (w, wx, dw)
}

/// Sectional momentum and lift under an explicitly chosen regime.
pub fn section_lift_in(
    regime: Regime,
    planform: &Planform,
    motion: &PlateMotion,
    speed: f64,
    x: f64,
    t: f64,
) -> Result<SectionLoad> {
    let j = motion.checked_jet(x, t)?;
    let (w, _, dw) = w_and_dw(&j, speed);
    let (m, dm) = planform.added_mass(x);
    let (momentum, lift) = match regime {
        Regime::Ribbon | Regime::Anterior | Regime::Caudal => (m * w, -(m * dw + speed * dm * w)),
        Regime::TrailingSideEdge => (m * w, -m * dw),
        Regime::AbruptFinWake => {
            let xs = planform.x_s.ok_or(Error::Sequencing("abrupt-fin regime without x_s".into()))?;
            let tau = t - (x - xs) / speed;
            if !(tau >= 0.0) {
                return Err(Error::NotYetShed { x, tau });
            }
            let js = motion.checked_jet(xs, tau)?;
            let ws = js.ht + speed * js.hx;
            let (mt, dmt) = planform.fin_wake_mass(x);
            (m * w + mt * ws, -(m * dw + speed * dm * w) - speed * dmt * ws)
        }
    };
    Ok(SectionLoad {
        x,
        momentum,
        lift,
        regime,
    })
}

/// Specific lift L = -D(momentum), dispatched on the planform markers.
pub fn section_lift(planform: &Planform, motion: &PlateMotion, speed: f64, x: f64, t: f64) -> Result<SectionLoad> {
    if !(x > 0.0 && x < planform.length) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            domain: format!("(0, {})", planform.length),
        });
    }
    section_lift_in(planform.regime(x), planform, motion, speed, x, t)
}

#[derive(Debug, Clone, Copy)]
pub struct PetOptions {
    pub panels: usize,
    pub per_panel: usize,
    /// relative disagreement tolerated between the rule and its half-order twin
    pub convergence_tol: f64,
}

impl Default for PetOptions {
    fn default() -> Self {
        Self {
            panels: 8,
            per_panel: 16,
            convergence_tol: 1e-6,
        }
    }
}

fn pet_with_rule(planform: &Planform, motion: &PlateMotion, speed: f64, t: f64, rule: &PanelRule) -> Result<(f64, f64, f64)> {
    let (mut p, mut e, mut th) = (0.0, 0.0, 0.0);
    for (&x, &wq) in rule.nodes.iter().zip(&rule.weights) {
        let load = section_lift(planform, motion, speed, x, t)?;
        let j = motion.jet(x, t);
        let w = j.ht + speed * j.hx;
        p -= wq * j.ht * load.lift;
        e -= wq * w * load.lift;
        th += wq * j.hx * load.lift;
    }
    Ok((p, e, th))
}

/// P = -int h_t L, E = -int W L, T = int h_x L over the body.
pub fn instantaneous_pet(planform: &Planform, motion: &PlateMotion, speed: f64, t: f64) -> Result<PerformanceRecord> {
    instantaneous_pet_with(planform, motion, speed, t, PetOptions::default())
}

pub fn instantaneous_pet_with(
    planform: &Planform,
    motion: &PlateMotion,
    speed: f64,
    t: f64,
    opts: PetOptions,
) -> Result<PerformanceRecord> {
    let breaks = planform.breaks();
    let fine = PanelRule::graded(0.0, planform.length, opts.panels, opts.per_panel, &breaks);
    let (p, e, th) = pet_with_rule(planform, motion, speed, t, &fine)?;
    let coarse = PanelRule::graded(0.0, planform.length, opts.panels, (opts.per_panel / 2).max(2), &breaks);
    let (pc, ec, tc) = pet_with_rule(planform, motion, speed, t, &coarse)?;
    let scale = p.abs() + e.abs() + (th * speed).abs();
    let diff = (p - pc).abs() + (e - ec).abs() + ((th - tc) * speed).abs();
    // absolute floor for motions with W = 0 up to rounding
    let floor = 1e-14 * planform.rho * planform.length * (1.0 + speed * speed);
    if diff > opts.convergence_tol * scale && diff > floor {
        return Err(Error::Numerical(format!(
            "P/E/T quadrature not converged at t = {t}: fine ({p:e}, {e:e}, {th:e}) vs coarse ({pc:e}, {ec:e}, {tc:e})"
        )));
    }
    let rec = PerformanceRecord::new(p, e, th, speed);
    let res = rec.conservation_residual();
    if res > 1e-10 {
        return Err(Error::Numerical(format!("P = E + TU violated: relative residual {res:e}")));
    }
    Ok(rec)
}

/// Time means for a traveling wave from the tail added mass and the mean
/// square tail slope.
pub fn mean_performance(m_tail: f64, speed: f64, wave_speed: f64, mean_sq_slope: f64) -> Result<PerformanceRecord> {
    if !(wave_speed > 0.0) {
        return Err(Error::Domain {
            what: "c",
            value: wave_speed,
            domain: "(0, inf)".into(),
        });
    }
    check_domain("mean_sq_slope", mean_sq_slope, 0.0, f64::INFINITY)?;
    let (m, u, c, s) = (m_tail, speed, wave_speed, mean_sq_slope);
    let p = m * u * c * (c - u) * s;
    let e = 0.5 * m * u * (c - u) * (c - u) * s;
    let t = 0.5 * m * (c * c - u * u) * s;
    let mut rec = PerformanceRecord::new(p, e, t, u);
    rec.efficiency = Some((c + u) / (2.0 * c));
    Ok(rec)
}

/// Chordwise and spanwise bound-sheet strengths (gamma_1, gamma_2) at (x, y)
/// for a ribbon of local half-width b(x).
pub fn bound_vortex_sheet(planform: &Planform, motion: &PlateMotion, speed: f64, x: f64, y: f64, t: f64) -> Result<(f64, f64)> {
    let (b, _) = planform.profile.eval(x);
    if !(y.abs() < b) {
        return Err(Error::Domain {
            what: "y",
            value: y,
            domain: format!("(-{b}, {b})"),
        });
    }
    let j = motion.checked_jet(x, t)?;
    let (w, wx, _) = w_and_dw(&j, speed);
    let h = (b * b - y * y).sqrt();
    Ok((-2.0 * w * y / h, -2.0 * wx * h))
}

/// (d gamma_1/dx, d gamma_2/dy) for the ribbon sheet.
pub fn bound_vortex_sheet_divergence_terms(
    planform: &Planform,
    motion: &PlateMotion,
    speed: f64,
    x: f64,
    y: f64,
    t: f64,
) -> Result<(f64, f64)> {
    let (b, _) = planform.profile.eval(x);
    if !(y.abs() < b) {
        return Err(Error::Domain {
            what: "y",
            value: y,
            domain: format!("(-{b}, {b})"),
        });
    }
    let j = motion.checked_jet(x, t)?;
    let (_, wx, _) = w_and_dw(&j, speed);
    let h = (b * b - y * y).sqrt();
    Ok((-2.0 * wx * y / h, 2.0 * wx * y / h))
}

/// Gamma(x) = int_0^x gamma_2 dx; zero ahead of the starting vortex at x_m.
pub fn circulation(gamma2: &dyn Fn(f64) -> f64, x: f64, x_m: f64) -> Result<f64> {
    check_domain("x", x, 0.0, f64::INFINITY)?;
    if x > x_m {
        return Ok(0.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(PanelRule::graded(0.0, x, 8, 16, &[]).integrate(gamma2))
}

/// Mid-span gamma_2(x, 0, t) on the plate and in its linearized wake, where
/// the trailing-edge circulation Gamma_l(tau) = -2 int_0^l b W_x dx is carried
/// downstream at speed U, so gamma_2 = -Gamma_l'(t - (x - l)/U) / U there.
pub fn ribbon_gamma2<'a>(planform: &'a Planform, motion: &'a PlateMotion, speed: f64, t: f64) -> impl Fn(f64) -> f64 + 'a {
    let rule = PanelRule::graded(0.0, planform.length, 4, 16, &planform.breaks());
    move |x: f64| {
        let l = planform.length;
        if x <= l {
            let (b, _) = planform.profile.eval(x);
            let j = motion.jet(x, t);
            return -2.0 * b * (j.hxt + speed * j.hxx);
        }
        let tau = t - (x - l) / speed;
        if tau < 0.0 {
            return 0.0;
        }
        let wt = |xx: f64| {
            let j = motion.jet(xx, tau);
            j.htt + speed * j.hxt
        };
        // int b W_xt = [b W_t] - int b' W_t
        let ends = planform.profile.eval(l).0 * wt(l) - planform.profile.eval(0.0).0 * wt(0.0);
        let inner = rule.integrate(|xx| planform.profile.eval(xx).1 * wt(xx));
        let dgamma = -2.0 * (ends - inner);
        -dgamma / speed
    }
}

fn momentum_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(48))
}

/// int_0^l m W n dxi, the lateral fluid momentum carried by the body.
pub fn lateral_momentum(bb: &Backbone, planform: &Planform, t: f64) -> [f64; 2] {
    let mut acc = [0.0; 2];
    for (xi, w) in momentum_rule().mapped(0.0, bb.length) {
        let s = bb.state(xi, t);
        let (m, _) = planform.added_mass(xi);
        acc[0] += w * m * s.w * s.normal[0];
        acc[1] += w * m * s.w * s.normal[1];
    }
    acc
}

/// d/dt of `lateral_momentum`, evaluated analytically.
pub fn lateral_momentum_rate(bb: &Backbone, planform: &Planform, t: f64) -> [f64; 2] {
    let mut acc = [0.0; 2];
    for (xi, w) in momentum_rule().mapped(0.0, bb.length) {
        let s = bb.state(xi, t);
        let (m, _) = planform.added_mass(xi);
        let nt = [-s.theta_t * s.tangent[0], -s.theta_t * s.tangent[1]];
        let wt = s.acceleration[0] * s.normal[0]
            + s.acceleration[1] * s.normal[1]
            + s.velocity[0] * nt[0]
            + s.velocity[1] * nt[1];
        for k in 0..2 {
            acc[k] += w * m * (wt * s.normal[k] + s.w * nt[k]);
        }
    }
    acc
}

/// Reactive force on the body:
/// F = [m W (-Z_t, X_t) + (1/2) m W^2 tau] at the tail - d/dt int m W n dxi.
/// -F acts on the fluid; the thrust is -F_x.
pub fn reactive_force(bb: &Backbone, planform: &Planform, t: f64) -> Result<[f64; 2]> {
    check_domain("t", t, 0.0, f64::INFINITY)?;
    let tail = crate::kinematics::backbone_state(bb, bb.length, t)?;
    let (m, _) = planform.added_mass(bb.length);
    let rate = lateral_momentum_rate(bb, planform, t);
    let (xt, zt) = (tail.velocity[0], tail.velocity[1]);
    let w = tail.w;
    Ok([
        m * w * (-zt) + 0.5 * m * w * w * tail.tangent[0] - rate[0],
        m * w * xt + 0.5 * m * w * w * tail.tangent[1] - rate[1],
    ])
}

/// Caudal-fin field: the incident transported field plus the fin's own
/// cross-flow solution for the effective upwash U_n - W_v.
pub struct CaudalField<'a> {
    pub incident: &'a dyn Fn(C64) -> C64,
    pub fin: CrossFlowField,
}

impl CaudalField<'_> {
    pub fn chi(&self, zeta: C64) -> C64 {
        (self.incident)(zeta) + self.fin.chi(zeta)
    }
}

pub fn caudal_superposition<'a>(
    incident: Option<&'a dyn Fn(C64) -> C64>,
    fin_upwash: &dyn Fn(f64) -> f64,
    b_fin: f64,
    n: usize,
) -> Result<CaudalField<'a>> {
    let incident = incident.ok_or_else(|| Error::Sequencing("caudal section needs the transported incident field".into()))?;
    let grid = ChebGrid::new(n, b_fin)?;
    let eps = 1e-12 * b_fin;
    let parts = |y: f64| (fin_upwash(y), -incident(C64::new(y, eps)).im);
    let values: Vec<f64> = grid.nodes.iter().map(|&y| parts(y)).map(|(w, s)| w - s).collect();
    let fin = invert_samples(&grid, &values);
    // the effective upwash may cancel, so measure the round trip against its parts
    let mut scale = f64::MIN_POSITIVE;
    let mut worst = 0.0f64;
    for j in 0..grid.n {
        let y = b_fin * (j as f64 * PI / grid.n as f64).cos();
        let (w, s) = parts(y);
        scale = scale.max(w.abs()).max(s.abs());
        worst = worst.max((fin.upwash(y) - (w - s)).abs());
    }
    if worst > 1e-8 * scale {
        return Err(Error::Accuracy {
            achieved: worst / scale,
            tol: 1e-8,
        });
    }
    Ok(CaudalField { incident, fin })
}
