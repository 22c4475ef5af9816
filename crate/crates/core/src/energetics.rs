//! Locomotion energetics: nondimensional groups, power balance, drag-law
//! reference states, metabolic scaling exponents and C_P-Re regression.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kinematic viscosity of fresh water at 15 C, cm^2/s.
pub const WATER_15C_NU_CM2_S: f64 = 0.0114;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidEnvironment {
    pub rho: f64,
    pub nu: f64,
}

impl FluidEnvironment {
    pub fn new(rho: f64, nu: f64) -> Result<Self> {
        for (what, v) in [("rho", rho), ("nu", nu)] {
            if !(v > 0.0) {
                return Err(Error::Domain {
                    what,
                    value: v,
                    domain: "(0, inf)".into(),
                });
            }
        }
        Ok(Self { rho, nu })
    }

    /// Fresh water at 15 C in CGS units (g/cm^3, cm^2/s).
    pub fn water_cgs() -> Self {
        Self {
            rho: 0.999,
            nu: WATER_15C_NU_CM2_S,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nondim {
    pub reynolds: f64,
    pub strouhal: f64,
    pub stokes_thickness: f64,
}

/// Re = UL/nu, St = omega L / U, delta = sqrt(2 nu / omega).
pub fn nondim(u: f64, l: f64, omega: f64, env: &FluidEnvironment) -> Result<Nondim> {
    if u == 0.0 {
        return Err(Error::DivisionDomain("Strouhal number needs U != 0"));
    }
    for (what, v) in [("U", u), ("L", l), ("omega", omega)] {
        if !(v > 0.0) {
            return Err(Error::Domain {
                what,
                value: v,
                domain: "(0, inf)".into(),
            });
        }
    }
    Ok(Nondim {
        reynolds: u * l / env.nu,
        strouhal: omega * l / u,
        stokes_thickness: (2.0 * env.nu / omega).sqrt(),
    })
}

/// Metabolic power from D V = P - E = eta_m P_m.
pub fn power_balance(drag: f64, speed: f64, eta_m: f64, power: f64, wake_loss: f64, tol: f64) -> Result<f64> {
    if !(speed > 0.0) {
        return Err(Error::Domain {
            what: "V",
            value: speed,
            domain: "(0, inf)".into(),
        });
    }
    if !(eta_m > 0.0) {
        return Err(Error::Domain {
            what: "eta_m",
            value: eta_m,
            domain: "(0, inf)".into(),
        });
    }
    let useful = drag * speed;
    let residual = useful - (power - wake_loss);
    let scale = useful.abs() + power.abs() + wake_loss.abs();
    if residual.abs() > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Imbalance { residual });
    }
    Ok(useful / eta_m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DragLaw {
    Laminar,
    Turbulent,
    Constant,
}

impl DragLaw {
    pub const ALL: [DragLaw; 3] = [DragLaw::Laminar, DragLaw::Turbulent, DragLaw::Constant];

    /// n in C_D ~ Re^-n
    pub fn reynolds_exponent(self) -> f64 {
        match self {
            DragLaw::Laminar => 0.5,
            DragLaw::Turbulent => 0.2,
            DragLaw::Constant => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DragLaw::Laminar => "laminar",
            DragLaw::Turbulent => "turbulent",
            DragLaw::Constant => "constant",
        }
    }
}

/// Prefactors default to the smooth flat-plate values (Blasius, Prandtl).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DragModel {
    pub laminar: f64,
    pub turbulent: f64,
    pub constant: f64,
}

impl Default for DragModel {
    fn default() -> Self {
        Self {
            laminar: 1.328,
            turbulent: 0.074,
            constant: 1.0,
        }
    }
}

pub fn drag_coefficient(re: f64, law: DragLaw, model: &DragModel) -> Result<f64> {
    if !(re > 0.0) {
        return Err(Error::Domain {
            what: "Re",
            value: re,
            domain: "(0, inf)".into(),
        });
    }
    Ok(match law {
        DragLaw::Laminar => model.laminar * re.powf(-0.5),
        DragLaw::Turbulent => model.turbulent * re.powf(-0.2),
        DragLaw::Constant => model.constant,
    })
}

fn check_b(b: f64) -> Result<()> {
    if !(b > 0.6 && b < 1.05) {
        return Err(Error::Domain {
            what: "b",
            value: b,
            domain: "(0.6, 1.05)".into(),
        });
    }
    Ok(())
}

/// beta in V ~ l^beta for metabolic exponent b under a drag law.
pub fn velocity_scaling_exponent(b: f64, law: DragLaw) -> Result<f64> {
    check_b(b)?;
    Ok(match law {
        DragLaw::Laminar => 0.6 * (2.0 * b - 1.0),
        DragLaw::Turbulent => 3.0 / 14.0 * (5.0 * b - 3.0),
        DragLaw::Constant => b - 2.0 / 3.0,
    })
}

/// Exponent mismatch of V^3 ~ l^(3b-2) / C_D(Re(V, l)) given V ~ l^beta.
pub fn scaling_residual(b: f64, beta: f64, law: DragLaw) -> f64 {
    let n = law.reynolds_exponent();
    3.0 * beta - (3.0 * b - 2.0 + n * (1.0 + beta))
}

/// gamma in the specific cost P_m/(m g V) ~ m^-gamma.
pub fn cost_exponent(b: f64, beta: f64) -> f64 {
    1.0 - b + beta / 3.0
}

pub fn specific_cost(metabolic_power: f64, mass: f64, gravity: f64, speed: f64) -> Result<f64> {
    let denom = mass * gravity * speed;
    if denom == 0.0 {
        return Err(Error::DivisionDomain("specific cost needs m g V != 0"));
    }
    Ok(metabolic_power / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingModel {
    pub a: f64,
    pub b_exp: f64,
    pub drag_law: DragLaw,
    pub eta_m: f64,
}

impl ScalingModel {
    pub fn new(a: f64, b_exp: f64, drag_law: DragLaw, eta_m: f64) -> Result<Self> {
        check_b(b_exp)?;
        Ok(Self {
            a,
            b_exp,
            drag_law,
            eta_m,
        })
    }

    pub fn metabolic_power(&self, mass: f64) -> f64 {
        self.a * mass.powf(self.b_exp)
    }

    pub fn beta(&self) -> f64 {
        velocity_scaling_exponent(self.b_exp, self.drag_law).expect("b checked at construction")
    }

    pub fn gamma(&self) -> f64 {
        cost_exponent(self.b_exp, self.beta())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActivityLevel {
    #[serde(rename = "standard")]
    Standard,
    #[serde(rename = "1/4-max")]
    QuarterMax,
    #[serde(rename = "1/2-max")]
    HalfMax,
    #[serde(rename = "3/4-max")]
    ThreeQuarterMax,
    #[serde(rename = "max")]
    Max,
}

impl ActivityLevel {
    pub fn label(self) -> &'static str {
        match self {
            ActivityLevel::Standard => "standard",
            ActivityLevel::QuarterMax => "1/4-max",
            ActivityLevel::HalfMax => "1/2-max",
            ActivityLevel::ThreeQuarterMax => "3/4-max",
            ActivityLevel::Max => "max",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwimRecord {
    pub mass: f64,
    pub length: f64,
    pub speed: f64,
    pub power: f64,
    pub level: ActivityLevel,
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    mass_g: f64,
    length_cm: f64,
    speed_cm_s: f64,
    o2_rate_or_power: f64,
    activity_level: ActivityLevel,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestOptions {
    /// None subtracts basal rates whenever standard-level records exist.
    pub basal_subtraction: Option<bool>,
    /// factor taking the rate column to power units
    pub power_scale: f64,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            basal_subtraction: None,
            power_scale: 1.0,
        }
    }
}

/// Read CSV records (mass_g, length_cm, speed_cm_s, o2_rate_or_power,
/// activity_level). With basal subtraction, each active record loses the
/// standard-level rate of the record of equal mass, or the standard-level
/// power law a m^b fitted across sizes when no such record exists.
pub fn load_records<R: Read>(reader: R, opts: &IngestOptions) -> Result<Vec<SwimRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let mut out = vec![];
    for (i, row) in rdr.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(|e| Error::Data(format!("row {}: {e}", i + 1)))?;
        let rec = SwimRecord {
            mass: row.mass_g,
            length: row.length_cm,
            speed: row.speed_cm_s,
            power: row.o2_rate_or_power * opts.power_scale,
            level: row.activity_level,
        };
        let standard = rec.level == ActivityLevel::Standard;
        let ok = rec.mass > 0.0
            && rec.length > 0.0
            && rec.power > 0.0
            && if standard { rec.speed >= 0.0 } else { rec.speed > 0.0 };
        if !ok {
            return Err(Error::Data(format!("row {}: non-positive field in {rec:?}", i + 1)));
        }
        out.push(rec);
    }
    let has_standard = out.iter().any(|r| r.level == ActivityLevel::Standard);
    if opts.basal_subtraction.unwrap_or(has_standard) {
        subtract_basal(&mut out)?;
    }
    Ok(out)
}

fn subtract_basal(records: &mut [SwimRecord]) -> Result<()> {
    let std: Vec<SwimRecord> = records
        .iter()
        .filter(|r| r.level == ActivityLevel::Standard)
        .copied()
        .collect();
    if std.is_empty() {
        return Err(Error::Data("basal subtraction needs standard-level records".into()));
    }
    let law = if std.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = std.iter().map(|r| (r.mass.ln(), r.power.ln())).unzip();
        Some(least_squares(&x, &y)?)
    } else {
        None
    };
    for r in records.iter_mut().filter(|r| r.level != ActivityLevel::Standard) {
        let basal = match std.iter().find(|s| (s.mass - r.mass).abs() <= 1e-9 * r.mass) {
            Some(s) => s.power,
            None => match law {
                Some(l) => (l.intercept + l.slope * r.mass.ln()).exp(),
                None => std[0].power * (r.mass / std[0].mass).powf(0.775),
            },
        };
        r.power -= basal;
        if !(r.power > 0.0) {
            return Err(Error::Data(format!(
                "active rate at mass {} does not exceed the basal rate",
                r.mass
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

pub fn least_squares(x: &[f64], y: &[f64]) -> Result<Line> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::Fit(format!("need >= 2 paired points, got {n}")));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if !(sxx > 1e-12 * n as f64 * (1.0 + mx * mx)) {
        return Err(Error::Fit("degenerate abscissa spread".into()));
    }
    let slope = sxy / sxx;
    Ok(Line {
        slope,
        intercept: my - slope * mx,
    })
}

/// Wetted surface S = k l^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub prefactor: f64,
}

impl Default for SurfaceModel {
    fn default() -> Self {
        Self { prefactor: 0.4 }
    }
}

pub fn power_coefficient(r: &SwimRecord, env: &FluidEnvironment, surface: &SurfaceModel) -> f64 {
    let s = surface.prefactor * r.length * r.length;
    r.power / (0.5 * env.rho * r.speed.powi(3) * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelFit {
    pub level: ActivityLevel,
    pub count: usize,
    /// d log C_P / d log Re
    pub slope: f64,
    pub intercept: f64,
    /// exponent b of P_m ~ m^b across sizes
    pub mass_exponent: f64,
    pub re_min: f64,
    pub re_max: f64,
}

impl LevelFit {
    /// beta from s = (3b - 2 - 3 beta)/(1 + beta)
    pub fn beta(&self) -> f64 {
        (3.0 * self.mass_exponent - 2.0 - self.slope) / (3.0 + self.slope)
    }

    pub fn gamma(&self) -> f64 {
        cost_exponent(self.mass_exponent, self.beta())
    }
}

/// Per-level log C_P vs log Re fits over the active levels.
pub fn fit_cp_lines(records: &[SwimRecord], env: &FluidEnvironment, surface: &SurfaceModel) -> Result<Vec<LevelFit>> {
    let mut groups: BTreeMap<ActivityLevel, Vec<&SwimRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.level != ActivityLevel::Standard) {
        groups.entry(r.level).or_default().push(r);
    }
    if groups.is_empty() {
        return Err(Error::Fit("no active-level records".into()));
    }
    let mut out = vec![];
    for (level, rs) in groups {
        if rs.len() < 3 {
            return Err(Error::Fit(format!("level {} has {} records, need 3", level.label(), rs.len())));
        }
        let lre: Vec<f64> = rs.iter().map(|r| (r.speed * r.length / env.nu).log10()).collect();
        let lcp: Vec<f64> = rs.iter().map(|r| power_coefficient(r, env, surface).log10()).collect();
        let lo = lre.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = lre.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo < 1e-3 {
            return Err(Error::Fit(format!("level {}: Reynolds spread too small to fit", level.label())));
        }
        let cp = least_squares(&lre, &lcp)?;
        let lm: Vec<f64> = rs.iter().map(|r| r.mass.ln()).collect();
        let lp: Vec<f64> = rs.iter().map(|r| r.power.ln()).collect();
        let mb = least_squares(&lm, &lp)?;
        out.push(LevelFit {
            level,
            count: rs.len(),
            slope: cp.slope,
            intercept: cp.intercept,
            mass_exponent: mb.slope,
            re_min: 10f64.powf(lo),
            re_max: 10f64.powf(hi),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Beta,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Crossing {
    At(f64),
    Coincident,
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionReport {
    pub range: (f64, f64),
    pub beta_line: Line,
    pub gamma_line: Line,
    pub crossings: Vec<(Quantity, DragLaw, Crossing)>,
}

impl IntersectionReport {
    /// Laws whose reference curve the observed line meets inside the range.
    pub fn selected(&self, q: Quantity) -> Vec<DragLaw> {
        self.crossings
            .iter()
            .filter(|c| c.0 == q && !matches!(c.2, Crossing::None))
            .map(|c| c.1)
            .collect()
    }

    pub fn crossing(&self, q: Quantity, law: DragLaw) -> Crossing {
        self.crossings
            .iter()
            .find(|c| c.0 == q && c.1 == law)
            .map(|c| c.2)
            .unwrap_or(Crossing::None)
    }
}

/// Reference beta(b) or gamma(b) of a law; both are affine in b.
pub fn reference_line(q: Quantity, law: DragLaw) -> Line {
    let beta = match law {
        DragLaw::Laminar => Line { slope: 1.2, intercept: -0.6 },
        DragLaw::Turbulent => Line {
            slope: 15.0 / 14.0,
            intercept: -9.0 / 14.0,
        },
        DragLaw::Constant => Line {
            slope: 1.0,
            intercept: -2.0 / 3.0,
        },
    };
    match q {
        Quantity::Beta => beta,
        Quantity::Gamma => Line {
            slope: -1.0 + beta.slope / 3.0,
            intercept: 1.0 + beta.intercept / 3.0,
        },
    }
}

fn cross(a: &Line, b: &Line, range: (f64, f64)) -> Crossing {
    let ds = a.slope - b.slope;
    let di = b.intercept - a.intercept;
    let scale = 1.0 + a.intercept.abs() + b.intercept.abs();
    if ds.abs() < 1e-12 {
        return if di.abs() < 1e-12 * scale { Crossing::Coincident } else { Crossing::None };
    }
    let x = di / ds;
    if x >= range.0 && x <= range.1 {
        Crossing::At(x)
    } else {
        Crossing::None
    }
}

/// Observed beta- and gamma-lines are least-squares lines through the
/// per-level (b, beta) and (b, gamma) points; each is crossed with the three
/// reference laws over `range` of b.
pub fn intersection_analysis(points: &[(f64, f64)], range: (f64, f64)) -> Result<IntersectionReport> {
    let b: Vec<f64> = points.iter().map(|p| p.0).collect();
    let beta: Vec<f64> = points.iter().map(|p| p.1).collect();
    let gamma: Vec<f64> = points.iter().map(|p| cost_exponent(p.0, p.1)).collect();
    let beta_line = least_squares(&b, &beta)?;
    let gamma_line = least_squares(&b, &gamma)?;
    let mut crossings = vec![];
    for (q, line) in [(Quantity::Beta, beta_line), (Quantity::Gamma, gamma_line)] {
        for law in DragLaw::ALL {
            crossings.push((q, law, cross(&line, &reference_line(q, law), range)));
        }
    }
    Ok(IntersectionReport {
        range,
        beta_line,
        gamma_line,
        crossings,
    })
}

/// Angular frequency of a flapping frequency in Hz.
pub fn angular_frequency(hz: f64) -> f64 {
    2.0 * PI * hz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laminar_gamma_is_affine() {
        for b in [0.7, 0.8, 0.9, 1.0] {
            let g = cost_exponent(b, velocity_scaling_exponent(b, DragLaw::Laminar).unwrap());
            assert!((g - (0.8 - 0.6 * b)).abs() < 1e-14);
        }
    }

    #[test]
    fn reference_lines_match_formulas() {
        for law in DragLaw::ALL {
            for b in [0.7, 0.85, 1.0] {
                let beta = velocity_scaling_exponent(b, law).unwrap();
                assert!((reference_line(Quantity::Beta, law).eval(b) - beta).abs() < 1e-14);
                assert!((reference_line(Quantity::Gamma, law).eval(b) - cost_exponent(b, beta)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn balance_rejects_inconsistent_triple() {
        assert_eq!(power_balance(1.0, 1.0, 0.25, 1.0, 0.0, 1e-12).unwrap(), 4.0);
        assert!(matches!(power_balance(1.0, 1.0, 0.25, 2.0, 0.0, 1e-12), Err(Error::Imbalance { .. })));
    }
}
