//! Scenario configuration: one JSON file per scenario.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use swimwake_core::energetics::{ActivityLevel, DragLaw, FluidEnvironment, IngestOptions};
use swimwake_core::kinematics::{PlateMotion, WingShape};
use swimwake_core::nonlinear_wing::SolverConfig;
use swimwake_core::slender_body::Planform;

use crate::error::{CliError, Result};

pub const OUTPUT_ROOT_ENV: &str = "SWIMWAKE_OUTPUT_ROOT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Swim,
    Wing,
    Scale,
    Validate,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub name: String,
    /// relative paths resolve against the output root
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub swim: Option<SwimBlock>,
    #[serde(default)]
    pub wing: Option<WingBlock>,
    #[serde(default)]
    pub scale: Option<ScaleBlock>,
    #[serde(default)]
    pub validate: Option<ValidateBlock>,
    /// directory of the config file, for data paths
    #[serde(skip)]
    pub base_dir: PathBuf,
    #[serde(skip)]
    pub hash: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub kelvin: f64,
    pub conservation: f64,
    pub round_trip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            kelvin: 1e-10,
            conservation: 1e-10,
            round_trip: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub value: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwimBlock {
    pub planform: Planform,
    pub motion: PlateMotion,
    pub speed: f64,
    #[serde(default = "one")]
    pub periods: f64,
    #[serde(default = "default_samples")]
    pub samples_per_period: usize,
    #[serde(default = "default_stations")]
    pub stations: usize,
    #[serde(default)]
    pub expect_efficiency: Option<Target>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeFrame {
    /// fixed relative to the mean wing position (x measured from the initial leading-edge frame)
    #[default]
    Tunnel,
    /// fixed in the fluid at rest
    Fluid,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub frame: ProbeFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreetOrientation {
    /// thrust-producing: counter-clockwise row above the clockwise row
    Reverse,
    Karman,
    Any,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WingCheck {
    /// distance of the second vortex pair from the trailing edge cluster, in chords
    PairSpacing {
        target: f64,
        tol: f64,
        #[serde(default = "default_cluster")]
        min_cluster: usize,
    },
    /// negative mean over the first half period, positive over later whole periods
    ProbeSignature { probe: usize },
    /// cumulative wake circulation against the linear Wagner solution
    Wagner {
        tol: f64,
        #[serde(default = "default_skip")]
        skip: usize,
        #[serde(default = "default_refine")]
        refine: usize,
    },
    /// lift over the steady thin-airfoil value once the start is `chords` behind
    SteadyLift { tol: f64, chords: f64 },
    /// alternating lateral offsets of successive same-sign clusters
    WakeStreet {
        orientation: StreetOrientation,
        #[serde(default = "default_cluster")]
        min_cluster: usize,
        #[serde(default = "default_pairs")]
        min_pairs: usize,
    },
    /// wake momentum gained over the last period has the sign of the mean thrust
    MomentumRegime,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WingBlock {
    pub shape: WingShape,
    #[serde(default)]
    pub solver: SolverConfig,
    pub steps: usize,
    /// steps between wake snapshots; 0 keeps the final one only
    #[serde(default)]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub probes: Vec<Probe>,
    #[serde(default)]
    pub checks: Vec<WingCheck>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleBlock {
    pub data: PathBuf,
    #[serde(default)]
    pub ingest: IngestOptions,
    /// in the data's units; CGS water by default
    #[serde(default)]
    pub fluid: Option<FluidEnvironment>,
    #[serde(default)]
    pub surface_prefactor: Option<f64>,
    #[serde(default = "default_range")]
    pub b_range: [f64; 2],
    #[serde(default)]
    pub expect_slopes: BTreeMap<ActivityLevel, f64>,
    #[serde(default = "default_slope_tol")]
    pub slope_tol: f64,
    #[serde(default)]
    pub expect_law: Option<DragLaw>,
    #[serde(default)]
    pub expect_crossing: Option<Target>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateBlock {
    pub suite: String,
}

fn one() -> f64 {
    1.0
}
fn default_samples() -> usize {
    64
}
fn default_stations() -> usize {
    33
}
fn default_cluster() -> usize {
    10
}
fn default_pairs() -> usize {
    2
}
fn default_skip() -> usize {
    10
}
fn default_refine() -> usize {
    16
}
fn default_range() -> [f64; 2] {
    [0.7, 1.0]
}
fn default_slope_tol() -> f64 {
    0.03
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(path, format!("must be positive and finite, got {v}")))
    }
}

impl ScenarioConfig {
    /// Parse JSON text; errors carry the field path.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(path, e.into_inner().to_string())
        })?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.hash = hex(&Sha256::digest(text.as_bytes()));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                CliError::NotFound(path.to_path_buf())
            } else {
                CliError::io(path, e)
            }
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(CliError::config("name", "must be a non-empty plain file name"));
        }
        positive("tolerances.kelvin", self.tolerances.kelvin)?;
        positive("tolerances.conservation", self.tolerances.conservation)?;
        positive("tolerances.round_trip", self.tolerances.round_trip)?;
        let missing = |block: &str| CliError::config(block, format!("block required for kind `{block}`"));
        match self.kind {
            ScenarioKind::Swim => {
                let s = self.swim.as_ref().ok_or_else(|| missing("swim"))?;
                positive("swim.periods", s.periods)?;
                if s.samples_per_period < 2 {
                    return Err(CliError::config("swim.samples_per_period", "need at least 2"));
                }
                if s.stations == 0 {
                    return Err(CliError::config("swim.stations", "need at least 1"));
                }
                if !s.speed.is_finite() || s.speed < 0.0 {
                    return Err(CliError::config("swim.speed", "must be non-negative"));
                }
                if let Some(t) = s.expect_efficiency {
                    positive("swim.expect_efficiency.tol", t.tol)?;
                }
            }
            ScenarioKind::Wing => {
                let w = self.wing.as_ref().ok_or_else(|| missing("wing"))?;
                positive("wing.solver.dt", w.solver.dt)?;
                positive("wing.solver.kelvin_tol", w.solver.kelvin_tol)?;
                if w.steps == 0 {
                    return Err(CliError::config("wing.steps", "must be at least 1"));
                }
                for (i, c) in w.checks.iter().enumerate() {
                    let p = format!("wing.checks[{i}]");
                    match c {
                        WingCheck::PairSpacing { tol, .. } => positive(&format!("{p}.tol"), *tol)?,
                        WingCheck::Wagner { tol, refine, .. } => {
                            positive(&format!("{p}.tol"), *tol)?;
                            if *refine == 0 {
                                return Err(CliError::config(format!("{p}.refine"), "must be at least 1"));
                            }
                        }
                        WingCheck::SteadyLift { tol, chords } => {
                            positive(&format!("{p}.tol"), *tol)?;
                            positive(&format!("{p}.chords"), *chords)?;
                        }
                        WingCheck::ProbeSignature { probe } if *probe >= w.probes.len() => {
                            return Err(CliError::config(format!("{p}.probe"), "no such probe"));
                        }
                        _ => {}
                    }
                }
            }
            ScenarioKind::Scale => {
                let s = self.scale.as_ref().ok_or_else(|| missing("scale"))?;
                positive("scale.slope_tol", s.slope_tol)?;
                if !(s.b_range[0] < s.b_range[1]) {
                    return Err(CliError::config("scale.b_range", "must be increasing"));
                }
                if let Some(t) = s.expect_crossing {
                    positive("scale.expect_crossing.tol", t.tol)?;
                }
            }
            ScenarioKind::Validate => {
                let v = self.validate.as_ref().ok_or_else(|| missing("validate"))?;
                if !crate::validate::SUITES.contains(&v.suite.as_str()) {
                    return Err(CliError::config("validate.suite", format!("unknown suite `{}`", v.suite)));
                }
            }
        }
        Ok(())
    }

    /// Output directory: absolute `output_dir`, else under the output root.
    pub fn output_path(&self) -> PathBuf {
        match &self.output_dir {
            Some(p) if p.is_absolute() => p.clone(),
            other => {
                let root = std::env::var_os(OUTPUT_ROOT_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("runs"));
                root.join(other.clone().unwrap_or_else(|| PathBuf::from(&self.name)))
            }
        }
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
