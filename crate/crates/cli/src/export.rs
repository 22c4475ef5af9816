//! Plot-ready views derived from the raw artifacts of a run.

use std::path::{Path, PathBuf};

use swimwake_core::energetics::{reference_line, DragLaw, Quantity};

use crate::config::ScenarioKind;
use crate::error::{CliError, Result};
use crate::output::{num, RunManifest, RunOutput, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    WakeStreet,
    Probe,
    Fig8,
    Fig9,
    Pet,
}

impl View {
    pub const ALL: [View; 5] = [View::WakeStreet, View::Probe, View::Fig8, View::Fig9, View::Pet];

    pub fn name(self) -> &'static str {
        match self {
            View::WakeStreet => "wake-street",
            View::Probe => "probe",
            View::Fig8 => "fig8",
            View::Fig9 => "fig9",
            View::Pet => "pet",
        }
    }

    pub fn parse(s: &str) -> Result<View> {
        View::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            let names: Vec<&str> = View::ALL.iter().map(|v| v.name()).collect();
            CliError::Usage(format!("unknown view `{s}`; expected one of {names:?}"))
        })
    }

    pub fn file(self) -> &'static str {
        match self {
            View::WakeStreet => "wake_street.csv",
            View::Probe => "probe_trace.csv",
            View::Fig8 => "fig8_lines.csv",
            View::Fig9 => "fig9_curves.csv",
            View::Pet => "pet_timeseries.csv",
        }
    }

    /// Views emitted automatically at the end of a run.
    pub fn defaults(kind: ScenarioKind) -> &'static [View] {
        match kind {
            ScenarioKind::Swim => &[View::Pet],
            ScenarioKind::Wing => &[View::WakeStreet, View::Probe],
            ScenarioKind::Scale => &[View::Fig8, View::Fig9],
            ScenarioKind::Validate => &[],
        }
    }
}

fn source(dir: &Path, name: &str) -> Result<Table> {
    let path = dir.join(name);
    if !path.is_file() {
        return Err(CliError::NotFound(path));
    }
    Table::read(&path)
}

fn parse(s: &str) -> Result<f64> {
    s.parse().map_err(|_| CliError::Output(format!("bad number `{s}`")))
}

/// Derive one view from the artifacts in `out.dir` and register the file.
pub fn render(out: &mut RunOutput, view: View) -> Result<PathBuf> {
    let dir = out.dir.clone();
    let table = match view {
        View::WakeStreet => {
            let src = source(&dir, "wake_snapshots.csv")?;
            let idx: Vec<usize> = ["t", "x", "y", "circulation"].iter().map(|c| src.column(c)).collect::<Result<_>>()?;
            let mut t = Table::new(&["t", "x", "y", "circulation"]);
            for r in &src.rows {
                t.push(idx.iter().map(|&i| r[i].clone()).collect());
            }
            t
        }
        View::Probe => {
            let src = source(&dir, "probes.csv")?;
            let idx: Vec<usize> = ["t", "probe", "u", "v"].iter().map(|c| src.column(c)).collect::<Result<_>>()?;
            let mut t = Table::new(&["t", "probe", "u", "v"]);
            for r in &src.rows {
                t.push(idx.iter().map(|&i| r[i].clone()).collect());
            }
            t
        }
        View::Pet => {
            let src = source(&dir, "pet.csv")?;
            let idx: Vec<usize> = ["t", "power", "energy", "thrust", "speed"].iter().map(|c| src.column(c)).collect::<Result<_>>()?;
            let mut t = Table::new(&["t", "P", "E", "T", "residual"]);
            for r in &src.rows {
                let v: Vec<f64> = idx.iter().map(|&i| parse(&r[i])).collect::<Result<_>>()?;
                t.push_nums(&[v[0], v[1], v[2], v[3], v[1] - v[2] - v[3] * v[4]]);
            }
            t
        }
        View::Fig8 => {
            let pts = source(&dir, "cp_points.csv")?;
            let fits = source(&dir, "fits.csv")?;
            let mut t = Table::new(&["kind", "level", "re", "cp"]);
            let (pl, pr, pc) = (pts.column("level")?, pts.column("re")?, pts.column("cp")?);
            for r in &pts.rows {
                t.push(vec!["data".into(), r[pl].clone(), r[pr].clone(), r[pc].clone()]);
            }
            let idx: Vec<usize> = ["level", "slope", "intercept", "re_min", "re_max"].iter().map(|c| fits.column(c)).collect::<Result<_>>()?;
            for r in &fits.rows {
                let (slope, icept, lo, hi) = (parse(&r[idx[1]])?, parse(&r[idx[2]])?, parse(&r[idx[3]])?.log10(), parse(&r[idx[4]])?.log10());
                for k in 0..=10 {
                    let lre = lo + (hi - lo) * k as f64 / 10.0;
                    t.push(vec!["fit".into(), r[idx[0]].clone(), num(10f64.powf(lre)), num(10f64.powf(icept + slope * lre))]);
                }
            }
            t
        }
        View::Fig9 => {
            let inter = source(&dir, "intersection.csv")?;
            let idx: Vec<usize> = ["quantity", "law", "line_slope", "line_intercept"].iter().map(|c| inter.column(c)).collect::<Result<_>>()?;
            let observed = |q: &str| -> Result<(f64, f64)> {
                let r = inter
                    .rows
                    .iter()
                    .find(|r| r[idx[0]] == q)
                    .ok_or_else(|| CliError::Output(format!("no {q} line in intersection.csv")))?;
                Ok((parse(&r[idx[2]])?, parse(&r[idx[3]])?))
            };
            let (bs, bi) = observed("beta")?;
            let (gs, gi) = observed("gamma")?;
            let mut t = Table::new(&["b", "series", "beta", "gamma"]);
            for k in 0..=30 {
                let b = 0.7 + 0.01 * k as f64;
                for law in DragLaw::ALL {
                    t.push(vec![
                        num(b),
                        law.name().into(),
                        num(reference_line(Quantity::Beta, law).eval(b)),
                        num(reference_line(Quantity::Gamma, law).eval(b)),
                    ]);
                }
                t.push(vec![num(b), "observed".into(), num(bs * b + bi), num(gs * b + gi)]);
            }
            t
        }
    };
    out.table(view.file(), &table)?;
    Ok(dir.join(view.file()))
}

/// `swimwake export <run-dir> <view>`: write the view and re-register the manifest.
pub fn export_plotdata(dir: &Path, view: &str) -> Result<PathBuf> {
    let view = View::parse(view)?;
    let mut manifest = RunManifest::load(dir)?;
    let mut out = RunOutput {
        dir: dir.to_path_buf(),
        files: manifest.files.clone(),
    };
    let path = render(&mut out, view)?;
    manifest.files = out.files;
    manifest.save(dir)?;
    Ok(path)
}
