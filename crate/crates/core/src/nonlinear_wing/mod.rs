//! Nonlinear time-marching vortex-sheet solver for a flexible 2D wing.
//!
//! The fluid is at rest at infinity and the wing advances toward -x. The bound
//! sheet is carried by N point vortices at xi_k = cos(2k pi / (2N+1)) with
//! collocation at x_r = cos((2r-1) pi / (2N+1)); this pairing selects the
//! density class that vanishes at the trailing edge xi = 1. Circulations are
//! clockwise-positive, u - i v = (1/2 pi i) sum Gamma_k / (Z_k - z).
//!
//! Each step: advance the geometry, solve the quasi-steady bound vorticity,
//! solve the correction that cancels the wake-induced normal velocity, shed one
//! element at the midpoint of the old and new trailing-edge positions with the
//! strength that closes the Kelvin ledger, and advect the wake by the explicit
//! midpoint rule.

mod analysis;
mod wagner;

pub use analysis::*;
pub use wagner::*;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, LU, Dyn};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Camber, WingShape};

type C64 = Complex64;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// bound vortices; 0 selects a count from the step size
    pub n_bound: usize,
    pub dt: f64,
    /// algebraic blob radius for wake and probe evaluations (half-chord units)
    pub blob: f64,
    /// regularization of bound-sheet velocities at wake points
    pub bound_blob: f64,
    /// near-singular core for wake-to-collocation influence
    pub core: f64,
    pub first_step_substeps: usize,
    pub relaxation: f64,
    pub rho: f64,
    pub kelvin_tol: f64,
    pub max_iterations: usize,
    pub iteration_tol: f64,
    /// steps between wake self-intersection scans; 0 disables them
    pub intersection_stride: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_bound: 0,
            dt: 0.05,
            blob: 0.1,
            bound_blob: 0.02,
            core: 1e-4,
            first_step_substeps: 40,
            relaxation: 0.8,
            rho: 1.0,
            kelvin_tol: 1e-10,
            max_iterations: 200,
            iteration_tol: 1e-9,
            intersection_stride: 250,
        }
    }
}

impl SolverConfig {
    /// Bound-vortex count keeping the newest wake element several node
    /// spacings behind the trailing edge.
    pub fn bound_count(&self, speed: f64) -> usize {
        if self.n_bound > 0 {
            return self.n_bound;
        }
        let d = (0.5 * speed.abs() * self.dt / 10f64.sqrt()).max(1e-6);
        let n = ((PI / (2.0 * d / 6.0).sqrt() - 1.0) / 2.0).ceil() as usize;
        n.clamp(64, 256)
    }
}

/// Vortex and collocation labels of the bound discretization.
pub fn bound_labels(n: usize) -> (Vec<f64>, Vec<f64>) {
    let m = (2 * n + 1) as f64;
    let vort = (1..=n).map(|k| (2.0 * k as f64 * PI / m).cos()).collect();
    let col = (1..=n).map(|r| ((2 * r - 1) as f64 * PI / m).cos()).collect();
    (vort, col)
}

/// Quadrature weight of vortex k for densities sqrt((1-xi)/(1+xi)) g(xi).
pub fn bound_weights(labels: &[f64]) -> Vec<f64> {
    let m = (2 * labels.len() + 1) as f64;
    labels.iter().map(|x| 2.0 * PI / m * (1.0 - x)).collect()
}

/// Conjugate velocity u - i v at z due to a clockwise vortex of unit strength
/// at `src`, regularized with an algebraic core of radius `delta`.
#[inline]
pub fn blob_kernel(src: C64, z: C64, delta: f64) -> C64 {
    let d = src - z;
    let r2 = d.norm_sqr() + delta * delta;
    if r2 == 0.0 {
        return C64::new(0.0, 0.0);
    }
    // (1 / 2 pi i) conj(d) / r2
    let c = d.conj() / (2.0 * PI * r2);
    C64::new(c.im, -c.re)
}

/// Sum of blob-regularized conjugate velocities of sources at z.
pub fn induced_velocity(sources: &[(C64, f64)], z: C64, delta: f64) -> C64 {
    sources
        .iter()
        .map(|&(p, g)| g * blob_kernel(p, z, delta))
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct WakeElement {
    pub label: f64,
    pub z: C64,
    pub circulation: f64,
    pub shed_time: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct WakeSheet {
    pub elements: Vec<WakeElement>,
}

impl WakeSheet {
    pub fn total_circulation(&self) -> f64 {
        self.elements.iter().map(|e| e.circulation).sum()
    }

    pub fn sources(&self) -> Vec<(C64, f64)> {
        self.elements.iter().map(|e| (e.z, e.circulation)).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSheet {
    pub labels: Vec<f64>,
    pub collocation: Vec<f64>,
    pub weights: Vec<f64>,
    /// point circulations of the quasi-steady and correction parts
    pub gamma0: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub z: Vec<C64>,
}

impl BoundSheet {
    pub fn circulation(&self, k: usize) -> f64 {
        self.gamma0[k] + self.gamma1[k]
    }

    /// Bounded loading g = Gamma_k / w_k at each vortex, with the Kutta
    /// factor sqrt((1-xi)/(1+xi)) removed.
    pub fn loading(&self) -> Vec<f64> {
        (0..self.labels.len())
            .map(|k| self.circulation(k) / self.weights[k])
            .collect()
    }

    pub fn sources(&self) -> Vec<(C64, f64)> {
        (0..self.labels.len())
            .map(|k| (self.z[k], self.circulation(k)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LedgerEntry {
    pub t: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma_w: f64,
    pub residual: f64,
}

/// Vortex impulse sample: I = sum Gamma i Z and A = sum Gamma |Z|^2 over bound
/// and wake, with the pivot kinematics needed for power.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ImpulseSample {
    pub t: f64,
    pub impulse: C64,
    pub angular: f64,
    pub pivot: C64,
    pub pivot_velocity: C64,
    pub theta_dot: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverState {
    pub t: f64,
    pub dt: f64,
    pub step: usize,
    pub bound: BoundSheet,
    pub wake: WakeSheet,
    pub ledger: Vec<LedgerEntry>,
    pub history: Vec<ImpulseSample>,
    pub blob: f64,
    pub diagnostics: Vec<String>,
    path_length: f64,
}

/// Geometry of the bound sheet at one instant.
struct Geometry {
    z_vort: Vec<C64>,
    z_col: Vec<C64>,
    t_col: Vec<C64>,
    un: Vec<f64>,
    te: C64,
}

/// Result of a quasi-steady solve.
#[derive(Debug, Clone)]
pub struct QuasiSteady {
    pub gamma: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<f64>,
}

pub struct WingSolver {
    pub config: SolverConfig,
    pub shape: WingShape,
    pub state: SolverState,
    flat: FlatSystem,
    n: usize,
}

impl WingSolver {
    pub fn new(shape: WingShape, config: SolverConfig) -> Result<Self> {
        if !(config.dt > 0.0) {
            return Err(Error::Domain {
                what: "dt",
                value: config.dt,
                domain: "(0, inf)".into(),
            });
        }
        let n = config.bound_count(shape.speed);
        let (labels, collocation) = bound_labels(n);
        let weights = bound_weights(&labels);
        let flat = FlatSystem::new(n);
        let z = labels.iter().map(|&x| shape.point(x, 0.0).z).collect();
        let (p0, pv0) = shape.pivot_motion(0.0);
        let state = SolverState {
            t: 0.0,
            dt: config.dt,
            step: 0,
            bound: BoundSheet {
                labels,
                collocation,
                weights,
                gamma0: vec![0.0; n],
                gamma1: vec![0.0; n],
                z,
            },
            wake: WakeSheet::default(),
            ledger: vec![],
            history: vec![ImpulseSample {
                t: 0.0,
                impulse: C64::new(0.0, 0.0),
                angular: 0.0,
                pivot: p0,
                pivot_velocity: pv0,
                theta_dot: shape.angle(0.0).1,
            }],
            blob: config.blob,
            diagnostics: vec![],
            path_length: 0.0,
        };
        Ok(Self {
            config,
            shape,
            state,
            flat,
            n,
        })
    }

    pub fn bound_count(&self) -> usize {
        self.n
    }

    fn geometry(&self, t: f64) -> Geometry {
        let b = &self.state.bound;
        let z_vort = b.labels.iter().map(|&x| self.shape.point(x, t).z).collect();
        let mut z_col = Vec::with_capacity(self.n);
        let mut t_col = Vec::with_capacity(self.n);
        let mut un = Vec::with_capacity(self.n);
        for &x in &b.collocation {
            let p = self.shape.point(x, t);
            z_col.push(p.z);
            t_col.push(p.z_xi);
            un.push(p.un);
        }
        Geometry {
            z_vort,
            z_col,
            t_col,
            un,
            te: self.shape.trailing_edge(t),
        }
    }

    /// Normal velocity at the collocation points due to point sources.
    fn normal_from(&self, g: &Geometry, sources: &[(C64, f64)]) -> Vec<f64> {
        let core = self.config.core;
        let f = |r: usize| {
            let w: C64 = sources
                .iter()
                .map(|&(p, s)| s * blob_kernel(p, g.z_col[r], core))
                .sum();
            -(w * g.t_col[r]).im
        };
        if sources.len() > 512 {
            (0..self.n).into_par_iter().map(f).collect()
        } else {
            (0..self.n).map(f).collect()
        }
    }

    /// Normal velocity at the collocation points due to a unit-strength
    /// uniform sheet along the trailing-edge path from `a` to `b`.
    fn normal_from_nascent(&self, g: &Geometry, a: C64, b: C64) -> Vec<f64> {
        if (b - a).norm() < 1e-12 {
            return self.normal_from(g, &[(0.5 * (a + b), 1.0)]);
        }
        (0..self.n)
            .map(|r| -(segment_kernel(a, b, g.z_col[r]) * g.t_col[r]).im)
            .collect()
    }

    /// Residual kernel: actual minus flat influence matrix.
    fn residual_matrix(&self, g: &Geometry) -> Option<DMatrix<f64>> {
        if matches!(self.shape.camber, Camber::Flat) {
            return None;
        }
        let b = &self.state.bound;
        Some(DMatrix::from_fn(self.n, self.n, |r, k| {
            let w = exact_kernel(g.z_vort[k], g.z_col[r]);
            let actual = -(w * g.t_col[r]).im;
            actual - 1.0 / (2.0 * PI * (b.labels[k] - b.collocation[r]))
        }))
    }

    fn quasi(&self, resid: Option<&DMatrix<f64>>, rhs: &[f64]) -> Result<QuasiSteady> {
        solve_fixed_point(&self.flat, resid, rhs, &self.config)
    }

    /// Bound solve with Kelvin closure. Returns (gamma0, gamma1, shed strength, shed position).
    fn solve_bound(&self, g: &Geometry, wake: &[(C64, f64)], te_prev: C64) -> Result<(Vec<f64>, Vec<f64>, f64, C64)> {
        let resid = self.residual_matrix(g);
        let q0 = self.quasi(resid.as_ref(), &g.un)?;
        let uw = self.normal_from(g, wake);
        let neg: Vec<f64> = uw.iter().map(|v| -v).collect();
        let q1 = self.quasi(resid.as_ref(), &neg)?;
        let z_new = 0.5 * (te_prev + g.te);
        let uu = self.normal_from_nascent(g, te_prev, g.te);
        let neg_u: Vec<f64> = uu.iter().map(|v| -v).collect();
        let qu = self.quasi(resid.as_ref(), &neg_u)?;
        let s0: f64 = q0.gamma.iter().sum();
        let s1: f64 = q1.gamma.iter().sum();
        let su: f64 = qu.gamma.iter().sum();
        let gw: f64 = wake.iter().map(|s| s.1).sum();
        let dg = -(s0 + s1 + gw) / (1.0 + su);
        let g1: Vec<f64> = q1.gamma.iter().zip(&qu.gamma).map(|(a, b)| a + dg * b).collect();
        Ok((q0.gamma, g1, dg, z_new))
    }

    /// Conjugate velocities of the wake elements due to bound and wake.
    fn wake_velocities(&self, bound: &[(C64, f64)], wake: &[(C64, f64)]) -> Vec<C64> {
        let delta = self.config.blob;
        let db = self.config.bound_blob;
        let f = |j: usize| {
            let z = wake[j].0;
            let mut w = C64::new(0.0, 0.0);
            for &(p, s) in bound {
                w += s * blob_kernel(p, z, db);
            }
            for (i, &(p, s)) in wake.iter().enumerate() {
                if i != j {
                    w += s * blob_kernel(p, z, delta);
                }
            }
            w
        };
        if wake.len() > 256 {
            (0..wake.len()).into_par_iter().map(f).collect()
        } else {
            (0..wake.len()).map(f).collect()
        }
    }

    fn advance(&mut self, dt: f64) -> Result<()> {
        let t0 = self.state.t;
        let t1 = t0 + dt;
        let th = t0 + 0.5 * dt;
        let te0 = self.shape.trailing_edge(t0);
        let wake0 = self.state.wake.sources();
        let bound0 = self.state.bound.sources();

        // half step with the velocity at t0
        let q0 = self.wake_velocities(&bound0, &wake0);
        let mut wake_h: Vec<(C64, f64)> = wake0
            .iter()
            .zip(&q0)
            .map(|(&(p, s), w)| (p + 0.5 * dt * w.conj(), s))
            .collect();
        let gh = self.geometry(th);
        let (g0h, g1h, dgh, znh) = self.solve_bound(&gh, &wake_h, te0)?;
        let bound_h: Vec<(C64, f64)> = gh
            .z_vort
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, g0h[k] + g1h[k]))
            .collect();
        wake_h.push((znh, dgh));
        let qh = self.wake_velocities(&bound_h, &wake_h);
        let moved: Vec<C64> = wake0
            .iter()
            .zip(&qh)
            .map(|(&(p, _), w)| p + dt * w.conj())
            .collect();
        for (e, z) in self.state.wake.elements.iter_mut().zip(&moved) {
            e.z = *z;
        }

        // full solve at t1
        let g1 = self.geometry(t1);
        let wake1 = self.state.wake.sources();
        let (gam0, gam1, dg, z_new) = self.solve_bound(&g1, &wake1, te0)?;
        let moved_te = (g1.te - te0).norm();
        self.state.path_length += moved_te;
        if !(dg == 0.0 && moved_te == 0.0) {
            self.state.wake.elements.push(WakeElement {
                label: 1.0 + self.state.path_length - 0.5 * moved_te,
                z: z_new,
                circulation: dg,
                shed_time: t1,
            });
        }
        self.state.bound.gamma0 = gam0;
        self.state.bound.gamma1 = gam1;
        self.state.bound.z = g1.z_vort;
        self.state.t = t1;

        let s0: f64 = self.state.bound.gamma0.iter().sum();
        let s1: f64 = self.state.bound.gamma1.iter().sum();
        let sw = self.state.wake.total_circulation();
        let residual = (s0 + s1 + sw).abs();
        self.state.ledger.push(LedgerEntry {
            t: t1,
            gamma0: s0,
            gamma1: s1,
            gamma_w: sw,
            residual,
        });
        if !(residual <= self.config.kelvin_tol) {
            return Err(Error::Ledger {
                step: self.state.ledger.len(),
                residual,
            });
        }
        self.record_impulse();
        Ok(())
    }

    fn record_impulse(&mut self) {
        let t = self.state.t;
        let mut imp = C64::new(0.0, 0.0);
        let mut ang = 0.0;
        let i = C64::new(0.0, 1.0);
        for (p, g) in self.state.bound.sources().into_iter().chain(self.state.wake.sources()) {
            imp += g * i * p;
            ang += g * p.norm_sqr();
        }
        let (p0, pv) = self.shape.pivot_motion(t);
        self.state.history.push(ImpulseSample {
            t,
            impulse: imp,
            angular: ang,
            pivot: p0,
            pivot_velocity: pv,
            theta_dot: self.shape.angle(t).1,
        });
    }

    /// One time step (sub-cycled on the very first step).
    pub fn step(&mut self) -> Result<()> {
        let dt = self.config.dt;
        if self.state.step == 0 && self.config.first_step_substeps > 1 {
            let m = self.config.first_step_substeps;
            for _ in 0..m {
                self.advance(dt / m as f64)?;
            }
        } else {
            self.advance(dt)?;
        }
        self.state.step += 1;
        let stride = self.config.intersection_stride;
        if stride > 0 && self.state.step % stride == 0 {
            let crossings = wake_self_intersections(&self.state.wake);
            if crossings > 0 {
                self.state.diagnostics.push(format!(
                    "step {}: wake polyline self-intersects at {crossings} segment pairs",
                    self.state.step
                ));
            }
        }
        Ok(())
    }

    pub fn run(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// Conjugate velocity at a field point (blob-regularized everywhere).
    pub fn velocity_at(&self, z: C64) -> C64 {
        let delta = self.config.blob;
        let b = induced_velocity(&self.state.bound.sources(), z, delta);
        let w = induced_velocity(&self.state.wake.sources(), z, delta);
        b + w
    }

    /// Force samples from the impulse history.
    pub fn forces(&self) -> Vec<ForceSample> {
        force_history(&self.state.history, self.config.rho)
    }
}

/// One `WingSolver::step`.
pub fn march_step(solver: &mut WingSolver) -> Result<()> {
    solver.step()
}

/// Conjugate velocity at z of a clockwise uniform vortex sheet of unit total
/// strength on the straight segment from a to b.
pub fn segment_kernel(a: C64, b: C64, z: C64) -> C64 {
    ((b - z) / (a - z)).ln() / (C64::new(0.0, 2.0 * PI) * (b - a))
}

#[inline]
fn exact_kernel(src: C64, z: C64) -> C64 {
    let d = src - z;
    C64::new(0.0, -1.0) / (2.0 * PI * d)
}

fn solve_fixed_point(
    sys: &FlatSystem,
    resid: Option<&DMatrix<f64>>,
    rhs: &[f64],
    cfg: &SolverConfig,
) -> Result<QuasiSteady> {
    let b = DVector::from_column_slice(rhs);
    let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flat = &sys.lu;
    let direct = flat
        .solve(&b)
        .ok_or_else(|| Error::Numerical("singular flat-plate influence matrix".into()))?;
    let Some(r) = resid else {
        return Ok(QuasiSteady {
            gamma: direct.as_slice().to_vec(),
            residual: 0.0,
            iterations: 1,
            history: vec![],
        });
    };
    if scale == 0.0 {
        return Ok(QuasiSteady {
            gamma: vec![0.0; rhs.len()],
            residual: 0.0,
            iterations: 0,
            history: vec![],
        });
    }
    let mut omega = cfg.relaxation;
    let mut all = vec![];
    for _attempt in 0..3 {
        let mut g = direct.clone();
        let mut history = vec![];
        let mut prev = f64::INFINITY;
        let mut diverged = false;
        for it in 0..cfg.max_iterations {
            // actual residual A g - rhs with A = flat + r
            let ag = &sys.matrix * &g + r * &g;
            let res = (&ag - &b).amax() / scale;
            history.push(res);
            if res < cfg.iteration_tol {
                return Ok(QuasiSteady {
                    gamma: g.as_slice().to_vec(),
                    residual: res,
                    iterations: it,
                    history,
                });
            }
            if !res.is_finite() || (it > 5 && res > 10.0 * prev) {
                diverged = true;
                break;
            }
            prev = prev.min(res);
            let target = flat
                .solve(&(&b - r * &g))
                .ok_or_else(|| Error::Numerical("singular flat-plate influence matrix".into()))?;
            g = &g * (1.0 - omega) + target * omega;
        }
        all.extend(history);
        if !diverged {
            break;
        }
        omega *= 0.5;
    }
    Err(Error::NonConvergence { history: all })
}

/// Flat-plate influence matrix and its factorization.
pub struct FlatSystem {
    matrix: DMatrix<f64>,
    lu: LU<f64, Dyn, Dyn>,
}

impl FlatSystem {
    pub fn new(n: usize) -> Self {
        let (labels, col) = bound_labels(n);
        let matrix = DMatrix::from_fn(n, n, |r, k| 1.0 / (2.0 * PI * (labels[k] - col[r])));
        let lu = matrix.clone().lu();
        Self { matrix, lu }
    }
}

/// Quasi-steady bound circulation of the wing at time t with no wake.
pub fn solve_quasisteady(shape: &WingShape, t: f64, n: usize, cfg: &SolverConfig) -> Result<QuasiSteady> {
    let (labels, col) = bound_labels(n);
    let flat = FlatSystem::new(n);
    let zv: Vec<C64> = labels.iter().map(|&x| shape.point(x, t).z).collect();
    let pts: Vec<_> = col.iter().map(|&x| shape.point(x, t)).collect();
    let un: Vec<f64> = pts.iter().map(|p| p.un).collect();
    let resid = if matches!(shape.camber, Camber::Flat) {
        None
    } else {
        Some(DMatrix::from_fn(n, n, |r, k| {
            let w = exact_kernel(zv[k], pts[r].z);
            -(w * pts[r].z_xi).im - 1.0 / (2.0 * PI * (labels[k] - col[r]))
        }))
    };
    solve_fixed_point(&flat, resid.as_ref(), &un, cfg)
}

/// Force on the wing and moments from centered differences of the impulse.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ForceSample {
    pub t: f64,
    pub fx: f64,
    pub fz: f64,
    /// counter-clockwise moment about the origin
    pub torque: f64,
    /// counter-clockwise moment about the pivot
    pub pivot_moment: f64,
    /// rate of work done on the fluid by the oscillatory motion
    pub power: f64,
}

fn three_point(t: [f64; 3], f: [f64; 3]) -> f64 {
    let h1 = t[1] - t[0];
    let h2 = t[2] - t[1];
    -h2 / (h1 * (h1 + h2)) * f[0] + (h2 - h1) / (h1 * h2) * f[1] + h1 / (h2 * (h1 + h2)) * f[2]
}

pub fn force_history(history: &[ImpulseSample], rho: f64) -> Vec<ForceSample> {
    let mut out = Vec::with_capacity(history.len().saturating_sub(2));
    for w in history.windows(3) {
        let ts = [w[0].t, w[1].t, w[2].t];
        let dix = three_point(ts, [w[0].impulse.re, w[1].impulse.re, w[2].impulse.re]);
        let diz = three_point(ts, [w[0].impulse.im, w[1].impulse.im, w[2].impulse.im]);
        let da = three_point(ts, [w[0].angular, w[1].angular, w[2].angular]);
        let fx = -rho * dix;
        let fz = -rho * diz;
        let torque = -0.5 * rho * da;
        let s = &w[1];
        let pivot_moment = torque - (s.pivot.re * fz - s.pivot.im * fx);
        let power = -(fz * s.pivot_velocity.im + pivot_moment * s.theta_dot);
        out.push(ForceSample {
            t: s.t,
            fx,
            fz,
            torque,
            pivot_moment,
            power,
        });
    }
    out
}

/// Latest available force (centered at the second-to-last sample).
pub fn forces_impulse(state: &SolverState, rho: f64) -> Result<ForceSample> {
    if state.history.len() < 3 {
        return Err(Error::NotReady(format!(
            "{} impulse samples, need 3",
            state.history.len()
        )));
    }
    let n = state.history.len();
    Ok(force_history(&state.history[n - 3..], rho)[0])
}

/// Longitudinal velocity at a fixed point.
pub fn wake_velocity_probe(solver: &WingSolver, z: C64) -> f64 {
    solver.velocity_at(z).re
}

/// Number of crossing pairs among non-adjacent segments of the wake polyline.
pub fn wake_self_intersections(wake: &WakeSheet) -> usize {
    let p: Vec<C64> = wake.elements.iter().map(|e| e.z).collect();
    if p.len() < 4 {
        return 0;
    }
    let cross = |a: C64, b: C64| a.re * b.im - a.im * b.re;
    let mut count = 0;
    for i in 0..p.len() - 1 {
        let (a, b) = (p[i], p[i + 1]);
        for j in i + 2..p.len() - 1 {
            let (c, d) = (p[j], p[j + 1]);
            let d1 = cross(b - a, c - a);
            let d2 = cross(b - a, d - a);
            let d3 = cross(d - c, a - c);
            let d4 = cross(d - c, b - c);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

/// Period-mean thrust, power and efficiency over [t0, t1] (trapezoid rule).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanPerformance {
    pub thrust: f64,
    pub lift: f64,
    pub power: f64,
    pub efficiency: f64,
}

pub fn mean_performance(forces: &[ForceSample], speed: f64, t0: f64, t1: f64) -> Result<MeanPerformance> {
    let sel: Vec<&ForceSample> = forces.iter().filter(|f| f.t >= t0 - 1e-12 && f.t <= t1 + 1e-12).collect();
    if sel.len() < 3 {
        return Err(Error::NotReady("too few force samples in the averaging window".into()));
    }
    let mut acc = [0.0; 3];
    let mut span = 0.0;
    for w in sel.windows(2) {
        let h = w[1].t - w[0].t;
        span += h;
        acc[0] += 0.5 * h * (-w[0].fx - w[1].fx);
        acc[1] += 0.5 * h * (w[0].fz + w[1].fz);
        acc[2] += 0.5 * h * (w[0].power + w[1].power);
    }
    let (thrust, lift, power) = (acc[0] / span, acc[1] / span, acc[2] / span);
    Ok(MeanPerformance {
        thrust,
        lift,
        power,
        efficiency: thrust * speed / power,
    })
}
