//! Cauchy principal-value quadrature and the cross-flow operator pair.
//!
//! Densities on the strip |y| < b are clockwise-positive: the upwash operator is
//! W(y) = (1/2pi) PV int gamma(y') / (y' - y) dy'. In t = y/b a density of the
//! edge-singular class is gamma = sum c_n T_n(t) / sqrt(1 - t^2), for which
//! W = (1/2) sum c_n U_{n-1}(t). Off the cut, with z = zeta/b,
//! s = sqrt(z - 1) sqrt(z + 1) and w = z - s (so |w| < 1 and s ~ z at infinity),
//!
//!   chi = v - i w_z = (i/2) sum c_n w^n / s,   f = -(i b/2) sum (c_n/n) w^n.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

type C64 = Complex64;

/// Chebyshev–Gauss nodes y_j = b cos((2j - 1) pi / 2N) on the strip.
#[derive(Debug, Clone)]
pub struct ChebGrid {
    pub n: usize,
    pub b: f64,
    pub theta: Vec<f64>,
    pub nodes: Vec<f64>,
}

impl ChebGrid {
    pub fn new(n: usize, b: f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::Domain {
                what: "N",
                value: n as f64,
                domain: ">= 8".into(),
            });
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain {
                what: "b",
                value: b,
                domain: "(0, inf)".into(),
            });
        }
        let theta: Vec<f64> = (1..=n)
            .map(|j| (2 * j - 1) as f64 * PI / (2 * n) as f64)
            .collect();
        let nodes = theta.iter().map(|th| b * th.cos()).collect();
        Ok(Self { n, b, theta, nodes })
    }

    /// Weight of every node for integrands carrying 1/sqrt(1 - t^2).
    pub fn weight(&self) -> f64 {
        PI / self.n as f64
    }
}

/// Declared endpoint behaviour of a density on (-b, b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    /// density ~ g(t) / sqrt(1 - t^2)
    InverseSqrt,
    /// density ~ g(t) sqrt(1 - t^2)
    SqrtZero,
    /// bounded, no particular edge structure
    Bounded,
}

/// PV int_{-b}^{b} density(y') / (y' - y) dy'. Inside the strip the
/// singularity is subtracted and its known principal value added back; outside
/// it the sum is an ordinary quadrature.
pub fn pv_integral(grid: &ChebGrid, density: &dyn Fn(f64) -> f64, endpoint: Endpoint, y: f64) -> f64 {
    pv_with_n(grid.n, grid.b, density, endpoint, y, 0)
}

fn pv_with_n(n: usize, b: f64, density: &dyn Fn(f64) -> f64, endpoint: Endpoint, y: f64, depth: usize) -> f64 {
    let t = y / b;
    let inside = t.abs() < 1.0;
    // (t_j, w_j, g_j) with density = g * weight function
    let rule: Vec<(f64, f64, f64)> = match endpoint {
        Endpoint::InverseSqrt => (1..=n)
            .map(|j| {
                let th = (2 * j - 1) as f64 * PI / (2 * n) as f64;
                let tj = th.cos();
                (tj, PI / n as f64, density(b * tj) * th.sin())
            })
            .collect(),
        Endpoint::SqrtZero => (1..=n)
            .map(|j| {
                let th = j as f64 * PI / (n + 1) as f64;
                let (s, tj) = th.sin_cos();
                (tj, PI / (n + 1) as f64 * s * s, density(b * tj) / s)
            })
            .collect(),
        Endpoint::Bounded => {
            let gl = GaussLegendre::new(n);
            gl.nodes
                .iter()
                .zip(&gl.weights)
                .map(|(&tj, &wj)| (tj, wj, density(b * tj)))
                .collect()
        }
    };
    if inside && depth < 3 && rule.iter().any(|r| (r.0 - t).abs() < 1e-12) {
        return pv_with_n(n + 1, b, density, endpoint, y, depth + 1);
    }
    if !inside {
        return rule.iter().map(|&(tj, wj, gj)| wj * gj / (tj - t)).sum();
    }
    let sq = (1.0 - t * t).sqrt();
    let (g0, base) = match endpoint {
        Endpoint::InverseSqrt => (density(y) * sq, 0.0),
        Endpoint::SqrtZero => (density(y) / sq, -PI * t),
        Endpoint::Bounded => (density(y), ((1.0 - t) / (1.0 + t)).ln()),
    };
    let smooth: f64 = rule.iter().map(|&(tj, wj, gj)| wj * (gj - g0) / (tj - t)).sum();
    smooth + g0 * base
}

/// The upwash operator G applied to a density by quadrature.
pub fn upwash_from_vorticity(grid: &ChebGrid, gamma: &dyn Fn(f64) -> f64, endpoint: Endpoint, y: f64) -> f64 {
    pv_integral(grid, gamma, endpoint, y) / (2.0 * PI)
}

/// Chebyshev coefficients a_n of the interpolant through values at the
/// first-kind nodes, g = sum a_n T_n.
pub fn chebyshev_coefficients(grid: &ChebGrid, values: &[f64]) -> Vec<f64> {
    let n = grid.n;
    let mut a = vec![0.0; n];
    for (k, ak) in a.iter_mut().enumerate() {
        let s: f64 = grid
            .theta
            .iter()
            .zip(values)
            .map(|(th, v)| v * (k as f64 * th).cos())
            .sum();
        *ak = 2.0 * s / n as f64;
    }
    a[0] *= 0.5;
    a
}

/// sum a_n T_n(t) by Clenshaw.
pub fn eval_t_series(a: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in a.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    a.first().copied().unwrap_or(0.0) + t * b1 - b2
}

/// sum d_m U_m(t) by Clenshaw.
pub fn eval_u_series(d: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in d.iter().rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    b1
}

/// Re-expands sum a_n T_n as sum d_m U_m.
pub fn t_to_u(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let get = |k: usize| if k < n { a[k] } else { 0.0 };
    (0..n)
        .map(|m| {
            if m == 0 {
                get(0) - 0.5 * get(2)
            } else {
                0.5 * (get(m) - get(m + 2))
            }
        })
        .collect()
}

/// An edge-singular strip density sum c_n T_n(t)/sqrt(1-t^2) and the
/// cross-flow fields it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossFlowField {
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl CrossFlowField {
    pub fn zero(b: f64) -> Self {
        Self { b, coeffs: vec![] }
    }

    /// gamma(y) for |y| < b.
    pub fn density(&self, y: f64) -> f64 {
        let t = y / self.b;
        eval_t_series(&self.coeffs, t) / (1.0 - t * t).sqrt()
    }

    /// G[gamma](y) from the series.
    pub fn upwash(&self, y: f64) -> f64 {
        let t = y / self.b;
        let d: Vec<f64> = self.coeffs.iter().skip(1).map(|c| 0.5 * c).collect();
        eval_u_series(&d, t)
    }

    fn sw(&self, zeta: C64) -> (C64, C64) {
        let z = zeta / self.b;
        let s = (z - 1.0).sqrt() * (z + 1.0).sqrt();
        (s, z - s)
    }

    /// Complex velocity chi = df/dzeta off the cut.
    pub fn chi(&self, zeta: C64) -> C64 {
        let (s, w) = self.sw(zeta);
        let mut acc = C64::new(0.0, 0.0);
        let mut wn = C64::new(1.0, 0.0);
        for &c in &self.coeffs {
            acc += c * wn;
            wn *= w;
        }
        C64::new(0.0, 0.5) * acc / s
    }

    /// Complex potential, zero at infinity when the net circulation vanishes.
    pub fn potential(&self, zeta: C64) -> C64 {
        let (_, w) = self.sw(zeta);
        let mut acc = C64::new(0.0, 0.0);
        let mut wn = w;
        for (n, &c) in self.coeffs.iter().enumerate().skip(1) {
            acc += c / n as f64 * wn;
            wn *= w;
        }
        if let Some(&c0) = self.coeffs.first() {
            if c0 != 0.0 {
                acc += c0 * w.ln();
            }
        }
        C64::new(0.0, -0.5 * self.b) * acc
    }

    /// Limits (phi, v, w) on the cut from above (`upper`) or below.
    pub fn on_cut(&self, y: f64, upper: bool) -> (f64, f64, f64) {
        let t = (y / self.b).clamp(-1.0, 1.0);
        let th = t.acos();
        let sgn = if upper { 1.0 } else { -1.0 };
        let w = C64::from_polar(1.0, -sgn * th);
        let s = C64::new(0.0, sgn * (1.0 - t * t).sqrt());
        let mut acc_chi = C64::new(0.0, 0.0);
        let mut acc_f = C64::new(0.0, 0.0);
        let mut wn = C64::new(1.0, 0.0);
        for (n, &c) in self.coeffs.iter().enumerate() {
            acc_chi += c * wn;
            if n > 0 {
                acc_f += c / n as f64 * wn;
            }
            wn *= w;
        }
        let f = C64::new(0.0, -0.5 * self.b) * acc_f;
        let chi = C64::new(0.0, 0.5) * acc_chi / s;
        (f.re, chi.re, -chi.im)
    }

    /// Lateral momentum rho int (phi_- - phi_+) dy per unit length.
    pub fn momentum(&self, rho: f64) -> f64 {
        let c1 = self.coeffs.get(1).copied().unwrap_or(0.0);
        0.5 * rho * PI * self.b * self.b * c1
    }

    /// Net circulation int gamma dy.
    pub fn circulation(&self) -> f64 {
        PI * self.b * self.coeffs.first().copied().unwrap_or(0.0)
    }
}

/// The inverse operator: the zero-circulation, edge-singular density with
/// G[gamma] = W, equivalently gamma = -(2/pi) (1/H(y)) PV int H(y') W(y') / (y' - y) dy'
/// with H = sqrt(b^2 - y^2). The round trip is verified on the interlaced
/// grid; a residual above `tol` (relative to max |W|) is an accuracy error.
pub fn invert_upwash(grid: &ChebGrid, upwash: &dyn Fn(f64) -> f64, tol: f64) -> Result<CrossFlowField> {
    let values: Vec<f64> = grid.nodes.iter().map(|&y| upwash(y)).collect();
    let field = invert_samples(grid, &values);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for j in 0..grid.n {
        let th = j as f64 * PI / grid.n as f64;
        let y = grid.b * th.cos();
        worst = worst.max((field.upwash(y) - upwash(y)).abs());
    }
    let achieved = worst / scale;
    if scale > f64::MIN_POSITIVE && achieved > tol {
        return Err(Error::Accuracy { achieved, tol });
    }
    Ok(field)
}

/// Inversion from samples at the grid nodes (no round-trip check).
pub fn invert_samples(grid: &ChebGrid, values: &[f64]) -> CrossFlowField {
    let a = chebyshev_coefficients(grid, values);
    let d = t_to_u(&a);
    let mut coeffs = vec![0.0; d.len() + 1];
    for (m, dm) in d.iter().enumerate() {
        coeffs[m + 1] = 2.0 * dm;
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    CrossFlowField { b: grid.b, coeffs }
}

/// Cross-flow solution for a prescribed upwash W(y).
pub fn cross_flow_solution(upwash: &dyn Fn(f64) -> f64, b: f64, n: usize) -> Result<CrossFlowField> {
    let grid = ChebGrid::new(n, b)?;
    invert_upwash(&grid, upwash, 1e-8)
}

/// Acceleration potential F for a material upwash rate DW: the same
/// construction with DW in place of W. F vanishes at infinity and is
/// continuous at the edges y = +-b.
pub fn acceleration_potential(dw: &dyn Fn(f64) -> f64, b: f64, n: usize) -> Result<CrossFlowField> {
    cross_flow_solution(dw, b, n)
}

/// f(zeta; x, t) transported along x - U t = const from the inlet station x_e:
/// f(x, t) = f(x_e, t - (x - x_e)/U) + (1/U) int_{x_e}^{x} F(x', t - (x - x')/U) dx'.
pub struct Characteristics<'a> {
    pub inlet: &'a dyn Fn(f64) -> CrossFlowField,
    pub source: &'a dyn Fn(f64, f64) -> CrossFlowField,
    pub speed: f64,
    pub x_inlet: f64,
    pub max_dx: f64,
}

impl<'a> Characteristics<'a> {
    fn nodes(&self, x: f64) -> Result<Vec<(f64, f64)>> {
        let len = x - self.x_inlet;
        if len < 0.0 {
            return Err(Error::Domain {
                what: "x",
                value: x,
                domain: format!("[{}, inf)", self.x_inlet),
            });
        }
        if self.speed <= 0.0 {
            return Err(Error::Domain {
                what: "U",
                value: self.speed,
                domain: "(0, inf)".into(),
            });
        }
        if !(self.max_dx > 0.0) {
            return Err(Error::Resolution(format!("max_dx = {}", self.max_dx)));
        }
        let panels = ((len / self.max_dx).ceil() as usize).max(1);
        let gl = GaussLegendre::new(8);
        let h = len / panels as f64;
        let mut out = Vec::with_capacity(panels * 8);
        for p in 0..panels {
            let a = self.x_inlet + p as f64 * h;
            out.extend(gl.mapped(a, a + h));
        }
        Ok(out)
    }

    fn combine(&self, x: f64, t: f64, eval: &dyn Fn(&CrossFlowField) -> C64) -> Result<C64> {
        if x < self.x_inlet {
            return Err(Error::Domain {
                what: "x",
                value: x,
                domain: format!("[{}, inf)", self.x_inlet),
            });
        }
        let u = self.speed;
        let mut acc = eval(&(self.inlet)(t - (x - self.x_inlet) / u));
        if x > self.x_inlet {
            for (xp, w) in self.nodes(x)? {
                acc += w / u * eval(&(self.source)(xp, t - (x - xp) / u));
            }
        }
        Ok(acc)
    }

    pub fn potential(&self, zeta: C64, x: f64, t: f64) -> Result<C64> {
        self.combine(x, t, &|f| f.potential(zeta))
    }

    pub fn velocity(&self, zeta: C64, x: f64, t: f64) -> Result<C64> {
        self.combine(x, t, &|f| f.chi(zeta))
    }

    /// Sidewash W_v = -Im(df/dzeta).
    pub fn sidewash(&self, zeta: C64, x: f64, t: f64) -> Result<f64> {
        Ok(-self.velocity(zeta, x, t)?.im)
    }
}

/// Builds the transported field; fails when the x-step is not positive.
pub fn integrate_characteristics<'a>(
    source: &'a dyn Fn(f64, f64) -> CrossFlowField,
    inlet: &'a dyn Fn(f64) -> CrossFlowField,
    speed: f64,
    x_inlet: f64,
    max_dx: f64,
) -> Result<Characteristics<'a>> {
    if !(max_dx > 0.0 && max_dx.is_finite()) {
        return Err(Error::Resolution(format!("max_dx = {max_dx}")));
    }
    Ok(Characteristics {
        inlet,
        source,
        speed,
        x_inlet,
        max_dx,
    })
}
