//! Linear-limit oracle: Wagner's equation Gamma0(t) + int_1^xm K(x) gamma_w dx = 0
//! with K(x) = sqrt((x+1)/(x-1)), discretized on a given time grid with one
//! wake element per interval placed at the midpoint of the trailing-edge path.
//! The element shed in the current interval is weighted by the kernel mean
//! over its path instead, which carries the edge singularity.

use crate::error::{Error, Result};
use crate::kinematics::WingShape;
use crate::quadrature::GaussLegendre;

/// Mean of the kernel over (1, 1 + len), from the antiderivative
/// sqrt(x^2 - 1) + acosh(x).
pub fn wagner_kernel_mean(len: f64) -> Result<f64> {
    if !(len > 0.0) {
        return Err(Error::Domain {
            what: "len",
            value: len,
            domain: "(0, inf)".into(),
        });
    }
    let x = 1.0 + len;
    Ok((((x * x - 1.0).sqrt()) + x.acosh()) / len)
}

pub fn wagner_kernel(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            domain: "(1, inf)".into(),
        });
    }
    Ok(((x + 1.0) / (x - 1.0)).sqrt())
}

#[derive(Debug, Clone)]
pub struct WagnerSolution {
    pub speed: f64,
    pub times: Vec<f64>,
    pub gamma0: Vec<f64>,
    /// strength of the element shed on (t_{k-1}, t_k], indexed by k - 1
    pub strengths: Vec<f64>,
}

impl WagnerSolution {
    /// Position (from mid-chord, half-chord units) of element k at sample n >= k.
    pub fn position(&self, k: usize, n: usize) -> f64 {
        let t = &self.times;
        1.0 + self.speed * (t[n] - t[k]) + 0.5 * self.speed * (t[k] - t[k - 1])
    }

    pub fn x_m(&self, n: usize) -> f64 {
        1.0 + self.speed * (self.times[n] - self.times[0])
    }

    /// Net wake circulation at sample n.
    pub fn wake_circulation(&self, n: usize) -> f64 {
        self.strengths[..n].iter().sum()
    }

    pub fn bound_circulation(&self, n: usize) -> f64 {
        -self.wake_circulation(n)
    }

    /// Wake density samples (x, gamma_w) at sample n, oldest element first.
    pub fn density(&self, n: usize) -> Vec<(f64, f64)> {
        let t = &self.times;
        (1..=n)
            .rev()
            .map(|k| {
                let dx = self.speed * (t[k] - t[k - 1]);
                (self.position(k, n), self.strengths[k - 1] / dx)
            })
            .collect()
    }

    fn weight(&self, k: usize, n: usize) -> Result<f64> {
        if k == n {
            wagner_kernel_mean(self.speed * (self.times[n] - self.times[n - 1]))
        } else {
            wagner_kernel(self.position(k, n))
        }
    }

    /// |Gamma0 + sum K_k dGamma_k| at sample n.
    pub fn residual(&self, n: usize) -> f64 {
        let s: f64 = (1..=n)
            .map(|k| self.weight(k, n).unwrap_or(0.0) * self.strengths[k - 1])
            .sum();
        (self.gamma0[n] + s).abs()
    }
}

/// Solve on `times` (starting at the impulsive start, Gamma0 = 0 before it).
pub fn wagner_solve(times: &[f64], gamma0: &dyn Fn(f64) -> f64, speed: f64) -> Result<WagnerSolution> {
    if times.len() < 2 || !(speed > 0.0) {
        return Err(Error::Domain {
            what: "speed",
            value: speed,
            domain: "(0, inf) with at least two samples".into(),
        });
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Sequencing("sample times must increase".into()));
    }
    let g0: Vec<f64> = times.iter().map(|&t| gamma0(t)).collect();
    let mut sol = WagnerSolution {
        speed,
        times: times.to_vec(),
        gamma0: g0,
        strengths: Vec::with_capacity(times.len() - 1),
    };
    for n in 1..times.len() {
        let mut known = 0.0;
        for k in 1..n {
            known += sol.weight(k, n)? * sol.strengths[k - 1];
        }
        let kn = sol.weight(n, n)?;
        sol.strengths.push(-(sol.gamma0[n] + known) / kn);
    }
    Ok(sol)
}

/// Linearized quasi-steady circulation -2 int sqrt((1+xi)/(1-xi)) U_n dxi
/// for a wing whose normal velocity is taken from the exact kinematics.
pub fn linear_quasisteady_circulation(shape: &WingShape, t: f64) -> f64 {
    // xi = -cos(phi) turns the weight into (1 - cos phi) dphi
    let gl = GaussLegendre::new(48);
    -2.0 * gl.integrate(0.0, std::f64::consts::PI, |phi| {
        (1.0 - phi.cos()) * shape.point(-phi.cos(), t).un
    })
}
