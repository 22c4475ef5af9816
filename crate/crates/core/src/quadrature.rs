//! Gauss–Legendre rules and composite panel quadrature.

use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A flattened composite rule: nodes and weights on an interval.
#[derive(Debug, Clone, Default)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    /// Panels graded toward both ends (cosine spacing of the breakpoints),
    /// each panel carrying a Gauss–Legendre rule of `per_panel` nodes.
    /// Extra `breaks` inside (a, b) are honoured as panel boundaries.
    pub fn graded(a: f64, b: f64, panels: usize, per_panel: usize, breaks: &[f64]) -> Self {
        let mut edges: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * 0.5 * (1.0 - (PI * i as f64 / panels as f64).cos()))
            .collect();
        for &x in breaks {
            if x > a && x < b && edges.iter().all(|e| (e - x).abs() > 1e-14 * (b - a).abs()) {
                edges.push(x);
            }
        }
        edges.sort_by(|p, q| p.total_cmp(q));
        let gl = GaussLegendre::new(per_panel);
        let mut rule = PanelRule::default();
        for pair in edges.windows(2) {
            for (x, w) in gl.mapped(pair[0], pair[1]) {
                rule.nodes.push(x);
                rule.weights.push(w);
            }
        }
        rule
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Mean of a periodic function over one period by the n-point trapezoid rule,
/// which is spectrally accurate for smooth periodic integrands.
pub fn periodic_mean<F: FnMut(f64) -> f64>(period: f64, n: usize, t0: f64, mut f: F) -> f64 {
    let dt = period / n as f64;
    (0..n).map(|i| f(t0 + i as f64 * dt)).sum::<f64>() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in [1, 2, 5, 16, 33, 128] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
            for i in 0..n {
                assert!((gl.nodes[i] + gl.nodes[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let gl = GaussLegendre::new(6);
        for p in 0..12 {
            let got = gl.integrate(0.0, 1.0, |x| x.powi(p));
            assert!((got - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "p={p}");
        }
    }

    #[test]
    fn graded_rule_respects_breaks() {
        let r = PanelRule::graded(0.0, 2.0, 4, 8, &[0.7]);
        let step = r.integrate(|x| if x < 0.7 { 1.0 } else { 3.0 });
        assert!((step - (0.7 + 3.0 * 1.3)).abs() < 1e-13);
        assert!((r.integrate(|x| x.exp()) - (2f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn periodic_trapezoid_is_spectral() {
        let m = periodic_mean(2.0 * PI, 32, 0.3, |t| (t.sin() + 0.5).powi(2));
        assert!((m - 0.75).abs() < 1e-14);
    }
}
