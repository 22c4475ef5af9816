//! Wake diagnostics: same-sign clusters, vortex-pair spacing, wake impulse.

use num_complex::Complex64;
use serde::Serialize;

use super::WakeSheet;

/// A run of consecutively shed elements of one sign.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cluster {
    pub first: usize,
    pub last: usize,
    pub circulation: f64,
    pub centroid: Complex64,
}

/// Same-sign runs in shed order; runs shorter than `min_size` are merged into
/// the preceding cluster (or the following one at the start).
pub fn clusters(wake: &WakeSheet, min_size: usize) -> Vec<Cluster> {
    let e = &wake.elements;
    let mut runs: Vec<(usize, usize)> = vec![];
    let mut start = 0;
    for i in 1..=e.len() {
        if i == e.len() || (e[i].circulation >= 0.0) != (e[start].circulation >= 0.0) {
            if i > start {
                runs.push((start, i - 1));
            }
            start = i;
        }
    }
    let mut merged: Vec<(usize, usize)> = vec![];
    for (a, b) in runs {
        let short = b + 1 - a < min_size;
        match merged.last_mut() {
            Some(last) if short => last.1 = b,
            Some(last) if last.1 + 1 - last.0 < min_size => last.1 = b,
            _ => merged.push((a, b)),
        }
    }
    // merging can bring same-sign neighbours together
    let mut out: Vec<Cluster> = vec![];
    for (a, b) in merged {
        let c = summarize(wake, a, b);
        match out.last_mut() {
            Some(last) if (last.circulation >= 0.0) == (c.circulation >= 0.0) => {
                *last = summarize(wake, last.first, b);
            }
            _ => out.push(c),
        }
    }
    out
}

fn summarize(wake: &WakeSheet, a: usize, b: usize) -> Cluster {
    let els = &wake.elements[a..=b];
    let circulation: f64 = els.iter().map(|e| e.circulation).sum();
    let w: f64 = els.iter().map(|e| e.circulation.abs()).sum();
    let centroid = if w > 0.0 {
        els.iter().map(|e| e.circulation.abs() * e.z).sum::<Complex64>() / w
    } else {
        els[0].z
    };
    Cluster {
        first: a,
        last: b,
        circulation,
        centroid,
    }
}

/// Centre distance of the second vortex pair counted from the trailing edge,
/// skipping the cluster still attached to it. Units of the input lengths.
pub fn second_pair_spacing(clusters: &[Cluster]) -> Option<f64> {
    let n = clusters.len();
    if n < 5 {
        return None;
    }
    let a = clusters[n - 4].centroid;
    let b = clusters[n - 5].centroid;
    Some((a - b).norm())
}

/// Fluid impulse of clockwise-positive point vortices, rho sum Gamma (-y, x).
pub fn wake_impulse(wake: &WakeSheet, rho: f64) -> Complex64 {
    wake.elements
        .iter()
        .map(|e| rho * e.circulation * Complex64::new(-e.z.im, e.z.re))
        .sum()
}
