//! Gauss–Legendre and Newton–Cotes quadrature rules.

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A one-dimensional quadrature rule as parallel node and weight arrays.
#[derive(Debug, Clone)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    /// Composite Gauss–Legendre on `[a, b]` with `panels` equal panels.
    pub fn composite(a: f64, b: f64, panels: usize, points: usize) -> Self {
        let edges: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        Self::on_edges(&edges, points)
    }

    /// Composite Gauss–Legendre on `[a, b]` whose first panel is further split
    /// geometrically towards `a`, for integrands with a weak power singularity
    /// at the left end.
    pub fn composite_graded(a: f64, b: f64, panels: usize, points: usize, levels: usize) -> Self {
        let width = (b - a) / panels as f64;
        let mut edges = vec![a];
        let ratio: f64 = 0.35;
        for lvl in (1..=levels).rev() {
            edges.push(a + width * ratio.powi(lvl as i32));
        }
        for i in 1..=panels {
            edges.push(a + width * i as f64);
        }
        Self::on_edges(&edges, points)
    }

    fn on_edges(edges: &[f64], points: usize) -> Self {
        let (z, w) = gauss_legendre(points);
        let mut nodes = Vec::with_capacity((edges.len() - 1) * points);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in edges.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (zi, wi) in z.iter().zip(&w) {
                nodes.push(mid + half * zi);
                weights.push(half * wi);
            }
        }
        Rule1D { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Tensor-product rule over a rectangle.
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub x: Rule1D,
    pub y: Rule1D,
}

impl TensorRule {
    /// Integral of the pointwise product of two sampled functions, both laid
    /// out row-major with x as the slow index.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        let ny = self.y.len();
        assert_eq!(f.len(), self.x.len() * ny);
        assert_eq!(g.len(), f.len());
        let mut total = 0.0;
        for (i, wx) in self.x.weights.iter().enumerate() {
            let row = i * ny;
            let mut acc = 0.0;
            for (j, wy) in self.y.weights.iter().enumerate() {
                acc += wy * f[row + j] * g[row + j];
            }
            total += wx * acc;
        }
        total
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.x.len() * self.y.len());
        for &x in &self.x.nodes {
            for &y in &self.y.nodes {
                out.push(f(x, y));
            }
        }
        out
    }
}

/// Weights of the composite Simpson rule over `m` equal intervals of width
/// `h` (m + 1 points, endpoints included). An odd interval count closes with
/// the Simpson 3/8 rule on the last three intervals.
pub fn simpson_weights(m: usize, h: f64) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::GridTooSmall(format!(
            "Simpson needs at least 2 intervals, got {m}"
        )));
    }
    let mut w = vec![0.0; m + 1];
    let simpson_end = if m.is_multiple_of(2) { m } else { m - 3 };
    let mut i = 0;
    while i < simpson_end {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
        i += 2;
    }
    if m % 2 == 1 {
        let s = simpson_end;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!(w.iter().all(|&v| v > 0.0));
            for deg in 0..(2 * n) {
                let got: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(xi, wi)| wi * xi.powi(deg as i32))
                    .sum();
                let want = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((got - want).abs() < 1e-14, "n = {n}, deg = {deg}");
            }
        }
    }

    #[test]
    fn graded_rule_handles_power_singularity() {
        let r = Rule1D::composite_graded(0.0, 1.0, 16, 8, 12);
        let got = r.integrate(|x| x.powf(0.4));
        assert!((got - 1.0 / 1.4).abs() < 1e-12);
    }

    #[test]
    fn simpson_both_parities() {
        for m in [2usize, 3, 8, 9, 101] {
            let h = 2.0 / m as f64;
            let w = simpson_weights(m, h).unwrap();
            let got: f64 = w
                .iter()
                .enumerate()
                .map(|(i, wi)| wi * (i as f64 * h).powi(3))
                .sum();
            assert!((got - 4.0).abs() < 1e-12, "m = {m}");
        }
        assert!(simpson_weights(1, 0.1).is_err());
    }
}
