//! Uniform tensor grids, sampled functions, and fourth-order difference stencils.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AnalyticState, ModelParams};
use crate::quadrature::simpson_weights;

/// Smallest axis length on which the five- and six-point stencils fit.
pub const MIN_STENCIL_NODES: usize = 6;

/// Uniform tensor grid, or a line when `ny == 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2D {
    pub x0: f64,
    pub hx: f64,
    pub nx: usize,
    pub y0: f64,
    pub hy: f64,
    pub ny: usize,
}

impl Grid2D {
    /// `nx` × `ny` nodes spanning the closed rectangle [x_lo, x_hi] × [y_lo, y_hi].
    pub fn uniform(
        x_lo: f64,
        x_hi: f64,
        nx: usize,
        y_lo: f64,
        y_hi: f64,
        ny: usize,
    ) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::GridTooSmall(format!(
                "need at least 4 nodes per axis, got {nx} x {ny}"
            )));
        }
        if !(x_lo > 0.0) || !(x_hi > x_lo) || !(y_hi > y_lo) {
            return Err(Error::InvalidParameter(format!(
                "bad grid box [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]"
            )));
        }
        Ok(Grid2D {
            x0: x_lo,
            hx: (x_hi - x_lo) / (nx - 1) as f64,
            nx,
            y0: y_lo,
            hy: (y_hi - y_lo) / (ny - 1) as f64,
            ny,
        })
    }

    /// Interior nodes of the truncated layer: x_i = i h for i = 1..=nx (so the
    /// last node sits at `x_max`), and the `ny` interior nodes of a uniform
    /// partition of the strip into ny + 1 intervals.
    pub fn layer(p: &ModelParams, x_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::GridTooSmall(format!(
                "need at least 4 nodes per axis, got {nx} x {ny}"
            )));
        }
        if !(x_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "x_max must be positive, got {x_max}"
            )));
        }
        let w = p.half_width();
        let hx = x_max / nx as f64;
        let hy = 2.0 * w / (ny + 1) as f64;
        Ok(Grid2D {
            x0: hx,
            hx,
            nx,
            y0: -w + hy,
            hy,
            ny,
        })
    }

    /// A line of `nx` nodes on [x_lo, x_hi] at height `y`.
    pub fn line(x_lo: f64, x_hi: f64, nx: usize, y: f64) -> Result<Self> {
        if nx < 4 {
            return Err(Error::GridTooSmall(format!(
                "need at least 4 nodes, got {nx}"
            )));
        }
        if !(x_lo > 0.0) || !(x_hi > x_lo) {
            return Err(Error::InvalidParameter(format!(
                "bad line [{x_lo}, {x_hi}]"
            )));
        }
        Ok(Grid2D {
            x0: x_lo,
            hx: (x_hi - x_lo) / (nx - 1) as f64,
            nx,
            y0: y,
            hy: 0.0,
            ny: 1,
        })
    }

    pub fn is_line(&self) -> bool {
        self.ny == 1
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    /// Row-major with x as the slow index.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.nx).flat_map(move |i| (0..self.ny).map(move |j| (self.x(i), self.y(j))))
    }

    /// Composite Simpson weights per node (product weights; x only on a line).
    pub fn weights(&self) -> Result<Vec<f64>> {
        let wx = simpson_weights(self.nx - 1, self.hx)?;
        if self.is_line() {
            return Ok(wx);
        }
        let wy = simpson_weights(self.ny - 1, self.hy)?;
        Ok(wx
            .iter()
            .flat_map(|a| wy.iter().map(move |b| a * b))
            .collect())
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        GridFunction {
            grid: *self,
            values: self.points().map(|(x, y)| f(x, y)).collect(),
        }
    }

    pub fn sample_state(&self, s: &dyn AnalyticState) -> GridFunction {
        self.sample(|x, y| s.value(x, y))
    }
}

/// Values of a function at the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: Grid2D) -> Self {
        GridFunction {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    fn check_same(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "functions live on different grids".into(),
            ));
        }
        Ok(())
    }

    pub fn axpy(&self, a: f64, other: &GridFunction) -> Result<GridFunction> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u + a * v)
            .collect();
        Ok(GridFunction {
            grid: self.grid,
            values,
        })
    }

    pub fn scale(&self, a: f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    pub fn map_with_coords(&self, f: impl Fn(f64, f64, f64) -> f64) -> GridFunction {
        let values = self
            .grid
            .points()
            .zip(&self.values)
            .map(|((x, y), v)| f(x, y, *v))
            .collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> Result<f64> {
        Ok(inner_product(self, self)?.max(0.0).sqrt())
    }

    pub fn dx(&self) -> Result<GridFunction> {
        self.derivative(Axis::X, 1)
    }

    pub fn dy(&self) -> Result<GridFunction> {
        self.derivative(Axis::Y, 1)
    }

    pub fn dxx(&self) -> Result<GridFunction> {
        self.derivative(Axis::X, 2)
    }

    pub fn dyy(&self) -> Result<GridFunction> {
        self.derivative(Axis::Y, 2)
    }

    fn derivative(&self, axis: Axis, m: usize) -> Result<GridFunction> {
        let g = self.grid;
        let (n, h) = match axis {
            Axis::X => (g.nx, g.hx),
            Axis::Y => (g.ny, g.hy),
        };
        if n < MIN_STENCIL_NODES {
            return Err(Error::GridTooSmall(format!(
                "{axis:?} axis has {n} nodes, stencils need {MIN_STENCIL_NODES}"
            )));
        }
        let stencils = StencilSet::new(n, m);
        let scale = h.powi(-(m as i32));
        let mut out = vec![0.0; g.len()];
        match axis {
            // Derivative weights sum to zero, so each stencil is applied to
            // differences from the centre value; this keeps the rounding
            // error of the sum proportional to the local variation instead
            // of the function's magnitude.
            Axis::X => {
                // rows of constant x are contiguous
                let ny = g.ny;
                let row_of = |i: usize| &self.values[i * ny..(i + 1) * ny];
                for (i, row) in out.chunks_exact_mut(ny).enumerate() {
                    let (start, w) = stencils.at(i);
                    let centre = row_of(i);
                    for (t, c) in w.iter().enumerate() {
                        if start + t == i {
                            continue;
                        }
                        let c = c * scale;
                        for ((o, v), v0) in row.iter_mut().zip(row_of(start + t)).zip(centre) {
                            *o += c * (v - v0);
                        }
                    }
                }
            }
            Axis::Y => {
                for (row, src) in out.chunks_exact_mut(n).zip(self.values.chunks_exact(n)) {
                    for (j, o) in row.iter_mut().enumerate() {
                        let (start, w) = stencils.at(j);
                        let acc: f64 = w
                            .iter()
                            .zip(&src[start..])
                            .map(|(c, v)| c * (v - src[j]))
                            .sum();
                        *o = acc * scale;
                    }
                }
            }
        }
        Ok(GridFunction {
            grid: g,
            values: out,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// Stencil weights (in units of h^-m) for every node of an axis of length n.
struct StencilSet {
    n: usize,
    width: usize,
    interior: Vec<f64>,
    left: Vec<Vec<f64>>,
    right: Vec<Vec<f64>>,
}

impl StencilSet {
    fn new(n: usize, m: usize) -> Self {
        // five central points; one-sided closures need m + 4 points for fourth order
        let width = m + 4;
        let offsets = |start: i64, count: usize| {
            (0..count as i64)
                .map(|t| (start + t) as f64)
                .collect::<Vec<_>>()
        };
        let interior = fd_weights(0.0, &offsets(-2, 5), m);
        let left = (0..2)
            .map(|i| fd_weights(i as f64, &offsets(0, width), m))
            .collect();
        let right = (0..2)
            .map(|r| {
                let i = (width - 1 - r) as f64;
                fd_weights(i, &offsets(0, width), m)
            })
            .collect();
        StencilSet {
            n,
            width,
            interior,
            left,
            right,
        }
    }

    /// First node and weights of the stencil centred at node i.
    fn at(&self, i: usize) -> (usize, &[f64]) {
        if i < 2 {
            (0, &self.left[i])
        } else if i + 2 >= self.n {
            let r = self.n - 1 - i;
            (self.n - self.width, &self.right[r])
        } else {
            (i - 2, &self.interior)
        }
    }
}

/// Finite-difference weights for the m-th derivative at `z` from nodes `xs`
/// (Fornberg's recursion).
pub fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// ∫ f g over the grid's rectangle (or line) by composite Simpson.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.check_same(g)?;
    let w = f.grid.weights()?;
    Ok(w.iter()
        .zip(&f.values)
        .zip(&g.values)
        .map(|((w, a), b)| w * a * b)
        .sum())
}

/// Smoothness of [`cutoff`] at its edges: the window is C^(CUTOFF_POWER - 1).
/// Fourth-order stencils composed up to fourth order need about eight
/// continuous derivatives; higher powers narrow the window and cost accuracy.
pub const CUTOFF_POWER: i32 = 9;

/// Polynomial window (1 - s²)^CUTOFF_POWER on each axis, where s maps the
/// nodes `dead..n-1-dead` onto [-1, 1]. Zero on the outer `dead` nodes of
/// every edge.
pub fn cutoff(grid: &Grid2D, dead: usize) -> GridFunction {
    let axis = |idx: usize, n: usize| {
        let (a, b) = (dead as f64, (n - 1 - dead) as f64);
        let s = (2.0 * idx as f64 - a - b) / (b - a);
        if s.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - s * s).powi(CUTOFF_POWER)
        }
    };
    let mut values = Vec::with_capacity(grid.len());
    for i in 0..grid.nx {
        let cx = axis(i, grid.nx);
        for j in 0..grid.ny {
            let cy = if grid.is_line() {
                1.0
            } else {
                axis(j, grid.ny)
            };
            values.push(cx * cy);
        }
    }
    GridFunction {
        grid: *grid,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_reproduces_textbook_stencils() {
        let w = fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let want = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        let w = fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let want = [
            -1.0 / 12.0,
            16.0 / 12.0,
            -30.0 / 12.0,
            16.0 / 12.0,
            -1.0 / 12.0,
        ];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivatives_converge_at_fourth_order() {
        let err = |n: usize| {
            let g = Grid2D::uniform(0.5, 1.5, n, -0.5, 0.5, n).unwrap();
            let f = g.sample(|x, y| (2.0 * x).sin() * (1.5 * y).cos());
            let dxx = f.dxx().unwrap();
            let dy = f.dy().unwrap();
            let mut e: f64 = 0.0;
            for (idx, (x, y)) in g.points().enumerate() {
                e = e.max((dxx.values[idx] + 4.0 * (2.0 * x).sin() * (1.5 * y).cos()).abs());
                e = e.max((dy.values[idx] + 1.5 * (2.0 * x).sin() * (1.5 * y).sin()).abs());
            }
            e
        };
        let (e1, e2) = (err(21), err(41));
        let order = (e1 / e2).log2();
        assert!(order > 3.5, "observed order {order}");
    }

    #[test]
    fn small_grids_are_rejected() {
        assert!(Grid2D::uniform(0.1, 1.0, 3, -1.0, 1.0, 8).is_err());
        let g = Grid2D::uniform(0.1, 1.0, 5, -1.0, 1.0, 8).unwrap();
        assert!(matches!(
            g.sample(|x, _| x).dx(),
            Err(Error::GridTooSmall(_))
        ));
    }

    #[test]
    fn inner_product_checks_grids() {
        let a = Grid2D::uniform(0.1, 1.0, 9, -1.0, 1.0, 9).unwrap();
        let b = Grid2D::uniform(0.1, 1.1, 9, -1.0, 1.0, 9).unwrap();
        assert!(inner_product(&a.sample(|_, _| 1.0), &b.sample(|_, _| 1.0)).is_err());
        let area = inner_product(&a.sample(|_, _| 1.0), &a.sample(|_, _| 1.0)).unwrap();
        assert!((area - 1.8).abs() < 1e-13);
    }

    #[test]
    fn layer_grid_stays_inside() {
        let p = ModelParams::new(2.0, 1.0, 0.0).unwrap();
        let g = Grid2D::layer(&p, 2.5, 10, 8).unwrap();
        assert!(g.x(0) > 0.0);
        assert!((g.x(g.nx - 1) - 2.5).abs() < 1e-14);
        assert!(g.points().all(|(x, y)| p.contains(x, y)));
    }

    #[test]
    fn cutoff_vanishes_near_edges() {
        let g = Grid2D::uniform(0.1, 1.0, 30, -1.0, 1.0, 30).unwrap();
        let c = cutoff(&g, 3);
        for i in 0..30 {
            for j in 0..3 {
                assert_eq!(c.at(i, j), 0.0);
                assert_eq!(c.at(j, i), 0.0);
                assert_eq!(c.at(i, 29 - j), 0.0);
                assert_eq!(c.at(29 - j, i), 0.0);
            }
        }
        assert!(c.at(14, 14) > 0.95 && c.at(14, 14) <= 1.0);
    }
}
