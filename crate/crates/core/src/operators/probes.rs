//! Standard probe sets for the identity checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::jet::Jet;
use crate::model::{
    AnalyticState, ClosureState, ModelParams, Phi, QuantumNumbers, SeparableState, ZeroMode,
};

use super::grid::{cutoff, Grid2D, GridFunction};
use super::identities::{Identity, Probe};

/// Nodes at which closed-form probes are evaluated.
pub fn analytic_sample(p: &ModelParams, line: bool) -> Result<Grid2D> {
    let (a, b) = (0.2 / p.q, 3.0 / p.q);
    if line {
        Grid2D::line(a, b, 41, 0.0)
    } else {
        let w = 0.9 * p.half_width();
        Grid2D::uniform(a, b, 25, -w, w, 25)
    }
}

/// Default resolution of the stencil probe grids. The fourth-order
/// identities need about 600 nodes per axis to stay clear of the grid
/// threshold at q = 1; the radial line is cheap, so it gets more.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeResolution {
    pub plane: usize,
    pub line: usize,
}

impl Default for ProbeResolution {
    fn default() -> Self {
        ProbeResolution {
            plane: 601,
            line: 1001,
        }
    }
}

/// Box used for stencil probes: x in [0.4/q, 1.6/q], y over 95% of the strip.
pub fn probe_grid(p: &ModelParams, line: bool, n: usize) -> Result<Grid2D> {
    let (a, b) = (0.4 / p.q, 1.6 / p.q);
    if line {
        Grid2D::line(a, b, n, 0.0)
    } else {
        let w = 0.95 * p.half_width();
        Grid2D::uniform(a, b, n, -w, w, n)
    }
}

fn smooth_analytic(p: &ModelParams) -> ClosureState {
    let q = p.q;
    ClosureState::new("smooth", move |x: Jet, y: Jet| {
        let qx = x * q;
        let d = x - 1.0 / q;
        let t = qx.tanh();
        t * t * (d * d).scale(-q * q).exp() * ((y * q).cos() + (y * (2.0 * q)).sin().scale(0.3))
    })
}

fn analytic_states(p: &ModelParams, id: Identity) -> Vec<Arc<dyn AnalyticState>> {
    if id.is_line() {
        vec![
            Arc::new(Phi::new(p, 1, 2)),
            Arc::new(Phi::new(p, 2, 0)),
            Arc::new(smooth_analytic(p)),
        ]
    } else {
        vec![
            Arc::new(SeparableState::new(p, QuantumNumbers::new(1, 2))),
            Arc::new(ZeroMode::new(p, 2.5).expect("positive index")),
            Arc::new(smooth_analytic(p)),
        ]
    }
}

/// Smooth grid probe: a random combination of long-wavelength Fourier
/// modes under the polynomial [`cutoff`], which vanishes within three nodes
/// of every edge.
pub fn random_grid_probe(grid: &Grid2D, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<[f64; 5]> = (0..4)
        .map(|_| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ]
        })
        .collect();
    let unit = |k: usize, n: usize| {
        if n > 1 {
            k as f64 / (n - 1) as f64
        } else {
            0.0
        }
    };
    let window = cutoff(grid, 3);
    let mut values = window.values;
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let (u, v) = (unit(i, grid.nx), unit(j, grid.ny));
            let wave: f64 = modes
                .iter()
                .map(|&[a, kx, ky, px, py]| a * (kx * u + px).sin() * (ky * v + py).cos())
                .sum();
            values[grid.index(i, j)] *= 1.0 + 0.5 * wave;
        }
    }
    GridFunction {
        grid: *grid,
        values,
    }
}

/// Three closed-form probes and three stencil probes suited to the identity.
pub fn standard_probes(p: &ModelParams, id: Identity, res: ProbeResolution) -> Result<Vec<Probe>> {
    let line = id.is_line();
    let sample = analytic_sample(p, line)?;
    let grid = probe_grid(p, line, if line { res.line } else { res.plane })?;
    let states = analytic_states(p, id);
    let mut out = Vec::new();
    if id == Identity::Superalgebra {
        for i in 0..3 {
            let pair = [states[i].clone(), states[(i + 1) % 3].clone()];
            out.push(Probe::AnalyticPair {
                states: pair,
                sample,
            });
        }
        for seed in 0..3u64 {
            let f = [
                random_grid_probe(&grid, 2 * seed + 1),
                random_grid_probe(&grid, 2 * seed + 2),
            ];
            out.push(Probe::GridPair {
                label: format!("random pair {seed}"),
                f,
            });
        }
    } else {
        for s in states {
            out.push(Probe::Analytic { state: s, sample });
        }
        for seed in 0..3u64 {
            out.push(Probe::Grid {
                label: format!("random {seed}"),
                f: random_grid_probe(&grid, seed + 1),
            });
        }
    }
    Ok(out)
}
