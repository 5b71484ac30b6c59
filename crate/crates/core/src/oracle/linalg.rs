//! Symmetric eigensolvers: implicit-shift QL on tridiagonal matrices, dense
//! reference via nalgebra, and Lanczos with full reorthogonalization.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Symmetric matrix in compressed sparse row form, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from rows of (column, value) pairs.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.cols[lo..hi].binary_search(&c) {
            Ok(i) => self.vals[lo + i],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            *o = self.cols[lo..hi]
                .iter()
                .zip(&self.vals[lo..hi])
                .map(|(&c, v)| v * x[c])
                .sum();
        }
    }

    /// Entrywise equality with the transpose.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .all(|i| self.get(self.cols[i], r) == self.vals[i])
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for i in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[i])] = self.vals[i];
            }
        }
        m
    }
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (length n − 1).
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues and eigenvectors (columns of a row-major n×n array), ascending.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vecs[r * n + new] = z[r * n + old];
        }
    }
    Ok((values, vecs))
}

/// Implicit-shift QL sweep. `e[i]` couples rows i and i + 1; `e[n−1]` is
/// workspace.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let t = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * t;
                        z[k * n + i] = c * z[k * n + i] - s * t;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn dense_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    pub max_iter: usize,
    /// Ritz pairs are accepted once |β_m s_m| ≤ tol · max(|θ|, 1).
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            max_iter: 2000,
            tol: 1e-11,
            seed: 1,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Last component of the unit eigenvector of the tridiagonal matrix for the
/// eigenvalue `theta`, by two steps of inverse iteration.
fn ritz_tail(diag: &[f64], off: &[f64], theta: f64) -> f64 {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(off)
        .fold(0.0f64, |s, x| s.max(x.abs()))
        .max(1.0);
    let shift = theta + 1e-10 * scale;
    let mut x = vec![1.0; n];
    for _ in 0..2 {
        // Thomas algorithm on (T − shift) y = x.
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut piv = diag[0] - shift;
        for i in 0..n {
            if i > 0 {
                piv = diag[i] - shift - off[i - 1] * c[i - 1];
            }
            if piv == 0.0 {
                piv = f64::EPSILON * scale;
            }
            c[i] = if i + 1 < n { off[i] / piv } else { 0.0 };
            d[i] = (x[i] - if i > 0 { off[i - 1] * d[i - 1] } else { 0.0 }) / piv;
        }
        for i in (0..n).rev() {
            x[i] = d[i] - if i + 1 < n { c[i] * x[i + 1] } else { 0.0 };
        }
        let norm = dot(&x, &x).sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x[n - 1]
}

/// The `count` smallest eigenvalues of a symmetric operator of dimension
/// `dim`, by Lanczos with full reorthogonalization.
pub fn lanczos_smallest(
    apply: impl Fn(&[f64], &mut [f64]),
    dim: usize,
    count: usize,
    cfg: LanczosConfig,
) -> Result<Vec<f64>> {
    if count == 0 || count > dim {
        return Err(Error::InvalidParameter(format!(
            "cannot extract {count} eigenvalues from dimension {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    let cap = cfg.max_iter.min(dim);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cap);
    let mut alpha: Vec<f64> = Vec::with_capacity(cap);
    let mut beta: Vec<f64> = Vec::with_capacity(cap);
    let mut w = vec![0.0; dim];
    basis.push(v);
    loop {
        let j = basis.len() - 1;
        apply(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = dot(&w, &w).sqrt();
        let m = alpha.len();
        let scale = alpha
            .iter()
            .chain(&beta)
            .fold(0.0f64, |s, x| s.max(x.abs()));
        let exhausted = m == cap || b <= 1e-13 * scale.max(1.0);
        if exhausted || m.is_multiple_of(10) {
            if m < count {
                if exhausted {
                    return Err(Error::Numerical(format!(
                        "krylov space closed at dimension {m} before {count} eigenvalues"
                    )));
                }
            } else {
                let theta = tridiagonal_eigenvalues(&alpha, &beta)?;
                let done = (0..count).all(|i| {
                    (b * ritz_tail(&alpha, &beta, theta[i])).abs()
                        <= cfg.tol * theta[i].abs().max(1.0)
                });
                if done || exhausted {
                    if !done && b > 1e-13 * scale.max(1.0) {
                        return Err(Error::Numerical(format!(
                            "lanczos did not converge in {m} iterations"
                        )));
                    }
                    return Ok(theta[..count].to_vec());
                }
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> (Vec<f64>, Vec<f64>) {
        (vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn ql_reproduces_discrete_laplacian_spectrum() {
        let n = 50;
        let (d, e) = laplacian_1d(n);
        let got = tridiagonal_eigenvalues(&d, &e).unwrap();
        for (j, g) in got.iter().enumerate() {
            let theta = (j + 1) as f64 * std::f64::consts::PI / (2.0 * (n + 1) as f64);
            let want = 4.0 * theta.sin().powi(2);
            assert!((g - want).abs() < 1e-13, "{j}: {g} vs {want}");
        }
    }

    #[test]
    fn ql_vectors_diagonalize() {
        let d = [1.0, -2.0, 3.5, 0.25, 7.0];
        let e = [0.5, 1.5, -0.75, 2.0];
        let (vals, z) = tridiagonal_eigen(&d, &e).unwrap();
        let n = d.len();
        for c in 0..n {
            for r in 0..n {
                let mut tv = d[r] * z[r * n + c];
                if r > 0 {
                    tv += e[r - 1] * z[(r - 1) * n + c];
                }
                if r + 1 < n {
                    tv += e[r] * z[(r + 1) * n + c];
                }
                assert!((tv - vals[c] * z[r * n + c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let n = 200;
        let rows: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|i| {
                let mut row = vec![(i, 2.0 + (i as f64 * 0.37).sin())];
                if i > 0 {
                    row.push((i - 1, -1.0));
                }
                if i + 1 < n {
                    row.push((i + 1, -1.0));
                }
                if i + 7 < n {
                    row.push((i + 7, 0.1));
                }
                if i >= 7 {
                    row.push((i - 7, 0.1));
                }
                row
            })
            .collect();
        let a = CsrMatrix::from_rows(rows);
        assert!(a.is_symmetric());
        let dense = dense_eigenvalues(a.to_dense());
        let got = lanczos_smallest(|x, y| a.matvec(x, y), n, 5, LanczosConfig::default()).unwrap();
        for (g, d) in got.iter().zip(&dense) {
            assert!((g - d).abs() < 1e-9 * d.abs().max(1.0), "{g} vs {d}");
        }
    }

    #[test]
    fn asymmetric_matrix_is_detected() {
        let a = CsrMatrix::from_rows(vec![
            vec![(0, 1.0), (1, 2.0)],
            vec![(0, 2.0 + 1e-16 * 8.0), (1, 1.0)],
        ]);
        assert!(!a.is_symmetric());
    }
}
