//! Coefficient families connecting the separable basis ψ_{n,l} with the
//! intertwining-operator basis Ψ_{N,N0}: zero-mode combinations, the X, Y
//! and Z expansion coefficients, normalizations, ladder actions, and the
//! lattice-path factor x_μ(l, ν).
//!
//! Every gamma ratio is formed in log space and exponentiated once.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::special::{binomial, lgam, ln_factorial};

/// Number of ν-step ±1 walks from height `l` to `l + ν - 2μ` that never go
/// below zero, computed with the step recursion on ν.
pub fn x_factor(l: u32, nu: u32, mu: i64) -> u64 {
    if mu < 0 || mu > nu as i64 {
        return 0;
    }
    let table = x_factor_table(l, nu);
    table[mu as usize]
}

/// Row ν of the x_μ(l, ν) table, μ = 0..=ν.
pub fn x_factor_table(l: u32, nu: u32) -> Vec<u64> {
    let l = l as i64;
    let mut row = vec![1u64];
    for v in 1..=nu as i64 {
        let mut next = vec![0u64; v as usize + 1];
        next[0] = row[0];
        for mu in 1..v {
            let blocked = 2 * mu == l + v + 1;
            let down = if blocked { 0 } else { row[mu as usize - 1] };
            next[mu as usize] = down + row[mu as usize];
        }
        next[v as usize] = if l == v - 1 { 0 } else { row[v as usize - 1] };
        row = next;
    }
    row
}

/// x_μ(l, ν) = C(ν, μ), valid when l ≥ ν.
pub fn x_factor_unconstrained(nu: u32, mu: u32) -> u64 {
    binomial(nu as u64, mu as u64)
}

/// x_μ(0, ν) = ν! (ν - 2μ + 1) / (μ! (ν - μ + 1)!) for μ ≤ ⌊ν/2⌋, else 0.
pub fn x_factor_from_ground(nu: u32, mu: u32) -> u64 {
    if mu > nu / 2 {
        return 0;
    }
    let (nu, mu) = (nu as u64, mu as u64);
    // C(ν+1, μ) (ν - 2μ + 1) / (ν + 1), exact in integers
    binomial(nu + 1, mu) * (nu - 2 * mu + 1) / (nu + 1)
}

fn require_even(n0: u32) -> Result<()> {
    if !n0.is_multiple_of(2) {
        return domain(format!("N0 must be even, got {n0}"));
    }
    Ok(())
}

fn require_positive_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("k must be positive, got {k}"));
    }
    Ok(())
}

/// Coefficients a_s (odd s = 1, 3, ..., N0 + 1) of the zero-mode combination
/// that is an eigenfunction of H^{(k)}, scaled so that a_{N0+1} = 1.
pub fn a_coeffs(k: f64, n0: u32) -> Result<Vec<(u32, f64)>> {
    require_positive_k(k)?;
    require_even(n0)?;
    let n0f = n0 as f64;
    let out = (1..=n0 + 1)
        .step_by(2)
        .map(|s| {
            let sf = s as f64;
            let half = (n0 + 1 - s) / 2;
            let ln_mag = ln_factorial(n0 as u64 + 1) + lgam(0.5 * (n0f + sf) + k + 1.0)
                - (n0 + 1 - s) as f64 * std::f64::consts::LN_2
                - ln_factorial(s as u64)
                - ln_factorial(half as u64)
                - lgam(n0f + k + 1.5);
            let sign = if half.is_multiple_of(2) { 1.0 } else { -1.0 };
            (s, sign * ln_mag.exp())
        })
        .collect();
    Ok(out)
}

/// X_{n, N0-2n}^{(k)}: positive expansion coefficient of Ψ_{N0,N0} on ψ_{n,N0-2n}.
pub fn x_coeff(k: f64, n0: u32, n: u32) -> Result<f64> {
    require_positive_k(k)?;
    require_even(n0)?;
    if n > n0 / 2 {
        return domain(format!("n = {n} out of range for N0 = {n0}"));
    }
    let (n0f, nf) = (n0 as f64, n as f64);
    let ln_sq =
        ln_factorial(n0 as u64 + 1) + lgam(k + 1.0) + lgam(nf + k + 0.5) + lgam(n0f - nf + k + 1.5)
            - n0f * std::f64::consts::LN_2
            - ln_factorial(n as u64)
            - ln_factorial((n0 - n) as u64 + 1)
            - lgam(0.5 * n0f + k + 1.0)
            - lgam(k + 0.5)
            - lgam(0.5 * (n0f + 3.0) + k);
    Ok((0.5 * ln_sq).exp())
}

/// All X coefficients for level N0, indexed by n = 0..=N0/2.
pub fn x_row(k: f64, n0: u32) -> Result<Vec<f64>> {
    (0..=n0 / 2).map(|n| x_coeff(k, n0, n)).collect()
}

fn s_term(k: f64, n0: u32, n: u32) -> f64 {
    let (n0f, nf) = (n0 as f64, n as f64);
    (lgam(n0f - nf + k + 1.5) + lgam(nf + k + 0.5)
        - ln_factorial(n as u64)
        - ln_factorial((n0 - n) as u64 + 1))
    .exp()
}

/// S_{N0}^{(k)} summed over n = 0..=N0/2.
pub fn s_sum_direct(k: f64, n0: u32) -> Result<f64> {
    require_positive_k(k)?;
    require_even(n0)?;
    Ok((0..=n0 / 2).map(|n| s_term(k, n0, n)).sum())
}

/// S_{N0}^{(k)} as half the symmetric sum over n = 0..=N0+1.
pub fn s_sum_symmetric(k: f64, n0: u32) -> Result<f64> {
    require_positive_k(k)?;
    require_even(n0)?;
    Ok(0.5 * (0..=n0 + 1).map(|n| s_term(k, n0, n)).sum::<f64>())
}

/// Closed form Γ(N0+2k+2) Γ²(k+1/2) / (2 (N0+1)! Γ(2k+1)).
pub fn s_sum_closed(k: f64, n0: u32) -> Result<f64> {
    require_positive_k(k)?;
    require_even(n0)?;
    let ln = lgam(n0 as f64 + 2.0 * k + 2.0) + 2.0 * lgam(k + 0.5)
        - std::f64::consts::LN_2
        - ln_factorial(n0 as u64 + 1)
        - lgam(2.0 * k + 1.0);
    Ok(ln.exp())
}

/// Twice the exponent ν(N + (ν+1)/2) + μ of the Y phase, N = 2n + l.
///
/// Always even, since ν(ν+1) is even.
pub fn y_phase_exponent_twice(n: u32, l: u32, nu: u32, mu: u32) -> i64 {
    let big_n = (2 * n + l) as i64;
    let nu = nu as i64;
    nu * (2 * big_n + nu + 1) + 2 * mu as i64
}

/// Y_{n,l; n+μ, l+ν-2μ}^{(k)}: coefficient of ψ^{(k)}_{n+μ, l+ν-2μ} in
/// η^{(k)†} η^{(k+1)†} ⋯ η^{(k+ν-1)†} ψ^{(k+ν)}_{n,l}.
pub fn y_coeff(q: f64, k: f64, n: u32, l: u32, nu: u32, mu: u32) -> f64 {
    let paths = x_factor(l, nu, mu as i64);
    if paths == 0 {
        return 0.0;
    }
    let twice = y_phase_exponent_twice(n, l, nu, mu);
    debug_assert!(twice % 2 == 0);
    let sign = if (twice / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let (nf, lf, nuf, muf) = (n as f64, l as f64, nu as f64, mu as f64);
    let ln_sq = ln_factorial((n + mu) as u64)
        + ln_factorial((n + l + nu - mu) as u64 + 1)
        + lgam(nf + nuf + k + 0.5)
        + lgam(nf + lf + nuf + k + 1.5)
        - ln_factorial(n as u64)
        - ln_factorial((n + l) as u64 + 1)
        - lgam(nf + muf + k + 0.5)
        - lgam(nf + lf + nuf - muf + k + 1.5);
    sign * q.powi(nu as i32) * paths as f64 * (0.5 * ln_sq).exp()
}

/// N̄_{N,N0}^{(k)} = q^{-ν} (Γ(2k+ν) / (ν! Γ(2k+2ν)))^{1/2}, ν = N - N0.
pub fn nbar(q: f64, k: f64, big_n: u32, n0: u32) -> Result<f64> {
    require_positive_k(k)?;
    check_labels(big_n, n0)?;
    let nu = (big_n - n0) as f64;
    let ln = lgam(2.0 * k + nu) - ln_factorial((big_n - n0) as u64) - lgam(2.0 * k + 2.0 * nu);
    Ok(q.powf(-nu) * (0.5 * ln).exp())
}

fn check_labels(big_n: u32, n0: u32) -> Result<()> {
    require_even(n0)?;
    if n0 > big_n {
        return domain(format!("N0 = {n0} exceeds N = {big_n}"));
    }
    Ok(())
}

/// The expansion N̄ Σ_{n'} X^{(k+ν)} Y^{(k)} taken literally, i.e. with the
/// phase carried by the ν raising operators. Indexed by n = 0..=N/2.
pub fn z_row_raw(k: f64, big_n: u32, n0: u32) -> Result<Vec<f64>> {
    require_positive_k(k)?;
    check_labels(big_n, n0)?;
    let nu = big_n - n0;
    let norm = nbar(1.0, k, big_n, n0)?;
    let xs = x_row(k + nu as f64, n0)?;
    let row = (0..=big_n / 2)
        .map(|n| {
            let lo = n.saturating_sub(nu);
            let hi = (n0 / 2).min(n);
            let sum: f64 = (lo..=hi)
                .map(|np| xs[np as usize] * y_coeff(1.0, k, np, n0 - 2 * np, nu, n - np))
                .sum();
            norm * sum
        })
        .collect();
    Ok(row)
}

/// Z_{N0; n, N-2n}^{(k)}: coefficients of Ψ_{N,N0} on ψ_{n,N-2n}, n = 0..=N/2.
///
/// Phase convention: (-1)^ν times [`z_row_raw`], which makes ν = 0 rows equal
/// the positive X coefficients and the N0 = 0 rows equal [`z_row_from_ground`].
pub fn z_row(k: f64, big_n: u32, n0: u32) -> Result<Vec<f64>> {
    let sign = if (big_n - n0.min(big_n)).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Ok(z_row_raw(k, big_n, n0)?
        .into_iter()
        .map(|z| sign * z)
        .collect())
}

/// Closed form of Z_{0; n, N-2n}^{(k)} for the states reached from the ground state.
pub fn z_row_from_ground(k: f64, big_n: u32) -> Result<Vec<f64>> {
    require_positive_k(k)?;
    let nf = big_n as f64;
    let row = (0..=big_n / 2)
        .map(|n| {
            let m = n as f64;
            let exp = (big_n * (big_n + 3) / 2 + n) as u64;
            let sign = if exp.is_multiple_of(2) { 1.0 } else { -1.0 };
            let ln_sq = ln_factorial(big_n as u64)
                + lgam(0.5 * nf + k)
                + lgam(0.5 * (nf + 1.0) + k)
                + lgam(nf + k + 1.5)
                - nf * std::f64::consts::LN_2
                - ln_factorial(n as u64)
                - ln_factorial((big_n - n) as u64 + 1)
                - lgam(nf + k)
                - lgam(m + k + 0.5)
                - lgam(nf - m + k + 1.5);
            sign * (big_n - 2 * n + 1) as f64 * (0.5 * ln_sq).exp()
        })
        .collect();
    Ok(row)
}

/// Orthogonal matrix between the two bases at one level N.
#[derive(Debug, Clone, Serialize)]
pub struct TransformMatrix {
    pub level: u32,
    pub k: f64,
    /// Row labels: the even N0 values.
    pub n0: Vec<u32>,
    /// Column labels: (n, l) with 2n + l = N.
    pub columns: Vec<(u32, u32)>,
    pub entries: Vec<Vec<f64>>,
}

impl TransformMatrix {
    pub fn build(k: f64, big_n: u32) -> Result<Self> {
        require_positive_k(k)?;
        let n0: Vec<u32> = (0..=big_n).step_by(2).collect();
        let columns = (0..=big_n / 2).map(|n| (n, big_n - 2 * n)).collect();
        let entries = n0
            .iter()
            .map(|&r| z_row(k, big_n, r))
            .collect::<Result<_>>()?;
        Ok(TransformMatrix {
            level: big_n,
            k,
            n0,
            columns,
            entries,
        })
    }

    /// max |(Z Zᵀ - I)_{ij}|
    pub fn orthogonality_residual(&self) -> f64 {
        let m = self.entries.len();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let dot: f64 = self.entries[i]
                    .iter()
                    .zip(&self.entries[j])
                    .map(|(a, b)| a * b)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }

    /// max |(Zᵀ Z - I)_{ij}|
    pub fn column_orthogonality_residual(&self) -> f64 {
        let m = self.columns.len();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let dot: f64 = self.entries.iter().map(|row| row[i] * row[j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LadderDirection {
    /// η^{(k)} acting on ψ^{(k)}_{n,l}, landing in the k + 1 basis.
    Down,
    /// η^{(k)†} acting on ψ^{(k+1)}_{n,l}, landing in the k basis.
    Up,
}

/// Two-term result of a ladder operator acting on ψ_{n,l}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderAction {
    /// Target (n, l) labels; `None` where the label would be negative.
    pub targets: [Option<(u32, u32)>; 2],
    pub coeffs: [f64; 2],
}

/// Coefficients of η^{(k)} ψ_{n,l} (down) or η^{(k)†} ψ_{n,l} (up).
///
/// Down: targets (n-1, l+1) and (n, l-1). Up: targets (n+1, l-1) and (n, l+1).
pub fn ladder_coeffs(q: f64, k: f64, n: u32, l: u32, dir: LadderDirection) -> LadderAction {
    let (nf, lf) = (n as f64, l as f64);
    let big_n = 2 * n + l;
    let phase = |e: u32| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    let l_gate = if l == 0 { 0.0 } else { 1.0 };
    match dir {
        LadderDirection::Down => {
            let s = phase(big_n) * q;
            let c0 = -s * (nf * (nf + lf + k + 1.5)).sqrt();
            let c1 = s * l_gate * ((nf + k + 0.5) * (nf + lf + 1.0)).sqrt();
            LadderAction {
                targets: [
                    n.checked_sub(1).map(|m| (m, l + 1)),
                    l.checked_sub(1).map(|m| (n, m)),
                ],
                coeffs: [c0, c1],
            }
        }
        LadderDirection::Up => {
            let s = phase(big_n + 1) * q;
            let c0 = -s * l_gate * ((nf + 1.0) * (nf + lf + k + 1.5)).sqrt();
            let c1 = s * ((nf + k + 0.5) * (nf + lf + 2.0)).sqrt();
            LadderAction {
                targets: [l.checked_sub(1).map(|m| (n + 1, m)), Some((n, l + 1))],
                coeffs: [c0, c1],
            }
        }
    }
}
