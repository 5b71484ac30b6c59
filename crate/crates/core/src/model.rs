//! The semi-infinite-layer model: parameters, spectrum, and closed-form
//! eigenfunctions of both eigenbases, all differentiable through [`Jet`]s.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::coeffs;
use crate::error::{domain, Error, Result};
use crate::jet::{Derivs, Jet};
use crate::quadrature::{Rule1D, TensorRule};
use crate::special::{jacobi, jacobi_derivatives, lgam, ln_factorial, JacobiIndex};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub q: f64,
    pub k: f64,
    pub v0: f64,
}

impl ModelParams {
    pub fn new(q: f64, k: f64, v0: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "q must be positive, got {q}"
            )));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "k must be positive, got {k}"
            )));
        }
        if !v0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "v0 must be finite, got {v0}"
            )));
        }
        Ok(ModelParams { q, k, v0 })
    }

    /// Half the strip width, π/(2q).
    pub fn half_width(&self) -> f64 {
        0.5 * PI / self.q
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > 0.0 && x.is_finite() && y.abs() < self.half_width()
    }

    fn check_point(&self, x: f64, y: f64) -> Result<()> {
        if !self.contains(x, y) {
            return domain(format!("({x}, {y}) lies outside the layer"));
        }
        Ok(())
    }

    /// Same q and v0 with k shifted, as needed by the partner hierarchy.
    pub fn with_k(&self, k: f64) -> Self {
        ModelParams { k, ..*self }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            q: 1.0,
            k: 1.0,
            v0: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        QuantumNumbers { n, l }
    }

    pub fn level(&self) -> u32 {
        2 * self.n + self.l
    }

    /// All (n, l) with 2n + l = level, ordered by n.
    pub fn at_level(level: u32) -> Vec<Self> {
        (0..=level / 2)
            .map(|n| QuantumNumbers::new(n, level - 2 * n))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SusyLabels {
    pub level: u32,
    pub n0: u32,
}

impl SusyLabels {
    pub fn new(level: u32, n0: u32) -> Result<Self> {
        if !n0.is_multiple_of(2) {
            return domain(format!("N0 must be even, got {n0}"));
        }
        if n0 > level {
            return domain(format!("N0 = {n0} exceeds N = {level}"));
        }
        Ok(SusyLabels { level, n0 })
    }

    pub fn nu(&self) -> u32 {
        self.level - self.n0
    }

    pub fn at_level(level: u32) -> Vec<Self> {
        (0..=level)
            .step_by(2)
            .map(|n0| SusyLabels { level, n0 })
            .collect()
    }
}

/// E_N = q²[(N+2)(N+2k+1) + v0].
pub fn energy_level(p: &ModelParams, level: u32) -> f64 {
    let n = level as f64;
    p.q * p.q * ((n + 2.0) * (n + 2.0 * p.k + 1.0) + p.v0)
}

pub fn degeneracy(level: u32) -> u32 {
    level / 2 + 1
}

/// Eigenvalue q²ν(ν + 2k) of the constant of motion on Ψ_{N,N0}.
pub fn r_eigenvalue(p: &ModelParams, labels: SusyLabels) -> f64 {
    let nu = labels.nu() as f64;
    p.q * p.q * nu * (nu + 2.0 * p.k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StateLabel {
    Chi { l: u32 },
    Phi { n: u32, l: u32 },
    Psi { n: u32, l: u32 },
    SusyPsi { level: u32, n0: u32 },
    ZeroMode { s: f64 },
    ZeroModeCombination { n0: u32 },
    Custom(String),
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Chi { l } => write!(f, "chi_{l}"),
            StateLabel::Phi { n, l } => write!(f, "phi_{n},{l}"),
            StateLabel::Psi { n, l } => write!(f, "psi_{n},{l}"),
            StateLabel::SusyPsi { level, n0 } => write!(f, "Psi_{level},{n0}"),
            StateLabel::ZeroMode { s } => write!(f, "omega_{s}"),
            StateLabel::ZeroModeCombination { n0 } => write!(f, "omega_comb_{n0}"),
            StateLabel::Custom(s) => f.write_str(s),
        }
    }
}

/// A closed-form function on the layer with exact partial derivatives.
pub trait AnalyticState: Send + Sync {
    fn label(&self) -> StateLabel;

    /// Taylor jet of the given order at (x, y). The point must lie in the open layer.
    fn jet(&self, x: f64, y: f64, order: usize) -> Jet;

    fn eval(&self, x: f64, y: f64) -> Derivs {
        Derivs::from_jet(&self.jet(x, y, 2))
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.jet(x, y, 0).value()
    }
}

impl<S: AnalyticState + ?Sized> AnalyticState for Arc<S> {
    fn label(&self) -> StateLabel {
        (**self).label()
    }
    fn jet(&self, x: f64, y: f64, order: usize) -> Jet {
        (**self).jet(x, y, order)
    }
    fn eval(&self, x: f64, y: f64) -> Derivs {
        (**self).eval(x, y)
    }
    fn value(&self, x: f64, y: f64) -> f64 {
        (**self).value(x, y)
    }
}

/// Transverse eigenfunction χ_l(y).
#[derive(Debug, Clone, Copy)]
pub struct Chi {
    pub q: f64,
    pub l: u32,
}

impl Chi {
    fn amplitude(&self) -> f64 {
        (2.0 * self.q / PI).sqrt()
    }

    fn wavenumber(&self) -> f64 {
        (self.l + 1) as f64 * self.q
    }

    pub fn jet_of(&self, y: Jet) -> Jet {
        let arg = y * self.wavenumber();
        let f = if self.l.is_multiple_of(2) {
            arg.cos()
        } else {
            arg.sin()
        };
        f.scale(self.amplitude())
    }

    /// Value, first and second derivative.
    pub fn derivs(&self, y: f64) -> [f64; 3] {
        let (c, m) = (self.amplitude(), self.wavenumber());
        let (s, co) = (m * y).sin_cos();
        if self.l.is_multiple_of(2) {
            [c * co, -c * m * s, -c * m * m * co]
        } else {
            [c * s, c * m * co, -c * m * m * s]
        }
    }
}

impl AnalyticState for Chi {
    fn label(&self) -> StateLabel {
        StateLabel::Chi { l: self.l }
    }
    fn jet(&self, _x: f64, y: f64, order: usize) -> Jet {
        self.jet_of(Jet::var_y(y, order))
    }
}

/// χ_l(y) with its first two derivatives. The closed interval is accepted
/// so that the walls can be probed directly.
pub fn eval_chi(p: &ModelParams, l: u32, y: f64) -> Result<[f64; 3]> {
    if !(y.abs() <= p.half_width()) {
        return domain(format!("y = {y} outside [-pi/(2q), pi/(2q)]"));
    }
    Ok(Chi { q: p.q, l }.derivs(y))
}

/// Radial factor φ_{n,l}(x) = 𝒩 tanh^k sech^{l+2} P_n^{(k-1/2, l+1)}(1 - 2 tanh²).
#[derive(Debug, Clone, Copy)]
pub struct Phi {
    pub q: f64,
    pub k: f64,
    pub n: u32,
    pub l: u32,
    norm: f64,
    poly: JacobiIndex,
}

impl Phi {
    pub fn new(p: &ModelParams, n: u32, l: u32) -> Self {
        let (nf, lf, k) = (n as f64, l as f64, p.k);
        let ln_sq = (2.0 * p.q * (2.0 * nf + lf + k + 1.5)).ln()
            + ln_factorial(n as u64)
            + lgam(nf + lf + k + 1.5)
            - ln_factorial((n + l) as u64 + 1)
            - lgam(nf + k + 0.5);
        let poly = JacobiIndex {
            n,
            a: k - 0.5,
            b: lf + 1.0,
        };
        Phi {
            q: p.q,
            k,
            n,
            l,
            norm: (0.5 * ln_sq).exp(),
            poly,
        }
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn jet_of(&self, x: Jet) -> Jet {
        let qx = x * self.q;
        let t = qx.tanh();
        let s = qx.cosh().recip();
        let z = 1.0 - 2.0 * t * t;
        let poly = z.compose(&jacobi_derivatives(self.poly, z.value(), x.order()));
        (t.powf(self.k) * s.powi(self.l as i32 + 2) * poly).scale(self.norm)
    }

    /// Value, first and second derivative by the chain rule.
    pub fn derivs(&self, x: f64) -> [f64; 3] {
        let (q, k, l) = (self.q, self.k, self.l as f64);
        let t = (q * x).tanh();
        let s = 1.0 / (q * x).cosh();
        let s2 = s * s;
        let g = t.powf(k) * s.powi(self.l as i32 + 2);
        // logarithmic derivatives of tanh^k sech^{l+2}
        let lg1 = q * (k * s2 / t - (l + 2.0) * t);
        let lg2 = -q * q * s2 * (2.0 * k + k * s2 / (t * t) + l + 2.0);
        let g1 = g * lg1;
        let g2 = g * (lg1 * lg1 + lg2);
        let z = 1.0 - 2.0 * t * t;
        let z1 = -4.0 * q * t * s2;
        let z2 = -4.0 * q * q * s2 * (s2 - 2.0 * t * t);
        let p0 = jacobi(self.poly, z, 0);
        let p1 = jacobi(self.poly, z, 1);
        let p2 = jacobi(self.poly, z, 2);
        let nn = self.norm;
        [
            nn * g * p0,
            nn * (g1 * p0 + g * p1 * z1),
            nn * (g2 * p0 + 2.0 * g1 * p1 * z1 + g * (p2 * z1 * z1 + p1 * z2)),
        ]
    }
}

impl AnalyticState for Phi {
    fn label(&self) -> StateLabel {
        StateLabel::Phi {
            n: self.n,
            l: self.l,
        }
    }
    fn jet(&self, x: f64, _y: f64, order: usize) -> Jet {
        self.jet_of(Jet::var_x(x, order))
    }
}

pub fn eval_phi(p: &ModelParams, n: u32, l: u32, x: f64) -> Result<[f64; 3]> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("x = {x} is not on the open half-line"));
    }
    Ok(Phi::new(p, n, l).derivs(x))
}

/// Separable eigenfunction ψ_{n,l} = φ_{n,l}(x) χ_l(y).
#[derive(Debug, Clone, Copy)]
pub struct SeparableState {
    pub qn: QuantumNumbers,
    pub phi: Phi,
    pub chi: Chi,
}

impl SeparableState {
    pub fn new(p: &ModelParams, qn: QuantumNumbers) -> Self {
        SeparableState {
            qn,
            phi: Phi::new(p, qn.n, qn.l),
            chi: Chi { q: p.q, l: qn.l },
        }
    }
}

impl AnalyticState for SeparableState {
    fn label(&self) -> StateLabel {
        StateLabel::Psi {
            n: self.qn.n,
            l: self.qn.l,
        }
    }

    fn jet(&self, x: f64, y: f64, order: usize) -> Jet {
        self.phi.jet_of(Jet::var_x(x, order)) * self.chi.jet_of(Jet::var_y(y, order))
    }

    fn eval(&self, x: f64, y: f64) -> Derivs {
        let [f, fx, fxx] = self.phi.derivs(x);
        let [g, gy, gyy] = self.chi.derivs(y);
        Derivs {
            value: f * g,
            dx: fx * g,
            dy: f * gy,
            dxx: fxx * g,
            dxy: fx * gy,
            dyy: f * gyy,
        }
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.phi.derivs(x)[0] * self.chi.derivs(y)[0]
    }
}

pub fn eval_psi(p: &ModelParams, qn: QuantumNumbers, x: f64, y: f64) -> Result<Derivs> {
    p.check_point(x, y)?;
    Ok(SeparableState::new(p, qn).eval(x, y))
}

/// Zero mode ω_s = tanh^k(qx) sech^{s+1}(qx) cos^s(qy), annihilated by η.
#[derive(Debug, Clone, Copy)]
pub struct ZeroMode {
    pub q: f64,
    pub k: f64,
    pub s: f64,
}

impl ZeroMode {
    pub fn new(p: &ModelParams, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return domain(format!("zero-mode index must be positive, got {s}"));
        }
        Ok(ZeroMode { q: p.q, k: p.k, s })
    }
}

impl AnalyticState for ZeroMode {
    fn label(&self) -> StateLabel {
        StateLabel::ZeroMode { s: self.s }
    }
    fn jet(&self, x: f64, y: f64, order: usize) -> Jet {
        let qx = Jet::var_x(x, order) * self.q;
        let qy = Jet::var_y(y, order) * self.q;
        qx.tanh().powf(self.k) * qx.cosh().powf(-(self.s + 1.0)) * qy.cos().powf(self.s)
    }
}

pub fn eval_zero_mode(p: &ModelParams, s: f64, x: f64, y: f64) -> Result<Derivs> {
    let mode = ZeroMode::new(p, s)?;
    p.check_point(x, y)?;
    Ok(mode.eval(x, y))
}

/// A finite linear combination of states.
#[derive(Clone)]
pub struct Combination<S> {
    pub label: StateLabel,
    pub terms: Vec<(f64, S)>,
}

impl<S: AnalyticState> AnalyticState for Combination<S> {
    fn label(&self) -> StateLabel {
        self.label.clone()
    }

    fn jet(&self, x: f64, y: f64, order: usize) -> Jet {
        let mut acc = Jet::constant(0.0, order);
        for (c, s) in &self.terms {
            acc += s.jet(x, y, order).scale(*c);
        }
        acc
    }

    fn eval(&self, x: f64, y: f64) -> Derivs {
        let mut out = [0.0; 6];
        for (c, s) in &self.terms {
            for (o, v) in out.iter_mut().zip(s.eval(x, y).as_array()) {
                *o += c * v;
            }
        }
        let [value, dx, dy, dxx, dxy, dyy] = out;
        Derivs {
            value,
            dx,
            dy,
            dxx,
            dxy,
            dyy,
        }
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|(c, s)| c * s.value(x, y)).sum()
    }
}

/// Ψ_{N,N0}: simultaneous eigenfunction of H and R, expanded on ψ_{n,N-2n}.
pub type SusyState = Combination<SeparableState>;

pub fn susy_state(p: &ModelParams, labels: SusyLabels) -> Result<SusyState> {
    let row = coeffs::z_row(p.k, labels.level, labels.n0)?;
    let terms = QuantumNumbers::at_level(labels.level)
        .into_iter()
        .zip(row)
        .map(|(qn, z)| (z, SeparableState::new(p, qn)))
        .collect();
    Ok(Combination {
        label: StateLabel::SusyPsi {
            level: labels.level,
            n0: labels.n0,
        },
        terms,
    })
}

pub fn eval_susy_psi(p: &ModelParams, labels: SusyLabels, x: f64, y: f64) -> Result<Derivs> {
    let st = susy_state(p, labels)?;
    p.check_point(x, y)?;
    Ok(st.eval(x, y))
}

/// Σ_s a_s ω_s with a_{N0+1} = 1: an unnormalized eigenfunction of H at E_{N0}
/// lying in the kernel of η.
pub fn zero_mode_combination(p: &ModelParams, n0: u32) -> Result<Combination<ZeroMode>> {
    let terms = coeffs::a_coeffs(p.k, n0)?
        .into_iter()
        .map(|(s, a)| Ok((a, ZeroMode::new(p, s as f64)?)))
        .collect::<Result<_>>()?;
    Ok(Combination {
        label: StateLabel::ZeroModeCombination { n0 },
        terms,
    })
}

/// An arbitrary smooth function given as a jet map, used as a probe.
#[derive(Clone)]
pub struct ClosureState {
    pub name: String,
    pub f: Arc<dyn Fn(Jet, Jet) -> Jet + Send + Sync>,
}

impl ClosureState {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(Jet, Jet) -> Jet + Send + Sync + 'static,
    ) -> Self {
        ClosureState {
            name: name.into(),
            f: Arc::new(f),
        }
    }
}

impl AnalyticState for ClosureState {
    fn label(&self) -> StateLabel {
        StateLabel::Custom(self.name.clone())
    }
    fn jet(&self, x: f64, y: f64, order: usize) -> Jet {
        (self.f)(Jet::var_x(x, order), Jet::var_y(y, order))
    }
}

/// Data of the map onto the trigonometric Pöschl–Teller problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtMap {
    pub kappa: f64,
    pub lambda: f64,
    pub pt_energy: f64,
}

/// z(x) = 2 arctan(e^{qx}) - π/2, taking (0, ∞) onto (0, π/2).
pub fn pt_coordinate(q: f64, x: f64) -> f64 {
    2.0 * (q * x).exp().atan() - 0.5 * PI
}

pub fn pt_map(p: &ModelParams, n: u32, l: u32) -> PtMap {
    let e = energy_level(p, 2 * n + l);
    let pt_energy = (e - p.q * p.q * p.v0) / (p.q * p.q) + (p.k - 0.5).powi(2);
    PtMap {
        kappa: p.k,
        lambda: l as f64 + 1.5,
        pt_energy,
    }
}

/// Inverse of the energy conversion: E = q²(ℰ - (k - 1/2)² + v0).
pub fn energy_from_pt(p: &ModelParams, pt_energy: f64) -> f64 {
    p.q * p.q * (pt_energy - (p.k - 0.5).powi(2) + p.v0)
}

/// Tensor Gauss–Legendre rule on the truncated layer (0, 12/q] × (-π/2q, π/2q),
/// graded towards the x = 0 wall.
pub fn layer_quadrature(p: &ModelParams) -> TensorRule {
    let x_max = 12.0 / p.q;
    let w = p.half_width();
    TensorRule {
        x: Rule1D::composite_graded(0.0, x_max, 64, 8, 24),
        y: Rule1D::composite(-w, w, 64, 6),
    }
}

/// Gram matrix ⟨f_i, f_j⟩ of the given states under the rule.
pub fn gram_matrix(states: &[&dyn AnalyticState], rule: &TensorRule) -> Vec<Vec<f64>> {
    let samples: Vec<Vec<f64>> = states
        .iter()
        .map(|s| rule.sample(|x, y| s.value(x, y)))
        .collect();
    let m = samples.len();
    let mut g = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = rule.inner(&samples[i], &samples[j]);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> ModelParams {
        ModelParams::new(1.3, 0.8, 0.4).unwrap()
    }

    #[test]
    fn energies_and_degeneracy() {
        let p = ModelParams::default();
        assert_eq!(energy_level(&p, 0), 6.0);
        assert_eq!(energy_level(&p, 2), 20.0);
        let p = ModelParams::new(2.0, 1.0, -6.0).unwrap();
        assert_eq!(energy_level(&p, 0), 0.0);
        assert_eq!([degeneracy(0), degeneracy(4), degeneracy(5)], [1, 3, 3]);
    }

    #[test]
    fn params_reject_invalid() {
        assert!(ModelParams::new(-1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn susy_labels_validate() {
        assert!(SusyLabels::new(3, 1).is_err());
        assert!(SusyLabels::new(2, 4).is_err());
        assert_eq!(SusyLabels::new(5, 2).unwrap().nu(), 3);
        assert_eq!(SusyLabels::at_level(5).len() as u32, degeneracy(5));
    }

    #[test]
    fn chi_values() {
        let p = p();
        let v = eval_chi(&p, 0, 0.0).unwrap();
        assert!((v[0] - (2.0 * p.q / PI).sqrt()).abs() < 1e-15);
        for l in 0..6 {
            assert!(eval_chi(&p, l, p.half_width()).unwrap()[0].abs() < 1e-12);
        }
        assert!(eval_chi(&p, 0, p.half_width() * 1.01).is_err());
    }

    #[test]
    fn phi_ground_state_normalization() {
        let p = p();
        let phi = Phi::new(&p, 0, 0);
        let want = 2.0 * p.q * (p.k + 1.5) * (p.k + 0.5);
        assert!((phi.normalization().powi(2) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn phi_chain_rule_matches_jet() {
        let p = p();
        for n in 0..4 {
            for l in 0..4 {
                let phi = Phi::new(&p, n, l);
                for &x in &[0.05, 0.4, 1.1, 3.0] {
                    let a = phi.derivs(x);
                    let j = phi.jet_of(Jet::var_x(x, 2));
                    for (m, av) in a.iter().enumerate() {
                        let jv = j.partial(m, 0);
                        assert!(
                            (av - jv).abs() < 1e-11 * (1.0 + jv.abs()),
                            "n={n} l={l} x={x} m={m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn phi_vanishes_at_wall() {
        let p = p();
        assert!(eval_phi(&p, 1, 1, 1e-12).unwrap()[0].abs() < 1e-8);
        assert!(eval_phi(&p, 1, 1, 0.0).is_err());
    }

    #[test]
    fn zero_mode_rejects_nonpositive_index() {
        let p = p();
        assert!(eval_zero_mode(&p, 0.0, 1.0, 0.0).is_err());
        assert!(eval_zero_mode(&p, -1.0, 1.0, 0.0).is_err());
        assert!(eval_zero_mode(&p, 1.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn ground_state_is_proportional_to_first_zero_mode() {
        let p = p();
        let psi = SeparableState::new(&p, QuantumNumbers::new(0, 0));
        let omega = ZeroMode::new(&p, 1.0).unwrap();
        let r0 = psi.value(0.7, 0.2) / omega.value(0.7, 0.2);
        assert!(r0 > 0.0);
        for &(x, y) in &[(0.1, -0.5), (1.5, 0.9), (3.0, 0.0)] {
            assert!((psi.value(x, y) / omega.value(x, y) - r0).abs() < 1e-12 * r0);
        }
    }

    #[test]
    fn pt_map_energy_is_a_square() {
        let p = p();
        for n in 0..4 {
            for l in 0..4 {
                let m = pt_map(&p, n, l);
                let want = (2.0 * n as f64 + l as f64 + p.k + 1.5).powi(2);
                assert!((m.pt_energy - want).abs() < 1e-12 * want);
                assert!(
                    (energy_from_pt(&p, m.pt_energy) - energy_level(&p, 2 * n + l)).abs() < 1e-11
                );
            }
        }
        assert_eq!(pt_coordinate(1.0, 0.0), 0.0);
        assert!((pt_coordinate(1.0, 40.0) - 0.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn domain_checks() {
        let p = p();
        let qn = QuantumNumbers::new(0, 0);
        assert!(eval_psi(&p, qn, -0.1, 0.0).is_err());
        assert!(eval_psi(&p, qn, 0.5, p.half_width()).is_err());
        assert!(eval_susy_psi(&p, SusyLabels { level: 2, n0: 1 }, 0.5, 0.0).is_err());
    }
}
