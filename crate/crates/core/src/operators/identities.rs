//! Residual checks for the operator identities of the model.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::model::{AnalyticState, ModelParams};

use super::catalog::*;
use super::expr::{BlockOp, GridCache, OpExpr};
use super::grid::{Grid2D, GridFunction};

pub const ANALYTIC_THRESHOLD: f64 = 1e-8;
pub const GRID_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Intertwine2d,
    ConjugateIntertwine,
    CommuteHR,
    RDefinition,
    ShapeInvarianceH,
    ShapeInvarianceR,
    Intertwine1d,
    Factorization,
    Superalgebra,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::Intertwine2d,
        Identity::ConjugateIntertwine,
        Identity::CommuteHR,
        Identity::RDefinition,
        Identity::ShapeInvarianceH,
        Identity::ShapeInvarianceR,
        Identity::Intertwine1d,
        Identity::Factorization,
        Identity::Superalgebra,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::Intertwine2d => "intertwine_2d",
            Identity::ConjugateIntertwine => "conjugate_intertwine",
            Identity::CommuteHR => "commute_HR",
            Identity::RDefinition => "R_definition",
            Identity::ShapeInvarianceH => "shape_invariance_H",
            Identity::ShapeInvarianceR => "shape_invariance_R",
            Identity::Intertwine1d => "intertwine_1d",
            Identity::Factorization => "factorization",
            Identity::Superalgebra => "superalgebra",
        }
    }

    /// Whether the identity involves only the one-dimensional radial operators.
    pub fn is_line(&self) -> bool {
        matches!(self, Identity::Intertwine1d | Identity::Factorization)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "identity",
                name: s.to_string(),
            })
    }
}

/// One operator that must annihilate every probe.
#[derive(Clone, Debug)]
pub enum Check {
    Scalar { name: String, op: OpExpr },
    Block { name: String, op: BlockOp },
}

impl Check {
    fn scalar(name: &str, op: OpExpr) -> Self {
        Check::Scalar {
            name: name.into(),
            op,
        }
    }
    fn block(name: &str, op: BlockOp) -> Self {
        Check::Block {
            name: name.into(),
            op,
        }
    }
    pub fn name(&self) -> &str {
        match self {
            Check::Scalar { name, .. } | Check::Block { name, .. } => name,
        }
    }
}

fn e(op: super::diffop::DiffOp2) -> OpExpr {
    OpExpr::atom(op)
}

fn e1(op: super::diffop::DiffOp1) -> OpExpr {
    OpExpr::line(&op)
}

fn adj1(op: super::diffop::DiffOp1) -> OpExpr {
    OpExpr::line(&op.first_order_adjoint().expect("first-order operator"))
}

/// The operators whose vanishing expresses the identity. `l` is used only by
/// the one-dimensional identities.
pub fn checks(id: Identity, p: &ModelParams, l: f64) -> Vec<Check> {
    OperatorSet::new(p).checks(id, l)
}

/// The planar operators at one parameter point. Each is built once, so the
/// coefficient tables of a [`GridCache`] are shared by every check using it.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    params: ModelParams,
    h: OpExpr,
    h1: OpExpr,
    eta: OpExpr,
    eta_dagger: OpExpr,
    r: OpExpr,
    r1: OpExpr,
    h_next: OpExpr,
    r_next: OpExpr,
}

impl OperatorSet {
    pub fn new(p: &ModelParams) -> Self {
        let (q, k, v0) = (p.q, p.k, p.v0);
        OperatorSet {
            params: *p,
            h: e(hamiltonian(q, k, v0)),
            h1: e(partner_hamiltonian(q, k, v0)),
            eta: e(intertwiner(q, k)),
            eta_dagger: e(intertwiner_adjoint(q, k)),
            r: e(constant_of_motion(q, k)),
            r1: e(partner_constant_of_motion(q, k)),
            h_next: e(hamiltonian(q, k + 1.0, v0)),
            r_next: e(constant_of_motion(q, k + 1.0)),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn checks(&self, id: Identity, l: f64) -> Vec<Check> {
        let (q, k) = (self.params.q, self.params.k);
        let h = || self.h.clone();
        let h1 = || self.h1.clone();
        let eta = || self.eta.clone();
        let etad = || self.eta_dagger.clone();
        let r = || self.r.clone();
        let r1 = || self.r1.clone();
        match id {
            Identity::Intertwine2d => {
                vec![Check::scalar("eta H - H1 eta", eta() * h() - h1() * eta())]
            }
            Identity::ConjugateIntertwine => {
                vec![Check::scalar(
                    "H eta+ - eta+ H1",
                    h() * etad() - etad() * h1(),
                )]
            }
            Identity::CommuteHR => vec![
                Check::scalar("[H, R]", OpExpr::commutator(&h(), &r())),
                Check::scalar("[H1, R1]", OpExpr::commutator(&h1(), &r1())),
            ],
            Identity::RDefinition => vec![
                Check::scalar("eta+ eta - R", etad() * eta() - r()),
                Check::scalar("eta eta+ - R1", eta() * etad() - r1()),
            ],
            Identity::ShapeInvarianceH => vec![Check::scalar(
                "H1(k) - H(k+1) - 2q^2 k",
                h1() - self.h_next.clone() - OpExpr::Scalar(2.0 * q * q * k),
            )],
            Identity::ShapeInvarianceR => vec![Check::scalar(
                "R1(k) - R(k+1) - q^2(2k+1)",
                r1() - self.r_next.clone() - OpExpr::Scalar(q * q * (2.0 * k + 1.0)),
            )],
            Identity::Intertwine1d => {
                let shift = OpExpr::Scalar(2.0 * q * q * k);
                let hl = e1(line_hamiltonian(q, k, l));
                vec![
                    Check::scalar(
                        "A H_l - (H_{l+1}(k+1) + 2q^2 k) A",
                        e1(line_raise(q, k, l)) * hl.clone()
                            - (e1(line_hamiltonian(q, k + 1.0, l + 1.0)) + shift.clone())
                                * e1(line_raise(q, k, l)),
                    ),
                    Check::scalar(
                        "At H_l - (H_{l-1}(k+1) + 2q^2 k) At",
                        e1(line_lower(q, k, l)) * hl
                            - (e1(line_hamiltonian(q, k + 1.0, l - 1.0)) + shift)
                                * e1(line_lower(q, k, l)),
                    ),
                ]
            }
            Identity::Factorization => {
                let hl = || e1(line_hamiltonian(q, k, l));
                let s = OpExpr::Scalar;
                vec![
                    Check::scalar(
                        "H_l - A+ A - c_l",
                        hl() - adj1(line_raise(q, k, l)) * e1(line_raise(q, k, l))
                            - s(raise_constant(q, k, l)),
                    ),
                    Check::scalar(
                        "H_l - A_{l-1}(k-1) A+_{l-1}(k-1) - c_{l-2}",
                        hl() - e1(line_raise(q, k - 1.0, l - 1.0))
                            * adj1(line_raise(q, k - 1.0, l - 1.0))
                            - s(raise_constant(q, k, l - 2.0)),
                    ),
                    Check::scalar(
                        "H_l - At+ At - ct_l",
                        hl() - adj1(line_lower(q, k, l)) * e1(line_lower(q, k, l))
                            - s(lower_constant(q, k, l)),
                    ),
                    Check::scalar(
                        "H_l - At_{l+1}(k-1) At+_{l+1}(k-1) - ct_{l+2}",
                        hl() - e1(line_lower(q, k - 1.0, l + 1.0))
                            * adj1(line_lower(q, k - 1.0, l + 1.0))
                            - s(lower_constant(q, k, l + 2.0)),
                    ),
                ]
            }
            Identity::Superalgebra => {
                let z = || OpExpr::Zero;
                let big_h = BlockOp::diag(h(), h1());
                let big_r = BlockOp::diag(r(), r1());
                let q_plus = BlockOp([[z(), z()], [eta(), z()]]);
                let q_minus = BlockOp([[z(), etad()], [z(), z()]]);
                vec![
                    Check::block(
                        "{Q+, Q-} - diag(R, R1)",
                        BlockOp::anticommutator(&q_plus, &q_minus) - big_r.clone(),
                    ),
                    Check::block("{Q+, Q+}", BlockOp::anticommutator(&q_plus, &q_plus)),
                    Check::block("{Q-, Q-}", BlockOp::anticommutator(&q_minus, &q_minus)),
                    Check::block("[H, Q+]", BlockOp::commutator(&big_h, &q_plus)),
                    Check::block("[H, Q-]", BlockOp::commutator(&big_h, &q_minus)),
                    Check::block("[R, Q+]", BlockOp::commutator(&big_r, &q_plus)),
                    Check::block("[R, Q-]", BlockOp::commutator(&big_r, &q_minus)),
                ]
            }
        }
    }
}

/// Input to an identity check.
#[derive(Clone)]
pub enum Probe {
    /// Closed-form state, evaluated exactly at the nodes of `sample`.
    Analytic {
        state: Arc<dyn AnalyticState>,
        sample: Grid2D,
    },
    /// Two-component closed-form probe for the block identities.
    AnalyticPair {
        states: [Arc<dyn AnalyticState>; 2],
        sample: Grid2D,
    },
    /// Sampled function, differentiated by stencils.
    Grid {
        label: String,
        f: GridFunction,
    },
    GridPair {
        label: String,
        f: [GridFunction; 2],
    },
}

impl Probe {
    pub fn label(&self) -> String {
        match self {
            Probe::Analytic { state, .. } => state.label().to_string(),
            Probe::AnalyticPair { states, .. } => {
                format!("({}, {})", states[0].label(), states[1].label())
            }
            Probe::Grid { label, .. } | Probe::GridPair { label, .. } => label.clone(),
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, Probe::Analytic { .. } | Probe::AnalyticPair { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResidual {
    pub check: String,
    pub residual_l2: f64,
    pub residual_sup: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub probe: String,
    pub path: &'static str,
    pub residual_l2: f64,
    pub residual_sup: f64,
    pub threshold: f64,
    pub pass: bool,
    pub checks: Vec<CheckResidual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const ANTICOMMUTATOR_NOTE: &str =
    "{Q+, Q-} is checked against diag(R, R1), which block multiplication forces; it is not zero";

/// Relative residuals (L², sup) of `op` applied to a closed-form state on the
/// sample nodes, normalized by the state's own norms there.
pub fn state_residual(
    op: &OpExpr,
    state: &dyn AnalyticState,
    sample: &Grid2D,
) -> Result<(f64, f64)> {
    let res = apply_to_state(op, state, sample);
    let probe = sample.sample_state(state);
    relative(&[res], &[probe])
}

/// (op f)(x, y) at every node of the grid, computed from exact derivatives.
pub fn apply_to_state(op: &OpExpr, state: &dyn AnalyticState, grid: &Grid2D) -> GridFunction {
    let order = op.order();
    grid.sample(|x, y| op.apply_jet(&state.jet(x, y, order), x, y).value())
}

fn relative(res: &[GridFunction], probe: &[GridFunction]) -> Result<(f64, f64)> {
    let mut num2 = 0.0;
    let mut den2 = 0.0;
    let mut num_sup: f64 = 0.0;
    let mut den_sup: f64 = 0.0;
    for (r, f) in res.iter().zip(probe) {
        num2 += super::grid::inner_product(r, r)?;
        den2 += super::grid::inner_product(f, f)?;
        num_sup = num_sup.max(r.sup_norm());
        den_sup = den_sup.max(f.sup_norm());
    }
    if !(den2 > 0.0) || !(den_sup > 0.0) {
        return Err(Error::InvalidParameter(
            "probe vanishes on the sample grid".into(),
        ));
    }
    Ok(((num2 / den2).sqrt(), num_sup / den_sup))
}

fn block_on_states(
    op: &BlockOp,
    states: &[Arc<dyn AnalyticState>; 2],
    grid: &Grid2D,
) -> [GridFunction; 2] {
    let order = op.order();
    let mut out = [GridFunction::zeros(*grid), GridFunction::zeros(*grid)];
    for (idx, (x, y)) in grid.points().enumerate() {
        let f: [Jet; 2] = [states[0].jet(x, y, order), states[1].jet(x, y, order)];
        let r = op.apply_jet(&f, x, y);
        out[0].values[idx] = r[0].value();
        out[1].values[idx] = r[1].value();
    }
    out
}

/// Residual of one identity on one probe.
pub fn verify_identity(
    id: Identity,
    p: &ModelParams,
    l: f64,
    probe: &Probe,
) -> Result<IdentityReport> {
    Verifier::new(p, l).verify(id, probe)
}

/// Runs identity checks at one parameter point, keeping coefficient tables
/// between probes that share a grid.
pub struct Verifier {
    ops: OperatorSet,
    l: f64,
    cache: GridCache,
}

impl Verifier {
    pub fn new(p: &ModelParams, l: f64) -> Self {
        Verifier {
            ops: OperatorSet::new(p),
            l,
            cache: GridCache::new(),
        }
    }

    pub fn verify(&mut self, id: Identity, probe: &Probe) -> Result<IdentityReport> {
        let mut results = Vec::new();
        for check in self.ops.checks(id, self.l) {
            let (l2, sup) = match (&check, probe) {
                (Check::Scalar { op, .. }, Probe::Analytic { state, sample }) => {
                    state_residual(op, state.as_ref(), sample)?
                }
                (Check::Scalar { op, .. }, Probe::Grid { f, .. }) => relative(
                    &[op.apply_grid_cached(f, &mut self.cache)?],
                    std::slice::from_ref(f),
                )?,
                (Check::Block { op, .. }, Probe::AnalyticPair { states, sample }) => {
                    let res = block_on_states(op, states, sample);
                    let f = [
                        sample.sample_state(states[0].as_ref()),
                        sample.sample_state(states[1].as_ref()),
                    ];
                    relative(&res, &f)?
                }
                (Check::Block { op, .. }, Probe::GridPair { f, .. }) => {
                    relative(&op.apply_grid_cached(f, &mut self.cache)?, f)?
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "identity {id} does not accept probe {}",
                        probe.label()
                    )))
                }
            };
            results.push(CheckResidual {
                check: check.name().to_string(),
                residual_l2: l2,
                residual_sup: sup,
            });
        }
        let residual_l2 = results.iter().fold(0.0, |m: f64, c| m.max(c.residual_l2));
        let residual_sup = results.iter().fold(0.0, |m: f64, c| m.max(c.residual_sup));
        let threshold = if probe.is_analytic() {
            ANALYTIC_THRESHOLD
        } else {
            GRID_THRESHOLD
        };
        Ok(IdentityReport {
            identity: id.name().to_string(),
            probe: probe.label(),
            path: if probe.is_analytic() {
                "analytic"
            } else {
                "grid"
            },
            residual_l2,
            residual_sup,
            threshold,
            pass: residual_l2 < threshold && residual_sup < threshold,
            checks: results,
            note: (id == Identity::Superalgebra).then(|| ANTICOMMUTATOR_NOTE.to_string()),
        })
    }
}
