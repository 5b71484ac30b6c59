//! The concrete operators of the model and of its one-dimensional reduction.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::model::ModelParams;

use super::diffop::{field, DiffOp1, DiffOp2};

fn csch2(qx: Jet) -> Jet {
    let s = qx.sinh();
    (s * s).recip()
}

/// -∂x cosh²qx ∂x - cosh²qx ∂y² - q²cosh²qx + q²g csch²qx + q²c with the
/// centrifugal strength g and constant c given.
fn layer_hamiltonian(q: f64, g: f64, c: f64) -> DiffOp2 {
    let q2 = q * q;
    let neg_c2 = field(move |x: Jet, _y: Jet| {
        let ch = (x * q).cosh();
        -(ch * ch)
    });
    DiffOp2 {
        c_xx: Some(neg_c2.clone()),
        c_yy: Some(neg_c2),
        c_x: Some(field(move |x: Jet, _y: Jet| {
            let qx = x * q;
            (qx.sinh() * qx.cosh()).scale(-2.0 * q)
        })),
        c_0: Some(field(move |x: Jet, _y: Jet| {
            let qx = x * q;
            let ch = qx.cosh();
            (ch * ch).scale(-q2) + csch2(qx).scale(q2 * g) + q2 * c
        })),
        ..Default::default()
    }
}

/// H^{(k)}.
pub fn hamiltonian(q: f64, k: f64, v0: f64) -> DiffOp2 {
    layer_hamiltonian(q, k * (k - 1.0), v0)
}

/// H₁^{(k)}, the partner Hamiltonian.
pub fn partner_hamiltonian(q: f64, k: f64, v0: f64) -> DiffOp2 {
    layer_hamiltonian(q, k * (k + 1.0), v0 + 2.0 * k)
}

/// η^{(k)} = sin qy (cosh qx ∂x + q sinh qx - qk csch qx) - sinh qx cos qy ∂y.
pub fn intertwiner(q: f64, k: f64) -> DiffOp2 {
    DiffOp2::first_order(
        field(move |x: Jet, y: Jet| (x * q).cosh() * (y * q).sin()),
        field(move |x: Jet, y: Jet| -((x * q).sinh() * (y * q).cos())),
        field(move |x: Jet, y: Jet| {
            let qx = x * q;
            let sh = qx.sinh();
            (y * q).sin() * (sh.scale(q) - sh.recip().scale(q * k))
        }),
    )
}

pub fn intertwiner_adjoint(q: f64, k: f64) -> DiffOp2 {
    intertwiner(q, k)
        .first_order_adjoint()
        .expect("first-order operator")
}

/// R^{(k)} with its coefficients written out explicitly.
pub fn constant_of_motion(q: f64, k: f64) -> DiffOp2 {
    let q2 = q * q;
    let parts = move |x: Jet, y: Jet| {
        let (qx, qy) = (x * q, y * q);
        (qx.sinh(), qx.cosh(), qy.sin(), qy.cos())
    };
    DiffOp2 {
        c_xx: Some(field(move |x, y| {
            let (_, c, s, _) = parts(x, y);
            -(c * c * s * s)
        })),
        c_xy: Some(field(move |x, y| {
            let (sh, ch, s, c) = parts(x, y);
            (sh * ch * s * c).scale(2.0)
        })),
        c_yy: Some(field(move |x, y| {
            let (sh, _, _, c) = parts(x, y);
            -(sh * sh * c * c)
        })),
        c_x: Some(field(move |x, y| {
            let (sh, ch, s, _) = parts(x, y);
            (sh * ch * (1.0 - (s * s).scale(4.0))).scale(q)
        })),
        c_y: Some(field(move |x, y| {
            let (sh, _, s, c) = parts(x, y);
            (s * c * (1.0 + (sh * sh).scale(4.0))).scale(q)
        })),
        c_0: Some(field(move |x, y| {
            let (sh, _, s, _) = parts(x, y);
            let (sh2, s2) = (sh * sh, s * s);
            let ratio = s2 * sh2.recip();
            (sh2 - s2 - (sh2 * s2).scale(3.0)).scale(q2) - (1.0 + ratio).scale(q2 * k)
                + ratio.scale(q2 * k * k)
        })),
    }
}

/// R₁^{(k)} = R^{(k)} + 2q²k(1 + csch²qx sin²qy).
pub fn partner_constant_of_motion(q: f64, k: f64) -> DiffOp2 {
    let mut r = constant_of_motion(q, k);
    let base = r.c_0.take().expect("R has a potential term");
    r.c_0 = Some(field(move |x: Jet, y: Jet| {
        let s = (y * q).sin();
        base(x, y) + (1.0 + s * s * csch2(x * q)).scale(2.0 * q * q * k)
    }));
    r
}

/// L = -∂y².
pub fn transverse() -> DiffOp2 {
    DiffOp2 {
        c_yy: Some(field(|x: Jet, _y: Jet| Jet::constant(-1.0, x.order()))),
        ..Default::default()
    }
}

/// H_l^{(k)} acting on the radial factor (energies measured from q²v0).
pub fn line_hamiltonian(q: f64, k: f64, l: f64) -> DiffOp1 {
    let q2 = q * q;
    DiffOp1 {
        c_xx: Some(field(move |x: Jet, _y: Jet| {
            let ch = (x * q).cosh();
            -(ch * ch)
        })),
        c_x: Some(field(move |x: Jet, _y: Jet| {
            let qx = x * q;
            (qx.sinh() * qx.cosh()).scale(-2.0 * q)
        })),
        c_0: Some(field(move |x: Jet, _y: Jet| {
            let qx = x * q;
            let ch = qx.cosh();
            (ch * ch).scale(q2 * l * (l + 2.0)) + csch2(qx).scale(q2 * k * (k - 1.0))
        })),
    }
}

/// cosh qx d/dx + q a sinh qx - qk csch qx.
fn line_ladder(q: f64, k: f64, a: f64) -> DiffOp1 {
    DiffOp1::first_order(
        field(move |x: Jet, _y: Jet| (x * q).cosh()),
        field(move |x: Jet, _y: Jet| {
            let sh = (x * q).sinh();
            sh.scale(q * a) - sh.recip().scale(q * k)
        }),
    )
}

/// 𝒜_l^{(k)}, raising l by one.
pub fn line_raise(q: f64, k: f64, l: f64) -> DiffOp1 {
    line_ladder(q, k, l + 2.0)
}

/// 𝒜̃_l^{(k)}, lowering l by one.
pub fn line_lower(q: f64, k: f64, l: f64) -> DiffOp1 {
    line_ladder(q, k, -l)
}

/// c_l^{(k)} = q²(l+2)(l+2k+1).
pub fn raise_constant(q: f64, k: f64, l: f64) -> f64 {
    q * q * (l + 2.0) * (l + 2.0 * k + 1.0)
}

/// c̃_l^{(k)} = q² l (l - 2k + 1).
pub fn lower_constant(q: f64, k: f64, l: f64) -> f64 {
    q * q * l * (l - 2.0 * k + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorKind {
    H,
    H1,
    Eta,
    EtaDagger,
    R,
    R1,
    L,
    LineH,
    LineRaise,
    LineRaiseDagger,
    LineLower,
    LineLowerDagger,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 12] = [
        OperatorKind::H,
        OperatorKind::H1,
        OperatorKind::Eta,
        OperatorKind::EtaDagger,
        OperatorKind::R,
        OperatorKind::R1,
        OperatorKind::L,
        OperatorKind::LineH,
        OperatorKind::LineRaise,
        OperatorKind::LineRaiseDagger,
        OperatorKind::LineLower,
        OperatorKind::LineLowerDagger,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::H => "H",
            OperatorKind::H1 => "H1",
            OperatorKind::Eta => "eta",
            OperatorKind::EtaDagger => "eta_dagger",
            OperatorKind::R => "R",
            OperatorKind::R1 => "R1",
            OperatorKind::L => "L",
            OperatorKind::LineH => "H_l",
            OperatorKind::LineRaise => "A_l",
            OperatorKind::LineRaiseDagger => "A_l_dagger",
            OperatorKind::LineLower => "A_tilde_l",
            OperatorKind::LineLowerDagger => "A_tilde_l_dagger",
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(
            self,
            OperatorKind::LineH
                | OperatorKind::LineRaise
                | OperatorKind::LineRaiseDagger
                | OperatorKind::LineLower
                | OperatorKind::LineLowerDagger
        )
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "operator",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone)]
pub enum Operator {
    Planar(DiffOp2),
    Line(DiffOp1),
}

impl Operator {
    pub fn planar(&self) -> DiffOp2 {
        match self {
            Operator::Planar(op) => op.clone(),
            Operator::Line(op) => op.as_planar(),
        }
    }
}

/// Builds a named operator; the one-dimensional kinds need `l`.
pub fn build_operator(kind: OperatorKind, p: &ModelParams, l: Option<f64>) -> Result<Operator> {
    let (q, k, v0) = (p.q, p.k, p.v0);
    let need_l = || l.ok_or_else(|| Error::InvalidParameter(format!("operator {kind} needs l")));
    Ok(match kind {
        OperatorKind::H => Operator::Planar(hamiltonian(q, k, v0)),
        OperatorKind::H1 => Operator::Planar(partner_hamiltonian(q, k, v0)),
        OperatorKind::Eta => Operator::Planar(intertwiner(q, k)),
        OperatorKind::EtaDagger => Operator::Planar(intertwiner_adjoint(q, k)),
        OperatorKind::R => Operator::Planar(constant_of_motion(q, k)),
        OperatorKind::R1 => Operator::Planar(partner_constant_of_motion(q, k)),
        OperatorKind::L => Operator::Planar(transverse()),
        OperatorKind::LineH => Operator::Line(line_hamiltonian(q, k, need_l()?)),
        OperatorKind::LineRaise => Operator::Line(line_raise(q, k, need_l()?)),
        OperatorKind::LineRaiseDagger => {
            Operator::Line(line_raise(q, k, need_l()?).first_order_adjoint()?)
        }
        OperatorKind::LineLower => Operator::Line(line_lower(q, k, need_l()?)),
        OperatorKind::LineLowerDagger => {
            Operator::Line(line_lower(q, k, need_l()?).first_order_adjoint()?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14 * (1.0 + b.abs())
    }

    #[test]
    fn eta_coefficients_on_the_axis() {
        let op = intertwiner(1.0, 1.7);
        let c = op.coefficients_at(1.0, 0.0);
        assert!(close(c.c_x, 0.0));
        assert!(close(c.c_y, -1f64.sinh()));
        assert!(close(c.c_0, 0.0));
    }

    #[test]
    fn hamiltonian_kinetic_coefficients() {
        let q = 1.4;
        let op = hamiltonian(q, 0.6, 0.3);
        for &(x, y) in &[(0.3, 0.1), (1.7, -0.8)] {
            let c = op.coefficients_at(x, y);
            assert!(close(c.c_xx, -(q * x).cosh().powi(2)));
            assert!(close(c.c_yy, c.c_xx));
            assert!(close(c.c_x, -2.0 * q * (q * x).sinh() * (q * x).cosh()));
            assert_eq!(c.c_xy, 0.0);
        }
    }

    #[test]
    fn transverse_coefficients() {
        let c = transverse().coefficients_at(0.5, 0.2);
        assert_eq!(
            c,
            super::super::diffop::Coefficients {
                c_yy: -1.0,
                ..Default::default()
            }
        );
    }

    #[test]
    fn adjoint_of_eta_has_expected_potential() {
        // -(∂x A1 + ∂y A2) + B with ∂x A1 + ∂y A2 = 2q sinh qx sin qy
        let (q, k) = (1.2, 0.9);
        let (x, y) = (0.8, 0.3);
        let eta = intertwiner(q, k).coefficients_at(x, y);
        let dag = intertwiner_adjoint(q, k).coefficients_at(x, y);
        assert!(close(dag.c_x, -eta.c_x));
        assert!(close(dag.c_y, -eta.c_y));
        let want = eta.c_0 - 2.0 * q * (q * x).sinh() * (q * y).sin();
        assert!((dag.c_0 - want).abs() < 1e-13);
    }

    #[test]
    fn kinds_round_trip_and_unknown_names_fail() {
        for k in OperatorKind::ALL {
            assert_eq!(k.name().parse::<OperatorKind>().unwrap(), k);
        }
        assert!(matches!(
            "Q".parse::<OperatorKind>(),
            Err(Error::Unknown { .. })
        ));
        let p = ModelParams::default();
        assert!(build_operator(OperatorKind::LineH, &p, None).is_err());
        assert!(build_operator(OperatorKind::LineH, &p, Some(2.0)).is_ok());
    }
}
