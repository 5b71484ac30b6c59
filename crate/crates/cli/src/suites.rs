//! Verification suites behind `pdm verify`.

use serde::Serialize;

use pdm_core::coeffs::{
    s_sum_closed, s_sum_direct, x_factor, z_row, z_row_from_ground, TransformMatrix,
};
use pdm_core::jet::Jet;
use pdm_core::massgen::{
    constraint_residuals, hyperbolic_family, mass_class_solution, one_dim_susy, ClassConstants,
    MassClass, XDomain,
};
use pdm_core::model::{AnalyticState, ClosureState, ModelParams};
use pdm_core::operators::catalog::{hamiltonian, intertwiner};
use pdm_core::operators::diffop::{field, DiffOp2};
use pdm_core::operators::grid::Grid2D;
use pdm_core::operators::identities::{Identity, IdentityReport, Verifier};
use pdm_core::operators::probes::{standard_probes, ProbeResolution};
use pdm_core::Result;

use crate::args::Suite;

#[derive(Debug, Clone, Serialize)]
pub struct ScalarCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl ScalarCheck {
    fn new(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        ScalarCheck {
            name: name.into(),
            value,
            threshold,
            pass: value < threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: ModelParams,
    pub pass: bool,
    pub identities: Vec<IdentityReport>,
    pub checks: Vec<ScalarCheck>,
}

fn identities_of(suite: Suite) -> Vec<Identity> {
    use Identity::*;
    match suite {
        Suite::All => Identity::ALL.to_vec(),
        Suite::Intertwine => vec![Intertwine2d, ConjugateIntertwine, Intertwine1d],
        Suite::Commute => vec![CommuteHR, RDefinition, ShapeInvarianceH, ShapeInvarianceR],
        Suite::Susy => vec![Factorization, Superalgebra],
        Suite::Massgen | Suite::Coeffs => Vec::new(),
    }
}

pub fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::All => "all",
        Suite::Intertwine => "intertwine",
        Suite::Commute => "commute",
        Suite::Susy => "susy",
        Suite::Massgen => "massgen",
        Suite::Coeffs => "coeffs",
    }
}

pub fn run(suite: Suite, p: &ModelParams, l: f64, res: ProbeResolution) -> Result<SuiteReport> {
    let mut identities = Vec::new();
    let mut verifier = Verifier::new(p, l);
    for id in identities_of(suite) {
        for probe in standard_probes(p, id, res)? {
            identities.push(verifier.verify(id, &probe)?);
        }
    }
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Massgen) {
        checks.extend(massgen_checks(p)?);
    }
    if matches!(suite, Suite::All | Suite::Coeffs) {
        checks.extend(coeff_checks(p)?);
    }
    let pass = identities.iter().all(|r| r.pass) && checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        suite: suite_name(suite).into(),
        params: *p,
        pass,
        identities,
        checks,
    })
}

/// Deterministic scatter over [x_lo, x_hi] × [y_lo, y_hi].
pub fn scatter(n: usize, x: (f64, f64), y: (f64, f64)) -> Vec<(f64, f64)> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let root2 = 2f64.sqrt() - 1.0;
    (1..=n)
        .map(|i| {
            let (u, v) = ((i as f64 * golden).fract(), (i as f64 * root2).fract());
            (x.0 + u * (x.1 - x.0), y.0 + v * (y.1 - y.0))
        })
        .collect()
}

fn massgen_checks(p: &ModelParams) -> Result<Vec<ScalarCheck>> {
    let ModelParams { q, k, v0 } = *p;
    let mut out = Vec::new();
    let classes = [
        (
            MassClass::Hyperbolic,
            ClassConstants {
                a: 0.7,
                b: -0.4,
                c: 0.3,
                d: 1.2,
                g: 0.5,
            },
            XDomain::whole_line(),
            (-2.0, 2.0),
        ),
        (
            MassClass::Rational,
            ClassConstants {
                a: 0.6,
                b: 0.8,
                c: 1.1,
                d: 0.4,
                g: -0.3,
            },
            XDomain::new(0.0, 4.0)?,
            (0.2, 4.0),
        ),
        (
            MassClass::Trigonometric,
            ClassConstants {
                a: -0.5,
                b: 0.9,
                c: 0.2,
                d: 1.0,
                g: 0.1,
            },
            XDomain::new(-0.5 / q, 0.5 / q)?,
            (-0.5, 0.5),
        ),
    ];
    for (class, constants, domain, (lo, hi)) in classes {
        let sol = mass_class_solution(class, constants, Some(q), domain)?;
        let (lo, hi) = if class == MassClass::Trigonometric {
            (lo / q, hi / q)
        } else {
            (lo, hi)
        };
        let r = constraint_residuals(&sol, &scatter(100, (lo, hi), (-1.5, 1.5)));
        out.push(ScalarCheck::new(
            format!("mass_class_{}", class.name()),
            r.max(),
            1e-10,
        ));
    }

    let fam = hyperbolic_family(q, -q * k, 0.0, 0.0, q * q * v0)?;
    let fields = fam.fields();
    let v = fam.v_eff().expect("G = 0");
    let from_family = DiffOp2::pdm_hamiltonian(fields.mass.clone(), v);
    let eta_family = DiffOp2::first_order(fields.a1.clone(), fields.a2.clone(), fam.free_term());
    let (h, eta) = (hamiltonian(q, k, v0), intertwiner(q, k));
    let mut worst: f64 = 0.0;
    let w = 0.9 * p.half_width();
    for (x, y) in scatter(100, (0.2 / q, 3.0 / q), (-w, w)) {
        let pairs = [
            (h.coefficients_at(x, y), from_family.coefficients_at(x, y)),
            (eta.coefficients_at(x, y), eta_family.coefficients_at(x, y)),
        ];
        for (a, b) in pairs {
            for (u, v) in [
                (a.c_xx, b.c_xx),
                (a.c_yy, b.c_yy),
                (a.c_x, b.c_x),
                (a.c_y, b.c_y),
                (a.c_0, b.c_0),
            ] {
                worst = worst.max((u - v).abs() / (1.0 + u.abs()));
            }
        }
    }
    out.push(ScalarCheck::new(
        "family_reproduces_layer_operators",
        worst,
        1e-12,
    ));

    let general = hyperbolic_family(q, 0.6 * q, 0.0, 1.0, 0.3)?;
    let pts: Vec<(f64, f64)> = scatter(100, (0.2 / q, 2.5 / q), (0.1 / q, 1.4 / q))
        .into_iter()
        .enumerate()
        .map(|(i, (x, y))| (x, if i % 2 == 0 { y } else { -y }))
        .collect();
    let r = general.residuals(&pts);
    let system = [
        r.coefficients,
        r.free_term.unwrap_or(f64::INFINITY),
        r.potential.unwrap_or(f64::INFINITY),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    out.push(ScalarCheck::new(
        "family_solves_intertwining_system",
        system,
        1e-10,
    ));

    let b = field(move |x: Jet, _| {
        let sh = (x * q).sinh();
        sh * q - sh.recip() * (q * k)
    });
    let mass = field(move |x: Jet, _| {
        let c = (x * q).cosh();
        (c * c).recip()
    });
    let sol = one_dim_susy(b, 0.35, mass);
    let probes = [
        ClosureState::new("gauss", move |x: Jet, _| {
            (x * q - 1.0).powi(2).scale(-1.0).exp()
        }),
        ClosureState::new("ramp", move |x: Jet, _| {
            (x * q).tanh() * (x * (0.5 * q)).cos()
        }),
    ];
    let refs: Vec<&dyn AnalyticState> = probes.iter().map(|s| s as &dyn AnalyticState).collect();
    let sample = Grid2D::line(0.2 / q, 3.0 / q, 41, 0.0)?;
    out.push(ScalarCheck::new(
        "one_dimension_is_trivial",
        sol.probe_residual(&refs, &sample)?,
        1e-8,
    ));
    Ok(out)
}

fn coeff_checks(p: &ModelParams) -> Result<Vec<ScalarCheck>> {
    let k = p.k;
    let mut out = Vec::new();
    let mut orth: f64 = 0.0;
    for big_n in 0..=8 {
        let t = TransformMatrix::build(k, big_n)?;
        orth = orth
            .max(t.orthogonality_residual())
            .max(t.column_orthogonality_residual());
    }
    out.push(ScalarCheck::new("transform_orthogonality", orth, 1e-10));

    let mut ground: f64 = 0.0;
    for big_n in 0..=8 {
        let a = z_row(k, big_n, 0)?;
        let b = z_row_from_ground(k, big_n)?;
        for (x, y) in a.iter().zip(&b) {
            ground = ground.max((x - y).abs());
        }
    }
    out.push(ScalarCheck::new(
        "ground_route_matches_closed_form",
        ground,
        1e-12,
    ));

    let mut s: f64 = 0.0;
    for n0 in (0..=20).step_by(2) {
        let (d, c) = (s_sum_direct(k, n0)?, s_sum_closed(k, n0)?);
        s = s.max(((d - c) / c).abs());
    }
    out.push(ScalarCheck::new("normalization_sum_closed_form", s, 1e-12));

    let mut paths: f64 = 0.0;
    for l in 0..=10u32 {
        for nu in 0..=10u32 {
            for mu in 0..=nu {
                let want = count_walks(l, nu, mu);
                paths = paths.max((x_factor(l, nu, mu as i64) as f64 - want as f64).abs());
            }
        }
    }
    out.push(ScalarCheck::new("lattice_path_factor", paths, 0.5));
    Ok(out)
}

/// Exhaustive count of ν-step ±1 walks from height l to l + ν − 2μ that stay
/// nonnegative.
fn count_walks(l: u32, nu: u32, mu: u32) -> u64 {
    let target = l as i64 + nu as i64 - 2 * mu as i64;
    (0u32..1 << nu)
        .filter(|bits| {
            let mut h = l as i64;
            for step in 0..nu {
                h += if bits >> step & 1 == 1 { -1 } else { 1 };
                if h < 0 {
                    return false;
                }
            }
            h == target
        })
        .count() as u64
}
