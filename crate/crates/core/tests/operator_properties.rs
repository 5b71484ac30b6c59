use std::sync::Arc;

use pdm_core::coeffs::{ladder_coeffs, LadderDirection};
use pdm_core::jet::Jet;
use pdm_core::model::{
    energy_level, r_eigenvalue, susy_state, AnalyticState, Chi, ClosureState, Combination,
    ModelParams, Phi, QuantumNumbers, SeparableState, StateLabel, SusyLabels,
};
use pdm_core::operators::catalog::*;
use pdm_core::operators::grid::{inner_product, Grid2D, GridFunction};
use pdm_core::operators::identities::state_residual;
use pdm_core::operators::probes::{analytic_sample, probe_grid, random_grid_probe};
use pdm_core::operators::OpExpr;
use pdm_core::quadrature::{Rule1D, TensorRule};
use proptest::prelude::*;

fn params(q: f64, k: f64) -> ModelParams {
    ModelParams::new(q, k, 0.3).unwrap()
}

fn unit(f: GridFunction) -> GridFunction {
    let n = f.l2_norm().unwrap();
    f.scale(1.0 / n)
}

#[test]
fn transverse_operator_scales_chi() {
    let p = params(1.3, 1.0);
    for l in 0..5 {
        let chi = Chi { q: p.q, l };
        let st = ClosureState::new("g chi", move |x: Jet, y: Jet| {
            (x * x).scale(-0.5).exp() * x.sinh() * chi.jet_of(y)
        });
        let lambda = ((l + 1) as f64 * p.q).powi(2);
        let op = OpExpr::atom(transverse()) - OpExpr::Scalar(lambda);
        let (l2, sup) = state_residual(&op, &st, &analytic_sample(&p, false).unwrap()).unwrap();
        assert!(l2 < 1e-10 && sup < 1e-10, "l = {l}: {l2:e} {sup:e}");
    }
}

#[test]
fn hamiltonian_has_ground_state_energy() {
    for (q, k) in [(1.0, 1.0), (0.7, 2.5), (1.5, 0.6)] {
        let p = params(q, k);
        let psi = SeparableState::new(&p, QuantumNumbers::new(0, 0));
        let op = OpExpr::atom(hamiltonian(q, k, p.v0)) - OpExpr::Scalar(energy_level(&p, 0));
        let (l2, sup) = state_residual(&op, &psi, &analytic_sample(&p, false).unwrap()).unwrap();
        assert!(l2 < 1e-9 && sup < 1e-9, "q = {q}, k = {k}: {l2:e} {sup:e}");
    }
}

/// Grid application of H to a sampled ground state, against E_0 ψ.
fn grid_ground_state_residual(p: &ModelParams, x_max: f64, nx: usize, ny: usize) -> f64 {
    let grid = Grid2D::layer(p, x_max, nx, ny).unwrap();
    let psi = SeparableState::new(p, QuantumNumbers::new(0, 0));
    let f = grid.sample_state(&psi);
    let hf = hamiltonian(p.q, p.k, p.v0).apply_grid(&f).unwrap();
    let res = hf.axpy(-energy_level(p, 0), &f).unwrap();
    res.sup_norm() / f.sup_norm()
}

#[test]
fn grid_hamiltonian_converges_at_fourth_order() {
    let p = ModelParams::default();
    let x_max = 10.0;
    let coarse = grid_ground_state_residual(&p, x_max, 200, 100);
    let mid = grid_ground_state_residual(&p, x_max, 400, 200);
    let fine = grid_ground_state_residual(&p, x_max, 800, 400);
    assert!(fine < 1e-4, "residual at h = X/800: {fine:e}");
    let order = (mid / fine).log2();
    assert!(
        order > 3.5,
        "observed order {order} ({coarse:e}, {mid:e}, {fine:e})"
    );
}

#[test]
fn r_acts_diagonally_on_simultaneous_eigenstates() {
    for (q, k) in [(1.0, 1.0), (1.2, 2.5), (0.8, 0.7)] {
        let p = params(q, k);
        let sample = analytic_sample(&p, false).unwrap();
        for level in 0..=5 {
            for labels in SusyLabels::at_level(level) {
                let st = susy_state(&p, labels).unwrap();
                let r = OpExpr::atom(constant_of_motion(q, k))
                    - OpExpr::Scalar(r_eigenvalue(&p, labels));
                let (l2, sup) = state_residual(&r, &st, &sample).unwrap();
                assert!(l2 < 1e-8 && sup < 1e-8, "{labels:?}: {l2:e} {sup:e}");
                let h =
                    OpExpr::atom(hamiltonian(q, k, p.v0)) - OpExpr::Scalar(energy_level(&p, level));
                let (l2, sup) = state_residual(&h, &st, &sample).unwrap();
                assert!(l2 < 1e-8 && sup < 1e-8, "{labels:?}: {l2:e} {sup:e}");
            }
        }
    }
}

fn two_term(
    p: &ModelParams,
    action: pdm_core::coeffs::LadderAction,
) -> Combination<SeparableState> {
    let terms = action
        .targets
        .iter()
        .zip(action.coeffs)
        .filter_map(|(t, c)| t.map(|(n, l)| (c, SeparableState::new(p, QuantumNumbers::new(n, l)))))
        .collect();
    Combination {
        label: StateLabel::Custom("ladder".into()),
        terms,
    }
}

fn difference_residual(
    op: &OpExpr,
    input: &dyn AnalyticState,
    want: &dyn AnalyticState,
    sample: &Grid2D,
) -> f64 {
    let order = op.order();
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (x, y) in sample.points() {
        let got = op.apply_jet(&input.jet(x, y, order), x, y).value();
        num = num.max((got - want.value(x, y)).abs());
        den = den.max(input.value(x, y).abs());
    }
    num / den
}

#[test]
fn eta_lowers_into_the_next_family() {
    for (q, k) in [(1.0, 1.0), (1.4, 2.5), (0.9, 0.6)] {
        let p = params(q, k);
        let next = p.with_k(k + 1.0);
        let eta = OpExpr::atom(intertwiner(q, k));
        let sample = analytic_sample(&p, false).unwrap();
        for n in 0..4 {
            for l in 0..4 {
                let psi = SeparableState::new(&p, QuantumNumbers::new(n, l));
                let want = two_term(&next, ladder_coeffs(q, k, n, l, LadderDirection::Down));
                let r = difference_residual(&eta, &psi, &want, &sample);
                assert!(r < 1e-8, "k = {k}, (n, l) = ({n}, {l}): {r:e}");
            }
        }
    }
}

#[test]
fn eta_dagger_raises_into_the_previous_family() {
    for (q, k) in [(1.0, 1.0), (1.4, 2.5), (0.9, 0.6)] {
        let p = params(q, k);
        let next = p.with_k(k + 1.0);
        let eta_dagger = OpExpr::atom(intertwiner_adjoint(q, k));
        let sample = analytic_sample(&p, false).unwrap();
        for n in 0..4 {
            for l in 0..4 {
                let psi = SeparableState::new(&next, QuantumNumbers::new(n, l));
                let want = two_term(&p, ladder_coeffs(q, k, n, l, LadderDirection::Up));
                let r = difference_residual(&eta_dagger, &psi, &want, &sample);
                assert!(r < 1e-8, "k = {k}, (n, l) = ({n}, {l}): {r:e}");
            }
        }
    }
}

/// Relative distance of `got` from its best multiple of `want` on the sample.
fn proportionality_defect(got: &[f64], want: &[f64]) -> f64 {
    let dot: f64 = got.iter().zip(want).map(|(a, b)| a * b).sum();
    let norm: f64 = want.iter().map(|b| b * b).sum();
    let c = dot / norm;
    let scale = got.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(scale > 0.0, "image vanishes on the sample");
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - c * b).abs())
        .fold(0.0, f64::max)
        / scale
}

fn line_values(op: &pdm_core::operators::DiffOp1, st: &Phi, xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| op.apply_jet(&st.jet(x, 0.0, 1), x, 0.0).value())
        .collect()
}

#[test]
fn radial_ladders_shift_labels() {
    let xs: Vec<f64> = (1..60).map(|i| 0.05 * i as f64).collect();
    for (q, k) in [(1.0, 1.0), (1.3, 2.5), (0.8, 0.6)] {
        let p = params(q, k);
        let next = p.with_k(k + 1.0);
        for l in 0..4u32 {
            let raise = line_raise(q, k, l as f64);
            let ground = line_values(&raise, &Phi::new(&p, 0, l), &xs);
            let size = xs
                .iter()
                .map(|&x| Phi::new(&p, 0, l).value(x, 0.0).abs())
                .fold(0.0, f64::max);
            assert!(
                ground.iter().all(|v| v.abs() < 1e-10 * size),
                "A_l phi_0,l != 0 for l = {l}"
            );
            for n in 1..4u32 {
                let got = line_values(&raise, &Phi::new(&p, n, l), &xs);
                let want: Vec<f64> = xs
                    .iter()
                    .map(|&x| Phi::new(&next, n - 1, l + 1).value(x, 0.0))
                    .collect();
                assert!(
                    proportionality_defect(&got, &want) < 1e-9,
                    "A: k = {k}, n = {n}, l = {l}"
                );
            }
            if l > 0 {
                let lower = line_lower(q, k, l as f64);
                for n in 0..4u32 {
                    let got = line_values(&lower, &Phi::new(&p, n, l), &xs);
                    let want: Vec<f64> = xs
                        .iter()
                        .map(|&x| Phi::new(&next, n, l - 1).value(x, 0.0))
                        .collect();
                    assert!(
                        proportionality_defect(&got, &want) < 1e-9,
                        "At: k = {k}, n = {n}, l = {l}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn eta_dagger_is_the_adjoint_on_grid_probes(q in 0.6f64..1.6, k in 0.3f64..3.0, seed in 0u64..1000) {
        let p = params(q, k);
        let grid = probe_grid(&p, false, 161).unwrap();
        let f = unit(random_grid_probe(&grid, seed));
        let g = unit(random_grid_probe(&grid, seed + 7919));
        let lhs = inner_product(&intertwiner(q, k).apply_grid(&f).unwrap(), &g).unwrap();
        let rhs = inner_product(&f, &intertwiner_adjoint(q, k).apply_grid(&g).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn r_is_nonnegative_on_grid_probes(q in 0.6f64..1.6, k in 0.3f64..3.0, seed in 0u64..1000) {
        let p = params(q, k);
        let grid = probe_grid(&p, false, 161).unwrap();
        let f = unit(random_grid_probe(&grid, seed));
        let rf = constant_of_motion(q, k).apply_grid(&f).unwrap();
        prop_assert!(inner_product(&f, &rf).unwrap() >= -1e-8);
    }

    #[test]
    fn r_is_nonnegative_on_bound_state_mixtures(
        k in 0.3f64..3.0,
        weights in proptest::collection::vec(-1.0f64..1.0, 10),
    ) {
        let p = params(1.0, k);
        let labels: Vec<QuantumNumbers> = (0..=3).flat_map(QuantumNumbers::at_level).collect();
        let terms: Vec<(f64, SeparableState)> =
            labels.iter().zip(&weights).map(|(qn, w)| (*w, SeparableState::new(&p, *qn))).collect();
        let mix: Arc<dyn AnalyticState> = Arc::new(Combination { label: StateLabel::Custom("mix".into()), terms });
        let rule = TensorRule {
            x: Rule1D::composite_graded(0.0, 12.0, 24, 8, 16),
            y: Rule1D::composite(-p.half_width(), p.half_width(), 16, 6),
        };
        let r = OpExpr::atom(constant_of_motion(p.q, k));
        let f = rule.sample(|x, y| mix.value(x, y));
        let rf = rule.sample(|x, y| r.apply_jet(&mix.jet(x, y, 2), x, y).value());
        prop_assert!(rule.inner(&f, &rf) >= -1e-8);
    }
}
