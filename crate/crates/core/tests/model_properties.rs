use std::sync::Arc;

use pdm_core::model::{
    degeneracy, energy_level, eval_chi, gram_matrix, layer_quadrature, susy_state, AnalyticState,
    Chi, ModelParams, Phi, QuantumNumbers, SeparableState, SusyLabels,
};
use pdm_core::operators::catalog::{hamiltonian, transverse};
use pdm_core::operators::identities::state_residual;
use pdm_core::operators::probes::analytic_sample;
use pdm_core::operators::OpExpr;
use proptest::prelude::*;

fn identity_defect(g: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

#[test]
fn separable_basis_is_orthonormal() {
    for k in [0.7, 1.0, 2.5] {
        let p = ModelParams::new(1.0, k, 0.0).unwrap();
        let states: Vec<SeparableState> = (0..=6)
            .flat_map(QuantumNumbers::at_level)
            .map(|qn| SeparableState::new(&p, qn))
            .collect();
        let refs: Vec<&dyn AnalyticState> =
            states.iter().map(|s| s as &dyn AnalyticState).collect();
        let defect = identity_defect(&gram_matrix(&refs, &layer_quadrature(&p)));
        assert!(defect < 1e-7, "k = {k}: {defect:e}");
    }
}

#[test]
fn intertwining_basis_is_orthonormal() {
    for k in [0.7, 1.0, 2.5] {
        let p = ModelParams::new(1.0, k, 0.0).unwrap();
        let states: Vec<Arc<dyn AnalyticState>> = (0..=6)
            .flat_map(SusyLabels::at_level)
            .map(|labels| Arc::new(susy_state(&p, labels).unwrap()) as Arc<dyn AnalyticState>)
            .collect();
        let refs: Vec<&dyn AnalyticState> =
            states.iter().map(|s| s as &dyn AnalyticState).collect();
        let defect = identity_defect(&gram_matrix(&refs, &layer_quadrature(&p)));
        assert!(defect < 1e-7, "k = {k}: {defect:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn every_level_is_realized_with_its_degeneracy(q in 0.5f64..2.0, k in 0.2f64..4.0, v0 in -3.0f64..3.0) {
        let p = ModelParams::new(q, k, v0).unwrap();
        let sample = analytic_sample(&p, false).unwrap();
        for level in 0..=8 {
            let states = QuantumNumbers::at_level(level);
            prop_assert_eq!(states.len() as u32, degeneracy(level));
            prop_assert_eq!(degeneracy(level), level / 2 + 1);
            let op = OpExpr::atom(hamiltonian(q, k, v0)) - OpExpr::Scalar(energy_level(&p, level));
            for qn in states {
                let (l2, sup) = state_residual(&op, &SeparableState::new(&p, qn), &sample).unwrap();
                prop_assert!(l2 < 1e-9 && sup < 1e-9, "{:?}: {:e} {:e}", qn, l2, sup);
            }
        }
    }

    #[test]
    fn transverse_modes_are_eigenfunctions(q in 0.3f64..3.0, l in 0u32..=8) {
        let p = ModelParams::new(q, 1.0, 0.0).unwrap();
        let lambda = ((l + 1) as f64 * q).powi(2);
        let op = OpExpr::atom(transverse()) - OpExpr::Scalar(lambda);
        let (l2, sup) = state_residual(&op, &Chi { q, l }, &analytic_sample(&p, false).unwrap()).unwrap();
        prop_assert!(l2 < 1e-10 && sup < 1e-10, "{:e} {:e}", l2, sup);
    }

    #[test]
    fn radial_states_decay_at_the_stated_rate(q in 0.5f64..2.0, k in 0.2f64..4.0, n in 0u32..=3, l in 0u32..=3) {
        let p = ModelParams::new(q, k, 0.0).unwrap();
        let phi = Phi::new(&p, n, l);
        let weight = |x: f64| (q * x).cosh() * phi.derivs(x)[0].powi(2);
        let x0 = 8.0 / q;
        let xs: Vec<f64> = (0..=40).map(|i| x0 + 0.25 * i as f64 / q).collect();
        for pair in xs.windows(2) {
            prop_assert!(weight(pair[1]) < weight(pair[0]));
        }
        let slope = (weight(xs[40]).ln() - weight(xs[0]).ln()) / (xs[40] - xs[0]);
        let rate = -(2.0 * l as f64 + 3.0) * q;
        prop_assert!((slope - rate).abs() < 1e-2 * rate.abs(), "slope {} vs {}", slope, rate);
    }

    #[test]
    fn states_vanish_on_the_boundary(q in 0.5f64..2.0, k in 0.2f64..4.0, n in 0u32..=3, l in 0u32..=3) {
        let p = ModelParams::new(q, k, 0.0).unwrap();
        prop_assert!(Phi::new(&p, n, l).derivs(1e-300)[0].abs() < 1e-12);
        let w = p.half_width();
        for y in [w, -w, w * (1.0 - f64::EPSILON), -w * (1.0 - f64::EPSILON)] {
            prop_assert!(eval_chi(&p, l, y).unwrap()[0].abs() < 1e-12, "y = {}", y);
        }
    }
}
