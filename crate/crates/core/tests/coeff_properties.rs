use std::collections::BTreeMap;

use pdm_core::coeffs::{
    ladder_coeffs, s_sum_closed, s_sum_direct, x_factor, x_factor_from_ground,
    x_factor_unconstrained, x_row, z_row, LadderDirection, TransformMatrix,
};
use proptest::prelude::*;

/// Counts ±1 walks of ν steps from height l ending at l + ν − 2μ without going negative.
fn enumerate_walks(l: u32, nu: u32, mu: u32) -> u64 {
    let end = l as i64 + nu as i64 - 2 * mu as i64;
    let mut count = 0;
    for bits in 0u32..(1 << nu) {
        let mut h = l as i64;
        let mut ok = true;
        for step in 0..nu {
            h += if bits & (1 << step) != 0 { -1 } else { 1 };
            if h < 0 {
                ok = false;
                break;
            }
        }
        if ok && h == end {
            count += 1;
        }
    }
    count
}

#[test]
fn x_factor_counts_lattice_paths() {
    for l in 0..=10 {
        for nu in 0..=10 {
            for mu in 0..=nu {
                assert_eq!(
                    x_factor(l, nu, mu as i64),
                    enumerate_walks(l, nu, mu),
                    "l={l} nu={nu} mu={mu}"
                );
            }
        }
    }
}

#[test]
fn x_factor_closed_forms_on_their_domains() {
    for nu in 0..=14 {
        for mu in 0..=nu {
            for l in nu..=nu + 3 {
                assert_eq!(x_factor(l, nu, mu as i64), x_factor_unconstrained(nu, mu));
            }
            assert_eq!(x_factor(0, nu, mu as i64), x_factor_from_ground(nu, mu));
        }
    }
}

#[test]
fn transform_is_orthogonal_at_reference_k() {
    for k in [0.7, 1.0, 2.5] {
        for big_n in 0..=8 {
            let t = TransformMatrix::build(k, big_n).unwrap();
            assert!(t.column_orthogonality_residual() < 1e-10, "k={k} N={big_n}");
            assert!(t.orthogonality_residual() < 1e-10, "k={k} N={big_n}");
        }
    }
}

/// Σ_n Z_{N0;n,N0−2n} η ψ_{n,N0−2n}, collected by target label.
fn eta_image_of_lowest_row(k: f64, n0: u32) -> BTreeMap<(u32, u32), f64> {
    let row = z_row(k, n0, n0).unwrap();
    let mut image = BTreeMap::new();
    for (n, z) in row.iter().enumerate() {
        let n = n as u32;
        let act = ladder_coeffs(1.0, k, n, n0 - 2 * n, LadderDirection::Down);
        for (target, c) in act.targets.iter().zip(act.coeffs) {
            if let Some(t) = target {
                *image.entry(*t).or_insert(0.0) += z * c;
            }
        }
    }
    image
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn transform_is_orthogonal(k in 0.05f64..6.0, big_n in 0u32..=8) {
        let t = TransformMatrix::build(k, big_n).unwrap();
        prop_assert!(t.column_orthogonality_residual() < 1e-10);
        prop_assert!(t.orthogonality_residual() < 1e-10);
    }

    #[test]
    fn lowest_row_is_annihilated_by_the_intertwiner(k in 0.05f64..6.0, half in 0u32..=4) {
        for (label, v) in eta_image_of_lowest_row(k, 2 * half) {
            prop_assert!(v.abs() < 1e-12, "component {label:?} = {v}");
        }
    }

    #[test]
    fn x_normalization_agrees_with_the_sum_identity(k in 0.05f64..6.0, half in 0u32..=10) {
        let n0 = 2 * half;
        let norm: f64 = x_row(k, n0).unwrap().iter().map(|x| x * x).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12, "Σ X² = {norm}");
        let (direct, closed) = (s_sum_direct(k, n0).unwrap(), s_sum_closed(k, n0).unwrap());
        prop_assert!(((direct - closed) / closed).abs() < 1e-12);
    }
}
