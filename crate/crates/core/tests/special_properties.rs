use pdm_core::special::{jacobi, log_gamma, JacobiIndex};
use proptest::prelude::*;

/// Generalized binomial C(x, m) as a falling product.
fn gbinom(x: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (x - i as f64) / (i as f64 + 1.0))
}

/// Explicit sum P_n^{(a,b)}(z) = Σ_s C(n+a, n-s) C(n+b, s) ((z-1)/2)^s ((z+1)/2)^{n-s},
/// returned with the sum of term magnitudes.
fn jacobi_by_sum(n: u32, a: f64, b: f64, z: f64) -> (f64, f64) {
    let (lo, hi) = (0.5 * (z - 1.0), 0.5 * (z + 1.0));
    let nf = n as f64;
    (0..=n)
        .map(|s| {
            gbinom(nf + a, n - s) * gbinom(nf + b, s) * lo.powi(s as i32) * hi.powi((n - s) as i32)
        })
        .fold((0.0, 0.0), |(sum, mag), t| (sum + t, mag + t.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn recurrence_matches_explicit_sum(a in -0.95f64..6.0, b in -0.95f64..6.0, z in -1.0f64..1.0) {
        for n in 1..=20 {
            let got = jacobi(JacobiIndex::new(n, a, b).unwrap(), z, 0);
            let (want, scale) = jacobi_by_sum(n, a, b, z);
            // Relative to the term magnitudes so that roots of P_n stay well posed.
            prop_assert!((got - want).abs() <= 1e-10 * scale.max(want.abs()), "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn first_derivative_matches_difference_quotient(a in -0.95f64..4.0, b in -0.95f64..4.0, z in -0.99f64..0.99) {
        let h = 1e-5;
        for n in 0..=10 {
            let idx = JacobiIndex::new(n, a, b).unwrap();
            let fd = (jacobi(idx, z + h, 0) - jacobi(idx, z - h, 0)) / (2.0 * h);
            let exact = jacobi(idx, z, 1);
            // Scale by sup |P'| on [-1, 1]; the quotient's truncation error grows with P'''.
            let sup = (0..=200).map(|i| jacobi(idx, -1.0 + 0.01 * i as f64, 1).abs()).fold(1.0, f64::max);
            prop_assert!((fd - exact).abs() <= 1e-6 * sup, "n={n}: {fd} vs {exact}");
        }
    }

    #[test]
    fn value_at_one_is_a_gamma_ratio(a in -0.95f64..8.0, b in -0.95f64..8.0, n in 0u32..=20) {
        let got = jacobi(JacobiIndex::new(n, a, b).unwrap(), 1.0, 0);
        let nf = n as f64;
        let ln = log_gamma(nf + a + 1.0).unwrap() - log_gamma(nf + 1.0).unwrap() - log_gamma(a + 1.0).unwrap();
        let want = ln.exp();
        prop_assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn log_gamma_satisfies_the_recurrence(x in 0.01f64..50.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));
    }
}
