use proptest::prelude::*;
use salpeter_core::numerics::{
    adaptive_integrate, laguerre_all, laguerre_eval, laguerre_explicit, log_gamma, make_rule, QuadratureKind,
};

/// `int_0^inf x^gamma e^{-x} L_i L_j dx = Gamma(i + gamma + 1)/i! delta_ij`, by a
/// rule that is exact for the degree-60 products involved.
#[test]
fn laguerre_orthogonality_by_quadrature() {
    for gamma in [0.0, 2.0, 4.0] {
        let rule = make_rule(QuadratureKind::GaussLaguerre { gamma }, 40).unwrap();
        let values: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| laguerre_all(31, gamma, x)).collect();
        let h = |i: usize| (log_gamma(i as f64 + gamma + 1.0).unwrap() - log_gamma(i as f64 + 1.0).unwrap()).exp();
        for i in 0..=30 {
            for j in 0..=i {
                let s: f64 = rule.weights.iter().zip(&values).map(|(w, v)| w * v[i] * v[j]).sum();
                let normalized = s / (h(i) * h(j)).sqrt();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((normalized - expected).abs() < 1e-10, "gamma {gamma}, ({i},{j}): {normalized}");
            }
        }
    }
}

#[test]
fn legendre_rule_integrates_polynomials_exactly() {
    let rule = make_rule(QuadratureKind::GaussLegendre, 12).unwrap();
    for k in 0..24 {
        let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
        let s = rule.integrate(|x| x.powi(k));
        assert!((s - exact).abs() < 1e-14, "x^{k}: {s}");
    }
}

#[test]
fn adaptive_matches_closed_forms() {
    let v = adaptive_integrate(|r| r * r * (-3.0 * r).exp(), 0.0, 60.0, 1e-12).unwrap();
    assert!((v - 2.0 / 27.0).abs() < 1e-13);
    let v = adaptive_integrate(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, 1e-12).unwrap();
    assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-13);
}

/// Magnitude scale of the explicit sum, `sum_j C(k+gamma, k-j) x^j / j!` without signs.
fn explicit_scale(k: usize, gamma: f64, x: f64) -> f64 {
    laguerre_explicit(k, gamma, -x).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn recurrence_matches_explicit_sum(k in 0usize..=12, gamma in -0.99f64..6.0, x in 0.0f64..20.0) {
        let rec = laguerre_eval(k, gamma, x).unwrap();
        let exp = laguerre_explicit(k, gamma, x);
        let tol = 1e-9 * rec.abs().max(1e-3 * explicit_scale(k, gamma, x)).max(1e-12);
        prop_assert!((rec - exp).abs() <= tol, "k={} gamma={} x={}: {} vs {}", k, gamma, x, rec, exp);
    }

    #[test]
    fn gauss_laguerre_reproduces_moments(gamma in -0.9f64..8.0, n in 1usize..40) {
        // int x^{gamma + j} e^{-x} dx = Gamma(gamma + j + 1), exact for j < 2n.
        let rule = make_rule(QuadratureKind::GaussLaguerre { gamma }, n).unwrap();
        for j in [0, n.min(5), 2 * n - 1] {
            let s = rule.integrate(|x| x.powi(j as i32));
            let exact = log_gamma(gamma + j as f64 + 1.0).unwrap().exp();
            prop_assert!((s / exact - 1.0).abs() < 1e-10, "gamma={} n={} j={}: {} vs {}", gamma, n, j, s, exact);
        }
    }
}
