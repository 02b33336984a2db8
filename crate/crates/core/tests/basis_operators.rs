use proptest::prelude::*;
use salpeter_core::operators::{kinetic_matrix, momentum_matrix, p_squared_matrix, potential_matrix};
use salpeter_core::spectra::symmetric_eigen;
use salpeter_core::{KineticQuadrature, MassConfig, OperatorMatrix, PotentialSpec, TrialBasis};

/// `R_k^{(mu)}(r) = mu^{3/2} R_k^{(1)}(mu r)` and `phi_k^{(mu)}(p) = mu^{-3/2} phi_k^{(1)}(p/mu)`.
#[test]
fn scaling_covariance_of_radial_and_momentum_functions() {
    for (ell, beta) in [(0, 1.0), (2, 1.0), (1, 0.75)] {
        let unit = TrialBasis::new(ell, beta, 1.0, 6).unwrap();
        for mu in [0.3, 2.7] {
            let scaled = TrialBasis::new(ell, beta, mu, 6).unwrap();
            for k in 0..6 {
                for x in [0.05, 0.8, 3.0, 11.0] {
                    let a = scaled.radial_eval(k, x / mu).unwrap();
                    let b = mu.powf(1.5) * unit.radial_eval(k, x).unwrap();
                    assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "R ell={ell} k={k} x={x}: {a} vs {b}");
                    let a = scaled.momentum_eval(k, x * mu).unwrap();
                    let b = mu.powf(-1.5) * unit.momentum_eval(k, x).unwrap();
                    assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "phi ell={ell} k={k} x={x}: {a} vs {b}");
                }
            }
        }
    }
}

/// Orthonormality survives the transform to momentum space.
#[test]
fn momentum_functions_are_orthonormal() {
    let settings = KineticQuadrature::default();
    for (ell, beta) in [(0, 1.0), (1, 1.0), (3, 1.0), (0, 0.75), (2, 1.4)] {
        let basis = TrialBasis::new(ell, beta, 1.3, 10).unwrap();
        let gram = momentum_matrix(&basis, |_| 1.0, &settings).unwrap();
        let dev = gram.max_deviation_from_identity();
        assert!(dev < 1e-8, "ell={ell} beta={beta}: {dev}");
    }
}

fn min_eigenvalue(m: &OperatorMatrix) -> f64 {
    symmetric_eigen(m).0[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `sqrt(p^2 + m^2) >= m`, so `T - 2m` is positive semidefinite.
    #[test]
    fn kinetic_dominates_rest_mass(ell in 0u32..4, mu in 0.2f64..4.0, m in 0.0f64..3.0, d in 1usize..12) {
        let basis = TrialBasis::new(ell, 1.0, mu, d).unwrap();
        let t = kinetic_matrix(&basis, &MassConfig::equal(m).unwrap()).unwrap();
        let shifted = OperatorMatrix::from_matrix(t.as_matrix() - nalgebra::DMatrix::identity(d, d) * (2.0 * m)).unwrap();
        prop_assert!(min_eigenvalue(&shifted) >= -1e-10 * t.max_abs());
    }

    /// Concavity of the square root: `<sqrt(p^2 + m^2)> <= sqrt(<p^2> + m^2)`.
    #[test]
    fn kinetic_diagonal_jensen_bound(ell in 0u32..4, beta in 0.8f64..2.0, mu in 0.2f64..4.0, m in 0.0f64..3.0) {
        let basis = TrialBasis::new(ell, beta, mu, 6).unwrap();
        let t = kinetic_matrix(&basis, &MassConfig::equal(m).unwrap()).unwrap();
        let p2 = p_squared_matrix(&basis).unwrap();
        for k in 0..6 {
            let bound = 2.0 * (p2.get(k, k) + m * m).sqrt();
            prop_assert!(t.get(k, k) <= bound * (1.0 + 1e-9), "k={}: {} > {}", k, t.get(k, k), bound);
            prop_assert!(t.get(k, k) >= 2.0 * m * (1.0 - 1e-12));
        }
    }

    /// At `m = 0` the kinetic energy is homogeneous of degree one in `mu`.
    #[test]
    fn massless_kinetic_scales_with_mu(ell in 0u32..4, mu in 0.1f64..10.0) {
        let massless = MassConfig::equal(0.0).unwrap();
        let unit = kinetic_matrix(&TrialBasis::new(ell, 1.0, 1.0, 8).unwrap(), &massless).unwrap();
        let scaled = kinetic_matrix(&TrialBasis::new(ell, 1.0, mu, 8).unwrap(), &massless).unwrap();
        let diff = (scaled.as_matrix() - unit.as_matrix() * mu).amax();
        prop_assert!(diff <= 1e-9 * mu * unit.max_abs());
    }

    /// The 1/r matrix is homogeneous of degree one in `mu`.
    #[test]
    fn coulomb_matrix_scales_with_mu(ell in 0u32..4, mu in 0.1f64..10.0) {
        let coulomb = PotentialSpec::coulomb(1.0).unwrap();
        let unit = potential_matrix(&TrialBasis::new(ell, 1.0, 1.0, 8).unwrap(), &coulomb).unwrap();
        let scaled = potential_matrix(&TrialBasis::new(ell, 1.0, mu, 8).unwrap(), &coulomb).unwrap();
        let diff = (scaled.as_matrix() - unit.as_matrix() * mu).amax();
        prop_assert!(diff <= 1e-12 * mu * unit.max_abs());
    }
}
