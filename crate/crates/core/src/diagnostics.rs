//! Relativistic virial theorem as a quality measure for trial states.
//!
//! Exact eigenstates satisfy
//! `<p^2/sqrt(p^2+m1^2) + p^2/sqrt(p^2+m2^2)> = <r dV/dr>`.
//! The left side is the dilation derivative of the kinetic energy, so the
//! relation also holds for any trial state that is stationary under `r -> l r`.

use crate::basis::RadialState;
use crate::error::{Error, Result};
use crate::operators::{momentum_matrix, KineticQuadrature, MassConfig};
use crate::potentials::PotentialSpec;

const RADIAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialReport {
    /// Kinetic side, `sum_i <p^2/sqrt(p^2 + m_i^2)>`.
    pub lhs: f64,
    /// Potential side, `<r dV/dr>`.
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub residual: f64,
}

pub fn virial_check(state: &RadialState, masses: &MassConfig, spec: &PotentialSpec) -> Result<VirialReport> {
    virial_check_with(state, masses, spec, &KineticQuadrature::default())
}

pub fn virial_check_with(
    state: &RadialState,
    masses: &MassConfig,
    spec: &PotentialSpec,
    settings: &KineticQuadrature,
) -> Result<VirialReport> {
    let norm: f64 = state.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::domain(format!("state must be unit-norm, got norm {norm}")));
    }
    let kinetic = momentum_matrix(&state.basis, |p| masses.kinetic_dilation(p), settings)?;
    let lhs = kinetic.expectation(&state.coefficients);
    let force = state
        .basis
        .radial_function_matrix(|r| r * spec.radial_force_unchecked(r), RADIAL_TOL)?;
    let rhs = force.expectation(&state.coefficients);
    let scale = lhs.abs().max(rhs.abs());
    let residual = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(VirialReport { lhs, rhs, residual })
}
