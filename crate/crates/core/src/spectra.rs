//! Rayleigh–Ritz upper bounds.
//!
//! Diagonalizing the Hamiltonian restricted to a `d`-dimensional trial space
//! gives eigenvalues `E^_0 <= ... <= E^_{d-1}` with `E_k <= E^_k` for the exact
//! discrete eigenvalues below the continuum. Trial spaces for growing `d` are
//! nested, so each `E^_k(d)` is non-increasing in `d`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::basis::{RadialState, TrialBasis};
use crate::error::{Error, Result};
use crate::operators::{hamiltonian_matrix_with, KineticQuadrature, MassConfig, OperatorMatrix};
use crate::potentials::PotentialSpec;

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub basis: TrialBasis,
    pub masses: MassConfig,
    pub spec: PotentialSpec,
    /// Ascending Ritz values.
    pub eigenvalues: Vec<f64>,
    pub states: Vec<RadialState>,
}

impl SpectralResult {
    /// `E^_k - (m1 + m2)`.
    pub fn binding(&self) -> Vec<f64> {
        let threshold = self.masses.threshold();
        self.eigenvalues.iter().map(|e| e - threshold).collect()
    }
}

/// Ascending eigenpairs of a symmetric matrix. Each eigenvector is signed so
/// that its largest-magnitude component is positive.
pub fn symmetric_eigen(matrix: &OperatorMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let eig = SymmetricEigen::new(matrix.as_matrix().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let col: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            let pivot = col.iter().copied().fold(0.0_f64, |m, v| if v.abs() > m.abs() { v } else { m });
            if pivot < 0.0 {
                col.into_iter().map(|v| -v).collect()
            } else {
                col
            }
        })
        .collect();
    (values, vectors)
}

pub fn solve(basis: &TrialBasis, masses: &MassConfig, spec: &PotentialSpec, n_states: usize) -> Result<SpectralResult> {
    solve_with(basis, masses, spec, n_states, &KineticQuadrature::default())
}

pub fn solve_with(
    basis: &TrialBasis,
    masses: &MassConfig,
    spec: &PotentialSpec,
    n_states: usize,
    settings: &KineticQuadrature,
) -> Result<SpectralResult> {
    if n_states > basis.dim() {
        return Err(Error::domain(format!(
            "requested {n_states} states from a trial space of dimension {}",
            basis.dim()
        )));
    }
    let h = hamiltonian_matrix_with(basis, masses, spec, settings)?;
    Ok(diagonalize(basis, masses, spec, &h, n_states))
}

fn diagonalize(
    basis: &TrialBasis,
    masses: &MassConfig,
    spec: &PotentialSpec,
    h: &OperatorMatrix,
    n_states: usize,
) -> SpectralResult {
    let (values, vectors) = symmetric_eigen(h);
    let states = vectors
        .into_iter()
        .take(n_states)
        .map(|coefficients| RadialState { basis: *basis, coefficients })
        .collect();
    SpectralResult {
        basis: *basis,
        masses: *masses,
        spec: *spec,
        eigenvalues: values.into_iter().take(n_states).collect(),
        states,
    }
}

/// `||H v - E v||` for a normalized eigenpair.
pub fn residual_norm(h: &OperatorMatrix, value: f64, vector: &[f64]) -> f64 {
    let v = DMatrix::from_column_slice(vector.len(), 1, vector);
    (h.as_matrix() * &v - &v * value).norm()
}

/// Radial excitation `n_r` within angular momentum `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sector {
    pub n_r: usize,
    pub ell: u32,
}

impl Sector {
    pub const fn new(n_r: usize, ell: u32) -> Self {
        Sector { n_r, ell }
    }
}

#[derive(Debug, Clone)]
pub struct BindingEntry {
    pub sector: Sector,
    pub energy: f64,
    pub binding: f64,
    pub state: RadialState,
}

/// Binding energies `E^_{n_r} - (m1 + m2)` for each requested sector, in
/// request order. One diagonalization per distinct `ell`; sectors run in parallel.
pub fn binding_table(
    masses: &MassConfig,
    spec: &PotentialSpec,
    beta: f64,
    mu: f64,
    dim: usize,
    sectors: &[Sector],
) -> Result<Vec<BindingEntry>> {
    binding_table_with(masses, spec, beta, mu, dim, sectors, &KineticQuadrature::default())
}

pub fn binding_table_with(
    masses: &MassConfig,
    spec: &PotentialSpec,
    beta: f64,
    mu: f64,
    dim: usize,
    sectors: &[Sector],
    settings: &KineticQuadrature,
) -> Result<Vec<BindingEntry>> {
    if sectors.is_empty() {
        return Ok(Vec::new());
    }
    let mut ells: Vec<u32> = sectors.iter().map(|s| s.ell).collect();
    ells.sort_unstable();
    ells.dedup();
    for s in sectors {
        if s.n_r >= dim {
            return Err(Error::domain(format!("n_r = {} needs dimension > {}, got {dim}", s.n_r, s.n_r)));
        }
    }
    let solved: Vec<(u32, SpectralResult)> = ells
        .par_iter()
        .map(|&ell| {
            let basis = TrialBasis::new(ell, beta, mu, dim)?;
            let n = sectors.iter().filter(|s| s.ell == ell).map(|s| s.n_r + 1).max().unwrap_or(1);
            solve_with(&basis, masses, spec, n, settings).map(|r| (ell, r))
        })
        .collect::<Result<_>>()?;
    let threshold = masses.threshold();
    Ok(sectors
        .iter()
        .map(|s| {
            let (_, res) = solved.iter().find(|(l, _)| *l == s.ell).expect("sector solved");
            let energy = res.eigenvalues[s.n_r];
            BindingEntry { sector: *s, energy, binding: energy - threshold, state: res.states[s.n_r].clone() }
        })
        .collect())
}

/// `(d, E^_k(d))` for `d = k+1 ..= d_max`, from leading blocks of the
/// `d_max` Hamiltonian (the trial spaces are nested).
pub fn convergence_scan(
    masses: &MassConfig,
    spec: &PotentialSpec,
    beta: f64,
    mu: f64,
    ell: u32,
    d_max: usize,
    k: usize,
) -> Result<Vec<(usize, f64)>> {
    if d_max < k + 1 {
        return Err(Error::domain(format!("d_max = {d_max} must be at least k + 1 = {}", k + 1)));
    }
    let basis = TrialBasis::new(ell, beta, mu, d_max)?;
    let h = hamiltonian_matrix_with(&basis, masses, spec, &KineticQuadrature::default())?;
    Ok((k + 1..=d_max)
        .map(|d| {
            let (values, _) = symmetric_eigen(&h.leading(d));
            (d, values[k])
        })
        .collect())
}

/// Closed parameter interval; `lo == hi` pins the parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
}

impl ParamRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        ParamRange { lo, hi }
    }

    pub fn fixed(value: f64) -> Self {
        ParamRange { lo: value, hi: value }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationOutcome {
    pub best_mu: f64,
    pub best_beta: f64,
    pub best_value: f64,
    pub evaluations: usize,
    /// Every evaluated `(mu, beta, E^_k)`.
    pub trace: Vec<(f64, f64, f64)>,
}

const GOLDEN_TOL: f64 = 1e-4;
const SWEEPS: usize = 2;

/// Minimizes `E^_k` over `(mu, beta)` by coordinate-wise golden-section search
/// (over `ln mu` and `beta`), starting from the range midpoints.
pub fn optimize_parameters(
    masses: &MassConfig,
    spec: &PotentialSpec,
    ell: u32,
    dim: usize,
    k: usize,
    mu_range: ParamRange,
    beta_range: ParamRange,
) -> Result<OptimizationOutcome> {
    optimize_parameters_with(masses, spec, ell, dim, k, mu_range, beta_range, &KineticQuadrature::default())
}

#[allow(clippy::too_many_arguments)]
pub fn optimize_parameters_with(
    masses: &MassConfig,
    spec: &PotentialSpec,
    ell: u32,
    dim: usize,
    k: usize,
    mu_range: ParamRange,
    beta_range: ParamRange,
    settings: &KineticQuadrature,
) -> Result<OptimizationOutcome> {
    if !(mu_range.lo > 0.0) || !(mu_range.hi >= mu_range.lo) || !mu_range.hi.is_finite() {
        return Err(Error::InvalidRange(format!("mu range [{}, {}] must satisfy 0 < lo <= hi", mu_range.lo, mu_range.hi)));
    }
    if !(beta_range.lo > -0.5) || !(beta_range.hi >= beta_range.lo) || !beta_range.hi.is_finite() {
        return Err(Error::InvalidRange(format!(
            "beta range [{}, {}] must satisfy -1/2 < lo <= hi",
            beta_range.lo, beta_range.hi
        )));
    }
    if ell == 0 && spec.has_inverse_r() && beta_range.lo <= 0.5 {
        return Err(Error::InvalidRange(format!(
            "beta range must stay above 1/2 for ell = 0 with a 1/r potential, got lo = {}",
            beta_range.lo
        )));
    }
    if k >= dim {
        return Err(Error::domain(format!("target state {k} needs dimension > {k}, got {dim}")));
    }

    let mut trace = Vec::new();
    let mut objective = |mu: f64, beta: f64| -> Result<f64> {
        let basis = TrialBasis::new(ell, beta, mu, dim)?;
        let value = solve_with(&basis, masses, spec, k + 1, settings)?.eigenvalues[k];
        trace.push((mu, beta, value));
        Ok(value)
    };

    let (ln_lo, ln_hi) = (mu_range.lo.ln(), mu_range.hi.ln());
    let mut ln_mu = 0.5 * (ln_lo + ln_hi);
    let mut beta = 0.5 * (beta_range.lo + beta_range.hi);
    objective(ln_mu.exp(), beta)?;

    for _ in 0..SWEEPS {
        if ln_hi > ln_lo {
            ln_mu = golden_section(|x| objective(x.exp(), beta), ln_lo, ln_hi, GOLDEN_TOL)?.0;
        }
        if beta_range.hi > beta_range.lo {
            beta = golden_section(|b| objective(ln_mu.exp(), b), beta_range.lo, beta_range.hi, GOLDEN_TOL)?.0;
        }
    }

    let (best_mu, best_beta, best_value) = trace
        .iter()
        .copied()
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("at least one evaluation");
    Ok(OptimizationOutcome { best_mu, best_beta, best_value, evaluations: trace.len(), trace })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`. Returns the best point seen and its value.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(hi > lo) {
        return Err(Error::InvalidRange(format!("golden-section bracket [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}
