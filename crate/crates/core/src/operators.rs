//! Matrices of the kinetic and potential operators in a [`TrialBasis`].

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::basis::TrialBasis;
use crate::error::{Error, Result};
use crate::numerics::{laguerre_all, make_rule, QuadratureKind};
use crate::potentials::PotentialSpec;

/// Constituent masses of the two-body system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassConfig {
    pub m1: f64,
    pub m2: f64,
}

impl MassConfig {
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        if !(m1 >= 0.0) || !(m2 >= 0.0) || !m1.is_finite() || !m2.is_finite() {
            return Err(Error::domain(format!("masses must be >= 0, got m1 = {m1}, m2 = {m2}")));
        }
        Ok(MassConfig { m1, m2 })
    }

    pub fn equal(m: f64) -> Result<Self> {
        Self::new(m, m)
    }

    /// Two-particle threshold `m1 + m2`.
    pub fn threshold(&self) -> f64 {
        self.m1 + self.m2
    }

    pub fn is_equal(&self) -> bool {
        self.m1 == self.m2
    }

    /// `sqrt(p^2 + m1^2) + sqrt(p^2 + m2^2)`.
    pub fn kinetic_energy(&self, p: f64) -> f64 {
        p.hypot(self.m1) + p.hypot(self.m2)
    }

    /// `p^2/sqrt(p^2 + m1^2) + p^2/sqrt(p^2 + m2^2)`, i.e. `p d/dp` of the kinetic energy.
    pub fn kinetic_dilation(&self, p: f64) -> f64 {
        if p == 0.0 {
            return 0.0;
        }
        p * p / p.hypot(self.m1) + p * p / p.hypot(self.m2)
    }
}

/// Real symmetric matrix of an operator in an orthonormal trial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<f64>,
}

impl OperatorMatrix {
    /// Symmetrizes a matrix whose lower triangle (diagonal included) is filled.
    pub(crate) fn from_lower(mut m: DMatrix<f64>) -> Self {
        let d = m.nrows();
        for i in 0..d {
            for j in 0..i {
                m[(j, i)] = m[(i, j)];
            }
        }
        OperatorMatrix { entries: m }
    }

    /// Wraps an arbitrary square matrix after averaging it with its transpose.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::domain("operator matrix must be square"));
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(OperatorMatrix { entries: sym })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.amax()
    }

    pub fn max_deviation_from_identity(&self) -> f64 {
        let d = self.dim();
        (&self.entries - DMatrix::<f64>::identity(d, d)).amax()
    }

    /// Leading principal `d x d` block.
    pub fn leading(&self, d: usize) -> OperatorMatrix {
        OperatorMatrix { entries: self.entries.view((0, 0), (d, d)).into_owned() }
    }

    /// `v^T A v`.
    pub fn expectation(&self, v: &[f64]) -> f64 {
        let d = self.dim();
        let mut sum = 0.0;
        for i in 0..d {
            for j in 0..d {
                sum += v[i] * self.entries[(i, j)] * v[j];
            }
        }
        sum
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::domain("matrix dimensions differ"));
        }
        Ok(OperatorMatrix { entries: &self.entries + &other.entries })
    }

    pub fn scale(&self, factor: f64) -> OperatorMatrix {
        OperatorMatrix { entries: &self.entries * factor }
    }
}

/// Control of the mapped Gauss–Legendre momentum quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticQuadrature {
    pub start_order: usize,
    pub max_order: usize,
    /// Accept once the max-norm change under order doubling is below
    /// `tolerance * max|A|`.
    pub tolerance: f64,
}

impl Default for KineticQuadrature {
    fn default() -> Self {
        KineticQuadrature { start_order: 200, max_order: 12_800, tolerance: 1e-9 }
    }
}

pub const QUAD_ORDER_ENV: &str = "SALPETER_QUAD_ORDER";

impl KineticQuadrature {
    /// Defaults, with the starting order taken from `SALPETER_QUAD_ORDER` when set.
    pub fn from_env() -> Result<Self> {
        let mut q = Self::default();
        if let Ok(raw) = std::env::var(QUAD_ORDER_ENV) {
            q.start_order = parse_start_order(&raw)?;
        }
        Ok(q)
    }

    pub fn with_start_order(start_order: usize) -> Result<Self> {
        if start_order < 50 {
            return Err(Error::domain(format!("{QUAD_ORDER_ENV} must be an integer >= 50, got {start_order}")));
        }
        Ok(KineticQuadrature { start_order, ..Self::default() })
    }
}

pub fn parse_start_order(raw: &str) -> Result<usize> {
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("{QUAD_ORDER_ENV} must be an integer >= 50, got {raw:?}")))?;
    KineticQuadrature::with_start_order(n).map(|q| q.start_order)
}

/// `int_0^inf p^2 phi_i(p) phi_j(p) weight(p) dp`.
///
/// The momentum axis is mapped by `p = mu tan(pi t / 2)` and integrated with
/// Gauss–Legendre in `t`. For the closed-form basis the integrand is analytic
/// in `t`. Otherwise the momentum functions fall off with a fractional power
/// and the endpoint `t = 1` is additionally graded with `t = 1 - (1 - v)^4`.
pub fn momentum_matrix<W: Fn(f64) -> f64>(
    basis: &TrialBasis,
    weight: W,
    settings: &KineticQuadrature,
) -> Result<OperatorMatrix> {
    let graded = !basis.has_closed_form_transform();
    let mut order = settings.start_order.max(1);
    let mut prev = momentum_matrix_at(basis, &weight, order, graded)?;
    loop {
        let next_order = 2 * order;
        let next = momentum_matrix_at(basis, &weight, next_order, graded)?;
        let scale = next.amax();
        let change = (&next - &prev).amax();
        if change <= settings.tolerance * scale || scale == 0.0 {
            return Ok(OperatorMatrix::from_lower(next));
        }
        if next_order >= settings.max_order {
            return Err(Error::Convergence(format!(
                "momentum quadrature: max-norm change {change:e} (relative {:e}) between orders {order} and {next_order}",
                change / scale
            )));
        }
        order = next_order;
        prev = next;
    }
}

fn momentum_matrix_at<W: Fn(f64) -> f64>(
    basis: &TrialBasis,
    weight: &W,
    order: usize,
    graded: bool,
) -> Result<DMatrix<f64>> {
    let rule = make_rule(QuadratureKind::GaussLegendre, order)?;
    let d = basis.dim();
    let mu = basis.mu();
    let mut m = DMatrix::zeros(d, d);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = 0.5 * (u + 1.0);
        let (t, dt) = if graded { (1.0 - (1.0 - v).powi(4), 4.0 * (1.0 - v).powi(3)) } else { (v, 1.0) };
        let angle = 0.5 * PI * t;
        let cos = angle.cos();
        if cos <= 0.0 {
            continue;
        }
        let p = mu * angle.tan();
        let dp = mu * 0.5 * PI / (cos * cos);
        let factor = 0.5 * w * dt * dp * p * p * weight(p);
        if factor == 0.0 || !factor.is_finite() {
            continue;
        }
        let phi = basis.momentum_all(p)?;
        for i in 0..d {
            let fi = factor * phi[i];
            for j in 0..=i {
                m[(i, j)] += fi * phi[j];
            }
        }
    }
    Ok(m)
}

pub fn kinetic_matrix(basis: &TrialBasis, masses: &MassConfig) -> Result<OperatorMatrix> {
    kinetic_matrix_with(basis, masses, &KineticQuadrature::default())
}

pub fn kinetic_matrix_with(
    basis: &TrialBasis,
    masses: &MassConfig,
    settings: &KineticQuadrature,
) -> Result<OperatorMatrix> {
    momentum_matrix(basis, |p| masses.kinetic_energy(p), settings)
}

/// `<i|p^2|j>` from the radial derivatives in position space,
/// `int r^2 (R_i' R_j' + l(l+1)/r^2 R_i R_j) dr`, exact by Gauss–Laguerre.
pub fn p_squared_matrix(basis: &TrialBasis) -> Result<OperatorMatrix> {
    let gamma = basis.gamma();
    if gamma <= 1.0 {
        return Err(Error::domain(format!(
            "<p^2> diverges for ell = {}, beta = {} (needs ell + beta > 1/2)",
            basis.ell(),
            basis.beta()
        )));
    }
    let d = basis.dim();
    let a = basis.ell() as f64 + basis.beta() - 1.0;
    let centrifugal = (basis.ell() * (basis.ell() + 1)) as f64;
    let norms = basis.norms();
    let rule = make_rule(QuadratureKind::GaussLaguerre { gamma: gamma - 2.0 }, d + 3)?;
    let mut m = DMatrix::zeros(d, d);
    for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
        let l = laguerre_all(d, gamma, y);
        let l_shift = laguerre_all(d, gamma + 1.0, y);
        // r R_k' / (N_k r^a e^{-mu r}) with y = 2 mu r; d/dx L_k^(g) = -L_{k-1}^(g+1).
        let deriv: Vec<f64> = (0..d)
            .map(|k| {
                let shifted = if k == 0 { 0.0 } else { l_shift[k - 1] };
                norms[k] * ((a - 0.5 * y) * l[k] - y * shifted)
            })
            .collect();
        let plain: Vec<f64> = (0..d).map(|k| norms[k] * l[k]).collect();
        for i in 0..d {
            for j in 0..=i {
                m[(i, j)] += w * (deriv[i] * deriv[j] + centrifugal * plain[i] * plain[j]);
            }
        }
    }
    let scale = (2.0 * basis.mu()).powf(-(gamma - 1.0));
    Ok(OperatorMatrix::from_lower(m * scale))
}

/// Potential matrix from the exact exponential-power decomposition of `V`.
pub fn potential_matrix(basis: &TrialBasis, spec: &PotentialSpec) -> Result<OperatorMatrix> {
    if basis.ell() == 0 && basis.beta() <= 0.5 && spec.has_inverse_r() {
        return Err(Error::domain(format!(
            "1/r matrix elements need beta > 1/2 in the ell = 0 sector, got beta = {}",
            basis.beta()
        )));
    }
    let d = basis.dim();
    let mut total = OperatorMatrix { entries: DMatrix::zeros(d, d) };
    for term in spec.terms() {
        let part = basis.exp_power_matrix(term.power, term.decay)?;
        total = total.add(&part.scale(term.coefficient))?;
    }
    Ok(total)
}

pub fn hamiltonian_matrix(basis: &TrialBasis, masses: &MassConfig, spec: &PotentialSpec) -> Result<OperatorMatrix> {
    hamiltonian_matrix_with(basis, masses, spec, &KineticQuadrature::default())
}

pub fn hamiltonian_matrix_with(
    basis: &TrialBasis,
    masses: &MassConfig,
    spec: &PotentialSpec,
    settings: &KineticQuadrature,
) -> Result<OperatorMatrix> {
    let v = potential_matrix(basis, spec)?;
    let t = kinetic_matrix_with(basis, masses, settings)?;
    t.add(&v)
}
