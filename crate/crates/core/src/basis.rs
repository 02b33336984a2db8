//! Generalized-Laguerre trial functions in position and momentum space.
//!
//! The `k`-th radial function of the sector `ell` is
//!
//! ```text
//! R_k(r) = N_k r^(ell+beta-1) exp(-mu r) L_k^(2 ell + 2 beta)(2 mu r),
//! N_k    = sqrt((2 mu)^(2 ell + 2 beta + 1) k! / Gamma(2 ell + 2 beta + k + 1)),
//! ```
//!
//! orthonormal under `int r^2 R_i R_j dr`. Momentum functions use the radial
//! Hankel transform `phi_k(p) = sqrt(2/pi) int r^2 j_ell(p r) R_k(r) dr`.
//!
//! For `beta = 1` the transform is closed-form: summing the Laguerre generating
//! function turns it into Gegenbauer polynomials in `x = (p^2 - mu^2)/(p^2 + mu^2)`,
//!
//! ```text
//! int r^2 j_ell(p r) r^ell e^{-mu r} L_k^(2 ell + 2)(2 mu r) dr
//!     = 2^(ell+1) (ell+1)! mu p^ell / (p^2 + mu^2)^(ell+2) [C_k^(ell+2)(x) + C_{k-1}^(ell+2)(x)].
//! ```
//!
//! Other `beta` go through quadrature: a real-axis Gauss–Laguerre rule for
//! small `p`, and for larger `p` the Hankel-function split of `j_ell` with each
//! exponential piece rotated onto the ray of steepest descent, where the
//! integrand becomes `t^a e^{-t}` times a polynomial.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    gegenbauer_all, laguerre_all, ln_gamma_unchecked, make_rule, spherical_bessel_reduced,
    QuadratureKind, QuadratureRule,
};
use crate::operators::OperatorMatrix;

/// Below `p = SMALL_P_SWITCH * mu` the real-axis rule is used.
const SMALL_P_SWITCH: f64 = 0.5;
/// Agreement required between orders `n` and `2n` of a quadrature transform.
const TRANSFORM_TOL: f64 = 1e-8;
const MAX_TRANSFORM_ORDER: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialBasis {
    ell: u32,
    beta: f64,
    mu: f64,
    dim: usize,
}

impl TrialBasis {
    pub fn new(ell: u32, beta: f64, mu: f64, dim: usize) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::domain(format!("mu must be > 0, got {mu}")));
        }
        if !(beta > -0.5) || !beta.is_finite() {
            return Err(Error::domain(format!("beta must be > -1/2, got {beta}")));
        }
        if dim == 0 {
            return Err(Error::domain("trial-space dimension must be >= 1"));
        }
        Ok(TrialBasis { ell, beta, mu, dim })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Laguerre exponent `2 ell + 2 beta`.
    pub fn gamma(&self) -> f64 {
        2.0 * self.ell as f64 + 2.0 * self.beta
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.ell, self.beta, self.mu, dim)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.ell, self.beta, mu, self.dim)
    }

    pub fn has_closed_form_transform(&self) -> bool {
        self.beta == 1.0
    }

    pub fn norm(&self, k: usize) -> f64 {
        let g = self.gamma();
        let ln = (g + 1.0) * (2.0 * self.mu).ln() + ln_gamma_unchecked(k as f64 + 1.0)
            - ln_gamma_unchecked(g + k as f64 + 1.0);
        (0.5 * ln).exp()
    }

    pub fn norms(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.norm(k)).collect()
    }

    pub fn radial_eval(&self, k: usize, r: f64) -> Result<f64> {
        if k >= self.dim {
            return Err(Error::domain(format!("index {k} outside trial space of dimension {}", self.dim)));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::domain(format!("radius must be > 0, got {r}")));
        }
        let l = laguerre_all(k + 1, self.gamma(), 2.0 * self.mu * r);
        Ok(self.norm(k) * self.radial_prefactor(r) * l[k])
    }

    /// All `R_k(r)` for `k < dim`.
    pub fn radial_all(&self, r: f64) -> Vec<f64> {
        let pre = self.radial_prefactor(r);
        laguerre_all(self.dim, self.gamma(), 2.0 * self.mu * r)
            .into_iter()
            .enumerate()
            .map(|(k, l)| self.norm(k) * pre * l)
            .collect()
    }

    fn radial_prefactor(&self, r: f64) -> f64 {
        r.powf(self.ell as f64 + self.beta - 1.0) * (-self.mu * r).exp()
    }

    pub fn momentum_eval(&self, k: usize, p: f64) -> Result<f64> {
        if k >= self.dim {
            return Err(Error::domain(format!("index {k} outside trial space of dimension {}", self.dim)));
        }
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::domain(format!("momentum must be >= 0, got {p}")));
        }
        Ok(self.with_dim(k + 1)?.momentum_all(p)?[k])
    }

    /// All `phi_k(p)` for `k < dim`.
    pub fn momentum_all(&self, p: f64) -> Result<Vec<f64>> {
        if self.has_closed_form_transform() {
            Ok(self.momentum_closed_form(p))
        } else {
            self.momentum_quadrature(p)
        }
    }

    fn momentum_closed_form(&self, p: f64) -> Vec<f64> {
        let l = self.ell as i32;
        let mu = self.mu;
        let s = p * p + mu * mu;
        let x = (p * p - mu * mu) / s;
        let mut fact = 1.0;
        for i in 2..=(l + 1) {
            fact *= i as f64;
        }
        let pre = (2.0 / PI).sqrt() * 2f64.powi(l + 1) * fact * mu * p.powi(l) / s.powi(l + 2);
        let c = gegenbauer_all(self.dim, self.ell as f64 + 2.0, x);
        (0..self.dim)
            .map(|k| {
                let sum = if k == 0 { c[0] } else { c[k] + c[k - 1] };
                self.norm(k) * pre * sum
            })
            .collect()
    }

    /// Quadrature transform for any `beta`, accepted once orders `n` and `2n` agree.
    pub fn momentum_quadrature(&self, p: f64) -> Result<Vec<f64>> {
        if self.ell > 0 && p == 0.0 {
            return Ok(vec![0.0; self.dim]);
        }
        let small = p <= SMALL_P_SWITCH * self.mu;
        let mut order = if small { (2 * self.dim).max(48) } else { self.dim / 2 + 4 };
        let mut prev = self.transform_at_order(p, order, small)?;
        loop {
            let next_order = 2 * order;
            let next = self.transform_at_order(p, next_order, small)?;
            let scale = next.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let diff = prev.iter().zip(&next).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            if diff <= TRANSFORM_TOL * scale || scale == 0.0 {
                return Ok(next);
            }
            if next_order >= MAX_TRANSFORM_ORDER {
                return Err(Error::Convergence(format!(
                    "momentum transform at p = {p}: orders {order} and {next_order} differ by {diff:e}"
                )));
            }
            order = next_order;
            prev = next;
        }
    }

    fn transform_at_order(&self, p: f64, order: usize, small: bool) -> Result<Vec<f64>> {
        let raw = if small { self.transform_real_axis(p, order)? } else { self.transform_rotated(p, order)? };
        let c = (2.0 / PI).sqrt();
        Ok(raw.into_iter().enumerate().map(|(k, v)| c * self.norm(k) * v).collect())
    }

    /// `int r^(ell+beta+1) e^{-mu r} L_k(2 mu r) j_ell(p r) dr` with `y = mu r`.
    fn transform_real_axis(&self, p: f64, order: usize) -> Result<Vec<f64>> {
        let l = self.ell as f64;
        let exponent = 2.0 * l + self.beta + 1.0;
        let rule = make_rule(QuadratureKind::GaussLaguerre { gamma: exponent }, order)?;
        let q = p / self.mu;
        let mut acc = vec![0.0; self.dim];
        for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
            let jw = w * spherical_bessel_reduced(self.ell, q * y);
            for (a, lk) in acc.iter_mut().zip(laguerre_all(self.dim, self.gamma(), 2.0 * y)) {
                *a += jw * lk;
            }
        }
        let scale = q.powi(self.ell as i32) * self.mu.powf(-(l + self.beta + 2.0));
        Ok(acc.into_iter().map(|a| a * scale).collect())
    }

    /// Same integral via `j_ell = Re h_ell^(1)`, each term integrated along `r = t / (mu - i p)`.
    fn transform_rotated(&self, p: f64, order: usize) -> Result<Vec<f64>> {
        let l = self.ell as i32;
        let z = Complex64::new(self.mu, -p);
        let gamma = self.gamma();
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        // h_l(x) = (-i)^(l+1) e^{ix}/x sum_s (i/(2x))^s (l+s)!/(s!(l-s)!)
        let minus_i_pow = Complex64::new(0.0, -1.0).powi(l + 1);
        for s in 0..=l {
            let a_s = factorial(l + s) / (factorial(s) * factorial(l - s));
            let coeff = minus_i_pow * Complex64::new(0.0, 0.5).powi(s) * a_s / p.powi(s + 1);
            let alpha = l as f64 + self.beta - s as f64;
            let rule: QuadratureRule = make_rule(QuadratureKind::GaussLaguerre { gamma: alpha }, order)?;
            let jac = z.powf(-(alpha + 1.0));
            let mut part = vec![Complex64::new(0.0, 0.0); self.dim];
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let arg = Complex64::new(2.0 * self.mu * t, 0.0) / z;
                for (slot, lk) in part.iter_mut().zip(laguerre_all_complex(self.dim, gamma, arg)) {
                    *slot += lk * w;
                }
            }
            for (a, v) in acc.iter_mut().zip(part) {
                *a += coeff * jac * v;
            }
        }
        Ok(acc.into_iter().map(|c| c.re).collect())
    }

    /// Overlap matrix `int r^2 R_i R_j dr`, identity up to quadrature error.
    pub fn gram_matrix(&self) -> Result<OperatorMatrix> {
        self.exp_power_matrix(0, 0.0)
    }

    /// Exact matrix of `r^power e^{-decay r}`: `int r^(2+power) e^{-decay r} R_i R_j dr`.
    ///
    /// The integrand is `y^(gamma+power) e^{-y}` times a polynomial of degree
    /// `2 dim - 2`, so a Gauss–Laguerre rule of order `dim + 2` is exact.
    pub fn exp_power_matrix(&self, power: i32, decay: f64) -> Result<OperatorMatrix> {
        let exponent = self.gamma() + power as f64;
        if exponent <= -1.0 {
            return Err(Error::domain(format!(
                "matrix element of r^{power} diverges at the origin for ell = {}, beta = {}",
                self.ell, self.beta
            )));
        }
        if !(decay >= 0.0) {
            return Err(Error::domain(format!("decay must be >= 0, got {decay}")));
        }
        let rate = 2.0 * self.mu + decay;
        let rho = 2.0 * self.mu / rate;
        let rule = make_rule(QuadratureKind::GaussLaguerre { gamma: exponent }, self.dim + 2)?;
        let norms = self.norms();
        let prefactor = rate.powf(-(exponent + 1.0));
        let d = self.dim;
        let mut m = nalgebra::DMatrix::zeros(d, d);
        for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
            let l: Vec<f64> = laguerre_all(d, self.gamma(), rho * y).iter().zip(&norms).map(|(a, n)| a * n).collect();
            for i in 0..d {
                let wi = w * l[i];
                for j in 0..=i {
                    m[(i, j)] += wi * l[j];
                }
            }
        }
        Ok(OperatorMatrix::from_lower(m * prefactor))
    }

    /// Matrix of a radial function `f`, given as `g(r) = r f(r)` so that
    /// Coulomb-like `1/r` behaviour stays smooth. Orders double from
    /// `2 dim + 16` until consecutive results agree to `rel_tol`.
    pub fn radial_function_matrix<G: Fn(f64) -> f64>(&self, g: G, rel_tol: f64) -> Result<OperatorMatrix> {
        let exponent = self.gamma() - 1.0;
        if exponent <= -1.0 {
            return Err(Error::domain(format!(
                "radial matrix elements diverge at the origin for ell = {}, beta = {}",
                self.ell, self.beta
            )));
        }
        let norms = self.norms();
        let d = self.dim;
        let two_mu = 2.0 * self.mu;
        let build = |order: usize| -> Result<nalgebra::DMatrix<f64>> {
            let rule = make_rule(QuadratureKind::GaussLaguerre { gamma: exponent }, order)?;
            let mut m = nalgebra::DMatrix::zeros(d, d);
            for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
                let gw = w * g(y / two_mu);
                if gw == 0.0 {
                    continue;
                }
                let l: Vec<f64> = laguerre_all(d, self.gamma(), y).iter().zip(&norms).map(|(a, n)| a * n).collect();
                for i in 0..d {
                    for j in 0..=i {
                        m[(i, j)] += gw * l[i] * l[j];
                    }
                }
            }
            Ok(m * two_mu.powf(-self.gamma()))
        };
        let mut order = 2 * d + 16;
        let mut prev = build(order)?;
        loop {
            let next = build(2 * order)?;
            let scale = next.amax();
            if (&next - &prev).amax() <= rel_tol * scale || scale == 0.0 {
                return Ok(OperatorMatrix::from_lower(next));
            }
            order *= 2;
            if order > 400 {
                return Err(Error::Convergence("radial matrix quadrature did not settle by order 400".into()));
            }
            prev = next;
        }
    }
}

fn factorial(n: i32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn laguerre_all_complex(n: usize, gamma: f64, x: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    out.push(Complex64::new(1.0, 0.0));
    if n == 1 {
        return out;
    }
    out.push(Complex64::new(1.0 + gamma, 0.0) - x);
    for k in 1..n - 1 {
        let kf = k as f64;
        let next = ((Complex64::new(2.0 * kf + 1.0 + gamma, 0.0) - x) * out[k] - out[k - 1] * (kf + gamma)) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// A trial state: coefficients over an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub basis: TrialBasis,
    pub coefficients: Vec<f64>,
}

impl RadialState {
    /// Normalizes `coefficients` to unit length.
    pub fn new(basis: TrialBasis, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != basis.dim() {
            return Err(Error::domain(format!(
                "expected {} coefficients, got {}",
                basis.dim(),
                coefficients.len()
            )));
        }
        let norm = coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("state coefficients must be a nonzero finite vector"));
        }
        Ok(RadialState { basis, coefficients: coefficients.into_iter().map(|c| c / norm).collect() })
    }

    pub fn radial_eval(&self, r: f64) -> f64 {
        self.basis.radial_all(r).iter().zip(&self.coefficients).map(|(a, c)| a * c).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_parameters() {
        assert!(TrialBasis::new(0, 1.0, 0.0, 4).is_err());
        assert!(TrialBasis::new(0, -0.5, 1.0, 4).is_err());
        assert!(TrialBasis::new(0, 1.0, 1.0, 0).is_err());
        let b = TrialBasis::new(0, 1.0, 1.0, 4).unwrap();
        assert!(b.radial_eval(4, 1.0).is_err());
        assert!(b.radial_eval(0, 0.0).is_err());
    }

    #[test]
    fn ground_function_is_two_exp() {
        let b = TrialBasis::new(0, 1.0, 1.0, 3).unwrap();
        for &r in &[0.1, 1.0, 3.7] {
            assert_relative_eq!(b.radial_eval(0, r).unwrap(), 2.0 * (-r).exp(), max_relative = 1e-14);
        }
        assert_relative_eq!(b.radial_eval(0, 1e-12).unwrap(), 2.0, max_relative = 1e-11);
    }

    #[test]
    fn momentum_ground_function() {
        let b = TrialBasis::new(0, 1.0, 1.0, 1).unwrap();
        let c = (2.0 / PI).sqrt();
        assert_relative_eq!(b.momentum_eval(0, 0.0).unwrap(), 4.0 * c, max_relative = 1e-14);
        assert_relative_eq!(b.momentum_eval(0, 0.0).unwrap(), 3.1915382, max_relative = 1e-7);
        assert_relative_eq!(b.momentum_eval(0, 1.0).unwrap(), c, max_relative = 1e-14);
        let p1 = TrialBasis::new(1, 0.8, 1.3, 3).unwrap();
        assert_eq!(p1.momentum_eval(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_matches_quadrature_transform() {
        for ell in 0..3 {
            let b = TrialBasis::new(ell, 1.0, 1.0, 12).unwrap();
            for &p in &[0.05, 0.3, 0.7, 1.0, 2.5, 9.0, 60.0] {
                let exact = b.momentum_all(p).unwrap();
                let quad = b.momentum_quadrature(p).unwrap();
                let scale = exact.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                for (e, q) in exact.iter().zip(&quad) {
                    assert!((e - q).abs() < 1e-9 * scale, "ell={ell} p={p}: {e} vs {q}");
                }
            }
        }
    }

    #[test]
    fn gram_is_identity() {
        let b = TrialBasis::new(0, 1.0, 1.0, 1).unwrap();
        assert_relative_eq!(b.gram_matrix().unwrap().get(0, 0), 1.0, max_relative = 1e-14);
        let b = TrialBasis::new(0, 1.0, 1.0, 30).unwrap();
        assert!(b.gram_matrix().unwrap().max_deviation_from_identity() < 1e-10);
        let b = TrialBasis::new(0, 0.75, 1.0, 30).unwrap();
        assert!(b.gram_matrix().unwrap().max_deviation_from_identity() < 1e-8);
    }

    #[test]
    fn state_is_normalized() {
        let b = TrialBasis::new(0, 1.0, 1.0, 2).unwrap();
        let s = RadialState::new(b, vec![3.0, 4.0]).unwrap();
        assert_relative_eq!(s.coefficients[0], 0.6);
        assert!(RadialState::new(b, vec![0.0, 0.0]).is_err());
        assert!(RadialState::new(b, vec![1.0]).is_err());
    }
}
