//! Special functions and Gaussian quadrature.
//!
//! Everything here is pure. Gauss–Laguerre rules come from the eigenvalues of
//! the symmetric Jacobi matrix (Golub–Welsch), polished by Newton steps on the
//! orthonormal recurrence; weights use the Christoffel sum, which has no
//! cancellation and stays accurate for the tiny weights of the outer nodes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Generalized Laguerre polynomial `L_k^{(gamma)}(x)` by three-term recurrence.
pub fn laguerre_eval(k: usize, gamma: f64, x: f64) -> Result<f64> {
    if gamma <= -1.0 || !gamma.is_finite() {
        return Err(Error::domain(format!("laguerre exponent must exceed -1, got {gamma}")));
    }
    if x < 0.0 || !x.is_finite() {
        return Err(Error::domain(format!("laguerre argument must be >= 0, got {x}")));
    }
    Ok(*laguerre_all(k + 1, gamma, x).last().unwrap())
}

/// `L_0 .. L_{n-1}` at `x`. No domain checks; callers validate.
pub fn laguerre_all(n: usize, gamma: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(1.0);
    if n == 1 {
        return out;
    }
    out.push(1.0 + gamma - x);
    for k in 1..n - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + gamma - x) * out[k] - (kf + gamma) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Explicit binomial sum `sum_t binom(k+gamma, k-t) (-x)^t / t!`.
///
/// Suffers cancellation for large `k`; kept as an independent reference for
/// [`laguerre_eval`].
pub fn laguerre_explicit(k: usize, gamma: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    for t in 0..=k {
        let binom = generalized_binomial(k as f64 + gamma, k - t);
        let mut term = binom;
        for s in 1..=t {
            term *= -x / s as f64;
        }
        sum += term;
    }
    sum
}

/// `binom(a, j)` for real `a` and integer `j`.
fn generalized_binomial(a: f64, j: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..j {
        c *= (a - i as f64) / (i as f64 + 1.0);
    }
    c
}

/// Gegenbauer polynomials `C_0^{(lambda)} .. C_{n-1}^{(lambda)}` at `x`.
pub fn gegenbauer_all(n: usize, lambda: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(1.0);
    if n == 1 {
        return out;
    }
    out.push(2.0 * lambda * x);
    for k in 2..n {
        let kf = k as f64;
        let next = (2.0 * x * (kf + lambda - 1.0) * out[k - 1] - (kf + 2.0 * lambda - 2.0) * out[k - 2]) / kf;
        out.push(next);
    }
    out
}

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Spherical Bessel function of the first kind `j_l(x)`, `x >= 0`.
pub fn spherical_bessel(ell: u32, x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return if ell == 0 { 1.0 } else { 0.0 };
    }
    if x < 1.0 {
        return x.powi(ell as i32) * bessel_series_reduced(ell, x);
    }
    let j0 = x.sin() / x;
    if ell == 0 {
        return j0;
    }
    let lf = ell as f64;
    if x > lf {
        let mut prev = j0;
        let mut cur = x.sin() / (x * x) - x.cos() / x;
        for n in 1..ell {
            let next = (2.0 * n as f64 + 1.0) / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    // Miller's downward recurrence, normalized against j0.
    let start = ell as usize + 20 + (x as usize);
    let mut upper = 0.0_f64;
    let mut cur = 1e-30_f64;
    let mut at_ell = 0.0;
    for n in (1..=start).rev() {
        let lower = (2.0 * n as f64 + 1.0) / x * cur - upper;
        upper = cur;
        cur = lower;
        if n - 1 == ell as usize {
            at_ell = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            upper *= 1e-250;
            at_ell *= 1e-250;
        }
    }
    if cur.abs() < 1e-300 {
        // x sits at a zero of j0; fall back to j1 for normalization.
        let j1 = x.sin() / (x * x) - x.cos() / x;
        return at_ell * j1 / upper;
    }
    at_ell * j0 / cur
}

/// `j_l(x) / x^l`, well-defined and smooth at the origin.
pub fn spherical_bessel_reduced(ell: u32, x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        bessel_series_reduced(ell, x)
    } else {
        spherical_bessel(ell, x) / x.powi(ell as i32)
    }
}

fn bessel_series_reduced(ell: u32, x: f64) -> f64 {
    let mut double_fact = 1.0;
    for i in 0..=ell {
        double_fact *= (2 * i + 1) as f64;
    }
    let mut term = 1.0 / double_fact;
    let mut sum = term;
    let y = -0.5 * x * x;
    for k in 1..40 {
        term *= y / (k as f64 * (2.0 * ell as f64 + 2.0 * k as f64 + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureKind {
    /// Weight `x^gamma e^{-x}` on `[0, inf)`.
    GaussLaguerre { gamma: f64 },
    /// Unit weight on `[-1, 1]`.
    GaussLegendre,
}

impl fmt::Display for QuadratureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadratureKind::GaussLaguerre { gamma } => write!(f, "gauss-laguerre({gamma})"),
            QuadratureKind::GaussLegendre => write!(f, "gauss-legendre"),
        }
    }
}

impl FromStr for QuadratureKind {
    type Err = Error;

    /// Accepts `gauss-legendre`, `gauss-laguerre` (gamma = 0) and
    /// `gauss-laguerre:<gamma>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "gauss-legendre" {
            return Ok(QuadratureKind::GaussLegendre);
        }
        if s == "gauss-laguerre" {
            return Ok(QuadratureKind::GaussLaguerre { gamma: 0.0 });
        }
        if let Some(rest) = s.strip_prefix("gauss-laguerre:") {
            let gamma = rest
                .parse::<f64>()
                .map_err(|_| Error::Unsupported(format!("bad laguerre exponent in {s:?}")))?;
            return Ok(QuadratureKind::GaussLaguerre { gamma });
        }
        Err(Error::Unsupported(format!("quadrature kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadratureKind,
    pub order: usize,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Integrate over `[a, b]`; only meaningful for Gauss–Legendre rules.
    pub fn integrate_interval<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self.integrate(|u| f(mid + half * u))
    }
}

pub fn make_rule(kind: QuadratureKind, order: usize) -> Result<QuadratureRule> {
    if order < 1 {
        return Err(Error::domain("quadrature order must be >= 1"));
    }
    let (nodes, weights) = match kind {
        QuadratureKind::GaussLaguerre { gamma } => {
            if gamma <= -1.0 || !gamma.is_finite() {
                return Err(Error::domain(format!("laguerre exponent must exceed -1, got {gamma}")));
            }
            gauss_laguerre(order, gamma)
        }
        QuadratureKind::GaussLegendre => gauss_legendre(order),
    };
    Ok(QuadratureRule { nodes, weights, kind, order })
}

/// Golub–Welsch for the generalized Laguerre weight.
fn gauss_laguerre(n: usize, gamma: f64) -> (Vec<f64>, Vec<f64>) {
    let diag = |k: usize| 2.0 * k as f64 + gamma + 1.0;
    let off = |k: usize| (k as f64 * (k as f64 + gamma)).sqrt();

    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag(i)
        } else if i + 1 == j {
            off(j)
        } else if j + 1 == i {
            off(i)
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let ln_mu0 = ln_gamma_unchecked(gamma + 1.0);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _, _) = orthonormal_eval(n, *x, ln_mu0, &diag, &off);
            if dp == 0.0 || !dp.is_finite() {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() <= 1e-16 * x.abs() {
                break;
            }
        }
        let (_, _, sum_sq, ln_scale) = orthonormal_eval(n, *x, ln_mu0, &diag, &off);
        // Christoffel weight: 1 / sum_{k<n} p_k(x)^2, with p_k stored scaled by exp(-ln_scale).
        let w = (-2.0 * ln_scale).exp() / sum_sq;
        weights.push(if w.is_finite() { w } else { 0.0 });
    }
    (nodes, weights)
}

/// Orthonormal recurrence `b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}`.
///
/// Returns `(p_n, p_n', sum_{k<n} p_k^2, ln_scale)`; values carry a common
/// factor `exp(-ln_scale)` applied to avoid overflow at the outer nodes.
fn orthonormal_eval(
    n: usize,
    x: f64,
    ln_mu0: f64,
    diag: &dyn Fn(usize) -> f64,
    off: &dyn Fn(usize) -> f64,
) -> (f64, f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut p = (-0.5 * ln_mu0).exp();
    let mut d_prev = 0.0;
    let mut d = 0.0;
    let mut sum_sq = 0.0;
    let mut ln_scale = 0.0;
    for k in 0..n {
        sum_sq += p * p;
        let b_next = off(k + 1);
        let b_k = if k == 0 { 0.0 } else { off(k) };
        let p_next = ((x - diag(k)) * p - b_k * p_prev) / b_next;
        let d_next = (p + (x - diag(k)) * d - b_k * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let mag = p.abs().max(d.abs());
        if mag > 1e100 {
            let s = 1e-100;
            p *= s;
            p_prev *= s;
            d *= s;
            d_prev *= s;
            sum_sq *= s * s;
            ln_scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    (p, d, sum_sq, ln_scale)
}

/// Gauss–Legendre by Newton iteration from Chebyshev-like initial guesses.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive Gauss–Legendre integration over `[a, b]`.
///
/// Each panel compares a 10-point and a 20-point rule and is bisected until
/// the panel estimates agree to `rel_tol` of the running total.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(b > a) {
        return Err(Error::InvalidRange(format!("integration interval [{a}, {b}]")));
    }
    let low = make_rule(QuadratureKind::GaussLegendre, 10)?;
    let high = make_rule(QuadratureKind::GaussLegendre, 20)?;
    let coarse = high.integrate_interval(a, b, &f);
    let scale = coarse.abs().max(f64::MIN_POSITIVE);

    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    let mut panels = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        panels += 1;
        let lo_est = low.integrate_interval(lo, hi, &f);
        let hi_est = high.integrate_interval(lo, hi, &f);
        if !hi_est.is_finite() {
            return Err(Error::Convergence(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let width_share = (hi - lo) / (b - a);
        let diff = (hi_est - lo_est).abs();
        if diff <= rel_tol * scale * width_share || diff <= 4.0 * f64::EPSILON * hi_est.abs() {
            total += hi_est;
        } else if depth >= 60 {
            return Err(Error::Convergence(format!("adaptive integration stalled near {lo}")));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
        if panels > 200_000 {
            return Err(Error::Convergence("adaptive integration exceeded panel budget".into()));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn laguerre_small_values() {
        assert_eq!(laguerre_eval(0, 2.0, 7.3).unwrap(), 1.0);
        assert_relative_eq!(laguerre_eval(1, 2.0, 1.0).unwrap(), 2.0);
        assert_relative_eq!(laguerre_eval(2, 0.0, 2.0).unwrap(), -1.0, epsilon = 1e-15);
        assert_relative_eq!(laguerre_explicit(2, 0.0, 2.0), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn laguerre_rejects_bad_exponent() {
        assert!(matches!(laguerre_eval(3, -1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(laguerre_eval(3, -2.5, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_gamma_values() {
        assert_relative_eq!(log_gamma(5.0).unwrap(), 24f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(log_gamma(0.5).unwrap(), PI.sqrt().ln(), max_relative = 1e-14);
        let expected = (15.0 * PI.sqrt() / 8.0).ln();
        assert_relative_eq!(log_gamma(3.5).unwrap(), expected, max_relative = 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn bessel_values() {
        assert_eq!(spherical_bessel(0, 0.0), 1.0);
        assert_eq!(spherical_bessel(1, 0.0), 0.0);
        assert!(spherical_bessel(0, PI).abs() < 1e-15);
        // j_2(x) = (3/x^3 - 1/x) sin x - 3 cos x / x^2
        for &x in &[0.3_f64, 0.99, 1.0, 1.7, 2.0, 5.5, 40.0] {
            let exact = (3.0 / f64::powi(x, 3) - 1.0 / x) * f64::sin(x) - 3.0 * f64::cos(x) / (x * x);
            assert_relative_eq!(spherical_bessel(2, x), exact, max_relative = 1e-10, epsilon = 1e-14);
        }
    }

    #[test]
    fn bessel_downward_matches_upward_region() {
        // Miller branch (x < l) against the series branch continued past x = 1.
        let x = 3.0_f64;
        let l = 6;
        let series = x.powi(l as i32) * bessel_series_reduced(l, x);
        assert_relative_eq!(spherical_bessel(l, x), series, max_relative = 1e-12);
    }

    #[test]
    fn two_point_rules() {
        let r = make_rule(QuadratureKind::GaussLaguerre { gamma: 0.0 }, 2).unwrap();
        let s2 = 2f64.sqrt();
        assert_relative_eq!(r.nodes[0], 2.0 - s2, max_relative = 1e-14);
        assert_relative_eq!(r.nodes[1], 2.0 + s2, max_relative = 1e-14);
        assert_relative_eq!(r.weights[0], (2.0 + s2) / 4.0, max_relative = 1e-14);
        assert_relative_eq!(r.weights[1], (2.0 - s2) / 4.0, max_relative = 1e-14);

        let g = make_rule(QuadratureKind::GaussLegendre, 2).unwrap();
        let t = 1.0 / 3f64.sqrt();
        assert_relative_eq!(g.nodes[0], -t, max_relative = 1e-15);
        assert_relative_eq!(g.nodes[1], t, max_relative = 1e-15);
        assert_relative_eq!(g.weights[0], 1.0, max_relative = 1e-15);

        let one = make_rule(QuadratureKind::GaussLaguerre { gamma: 0.0 }, 1).unwrap();
        assert_relative_eq!(one.nodes[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(one.weights[0], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn rule_errors() {
        assert!(make_rule(QuadratureKind::GaussLegendre, 0).is_err());
        assert!(make_rule(QuadratureKind::GaussLaguerre { gamma: -1.0 }, 4).is_err());
        assert!(matches!("gauss-hermite".parse::<QuadratureKind>(), Err(Error::Unsupported(_))));
        assert_eq!(
            "gauss-laguerre:2.5".parse::<QuadratureKind>().unwrap(),
            QuadratureKind::GaussLaguerre { gamma: 2.5 }
        );
    }

    #[test]
    fn adaptive_matches_closed_form() {
        let v = adaptive_integrate(|r| r * r * (-3.0 * r).exp(), 0.0, 40.0, 1e-12).unwrap();
        assert_relative_eq!(v, 2.0 / 27.0, max_relative = 1e-11);
        assert!(adaptive_integrate(|x| x, 1.0, 1.0, 1e-8).is_err());
    }

    #[test]
    fn gegenbauer_low_orders() {
        let c = gegenbauer_all(3, 1.5, 0.4);
        assert_relative_eq!(c[1], 1.2);
        // C_2^l(x) = 2 l (l+1) x^2 - l
        assert_relative_eq!(c[2], 2.0 * 1.5 * 2.5 * 0.16 - 1.5, max_relative = 1e-15);
    }
}
