//! Analytic lower bounds on the spectrum and the bound-state counting bound.
//!
//! For the equal-mass operator `2 sqrt(p^2 + m^2) - alpha/r` the spectrum is
//! bounded below iff `alpha <= 4/pi`, by `2m sqrt(1 - (pi alpha/4)^2)`; for
//! `alpha <= 1` the bound `2m sqrt((1 + sqrt(1 - alpha^2))/2)` is sharper.
//! A Hellmann potential dominates `-alpha_eff/r` pointwise, and when it is
//! bounded below the spectrum also lies above `2m + min V`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::adaptive_integrate;
use crate::potentials::{Hellmann, PotentialSpec};

pub const CRITICAL_COUPLING: f64 = 4.0 / PI;
/// Counting-bound constant for massive constituents.
pub const COUNT_CONSTANT_MASSIVE: f64 = 14.107590867;
/// Counting-bound constant for massless constituents.
pub const COUNT_CONSTANT_MASSLESS: f64 = 6.074898097;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LowerBoundMethod {
    Herbst,
    ImprovedCoulomb,
    PotentialMinimum,
    BestOf,
}

impl fmt::Display for LowerBoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LowerBoundMethod::Herbst => "herbst",
            LowerBoundMethod::ImprovedCoulomb => "improved-coulomb",
            LowerBoundMethod::PotentialMinimum => "potential-minimum",
            LowerBoundMethod::BestOf => "best-of",
        })
    }
}

/// `Paper` applies the fixed decision rule (potential minimum whenever
/// `kappa + upsilon <= 0`, else the Coulomb comparison); `Best` takes the
/// largest of every applicable bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundMode {
    Paper,
    #[default]
    Best,
}

impl std::str::FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(BoundMode::Paper),
            "best" => Ok(BoundMode::Best),
            other => Err(Error::Unsupported(format!("bound mode {other:?} (expected paper or best)"))),
        }
    }
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMode::Paper => "paper",
            BoundMode::Best => "best",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub bounded_below: bool,
    /// Lower bound on the spectrum (total energy, not binding).
    pub lower_bound: Option<f64>,
    pub method: LowerBoundMethod,
    /// Coupling of the dominating Coulomb potential, `kappa + max(upsilon, 0)`.
    pub alpha_eff: f64,
    pub mode: BoundMode,
    /// Every bound that applied, with its method; `lower_bound` is chosen from these.
    pub candidates: Vec<(LowerBoundMethod, f64)>,
}

impl BoundsReport {
    /// `lower_bound - 2m`.
    pub fn binding_bound(&self, m: f64) -> Option<f64> {
        self.lower_bound.map(|e| e - 2.0 * m)
    }
}

pub fn herbst_bound(alpha: f64, m: f64) -> Result<f64> {
    check_coupling_and_mass(alpha, m)?;
    if alpha > CRITICAL_COUPLING {
        return Err(Error::Unbounded(format!(
            "Coulomb coupling {alpha} exceeds the critical value 4/pi = {CRITICAL_COUPLING:.6}"
        )));
    }
    let x = PI * alpha / 4.0;
    Ok(2.0 * m * (1.0 - x * x).max(0.0).sqrt())
}

pub fn improved_coulomb_bound(alpha: f64, m: f64) -> Result<f64> {
    check_coupling_and_mass(alpha, m)?;
    if alpha > 1.0 {
        return Err(Error::NotApplicable(format!("improved Coulomb bound needs alpha <= 1, got {alpha}")));
    }
    let inner = (1.0 - alpha * alpha).max(0.0).sqrt();
    Ok(2.0 * m * (0.5 * (1.0 + inner)).sqrt())
}

fn check_coupling_and_mass(alpha: f64, m: f64) -> Result<()> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("Coulomb coupling must be >= 0, got {alpha}")));
    }
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::domain(format!("mass must be >= 0, got {m}")));
    }
    Ok(())
}

/// Best available Coulomb-comparison bound at coupling `alpha`.
fn coulomb_bounds(alpha: f64, m: f64) -> Vec<(LowerBoundMethod, f64)> {
    let mut out = Vec::new();
    if let Ok(v) = improved_coulomb_bound(alpha, m) {
        out.push((LowerBoundMethod::ImprovedCoulomb, v));
    }
    if let Ok(v) = herbst_bound(alpha, m) {
        out.push((LowerBoundMethod::Herbst, v));
    }
    out
}

/// Lower bound on the spectrum of `2 sqrt(p^2 + m^2) + V_H`.
pub fn hellmann_lower_bound(spec: &PotentialSpec, m: f64, mode: BoundMode) -> Result<BoundsReport> {
    let Hellmann { kappa, upsilon, .. } = match spec {
        PotentialSpec::Hellmann(h) => *h,
        PotentialSpec::ExponentialWell(_) => {
            return Err(Error::Unsupported("lower bounds are implemented for Hellmann potentials".into()))
        }
    };
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::domain(format!("mass must be >= 0, got {m}")));
    }
    let alpha_eff = kappa + upsilon.max(0.0);
    let minimum_bound = if kappa + upsilon <= 0.0 { Some(2.0 * m + spec.minimum()?.value) } else { None };

    let report = |lower: Option<(LowerBoundMethod, f64)>, candidates: Vec<(LowerBoundMethod, f64)>| BoundsReport {
        bounded_below: lower.is_some(),
        lower_bound: lower.map(|l| l.1),
        method: lower.map(|l| l.0).unwrap_or(LowerBoundMethod::BestOf),
        alpha_eff,
        mode,
        candidates,
    };

    match mode {
        BoundMode::Paper => {
            let choice = if let Some(v) = minimum_bound {
                Some((LowerBoundMethod::PotentialMinimum, v))
            } else if alpha_eff <= 1.0 {
                Some((LowerBoundMethod::ImprovedCoulomb, improved_coulomb_bound(alpha_eff, m)?))
            } else if alpha_eff <= CRITICAL_COUPLING {
                Some((LowerBoundMethod::Herbst, herbst_bound(alpha_eff, m)?))
            } else {
                None
            };
            Ok(report(choice, choice.into_iter().collect()))
        }
        BoundMode::Best => {
            let mut candidates = Vec::new();
            if let Some(v) = minimum_bound {
                candidates.push((LowerBoundMethod::PotentialMinimum, v));
            }
            candidates.extend(coulomb_bounds(alpha_eff, m));
            // A repulsive Yukawa part can only raise V above -kappa/r.
            if upsilon <= 0.0 && kappa < alpha_eff {
                candidates.extend(coulomb_bounds(kappa, m));
            }
            let best = candidates.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1));
            Ok(report(best, candidates))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub condition_ok: bool,
    pub failure_reason: Option<String>,
    /// Upper bound on the number of bound states (with multiplicity).
    pub n_bound: Option<f64>,
    pub c_used: f64,
}

fn count_constant(m: f64) -> f64 {
    if m > 0.0 {
        COUNT_CONSTANT_MASSIVE
    } else {
        COUNT_CONSTANT_MASSLESS
    }
}

/// Checks `V <= 0` and `V` in `L^{3/2} ∩ L^3` for the supported families.
/// The first violated requirement is reported.
pub fn check_condition_l(spec: &PotentialSpec, m: f64) -> CountReport {
    let fail = |reason: &str| CountReport {
        condition_ok: false,
        failure_reason: Some(reason.to_string()),
        n_bound: None,
        c_used: count_constant(m),
    };
    match *spec {
        PotentialSpec::Hellmann(Hellmann { kappa, upsilon, .. }) => {
            if kappa == 0.0 && upsilon < 0.0 {
                return fail("V >= 0 (condition V <= 0 violated)");
            }
            if kappa + upsilon < 0.0 {
                return fail("V > 0 near the origin (condition V <= 0 violated)");
            }
            if kappa + upsilon > 0.0 {
                return fail("1/r singularity violates L^3 at origin");
            }
            if kappa > 0.0 {
                return fail("Coulomb tail at infinity");
            }
            CountReport { condition_ok: true, failure_reason: None, n_bound: None, c_used: count_constant(m) }
        }
        PotentialSpec::ExponentialWell(_) => {
            CountReport { condition_ok: true, failure_reason: None, n_bound: None, c_used: count_constant(m) }
        }
    }
}

/// `N <= C/(12 pi) int_0^inf r^2 [|V| (|V| + 4m)]^{3/2} dr`.
pub fn count_bound(spec: &PotentialSpec, m: f64) -> Result<CountReport> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::domain(format!("mass must be >= 0, got {m}")));
    }
    let mut report = check_condition_l(spec, m);
    if !report.condition_ok {
        return Ok(report);
    }
    if let PotentialSpec::Hellmann(_) = spec {
        // Only V = 0 passes the condition within the Hellmann family.
        report.n_bound = Some(0.0);
        return Ok(report);
    }
    let integrand = |r: f64| {
        let v = spec.value_unchecked(r).abs();
        r * r * (v * (v + 4.0 * m)).powf(1.5)
    };
    let upper = integration_cutoff(&integrand, spec.slope());
    let integral = adaptive_integrate(integrand, 0.0, upper, 1e-10)?;
    if !integral.is_finite() {
        return Err(Error::Convergence("counting integral diverges".into()));
    }
    report.n_bound = Some(report.c_used / (12.0 * PI) * integral);
    Ok(report)
}

/// First radius past the peak where the integrand drops below `1e-16` of the
/// peak, capped at `10^3 / b`.
fn integration_cutoff<F: Fn(f64) -> f64>(integrand: &F, b: f64) -> f64 {
    let cap = 1e3 / b;
    let step = 0.01 / b;
    let mut peak = 0.0_f64;
    let mut r = step;
    while r < cap {
        let v = integrand(r);
        peak = peak.max(v);
        if peak > 0.0 && v < 1e-16 * peak && r > step * 10.0 {
            return r;
        }
        r += step;
    }
    cap
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn herbst_examples() {
        assert_relative_eq!(herbst_bound(1.0, 1.0).unwrap(), 2.0 * (1.0 - PI * PI / 16.0).sqrt(), max_relative = 1e-15);
        assert!(herbst_bound(CRITICAL_COUPLING, 1.0).unwrap().abs() < 1e-12);
        assert_eq!(herbst_bound(0.0, 1.0).unwrap(), 2.0);
        assert!(matches!(herbst_bound(1.2733, 1.0), Err(Error::Unbounded(_))));
        assert!(herbst_bound(-0.1, 1.0).is_err());
    }

    #[test]
    fn improved_examples() {
        assert_relative_eq!(improved_coulomb_bound(1.0, 1.0).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(improved_coulomb_bound(0.0, 1.0).unwrap(), 2.0);
        assert!(matches!(improved_coulomb_bound(1.01, 1.0), Err(Error::NotApplicable(_))));
        for i in 1..=9 {
            let a = i as f64 / 10.0;
            assert!(improved_coulomb_bound(a, 1.0).unwrap() >= herbst_bound(a, 1.0).unwrap());
        }
    }

    #[test]
    fn fixed_rule_mode_reference_row() {
        let cases = [(0.5, 0.5, -0.585_786_4), (1.0, -1.0, -1.0), (1.0, -2.0, -0.373_364_6)];
        for (kappa, upsilon, expected) in cases {
            let spec = PotentialSpec::hellmann(kappa, upsilon, 1.0).unwrap();
            let r = hellmann_lower_bound(&spec, 1.0, BoundMode::Paper).unwrap();
            assert!((r.binding_bound(1.0).unwrap() - expected).abs() < 1e-7, "{kappa} {upsilon}");
        }
    }

    #[test]
    fn unbounded_beyond_critical_coupling() {
        let spec = PotentialSpec::hellmann(1.0, 0.5, 1.0).unwrap();
        for mode in [BoundMode::Paper, BoundMode::Best] {
            let r = hellmann_lower_bound(&spec, 1.0, mode).unwrap();
            assert!(!r.bounded_below);
            assert!(r.lower_bound.is_none());
        }
    }

    #[test]
    fn condition_reasons() {
        let h = |k, u| PotentialSpec::hellmann(k, u, 1.0).unwrap();
        assert_eq!(check_condition_l(&h(1.0, -1.0), 1.0).failure_reason.as_deref(), Some("Coulomb tail at infinity"));
        assert_eq!(
            check_condition_l(&h(0.0, 1.0), 1.0).failure_reason.as_deref(),
            Some("1/r singularity violates L^3 at origin")
        );
        assert_eq!(
            check_condition_l(&h(0.0, -1.0), 1.0).failure_reason.as_deref(),
            Some("V >= 0 (condition V <= 0 violated)")
        );
        let well = PotentialSpec::exponential_well(1.0, 1.0).unwrap();
        assert!(check_condition_l(&well, 1.0).condition_ok);
    }

    #[test]
    fn massless_well_count_closed_form() {
        let well = PotentialSpec::exponential_well(1.0, 1.0).unwrap();
        let r = count_bound(&well, 0.0).unwrap();
        assert_eq!(r.c_used, COUNT_CONSTANT_MASSLESS);
        let expected = COUNT_CONSTANT_MASSLESS * 2.0 / (12.0 * PI * 27.0);
        assert_relative_eq!(r.n_bound.unwrap(), expected, max_relative = 1e-9);
        assert!(r.n_bound.unwrap() < 1.0);
    }
}
