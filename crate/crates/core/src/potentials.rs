//! Generalized Hellmann potentials and a bounded exponential well.
//!
//! The Hellmann family is `V(r) = -kappa/r - upsilon e^{-b r}/r` with
//! `kappa >= 0`, `b > 0` and `upsilon` of either sign. Its qualitative shape is
//! fixed by the relation between `kappa` and `upsilon` alone.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hellmann {
    pub kappa: f64,
    pub upsilon: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialWell {
    pub depth: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    Hellmann(Hellmann),
    ExponentialWell(ExponentialWell),
}

/// One term `coefficient * r^power * exp(-decay r)` of a potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpPowerTerm {
    pub coefficient: f64,
    pub power: i32,
    pub decay: f64,
}

impl PotentialSpec {
    pub fn hellmann(kappa: f64, upsilon: f64, b: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::domain(format!("kappa must be >= 0, got {kappa}")));
        }
        if !upsilon.is_finite() {
            return Err(Error::domain("upsilon must be finite"));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::domain(format!("b must be > 0, got {b}")));
        }
        Ok(PotentialSpec::Hellmann(Hellmann { kappa, upsilon, b }))
    }

    /// Pure Coulomb `-alpha/r`, written as a Hellmann potential with no Yukawa part.
    pub fn coulomb(alpha: f64) -> Result<Self> {
        Self::hellmann(alpha, 0.0, 1.0)
    }

    pub fn exponential_well(depth: f64, b: f64) -> Result<Self> {
        if !(depth > 0.0) || !depth.is_finite() {
            return Err(Error::domain(format!("well depth V0 must be > 0, got {depth}")));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::domain(format!("b must be > 0, got {b}")));
        }
        Ok(PotentialSpec::ExponentialWell(ExponentialWell { depth, b }))
    }

    pub fn slope(&self) -> f64 {
        match self {
            PotentialSpec::Hellmann(h) => h.b,
            PotentialSpec::ExponentialWell(w) => w.b,
        }
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.value_unchecked(r))
    }

    pub(crate) fn value_unchecked(&self, r: f64) -> f64 {
        match *self {
            PotentialSpec::Hellmann(Hellmann { kappa, upsilon, b }) => {
                -(kappa + upsilon * (-b * r).exp()) / r
            }
            PotentialSpec::ExponentialWell(ExponentialWell { depth, b }) => -depth * (-b * r).exp(),
        }
    }

    /// `r dV/dr`.
    pub fn radial_force(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.radial_force_unchecked(r))
    }

    pub(crate) fn radial_force_unchecked(&self, r: f64) -> f64 {
        match *self {
            PotentialSpec::Hellmann(Hellmann { kappa, upsilon, b }) => {
                (kappa + upsilon * (-b * r).exp() * (1.0 + b * r)) / r
            }
            PotentialSpec::ExponentialWell(ExponentialWell { depth, b }) => {
                depth * b * r * (-b * r).exp()
            }
        }
    }

    /// `V` as a sum of exponential-power terms; used for exact matrix elements.
    pub fn terms(&self) -> Vec<ExpPowerTerm> {
        match *self {
            PotentialSpec::Hellmann(Hellmann { kappa, upsilon, b }) => {
                let mut out = Vec::new();
                if kappa != 0.0 {
                    out.push(ExpPowerTerm { coefficient: -kappa, power: -1, decay: 0.0 });
                }
                if upsilon != 0.0 {
                    out.push(ExpPowerTerm { coefficient: -upsilon, power: -1, decay: b });
                }
                out
            }
            PotentialSpec::ExponentialWell(ExponentialWell { depth, b }) => {
                vec![ExpPowerTerm { coefficient: -depth, power: 0, decay: b }]
            }
        }
    }

    /// Whether `V` carries a `1/r` singularity at the origin.
    pub fn has_inverse_r(&self) -> bool {
        self.terms().iter().any(|t| t.power < 0)
    }

    pub fn classify(&self) -> Result<PotentialProfile> {
        let h = self.as_hellmann()?;
        let (kappa, upsilon) = (h.kappa, h.upsilon);
        let category = Category::from_couplings(kappa, upsilon);
        let sum = kappa + upsilon;
        let origin = if sum > 0.0 {
            OriginBehavior::AttractiveSingular
        } else if sum == 0.0 {
            OriginBehavior::Finite
        } else {
            OriginBehavior::RepulsiveSingular
        };
        let bounded_below = sum <= 0.0;
        let minimum = if bounded_below { Some(self.minimum()?) } else { None };
        Ok(PotentialProfile { category, bounded_below, origin_behavior: origin, minimum })
    }

    /// Global minimum (or infimum) of a bounded-below Hellmann potential.
    pub fn minimum(&self) -> Result<PotentialMinimum> {
        let h = self.as_hellmann()?;
        let Hellmann { kappa, upsilon, b } = h;
        if kappa + upsilon > 0.0 {
            return Err(Error::Unbounded(format!(
                "kappa + upsilon = {} > 0: V -> -inf at the origin",
                kappa + upsilon
            )));
        }
        if kappa == 0.0 {
            // Purely repulsive (or zero): V >= 0, infimum 0 approached at infinity.
            return Ok(PotentialMinimum { radius: f64::INFINITY, value: 0.0, attained: upsilon == 0.0 });
        }
        if kappa + upsilon == 0.0 {
            // V = -kappa (1 - e^{-br}) / r increases monotonically from -kappa b.
            return Ok(PotentialMinimum { radius: 0.0, value: -kappa * b, attained: false });
        }
        let strength = -upsilon;
        // Stationarity: strength e^{-br} (1 + br) = kappa; the left side falls monotonically.
        let g = |r: f64| strength * (-b * r).exp() * (1.0 + b * r) - kappa;
        let mut lo = 1e-8 / b;
        let mut hi = 50.0 / b;
        while g(hi) > 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-10 * hi {
                break;
            }
        }
        let mut r = 0.5 * (lo + hi);
        for _ in 0..8 {
            let dg = -strength * b * b * r * (-b * r).exp();
            let step = g(r) / dg;
            if !step.is_finite() {
                break;
            }
            r -= step;
            if step.abs() < 1e-16 * r {
                break;
            }
        }
        Ok(PotentialMinimum { radius: r, value: -kappa * b / (1.0 + b * r), attained: true })
    }

    /// `n` logarithmically spaced samples `(r, V(r))` on `[r_min, r_max]`.
    pub fn profile_samples(&self, r_min: f64, r_max: f64, n: usize) -> Result<Vec<(f64, f64)>> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::InvalidRange(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if n < 2 {
            return Err(Error::InvalidRange(format!("need at least 2 samples, got {n}")));
        }
        let ratio = (r_max / r_min).ln();
        Ok((0..n)
            .map(|i| {
                let r = if i == n - 1 {
                    r_max
                } else {
                    r_min * (ratio * i as f64 / (n - 1) as f64).exp()
                };
                (r, self.value_unchecked(r))
            })
            .collect())
    }

    fn as_hellmann(&self) -> Result<Hellmann> {
        match *self {
            PotentialSpec::Hellmann(h) => Ok(h),
            PotentialSpec::ExponentialWell(_) => {
                Err(Error::Unsupported("operation defined for Hellmann potentials only".into()))
            }
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be > 0, got {r}")));
    }
    Ok(())
}

/// Coupling relation of a Hellmann potential. The first four match the
/// categories drawn in the usual phase diagram; the remaining three are the
/// sign-forced subcases in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    UpsilonAboveKappa,
    UpsilonEqualsKappa,
    UpsilonBetweenZeroAndKappa,
    UpsilonZero,
    UpsilonBetweenMinusKappaAndZero,
    UpsilonEqualsMinusKappa,
    UpsilonBelowMinusKappa,
}

impl Category {
    /// Exact comparisons; ties are resolved in the order the variants are listed,
    /// so `kappa = upsilon = 0` is `UpsilonEqualsKappa`.
    pub fn from_couplings(kappa: f64, upsilon: f64) -> Self {
        if upsilon > kappa {
            Category::UpsilonAboveKappa
        } else if upsilon == kappa {
            Category::UpsilonEqualsKappa
        } else if upsilon > 0.0 {
            Category::UpsilonBetweenZeroAndKappa
        } else if upsilon == 0.0 {
            Category::UpsilonZero
        } else if upsilon > -kappa {
            Category::UpsilonBetweenMinusKappaAndZero
        } else if upsilon == -kappa {
            Category::UpsilonEqualsMinusKappa
        } else {
            Category::UpsilonBelowMinusKappa
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Category::UpsilonAboveKappa => "upsilon>kappa",
            Category::UpsilonEqualsKappa => "upsilon=kappa",
            Category::UpsilonBetweenZeroAndKappa => "0<upsilon<kappa",
            Category::UpsilonZero => "upsilon=0",
            Category::UpsilonBetweenMinusKappaAndZero => "-kappa<upsilon<0",
            Category::UpsilonEqualsMinusKappa => "upsilon=-kappa",
            Category::UpsilonBelowMinusKappa => "upsilon<-kappa",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginBehavior {
    AttractiveSingular,
    Finite,
    RepulsiveSingular,
}

impl fmt::Display for OriginBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OriginBehavior::AttractiveSingular => "singular at origin",
            OriginBehavior::Finite => "finite at origin",
            OriginBehavior::RepulsiveSingular => "repulsively singular at origin",
        })
    }
}

/// `radius = 0` with `attained = false` marks an infimum reached as `r -> 0`;
/// `radius = inf` one reached as `r -> inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialMinimum {
    pub radius: f64,
    pub value: f64,
    pub attained: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialProfile {
    pub category: Category,
    pub bounded_below: bool,
    pub origin_behavior: OriginBehavior,
    pub minimum: Option<PotentialMinimum>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn h(kappa: f64, upsilon: f64, b: f64) -> PotentialSpec {
        PotentialSpec::hellmann(kappa, upsilon, b).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let v = h(0.5, 0.5, 1.0).evaluate(1.0).unwrap();
        assert_relative_eq!(v, -0.5 - 0.5 * (-1f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(h(1.0, 0.0, 1.0).evaluate(2.0).unwrap(), -0.5);
        let near_origin = h(1.0, -1.0, 1.0).evaluate(1e-9).unwrap();
        assert!((near_origin + 1.0).abs() < 1e-6);
        assert!(h(1.0, 0.0, 1.0).evaluate(0.0).is_err());
        assert!(h(1.0, 0.0, 1.0).evaluate(-1.0).is_err());
    }

    #[test]
    fn constructor_rejects_bad_parameters() {
        assert!(PotentialSpec::hellmann(-0.1, 0.0, 1.0).is_err());
        assert!(PotentialSpec::hellmann(1.0, 0.0, 0.0).is_err());
        assert!(PotentialSpec::exponential_well(0.0, 1.0).is_err());
        assert!(PotentialSpec::exponential_well(1.0, -1.0).is_err());
    }

    #[test]
    fn radial_force_examples() {
        assert_relative_eq!(h(1.0, 0.0, 1.0).radial_force(2.0).unwrap(), 0.5);
        assert_relative_eq!(h(0.0, 1.0, 1.0).radial_force(1.0).unwrap(), 2.0 * (-1f64).exp(), max_relative = 1e-15);
        let spec = h(0.7, -1.3, 0.8);
        let (r, step) = (1.0, 1e-5);
        let fd = r * (spec.evaluate(r + step).unwrap() - spec.evaluate(r - step).unwrap()) / (2.0 * step);
        assert!((fd - spec.radial_force(r).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn classify_examples() {
        let p = h(1.0, 1.0, 1.0).classify().unwrap();
        assert_eq!(p.category, Category::UpsilonEqualsKappa);
        assert!(!p.bounded_below);
        assert_eq!(p.origin_behavior, OriginBehavior::AttractiveSingular);
        assert!(p.minimum.is_none());

        let p = h(1.0, -1.0, 1.0).classify().unwrap();
        assert_eq!(p.category, Category::UpsilonEqualsMinusKappa);
        assert!(p.bounded_below);
        assert_eq!(p.origin_behavior, OriginBehavior::Finite);

        let p = h(1.0, -2.0, 1.0).classify().unwrap();
        assert_eq!(p.category, Category::UpsilonBelowMinusKappa);
        assert!(p.bounded_below);
        assert_eq!(p.origin_behavior, OriginBehavior::RepulsiveSingular);

        assert_eq!(h(1.0, 2.0, 1.0).classify().unwrap().category, Category::UpsilonAboveKappa);
        assert_eq!(h(1.0, 0.5, 1.0).classify().unwrap().category, Category::UpsilonBetweenZeroAndKappa);
        assert_eq!(h(1.0, 0.0, 1.0).classify().unwrap().category, Category::UpsilonZero);
        assert_eq!(h(1.0, -0.5, 1.0).classify().unwrap().category, Category::UpsilonBetweenMinusKappaAndZero);

        let well = PotentialSpec::exponential_well(1.0, 1.0).unwrap();
        assert!(matches!(well.classify(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn minimum_examples() {
        let m = h(1.0, -2.0, 1.0).minimum().unwrap();
        assert!((m.radius - 1.67835).abs() < 1e-5);
        assert!((m.value + 0.3733646).abs() < 1e-6);
        let stationarity = 2.0 * (-m.radius).exp() * (1.0 + m.radius) - 1.0;
        assert!(stationarity.abs() < 1e-12);

        let m = h(1.0, -1.0, 1.0).minimum().unwrap();
        assert_eq!(m.value, -1.0);
        assert_eq!(m.radius, 0.0);
        assert!(!m.attained);

        assert!(matches!(h(1.0, 0.5, 1.0).minimum(), Err(Error::Unbounded(_))));
    }

    #[test]
    fn minimum_against_dense_grid() {
        let spec = h(1.0, -2.0, 1.0);
        let n = 1_000_000;
        let grid_min = (1..=n)
            .map(|i| spec.evaluate(50.0 * i as f64 / n as f64).unwrap())
            .fold(f64::INFINITY, f64::min);
        let m = spec.minimum().unwrap();
        assert!((grid_min - m.value).abs() < 1e-6);
        assert!(grid_min >= m.value - 1e-12);
    }

    #[test]
    fn profile_samples_examples() {
        let spec = h(1.0, 1.0, 1.0);
        let s = spec.profile_samples(0.01, 10.0, 2).unwrap();
        assert_eq!(s[0], (0.01, spec.evaluate(0.01).unwrap()));
        assert_eq!(s[1], (10.0, spec.evaluate(10.0).unwrap()));

        let s = spec.profile_samples(0.01, 10.0, 50).unwrap();
        assert!(s.iter().all(|&(_, v)| v < 0.0));
        assert!(s.windows(2).all(|w| w[0].1 < w[1].1));

        let s = h(1.0, -2.0, 1.0).profile_samples(0.01, 20.0, 100).unwrap();
        assert!(s[0].1 > 0.0);
        assert!(s.last().unwrap().1 < 0.0);

        assert!(spec.profile_samples(0.0, 1.0, 10).is_err());
        assert!(spec.profile_samples(2.0, 1.0, 10).is_err());
        assert!(spec.profile_samples(0.1, 1.0, 1).is_err());
    }
}
