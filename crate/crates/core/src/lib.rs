//! Rigorous two-sided spectral information for the spinless Salpeter
//! Hamiltonian `H = sqrt(p^2 + m1^2) + sqrt(p^2 + m2^2) + V(r)`.
//!
//! * [`spectra`]: Rayleigh–Ritz upper bounds in a generalized-Laguerre basis.
//! * [`bounds`]: analytic lower bounds and the bound-state counting bound.
//! * [`potentials`]: generalized Hellmann potentials and their classification.
//! * [`diagnostics`]: relativistic virial-theorem residuals.
//! * [`basis`], [`operators`], [`numerics`]: the trial basis, its matrix
//!   elements and the special functions and quadratures behind them.

// Domain checks are written as `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bounds;
pub mod diagnostics;
pub mod error;
pub mod numerics;
pub mod operators;
pub mod potentials;
pub mod spectra;

pub use basis::{RadialState, TrialBasis};
pub use bounds::{BoundMode, BoundsReport, CountReport, LowerBoundMethod};
pub use diagnostics::VirialReport;
pub use error::{Error, Result};
pub use operators::{KineticQuadrature, MassConfig, OperatorMatrix};
pub use potentials::{Category, OriginBehavior, PotentialProfile, PotentialSpec};
pub use spectra::{BindingEntry, OptimizationOutcome, ParamRange, Sector, SpectralResult};
