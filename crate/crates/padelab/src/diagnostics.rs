//! Inverse-theory instruments.
//!
//! Everything here consumes finished approximant records or raw Taylor
//! coefficients and produces *estimates with declared estimators*: radii of
//! meromorphy (Hankel determinants, telescope constants), geometric
//! convergence rates, Fabry-type ratio verdicts, regularized majorant
//! sequences, zero-trajectory clustering and classification, polynomial
//! independence certificates, and combination scans for system poles.
//!
//! Limits and limsups are never finitely computable; each estimator reports
//! both a windowed tail statistic and a log-linear regression, and verdicts
//! state which one binds. Degenerate entries (exact zeros, skipped indices)
//! are excluded and counted, never silently interpolated.

pub mod bounds;
pub mod classify;
pub mod independence;
pub mod radii;
pub mod rates;
pub mod regularize;
pub mod scan;
pub mod trajectories;

pub use bounds::{lemma_bound_check, BoundReport};
pub use classify::{classify, SingularityClass, SingularityEntry, SingularityReport};
pub use independence::{polynomial_independence, IndependenceReport};
pub use radii::{
    estimate_r_star, fabry, hadamard_radius, FabryReport, FabryVerdict, HadamardEstimate,
    RStarEstimate, RadiusValue,
};
pub use rates::{rate_estimate, rate_estimate_ln, sup_error_rate, theta, RateEstimate, RatePoint};
pub use regularize::{regularize_from_telescopes, regularize_ln, RegularizedSequence};
pub use scan::{projective_grid, system_pole_scan, ScanParams, ScanPointEvidence, ScanReport};
pub use trajectories::{track_zeros, ClusterTrack, TrajectorySet};

use crate::approximants::ApproxError;
use crate::scalar::C64;

#[derive(Debug)]
pub enum DiagnosticsError {
    /// Not enough usable data points for the requested estimator.
    TooFewPoints { found: usize, need: usize },
    /// Too few nondegenerate telescope entries to estimate R*.
    TooFewNondegenerate { found: usize, need: usize },
    /// Every sampled Hankel determinant at the named level vanished, so the
    /// radius ratio is 0/0 and no estimate is reported.
    DegenerateHankel { level: usize },
    InsufficientCoefficients { needed: usize, available: usize },
    /// A denominator in a rate comparison has the wrong degree.
    DegreeMismatch { at_n: usize, expected: isize, found: isize },
    EmptyGrid,
    /// The combination scan is restricted to multi-indices (1, ..., 1).
    NonUnitMultiIndex,
    /// The evaluation contour passes through an excluded pole neighborhood.
    KeepoutViolation { location: C64 },
    InvalidInput(String),
    Approx(ApproxError),
    Numerical(String),
}

impl std::fmt::Display for DiagnosticsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiagnosticsError::TooFewPoints { found, need } => {
                write!(f, "too few usable points: {found} found, {need} needed")
            }
            DiagnosticsError::TooFewNondegenerate { found, need } => write!(
                f,
                "too few nondegenerate telescope entries: {found} found, {need} needed"
            ),
            DiagnosticsError::DegenerateHankel { level } => write!(
                f,
                "all sampled Hankel determinants of size {} vanished; the radius is undetermined",
                level + 1
            ),
            DiagnosticsError::InsufficientCoefficients { needed, available } => write!(
                f,
                "insufficient coefficients: need index {needed}, have 0..={available}"
            ),
            DiagnosticsError::DegreeMismatch {
                at_n,
                expected,
                found,
            } => write!(
                f,
                "denominator at n = {at_n} has degree {found}, limit has degree {expected}"
            ),
            DiagnosticsError::EmptyGrid => write!(f, "scan grid is empty"),
            DiagnosticsError::NonUnitMultiIndex => {
                write!(f, "combination scan requires the multi-index (1, ..., 1)")
            }
            DiagnosticsError::KeepoutViolation { location } => write!(
                f,
                "evaluation contour intersects the keep-out disk around {} + {}i",
                location.re, location.im
            ),
            DiagnosticsError::InvalidInput(m) => write!(f, "invalid input: {m}"),
            DiagnosticsError::Approx(e) => write!(f, "approximant construction failed: {e}"),
            DiagnosticsError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for DiagnosticsError {}

impl From<ApproxError> for DiagnosticsError {
    fn from(e: ApproxError) -> Self {
        DiagnosticsError::Approx(e)
    }
}

/// Availability guard shared by the coefficient-hungry estimators.
pub(crate) fn require_coeffs(
    f: &crate::series::PowerSeries,
    upto: usize,
) -> Result<(), DiagnosticsError> {
    match f.available() {
        Some(a) if a < upto => Err(DiagnosticsError::InsufficientCoefficients {
            needed: upto,
            available: a,
        }),
        _ => Ok(()),
    }
}
