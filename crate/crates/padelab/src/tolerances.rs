//! Central numeric tolerances and default knobs.
//!
//! Every tolerance that shapes a verdict (root clustering, residual
//! acceptance, classification margins, tail tests) lives here with a short
//! justification, so experiments and tests pin the same constants instead of
//! scattering magic numbers.

/// Default working precision of the float backend, in decimal digits.
///
/// Pade-type linear systems are badly conditioned; 30 digits is the floor
/// below which Hankel determinants at n around 60 lose all signal to
/// cancellation.
pub const DEFAULT_DIGITS: u32 = 30;

/// Root multiplicity clustering radius is `10^(-digits/2)`.
///
/// Refined roots are accurate to roughly the working precision; a cluster
/// radius at half the working digits groups multiple roots reliably without
/// merging genuinely distinct ones.
pub fn cluster_radius(digits: u32) -> f64 {
    10f64.powf(-(digits as f64) / 2.0)
}

/// Residual acceptance threshold for order conditions under the float
/// backend: `10^(-digits/2)` times the scale of the inputs.
pub fn residual_tol(digits: u32) -> f64 {
    10f64.powf(-(digits as f64) / 2.0)
}

/// Common-factor detection under the float backend: roots of numerator and
/// denominator closer than `10^(-digits/4)` are treated as a shared factor.
/// Cancellation is exact in theory; the tolerance must sit well above the
/// root-finder error, hence a quarter of the working digits.
pub fn common_factor_tol(digits: u32) -> f64 {
    10f64.powf(-(digits as f64) / 4.0)
}

/// Cauchy-tail tolerance for the Fabry ratio verdict, applied over the last
/// quarter of the computed ratios.
pub const FABRY_TAIL_TOL: f64 = 1e-6;

/// Relative margin separating "interior pole" from "on the boundary" when a
/// zero cluster is classified against the R* estimate. Configurable per run.
pub const CLASSIFY_MARGIN: f64 = 0.05;

/// Zero-trajectory matching threshold, as a fraction of the minimal distance
/// between distinct cluster limits.
pub const ZERO_MATCH_FACTOR: f64 = 0.25;

/// A cluster counts as attracted by the telescope cofactor q* when the tail
/// median of its distance to the q* zeros, along the hull-contact indices,
/// falls below this.
pub const QSTAR_ATTRACT_TOL: f64 = 1e-2;

/// Windowed-limsup superexponential-decay detector: if the estimate over the
/// last window drops below this fraction of the previous window's estimate,
/// the sequence is treated as decaying faster than any geometric rate.
pub const SUPEREXP_WINDOW_RATIO: f64 = 0.8;

/// Soft bounds on the tail ratios A*_n / A*_{n+1} of a regularized sequence
/// after rescaling the stream to unit geometric rate (reported, not fatal).
pub const REGULARIZE_RATIO_LO: f64 = 0.8;
pub const REGULARIZE_RATIO_HI: f64 = 1.25;

/// Boundedness heuristic for the two sup-norm streams of the telescoping
/// bound check: flat means last-quarter max at most twice first-quarter max.
pub const BOUND_FLAT_FACTOR: f64 = 2.0;

/// Grid-scan location match: an instrument's estimate counts as evidence for
/// a target point when within this relative distance.
pub const SCAN_MATCH_TOL: f64 = 0.05;

/// Relative residual accepted when a written denominator row is reloaded
/// and its order conditions are re-evaluated in double precision. The
/// written coefficients are shortest round-trip decimals, so re-evaluation
/// noise sits at the f64 epsilon times the condition length (below 1e-13
/// for every practical row), while a genuinely wrong denominator moves the
/// relative residual to order one.
pub const ROW_ROUNDTRIP_TOL: f64 = 1e-9;

/// Minimum circle grid size accepted by sup-norm sampling.
pub const MIN_SUP_GRID: usize = 64;

/// Keep-out radius around detected poles for compact evaluation sets.
pub const POLE_KEEPOUT: f64 = 0.1;

#[cfg(test)]
// The whole point of these tests is pinning the constants' admissible
// ranges, so assertions on constants are intended.
#[allow(clippy::assertions_on_constants)]
mod tests {
    use super::*;

    #[test]
    fn scales_are_ordered() {
        // The common-factor tolerance must be looser than clustering, which
        // in turn must be looser than the refinement accuracy it groups.
        let d = DEFAULT_DIGITS;
        assert!(common_factor_tol(d) > cluster_radius(d));
        assert!(cluster_radius(d) > 10f64.powi(-(d as i32)));
        assert!(residual_tol(d) > 0.0);
    }

    #[test]
    fn default_digits_meet_floor() {
        assert!(DEFAULT_DIGITS >= 30);
    }

    #[test]
    fn verdict_constants_positive() {
        assert!(FABRY_TAIL_TOL > 0.0);
        assert!(CLASSIFY_MARGIN > 0.0 && CLASSIFY_MARGIN < 0.5);
        assert!(ZERO_MATCH_FACTOR > 0.0 && ZERO_MATCH_FACTOR < 1.0);
        assert!(QSTAR_ATTRACT_TOL > 0.0);
        assert!(REGULARIZE_RATIO_LO < 1.0 && 1.0 < REGULARIZE_RATIO_HI);
        assert!(BOUND_FLAT_FACTOR >= 1.0);
    }
}
