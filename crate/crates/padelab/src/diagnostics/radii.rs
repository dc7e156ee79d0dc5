//! Radii of meromorphy from coefficients and from telescope constants,
//! plus the classical ratio test.
//!
//! The m-pole radius is estimated through Hankel determinants
//! `D_m(n) = det [phi_{n+i+j}]_{i,j = 0..m}` via
//! `l_m = limsup_n |D_m(n)|^(1/n)` and `R_m = l_{m-1} / l_m`, with
//! `l_{-1} = 1`. The telescope radius R* is the reciprocal of
//! `limsup |A_n|^(1/n)` over nondegenerate telescope steps. Both use the
//! double estimator of [`super::rates`]; the regression value binds.

use crate::approximants::TelescopeStep;
use crate::scalar::{Backend, Scalar, C64};
use crate::series::PowerSeries;
use crate::tolerances::{cluster_radius, FABRY_TAIL_TOL};

use super::rates::{rate_estimate_ln, RateEstimate};
use super::{require_coeffs, DiagnosticsError};

/// A possibly-infinite radius. The infinite sentinel appears whenever the
/// underlying determinant or telescope stream decays faster than every
/// geometric rate (entire behavior) or vanishes identically (rational
/// behavior).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusValue {
    Finite(f64),
    Infinite,
}

impl RadiusValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            RadiusValue::Finite(v) => Some(v),
            RadiusValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RadiusValue::Infinite)
    }
}

impl std::fmt::Display for RadiusValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RadiusValue::Finite(v) => write!(f, "{}", crate::scalar::fmt_f64(*v)),
            RadiusValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Ratio test report: `r_n = phi_n / phi_{n+1}`.
#[derive(Debug, Clone)]
pub struct FabryReport {
    /// `(n, phi_n / phi_{n+1})`; `None` marks a vanishing `phi_{n+1}`.
    pub ratios: Vec<(usize, Option<C64>)>,
    pub undefined: usize,
    pub verdict: FabryVerdict,
}

#[derive(Debug, Clone)]
pub enum FabryVerdict {
    /// Ratios settled (Cauchy diameter of the tail below tolerance); the
    /// limit locates a singularity on the boundary circle |z| = |zeta|.
    Limit { zeta: C64, spread: f64 },
    /// Ratio moduli grow without settling: the coefficients decay faster
    /// than every geometric rate (an R_0 = infinity signal).
    Divergent,
    /// No stable limit: gaps, oscillation, or a zero limit.
    None,
}

/// Ratio test over `phi_0 .. phi_{n_terms}`: ratios `r_n` for
/// `n < n_terms`, verdict from the last `ceil(n_terms/4)` of them with a
/// Cauchy-tail tolerance.
pub fn fabry(f: &PowerSeries, n_terms: usize) -> Result<FabryReport, DiagnosticsError> {
    if n_terms < 10 {
        return Err(DiagnosticsError::TooFewPoints {
            found: n_terms,
            need: 10,
        });
    }
    require_coeffs(f, n_terms)?;
    let phi = f.coeffs_upto(n_terms);
    let mut ratios = Vec::with_capacity(n_terms);
    let mut undefined = 0;
    for n in 0..n_terms {
        if phi[n + 1].is_zero() {
            ratios.push((n, None));
            undefined += 1;
        } else {
            ratios.push((n, Some((&phi[n] / &phi[n + 1]).to_c64())));
        }
    }

    let tail_len = n_terms.div_ceil(4);
    let tail = &ratios[ratios.len() - tail_len..];
    let verdict = if tail.iter().any(|(_, r)| r.is_none()) {
        FabryVerdict::None
    } else {
        let vals: Vec<C64> = tail.iter().map(|&(_, r)| r.unwrap()).collect();
        let mean = vals.iter().sum::<C64>() / vals.len() as f64;
        let mut spread = 0.0f64;
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                spread = spread.max((vals[i] - vals[j]).norm());
            }
        }
        if spread <= FABRY_TAIL_TOL * mean.norm().max(1.0) {
            if mean.norm() <= FABRY_TAIL_TOL {
                // A zero ratio limit carries no boundary location.
                FabryVerdict::None
            } else {
                FabryVerdict::Limit { zeta: mean, spread }
            }
        } else {
            let defined: Vec<(usize, C64)> = ratios
                .iter()
                .filter_map(|&(n, r)| r.map(|v| (n, v)))
                .collect();
            if diverging(&defined) {
                FabryVerdict::Divergent
            } else {
                FabryVerdict::None
            }
        }
    };
    Ok(FabryReport {
        ratios,
        undefined,
        verdict,
    })
}

/// Polynomial growth of the ratio moduli (slope of `ln|r|` against
/// `ln(n+1)` clearly positive, last modulus well above the first).
fn diverging(defined: &[(usize, C64)]) -> bool {
    if defined.len() < 4 {
        return false;
    }
    let xs: Vec<f64> = defined.iter().map(|&(n, _)| ((n + 1) as f64).ln()).collect();
    let ys: Vec<f64> = defined.iter().map(|&(_, r)| r.norm().ln()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return false;
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    let slope = if den == 0.0 { 0.0 } else { num / den };
    slope > 0.25 && defined.last().unwrap().1.norm() > 2.0 * defined[0].1.norm()
}

/// Determinant by Gaussian elimination with magnitude pivoting; exact for
/// the exact backend, value-based for the float backend.
#[allow(clippy::needless_range_loop)] // index loops keep the row mutation legible
fn det(mut m: Vec<Vec<Scalar>>, backend: Backend) -> Scalar {
    let k = m.len();
    let mut acc = backend.one();
    for col in 0..k {
        let pivot = (col..k)
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| {
                m[a][col]
                    .ln_abs()
                    .partial_cmp(&m[b][col].ln_abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(pivot) = pivot else {
            return backend.zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            acc = acc.neg();
        }
        acc = &acc * &m[col][col];
        let prow = m[col].clone();
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &prow[col];
            for c in col + 1..k {
                let sub = &factor * &prow[c];
                let updated = &m[r][c] - &sub;
                m[r][c] = updated;
            }
        }
    }
    acc
}

/// `det [phi_{n+i+j}]_{i,j = 0..=level}`.
fn hankel_det(phi: &[Scalar], n: usize, level: usize, backend: Backend) -> Scalar {
    let size = level + 1;
    let m: Vec<Vec<Scalar>> = (0..size)
        .map(|i| (0..size).map(|j| phi[n + i + j].clone()).collect())
        .collect();
    det(m, backend)
}

/// Per-level determinant samples in log space; structurally-zero
/// determinants computed under the float backend land at roundoff scale,
/// so anything below `(size! * max_entry^size) * cluster_radius` is
/// treated as zero rather than fed to the limsup estimator.
fn det_samples(
    phi: &[Scalar],
    level: usize,
    n_samples: usize,
    backend: Backend,
) -> (Vec<(usize, f64)>, usize) {
    let mut points = Vec::with_capacity(n_samples + 1);
    let mut zeros = 0;
    for n in 0..=n_samples {
        let d = hankel_det(phi, n, level, backend);
        if d.is_zero() {
            zeros += 1;
            continue;
        }
        let ln = d.ln_abs();
        if let Backend::Float { digits } = backend {
            let size = (level + 1) as f64;
            let max_entry = (0..=level * 2)
                .map(|k| phi[n + k].ln_abs())
                .fold(f64::NEG_INFINITY, f64::max);
            let bound = size * max_entry
                + (1..=level + 1).map(|i| (i as f64).ln()).sum::<f64>()
                + cluster_radius(digits).ln();
            if ln < bound {
                zeros += 1;
                continue;
            }
        }
        points.push((n, ln));
    }
    (points, zeros)
}

#[derive(Debug, Clone)]
pub struct HadamardEstimate {
    pub m: usize,
    pub n_samples: usize,
    /// Binding estimate (regression ratio `l_{m-1} / l_m`).
    pub radius: RadiusValue,
    /// Windowed-max counterpart, reported for comparison.
    pub radius_windowed: RadiusValue,
    /// Limsup estimate of the size-m determinants (`None` for m = 0,
    /// where `l_{-1} = 1` exactly).
    pub ell_lower: Option<RateEstimate>,
    pub ell_m: RateEstimate,
    /// Size-(m+1) determinant samples that vanished.
    pub zero_determinants: usize,
}

/// Hankel-determinant estimate of the m-pole meromorphy radius from the
/// coefficients of `f`, sampling determinants at `n = 0 ..= n_samples`
/// (touching coefficients through `n_samples + 2m`).
pub fn hadamard_radius(
    f: &PowerSeries,
    m: usize,
    n_samples: usize,
    window: usize,
) -> Result<HadamardEstimate, DiagnosticsError> {
    if n_samples < 8 {
        return Err(DiagnosticsError::TooFewPoints {
            found: n_samples,
            need: 8,
        });
    }
    require_coeffs(f, n_samples + 2 * m)?;
    let backend = f.backend();
    let phi = f.coeffs_upto(n_samples + 2 * m);

    let (lower_fit, lower_tail, ell_lower) = if m == 0 {
        (1.0, 1.0, None)
    } else {
        let (points, _zeros) = det_samples(&phi, m - 1, n_samples, backend);
        if points.is_empty() {
            return Err(DiagnosticsError::DegenerateHankel { level: m - 1 });
        }
        let est = rate_estimate_ln(&points, window);
        (est.fit_estimate, est.tail_estimate, Some(est))
    };

    let (points_m, zeros_m) = det_samples(&phi, m, n_samples, backend);
    if points_m.is_empty() {
        // The size-(m+1) determinants vanish identically: f is rational
        // with at most m poles, so the m-pole radius is infinite.
        let ell_m = rate_estimate_ln(&[], window);
        return Ok(HadamardEstimate {
            m,
            n_samples,
            radius: RadiusValue::Infinite,
            radius_windowed: RadiusValue::Infinite,
            ell_lower,
            ell_m,
            zero_determinants: zeros_m,
        });
    }
    let ell_m = rate_estimate_ln(&points_m, window);

    let ratio = |upper: f64, lower: f64| -> RadiusValue {
        if ell_m.superexponential || lower <= 0.0 {
            RadiusValue::Infinite
        } else {
            RadiusValue::Finite(upper / lower)
        }
    };
    Ok(HadamardEstimate {
        m,
        n_samples,
        radius: ratio(lower_fit, ell_m.fit_estimate),
        radius_windowed: ratio(lower_tail, ell_m.tail_estimate),
        ell_lower,
        ell_m,
        zero_determinants: zeros_m,
    })
}

#[derive(Debug, Clone)]
pub struct RStarEstimate {
    /// Binding estimate (reciprocal of the regression limsup of
    /// `|A_n|^(1/n)`).
    pub radius: RadiusValue,
    pub radius_windowed: RadiusValue,
    /// Rate data of the `|A_n|` stream itself.
    pub rate: RateEstimate,
    pub nondegenerate: usize,
    pub degenerate: usize,
}

/// Reciprocal limsup of the telescope constants. A tail of ten or more
/// consecutive degenerate steps is the rational signature and yields the
/// infinite sentinel; otherwise at least ten nondegenerate entries are
/// required.
pub fn estimate_r_star(
    steps: &[TelescopeStep],
    window: usize,
) -> Result<RStarEstimate, DiagnosticsError> {
    let degenerate = steps.iter().filter(|s| s.degenerate).count();
    let nondeg: Vec<(usize, f64)> = steps
        .iter()
        .filter(|s| !s.degenerate)
        .map(|s| (s.n, s.a.ln_abs()))
        .collect();

    let tail_all_degenerate =
        steps.len() >= 10 && steps[steps.len() - 10..].iter().all(|s| s.degenerate);
    if tail_all_degenerate {
        return Ok(RStarEstimate {
            radius: RadiusValue::Infinite,
            radius_windowed: RadiusValue::Infinite,
            rate: rate_estimate_ln(&nondeg, window),
            nondegenerate: nondeg.len(),
            degenerate,
        });
    }
    if nondeg.len() < 10 {
        return Err(DiagnosticsError::TooFewNondegenerate {
            found: nondeg.len(),
            need: 10,
        });
    }
    let rate = rate_estimate_ln(&nondeg, window);
    let recip = |v: f64| -> RadiusValue {
        if rate.superexponential || v <= 0.0 {
            RadiusValue::Infinite
        } else {
            RadiusValue::Finite(1.0 / v)
        }
    };
    Ok(RStarEstimate {
        radius: recip(rate.fit_estimate),
        radius_windowed: recip(rate.tail_estimate),
        rate,
        nondegenerate: nondeg.len(),
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::roots::normalize_unit_disk;
    use crate::scalar::{CRat, Rat};
    use crate::series::{catalog_entire_exp, catalog_rational, RationalTerm};
    use num_bigint::BigInt;

    fn ex() -> Backend {
        Backend::Exact
    }

    fn crat(n: i64, d: i64) -> CRat {
        CRat::new(
            Rat::new(BigInt::from(n), BigInt::from(d)),
            Rat::new(BigInt::from(0), BigInt::from(1)),
        )
    }

    fn two_pole(a: i64, b: i64) -> PowerSeries {
        catalog_rational(
            ex(),
            vec![
                RationalTerm::simple(crat(1, 1), crat(a, 1)),
                RationalTerm::simple(crat(1, 1), crat(b, 1)),
            ],
            "two poles",
        )
    }

    #[test]
    fn fabry_geometric_limit() {
        let f = catalog_rational(
            ex(),
            vec![RationalTerm::simple(crat(1, 1), crat(2, 1))],
            "geometric",
        );
        let rep = fabry(&f, 40).unwrap();
        match rep.verdict {
            FabryVerdict::Limit { zeta, .. } => {
                assert!((zeta - C64::new(2.0, 0.0)).norm() < 1e-12)
            }
            ref v => panic!("expected a limit verdict, got {v:?}"),
        }
    }

    #[test]
    fn fabry_divergent_for_entire() {
        let f = catalog_entire_exp(ex(), crat(1, 1), "exp");
        let rep = fabry(&f, 60).unwrap();
        assert!(matches!(rep.verdict, FabryVerdict::Divergent));
    }

    #[test]
    fn fabry_none_on_parity_gaps() {
        // phi_n = 1 + (-1)^n: every other ratio is undefined.
        let coeffs: Vec<Scalar> = (0..=60)
            .map(|n| ex().from_int(if n % 2 == 0 { 2 } else { 0 }))
            .collect();
        let f = PowerSeries::from_coefficients(ex(), "parity", coeffs);
        let rep = fabry(&f, 60).unwrap();
        assert!(matches!(rep.verdict, FabryVerdict::None));
        assert!(rep.undefined > 0);
    }

    #[test]
    fn hadamard_level_zero_and_one_for_two_poles() {
        // Poles at 1 and 2: R_0 = 1, R_1 = 2, and the size-2 determinants
        // are exactly 2^(-n-3).
        let f = two_pole(1, 2);
        let r0 = hadamard_radius(&f, 0, 40, 15).unwrap();
        assert!((r0.radius.finite().unwrap() - 1.0).abs() < 0.02);
        let r1 = hadamard_radius(&f, 1, 40, 15).unwrap();
        assert!((r1.radius.finite().unwrap() - 2.0).abs() < 0.02);
    }

    #[test]
    fn hadamard_infinite_and_degenerate_levels() {
        let f = two_pole(1, 2);
        // Size-3 determinants vanish identically: R_2 = infinity.
        let r2 = hadamard_radius(&f, 2, 30, 10).unwrap();
        assert!(r2.radius.is_infinite());
        assert!(r2.zero_determinants > 0);
        // Size-3 and size-4 both vanish: 0/0, reported not guessed.
        assert!(matches!(
            hadamard_radius(&f, 3, 30, 10),
            Err(DiagnosticsError::DegenerateHankel { level: 2 })
        ));
    }

    #[test]
    fn hadamard_entire_gives_infinite_sentinel() {
        let f = catalog_entire_exp(ex(), crat(1, 1), "exp");
        let r0 = hadamard_radius(&f, 0, 60, 15).unwrap();
        assert!(r0.radius.is_infinite());
        assert!(r0.ell_m.superexponential);
    }

    #[test]
    fn hadamard_float_backend_thresholds_structural_zeros() {
        let fl = Backend::Float { digits: 30 };
        let f = catalog_rational(
            fl,
            vec![
                RationalTerm::simple(crat(1, 1), crat(1, 1)),
                RationalTerm::simple(crat(1, 1), crat(2, 1)),
            ],
            "two poles",
        );
        let r2 = hadamard_radius(&f, 2, 30, 10).unwrap();
        assert!(r2.radius.is_infinite());
    }

    fn synthetic_step(n: usize, a: Scalar, degenerate: bool) -> TelescopeStep {
        TelescopeStep {
            n,
            power: n + 1,
            a,
            qstar: normalize_unit_disk(&Polynomial::one(ex()), 30).unwrap(),
            degenerate,
            exact: true,
        }
    }

    #[test]
    fn r_star_recovers_synthetic_geometric_constant() {
        let steps: Vec<TelescopeStep> = (1..=40)
            .map(|n| {
                let a = ex().from_int(2).pow_usize(n).inv();
                synthetic_step(n, a, false)
            })
            .collect();
        let est = estimate_r_star(&steps, 15).unwrap();
        assert!((est.radius.finite().unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(est.degenerate, 0);
    }

    #[test]
    fn r_star_all_degenerate_is_infinite() {
        let steps: Vec<TelescopeStep> = (1..=12)
            .map(|n| synthetic_step(n, ex().zero(), true))
            .collect();
        let est = estimate_r_star(&steps, 5).unwrap();
        assert!(est.radius.is_infinite());
    }

    #[test]
    fn r_star_too_few_entries_errors() {
        let steps: Vec<TelescopeStep> = (1..=5)
            .map(|n| synthetic_step(n, ex().one(), false))
            .collect();
        assert!(matches!(
            estimate_r_star(&steps, 5),
            Err(DiagnosticsError::TooFewNondegenerate { found: 5, .. })
        ));
    }
}
