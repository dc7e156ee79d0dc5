//! Grid scan for system poles and system singularities.
//!
//! A point `zeta` is a system singularity of `(f_1, ..., f_d)` when some
//! combination `c_1 f_1 + ... + c_d f_d` is analytic on `|z| < |zeta|` and
//! singular at `zeta`; it is a system pole (for the unit multi-index) when
//! some combination is meromorphic with a pole at `zeta` inside its second
//! convergence ring. Neither property can be read off one instrument, so
//! the scan walks a projective grid of combination coefficients and runs
//! three independent instruments per combination:
//!
//! - the m = 0 convergence radius plus the coefficient-ratio limit
//!   (singularity evidence: the combination is analytic up to `|zeta|` and
//!   its ratios point at `zeta` itself);
//! - the m = 1 denominator row (pole evidence: the single row zero
//!   stabilizes at `zeta`);
//! - the m = 1 convergence radius (ring evidence: the second radius lands
//!   on `|zeta|`, reported but never asserted as a pole).

use crate::approximants::pade;
use crate::scalar::{Backend, Scalar, C64};
use crate::series::{combine, SeriesSystem};
use crate::tolerances::{DEFAULT_DIGITS, SCAN_MATCH_TOL};

use super::radii::{fabry, hadamard_radius, FabryVerdict, RadiusValue};
use super::DiagnosticsError;

#[derive(Debug, Clone)]
pub struct ScanParams {
    /// Taylor samples for the Hadamard radii.
    pub n_samples: usize,
    /// Estimator window for the radii.
    pub window: usize,
    /// Inclusive `n` range of the m = 1 denominator row.
    pub row_range: (usize, usize),
    /// Relative match tolerance for every witness comparison.
    pub tol: f64,
    /// Terms used by the coefficient-ratio instrument.
    pub fabry_n: usize,
    /// Working precision for the row solves.
    pub digits: u32,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams {
            n_samples: 40,
            window: 10,
            row_range: (8, 24),
            tol: SCAN_MATCH_TOL,
            fabry_n: 60,
            digits: DEFAULT_DIGITS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanPointEvidence {
    /// Combination coefficients, as floats for reporting.
    pub coefficients: Vec<C64>,
    /// The combination vanished identically at the tested truncation.
    pub vanished: bool,
    /// m = 0 convergence radius of the combination.
    pub r0: Option<RadiusValue>,
    /// m = 1 convergence radius of the combination.
    pub r1: Option<RadiusValue>,
    /// Coefficient-ratio limit, when the verdict was a limit.
    pub fabry_zeta: Option<C64>,
    /// Stabilized zero of the m = 1 row, when the last two agree.
    pub row_root: Option<C64>,
    /// `r0` matches `|zeta|` and the ratio limit matches `zeta`.
    pub singularity_witness: bool,
    /// `row_root` matches `zeta`.
    pub pole_witness: bool,
    /// `r1` matches `|zeta|` (reported only).
    pub ring_witness: bool,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub zeta: C64,
    pub tol: f64,
    pub points: Vec<ScanPointEvidence>,
    pub any_singularity: bool,
    pub any_pole: bool,
    pub any_ring: bool,
}

impl ScanReport {
    pub fn singularity_points(&self) -> impl Iterator<Item = &ScanPointEvidence> {
        self.points.iter().filter(|p| p.singularity_witness)
    }
    pub fn pole_points(&self) -> impl Iterator<Item = &ScanPointEvidence> {
        self.points.iter().filter(|p| p.pole_witness)
    }
    pub fn ring_points(&self) -> impl Iterator<Item = &ScanPointEvidence> {
        self.points.iter().filter(|p| p.ring_witness)
    }
}

/// Projective coefficient grid for a `d`-component system: every tuple
/// whose first nonzero coordinate is 1, with the free coordinates running
/// over `{j/5 : j = -20..=19}`. For `d = 2` this is the 41-point grid
/// `(1, j/5)` plus `(0, 1)`.
pub fn projective_grid(backend: &Backend, d: usize) -> Result<Vec<Vec<Scalar>>, DiagnosticsError> {
    if d == 0 {
        return Err(DiagnosticsError::EmptyGrid);
    }
    let values: Vec<Scalar> = (-20..20)
        .map(|j| {
            let s = backend.from_int(j);
            let five = backend.from_int(5);
            &s * &five.inv()
        })
        .collect();
    let mut grid: Vec<Vec<Scalar>> = Vec::new();
    // lead = index of the first nonzero coordinate (set to 1).
    for lead in 0..d {
        let free = d - lead - 1;
        let mut combo = vec![0usize; free];
        loop {
            let mut point = vec![backend.zero(); lead];
            point.push(backend.one());
            for &ci in &combo {
                point.push(values[ci].clone());
            }
            grid.push(point);
            // Odometer over the free coordinates.
            let mut k = free;
            loop {
                if k == 0 {
                    break;
                }
                combo[k - 1] += 1;
                if combo[k - 1] < values.len() {
                    break;
                }
                combo[k - 1] = 0;
                k -= 1;
            }
            if free == 0 || (k == 0 && combo.iter().all(|&c| c == 0)) {
                break;
            }
        }
    }
    Ok(grid)
}

fn matches_rel(estimate: f64, target: f64, scale: f64, tol: f64) -> bool {
    (estimate - target).abs() <= tol * scale.max(1.0)
}

/// Scan the grid of combinations for evidence that `zeta` is a system
/// singularity or a system pole of `sys` with the unit multi-index.
pub fn system_pole_scan(
    sys: &SeriesSystem,
    m: &[usize],
    zeta: C64,
    grid: &[Vec<Scalar>],
    params: &ScanParams,
) -> Result<ScanReport, DiagnosticsError> {
    if m.len() != sys.d() || m.iter().any(|&mk| mk != 1) {
        return Err(DiagnosticsError::NonUnitMultiIndex);
    }
    if grid.is_empty() {
        return Err(DiagnosticsError::EmptyGrid);
    }
    if grid.iter().any(|p| p.len() != sys.d()) {
        return Err(DiagnosticsError::InvalidInput(
            "grid point dimension does not match the system".into(),
        ));
    }
    if params.row_range.0 < 2 || params.row_range.1 <= params.row_range.0 {
        return Err(DiagnosticsError::InvalidInput(
            "row range must be ascending and start at n >= 2".into(),
        ));
    }
    let target_mod = zeta.norm();

    let mut points = Vec::with_capacity(grid.len());
    for c in grid {
        let combined = combine(
            c.iter()
                .cloned()
                .zip(sys.components.iter().cloned())
                .collect(),
            "scan combination",
        );
        let coefficients: Vec<C64> = c.iter().map(|s| s.to_c64()).collect();

        // A combination that vanishes through the sampled truncation
        // carries no evidence at all.
        let vanished = (0..=params.n_samples + 2)
            .all(|k| combined.coeff(k).is_zero());
        if vanished {
            points.push(ScanPointEvidence {
                coefficients,
                vanished: true,
                r0: None,
                r1: None,
                fabry_zeta: None,
                row_root: None,
                singularity_witness: false,
                pole_witness: false,
                ring_witness: false,
            });
            continue;
        }

        let r0 = hadamard_radius(&combined, 0, params.n_samples, params.window)
            .map(|e| e.radius)
            .ok();
        let r1 = match hadamard_radius(&combined, 1, params.n_samples, params.window) {
            Ok(e) => Some(e.radius),
            // A identically-degenerate level means no second ring at this
            // truncation;  treated as unbounded, i.e. no ring evidence.
            Err(DiagnosticsError::DegenerateHankel { .. }) => Some(RadiusValue::Infinite),
            Err(_) => None,
        };
        let fabry_zeta = match fabry(&combined, params.fabry_n) {
            Ok(rep) => match rep.verdict {
                FabryVerdict::Limit { zeta, .. } => Some(zeta),
                _ => None,
            },
            Err(_) => None,
        };

        // m = 1 row: keep the zero of the last record if it agrees with
        // the one before it.
        let mut last_two: Vec<C64> = Vec::new();
        for n in params.row_range.0..=params.row_range.1 {
            let Ok(rec) = pade(&combined, n, 1, params.digits) else {
                continue;
            };
            if rec.q.degree() == 1 {
                let root = (rec.q.coeff(0).neg()).to_c64() / rec.q.coeff(1).to_c64();
                last_two.push(root);
                if last_two.len() > 2 {
                    last_two.remove(0);
                }
            }
        }
        let row_root = match last_two.as_slice() {
            [a, b] if (a - b).norm() <= params.tol * b.norm().max(1.0) => Some(*b),
            _ => None,
        };

        let singularity_witness = match (&r0, fabry_zeta) {
            (Some(RadiusValue::Finite(r)), Some(fz)) => {
                matches_rel(*r, target_mod, target_mod, params.tol)
                    && (fz - zeta).norm() <= params.tol * target_mod.max(1.0)
            }
            _ => false,
        };
        let pole_witness = row_root
            .is_some_and(|root| (root - zeta).norm() <= params.tol * target_mod.max(1.0));
        let ring_witness = matches!(&r1, Some(RadiusValue::Finite(r))
            if matches_rel(*r, target_mod, target_mod, params.tol));

        points.push(ScanPointEvidence {
            coefficients,
            vanished: false,
            r0,
            r1,
            fabry_zeta,
            row_root,
            singularity_witness,
            pole_witness,
            ring_witness,
        });
    }

    let any_singularity = points.iter().any(|p| p.singularity_witness);
    let any_pole = points.iter().any(|p| p.pole_witness);
    let any_ring = points.iter().any(|p| p.ring_witness);
    Ok(ScanReport {
        zeta,
        tol: params.tol,
        points,
        any_singularity,
        any_pole,
        any_ring,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CRat, Rat};
    use crate::series::{catalog_rational, RationalTerm};
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn crat(n: i64, d: i64) -> CRat {
        CRat::new(rat(n, d), rat(0, 1))
    }

    fn four_pole_system() -> SeriesSystem {
        let f1 = catalog_rational(
            Backend::Exact,
            vec![
                RationalTerm::simple(crat(1, 1), crat(1, 1)),
                RationalTerm::simple(crat(1, 1), crat(3, 1)),
            ],
            "1/(1-z)+1/(3-z)",
        );
        let f2 = catalog_rational(
            Backend::Exact,
            vec![
                RationalTerm::simple(crat(1, 1), crat(2, 1)),
                RationalTerm::simple(crat(1, 1), crat(4, 1)),
            ],
            "1/(2-z)+1/(4-z)",
        );
        SeriesSystem::new(vec![f1, f2], "four poles")
    }

    #[test]
    fn grid_has_41_points_for_two_components() {
        let grid = projective_grid(&Backend::Exact, 2).unwrap();
        assert_eq!(grid.len(), 41);
        // 40 points lead with 1; the closing point is (0, 1).
        assert!(grid[..40].iter().all(|p| {
            let lead = p[0].to_c64();
            (lead - C64::new(1.0, 0.0)).norm() == 0.0
        }));
        let last = grid.last().unwrap();
        assert!(last[0].is_zero());
        assert!((last[1].to_c64() - C64::new(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn pole_and_singularity_witnesses_at_one() {
        let sys = four_pole_system();
        let grid = projective_grid(&Backend::Exact, 2).unwrap();
        let params = ScanParams {
            n_samples: 24,
            fabry_n: 40,
            row_range: (6, 14),
            ..ScanParams::default()
        };
        let rep =
            system_pole_scan(&sys, &[1, 1], C64::new(1.0, 0.0), &grid, &params).unwrap();
        assert!(rep.any_singularity);
        assert!(rep.any_pole);
        // The generic point (1, 1/5) sees the nearest pole at 1.
        let generic = rep
            .points
            .iter()
            .find(|p| {
                (p.coefficients[0] - C64::new(1.0, 0.0)).norm() == 0.0
                    && (p.coefficients[1] - C64::new(0.2, 0.0)).norm() < 1e-12
            })
            .unwrap();
        assert!(generic.pole_witness);
        assert!(generic.singularity_witness);
    }

    #[test]
    fn witnesses_at_two_come_from_the_axis_point() {
        let sys = four_pole_system();
        let grid = projective_grid(&Backend::Exact, 2).unwrap();
        let params = ScanParams {
            n_samples: 24,
            fabry_n: 40,
            row_range: (6, 14),
            ..ScanParams::default()
        };
        let rep =
            system_pole_scan(&sys, &[1, 1], C64::new(2.0, 0.0), &grid, &params).unwrap();
        assert!(rep.any_singularity);
        assert!(rep.any_pole);
        for p in rep.pole_points() {
            // Only the combination that kills f1 can place its row zero
            // at 2: that is (0, 1).
            assert!(p.coefficients[0].norm() < 1e-12);
        }
    }

    #[test]
    fn ring_witness_at_three_needs_vanishing_second_coefficient() {
        let sys = four_pole_system();
        let grid = projective_grid(&Backend::Exact, 2).unwrap();
        let params = ScanParams {
            n_samples: 24,
            fabry_n: 40,
            row_range: (6, 14),
            ..ScanParams::default()
        };
        let rep =
            system_pole_scan(&sys, &[1, 1], C64::new(3.0, 0.0), &grid, &params).unwrap();
        assert!(!rep.any_singularity);
        assert!(!rep.any_pole);
        assert!(rep.any_ring);
        for p in rep.ring_points() {
            assert!(p.coefficients[1].norm() < 1e-12);
        }
    }

    #[test]
    fn non_unit_multi_index_is_rejected() {
        let sys = four_pole_system();
        let grid = projective_grid(&Backend::Exact, 2).unwrap();
        assert!(matches!(
            system_pole_scan(&sys, &[1, 2], C64::new(1.0, 0.0), &grid, &ScanParams::default()),
            Err(DiagnosticsError::NonUnitMultiIndex)
        ));
    }
}
