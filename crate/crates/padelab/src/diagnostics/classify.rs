//! Classification of denominator-zero clusters.
//!
//! Each stable cluster limit is sorted into one of four bins:
//!
//! - `QstarAttracted`: the limit tracks a zero of the telescope cofactor
//!   q* along the contact indices of the regularized majorant. Such zeros
//!   are artifacts of the surplus denominator degree, not evidence about
//!   the approximated function, so this test runs first.
//! - `Pole { order }`: the limit sits strictly inside the meromorphy
//!   radius estimate (relative margin excluded), where a persistent zero
//!   cluster of the row can only be a pole; the observed cluster size is
//!   its order.
//! - `BoundarySingularity`: the limit sits on the estimated boundary
//!   circle, within the margin.
//! - `Undecided`: outside the justified region, or no radius to compare
//!   against.

use crate::approximants::TelescopeStep;
use crate::scalar::C64;

use super::radii::RadiusValue;
use super::trajectories::TrajectorySet;
use super::DiagnosticsError;

#[derive(Debug, Clone, PartialEq)]
pub enum SingularityClass {
    Pole { order: usize },
    BoundarySingularity,
    QstarAttracted,
    Undecided,
}

#[derive(Debug, Clone)]
pub struct SingularityEntry {
    pub location: C64,
    pub modulus: f64,
    pub class: SingularityClass,
    /// Observed cluster size (zeros captured per index, modal over the tail).
    pub lambda: usize,
    /// Tail-median distance from the limit to the nearest q* zero over the
    /// contact indices; `None` when no usable q* was available there.
    pub qstar_distance: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SingularityReport {
    /// One entry per cluster, in the cluster order of the trajectory set.
    pub entries: Vec<SingularityEntry>,
    pub r_star: RadiusValue,
    pub margin: f64,
    pub attract_tol: f64,
}

impl SingularityReport {
    pub fn poles(&self) -> impl Iterator<Item = &SingularityEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e.class, SingularityClass::Pole { .. }))
    }
}

/// Median of the last half (at least five, when available) of `values`.
fn tail_median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let keep = (values.len() / 2).max(5).min(values.len());
    let mut tail: Vec<f64> = values[values.len() - keep..].to_vec();
    tail.sort_by(|a, b| a.total_cmp(b));
    Some(tail[tail.len() / 2])
}

/// Classify every cluster of `traj` against the meromorphy-radius estimate
/// and the q* streams.
///
/// `contact` lists the indices where the regularized majorant touches the
/// telescope constants — the indices where the cofactor attraction result
/// applies; q* zeros are read from `steps` at those indices.
pub fn classify(
    traj: &TrajectorySet,
    r_star: &RadiusValue,
    contact: &[usize],
    steps: &[TelescopeStep],
    margin: f64,
    attract_tol: f64,
) -> Result<SingularityReport, DiagnosticsError> {
    if !(margin > 0.0 && margin < 0.5) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "classification margin must lie in (0, 0.5), got {margin}"
        )));
    }

    let mut entries = Vec::with_capacity(traj.clusters.len());
    for cluster in &traj.clusters {
        let mut dists: Vec<f64> = Vec::new();
        for &n in contact {
            let Some(step) = steps.iter().find(|s| s.n == n && !s.degenerate) else {
                continue;
            };
            let d = step
                .qstar
                .roots
                .roots
                .iter()
                .map(|r| (r.location - cluster.limit).norm())
                .fold(f64::INFINITY, f64::min);
            if d.is_finite() {
                dists.push(d);
            }
        }
        let qstar_distance = tail_median(&dists);

        let class = if qstar_distance.is_some_and(|d| d <= attract_tol) {
            SingularityClass::QstarAttracted
        } else {
            let modulus = cluster.limit.norm();
            match r_star {
                RadiusValue::Infinite => SingularityClass::Pole {
                    order: cluster.lambda,
                },
                RadiusValue::Finite(r) => {
                    if modulus < r * (1.0 - margin) {
                        SingularityClass::Pole {
                            order: cluster.lambda,
                        }
                    } else if (modulus - r).abs() <= margin * r {
                        SingularityClass::BoundarySingularity
                    } else {
                        SingularityClass::Undecided
                    }
                }
            }
        };

        entries.push(SingularityEntry {
            location: cluster.limit,
            modulus: cluster.limit.norm(),
            class,
            lambda: cluster.lambda,
            qstar_distance,
        });
    }

    Ok(SingularityReport {
        entries,
        r_star: *r_star,
        margin,
        attract_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::roots::normalize_unit_disk;
    use crate::scalar::Backend;
    use crate::tolerances::{CLASSIFY_MARGIN, DEFAULT_DIGITS, QSTAR_ATTRACT_TOL};

    use super::super::trajectories::track_zeros;
    use crate::roots::{RootEntry, RootSet};

    fn lists_at(points: &[(f64, f64)]) -> Vec<(usize, RootSet)> {
        (4..=20)
            .map(|n| {
                (
                    n,
                    RootSet {
                        roots: points
                            .iter()
                            .map(|&(re, im)| RootEntry {
                                location: C64::new(re + 0.5f64.powi(n as i32), im),
                                multiplicity: 1,
                                residual_bound: 0.0,
                            })
                            .collect(),
                    },
                )
            })
            .collect()
    }

    fn qstar_step(n: usize, root: f64) -> TelescopeStep {
        let b = Backend::Exact;
        // q(z) = z - root, normalized.
        let q = Polynomial::new(b, vec![b.from_c64(C64::new(-root, 0.0)), b.one()]);
        TelescopeStep {
            n,
            power: n + 1,
            a: b.one(),
            qstar: normalize_unit_disk(&q, DEFAULT_DIGITS).unwrap(),
            degenerate: false,
            exact: true,
        }
    }

    #[test]
    fn interior_boundary_and_outside_split_correctly() {
        let traj = track_zeros(&lists_at(&[(0.5, 0.0), (2.0, 0.0), (3.0, 0.0)]), 6).unwrap();
        let report = classify(
            &traj,
            &RadiusValue::Finite(2.0),
            &[],
            &[],
            CLASSIFY_MARGIN,
            QSTAR_ATTRACT_TOL,
        )
        .unwrap();
        assert_eq!(report.entries.len(), 3);
        assert_eq!(report.entries[0].class, SingularityClass::Pole { order: 1 });
        assert_eq!(
            report.entries[1].class,
            SingularityClass::BoundarySingularity
        );
        assert_eq!(report.entries[2].class, SingularityClass::Undecided);
        assert!(report.entries.iter().all(|e| e.qstar_distance.is_none()));
    }

    #[test]
    fn qstar_match_preempts_pole_verdict() {
        let traj = track_zeros(&lists_at(&[(1.7, 0.0)]), 6).unwrap();
        let steps: Vec<TelescopeStep> = (4..=20).map(|n| qstar_step(n, 1.7)).collect();
        let contact: Vec<usize> = (4..=20).collect();
        let report = classify(
            &traj,
            &RadiusValue::Finite(4.0),
            &contact,
            &steps,
            CLASSIFY_MARGIN,
            QSTAR_ATTRACT_TOL,
        )
        .unwrap();
        assert_eq!(report.entries[0].class, SingularityClass::QstarAttracted);
        assert!(report.entries[0].qstar_distance.unwrap() < QSTAR_ATTRACT_TOL);

        // Same geometry but the q* zeros sit far away: interior pole.
        let far: Vec<TelescopeStep> = (4..=20).map(|n| qstar_step(n, -3.0)).collect();
        let report = classify(
            &traj,
            &RadiusValue::Finite(4.0),
            &contact,
            &far,
            CLASSIFY_MARGIN,
            QSTAR_ATTRACT_TOL,
        )
        .unwrap();
        assert_eq!(report.entries[0].class, SingularityClass::Pole { order: 1 });
        assert!(report.entries[0].qstar_distance.unwrap() > 4.0);
    }

    #[test]
    fn infinite_radius_makes_every_cluster_a_pole() {
        let traj = track_zeros(&lists_at(&[(0.5, 0.0), (7.0, 0.0)]), 6).unwrap();
        let report = classify(
            &traj,
            &RadiusValue::Infinite,
            &[],
            &[],
            CLASSIFY_MARGIN,
            QSTAR_ATTRACT_TOL,
        )
        .unwrap();
        assert!(report
            .entries
            .iter()
            .all(|e| matches!(e.class, SingularityClass::Pole { order: 1 })));
    }

    #[test]
    fn bad_margin_is_rejected()  {
        let traj = track_zeros(&lists_at(&[(1.0, 0.0)]), 6).unwrap();
        assert!(classify(
            &traj,
            &RadiusValue::Finite(2.0),
            &[],
            &[],
            0.7,
            QSTAR_ATTRACT_TOL
        )
        .is_err());
    }
}
