//! Zero trajectories of a denominator row.
//!
//! Input: the refined zero sets of `q_n` over an index range. The zeros are
//! grouped into clusters around stable limit points; each cluster carries
//! the modal number of zeros it captures per index (its "order" seen from
//! the row) and the geometric rate at which its members approach the limit.

use crate::roots::RootSet;
use crate::scalar::C64;
use crate::tolerances::ZERO_MATCH_FACTOR;

use super::rates::{rate_estimate, RateEstimate};
use super::DiagnosticsError;

#[derive(Debug, Clone)]
pub struct ClusterTrack {
    /// Estimated limit point: the captured zero of the final list. Averaging
    /// earlier lists into the estimate would bias it by the mean tail
    /// distance whenever the zeros approach from one side, so the most
    /// converged single observation is used instead.
    pub limit: C64,
    /// `(n, zeros captured at n)`, counted with multiplicity; indices where
    /// the cluster captured nothing are absent.
    pub members_per_n: Vec<(usize, usize)>,
    /// Modal member count over the tail window — the observed order of the
    /// cluster. Ties break toward the most recent count.
    pub lambda: usize,
    /// `(n, max |zero - limit|)` over the captured zeros.
    pub distances: Vec<(usize, f64)>,
    /// Geometric rate of `max distance` per `n`; `None` when the cluster
    /// sits exactly on its limit throughout (every distance is zero).
    pub rate: Option<RateEstimate>,
}

#[derive(Debug, Clone)]
pub struct TrajectorySet {
    /// Clusters ordered by (modulus of limit, argument of limit).
    pub clusters: Vec<ClusterTrack>,
    /// Zeros not captured by any cluster, as `(n, location)`.
    pub unmatched: Vec<(usize, C64)>,
    /// Capture radius used for the assignment.
    pub threshold: f64,
    /// Indices present in the input, ascending.
    pub ns: Vec<usize>,
}

impl TrajectorySet {
    /// The cluster whose limit is nearest to `z`, with its distance.
    pub fn nearest_cluster(&self, z: C64) -> Option<(usize, f64)> {
        self.clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (c.limit - z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Group the zeros of a denominator row into limit clusters.
///
/// Cluster centers are the zeros of the last list. The capture radius is a
/// fixed fraction of the smallest center separation (or of the center
/// modulus when there is a single center), so well-separated limits are
/// never merged. `window` is forwarded to the per-cluster rate estimator.
pub fn track_zeros(
    lists: &[(usize, RootSet)],
    window: usize,
) -> Result<TrajectorySet, DiagnosticsError> {
    let mut lists: Vec<&(usize, RootSet)> = lists.iter().collect();
    lists.sort_by_key(|&&(n, _)| n);
    if lists.len() < 2 {
        return Err(DiagnosticsError::TooFewPoints {
            found: lists.len(),
            need: 2,
        });
    }
    let ns: Vec<usize> = lists.iter().map(|&&(n, _)| n).collect();

    let seeds: Vec<C64> = lists
        .last()
        .unwrap()
        .1
        .roots
        .iter()
        .map(|r| r.location)
        .collect();
    if seeds.is_empty() {
        return Err(DiagnosticsError::InvalidInput(
            "the final zero list is empty; nothing to track".into(),
        ));
    }

    let mut min_sep = f64::INFINITY;
    for i in 0..seeds.len() {
        for j in i + 1..seeds.len() {
            min_sep = min_sep.min((seeds[i] - seeds[j]).norm());
        }
    }
    let threshold = if seeds.len() == 1 {
        ZERO_MATCH_FACTOR * seeds[0].norm().max(1.0)
    } else {
        ZERO_MATCH_FACTOR * min_sep
    };
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(DiagnosticsError::InvalidInput(
            "coincident seeds in the final zero list; capture radius is zero".into(),
        ));
    }

    let centers = seeds;

    // Assign every zero of every list to its nearest center.
    let mut members: Vec<Vec<(usize, C64, usize)>> = vec![Vec::new(); centers.len()];
    let mut unmatched: Vec<(usize, C64)> = Vec::new();
    for &&(n, ref set) in &lists {
        for r in &set.roots {
            let (best, dist) = centers
                .iter()
                .enumerate()
                .map(|(i, c)| (i, (*c - r.location).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if dist <= threshold {
                members[best].push((n, r.location, r.multiplicity));
            } else {
                unmatched.push((n, r.location));
            }
        }
    }

    let mut clusters: Vec<ClusterTrack> = Vec::new();
    for (center, group) in centers.iter().zip(members) {
        if group.is_empty() {
            continue;
        }
        let mut per_n: Vec<(usize, usize)> = Vec::new();
        let mut distances: Vec<(usize, f64)> = Vec::new();
        for &n in &ns {
            let mut count = 0usize;
            let mut maxd = 0.0f64;
            for &(gn, loc, mult) in &group {
                if gn == n {
                    count += mult;
                    maxd = maxd.max((loc - *center).norm());
                }
            }
            if count > 0 {
                per_n.push((n, count));
                distances.push((n, maxd));
            }
        }
        let lambda = modal_tail_count(&per_n, window);
        let rate = if distances.iter().all(|&(_, d)| d == 0.0) {
            None
        } else {
            Some(rate_estimate(&distances, window))
        };
        clusters.push(ClusterTrack {
            limit: *center,
            members_per_n: per_n,
            lambda,
            distances,
            rate,
        });
    }
    clusters.sort_by(|a, b| {
        (a.limit.norm(), a.limit.arg())
            .partial_cmp(&(b.limit.norm(), b.limit.arg()))
            .unwrap()
    });
    unmatched.sort_by(|a, b| {
        (a.0, a.1.norm())
            .partial_cmp(&(b.0, b.1.norm()))
            .unwrap()
    });

    Ok(TrajectorySet {
        clusters,
        unmatched,
        threshold,
        ns,
    })
}

/// Most frequent member count over the last `window` entries; ties resolve
/// to the count observed most recently.
fn modal_tail_count(per_n: &[(usize, usize)], window: usize) -> usize {
    let tail = &per_n[per_n.len().saturating_sub(window.max(1))..];
    let mut best = (0usize, 0usize, 0usize); // (frequency, latest n, count)
    let mut seen: Vec<usize> = Vec::new();
    for &(_, c) in tail {
        if seen.contains(&c) {
            continue;
        }
        seen.push(c);
        let freq = tail.iter().filter(|&&(_, tc)| tc == c).count();
        let latest = tail
            .iter()
            .filter(|&&(_, tc)| tc == c)
            .map(|&(n, _)| n)
            .max()
            .unwrap();
        if (freq, latest) > (best.0, best.1) {
            best = (freq, latest, c);
        }
    }
    best.2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::RootEntry;

    fn set(entries: &[(f64, f64, usize)]) -> RootSet {
        RootSet {
            roots: entries
                .iter()
                .map(|&(re, im, m)| RootEntry {
                    location: C64::new(re, im),
                    multiplicity: m,
                    residual_bound: 0.0,
                })
                .collect(),
        }
    }

    #[test]
    fn two_separated_streams_form_two_clusters() {
        let lists: Vec<(usize, RootSet)> = (4..=20)
            .map(|n| {
                let d = 0.3f64.powi(n as i32);
                (
                    n,
                    set(&[(1.0 + d, 0.0, 1), (3.0, 0.2 * 0.5f64.powi(n as i32), 1)]),
                )
            })
            .collect();
        let t = track_zeros(&lists, 8).unwrap();
        assert_eq!(t.clusters.len(), 2);
        assert!(t.unmatched.is_empty());
        assert!((t.clusters[0].limit - C64::new(1.0, 0.0)).norm() < 1e-4);
        assert!((t.clusters[1].limit - C64::new(3.0, 0.0)).norm() < 1e-4);
        assert_eq!(t.clusters[0].lambda, 1);
        let rate = t.clusters[0].rate.as_ref().unwrap();
        assert!((rate.fit_estimate - 0.3).abs() < 0.05);
    }

    #[test]
    fn double_zero_reports_order_two() {
        let lists: Vec<(usize, RootSet)> = (4..=16)
            .map(|n| {
                let d = 0.4f64.powi(n as i32);
                (n, set(&[(2.0 + d, d, 1), (2.0 - d, -d, 1), (5.0, 0.0, 1)]))
            })
            .collect();
        let t = track_zeros(&lists, 6).unwrap();
        // At the final index the pair is still two distinct refined roots,
        // so two seeds near 2 exist; they must not be merged with 5.
        let near_two: Vec<&ClusterTrack> = t
            .clusters
            .iter()
            .filter(|c| (c.limit - C64::new(2.0, 0.0)).norm() < 0.2)
            .collect();
        let total: usize = near_two.iter().map(|c| c.lambda).sum();
        assert_eq!(total, 2);
        assert!(t
            .clusters
            .iter()
            .any(|c| (c.limit - C64::new(5.0, 0.0)).norm() < 1e-9 && c.lambda == 1));
    }

    #[test]
    fn multiplicity_counts_toward_lambda() {
        let lists: Vec<(usize, RootSet)> = (3..=12)
            .map(|n| (n, set(&[(1.5, 0.0, 2), (-4.0, 0.0, 1)])))
            .collect();
        let t = track_zeros(&lists, 5).unwrap();
        let c = &t.clusters[0];
        assert!((c.limit - C64::new(1.5, 0.0)).norm() < 1e-12);
        assert_eq!(c.lambda, 2);
        assert!(c.rate.is_none());
    }

    #[test]
    fn far_outlier_lands_in_unmatched() {
        let mut lists: Vec<(usize, RootSet)> = (3..=12)
            .map(|n| (n, set(&[(1.0, 0.0, 1)])))
            .collect();
        lists[4].1.roots.push(RootEntry {
            location: C64::new(40.0, 0.0),
            multiplicity: 1,
            residual_bound: 0.0,
        });
        let t = track_zeros(&lists, 5).unwrap();
        assert_eq!(t.clusters.len(), 1);
        assert_eq!(t.unmatched.len(), 1);
        assert_eq!(t.unmatched[0].0, 7);
        assert!((t.unmatched[0].1 - C64::new(40.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn single_list_is_rejected() {
        let lists = vec![(5usize, set(&[(1.0, 0.0, 1)]))];
        assert!(matches!(
            track_zeros(&lists, 4),
            Err(DiagnosticsError::TooFewPoints { .. })
        ));
    }
}
