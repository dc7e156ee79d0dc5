//! Log-concave majorants of the telescope constant stream.
//!
//! The input is `ln |A_n|` for the usable (nonzero) telescope constants,
//! already rescaled by the caller so that `limsup |A_n|^(1/n) = 1`. With
//! `u_n = ln|A_n| - ln n!`, the regularized sequence is
//! `A*_n = n! * exp(u_hat_n)` where `u_hat` is the least concave majorant
//! of the points `(n, u_n)` — the upper convex hull, interpolated linearly
//! between vertices. The contact set Lambda collects the indices where the
//! majorant touches the data.
//!
//! Construction and property checks run in exact rational arithmetic on
//! the (exactly converted) f64 inputs, so concavity, majorization, and
//! contact are certified exactly for the data as given, not up to a second
//! rounding.

use num_bigint::BigInt;

use crate::approximants::TelescopeStep;
use crate::scalar::{f64_to_rat, rat_to_f64, Rat};
use crate::tolerances::{REGULARIZE_RATIO_HI, REGULARIZE_RATIO_LO};

use super::DiagnosticsError;

#[derive(Debug, Clone)]
pub struct RegularizedSequence {
    /// Indices of the usable entries, ascending.
    pub ns: Vec<usize>,
    /// `ln |A_n|` as provided.
    pub ln_a: Vec<f64>,
    /// `u_n = ln|A_n| - ln n!`.
    pub u: Vec<f64>,
    /// Least concave majorant of `u` at the same indices.
    pub u_hat: Vec<f64>,
    /// `A*_n = n! * exp(u_hat_n)`.
    pub a_star: Vec<f64>,
    /// Contact indices: `n` with `u_hat_n = u_n` exactly.
    pub lambda: Vec<usize>,
    /// Tail ratios `A*_n / A*_{n+1}` all inside the soft window (reported,
    /// never asserted: the underlying property is asymptotic).
    pub check_i: bool,
    /// Slopes of `u_hat` nonincreasing (log-concavity after the `n!`
    /// shift); exact by construction.
    pub check_ii: bool,
    /// `|A_n| <= A*_n` at every index; exact by construction.
    pub check_iii: bool,
    /// Equality on a nonempty contact set; exact by construction.
    pub check_iv: bool,
    /// Observed (min, max) of the tail ratios behind `check_i`.
    pub tail_ratio_range: (f64, f64),
}

pub(crate) fn ln_factorials(upto: usize) -> Vec<f64> {
    let mut lnf = vec![0.0f64; upto + 1];
    for k in 1..=upto {
        lnf[k] = lnf[k - 1] + (k as f64).ln();
    }
    lnf
}

/// `(xb-xa)(yc-ya) - (yb-ya)(xc-xa)`: positive for a left turn.
fn cross(a: &(Rat, Rat), b: &(Rat, Rat), c: &(Rat, Rat)) -> Rat {
    &(&(&b.0 - &a.0) * &(&c.1 - &a.1)) - &(&(&b.1 - &a.1) * &(&c.0 - &a.0))
}

/// Regularize a stream of `(n, ln|A_n|)` points (zeros and degenerate
/// entries must already be excluded; indices must be distinct).
pub fn regularize_ln(points: &[(usize, f64)]) -> Result<RegularizedSequence, DiagnosticsError> {
    let mut pts: Vec<(usize, f64)> = points
        .iter()
        .copied()
        .filter(|&(_, v)| v.is_finite())
        .collect();
    pts.sort_by_key(|&(n, _)| n);
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(DiagnosticsError::InvalidInput(
            "duplicate indices in the regularization stream".into(),
        ));
    }
    if pts.len() < 3 {
        return Err(DiagnosticsError::TooFewPoints {
            found: pts.len(),
            need: 3,
        });
    }

    let ns: Vec<usize> = pts.iter().map(|&(n, _)| n).collect();
    let ln_a: Vec<f64> = pts.iter().map(|&(_, v)| v).collect();
    let lnf = ln_factorials(*ns.last().unwrap());
    let u: Vec<f64> = pts.iter().map(|&(n, v)| v - lnf[n]).collect();

    // Exact-rational mirror of the data.
    let rx: Vec<Rat> = ns
        .iter()
        .map(|&n| Rat::from_integer(BigInt::from(n)))
        .collect();
    let ry: Vec<Rat> = u
        .iter()
        .map(|&v| f64_to_rat(v).expect("finite by the filter above"))
        .collect();

    // Upper convex hull, left to right: pop while the middle point does
    // not make a strict right turn. Collinear points are popped from the
    // vertex stack but still touch the interpolated majorant, so contact
    // is decided by exact equality below, not by stack membership.
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..rx.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let c = cross(
                &(rx[a].clone(), ry[a].clone()),
                &(rx[b].clone(), ry[b].clone()),
                &(rx[i].clone(), ry[i].clone()),
            );
            if c >= Rat::from_integer(BigInt::from(0)) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    // Interpolate the majorant at every index, exactly.
    let mut u_hat_rat: Vec<Rat> = Vec::with_capacity(rx.len());
    let mut seg = 0usize;
    for i in 0..rx.len() {
        while seg + 1 < hull.len() && rx[hull[seg + 1]] < rx[i] {
            seg += 1;
        }
        let a = hull[seg];
        let b = hull[(seg + 1).min(hull.len() - 1)];
        let v = if a == i || b == a {
            ry[i].clone()
        } else {
            let t = &(&rx[i] - &rx[a]) / &(&rx[b] - &rx[a]);
            &ry[a] + &(&t * &(&ry[b] - &ry[a]))
        };
        u_hat_rat.push(v);
    }

    // Certified properties of the construction.
    let zero = Rat::from_integer(BigInt::from(0));
    let check_iii = u_hat_rat
        .iter()
        .zip(&ry)
        .all(|(hat, y)| hat >= y);
    assert!(check_iii, "hull failed to majorize its own input");
    let mut check_ii = true;
    for w in 0..u_hat_rat.len().saturating_sub(2) {
        let s1 = &(&u_hat_rat[w + 1] - &u_hat_rat[w]) / &(&rx[w + 1] - &rx[w]);
        let s2 = &(&u_hat_rat[w + 2] - &u_hat_rat[w + 1]) / &(&rx[w + 2] - &rx[w + 1]);
        if s2 > s1 {
            check_ii = false;
        }
    }
    assert!(check_ii, "hull slopes must be nonincreasing");
    let lambda: Vec<usize> = (0..rx.len())
        .filter(|&i| &u_hat_rat[i] - &ry[i] == zero)
        .map(|i| ns[i])
        .collect();
    let check_iv = !lambda.is_empty();
    assert!(check_iv, "hull must touch its input somewhere");

    let u_hat: Vec<f64> = u_hat_rat.iter().map(rat_to_f64).collect();
    let a_star: Vec<f64> = ns
        .iter()
        .zip(&u_hat)
        .map(|(&n, &hat)| (lnf[n] + hat).exp())
        .collect();

    // Soft tail property: consecutive A* ratios near 1 over the last
    // quarter of the stream.
    let tail_start = ns.len() - (ns.len() / 4).max(2).min(ns.len() - 1);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in tail_start..ns.len() - 1 {
        let ratio = ((lnf[ns[i]] + u_hat[i]) - (lnf[ns[i + 1]] + u_hat[i + 1])).exp();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    let check_i = lo >= REGULARIZE_RATIO_LO && hi <= REGULARIZE_RATIO_HI;

    Ok(RegularizedSequence {
        ns,
        ln_a,
        u,
        u_hat,
        a_star,
        lambda,
        check_i,
        check_ii,
        check_iii,
        check_iv,
        tail_ratio_range: (lo, hi),
    })
}

/// Rescale the telescope constants by the estimated R* (so the limsup of
/// `|A_n|^(1/n)` is 1) and regularize: the stream is
/// `(n, ln|A_n| + n ln R*)` over nondegenerate steps.
pub fn regularize_from_telescopes(
    steps: &[TelescopeStep],
    r_star: f64,
) -> Result<RegularizedSequence, DiagnosticsError> {
    if !(r_star.is_finite() && r_star > 0.0) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "R* rescale factor must be finite and positive, got {r_star}"
        )));
    }
    let points: Vec<(usize, f64)> = steps
        .iter()
        .filter(|s| !s.degenerate)
        .map(|s| (s.n, s.a.ln_abs() + s.n as f64 * r_star.ln()))
        .collect();
    regularize_ln(&points)
}
