//! Geometric-rate estimation for positive sequences.
//!
//! Given samples `s_n > 0` the interesting quantity is usually
//! `limsup s_n^(1/n)`. Two estimators are always computed side by side:
//! a windowed maximum of the n-th roots over the last `window` usable
//! points (an upper-biased tail statistic), and the exponentiated slope of
//! a least-squares fit of `ln s_n` against `n` over the same window (the
//! binding estimate everywhere a verdict is needed). Divergence between the
//! two is itself a diagnostic and both are reported.

use crate::poly::Polynomial;
use crate::scalar::C64;
use crate::tolerances::SUPEREXP_WINDOW_RATIO;

use super::DiagnosticsError;

#[derive(Debug, Clone)]
pub struct RatePoint {
    pub n: usize,
    /// The raw sample `s_n` (clamped to f64 range when rebuilt from logs).
    pub value: f64,
    /// `s_n^(1/n)`.
    pub root: f64,
}

#[derive(Debug, Clone)]
pub struct RateEstimate {
    /// Number of trailing usable points both estimators were computed on.
    pub window: usize,
    /// Usable points, ascending in `n`; degenerate samples are excluded.
    pub per_n: Vec<RatePoint>,
    /// Windowed max of `s_n^(1/n)` over the last `window` usable points.
    pub tail_estimate: f64,
    /// Exponentiated least-squares slope of `ln s_n` vs `n`, same window.
    pub fit_estimate: f64,
    /// True when the n-th roots keep shrinking across thirds of the data,
    /// i.e. the sequence decays faster than every geometric rate and no
    /// finite `limsup s_n^(1/n) > 0` is being approached.
    pub superexponential: bool,
    /// Samples dropped because they were zero or not finite.
    pub skipped: usize,
}

impl RateEstimate {
    /// The all-zero input sentinel: every sample was degenerate, both
    /// estimates are reported as 0.
    fn zero_sentinel(window: usize, skipped: usize) -> Self {
        RateEstimate {
            window,
            per_n: Vec::new(),
            tail_estimate: 0.0,
            fit_estimate: 0.0,
            superexponential: false,
            skipped,
        }
    }
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Core estimator over log-space samples `(n, ln s_n)`.
///
/// Entries with `n = 0` or a non-finite log are counted as skipped. The
/// log-space form exists because Hankel determinants and telescope
/// constants routinely overflow or underflow f64 while their logarithms
/// stay perfectly representable.
pub fn rate_estimate_ln(points: &[(usize, f64)], window: usize) -> RateEstimate {
    let mut usable: Vec<(usize, f64)> = points
        .iter()
        .copied()
        .filter(|&(n, u)| n > 0 && u.is_finite())
        .collect();
    usable.sort_by_key(|&(n, _)| n);
    let skipped = points.len() - usable.len();
    if usable.is_empty() {
        return RateEstimate::zero_sentinel(window.max(1), skipped);
    }

    let per_n: Vec<RatePoint> = usable
        .iter()
        .map(|&(n, u)| RatePoint {
            n,
            value: u.exp(),
            root: (u / n as f64).exp(),
        })
        .collect();

    let w = window.clamp(1, usable.len());
    let tail = &per_n[per_n.len() - w..];
    let tail_estimate = tail.iter().map(|p| p.root).fold(0.0f64, f64::max);

    let fit_estimate = if w < 2 {
        tail_estimate
    } else {
        let xs: Vec<f64> = usable[usable.len() - w..]
            .iter()
            .map(|&(n, _)| n as f64)
            .collect();
        let ys: Vec<f64> = usable[usable.len() - w..].iter().map(|&(_, u)| u).collect();
        slope(&xs, &ys).exp()
    };

    // Sustained decay of the roots themselves across thirds of the data is
    // the signature of super-geometric decay (e.g. entire functions); a
    // plain geometric sequence with a large prefactor settles instead.
    let superexponential = if per_n.len() >= 9 {
        let t = per_n.len() / 3;
        let seg_max =
            |s: &[RatePoint]| s.iter().map(|p| p.root).fold(0.0f64, f64::max);
        let first = seg_max(&per_n[..t]);
        let mid = seg_max(&per_n[per_n.len() - 2 * t..per_n.len() - t]);
        let last = seg_max(&per_n[per_n.len() - t..]);
        last < SUPEREXP_WINDOW_RATIO * mid && mid < SUPEREXP_WINDOW_RATIO * first
    } else {
        false
    };

    RateEstimate {
        window: w,
        per_n,
        tail_estimate,
        fit_estimate,
        superexponential,
        skipped,
    }
}

/// Estimator over plain samples `(n, s_n)`; non-positive and non-finite
/// samples are skipped as degenerate.
pub fn rate_estimate(points: &[(usize, f64)], window: usize) -> RateEstimate {
    let logs: Vec<(usize, f64)> = points
        .iter()
        .map(|&(n, s)| {
            if s > 0.0 && s.is_finite() {
                (n, s.ln())
            } else {
                (0, f64::NAN) // counted as skipped by the core
            }
        })
        .collect();
    let mut est = rate_estimate_ln(&logs, window);
    // Rebuild exact sample values (the log round trip may perturb them).
    let by_n: std::collections::BTreeMap<usize, f64> = points.iter().copied().collect();
    for p in &mut est.per_n {
        if let Some(&v) = by_n.get(&p.n) {
            p.value = v;
        }
    }
    est
}

/// Denominator convergence rate in the l1 coefficient norm: for each
/// `(n, q_n)` the sample is `|| monic(q_limit) - monic(q_n) ||_1`.
///
/// Exact recoveries (all samples zero) return the zero sentinel. A degree
/// mismatch after monic normalization is an error: the comparison is only
/// meaningful along the subsequence where the denominator has settled to
/// the limit degree, and the caller decides how to filter.
pub fn theta(
    q_seq: &[(usize, Polynomial)],
    q_limit: &Polynomial,
    window: usize,
) -> Result<RateEstimate, DiagnosticsError> {
    if q_limit.is_zero() {
        return Err(DiagnosticsError::InvalidInput(
            "limit denominator is zero".into(),
        ));
    }
    let limit = q_limit.monic();
    let mut samples = Vec::with_capacity(q_seq.len());
    for (n, q) in q_seq {
        if q.degree() != limit.degree() {
            return Err(DiagnosticsError::DegreeMismatch {
                at_n: *n,
                expected: limit.degree(),
                found: q.degree(),
            });
        }
        samples.push((*n, limit.sub(&q.monic()).l1_norm()));
    }
    Ok(rate_estimate(&samples, window))
}

/// Sup-norm error rate on a circle: samples are
/// `max_{|z| = radius} |f(z) - p_n(z)/q_n(z)|` over a grid of at least
/// `grid` points. The caller supplies `f` as an evaluator (a truncated
/// Taylor series is useless outside its disk of convergence) and chooses a
/// circle avoiding both the poles of `f` and the zeros of the `q_n`.
pub fn sup_error_rate(
    pairs: &[(usize, Polynomial, Polynomial)],
    f_eval: &dyn Fn(C64) -> C64,
    radius: f64,
    grid: usize,
    window: usize,
) -> RateEstimate {
    let g = grid.max(crate::tolerances::MIN_SUP_GRID);
    let samples: Vec<(usize, f64)> = pairs
        .iter()
        .map(|(n, p, q)| {
            let mut worst = 0.0f64;
            for k in 0..g {
                let t = 2.0 * std::f64::consts::PI * k as f64 / g as f64;
                let z = C64::new(radius * t.cos(), radius * t.sin());
                let approx = p.eval_c64(z) / q.eval_c64(z);
                worst = worst.max((f_eval(z) - approx).norm());
            }
            (*n, worst)
        })
        .collect();
    rate_estimate(&samples, window)
}
