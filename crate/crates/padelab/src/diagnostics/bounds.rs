//! Numerical witness of the telescoping boundedness claims.
//!
//! After rescaling by the meromorphy-radius estimate R* (so the telescope
//! constants have unit geometric rate) and regularizing them into a
//! log-concave majorant A*, two normalized streams should stay bounded in
//! `n` — uniformly in the angle — once the row has settled:
//!
//! - exterior stream: `M8(n) = max_{|w| = e^delta} |p_n(R* w)| / (A*_n |w|^n)`,
//! - interior stream: `M9(n) = max_{w in K} |(q_n f - p_n)(R* w)| / (A*_n |w|^n)`,
//!   with `K` a circle `|z| = k_radius` (in original coordinates) kept away
//!   from the poles of `f`.
//!
//! Both are reported with their sup over `n` and a flatness flag (last
//! quarter at most twice the first quarter). This is a numerical witness
//! of an asymptotic boundedness statement, never a proof; a raised flag
//! simply means the finite data does not exhibit the expected balance.
//!
//! The interior residual is evaluated through its coefficient tail
//! `sum_{j >= n+1-lambda} (q_n f)_j z^j` rather than as a difference of
//! nearly equal values, so double precision never faces the cancellation
//! between `q_n f` and `p_n`.

use crate::approximants::{product_coeff, IncompletePadeRecord};
use crate::scalar::{C64, Scalar};
use crate::series::PowerSeries;
use crate::tolerances::{BOUND_FLAT_FACTOR, MIN_SUP_GRID};

use super::regularize::{ln_factorials, RegularizedSequence};
use super::DiagnosticsError;

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub delta: f64,
    pub k_radius: f64,
    pub r_star: f64,
    pub grid: usize,
    /// `(n, M8(n))`, ascending in n.
    pub m8: Vec<(usize, f64)>,
    /// `(n, M9(n))`, ascending in n.
    pub m9: Vec<(usize, f64)>,
    pub m8_sup: f64,
    pub m9_sup: f64,
    /// `None` when fewer than 8 usable indices; otherwise the factor-2
    /// quarter comparison.
    pub m8_flat: Option<bool>,
    pub m9_flat: Option<bool>,
    /// Records that entered the streams (those with a regularized A*).
    pub used: usize,
    /// No usable data (degenerate telescopes or missing regularization);
    /// the report is vacuous.
    pub skipped: bool,
}

impl BoundReport {
    fn vacuous(delta: f64, k_radius: f64, r_star: f64, grid: usize) -> Self {
        BoundReport {
            delta,
            k_radius,
            r_star,
            grid,
            m8: Vec::new(),
            m9: Vec::new(),
            m8_sup: 0.0,
            m9_sup: 0.0,
            m8_flat: None,
            m9_flat: None,
            used: 0,
            skipped: true,
        }
    }
}

fn flatness(values: &[(usize, f64)]) -> Option<bool> {
    if values.len() < 8 {
        return None;
    }
    let q = values.len() / 4;
    let first = values[..q]
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let last = values[values.len() - q..]
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    Some(last <= BOUND_FLAT_FACTOR * first)
}

/// Check the two boundedness streams over a row of records.
///
/// `reg` must be the regularized majorant of the row's telescope constants
/// after the R* rescale; passing `None` (no usable telescopes) yields a
/// vacuous skipped report. `poles` lists detected or known poles of `f`;
/// every grid point of `K` must stay at least `keepout` away from each.
/// `tail_terms` controls how far beyond `n` the residual tail is summed.
#[allow(clippy::too_many_arguments)]
pub fn lemma_bound_check(
    records: &[IncompletePadeRecord],
    f: &PowerSeries,
    reg: Option<&RegularizedSequence>,
    r_star: f64,
    delta: f64,
    k_radius: f64,
    poles: &[C64],
    keepout: f64,
    grid: usize,
    tail_terms: usize,
) -> Result<BoundReport, DiagnosticsError> {
    let grid = grid.max(MIN_SUP_GRID);
    let Some(reg) = reg else {
        return Ok(BoundReport::vacuous(delta, k_radius, r_star, grid));
    };
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "delta must be positive and finite, got {delta}"
        )));
    }
    if !(r_star.is_finite() && r_star > 0.0) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "R* must be finite and positive, got {r_star}"
        )));
    }
    if !(k_radius > 0.0 && k_radius < r_star * (-delta).exp()) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "K radius {k_radius} must lie in (0, R* e^-delta) = (0, {})",
            r_star * (-delta).exp()
        )));
    }
    let tail_terms = tail_terms.max(20);

    // The K grid, with the keep-out contract enforced up front.
    let k_points: Vec<C64> = (0..grid)
        .map(|g| {
            let ang = 2.0 * std::f64::consts::PI * g as f64 / grid as f64;
            C64::new(k_radius * ang.cos(), k_radius * ang.sin())
        })
        .collect();
    for z in &k_points {
        if poles.iter().any(|p| (p - z).norm() < keepout) {
            return Err(DiagnosticsError::KeepoutViolation { location: *z });
        }
    }

    let mut records: Vec<&IncompletePadeRecord> = records.iter().collect();
    records.sort_by_key(|r| r.n);
    let usable: Vec<&IncompletePadeRecord> = records
        .iter()
        .copied()
        .filter(|r| reg.ns.contains(&r.n))
        .collect();
    if usable.len() < 2 {
        return Ok(BoundReport::vacuous(delta, k_radius, r_star, grid));
    }

    let max_n = usable.last().unwrap().n;
    super::require_coeffs(f, max_n + tail_terms)?;
    let phi: Vec<Scalar> = f.coeffs_upto(max_n + tail_terms);
    let lnf = ln_factorials(*reg.ns.last().unwrap());
    let ln_astar = |n: usize| -> f64 {
        let i = reg.ns.iter().position(|&k| k == n).unwrap();
        lnf[n] + reg.u_hat[i]
    };

    let outer_radius = r_star * delta.exp();
    let ln_w_inner = (k_radius / r_star).ln();
    let backend = f.backend();

    let mut m8: Vec<(usize, f64)> = Vec::with_capacity(usable.len());
    let mut m9: Vec<(usize, f64)> = Vec::with_capacity(usable.len());
    for rec in &usable {
        let la = ln_astar(rec.n);

        // Exterior stream: sup of |p_n| on |z| = R* e^delta, normalized.
        let sup_p = rec.p.sup_norm_on_circle(outer_radius, grid);
        let ln_m8 = sup_p.ln() - la - rec.n as f64 * delta;
        m8.push((rec.n, ln_m8.exp()));

        // Interior stream through the residual coefficient tail.
        let j_low = rec.n + 1 - rec.lambda;
        let tail: Vec<C64> = (j_low..=rec.n + tail_terms)
            .map(|j| product_coeff(&rec.q, &phi, j, backend).to_c64())
            .collect();
        let mut worst = 0.0f64;
        for z in &k_points {
            let mut acc = C64::new(0.0, 0.0);
            for c in tail.iter().rev() {
                acc = acc * z + c;
            }
            let low_pow = z.powu(j_low as u32);
            worst = worst.max((acc * low_pow).norm());
        }
        let ln_m9 = worst.ln() - la - rec.n as f64 * ln_w_inner;
        m9.push((rec.n, ln_m9.exp()));
    }

    let m8_sup = m8.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);
    let m9_sup = m9.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);
    let m8_flat = flatness(&m8);
    let m9_flat = flatness(&m9);
    Ok(BoundReport {
        delta,
        k_radius,
        r_star,
        grid,
        m8,
        m9,
        m8_sup,
        m9_sup,
        m8_flat,
        m9_flat,
        used: usable.len(),
        skipped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximants::{incomplete_row, telescope_steps};
    use crate::scalar::{Backend, CRat, Rat};
    use crate::series::{catalog_log_branch, catalog_rational, RationalTerm};
    use crate::tolerances::DEFAULT_DIGITS;

    use super::super::radii::estimate_r_star;
    use super::super::regularize::regularize_from_telescopes;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn crat(n: i64, d: i64) -> CRat {
        CRat::new(rat(n, d), rat(0, 1))
    }

    /// f = 1/(1-z) + ln(1 - z/2): one pole inside, one branch point on the
    /// second ring; the m = 2 row telescopes nondegenerately.
    fn log_fixture() -> (
        Vec<IncompletePadeRecord>,
        PowerSeries,
        RegularizedSequence,
        f64,
    ) {
        let pole = catalog_rational(
            Backend::Exact,
            vec![RationalTerm::simple(crat(1, 1), crat(1, 1))],
            "1/(1-z)",
        );
        let log = catalog_log_branch(Backend::Exact, crat(2, 1), "ln(1-z/2)");
        let f = pole.add(&log, "1/(1-z)+ln(1-z/2)");
        let records = incomplete_row(&f, 2, 2, 6..=34, DEFAULT_DIGITS).unwrap();
        let steps = telescope_steps(&records, DEFAULT_DIGITS).unwrap();
        let est = estimate_r_star(&steps, 8).unwrap();
        let r_star = est.radius.finite().expect("finite R* for the fixture");
        assert!(
            (1.6..=2.4).contains(&r_star),
            "fixture R* should sit near 2, got {r_star}"
        );
        let reg = regularize_from_telescopes(&steps, r_star).unwrap();
        (records, f, reg, r_star)
    }

    #[test]
    fn log_fixture_streams_are_flat() {
        let (records, f, reg, r_star) = log_fixture();
        let report = lemma_bound_check(
            &records,
            &f,
            Some(&reg),
            r_star,
            0.2,
            0.7,
            &[C64::new(1.0, 0.0)],
            0.1,
            64,
            60,
        )
        .unwrap();
        assert!(!report.skipped);
        assert!(report.used >= 20);
        assert_eq!(report.m8_flat, Some(true), "m8 stream: {:?}", report.m8);
        assert_eq!(report.m9_flat, Some(true), "m9 stream: {:?}", report.m9);
        assert!(report.m8_sup.is_finite() && report.m8_sup > 0.0);
        assert!(report.m9_sup.is_finite() && report.m9_sup > 0.0);
    }

    #[test]
    fn uniform_majorant_halving_doubles_the_sup_but_stays_flat() {
        let (records, f, reg, r_star) = log_fixture();
        let base = lemma_bound_check(
            &records, &f, Some(&reg), r_star, 0.2, 0.7,
            &[C64::new(1.0, 0.0)], 0.1, 64, 60,
        )
        .unwrap();
        let mut halved = reg.clone();
        for u in &mut halved.u_hat {
            *u -= std::f64::consts::LN_2;
        }
        let tampered = lemma_bound_check(
            &records, &f, Some(&halved), r_star, 0.2, 0.7,
            &[C64::new(1.0, 0.0)], 0.1, 64, 60,
        )
        .unwrap();
        assert!((tampered.m8_sup / base.m8_sup - 2.0).abs() < 1e-9);
        assert_eq!(tampered.m8_flat, Some(true));
    }

    #[test]
    fn geometric_majorant_shrink_raises_the_growth_flag() {
        let (records, f, reg, r_star) = log_fixture();
        let mut shrunk = reg.clone();
        for (u, &n) in shrunk.u_hat.iter_mut().zip(&shrunk.ns) {
            *u -= n as f64 * 0.2f64.ln_1p(); // subtract n * ln(1.2)
        }
        let report = lemma_bound_check(
            &records, &f, Some(&shrunk), r_star, 0.2, 0.7,
            &[C64::new(1.0, 0.0)], 0.1, 64, 60,
        )
        .unwrap();
        assert_eq!(report.m8_flat, Some(false));
    }

    #[test]
    fn keepout_and_radius_preconditions() {
        let (records, f, reg, r_star) = log_fixture();
        // A pole sitting on the K circle violates the keep-out contract.
        let err = lemma_bound_check(
            &records, &f, Some(&reg), r_star, 0.2, 0.7,
            &[C64::new(0.7, 0.0)], 0.05, 64, 60,
        )
        .unwrap_err();
        assert!(matches!(err, DiagnosticsError::KeepoutViolation { .. }));
        // K must fit inside the contracted disk; R* e^-0.2 < 2.
        let err = lemma_bound_check(
            &records, &f, Some(&reg), r_star, 0.2, 2.0,
            &[], 0.05, 64, 60,
        )
        .unwrap_err();
        assert!(matches!(err, DiagnosticsError::InvalidInput(_)));
    }

    #[test]
    fn missing_regularization_yields_a_vacuous_report() {
        // A purely rational f makes the row exact from the start: every
        // telescope cross-product vanishes and there is nothing to check.
        let f = catalog_rational(
            Backend::Exact,
            vec![
                RationalTerm::simple(crat(1, 1), crat(1, 1)),
                RationalTerm::simple(crat(1, 1), crat(2, 1)),
            ],
            "1/(1-z)+1/(2-z)",
        );
        let records = incomplete_row(&f, 2, 2, 4..=16, DEFAULT_DIGITS).unwrap();
        let steps = telescope_steps(&records, DEFAULT_DIGITS).unwrap();
        assert!(steps.iter().all(|s| s.degenerate));
        let report =
            lemma_bound_check(&records, &f, None, f64::NAN, 0.2, 0.7, &[], 0.1, 64, 60)
                .unwrap();
        assert!(report.skipped);
        assert!(report.m8.is_empty());
    }
}
