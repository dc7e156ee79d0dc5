//! Property tests for the structural invariants that must hold on *every*
//! input, not just the curated fixtures: order conditions of the solved
//! records, the common-factor budget, the regularized-majorant contract,
//! and scale invariance of the rate estimator.

use num_traits::Zero;
use padelab::approximants::{incomplete_from_pade, pade};
use padelab::diagnostics::{rate_estimate, regularize_ln};
use padelab::scalar::{Backend, CRat, Rat, Scalar};
use padelab::series::{catalog_rational, PowerSeries, RationalTerm};
use proptest::prelude::*;

fn b() -> Backend {
    Backend::Exact
}

fn crat(num: i64, den: i64) -> CRat {
    CRat::new(Rat::new(num.into(), den.into()), Rat::zero())
}

fn two_pole(a1: i64, a2: i64) -> PowerSeries {
    catalog_rational(
        b(),
        vec![
            RationalTerm::simple(crat(1, 1), crat(a1, 1)),
            RationalTerm::simple(crat(1, 1), crat(a2, 1)),
        ],
        format!("poles at {a1}, {a2}"),
    )
}

/// `sum_c q_c phi_{j-c}`, recomputed from scratch.
fn product_coeff(q: &[Scalar], phi: &[Scalar], j: usize) -> Scalar {
    let mut acc = b().zero();
    for (c, qc) in q.iter().enumerate() {
        if c > j {
            break;
        }
        acc = &acc + &(qc * &phi[j - c]);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The defining property of every row record, re-derived without any
    /// library verification code: the raw pair satisfies
    /// (q f)_j = p_j for j <= deg p and (q f)_j = 0 up to order n.
    #[test]
    fn pade_order_conditions_hold(a1 in 1i64..5, a2 in 5i64..10, n in 4usize..14) {
        let f = two_pole(a1, a2);
        let rec = pade(&f, n, 2, 30).unwrap();
        let phi = f.coeffs_upto(n);
        let q: Vec<Scalar> = rec.q_raw.coeffs().to_vec();
        for j in 0..=n {
            let lhs = product_coeff(&q, &phi, j);
            let rhs = rec.p_raw.coeff(j);
            prop_assert!((&lhs - &rhs).is_zero(), "order condition broken at j={j}");
        }
        prop_assert_eq!(rec.residual_max, 0.0);
    }

    /// The cleared common factor of an incomplete record never exceeds its
    /// budget: lambda <= m - m_star.
    #[test]
    fn lambda_stays_within_budget(
        a1 in 1i64..5,
        a2 in 5i64..10,
        n in 6usize..16,
        m_star in 1usize..3,
    ) {
        let m = 3;
        let f = two_pole(a1, a2);
        let rec = incomplete_from_pade(&f, n, m, m_star, m, 30).unwrap();
        prop_assert!(
            rec.lambda <= m - m_star,
            "lambda {} exceeds budget {}",
            rec.lambda,
            m - m_star
        );
        prop_assert!(rec.q.degree() >= 0 && rec.q.degree() as usize <= m);
        prop_assert!(rec.p.degree() < 0 || rec.p.degree() as usize <= n - m_star - rec.lambda);
    }

    /// The regularized majorant contract holds on arbitrary finite
    /// streams, not only on telescope data: log-concavity after the n!
    /// shift, pointwise majorization, and equality on a nonempty contact
    /// set are exact by construction.
    #[test]
    fn regularized_majorant_contract(vals in prop::collection::vec(-40.0f64..40.0, 8..48)) {
        let points: Vec<(usize, f64)> = vals.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
        let reg = regularize_ln(&points).unwrap();
        prop_assert!(reg.check_ii, "log-concavity failed");
        prop_assert!(reg.check_iii, "majorization failed");
        prop_assert!(reg.check_iv, "contact set empty");
        for ((&uh, &u), &n) in reg.u_hat.iter().zip(&reg.u).zip(&reg.ns) {
            prop_assert!(uh >= u - 1e-9, "majorant dips below the data at n={n}");
        }
        // Contact means contact: u_hat equals u there.
        for &n in &reg.lambda {
            let i = reg.ns.iter().position(|&k| k == n).unwrap();
            prop_assert!((reg.u_hat[i] - reg.u[i]).abs() <= 1e-9);
        }
    }

    /// The regression rate estimate does not depend on the prefactor of a
    /// geometric sequence, only on its ratio.
    #[test]
    fn rate_fit_is_scale_invariant(
        log_c in -6.0f64..6.0,
        r in 0.05f64..0.95,
        len in 24usize..60,
    ) {
        let c = 10f64.powf(log_c);
        let scaled: Vec<(usize, f64)> = (1..=len).map(|n| (n, c * r.powi(n as i32))).collect();
        let plain: Vec<(usize, f64)> = (1..=len).map(|n| (n, r.powi(n as i32))).collect();
        let est_scaled = rate_estimate(&scaled, 15);
        let est_plain = rate_estimate(&plain, 15);
        prop_assert!((est_scaled.fit_estimate - est_plain.fit_estimate).abs() < 1e-9);
        prop_assert!((est_scaled.fit_estimate - r).abs() < 1e-9);
    }
}
