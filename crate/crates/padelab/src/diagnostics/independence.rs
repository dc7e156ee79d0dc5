//! Finite-truncation polynomial-independence test for a series system.
//!
//! A system `(f_1, ..., f_d)` is polynomially independent with respect to
//! the multi-index `(m_1, ..., m_d)` when no combination
//! `p_1 f_1 + ... + p_d f_d` with `deg p_k <= m_k - 1`, not all zero, is a
//! polynomial. The finite test maps the stacked coefficient vector of
//! `(p_1, ..., p_d)` to the Taylor coefficients of the combination over a
//! tail index range `(J0, N]` with `J0 = max_k m_k + 10`; a nontrivial
//! kernel vector of that matrix makes the combination vanish on every
//! tested tail coefficient — a certified dependence witness up to
//! truncation. A trivial kernel certifies "independent at truncation N":
//! a necessary condition only, since a dependence whose polynomial part
//! has degree above `J0`, or whose tail first vanishes beyond `N`, is
//! invisible at this truncation.

use crate::poly::Polynomial;
use crate::scalar::{Backend, Scalar};
use crate::series::SeriesSystem;
use crate::tolerances::cluster_radius;

use super::DiagnosticsError;

/// Tail offset above `max_k m_k` where the tested coefficient rows start.
pub const INDEPENDENCE_ROW_SLACK: usize = 10;

#[derive(Debug, Clone)]
pub struct IndependenceReport {
    /// Trivial kernel over the tested rows.
    pub independent: bool,
    /// Truncation order the verdict holds at.
    pub n_trunc: usize,
    /// Coefficient rows tested: `row_range.0 + 1 ..= row_range.1`.
    pub row_range: (usize, usize),
    /// Rank of the tail matrix.
    pub rank: usize,
    /// Number of unknowns, `sum m_k`.
    pub columns: usize,
    /// For a dependent verdict: the combination `(p_1, ..., p_d)` with
    /// `deg p_k <= m_k - 1`, scaled so its largest coefficient is 1.
    pub witness: Option<Vec<Polynomial>>,
    /// Largest tested-tail coefficient of the witness combination,
    /// recomputed directly from the series (0 for the exact backend).
    pub witness_residual: Option<f64>,
}

/// Test polynomial independence of `sys` with respect to `m` at truncation
/// `N = n_trunc`. Requires `N >= 2 * sum(m) + 20` so the tail matrix has a
/// comfortable row surplus over its columns.
pub fn polynomial_independence(
    sys: &SeriesSystem,
    m: &[usize],
    n_trunc: usize,
) -> Result<IndependenceReport, DiagnosticsError> {
    if sys.d() != m.len() || m.is_empty() {
        return Err(DiagnosticsError::InvalidInput(format!(
            "multi-index length {} does not match system dimension {}",
            m.len(),
            sys.d()
        )));
    }
    if m.contains(&0) {
        return Err(DiagnosticsError::InvalidInput(
            "every multi-index entry must be at least 1".into(),
        ));
    }
    let total: usize = m.iter().sum();
    let need = 2 * total + 20;
    if n_trunc < need {
        return Err(DiagnosticsError::InsufficientCoefficients {
            needed: need,
            available: n_trunc,
        });
    }
    for f in &sys.components {
        super::require_coeffs(f, n_trunc)?;
    }

    let backend = sys.backend();
    let j0 = *m.iter().max().unwrap() + INDEPENDENCE_ROW_SLACK;
    if j0 >= n_trunc {
        return Err(DiagnosticsError::InvalidInput(format!(
            "row range ({j0}, {n_trunc}] is empty"
        )));
    }

    // Column layout: for k in 0..d, for deg in 0..m_k — coefficient `deg`
    // of p_k. Row j holds the z^j Taylor coefficient of sum_k p_k f_k.
    let mut matrix: Vec<Vec<Scalar>> = Vec::with_capacity(n_trunc - j0);
    for j in j0 + 1..=n_trunc {
        let mut row = Vec::with_capacity(total);
        for (k, &mk) in m.iter().enumerate() {
            for d in 0..mk {
                row.push(sys.components[k].coeff(j - d));
            }
        }
        matrix.push(row);
    }

    let kr = crate::linalg::kernel(&matrix, total, backend);
    let (rank, basis) = (kr.rank, kr.basis);
    let independent = basis.is_empty();

    let mut witness = None;
    let mut witness_residual = None;
    if let Some(v) = basis.first() {
        // Rescale so the largest coefficient is exactly 1.
        let (bi, _) = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.ln_abs().total_cmp(&b.1.ln_abs()))
            .unwrap();
        let inv = v[bi].inv();
        let scaled: Vec<Scalar> = v.iter().map(|s| s * &inv).collect();

        // Re-verify the witness directly against the series on every
        // tested row — an end-to-end check independent of the elimination.
        let mut worst = 0.0f64;
        for j in j0 + 1..=n_trunc {
            let mut acc = backend.zero();
            let mut idx = 0usize;
            for (k, &mk) in m.iter().enumerate() {
                for d in 0..mk {
                    let term = &scaled[idx] * &sys.components[k].coeff(j - d);
                    acc = &acc + &term;
                    idx += 1;
                }
            }
            worst = worst.max(acc.abs_f64());
        }
        let tol = match backend {
            Backend::Exact => 0.0,
            Backend::Float { .. } => cluster_radius(backend.digits()),
        };
        if worst > tol {
            return Err(DiagnosticsError::Numerical(format!(
                "kernel witness failed re-verification: residual {worst}"
            )));
        }

        let mut polys = Vec::with_capacity(m.len());
        let mut idx = 0usize;
        for &mk in m {
            let coeffs: Vec<Scalar> = scaled[idx..idx + mk].to_vec();
            idx += mk;
            polys.push(Polynomial::new(backend, coeffs));
        }
        witness = Some(polys);
        witness_residual = Some(worst);
    }

    Ok(IndependenceReport {
        independent,
        n_trunc,
        row_range: (j0, n_trunc),
        rank,
        columns: total,
        witness,
        witness_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CRat, Rat};
    use crate::series::{catalog_rational, PowerSeries, RationalTerm, SeriesSystem};
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn crat(n: i64, d: i64) -> CRat {
        CRat::new(rat(n, d), rat(0, 1))
    }

    fn geometric(pole: i64) -> PowerSeries {
        catalog_rational(
            Backend::Exact,
            vec![RationalTerm::simple(crat(1, 1), crat(pole, 1))],
            format!("1/({pole}-z)"),
        )
    }

    #[test]
    fn duplicated_component_is_dependent_with_unit_witness() {
        let f = geometric(1);
        let sys = SeriesSystem::new(vec![f.clone(), f], "(f,f)");
        let rep = polynomial_independence(&sys, &[1, 1], 30).unwrap();
        assert!(!rep.independent);
        assert_eq!(rep.rank, 1);
        let w = rep.witness.as_ref().unwrap();
        // p_1 + p_2 = 0 with constants: witness proportional to (1, -1).
        let a = w[0].coeff(0).to_c64();
        let b = w[1].coeff(0).to_c64();
        assert!((a + b).norm() < 1e-12);
        assert!(a.norm() > 0.0);
        assert_eq!(rep.witness_residual, Some(0.0));
    }

    #[test]
    fn polynomial_component_is_caught() {
        let f = geometric(1);
        // 1 + 3 z^5 padded with explicit zeros through index 40.
        let mut coeffs = vec![Backend::Exact.zero(); 41];
        coeffs[0] = Backend::Exact.from_int(1);
        coeffs[5] = Backend::Exact.from_int(3);
        let poly = PowerSeries::from_coefficients(Backend::Exact, "1+3z^5", coeffs);
        let sys = SeriesSystem::new(vec![f, poly], "(f,poly)");
        let rep = polynomial_independence(&sys, &[1, 1], 40).unwrap();
        assert!(!rep.independent);
        let w = rep.witness.as_ref().unwrap();
        // The dependence uses the polynomial component alone.
        assert!(w[0].coeff(0).is_zero());
        assert!(!w[1].coeff(0).is_zero());
    }

    #[test]
    fn distinct_geometric_components_are_independent() {
        let sys = SeriesSystem::new(vec![geometric(1), geometric(2)], "(f1,f2)");
        let rep = polynomial_independence(&sys, &[1, 1], 30).unwrap();
        assert!(rep.independent);
        assert_eq!(rep.rank, 2);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn dependence_is_monotone_in_truncation() {
        let f = geometric(3);
        let sys = SeriesSystem::new(vec![f.clone(), f], "(f,f)");
        for n in [30usize, 45, 80] {
            let rep = polynomial_independence(&sys, &[1, 1], n).unwrap();
            assert!(!rep.independent, "dependent must persist at N={n}");
        }
    }

    #[test]
    fn truncation_floor_is_enforced() {
        let sys = SeriesSystem::new(vec![geometric(1), geometric(2)], "sys");
        assert!(matches!(
            polynomial_independence(&sys, &[1, 1], 20),
            Err(DiagnosticsError::InsufficientCoefficients { needed: 24, .. })
        ));
    }
}
