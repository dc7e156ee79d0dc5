//! Construction of rational and simultaneous rational interpolants.
//!
//! All three families are solutions of one homogeneous linear problem: find
//! a denominator q, `deg q <= D`, such that prescribed Taylor coefficients
//! of `q * f` vanish, then read the numerator off as a truncation of
//! `q * f`. The kernel solver returns the canonical representative of
//! minimal degree with unit leading coefficient, so every record is
//! deterministic even when the solution is not unique.
//!
//! Records keep the raw solve, the pair cleared of its common `z^lambda`
//! factor, and the cleared denominator rewritten in unit-disk form (interior
//! roots as `z - r`, exterior as `1 - z/r`). Every constructor re-verifies
//! its defining order conditions before returning and stores the worst
//! relative residual it saw: zero under the exact backend, below the
//! residual tolerance under the float one.

use crate::linalg::kernel;
use crate::poly::Polynomial;
use crate::roots::{normalize_unit_disk, NormalizedPoly, RootError};
use crate::scalar::{Backend, Scalar};
use crate::series::{PowerSeries, SeriesSystem};
use crate::tolerances::residual_tol;

#[derive(Debug)]
pub enum ApproxError {
    InvalidOrder(String),
    InsufficientCoefficients { needed: usize, available: usize },
    ResidualCheck { context: String, worst: f64 },
    Root(RootError),
    Degenerate(String),
}

impl std::fmt::Display for ApproxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ApproxError::InvalidOrder(m) => write!(f, "invalid order: {m}"),
            ApproxError::InsufficientCoefficients { needed, available } => write!(
                f,
                "insufficient coefficients: need index {needed}, have 0..={available}"
            ),
            ApproxError::ResidualCheck { context, worst } => {
                write!(f, "order conditions failed re-verification in {context}: worst relative residual {worst:e}")
            }
            ApproxError::Root(e) => write!(f, "root extraction failed: {e}"),
            ApproxError::Degenerate(m) => write!(f, "degenerate construction: {m}"),
        }
    }
}

/// Guard for finitely backed series: the construction below will touch
/// coefficients through `upto`.
pub(crate) fn require_coeffs(f: &PowerSeries, upto: usize) -> Result<(), ApproxError> {
    match f.available() {
        Some(a) if a < upto => Err(ApproxError::InsufficientCoefficients {
            needed: upto,
            available: a,
        }),
        _ => Ok(()),
    }
}

impl std::error::Error for ApproxError {}

impl From<RootError> for ApproxError {
    fn from(e: RootError) -> Self {
        ApproxError::Root(e)
    }
}

/// Classical row-sequence interpolant: `deg p <= n - m`, `deg q <= m`,
/// `q f - p = O(z^{n+1})`.
#[derive(Debug, Clone)]
pub struct PadeRecord {
    pub n: usize,
    pub m: usize,
    pub unique: bool,
    pub q_raw: Polynomial,
    pub p_raw: Polynomial,
    /// Order of the common `z^lambda` factor of the raw pair.
    pub lambda: usize,
    /// Cleared denominator, unit leading coefficient.
    pub q: Polynomial,
    pub p: Polynomial,
    pub q_normalized: NormalizedPoly,
    pub residual_max: f64,
    pub exact: bool,
}

/// Simultaneous interpolant with a common denominator: for each component
/// `k`, `deg p_k <= n - m_k` and `q f_k - p_k = O(z^{n+1})`, with
/// `deg q <= m_1 + ... + m_d`.
#[derive(Debug, Clone)]
pub struct HermitePadeRecord {
    pub n: usize,
    pub m: Vec<usize>,
    pub unique: bool,
    pub q_raw: Polynomial,
    pub p_raw: Vec<Polynomial>,
    pub lambda: usize,
    pub q: Polynomial,
    pub ps: Vec<Polynomial>,
    pub q_normalized: NormalizedPoly,
    pub residual_max: f64,
    pub exact: bool,
}

/// How an incomplete record was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncompleteSource {
    /// Underdetermined solve: `m_star` conditions, denominator degree up
    /// to `m`.
    Direct,
    /// A full row solve `R_{n,j}` with `m_star <= j <= m` conditions,
    /// reframed as type `(n, m, m_star)`.
    PadeRow { j: usize },
    /// Component `k` of a simultaneous solve.
    SystemComponent { index: usize },
}

/// Interpolant of type `(n, m, m_star)` with `n >= m >= m_star >= 1`:
/// `deg q <= m`, `deg p <= n - m_star`, `q f - p = O(z^{n+1})`. The gap
/// `m - m_star` measures how much excess denominator degree the record
/// carries; the common-factor order `lambda` lives in `[0, m - m_star]`
/// when the construction is well posed, and the cleared numerator has
/// `deg p <= n - m_star - lambda`.
#[derive(Debug, Clone)]
pub struct IncompletePadeRecord {
    pub n: usize,
    pub m: usize,
    pub m_star: usize,
    pub source: IncompleteSource,
    pub unique: bool,
    pub q_raw: Polynomial,
    pub p_raw: Polynomial,
    pub lambda: usize,
    pub q: Polynomial,
    pub p: Polynomial,
    pub q_normalized: NormalizedPoly,
    pub residual_max: f64,
    pub exact: bool,
}

/// Coefficient of `z^j` in `q * f`, given the Taylor coefficients of `f`
/// through index `j`.
pub(crate) fn product_coeff(q: &Polynomial, phi: &[Scalar], j: usize, backend: Backend) -> Scalar {
    let mut acc = backend.zero();
    let top = (q.degree().max(0) as usize).min(j);
    for c in 0..=top {
        let qc = q.coeff(c);
        if qc.is_zero() {
            continue;
        }
        acc = &acc + &(&qc * &phi[j - c]);
    }
    acc
}

/// Largest term magnitude entering the same sum, for relative residuals.
fn product_coeff_scale(q: &Polynomial, phi: &[Scalar], j: usize) -> f64 {
    let mut scale = 0.0f64;
    let top = (q.degree().max(0) as usize).min(j);
    for c in 0..=top {
        let qc = q.coeff(c);
        if qc.is_zero() || phi[j - c].is_zero() {
            continue;
        }
        let t = (qc.ln_abs() + phi[j - c].ln_abs()).exp();
        scale = scale.max(t);
    }
    scale
}

/// First index whose coefficient is significant: exact zero testing under
/// the exact backend, relative threshold `10^(-digits/2)` under float.
fn ord_with_threshold(p: &Polynomial, digits: u32) -> Option<usize> {
    match p.backend() {
        Backend::Exact => p.ord_at_zero(),
        Backend::Float { .. } => {
            if p.is_zero() {
                return None;
            }
            let ln_max = p
                .coeffs()
                .iter()
                .filter(|c| !c.is_zero())
                .map(|c| c.ln_abs())
                .fold(f64::NEG_INFINITY, f64::max);
            let cut = ln_max + crate::tolerances::cluster_radius(digits).ln();
            p.coeffs()
                .iter()
                .position(|c| !c.is_zero() && c.ln_abs() > cut)
        }
    }
}

/// Shared solve: kernel of the `conditions x (deg_bound + 1)` system whose
/// rows demand that coefficients of `q * f_k` vanish at the listed indices.
struct SolveOutput {
    q: Polynomial,
    unique: bool,
}

fn solve_denominator(
    parts: &[(&PowerSeries, std::ops::RangeInclusive<usize>)],
    deg_bound: usize,
    backend: Backend,
) -> SolveOutput {
    let cols = deg_bound + 1;
    let mut rows = Vec::new();
    for (f, range) in parts {
        let phi = f.coeffs_upto(*range.end());
        for j in range.clone() {
            let row: Vec<Scalar> = (0..cols)
                .map(|c| {
                    if c <= j {
                        phi[j - c].clone()
                    } else {
                        backend.zero()
                    }
                })
                .collect();
            rows.push(row);
        }
    }
    let k = kernel(&rows, cols, backend);
    assert!(
        k.dimension() >= 1,
        "homogeneous system with more unknowns than equations has a kernel"
    );
    SolveOutput {
        q: Polynomial::new(backend, k.basis[0].clone()),
        unique: k.dimension() == 1,
    }
}

/// Verify that `q f - p` vanishes through `z^upto` and return the worst
/// relative residual observed. `p` may be shorter than the checked range.
fn verify_pair(
    q: &Polynomial,
    p: &Polynomial,
    f: &PowerSeries,
    upto: usize,
    backend: Backend,
) -> f64 {
    let phi = f.coeffs_upto(upto);
    let mut worst = 0.0f64;
    for j in 0..=upto {
        let got = product_coeff(q, &phi, j, backend);
        let want = p.coeff(j);
        let diff = &got - &want;
        if diff.is_zero() {
            continue;
        }
        let scale = product_coeff_scale(q, &phi, j).max(want.abs_f64()).max(1e-300);
        worst = worst.max(diff.abs_f64() / scale);
    }
    worst
}

fn residual_gate(worst: f64, backend: Backend, context: &str) -> Result<f64, ApproxError> {
    let ok = match backend {
        Backend::Exact => worst == 0.0,
        Backend::Float { digits } => worst <= residual_tol(digits),
    };
    if ok {
        Ok(worst)
    } else {
        Err(ApproxError::ResidualCheck {
            context: context.into(),
            worst,
        })
    }
}

struct ClearedPair {
    lambda: usize,
    q: Polynomial,
    p: Vec<Polynomial>,
}

/// Remove the common `z^lambda` factor of a raw solve. `lambda` is the
/// smallest significant coefficient index across the denominator and all
/// numerators.
fn clear_pair(q_raw: &Polynomial, ps_raw: &[Polynomial], digits: u32) -> ClearedPair {
    let mut lambda = ord_with_threshold(q_raw, digits).unwrap_or(usize::MAX);
    for p in ps_raw {
        let o = ord_with_threshold(p, digits).unwrap_or(usize::MAX);
        lambda = lambda.min(o);
    }
    if lambda == usize::MAX {
        lambda = 0;
    }
    ClearedPair {
        lambda,
        q: q_raw.drop_low(lambda),
        p: ps_raw.iter().map(|p| p.drop_low(lambda)).collect(),
    }
}

pub fn pade(
    f: &PowerSeries,
    n: usize,
    m: usize,
    digits: u32,
) -> Result<PadeRecord, ApproxError> {
    if n < m {
        return Err(ApproxError::InvalidOrder(format!(
            "denominator degree {m} exceeds order {n}"
        )));
    }
    require_coeffs(f, n + m)?;
    let backend = f.backend();
    let solve = solve_denominator(&[(f, n - m + 1..=n)], m, backend);
    let phi = f.coeffs_upto(n);
    let p_raw = Polynomial::new(
        backend,
        (0..=n - m)
            .map(|j| product_coeff(&solve.q, &phi, j, backend))
            .collect(),
    );
    let worst = verify_pair(&solve.q, &p_raw, f, n, backend);
    let residual_max = residual_gate(worst, backend, "pade")?;
    let cleared = clear_pair(&solve.q, std::slice::from_ref(&p_raw), digits);
    let q_normalized = normalize_unit_disk(&cleared.q, digits)?;
    let exact = matches!(backend, Backend::Exact);
    Ok(PadeRecord {
        n,
        m,
        unique: solve.unique,
        q_raw: solve.q,
        p_raw,
        lambda: cleared.lambda,
        q: cleared.q,
        p: cleared.p.into_iter().next().unwrap(),
        q_normalized,
        residual_max,
        exact,
    })
}

pub fn hermite_pade(
    sys: &SeriesSystem,
    n: usize,
    m: &[usize],
    digits: u32,
) -> Result<HermitePadeRecord, ApproxError> {
    if m.len() != sys.d() {
        return Err(ApproxError::InvalidOrder(format!(
            "multi-index length {} does not match system size {}",
            m.len(),
            sys.d()
        )));
    }
    if let Some(&bad) = m.iter().find(|&&mk| mk > n) {
        return Err(ApproxError::InvalidOrder(format!(
            "component degree {bad} exceeds order {n}"
        )));
    }
    let backend = sys.backend();
    let total: usize = m.iter().sum();
    if total == 0 {
        return Err(ApproxError::InvalidOrder(
            "multi-index must not be all zeros".into(),
        ));
    }
    for f in &sys.components {
        require_coeffs(f, n)?;
    }
    let parts: Vec<(&PowerSeries, std::ops::RangeInclusive<usize>)> = sys
        .components
        .iter()
        .zip(m.iter())
        .filter(|(_, &mk)| mk > 0)
        .map(|(f, &mk)| (f, n - mk + 1..=n))
        .collect();
    let solve = solve_denominator(&parts, total, backend);
    let mut ps_raw = Vec::with_capacity(sys.d());
    let mut worst = 0.0f64;
    for (f, &mk) in sys.components.iter().zip(m.iter()) {
        let phi = f.coeffs_upto(n);
        let p = Polynomial::new(
            backend,
            (0..=n - mk)
                .map(|j| product_coeff(&solve.q, &phi, j, backend))
                .collect(),
        );
        worst = worst.max(verify_pair(&solve.q, &p, f, n, backend));
        ps_raw.push(p);
    }
    let residual_max = residual_gate(worst, backend, "hermite_pade")?;
    let cleared = clear_pair(&solve.q, &ps_raw, digits);
    let q_normalized = normalize_unit_disk(&cleared.q, digits)?;
    let exact = matches!(backend, Backend::Exact);
    Ok(HermitePadeRecord {
        n,
        m: m.to_vec(),
        unique: solve.unique,
        q_raw: solve.q,
        p_raw: ps_raw,
        lambda: cleared.lambda,
        q: cleared.q,
        ps: cleared.p,
        q_normalized,
        residual_max,
        exact,
    })
}

fn check_incomplete_type(n: usize, m: usize, m_star: usize) -> Result<(), ApproxError> {
    if m_star < 1 || m < m_star || n < m {
        return Err(ApproxError::InvalidOrder(format!(
            "incomplete type needs n >= m >= m_star >= 1, got ({n}, {m}, {m_star})"
        )));
    }
    Ok(())
}

/// Underdetermined solve of type `(n, m, m_star)`: only `m_star`
/// coefficient conditions but denominator degree up to `m`.
pub fn incomplete_direct(
    f: &PowerSeries,
    n: usize,
    m: usize,
    m_star: usize,
    digits: u32,
) -> Result<IncompletePadeRecord, ApproxError> {
    check_incomplete_type(n, m, m_star)?;
    require_coeffs(f, n)?;
    let backend = f.backend();
    let solve = solve_denominator(&[(f, n - m_star + 1..=n)], m, backend);
    finish_incomplete(
        f,
        n,
        m,
        m_star,
        n - m_star,
        IncompleteSource::Direct,
        solve,
        digits,
    )
}

/// The full row solve `R_{n,j}` (with `j` conditions and denominator
/// degree up to `j`), reframed as an incomplete record of type
/// `(n, m, m_star)`; any `m_star <= j <= m` qualifies.
pub fn incomplete_from_pade(
    f: &PowerSeries,
    n: usize,
    m: usize,
    m_star: usize,
    j: usize,
    digits: u32,
) -> Result<IncompletePadeRecord, ApproxError> {
    check_incomplete_type(n, m, m_star)?;
    if j < m_star || j > m {
        return Err(ApproxError::InvalidOrder(format!(
            "row index {j} outside [{m_star}, {m}]"
        )));
    }
    require_coeffs(f, n)?;
    let backend = f.backend();
    let solve = solve_denominator(&[(f, n - j + 1..=n)], j, backend);
    finish_incomplete(
        f,
        n,
        m,
        m_star,
        n - j,
        IncompleteSource::PadeRow { j },
        solve,
        digits,
    )
}

/// Component `k` of a simultaneous solve, viewed as an incomplete record of
/// type `(n, m_1 + ... + m_d, m_k)` for that component alone.
pub fn incomplete_from_system(
    sys: &SeriesSystem,
    n: usize,
    m: &[usize],
    k: usize,
    digits: u32,
) -> Result<IncompletePadeRecord, ApproxError> {
    if k >= sys.d() {
        return Err(ApproxError::InvalidOrder(format!(
            "component {k} out of range for a system of {}",
            sys.d()
        )));
    }
    let total: usize = m.iter().sum();
    check_incomplete_type(n, total, m[k])?;
    let record = hermite_pade(sys, n, m, digits)?;
    let f = &sys.components[k];
    let solve = SolveOutput {
        q: record.q_raw.clone(),
        unique: record.unique,
    };
    finish_incomplete(
        f,
        n,
        total,
        m[k],
        n - m[k],
        IncompleteSource::SystemComponent { index: k },
        solve,
        digits,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish_incomplete(
    f: &PowerSeries,
    n: usize,
    m: usize,
    m_star: usize,
    p_deg: usize,
    source: IncompleteSource,
    solve: SolveOutput,
    digits: u32,
) -> Result<IncompletePadeRecord, ApproxError> {
    let backend = f.backend();
    let phi = f.coeffs_upto(n);
    let p_raw = Polynomial::new(
        backend,
        (0..=p_deg)
            .map(|j| product_coeff(&solve.q, &phi, j, backend))
            .collect(),
    );
    let worst = verify_pair(&solve.q, &p_raw, f, n, backend);
    let residual_max = residual_gate(worst, backend, "incomplete")?;
    let cleared = clear_pair(&solve.q, std::slice::from_ref(&p_raw), digits);
    let q_normalized = normalize_unit_disk(&cleared.q, digits)?;
    if cleared.q.degree() > m as isize
        || cleared.p[0].degree() > n as isize - m_star as isize - cleared.lambda as isize
    {
        return Err(ApproxError::Degenerate(format!(
            "cleared record violates the ({n}, {m}, {m_star}) degree bounds"
        )));
    }
    let exact = matches!(backend, Backend::Exact);
    Ok(IncompletePadeRecord {
        n,
        m,
        m_star,
        source,
        unique: solve.unique,
        q_raw: solve.q,
        p_raw,
        lambda: cleared.lambda,
        q: cleared.q,
        p: cleared.p.into_iter().next().unwrap(),
        q_normalized,
        residual_max,
        exact,
    })
}

/// Check that `q f - p` keeps vanishing through `z^upto`; true for exact
/// backends only when the residual is identically zero. A rational function
/// whose numerator and denominator fit the degree bounds makes every
/// sufficiently deep check pass, so this is the "exact recovery" probe.
pub fn verify_recovery(
    q: &Polynomial,
    p: &Polynomial,
    f: &PowerSeries,
    upto: usize,
) -> bool {
    let backend = f.backend();
    let worst = verify_pair(q, p, f, upto, backend);
    match backend {
        Backend::Exact => worst == 0.0,
        Backend::Float { digits } => worst <= residual_tol(digits),
    }
}

/// One step of the consecutive-difference telescope. With cleared pairs
/// `(p_n, q_n)` and `(p_{n+1}, q_{n+1})`, the cross difference
/// `p_{n+1} q_n - p_n q_{n+1}` vanishes at the origin to order at least
/// `n + 1 - lambda_n - lambda_{n+1}`; stripping that power leaves a
/// cofactor whose unit-disk rewrite is `qstar` and whose leftover constant
/// (after also rewriting both denominators in unit-disk form) is `a`.
#[derive(Debug, Clone)]
pub struct TelescopeStep {
    pub n: usize,
    pub power: usize,
    pub a: Scalar,
    pub qstar: NormalizedPoly,
    pub degenerate: bool,
    pub exact: bool,
}

pub fn telescope_steps(
    records: &[IncompletePadeRecord],
    digits: u32,
) -> Result<Vec<TelescopeStep>, ApproxError> {
    if records.len() < 2 {
        return Err(ApproxError::InvalidOrder(
            "telescoping needs at least two consecutive records".into(),
        ));
    }
    let mut out = Vec::with_capacity(records.len() - 1);
    for w in records.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        if hi.n != lo.n + 1 {
            return Err(ApproxError::InvalidOrder(format!(
                "records must be consecutive in n; got {} then {}",
                lo.n, hi.n
            )));
        }
        let cross = hi.p.mul(&lo.q).sub(&lo.p.mul(&hi.q));
        let power = (lo.n + 1)
            .saturating_sub(lo.lambda)
            .saturating_sub(hi.lambda);
        let backend = cross.backend();
        let degenerate_step = |digits| -> Result<TelescopeStep, ApproxError> {
            Ok(TelescopeStep {
                n: lo.n,
                power,
                a: backend.zero(),
                qstar: normalize_unit_disk(&Polynomial::one(backend), digits)?,
                degenerate: true,
                exact: matches!(backend, Backend::Exact),
            })
        };
        let ord = ord_with_threshold(&cross, digits);
        match ord {
            None => {
                out.push(degenerate_step(digits)?);
                continue;
            }
            // The identity forces ord >= power, so significant mass below
            // z^power is impossible for a genuine step. Under the exact
            // backend that is a broken invariant and must fail loudly;
            // under float the entire cross is cancellation noise (the
            // self-relative threshold saw noise because noise was all
            // there is) and the step is degenerate.
            Some(k) if k < power => {
                if matches!(backend, Backend::Exact) {
                    return Err(ApproxError::Degenerate(format!(
                        "cross difference at n = {} vanished only below z^{power}",
                        lo.n
                    )));
                }
                out.push(degenerate_step(digits)?);
                continue;
            }
            Some(_) => {}
        }
        let cofactor = cross.drop_low(power);
        if cofactor.is_zero() {
            return Err(ApproxError::Degenerate(format!(
                "cross difference at n = {} vanished only below z^{power}",
                lo.n
            )));
        }
        let qstar = normalize_unit_disk(&cofactor, digits)?;
        // a = s_n s_{n+1} / s_C carries the pair into the unit-disk frame.
        let a = &(&lo.q_normalized.scale * &hi.q_normalized.scale) / &qstar.scale;
        let exact =
            lo.exact && hi.exact && lo.q_normalized.exact && hi.q_normalized.exact && qstar.exact;
        out.push(TelescopeStep {
            n: lo.n,
            power,
            a,
            qstar,
            degenerate: false,
            exact,
        });
    }
    Ok(out)
}

/// Convenience rows.
pub fn pade_row(
    f: &PowerSeries,
    m: usize,
    n_range: std::ops::RangeInclusive<usize>,
    digits: u32,
) -> Result<Vec<PadeRecord>, ApproxError> {
    n_range.map(|n| pade(f, n, m, digits)).collect()
}

pub fn hermite_pade_row(
    sys: &SeriesSystem,
    m: &[usize],
    n_range: std::ops::RangeInclusive<usize>,
    digits: u32,
) -> Result<Vec<HermitePadeRecord>, ApproxError> {
    n_range.map(|n| hermite_pade(sys, n, m, digits)).collect()
}

/// Incomplete records built from the full `R_{n,m}` row (`j = m`) for each
/// `n` in the range.
pub fn incomplete_row(
    f: &PowerSeries,
    m: usize,
    m_star: usize,
    n_range: std::ops::RangeInclusive<usize>,
    digits: u32,
) -> Result<Vec<IncompletePadeRecord>, ApproxError> {
    n_range
        .map(|n| incomplete_from_pade(f, n, m, m_star, m, digits))
        .collect()
}
