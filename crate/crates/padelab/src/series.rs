//! Power series as lazy, memoized coefficient streams.
//!
//! A [`PowerSeries`] owns a provider closure computing the coefficient of
//! `z^n` on demand; previously computed coefficients are cached and handed
//! to the provider so recurrences stay linear-time. Series are cheaply
//! clonable handles (shared cache), which lets systems and linear
//! combinations reuse component streams without recomputation.
//!
//! The catalog constructors build the standard test functions from exact
//! data and attach metadata recording their true singularities; everything
//! downstream that wants a "ground truth" radius reads it from here, and
//! series without such provenance simply report unknown.

use std::cell::RefCell;
use std::fmt::Write as _;
use std::path::Path;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::Polynomial;
use crate::scalar::{parse_rational, Backend, CRat, Rat, Scalar, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    Pole { order: usize },
    Branch,
}

#[derive(Debug, Clone)]
pub struct KnownSingularity {
    pub location: C64,
    pub kind: SingularityKind,
}

/// What is known a priori about a series. `known` is false for data read
/// from files or produced by combinations, where nothing is certified.
#[derive(Debug, Clone, Default)]
pub struct SeriesMetadata {
    pub known: bool,
    pub entire: bool,
    /// Sorted by modulus, then argument.
    pub singularities: Vec<KnownSingularity>,
}

impl SeriesMetadata {
    fn sorted(mut self) -> Self {
        self.singularities.sort_by(|a, b| {
            (a.location.norm(), a.location.arg())
                .partial_cmp(&(b.location.norm(), b.location.arg()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self
    }

    /// Radius of the largest disk where the function is meromorphic with at
    /// most `m` poles counting multiplicity. `None` when the metadata does
    /// not certify anything; `f64::INFINITY` when nothing ever blocks.
    pub fn analytic_radius(&self, m: usize) -> Option<f64> {
        if !self.known {
            return None;
        }
        let mut budget = m as isize;
        let mut r = f64::INFINITY;
        for s in &self.singularities {
            match s.kind {
                SingularityKind::Branch => {
                    r = r.min(s.location.norm());
                }
                SingularityKind::Pole { order } => {
                    budget -= order as isize;
                    if budget < 0 {
                        r = r.min(s.location.norm());
                    }
                }
            }
            if budget < 0 {
                break;
            }
        }
        Some(r)
    }
}

type Provider = Box<dyn Fn(usize, &[Scalar]) -> Scalar>;

struct SeriesInner {
    backend: Backend,
    label: String,
    metadata: SeriesMetadata,
    cache: RefCell<Vec<Scalar>>,
    provider: Provider,
    /// Highest index available; `None` means unbounded.
    available: Option<usize>,
}

#[derive(Clone)]
pub struct PowerSeries {
    inner: Rc<SeriesInner>,
}

impl std::fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PowerSeries")
            .field("label", &self.inner.label)
            .field("cached", &self.inner.cache.borrow().len())
            .finish()
    }
}

impl PowerSeries {
    pub fn new(
        backend: Backend,
        label: impl Into<String>,
        metadata: SeriesMetadata,
        provider: Provider,
    ) -> Self {
        PowerSeries {
            inner: Rc::new(SeriesInner {
                backend,
                label: label.into(),
                metadata: metadata.sorted(),
                cache: RefCell::new(Vec::new()),
                provider,
                available: None,
            }),
        }
    }

    /// A series backed by a fixed coefficient list; access past the end is a
    /// contract violation the caller must prevent via [`Self::available`].
    pub fn from_coefficients(
        backend: Backend,
        label: impl Into<String>,
        coeffs: Vec<Scalar>,
    ) -> Self {
        let available = coeffs.len().checked_sub(1);
        PowerSeries {
            inner: Rc::new(SeriesInner {
                backend,
                label: label.into(),
                metadata: SeriesMetadata::default(),
                cache: RefCell::new(coeffs),
                provider: Box::new(|n, _| {
                    panic!("coefficient {n} requested beyond the stored data")
                }),
                available,
            }),
        }
    }

    pub fn backend(&self) -> Backend {
        self.inner.backend
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn metadata(&self) -> &SeriesMetadata {
        &self.inner.metadata
    }

    pub fn available(&self) -> Option<usize> {
        self.inner.available
    }

    fn ensure(&self, n: usize) {
        if let Some(a) = self.inner.available {
            assert!(
                n <= a,
                "coefficient {n} requested but only 0..={a} are available"
            );
        }
        loop {
            let len = self.inner.cache.borrow().len();
            if len > n {
                return;
            }
            let next = {
                let cache = self.inner.cache.borrow();
                (self.inner.provider)(len, &cache)
            };
            self.inner.cache.borrow_mut().push(next);
        }
    }

    pub fn coeff(&self, n: usize) -> Scalar {
        self.ensure(n);
        self.inner.cache.borrow()[n].clone()
    }

    pub fn coeffs_upto(&self, n: usize) -> Vec<Scalar> {
        self.ensure(n);
        self.inner.cache.borrow()[..=n].to_vec()
    }

    /// Taylor polynomial of degree `n`.
    pub fn truncate(&self, n: usize) -> Polynomial {
        Polynomial::new(self.backend(), self.coeffs_upto(n))
    }

    pub fn scale(&self, w: &Scalar, label: impl Into<String>) -> PowerSeries {
        combine(vec![(w.clone(), self.clone())], label)
    }

    pub fn add(&self, other: &PowerSeries, label: impl Into<String>) -> PowerSeries {
        let one = self.backend().one();
        combine(
            vec![(one.clone(), self.clone()), (one, other.clone())],
            label,
        )
    }
}

/// Linear combination `sum w_k * f_k`. The result carries no certified
/// metadata: weights can cancel singularities, and detecting that is the
/// job of the diagnostics, not of bookkeeping.
pub fn combine(parts: Vec<(Scalar, PowerSeries)>, label: impl Into<String>) -> PowerSeries {
    assert!(!parts.is_empty(), "empty combination");
    let backend = parts[0].1.backend();
    let available = parts
        .iter()
        .filter_map(|(_, s)| s.available())
        .min();
    let inner = SeriesInner {
        backend,
        label: label.into(),
        metadata: SeriesMetadata::default(),
        cache: RefCell::new(Vec::new()),
        provider: Box::new(move |n, _| {
            let mut acc = backend.zero();
            for (w, s) in &parts {
                acc = &acc + &(w * &s.coeff(n));
            }
            acc
        }),
        available,
    };
    PowerSeries {
        inner: Rc::new(inner),
    }
}

/// A tuple of series sharing one backend, approximated simultaneously.
#[derive(Debug, Clone)]
pub struct SeriesSystem {
    pub components: Vec<PowerSeries>,
    pub label: String,
}

impl SeriesSystem {
    pub fn new(components: Vec<PowerSeries>, label: impl Into<String>) -> Self {
        assert!(!components.is_empty(), "empty system");
        let b = components[0].backend();
        assert!(
            components.iter().all(|c| c.backend() == b),
            "system components must share a backend"
        );
        SeriesSystem {
            components,
            label: label.into(),
        }
    }

    pub fn d(&self) -> usize {
        self.components.len()
    }

    pub fn backend(&self) -> Backend {
        self.components[0].backend()
    }
}

/// One term `c / (a - z)^s` of a rational catalog function.
#[derive(Debug, Clone)]
pub struct RationalTerm {
    pub c: CRat,
    pub a: CRat,
    pub s: usize,
}

impl RationalTerm {
    pub fn simple(c: CRat, a: CRat) -> Self {
        RationalTerm { c, a, s: 1 }
    }
}

/// Sum of terms `c_j / (a_j - z)^{s_j}`; the Taylor coefficients are
/// `sum_j c_j * C(n+s_j-1, s_j-1) / a_j^{n+s_j}`.
pub fn catalog_rational(
    backend: Backend,
    terms: Vec<RationalTerm>,
    label: impl Into<String>,
) -> PowerSeries {
    assert!(!terms.is_empty(), "rational catalog entry needs terms");
    for t in &terms {
        assert!(t.s >= 1, "pole order must be at least 1");
        assert!(
            !(t.a.re.is_zero() && t.a.im.is_zero()),
            "pole at the origin is outside the catalog"
        );
    }
    // Merge duplicate (a, s) pairs and drop vanished terms so the metadata
    // states only singularities that are really there.
    let mut merged: Vec<RationalTerm> = Vec::new();
    for t in terms {
        if let Some(m) = merged.iter_mut().find(|m| m.a == t.a && m.s == t.s) {
            m.c = &m.c + &t.c;
        } else {
            merged.push(t);
        }
    }
    merged.retain(|t| !(t.c.re.is_zero() && t.c.im.is_zero()));
    assert!(!merged.is_empty(), "all rational terms cancelled");

    let mut by_location: Vec<(C64, usize)> = Vec::new();
    for t in &merged {
        let loc = Backend::Exact.from_crat(&t.a).to_c64();
        if let Some(e) = by_location.iter_mut().find(|e| e.0 == loc) {
            e.1 = e.1.max(t.s);
        } else {
            by_location.push((loc, t.s));
        }
    }
    let metadata = SeriesMetadata {
        known: true,
        entire: false,
        singularities: by_location
            .into_iter()
            .map(|(location, order)| KnownSingularity {
                location,
                kind: SingularityKind::Pole { order },
            })
            .collect(),
    };

    let provider: Provider = Box::new(move |n, _| {
        let mut acc = CRat::new(Rat::zero(), Rat::zero());
        for t in &merged {
            let binom = binom_int(n + t.s - 1, t.s - 1);
            let apow = crat_pow(&t.a, n + t.s);
            let term = &t.c * CRat::new(Rat::from(binom), Rat::zero()) / apow;
            acc += term;
        }
        backend.from_crat(&acc)
    });
    PowerSeries::new(backend, label, metadata, provider)
}

/// `ln(1 - z/a)`: coefficient 0 is zero and coefficient n is `-1/(n a^n)`.
pub fn catalog_log_branch(backend: Backend, a: CRat, label: impl Into<String>) -> PowerSeries {
    assert!(
        !(a.re.is_zero() && a.im.is_zero()),
        "branch point at the origin is outside the catalog"
    );
    let metadata = SeriesMetadata {
        known: true,
        entire: false,
        singularities: vec![KnownSingularity {
            location: Backend::Exact.from_crat(&a).to_c64(),
            kind: SingularityKind::Branch,
        }],
    };
    let provider: Provider = Box::new(move |n, _| {
        if n == 0 {
            return backend.zero();
        }
        let apow = crat_pow(&a, n);
        let v = -(CRat::new(Rat::one(), Rat::zero())
            / (apow * CRat::new(Rat::from(BigInt::from(n as i64)), Rat::zero())));
        backend.from_crat(&v)
    });
    PowerSeries::new(backend, label, metadata, provider)
}

/// `(1 - z/a)^alpha` for non-integer rational `alpha`: a branch point at
/// `a`. Coefficients follow the binomial recurrence
/// `phi_{n+1} = phi_n * (alpha - n) / ((n+1)(-a))`.
pub fn catalog_binomial(
    backend: Backend,
    a: CRat,
    alpha: Rat,
    label: impl Into<String>,
) -> PowerSeries {
    assert!(
        !(a.re.is_zero() && a.im.is_zero()),
        "branch point at the origin is outside the catalog"
    );
    assert!(
        !alpha.denom().is_one(),
        "integer exponent is a polynomial, not a catalog branch function"
    );
    let metadata = SeriesMetadata {
        known: true,
        entire: false,
        singularities: vec![KnownSingularity {
            location: Backend::Exact.from_crat(&a).to_c64(),
            kind: SingularityKind::Branch,
        }],
    };
    let a2 = a.clone();
    let alpha2 = alpha.clone();
    let provider: Provider = Box::new(move |n, prev| {
        if n == 0 {
            return backend.one();
        }
        let k = n - 1;
        let step = CRat::new(&alpha2 - Rat::from(BigInt::from(k as i64)), Rat::zero())
            / (CRat::new(Rat::from(BigInt::from(n as i64)), Rat::zero()) * (-a2.clone()));
        &prev[k] * &backend.from_crat(&step)
    });
    PowerSeries::new(backend, label, metadata, provider)
}

/// `exp(c z)`: entire, coefficients `c^n / n!`.
pub fn catalog_entire_exp(backend: Backend, c: CRat, label: impl Into<String>) -> PowerSeries {
    let metadata = SeriesMetadata {
        known: true,
        entire: true,
        singularities: Vec::new(),
    };
    let c2 = c.clone();
    let provider: Provider = Box::new(move |n, prev| {
        if n == 0 {
            return backend.one();
        }
        let step = &c2 / CRat::new(Rat::from(BigInt::from(n as i64)), Rat::zero());
        &prev[n - 1] * &backend.from_crat(&step)
    });
    PowerSeries::new(backend, label, metadata, provider)
}

fn crat_pow(a: &CRat, e: usize) -> CRat {
    let mut acc = CRat::new(Rat::one(), Rat::zero());
    let mut base = a.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base.clone();
        }
        base = base.clone() * base;
        e >>= 1;
    }
    acc
}

fn binom_int(n: usize, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from((n - i) as u64);
        den *= BigInt::from((i + 1) as u64);
    }
    num / den
}

#[derive(Debug)]
pub enum SeriesError {
    Io(String),
    Parse { line: usize, msg: String },
    NonContiguous { expected: usize, found: usize },
    Empty,
}

impl std::fmt::Display for SeriesError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesError::Io(e) => write!(f, "coefficient file: {e}"),
            SeriesError::Parse { line, msg } => {
                write!(f, "coefficient file line {line}: {msg}")
            }
            SeriesError::NonContiguous { expected, found } => write!(
                f,
                "coefficient file: expected index {expected}, found {found} (indices must be contiguous from 0)"
            ),
            SeriesError::Empty => write!(f, "coefficient file holds no coefficients"),
        }
    }
}

impl std::error::Error for SeriesError {}

/// Read a coefficient file: whitespace-separated `n re im` per line, `#`
/// comments, indices contiguous from zero. Parts may be rationals (`p/q`),
/// integers, or decimals; all are read exactly.
pub fn read_coeff_file(path: &Path, backend: Backend) -> Result<PowerSeries, SeriesError> {
    let text = std::fs::read_to_string(path).map_err(|e| SeriesError::Io(e.to_string()))?;
    let mut coeffs: Vec<Scalar> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(SeriesError::Parse {
                line: lineno + 1,
                msg: format!("expected `n re im`, found {} fields", parts.len()),
            });
        }
        let n: usize = parts[0].parse().map_err(|_| SeriesError::Parse {
            line: lineno + 1,
            msg: format!("bad index {:?}", parts[0]),
        })?;
        if n != coeffs.len() {
            return Err(SeriesError::NonContiguous {
                expected: coeffs.len(),
                found: n,
            });
        }
        let re = parse_rational(parts[1]).map_err(|e| SeriesError::Parse {
            line: lineno + 1,
            msg: e,
        })?;
        let im = parse_rational(parts[2]).map_err(|e| SeriesError::Parse {
            line: lineno + 1,
            msg: e,
        })?;
        coeffs.push(backend.from_rat_pair(re, im));
    }
    if coeffs.is_empty() {
        return Err(SeriesError::Empty);
    }
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "coefficients".into());
    Ok(PowerSeries::from_coefficients(backend, name, coeffs))
}

/// Write coefficients `0..=n_max` in the file format accepted by
/// [`read_coeff_file`]. Exact values are written as rationals and round-trip
/// losslessly; float values are written as shortest round-trip doubles.
pub fn write_coeff_file(
    path: &Path,
    series: &PowerSeries,
    n_max: usize,
) -> Result<(), SeriesError> {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", series.label());
    let _ = writeln!(out, "# n re im");
    for n in 0..=n_max {
        let c = series.coeff(n);
        let (re, im) = match &c {
            Scalar::Exact(v) => (format!("{}", v.re), format!("{}", v.im)),
            Scalar::Float(_) => {
                let v = c.to_c64();
                (crate::scalar::fmt_f64(v.re), crate::scalar::fmt_f64(v.im))
            }
        };
        let _ = writeln!(out, "{n} {re} {im}");
    }
    std::fs::write(path, out).map_err(|e| SeriesError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex() -> Backend {
        Backend::Exact
    }

    fn crat(nr: i64, dr: i64, ni: i64, di: i64) -> CRat {
        CRat::new(
            Rat::new(BigInt::from(nr), BigInt::from(dr)),
            Rat::new(BigInt::from(ni), BigInt::from(di)),
        )
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn geometric_series() {
        // 1/(1-z): all coefficients 1.
        let f = catalog_rational(
            ex(),
            vec![RationalTerm::simple(crat(1, 1, 0, 1), crat(1, 1, 0, 1))],
            "geometric",
        );
        for n in 0..8 {
            assert_eq!(f.coeff(n), ex().one());
        }
    }

    #[test]
    fn scaled_pole_coefficients() {
        // 2/(3-z): phi_n = 2/3^{n+1}.
        let f = catalog_rational(
            ex(),
            vec![RationalTerm::simple(crat(2, 1, 0, 1), crat(3, 1, 0, 1))],
            "pole at 3",
        );
        for n in 0..6usize {
            let want = ex().from_rat_pair(
                Rat::new(BigInt::from(2), num_traits::pow(BigInt::from(3), n + 1)),
                Rat::zero(),
            );
            assert_eq!(f.coeff(n), want);
        }
    }

    #[test]
    fn double_pole_coefficients() {
        // 1/(2-z)^2: phi_n = (n+1)/2^{n+2}.
        let f = catalog_rational(
            ex(),
            vec![RationalTerm {
                c: crat(1, 1, 0, 1),
                a: crat(2, 1, 0, 1),
                s: 2,
            }],
            "double pole",
        );
        for n in 0..6usize {
            let want = ex().from_rat_pair(
                Rat::new(
                    BigInt::from((n + 1) as i64),
                    num_traits::pow(BigInt::from(2), n + 2),
                ),
                Rat::zero(),
            );
            assert_eq!(f.coeff(n), want);
        }
    }

    #[test]
    fn log_branch_coefficients() {
        let f = catalog_log_branch(ex(), crat(2, 1, 0, 1), "log");
        assert!(f.coeff(0).is_zero());
        assert_eq!(f.coeff(1), ex().from_rat_pair(rat(-1, 2), Rat::zero()));
        assert_eq!(f.coeff(3), ex().from_rat_pair(rat(-1, 24), Rat::zero()));
    }

    #[test]
    fn binomial_recurrence_matches_expansion() {
        // (1 - z/2)^{1/2}: 1 - z/4 - z^2/32 - ...
        let f = catalog_binomial(ex(), crat(2, 1, 0, 1), rat(1, 2), "sqrt");
        assert_eq!(f.coeff(0), ex().one());
        assert_eq!(f.coeff(1), ex().from_rat_pair(rat(-1, 4), Rat::zero()));
        assert_eq!(f.coeff(2), ex().from_rat_pair(rat(-1, 32), Rat::zero()));
    }

    #[test]
    fn entire_exp_coefficients() {
        let f = catalog_entire_exp(ex(), crat(1, 1, 0, 1), "exp");
        assert_eq!(f.coeff(0), ex().one());
        assert_eq!(f.coeff(4), ex().from_rat_pair(rat(1, 24), Rat::zero()));
        assert!(f.metadata().entire);
        assert_eq!(f.metadata().analytic_radius(0), Some(f64::INFINITY));
    }

    #[test]
    fn combination_cancels_but_metadata_is_honest() {
        let f = catalog_rational(
            ex(),
            vec![RationalTerm::simple(crat(1, 1, 0, 1), crat(1, 1, 0, 1))],
            "f",
        );
        let g = combine(
            vec![(ex().one(), f.clone()), (ex().from_int(-1), f)],
            "f - f",
        );
        for n in 0..5 {
            assert!(g.coeff(n).is_zero());
        }
        assert!(!g.metadata().known);
    }

    #[test]
    fn analytic_radius_counts_multiplicity() {
        let f = catalog_rational(
            ex(),
            vec![
                RationalTerm::simple(crat(1, 1, 0, 1), crat(1, 1, 0, 1)),
                RationalTerm {
                    c: crat(1, 1, 0, 1),
                    a: crat(2, 1, 0, 1),
                    s: 2,
                },
            ],
            "mixed",
        );
        let md = f.metadata();
        assert_eq!(md.analytic_radius(0), Some(1.0));
        assert_eq!(md.analytic_radius(1), Some(2.0));
        assert_eq!(md.analytic_radius(2), Some(2.0));
        assert_eq!(md.analytic_radius(3), Some(f64::INFINITY));
    }

    #[test]
    fn catalog_merges_duplicate_terms() {
        let f = catalog_rational(
            ex(),
            vec![
                RationalTerm::simple(crat(1, 1, 0, 1), crat(2, 1, 0, 1)),
                RationalTerm::simple(crat(1, 1, 0, 1), crat(2, 1, 0, 1)),
            ],
            "doubled",
        );
        // 2/(2-z): phi_0 = 1.
        assert_eq!(f.coeff(0), ex().one());
        assert_eq!(f.metadata().singularities.len(), 1);
    }

    #[test]
    fn truncate_is_taylor_polynomial() {
        let f = catalog_entire_exp(ex(), crat(1, 1, 0, 1), "exp");
        let p = f.truncate(3);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.coeff(2), ex().from_rat_pair(rat(1, 2), Rat::zero()));
    }

    #[test]
    fn coeff_file_round_trip_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("series.txt");
        let f = catalog_rational(
            ex(),
            vec![RationalTerm::simple(crat(1, 1, 1, 2), crat(3, 2, 0, 1))],
            "complex residue",
        );
        write_coeff_file(&path, &f, 12).unwrap();
        let g = read_coeff_file(&path, ex()).unwrap();
        assert_eq!(g.available(), Some(12));
        for n in 0..=12 {
            assert_eq!(g.coeff(n), f.coeff(n), "coefficient {n}");
        }
    }

    #[test]
    fn coeff_file_rejects_gaps_and_junk() {
        let dir = tempfile::tempdir().unwrap();
        let gap = dir.path().join("gap.txt");
        std::fs::write(&gap, "0 1 0\n2 1 0\n").unwrap();
        assert!(matches!(
            read_coeff_file(&gap, ex()),
            Err(SeriesError::NonContiguous {
                expected: 1,
                found: 2
            })
        ));
        let junk = dir.path().join("junk.txt");
        std::fs::write(&junk, "0 one 0\n").unwrap();
        assert!(matches!(
            read_coeff_file(&junk, ex()),
            Err(SeriesError::Parse { line: 1, .. })
        ));
        let empty = dir.path().join("empty.txt");
        std::fs::write(&empty, "# nothing here\n").unwrap();
        assert!(matches!(read_coeff_file(&empty, ex()), Err(SeriesError::Empty)));
    }

    #[test]
    #[should_panic(expected = "only 0..=0 are available")]
    fn finite_series_overrun_panics() {
        let f = PowerSeries::from_coefficients(ex(), "short", vec![ex().one()]);
        let _ = f.coeff(1);
    }

    #[test]
    fn combine_tracks_availability() {
        let f = PowerSeries::from_coefficients(ex(), "short", vec![ex().one(), ex().one()]);
        let g = catalog_entire_exp(ex(), crat(1, 1, 0, 1), "exp");
        let h = combine(vec![(ex().one(), f), (ex().one(), g)], "sum");
        assert_eq!(h.available(), Some(1));
        assert_eq!(h.coeff(1), ex().from_int(2));
    }
}
