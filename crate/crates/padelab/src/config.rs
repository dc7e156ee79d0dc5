//! JSON experiment configuration.
//!
//! A config file declares the input series (catalog recipes or coefficient
//! files), the task to run, the row range and type parameters, the arithmetic
//! backend, and the diagnostic knobs. Parsing and series construction live
//! here; task preconditions (row ranges, type inequalities) are checked by
//! the runner so that the two failure classes stay distinct: a malformed
//! config or an unreadable coefficient file is a [`ConfigError`], while an
//! inconsistent experiment (for example `m_star > m`) is a precondition
//! failure reported by the runner.

use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde::Deserialize;

use crate::scalar::{parse_rational, Backend, CRat, Rat};
use crate::series::{
    catalog_binomial, catalog_entire_exp, catalog_log_branch, catalog_rational, combine,
    read_coeff_file, PowerSeries, RationalTerm, SeriesSystem,
};
use crate::tolerances::{
    CLASSIFY_MARGIN, DEFAULT_DIGITS, MIN_SUP_GRID, QSTAR_ATTRACT_TOL, SCAN_MATCH_TOL,
};

/// Errors in reading or interpreting the configuration itself (exit code 2).
#[derive(Debug)]
pub enum ConfigError {
    Io { path: String, msg: String },
    Parse(String),
    /// A number field that should be a rational (or complex rational) did
    /// not parse.
    Number { field: String, msg: String },
    /// A declared coefficient file could not be read or parsed.
    Series { label: String, msg: String },
    /// Structurally empty or self-contradictory declarations that make the
    /// config meaningless before any mathematics runs.
    Shape(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io { path, msg } => write!(f, "cannot read config {path}: {msg}"),
            ConfigError::Parse(msg) => write!(f, "config parse error: {msg}"),
            ConfigError::Number { field, msg } => write!(f, "bad number in {field}: {msg}"),
            ConfigError::Series { label, msg } => write!(f, "series {label}: {msg}"),
            ConfigError::Shape(msg) => write!(f, "config shape error: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// The experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Classical row: one series, fixed `m`, rows `n` over the range.
    PadeRow,
    /// Simultaneous row with a common denominator: `d` series and a
    /// multi-index.
    HermitePadeRow,
    /// Incomplete row `(n, m, m_star)` with telescoping diagnostics.
    IncompleteRow,
    /// Full inverse battery on one series (or a system, which adds the
    /// independence check): row, radii, trajectories, classification,
    /// regularization, bound streams.
    Diagnose,
    /// Grid scan of scalar combinations of a system against target points.
    ConjectureScan,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::PadeRow => "pade_row",
            Task::HermitePadeRow => "hermite_pade_row",
            Task::IncompleteRow => "incomplete_row",
            Task::Diagnose => "diagnose",
            Task::ConjectureScan => "conjecture_scan",
        }
    }
}

/// Arithmetic backend selector. `digits` only affects the float backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendChoice {
    #[default]
    Exact,
    Float,
}

impl BackendChoice {
    pub fn to_backend(self, digits: u32) -> Backend {
        match self {
            BackendChoice::Exact => Backend::Exact,
            BackendChoice::Float => Backend::Float { digits },
        }
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(BackendChoice::Exact),
            "float" => Ok(BackendChoice::Float),
            other => Err(format!("unknown backend {other:?}; use exact or float")),
        }
    }
}

/// A complex rational written either as a single string (`"3/2"`, `"-2"`,
/// imaginary part zero) or as `{ "re": ..., "im": ... }`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ComplexRat {
    Real(String),
    Pair {
        re: String,
        #[serde(default)]
        im: Option<String>,
    },
}

impl ComplexRat {
    pub fn to_crat(&self, field: &str) -> Result<CRat, ConfigError> {
        let num = |s: &str| {
            parse_rational(s).map_err(|msg| ConfigError::Number {
                field: field.to_string(),
                msg,
            })
        };
        match self {
            ComplexRat::Real(s) => Ok(CRat::new(num(s)?, Rat::zero())),
            ComplexRat::Pair { re, im } => {
                let re = num(re)?;
                let im = match im {
                    Some(s) => num(s)?,
                    None => Rat::zero(),
                };
                Ok(CRat::new(re, im))
            }
        }
    }
}

/// One term `c / (a - z)^s` of a rational catalog entry.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub c: ComplexRat,
    pub a: ComplexRat,
    #[serde(default = "one")]
    pub s: usize,
}

fn one() -> usize {
    1
}

/// A weighted part of a `combine` entry.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinePart {
    pub weight: ComplexRat,
    pub series: SeriesSpec,
}

/// Declaration of one input series: a catalog recipe or a coefficient file.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SeriesSpec {
    /// Coefficient file in `n re im` line format.
    File {
        path: String,
        #[serde(default)]
        label: Option<String>,
    },
    /// Sum of simple terms `c / (a - z)^s`.
    Rational {
        terms: Vec<TermSpec>,
        #[serde(default)]
        label: Option<String>,
    },
    /// `ln(1 - z/a)`.
    LogBranch {
        a: ComplexRat,
        #[serde(default)]
        label: Option<String>,
    },
    /// `(1 - z/a)^alpha` with non-integer rational `alpha`.
    Binomial {
        a: ComplexRat,
        alpha: String,
        #[serde(default)]
        label: Option<String>,
    },
    /// `exp(c z)`.
    EntireExp {
        c: ComplexRat,
        #[serde(default)]
        label: Option<String>,
    },
    /// Weighted sum of sub-declarations.
    Combine {
        parts: Vec<CombinePart>,
        #[serde(default)]
        label: Option<String>,
    },
}

impl SeriesSpec {
    fn label_or(&self, fallback: String) -> String {
        let label = match self {
            SeriesSpec::File { label, .. }
            | SeriesSpec::Rational { label, .. }
            | SeriesSpec::LogBranch { label, .. }
            | SeriesSpec::Binomial { label, .. }
            | SeriesSpec::EntireExp { label, .. }
            | SeriesSpec::Combine { label, .. } => label,
        };
        label.clone().unwrap_or(fallback)
    }

    /// Construct the series. Relative file paths resolve against `base_dir`
    /// (the config file's directory).
    pub fn build(&self, backend: Backend, base_dir: &Path) -> Result<PowerSeries, ConfigError> {
        let fallback = default_label(self);
        let label = self.label_or(fallback);
        match self {
            SeriesSpec::File { path, .. } => {
                let resolved = resolve_path(base_dir, path);
                read_coeff_file(&resolved, backend).map_err(|e| ConfigError::Series {
                    label: label.clone(),
                    msg: format!("{e} (at {})", resolved.display()),
                })
            }
            SeriesSpec::Rational { terms, .. } => {
                if terms.is_empty() {
                    return Err(ConfigError::Shape(format!(
                        "rational series {label} declares no terms"
                    )));
                }
                let mut built = Vec::with_capacity(terms.len());
                for (i, t) in terms.iter().enumerate() {
                    let c = t.c.to_crat(&format!("{label}.terms[{i}].c"))?;
                    let a = t.a.to_crat(&format!("{label}.terms[{i}].a"))?;
                    if a.re.is_zero() && a.im.is_zero() {
                        return Err(ConfigError::Shape(format!(
                            "rational series {label} has a pole at the origin"
                        )));
                    }
                    if t.s == 0 {
                        return Err(ConfigError::Shape(format!(
                            "rational series {label} has a term of pole order 0"
                        )));
                    }
                    built.push(RationalTerm { c, a, s: t.s });
                }
                Ok(catalog_rational(backend, built, label))
            }
            SeriesSpec::LogBranch { a, .. } => {
                let a = a.to_crat(&format!("{label}.a"))?;
                if a.re.is_zero() && a.im.is_zero() {
                    return Err(ConfigError::Shape(format!(
                        "log branch {label} places the branch point at the origin"
                    )));
                }
                Ok(catalog_log_branch(backend, a, label))
            }
            SeriesSpec::Binomial { a, alpha, .. } => {
                let a = a.to_crat(&format!("{label}.a"))?;
                if a.re.is_zero() && a.im.is_zero() {
                    return Err(ConfigError::Shape(format!(
                        "binomial {label} places the branch point at the origin"
                    )));
                }
                let alpha =
                    parse_rational(alpha).map_err(|msg| ConfigError::Number {
                        field: format!("{label}.alpha"),
                        msg,
                    })?;
                if alpha.is_integer() {
                    return Err(ConfigError::Shape(format!(
                        "binomial {label} needs a non-integer exponent"
                    )));
                }
                Ok(catalog_binomial(backend, a, alpha, label))
            }
            SeriesSpec::EntireExp { c, .. } => {
                let c = c.to_crat(&format!("{label}.c"))?;
                Ok(catalog_entire_exp(backend, c, label))
            }
            SeriesSpec::Combine { parts, .. } => {
                if parts.is_empty() {
                    return Err(ConfigError::Shape(format!(
                        "combination {label} declares no parts"
                    )));
                }
                let mut built = Vec::with_capacity(parts.len());
                for (i, part) in parts.iter().enumerate() {
                    let w = part.weight.to_crat(&format!("{label}.parts[{i}].weight"))?;
                    let series = part.series.build(backend, base_dir)?;
                    built.push((backend.from_crat(&w), series));
                }
                Ok(combine(built, label))
            }
        }
    }
}

fn default_label(spec: &SeriesSpec) -> String {
    match spec {
        SeriesSpec::File { path, .. } => format!("file:{path}"),
        SeriesSpec::Rational { .. } => "rational".to_string(),
        SeriesSpec::LogBranch { .. } => "log_branch".to_string(),
        SeriesSpec::Binomial { .. } => "binomial".to_string(),
        SeriesSpec::EntireExp { .. } => "entire_exp".to_string(),
        SeriesSpec::Combine { .. } => "combine".to_string(),
    }
}

fn resolve_path(base_dir: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}

/// Inclusive row range.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NRange {
    pub from: usize,
    pub to: usize,
}

impl NRange {
    pub fn range(self) -> std::ops::RangeInclusive<usize> {
        self.from..=self.to
    }

    pub fn is_empty(self) -> bool {
        self.from > self.to
    }
}

/// Diagnostic knobs: estimator windows, classification margins, the bound
/// check's annulus offset and compact-set radius, and grid resolutions. All
/// fields default to the central tolerances, so configs only name what they
/// change.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Knobs {
    /// Tail window of the rate estimators.
    pub window: usize,
    /// Relative interior/boundary margin for singularity classification.
    pub margin: f64,
    /// Tail-median threshold for cofactor attraction.
    pub attract_tol: f64,
    /// Annulus offset of the bound streams: the outer circle sits at
    /// `R* e^{delta}` and the compact set must stay inside `R* e^{-delta}`.
    pub delta: f64,
    /// Radius of the compact evaluation disk; `0` picks half of
    /// `R* e^{-delta}` once `R*` is known.
    pub k_radius: f64,
    /// Keep-out distance around classified poles for the compact set.
    pub keepout: f64,
    /// Circle grid for sup-norm sampling.
    pub grid: usize,
    /// Extra residual coefficients for the compact-set error evaluation.
    pub tail_terms: usize,
    /// Coefficients consumed by the ratio test.
    pub fabry_terms: usize,
    /// Determinant samples per meromorphy-radius level.
    pub hadamard_samples: usize,
    /// Coefficient truncation for the independence check; `0` picks the
    /// smallest admissible truncation plus the window.
    pub independence_trunc: usize,
    /// Combination-scan evidence match tolerance (relative).
    pub scan_tol: f64,
    /// Coefficient samples per scanned combination.
    pub scan_samples: usize,
    /// Row range `[from, to]` of the scan's denominator-root instrument.
    pub scan_rows: [usize; 2],
    /// Ratio-test length inside the scan.
    pub scan_fabry: usize,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs {
            window: 10,
            margin: CLASSIFY_MARGIN,
            attract_tol: QSTAR_ATTRACT_TOL,
            delta: 0.2,
            k_radius: 0.0,
            keepout: crate::tolerances::POLE_KEEPOUT,
            grid: MIN_SUP_GRID,
            tail_terms: 120,
            fabry_terms: 60,
            hadamard_samples: 40,
            independence_trunc: 0,
            scan_tol: SCAN_MATCH_TOL,
            scan_samples: 40,
            scan_rows: [8, 24],
            scan_fabry: 60,
        }
    }
}

/// A scan target point.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaSpec {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Top-level experiment declaration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    /// Input series: one for scalar tasks, `d` for system tasks.
    pub series: Vec<SeriesSpec>,
    /// Experiment label used in the report; defaults to the task name.
    #[serde(default)]
    pub label: Option<String>,
    /// Inclusive row range. The scan task ignores it (its row instrument is
    /// governed by `knobs.scan_rows`).
    pub n: NRange,
    /// Denominator degree for scalar tasks.
    #[serde(default)]
    pub m: Option<usize>,
    /// Lower type parameter of incomplete rows; defaults to `m`.
    #[serde(default)]
    pub m_star: Option<usize>,
    /// Multi-index for system tasks.
    #[serde(default)]
    pub multi_index: Option<Vec<usize>>,
    /// Component whose incomplete view drives the telescoping diagnostics
    /// when the input is a system; defaults to the first.
    #[serde(default)]
    pub component: Option<usize>,
    /// Working precision in decimal digits (float backend and root finding).
    #[serde(default = "default_digits")]
    pub digits: u32,
    #[serde(default)]
    pub backend: BackendChoice,
    /// Output directory for `row.csv` and `report.json`, relative to the
    /// working directory unless absolute.
    #[serde(default = "default_out")]
    pub out: String,
    /// Target points of the combination scan.
    #[serde(default)]
    pub zeta: Vec<ZetaSpec>,
    #[serde(default)]
    pub knobs: Knobs,
}

fn default_digits() -> u32 {
    DEFAULT_DIGITS
}

fn default_out() -> String {
    "out".to_string()
}

impl ExperimentConfig {
    /// Parse a config file. I/O and JSON-shape failures are [`ConfigError`]s
    /// (exit code 2).
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::from_str(&text)
    }

    /// Parse config text.
    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        if cfg.series.is_empty() {
            return Err(ConfigError::Shape("no input series declared".into()));
        }
        Ok(cfg)
    }

    /// Apply command-line overrides.
    pub fn apply_overrides(
        &mut self,
        precision: Option<u32>,
        backend: Option<BackendChoice>,
        out: Option<String>,
    ) {
        if let Some(d) = precision {
            self.digits = d;
        }
        if let Some(b) = backend {
            self.backend = b;
        }
        if let Some(o) = out {
            self.out = o;
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend.to_backend(self.digits)
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.task.name().to_string())
    }

    /// Build every declared series on the configured backend.
    pub fn build_series(&self, base_dir: &Path) -> Result<Vec<PowerSeries>, ConfigError> {
        let backend = self.backend();
        self.series
            .iter()
            .map(|s| s.build(backend, base_dir))
            .collect()
    }

    /// Build the declared series as a system (task preconditions on the
    /// count are checked by the runner; this only requires one component).
    pub fn build_system(&self, base_dir: &Path) -> Result<SeriesSystem, ConfigError> {
        let components = self.build_series(base_dir)?;
        Ok(SeriesSystem::new(components, self.label()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::from_str(text)
    }

    #[test]
    fn minimal_pade_row_parses_with_defaults() {
        let cfg = parse(
            r#"{
                "task": "pade_row",
                "series": [{"rational": {"terms": [{"c": "1", "a": "1"}]}}],
                "n": {"from": 4, "to": 12},
                "m": 1
            }"#,
        )
        .expect("minimal config");
        assert_eq!(cfg.task, Task::PadeRow);
        assert_eq!(cfg.digits, DEFAULT_DIGITS);
        assert_eq!(cfg.backend, BackendChoice::Exact);
        assert_eq!(cfg.out, "out");
        assert_eq!(cfg.knobs.window, 10);
        let f = &cfg.build_series(Path::new(".")).expect("series")[0];
        // 1/(1-z) has unit coefficients.
        assert!(f.coeff(7).to_c64().re - 1.0 == 0.0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = parse(
            r#"{
                "task": "pade_row",
                "series": [{"rational": {"terms": [{"c": "1", "a": "1"}]}}],
                "n": {"from": 4, "to": 12},
                "m": 1,
                "typo_knob": true
            }"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)), "got {err:?}");
    }

    #[test]
    fn bad_rational_string_is_a_number_error() {
        let cfg = parse(
            r#"{
                "task": "pade_row",
                "series": [{"rational": {"terms": [{"c": "x", "a": "1"}]}}],
                "n": {"from": 4, "to": 12},
                "m": 1
            }"#,
        )
        .expect("parses structurally");
        let err = cfg.build_series(Path::new(".")).unwrap_err();
        assert!(matches!(err, ConfigError::Number { .. }), "got {err:?}");
    }

    #[test]
    fn missing_coefficient_file_is_a_series_error() {
        let cfg = parse(
            r#"{
                "task": "diagnose",
                "series": [{"file": {"path": "no_such_file.txt"}}],
                "n": {"from": 4, "to": 12},
                "m": 1
            }"#,
        )
        .expect("parses structurally");
        let err = cfg.build_series(Path::new("/tmp")).unwrap_err();
        assert!(matches!(err, ConfigError::Series { .. }), "got {err:?}");
    }

    #[test]
    fn combine_builds_weighted_sum() {
        let cfg = parse(
            r#"{
                "task": "diagnose",
                "series": [{"combine": {"parts": [
                    {"weight": "1",
                     "series": {"rational": {"terms": [{"c": "1", "a": "1"}]}}},
                    {"weight": "1",
                     "series": {"log_branch": {"a": "2"}}}
                ], "label": "mix"}}],
                "n": {"from": 6, "to": 20},
                "m": 2
            }"#,
        )
        .expect("config");
        let f = &cfg.build_series(Path::new(".")).expect("series")[0];
        assert_eq!(f.label(), "mix");
        // Coefficient 1 of 1/(1-z) + ln(1 - z/2) is 1 - 1/2.
        let c1 = f.coeff(1).to_c64();
        assert!((c1.re - 0.5).abs() < 1e-12, "c1 = {c1}");
    }

    #[test]
    fn complex_pair_and_overrides() {
        let mut cfg = parse(
            r#"{
                "task": "pade_row",
                "series": [{"rational": {"terms": [
                    {"c": "1", "a": {"re": "0", "im": "2"}}
                ]}}],
                "n": {"from": 4, "to": 10},
                "m": 1,
                "backend": "float",
                "digits": 40
            }"#,
        )
        .expect("config");
        assert_eq!(cfg.backend(), Backend::Float { digits: 40 });
        cfg.apply_overrides(Some(50), Some(BackendChoice::Exact), Some("x".into()));
        assert_eq!(cfg.digits, 50);
        assert_eq!(cfg.backend(), Backend::Exact);
        assert_eq!(cfg.out, "x");
        let f = &cfg.build_series(Path::new(".")).expect("series")[0];
        // 1/(2i - z): coefficient 0 is 1/(2i) = -i/2.
        let c0 = f.coeff(0).to_c64();
        assert!((c0.re).abs() < 1e-12 && (c0.im + 0.5).abs() < 1e-12, "c0 = {c0}");
    }
}
