//! Experiment runner: executes a parsed configuration and writes the two
//! artifacts, `row.csv` and `report.json`.
//!
//! Determinism: JSON objects are tree-map backed (keys serialize sorted),
//! floats are written in shortest round-trip decimal form in both files, and
//! every serialized collection is a `Vec` with a fixed construction order,
//! so repeated runs of the same config produce byte-identical files. As a
//! standing invariant, every run re-loads the `row.csv` it just wrote and
//! re-evaluates the order conditions of each line against the input series
//! before reporting success.
//!
//! Failure classes map to the process exit codes: a malformed declaration
//! is [`RunError::Config`] (exit 2), a well-formed but inconsistent
//! experiment is [`RunError::Precondition`] (exit 3), and a computation
//! that starts but cannot be completed or verified is
//! [`RunError::Numerical`] (exit 4).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::approximants::{
    hermite_pade_row, incomplete_from_system, incomplete_row, telescope_steps, ApproxError,
    HermitePadeRecord, IncompletePadeRecord, TelescopeStep,
};
use crate::config::{ConfigError, ExperimentConfig, Knobs, Task};
use crate::diagnostics::{
    classify, estimate_r_star, fabry, hadamard_radius, lemma_bound_check,
    polynomial_independence, regularize_from_telescopes, system_pole_scan, theta, track_zeros,
    DiagnosticsError, FabryVerdict, RadiusValue, RateEstimate, RegularizedSequence, ScanParams,
    ScanReport, SingularityClass, SingularityReport, TrajectorySet,
};
use crate::diagnostics::projective_grid;
use crate::poly::Polynomial;
use crate::scalar::{fmt_f64, C64};
use crate::series::{PowerSeries, SeriesSystem};
use crate::tolerances::{residual_tol, ROW_ROUNDTRIP_TOL};

/// A failed run, classified for the exit-code contract.
#[derive(Debug)]
pub enum RunError {
    /// Malformed configuration or unreadable input declaration (exit 2).
    Config(ConfigError),
    /// Well-formed config that violates a task precondition (exit 3).
    Precondition(String),
    /// The computation started but failed or could not be verified (exit 4).
    Numerical(String),
    /// Output files could not be written (exit 1).
    Output(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Precondition(_) => 3,
            RunError::Numerical(_) => 4,
            RunError::Output(_) => 1,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Precondition(m) => write!(f, "precondition violated: {m}"),
            RunError::Numerical(m) => write!(f, "numerical failure: {m}"),
            RunError::Output(m) => write!(f, "output error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

fn approx_err(e: ApproxError) -> RunError {
    match e {
        ApproxError::InvalidOrder(_) | ApproxError::InsufficientCoefficients { .. } => {
            RunError::Precondition(e.to_string())
        }
        ApproxError::ResidualCheck { .. }
        | ApproxError::Root(_)
        | ApproxError::Degenerate(_) => RunError::Numerical(e.to_string()),
    }
}

fn diag_err(e: DiagnosticsError) -> RunError {
    match e {
        DiagnosticsError::TooFewPoints { .. }
        | DiagnosticsError::InsufficientCoefficients { .. }
        | DiagnosticsError::EmptyGrid
        | DiagnosticsError::NonUnitMultiIndex
        | DiagnosticsError::KeepoutViolation { .. }
        | DiagnosticsError::InvalidInput(_) => RunError::Precondition(e.to_string()),
        DiagnosticsError::Approx(a) => approx_err(a),
        _ => RunError::Numerical(e.to_string()),
    }
}

fn precondition(cond: bool, msg: impl FnOnce() -> String) -> Result<(), RunError> {
    if cond {
        Ok(())
    } else {
        Err(RunError::Precondition(msg()))
    }
}

/// Result of a completed run.
#[derive(Debug)]
pub struct RunOutcome {
    pub row_csv: PathBuf,
    pub report_json: PathBuf,
    /// Lines written to row.csv (excluding the header).
    pub rows: usize,
    /// Human-readable result lines for the CLI.
    pub summary: Vec<String>,
}

// ---------------------------------------------------------------------------
// JSON helpers. All floats funnel through `fnum` so non-finite values never
// reach the serializer (which cannot represent them) and finite values keep
// their shortest round-trip form.
// ---------------------------------------------------------------------------

fn fnum(v: f64) -> Value {
    if v.is_finite() {
        serde_json::Number::from_f64(v)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(fmt_f64(v)))
    } else {
        Value::String(fmt_f64(v))
    }
}

fn cnum(z: C64) -> Value {
    json!([fnum(z.re), fnum(z.im)])
}

fn radius_json(r: RadiusValue) -> Value {
    match r {
        RadiusValue::Finite(v) => fnum(v),
        RadiusValue::Infinite => json!("inf"),
    }
}

fn rate_json(est: &RateEstimate) -> Value {
    json!({
        "window": est.window,
        "tail": fnum(est.tail_estimate),
        "fit": fnum(est.fit_estimate),
        "superexponential": est.superexponential,
        "skipped": est.skipped,
        "points": est
            .per_n
            .iter()
            .map(|p| json!([p.n, fnum(p.value), fnum(p.root)]))
            .collect::<Vec<_>>(),
    })
}

fn skipped_json(reason: impl std::fmt::Display) -> Value {
    json!({ "skipped": reason.to_string() })
}

/// `Ok` maps through `f`; `Err` becomes a `{"skipped": reason}` marker. Used
/// for every diagnostic that is derived from the core row rather than being
/// the task itself: a derived estimator that cannot run is a reported
/// outcome, not a failed experiment.
fn soft<T>(r: &Result<T, DiagnosticsError>, f: impl FnOnce(&T) -> Value) -> Value {
    match r {
        Ok(v) => f(v),
        Err(e) => skipped_json(e),
    }
}

// ---------------------------------------------------------------------------
// row.csv
// ---------------------------------------------------------------------------

const ROW_HEADER: [&str; 11] = [
    "n",
    "m",
    "m_star",
    "lambda",
    "unique",
    "q",
    "roots",
    "residual",
    "residual_ok",
    "a_n",
    "qstar_roots",
];

/// One line of row.csv, already rendered to the packed cell formats:
/// complex numbers are `re im` pairs, lists are `;`-joined, all floats in
/// shortest round-trip decimal.
struct RowLine {
    n: usize,
    m_col: String,
    m_star_col: String,
    lambda: usize,
    unique: bool,
    q: String,
    roots: String,
    residual: f64,
    residual_ok: bool,
    a_col: String,
    qstar_col: String,
}

fn fmt_c(z: C64) -> String {
    format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))
}

fn pack_monic(q: &Polynomial) -> String {
    let monic = q.monic();
    let deg = monic.degree().max(0) as usize;
    (0..=deg)
        .map(|j| fmt_c(monic.coeff(j).to_c64()))
        .collect::<Vec<_>>()
        .join(";")
}

fn pack_roots(roots: &crate::roots::RootSet) -> String {
    roots
        .roots
        .iter()
        .map(|r| format!("{} {}", fmt_c(r.location), r.multiplicity))
        .collect::<Vec<_>>()
        .join(";")
}

fn residual_ok(residual: f64, exact: bool, digits: u32) -> bool {
    if exact {
        residual == 0.0
    } else {
        residual <= residual_tol(digits)
    }
}

fn telescope_cols(step: Option<&TelescopeStep>) -> (String, String) {
    match step {
        None => (String::new(), String::new()),
        Some(s) if s.degenerate => ("degenerate".to_string(), String::new()),
        Some(s) => (fmt_c(s.a.to_c64()), pack_roots(&s.qstar.roots)),
    }
}

fn rows_from_incomplete(
    records: &[IncompletePadeRecord],
    steps: &[TelescopeStep],
    m: usize,
    m_star: usize,
    digits: u32,
) -> Vec<RowLine> {
    let step_by_n: BTreeMap<usize, &TelescopeStep> = steps.iter().map(|s| (s.n, s)).collect();
    records
        .iter()
        .map(|r| {
            let (a_col, qstar_col) = telescope_cols(step_by_n.get(&r.n).copied());
            RowLine {
                n: r.n,
                m_col: m.to_string(),
                m_star_col: m_star.to_string(),
                lambda: r.lambda,
                unique: r.unique,
                q: pack_monic(&r.q),
                roots: pack_roots(&r.q_normalized.roots),
                residual: r.residual_max,
                residual_ok: residual_ok(r.residual_max, r.exact, digits),
                a_col,
                qstar_col,
            }
        })
        .collect()
}

fn rows_from_hermite(records: &[HermitePadeRecord], digits: u32) -> Vec<RowLine> {
    records
        .iter()
        .map(|r| RowLine {
            n: r.n,
            m_col: r
                .m
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("|"),
            m_star_col: String::new(),
            lambda: r.lambda,
            unique: r.unique,
            q: pack_monic(&r.q),
            roots: pack_roots(&r.q_normalized.roots),
            residual: r.residual_max,
            residual_ok: residual_ok(r.residual_max, r.exact, digits),
            a_col: String::new(),
            qstar_col: String::new(),
        })
        .collect()
}

fn write_row_csv(path: &Path, rows: &[RowLine]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| RunError::Output(format!("row.csv: {e}"));
    w.write_record(ROW_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.m_col.clone(),
            r.m_star_col.clone(),
            r.lambda.to_string(),
            r.unique.to_string(),
            r.q.clone(),
            r.roots.clone(),
            fmt_f64(r.residual),
            r.residual_ok.to_string(),
            r.a_col.clone(),
            r.qstar_col.clone(),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| RunError::Output(format!("row.csv: {e}")))?;
    std::fs::write(path, bytes)
        .map_err(|e| RunError::Output(format!("writing {}: {e}", path.display())))
}

fn parse_c64(cell: &str, what: &str) -> Result<C64, RunError> {
    let parts: Vec<&str> = cell.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(RunError::Numerical(format!(
            "row.csv {what} cell {cell:?} is not a `re im` pair"
        )));
    }
    let re: f64 = parts[0]
        .parse()
        .map_err(|e| RunError::Numerical(format!("row.csv {what}: {e}")))?;
    let im: f64 = parts[1]
        .parse()
        .map_err(|e| RunError::Numerical(format!("row.csv {what}: {e}")))?;
    Ok(C64::new(re, im))
}

/// Reload a written `row.csv` and re-evaluate each line's order conditions
/// against the input series, in double precision.
///
/// For a line of type `(n, m, m_star)` with gap `lambda`, the stored
/// denominator must satisfy `(q f)_j = 0` (relative to the size of the terms
/// entering the sum) for the `m_star` indices `j` ending at `n - lambda`;
/// simultaneous lines check the analogous window of length `m_k` for every
/// component. Returns the number of validated lines.
pub fn validate_row_csv(path: &Path, components: &[PowerSeries]) -> Result<usize, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Output(format!("reading {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| RunError::Numerical(format!("row.csv headers: {e}")))?
        .clone();
    let col = |name: &str| -> Result<usize, RunError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| RunError::Numerical(format!("row.csv lacks a {name} column")))
    };
    let (c_n, c_m, c_mstar, c_lambda, c_q) = (
        col("n")?,
        col("m")?,
        col("m_star")?,
        col("lambda")?,
        col("q")?,
    );

    let mut validated = 0usize;
    for (line_no, record) in reader.records().enumerate() {
        let record = record.map_err(|e| RunError::Numerical(format!("row.csv: {e}")))?;
        let cell = |i: usize| record.get(i).unwrap_or("");
        let n: usize = cell(c_n)
            .parse()
            .map_err(|e| RunError::Numerical(format!("row.csv line {}: n: {e}", line_no + 2)))?;
        let lambda: usize = cell(c_lambda).parse().map_err(|e| {
            RunError::Numerical(format!("row.csv line {}: lambda: {e}", line_no + 2))
        })?;
        let q: Vec<C64> = cell(c_q)
            .split(';')
            .map(|part| parse_c64(part, "q"))
            .collect::<Result<_, _>>()?;
        if q.is_empty() {
            return Err(RunError::Numerical(format!(
                "row.csv line {} has an empty denominator",
                line_no + 2
            )));
        }

        // The per-component condition window lengths: `m_star` for a scalar
        // line, the multi-index entries for a simultaneous line.
        let windows: Vec<usize> = if cell(c_mstar).is_empty() {
            cell(c_m)
                .split('|')
                .map(|p| {
                    p.parse().map_err(|e| {
                        RunError::Numerical(format!("row.csv line {}: m: {e}", line_no + 2))
                    })
                })
                .collect::<Result<_, _>>()?
        } else {
            vec![cell(c_mstar).parse().map_err(|e| {
                RunError::Numerical(format!("row.csv line {}: m_star: {e}", line_no + 2))
            })?]
        };
        if windows.len() != components.len() {
            return Err(RunError::Numerical(format!(
                "row.csv line {} declares {} components, run has {}",
                line_no + 2,
                windows.len(),
                components.len()
            )));
        }

        for (f, &mk) in components.iter().zip(windows.iter()) {
            let hi = n.saturating_sub(lambda);
            let lo = (n + 1).saturating_sub(mk + lambda);
            let phi: Vec<C64> = f.coeffs_upto(hi).iter().map(|c| c.to_c64()).collect();
            for j in lo..=hi {
                let mut acc = C64::new(0.0, 0.0);
                let mut scale = 0.0f64;
                for (c, qc) in q.iter().enumerate() {
                    if c > j {
                        break;
                    }
                    let term = qc * phi[j - c];
                    acc += term;
                    scale = scale.max(term.norm());
                }
                let rel = acc.norm() / scale.max(1e-300);
                if rel > ROW_ROUNDTRIP_TOL {
                    return Err(RunError::Numerical(format!(
                        "row.csv line {} fails its order condition at index {j} \
                         (relative residual {rel:.3e})",
                        line_no + 2
                    )));
                }
            }
        }
        validated += 1;
    }
    Ok(validated)
}

// ---------------------------------------------------------------------------
// Report sections
// ---------------------------------------------------------------------------

fn experiment_json(config: &ExperimentConfig) -> Value {
    json!({
        "label": config.label(),
        "task": config.task.name(),
        "backend": match config.backend {
            crate::config::BackendChoice::Exact => "exact",
            crate::config::BackendChoice::Float => "float",
        },
        "digits": config.digits,
        "n": { "from": config.n.from, "to": config.n.to },
        "m": config.m.map(Value::from).unwrap_or(Value::Null),
        "m_star": config.m_star.map(Value::from).unwrap_or(Value::Null),
        "multi_index": config
            .multi_index
            .as_ref()
            .map(|v| Value::from(v.clone()))
            .unwrap_or(Value::Null),
        "component": config.component.map(Value::from).unwrap_or(Value::Null),
    })
}

fn rows_summary_json(rows: &[RowLine]) -> Value {
    json!({
        "count": rows.len(),
        "unique": rows.iter().filter(|r| r.unique).count(),
        "all_residuals_ok": rows.iter().all(|r| r.residual_ok),
        "max_residual": fnum(rows.iter().map(|r| r.residual).fold(0.0, f64::max)),
        "lambda": rows.iter().map(|r| json!([r.n, r.lambda])).collect::<Vec<_>>(),
    })
}

fn fabry_json(f: &PowerSeries, terms: usize) -> Value {
    soft(&fabry(f, terms), |rep| {
        let (verdict, zeta, spread) = match &rep.verdict {
            FabryVerdict::Limit { zeta, spread } => ("limit", cnum(*zeta), fnum(*spread)),
            FabryVerdict::Divergent => ("divergent", Value::Null, Value::Null),
            FabryVerdict::None => ("none", Value::Null, Value::Null),
        };
        json!({
            "terms": terms,
            "verdict": verdict,
            "zeta": zeta,
            "spread": spread,
            "undefined_ratios": rep.undefined,
        })
    })
}

fn hadamard_levels_json(f: &PowerSeries, top: usize, knobs: &Knobs) -> Value {
    let levels: Vec<Value> = (0..=top)
        .map(|m| {
            soft(
                &hadamard_radius(f, m, knobs.hadamard_samples, knobs.window),
                |est| {
                    json!({
                        "m": m,
                        "radius": radius_json(est.radius),
                        "radius_windowed": radius_json(est.radius_windowed),
                        "zero_determinants": est.zero_determinants,
                    })
                },
            )
        })
        .collect();
    Value::Array(levels)
}

fn r_star_json(est: &Result<crate::diagnostics::RStarEstimate, DiagnosticsError>) -> Value {
    soft(est, |e| {
        json!({
            "radius": radius_json(e.radius),
            "radius_windowed": radius_json(e.radius_windowed),
            "nondegenerate": e.nondegenerate,
            "degenerate": e.degenerate,
            "a_n_rate": rate_json(&e.rate),
        })
    })
}

fn trajectories_json(traj: &Result<TrajectorySet, DiagnosticsError>) -> Value {
    soft(traj, |t| {
        json!({
            "threshold": fnum(t.threshold),
            "unmatched": t.unmatched.len(),
            "clusters": t
                .clusters
                .iter()
                .map(|c| {
                    json!({
                        "limit": cnum(c.limit),
                        "lambda": c.lambda,
                        "captures": c.members_per_n.len(),
                        "rate": c.rate.as_ref().map(rate_json).unwrap_or(Value::Null),
                    })
                })
                .collect::<Vec<_>>(),
        })
    })
}

fn class_json(class: &SingularityClass) -> (&'static str, Value) {
    match class {
        SingularityClass::Pole { order } => ("pole", Value::from(*order)),
        SingularityClass::BoundarySingularity => ("boundary_singularity", Value::Null),
        SingularityClass::QstarAttracted => ("qstar_attracted", Value::Null),
        SingularityClass::Undecided => ("undecided", Value::Null),
    }
}

fn singularities_json(rep: &Result<SingularityReport, DiagnosticsError>) -> Value {
    soft(rep, |r| {
        json!({
            "r_star": radius_json(r.r_star),
            "margin": fnum(r.margin),
            "attract_tol": fnum(r.attract_tol),
            "entries": r
                .entries
                .iter()
                .map(|e| {
                    let (class, order) = class_json(&e.class);
                    json!({
                        "location": cnum(e.location),
                        "modulus": fnum(e.modulus),
                        "class": class,
                        "order": order,
                        "lambda": e.lambda,
                        "qstar_distance": e
                            .qstar_distance
                            .map(fnum)
                            .unwrap_or(Value::Null),
                    })
                })
                .collect::<Vec<_>>(),
        })
    })
}

fn regularization_json(reg: &Result<RegularizedSequence, DiagnosticsError>) -> Value {
    soft(reg, |r| {
        json!({
            "count": r.ns.len(),
            "contact": r.lambda.clone(),
            "checks": {
                "tail_ratios_in_window": r.check_i,
                "slopes_nonincreasing": r.check_ii,
                "majorant": r.check_iii,
                "contact_nonempty": r.check_iv,
            },
            "tail_ratio_range": [fnum(r.tail_ratio_range.0), fnum(r.tail_ratio_range.1)],
        })
    })
}

fn bounds_json(rep: &Result<crate::diagnostics::BoundReport, DiagnosticsError>) -> Value {
    soft(rep, |b| {
        json!({
            "delta": fnum(b.delta),
            "k_radius": fnum(b.k_radius),
            "r_star": fnum(b.r_star),
            "grid": b.grid,
            "used": b.used,
            "skipped": b.skipped,
            "m8_sup": fnum(b.m8_sup),
            "m9_sup": fnum(b.m9_sup),
            "m8_flat": b.m8_flat.map(Value::from).unwrap_or(Value::Null),
            "m9_flat": b.m9_flat.map(Value::from).unwrap_or(Value::Null),
            "m8": b.m8.iter().map(|&(n, v)| json!([n, fnum(v)])).collect::<Vec<_>>(),
            "m9": b.m9.iter().map(|&(n, v)| json!([n, fnum(v)])).collect::<Vec<_>>(),
        })
    })
}

fn independence_json(
    rep: &Result<crate::diagnostics::IndependenceReport, DiagnosticsError>,
) -> Value {
    soft(rep, |r| {
        json!({
            "independent": r.independent,
            "n_trunc": r.n_trunc,
            "row_range": [r.row_range.0, r.row_range.1],
            "rank": r.rank,
            "columns": r.columns,
            "witness": r
                .witness
                .as_ref()
                .map(|ps| {
                    Value::Array(
                        ps.iter()
                            .map(|p| {
                                let deg = p.degree().max(0) as usize;
                                Value::Array(
                                    (0..=deg)
                                        .map(|j| cnum(p.coeff(j).to_c64()))
                                        .collect(),
                                )
                            })
                            .collect(),
                    )
                })
                .unwrap_or(Value::Null),
            "witness_residual": r.witness_residual.map(fnum).unwrap_or(Value::Null),
        })
    })
}

fn scan_json(rep: &ScanReport) -> Value {
    json!({
        "zeta": cnum(rep.zeta),
        "tol": fnum(rep.tol),
        "grid_points": rep.points.len(),
        "any_singularity": rep.any_singularity,
        "any_pole": rep.any_pole,
        "any_ring": rep.any_ring,
        "points": rep
            .points
            .iter()
            .map(|p| {
                json!({
                    "c": p.coefficients.iter().map(|&z| cnum(z)).collect::<Vec<_>>(),
                    "vanished": p.vanished,
                    "r0": p.r0.map(radius_json).unwrap_or(Value::Null),
                    "r1": p.r1.map(radius_json).unwrap_or(Value::Null),
                    "fabry_zeta": p.fabry_zeta.map(cnum).unwrap_or(Value::Null),
                    "row_root": p.row_root.map(cnum).unwrap_or(Value::Null),
                    "singularity_witness": p.singularity_witness,
                    "pole_witness": p.pole_witness,
                    "ring_witness": p.ring_witness,
                })
            })
            .collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Scalar telescope battery, shared by the row tasks and the system diagnose
// (through the component view).
// ---------------------------------------------------------------------------

struct ScalarBattery {
    sections: Map<String, Value>,
    summary: Vec<String>,
}

/// Run the inverse-direction instruments on an incomplete-row stream:
/// telescope radius, zero trajectories, classification, regularized
/// majorant, and (optionally) the two boundedness streams.
fn scalar_battery(
    records: &[IncompletePadeRecord],
    steps: &[TelescopeStep],
    f: &PowerSeries,
    m_total: usize,
    knobs: &Knobs,
    with_bounds: bool,
) -> ScalarBattery {
    let mut sections = Map::new();
    let mut summary = Vec::new();

    // Denominator drift: distance of each monic q to the last one. The last
    // (most converged) denominator stands in for the limit, so the stream
    // measures the geometric convergence rate of the row denominators
    // without assuming the limit is known.
    let q_drift = records
        .last()
        .map(|last| {
            let q_seq: Vec<(usize, Polynomial)> = records
                .iter()
                .take(records.len() - 1)
                .filter(|r| r.q.degree() == last.q.degree())
                .map(|r| (r.n, r.q.clone()))
                .collect();
            if q_seq.len() < 3 {
                Err(DiagnosticsError::TooFewPoints {
                    found: q_seq.len(),
                    need: 3,
                })
            } else {
                theta(&q_seq, &last.q, knobs.window)
            }
        })
        .unwrap_or(Err(DiagnosticsError::TooFewPoints { found: 0, need: 1 }));
    let mut rates = Map::new();
    rates.insert("q_drift".into(), soft(&q_drift, rate_json));
    sections.insert("rates".into(), Value::Object(rates));

    // Radii.
    let r_star = estimate_r_star(steps, knobs.window);
    let mut radii = Map::new();
    radii.insert("levels".into(), hadamard_levels_json(f, m_total, knobs));
    radii.insert("fabry".into(), fabry_json(f, knobs.fabry_terms));
    radii.insert("r_star".into(), r_star_json(&r_star));
    sections.insert("radii".into(), Value::Object(radii));
    if let Ok(est) = &r_star {
        summary.push(match est.radius {
            RadiusValue::Finite(v) => format!("telescope radius R* = {}", fmt_f64(v)),
            RadiusValue::Infinite => {
                "telescope constants vanish from some point on (exact recovery signature)"
                    .to_string()
            }
        });
    }

    // Trajectories of the denominator zeros.
    let lists: Vec<(usize, crate::roots::RootSet)> = records
        .iter()
        .map(|r| (r.n, r.q_normalized.roots.clone()))
        .collect();
    let traj = track_zeros(&lists, knobs.window);
    sections.insert("trajectories".into(), trajectories_json(&traj));

    // Regularized majorant of the telescope constants.
    let reg = match &r_star {
        Ok(est) => match est.radius {
            RadiusValue::Finite(v) => regularize_from_telescopes(steps, v),
            RadiusValue::Infinite => Err(DiagnosticsError::InvalidInput(
                "telescope constants vanish identically; nothing to regularize".into(),
            )),
        },
        Err(_) => Err(DiagnosticsError::InvalidInput(
            "no telescope radius estimate".into(),
        )),
    };
    sections.insert("regularization".into(), regularization_json(&reg));

    // Classification of the trajectory limits.
    let contact: Vec<usize> = reg.as_ref().map(|r| r.lambda.clone()).unwrap_or_default();
    let classified = match (&traj, &r_star) {
        (Ok(t), Ok(est)) => classify(
            t,
            &est.radius,
            &contact,
            steps,
            knobs.margin,
            knobs.attract_tol,
        ),
        (Err(_), _) => Err(DiagnosticsError::InvalidInput(
            "no zero trajectories to classify".into(),
        )),
        (_, Err(_)) => Err(DiagnosticsError::InvalidInput(
            "no telescope radius to classify against".into(),
        )),
    };
    sections.insert("singularities".into(), singularities_json(&classified));
    if let Ok(rep) = &classified {
        let poles = rep.poles().count();
        summary.push(format!(
            "classified {} cluster(s): {} pole(s), {} on the boundary, {} cofactor-attracted, {} undecided",
            rep.entries.len(),
            poles,
            rep.entries
                .iter()
                .filter(|e| matches!(e.class, SingularityClass::BoundarySingularity))
                .count(),
            rep.entries
                .iter()
                .filter(|e| matches!(e.class, SingularityClass::QstarAttracted))
                .count(),
            rep.entries
                .iter()
                .filter(|e| matches!(e.class, SingularityClass::Undecided))
                .count(),
        ));
    }

    // Boundedness streams on the annulus and the compact disk.
    if with_bounds {
        let bounds = match &r_star {
            Ok(est) => match est.radius {
                RadiusValue::Finite(r) => {
                    let k_radius = if knobs.k_radius > 0.0 {
                        knobs.k_radius
                    } else {
                        0.5 * r * (-knobs.delta).exp()
                    };
                    let poles: Vec<C64> = classified
                        .as_ref()
                        .map(|rep| rep.poles().map(|e| e.location).collect())
                        .unwrap_or_default();
                    lemma_bound_check(
                        records,
                        f,
                        reg.as_ref().ok(),
                        r,
                        knobs.delta,
                        k_radius,
                        &poles,
                        knobs.keepout,
                        knobs.grid,
                        knobs.tail_terms,
                    )
                }
                RadiusValue::Infinite => Err(DiagnosticsError::InvalidInput(
                    "telescope radius is infinite; the annulus streams are undefined".into(),
                )),
            },
            Err(_) => Err(DiagnosticsError::InvalidInput(
                "no telescope radius estimate".into(),
            )),
        };
        sections.insert("bounds".into(), bounds_json(&bounds));
    }

    ScalarBattery { sections, summary }
}

// ---------------------------------------------------------------------------
// Task drivers
// ---------------------------------------------------------------------------

fn the_scalar_series(series: &[PowerSeries], task: Task) -> Result<&PowerSeries, RunError> {
    precondition(series.len() == 1, || {
        format!(
            "task {} takes exactly one series, config declares {}",
            task.name(),
            series.len()
        )
    })?;
    Ok(&series[0])
}

fn require_m(config: &ExperimentConfig) -> Result<usize, RunError> {
    let m = config.m.ok_or_else(|| {
        RunError::Precondition(format!("task {} needs the field m", config.task.name()))
    })?;
    precondition(m >= 1, || "m must be at least 1".to_string())?;
    Ok(m)
}

fn require_multi_index(config: &ExperimentConfig, d: usize) -> Result<Vec<usize>, RunError> {
    let multi = config.multi_index.clone().ok_or_else(|| {
        RunError::Precondition(format!(
            "task {} needs the field multi_index",
            config.task.name()
        ))
    })?;
    precondition(multi.len() == d, || {
        format!(
            "multi_index has {} entries for {} series",
            multi.len(),
            d
        )
    })?;
    precondition(multi.iter().all(|&mk| mk >= 1), || {
        "multi_index entries must be at least 1".to_string()
    })?;
    Ok(multi)
}

struct TaskOutput {
    rows: Vec<RowLine>,
    sections: Map<String, Value>,
    summary: Vec<String>,
}

fn run_scalar_row(
    config: &ExperimentConfig,
    series: &[PowerSeries],
    with_inverse: bool,
    with_bounds: bool,
) -> Result<TaskOutput, RunError> {
    let f = the_scalar_series(series, config.task)?;
    let m = require_m(config)?;
    let m_star = match config.task {
        // The classical row is the m_star = m case; a differing explicit
        // m_star would silently change the task, so reject it.
        Task::PadeRow => {
            precondition(config.m_star.is_none() || config.m_star == Some(m), || {
                "pade_row fixes m_star = m; use incomplete_row for m_star < m".to_string()
            })?;
            m
        }
        _ => config.m_star.unwrap_or(m),
    };
    precondition((1..=m).contains(&m_star), || {
        format!("need m >= m_star >= 1, got m = {m}, m_star = {m_star}")
    })?;

    let records =
        incomplete_row(f, m, m_star, config.n.range(), config.digits).map_err(approx_err)?;
    let steps = telescope_steps(&records, config.digits).map_err(approx_err)?;
    let rows = rows_from_incomplete(&records, &steps, m, m_star, config.digits);

    let mut sections = Map::new();
    let mut summary = vec![format!(
        "{} rows of type ({}..={}, {m}, {m_star}) on {}",
        rows.len(),
        config.n.from,
        config.n.to,
        f.label()
    )];
    if with_inverse {
        let battery = scalar_battery(&records, &steps, f, m, &config.knobs, with_bounds);
        sections.extend(battery.sections);
        summary.extend(battery.summary);
    } else {
        // The classical row still reports rates and radii, just not the
        // telescope-derived instruments.
        let battery = scalar_battery(&records, &steps, f, m, &config.knobs, false);
        sections.extend(battery.sections);
        summary.extend(battery.summary);
    }
    Ok(TaskOutput {
        rows,
        sections,
        summary,
    })
}

fn run_hermite_row(
    config: &ExperimentConfig,
    series: &[PowerSeries],
    base_label: String,
) -> Result<TaskOutput, RunError> {
    let sys = SeriesSystem::new(series.to_vec(), base_label);
    let multi = require_multi_index(config, sys.d())?;
    let records =
        hermite_pade_row(&sys, &multi, config.n.range(), config.digits).map_err(approx_err)?;
    let rows = rows_from_hermite(&records, config.digits);

    let mut sections = Map::new();
    // Common-denominator drift against the most converged row.
    let q_drift = records
        .last()
        .map(|last| {
            let q_seq: Vec<(usize, Polynomial)> = records
                .iter()
                .take(records.len() - 1)
                .filter(|r| r.q.degree() == last.q.degree())
                .map(|r| (r.n, r.q.clone()))
                .collect();
            if q_seq.len() < 3 {
                Err(DiagnosticsError::TooFewPoints {
                    found: q_seq.len(),
                    need: 3,
                })
            } else {
                theta(&q_seq, &last.q, config.knobs.window)
            }
        })
        .unwrap_or(Err(DiagnosticsError::TooFewPoints { found: 0, need: 1 }));
    let mut rates = Map::new();
    rates.insert("q_drift".into(), soft(&q_drift, rate_json));
    sections.insert("rates".into(), Value::Object(rates));

    // Per-component Taylor radius and ratio test.
    let per_component: Vec<Value> = sys
        .components
        .iter()
        .map(|f| {
            json!({
                "label": f.label(),
                "taylor": soft(
                    &hadamard_radius(f, 0, config.knobs.hadamard_samples, config.knobs.window),
                    |est| radius_json(est.radius),
                ),
                "fabry": fabry_json(f, config.knobs.fabry_terms),
            })
        })
        .collect();
    let mut radii = Map::new();
    radii.insert("components".into(), Value::Array(per_component));
    sections.insert("radii".into(), Value::Object(radii));

    let summary = vec![format!(
        "{} simultaneous rows for multi-index {:?} on {} component(s)",
        rows.len(),
        multi,
        sys.d()
    )];
    Ok(TaskOutput {
        rows,
        sections,
        summary,
    })
}

fn run_diagnose(
    config: &ExperimentConfig,
    series: &[PowerSeries],
) -> Result<TaskOutput, RunError> {
    if series.len() == 1 {
        return run_scalar_row(config, series, true, true);
    }

    // System diagnose: simultaneous rows feed row.csv, one component view
    // drives the telescope instruments, and the independence check runs on
    // the whole system.
    let mut out = run_hermite_row(config, series, config.label())?;
    let sys = SeriesSystem::new(series.to_vec(), config.label());
    let multi = require_multi_index(config, sys.d())?;
    let k = config.component.unwrap_or(0);
    precondition(k < sys.d(), || {
        format!("component {k} out of range for {} series", sys.d())
    })?;

    let mut comp_records = Vec::new();
    for n in config.n.range() {
        comp_records
            .push(incomplete_from_system(&sys, n, &multi, k, config.digits).map_err(approx_err)?);
    }
    let comp_steps = telescope_steps(&comp_records, config.digits).map_err(approx_err)?;
    let m_total: usize = multi.iter().sum();
    let battery = scalar_battery(
        &comp_records,
        &comp_steps,
        &sys.components[k],
        m_total,
        &config.knobs,
        true,
    );
    let mut component_view = Map::new();
    component_view.insert("component".into(), Value::from(k));
    component_view.insert("label".into(), Value::from(sys.components[k].label()));
    component_view.extend(battery.sections);
    out.sections
        .insert("component_view".into(), Value::Object(component_view));
    out.summary.extend(
        battery
            .summary
            .into_iter()
            .map(|l| format!("component {k}: {l}")),
    );

    let n_trunc = if config.knobs.independence_trunc > 0 {
        config.knobs.independence_trunc
    } else {
        2 * m_total + 20 + config.knobs.window
    };
    let indep = polynomial_independence(&sys, &multi, n_trunc);
    if let Ok(rep) = &indep {
        out.summary.push(format!(
            "polynomial independence at truncation {}: {}",
            rep.n_trunc,
            if rep.independent { "independent" } else { "dependent" }
        ));
    }
    out.sections
        .insert("independence".into(), independence_json(&indep));
    Ok(out)
}

fn run_scan(config: &ExperimentConfig, series: &[PowerSeries]) -> Result<TaskOutput, RunError> {
    let sys = SeriesSystem::new(series.to_vec(), config.label());
    let multi = config
        .multi_index
        .clone()
        .unwrap_or_else(|| vec![1; sys.d()]);
    precondition(multi.len() == sys.d() && multi.iter().all(|&mk| mk == 1), || {
        "conjecture_scan requires the multi-index (1, ..., 1)".to_string()
    })?;
    precondition(!config.zeta.is_empty(), || {
        "conjecture_scan needs at least one zeta target".to_string()
    })?;

    // The unit-index simultaneous row gives the scan its row.csv context.
    let records =
        hermite_pade_row(&sys, &multi, config.n.range(), config.digits).map_err(approx_err)?;
    let rows = rows_from_hermite(&records, config.digits);

    let grid = projective_grid(&sys.backend(), sys.d()).map_err(diag_err)?;
    let params = ScanParams {
        n_samples: config.knobs.scan_samples,
        window: config.knobs.window,
        row_range: (config.knobs.scan_rows[0], config.knobs.scan_rows[1]),
        tol: config.knobs.scan_tol,
        fabry_n: config.knobs.scan_fabry,
        digits: config.digits,
    };
    let mut scans = Vec::new();
    let mut summary = vec![format!(
        "scanning {} combination(s) against {} target(s)",
        grid.len(),
        config.zeta.len()
    )];
    for z in &config.zeta {
        let zeta = C64::new(z.re, z.im);
        let rep =
            system_pole_scan(&sys, &multi, zeta, &grid, &params).map_err(diag_err)?;
        summary.push(format!(
            "zeta = {}: singularity witnesses {}, pole witnesses {}, ring matches {}",
            fmt_c(zeta),
            rep.singularity_points().count(),
            rep.pole_points().count(),
            rep.ring_points().count(),
        ));
        scans.push(scan_json(&rep));
    }

    let n_trunc = if config.knobs.independence_trunc > 0 {
        config.knobs.independence_trunc
    } else {
        2 * sys.d() + 20 + config.knobs.window
    };
    let indep = polynomial_independence(&sys, &multi, n_trunc);

    let mut sections = Map::new();
    sections.insert("scan".into(), Value::Array(scans));
    sections.insert("independence".into(), independence_json(&indep));
    Ok(TaskOutput {
        rows,
        sections,
        summary,
    })
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Execute `config` and write `row.csv` and `report.json` into its output
/// directory. Relative coefficient-file paths resolve against `base_dir`
/// (the directory the config file came from); the output directory resolves
/// against the process working directory.
pub fn run(config: &ExperimentConfig, base_dir: &Path) -> Result<RunOutcome, RunError> {
    precondition(!config.n.is_empty(), || {
        format!("empty row range {}..={}", config.n.from, config.n.to)
    })?;
    let series = config.build_series(base_dir)?;

    let output = match config.task {
        Task::PadeRow => run_scalar_row(config, &series, false, false)?,
        Task::IncompleteRow => run_scalar_row(config, &series, true, false)?,
        Task::Diagnose => run_diagnose(config, &series)?,
        Task::HermitePadeRow => run_hermite_row(config, &series, config.label())?,
        Task::ConjectureScan => run_scan(config, &series)?,
    };

    let out_dir = PathBuf::from(&config.out);
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| RunError::Output(format!("creating {}: {e}", out_dir.display())))?;
    let row_path = out_dir.join("row.csv");
    let report_path = out_dir.join("report.json");

    write_row_csv(&row_path, &output.rows)?;

    let mut report = Map::new();
    report.insert("experiment".into(), experiment_json(config));
    report.insert("rows".into(), rows_summary_json(&output.rows));
    report.extend(output.sections);
    let mut text = serde_json::to_string_pretty(&Value::Object(report))
        .map_err(|e| RunError::Output(format!("report.json: {e}")))?;
    text.push('\n');
    std::fs::write(&report_path, text)
        .map_err(|e| RunError::Output(format!("writing {}: {e}", report_path.display())))?;

    // Standing invariant: the written row.csv must re-validate against the
    // input series before the run may report success.
    let validated = validate_row_csv(&row_path, &series)?;
    if validated != output.rows.len() {
        return Err(RunError::Numerical(format!(
            "row.csv validated {} of {} lines",
            validated,
            output.rows.len()
        )));
    }

    let mut summary = output.summary;
    summary.push(format!("row.csv: {} line(s) re-validated on reload", validated));
    Ok(RunOutcome {
        row_csv: row_path,
        report_json: report_path,
        rows: validated,
        summary,
    })
}
