//! Parameter sweeps over the spike width `ε`, log-law fits and export.
//!
//! Records are computed independently (in parallel) and merged in
//! descending `ε`, so the output never depends on scheduling.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bvp::{solve_logistic, solve_neumann_reference, LogisticProblem, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::grid::{l1_ratio, make_grid, radial_integral, Domain};
use crate::operator::Boundary;
use crate::subsuper::{analytic_sub_ratio, region_contains, ConstantsPoint};

/// Status string of a successful record.
pub const STATUS_OK: &str = "ok";

/// CSV header, in column order.
pub const CSV_HEADER: [&str; 10] = [
    "n",
    "eps",
    "d",
    "lambda1",
    "ratio",
    "lower_bound",
    "upper_bound",
    "grid_N",
    "wallclock_ms",
    "status",
];

/// One `ε` of a sweep. Numeric outcomes are `None` when the solve failed;
/// `status` then carries the error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub eps: f64,
    pub d: f64,
    pub lambda1: Option<f64>,
    pub ratio: Option<f64>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    #[serde(rename = "grid_N")]
    pub grid_n: usize,
    pub wallclock_ms: f64,
    pub status: String,
}

impl SweepRecord {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }

    /// `lower <= ratio <= upper` up to `rel_slack` relative to the ratio.
    pub fn sandwich_holds(&self, rel_slack: f64) -> bool {
        match (self.lower_bound, self.ratio, self.upper_bound) {
            (Some(lo), Some(r), Some(hi)) => {
                let tol = rel_slack * r.abs();
                lo <= r + tol && r <= hi + tol
            }
            _ => false,
        }
    }

    fn failed(n: usize, eps: f64, d: f64, grid_n: usize, err: &Error) -> Self {
        SweepRecord {
            n,
            eps,
            d,
            lambda1: None,
            ratio: None,
            lower_bound: None,
            upper_bound: None,
            grid_n,
            wallclock_ms: 0.0,
            status: format!("failed: {err}"),
        }
    }
}

/// Grid and timing settings shared by the sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// Minimum number of grid intervals; see [`grid_size`].
    pub grid_n: usize,
    pub tol: f64,
    /// Record wall-clock times. Off by default so repeated runs produce
    /// identical output.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid_n: 4096,
            tol: DEFAULT_TOL,
            timing: false,
        }
    }
}

/// `max(min_intervals, 64 ⌈1/√ε⌉)`: keeps layers of width `√ε` resolved.
pub fn grid_size(min_intervals: usize, eps: f64) -> usize {
    let layer = 64 * (1.0 / eps.sqrt()).ceil() as usize;
    min_intervals.max(layer)
}

/// `ε = 10^-a, ..., 10^-b` with `per_decade` points per decade.
pub fn eps_decades(a: u32, b: u32, per_decade: u32) -> Result<Vec<f64>> {
    if a > b || per_decade == 0 {
        return Err(Error::invalid(format!(
            "need a <= b and per_decade >= 1, got {a}:{b} x{per_decade}"
        )));
    }
    let k = per_decade as f64;
    let steps = (b - a) * per_decade;
    Ok((0..=steps)
        .map(|j| 10f64.powf(-(a as f64 + j as f64 / k)))
        .collect())
}

fn check_eps_list(eps_list: &[f64]) -> Result<()> {
    if let Some(bad) = eps_list.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {bad}")));
    }
    Ok(())
}

fn run_sorted<F>(eps_list: &[f64], one: F) -> Vec<SweepRecord>
where
    F: Fn(f64) -> SweepRecord + Sync,
{
    let mut records: Vec<SweepRecord> = eps_list.par_iter().map(|&eps| one(eps)).collect();
    records.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    records
}

fn elapsed_ms(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

/// Interval sweep with `d = √ε`: Dirichlet ratio bracketed by the
/// sub-solution built from the Neumann reference `v` and by `∫v`.
///
/// `√ε < 1 - ε` requires `ε` below about `0.38`; larger values are
/// rejected.
pub fn sweep_1d(eps_list: &[f64], config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    check_eps_list(eps_list)?;
    if let Some(bad) = eps_list.iter().find(|e| e.sqrt() >= 1.0 - **e) {
        return Err(Error::invalid(format!(
            "d = sqrt(eps) must stay below 1 - eps, eps = {bad}"
        )));
    }
    Ok(run_sorted(eps_list, |eps| {
        let start = Instant::now();
        let grid_n = grid_size(config.grid_n, eps);
        let d = eps.sqrt();
        match record_1d(eps, d, grid_n, config.tol) {
            Ok(mut rec) => {
                rec.wallclock_ms = elapsed_ms(start, config.timing);
                rec
            }
            Err(e) => SweepRecord::failed(1, eps, d, grid_n, &e),
        }
    }))
}

fn record_1d(eps: f64, d: f64, grid_n: usize, tol: f64) -> Result<SweepRecord> {
    let grid = Arc::new(make_grid(Domain::interval(), grid_n, eps)?);
    let problem = LogisticProblem::spike(1, eps, d, Boundary::Dirichlet, &grid)?;
    let report = solve_logistic(&problem, tol)?;
    let ratio = l1_ratio(&report.solution, problem.resource(), 1)?;
    let v = solve_neumann_reference(eps, &grid, tol)?;
    let mass = radial_integral(problem.resource(), 1);
    let int_v = radial_integral(&v, 1);
    let tail = *v.values().last().expect("nonempty grid");
    Ok(SweepRecord {
        n: 1,
        eps,
        d,
        lambda1: report.lambda1,
        ratio: Some(ratio),
        lower_bound: Some((1.0 - eps.powf(0.25)) * (int_v - tail) / mass),
        upper_bound: Some(int_v / mass),
        grid_n,
        wallclock_ms: 0.0,
        status: STATUS_OK.to_string(),
    })
}

/// Ball sweep with `d = c1 / ε^(n-2)`: the Dirichlet ratio against the
/// closed-form sub-solution ratio and the super-solution ratio `ε^-n`.
pub fn sweep_nd(
    n: usize,
    c1: f64,
    c2: f64,
    eps_list: &[f64],
    config: &SweepConfig,
) -> Result<Vec<SweepRecord>> {
    check_eps_list(eps_list)?;
    let point = ConstantsPoint::new(n, c1, c2)?;
    if !region_contains(&point) {
        return Err(Error::invalid(format!(
            "({c1}, {c2}) lies outside the admissible region for n = {n}"
        )));
    }
    Ok(run_sorted(eps_list, |eps| {
        let start = Instant::now();
        let grid_n = grid_size(config.grid_n, eps);
        let d = c1 * eps.powi(2 - n as i32);
        match record_nd(n, eps, d, c2, grid_n, config.tol) {
            Ok(mut rec) => {
                rec.wallclock_ms = elapsed_ms(start, config.timing);
                rec
            }
            Err(e) => SweepRecord::failed(n, eps, d, grid_n, &e),
        }
    }))
}

fn record_nd(n: usize, eps: f64, d: f64, c2: f64, grid_n: usize, tol: f64) -> Result<SweepRecord> {
    let grid = Arc::new(make_grid(Domain::ball(n)?, grid_n, eps)?);
    let problem = LogisticProblem::spike(n, eps, d, Boundary::Dirichlet, &grid)?;
    let report = solve_logistic(&problem, tol)?;
    let ratio = l1_ratio(&report.solution, problem.resource(), n)?;
    Ok(SweepRecord {
        n,
        eps,
        d,
        lambda1: report.lambda1,
        ratio: Some(ratio),
        lower_bound: Some(analytic_sub_ratio(n, eps, c2)?),
        upper_bound: Some(eps.powi(-(n as i32))),
        grid_n,
        wallclock_ms: 0.0,
        status: STATUS_OK.to_string(),
    })
}

/// Least-squares line `ratio ≈ slope |log ε| + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits the successful records; fewer than three is an error.
pub fn fit_log_slope(records: &[SweepRecord]) -> Result<LogFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.is_ok())
        .filter_map(|r| r.ratio.map(|y| (r.eps.ln().abs(), y)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 successful records, got {}",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all records share one eps".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LogFit {
        slope,
        intercept,
        r_squared,
    })
}

/// `x` with 12 significant digits in the style of C's `%.12g`.
pub fn format_sig(x: f64) -> String {
    format_g(x, 12)
}

pub(crate) fn format_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

/// CSV text of the records in descending `ε`.
pub fn to_csv(records: &[SweepRecord]) -> Result<String> {
    let mut sorted = records.to_vec();
    sorted.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::numerical(format!("csv encoding: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &sorted {
        w.write_record([
            r.n.to_string(),
            format_sig(r.eps),
            format_sig(r.d),
            opt(r.lambda1),
            opt(r.ratio),
            opt(r.lower_bound),
            opt(r.upper_bound),
            r.grid_n.to_string(),
            format_sig(r.wallclock_ms),
            r.status.clone(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::numerical(format!("csv encoding: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// JSON array of the records in descending `ε`; floats round-trip exactly.
pub fn to_json(records: &[SweepRecord]) -> Result<String> {
    let mut sorted = records.to_vec();
    sorted.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    serde_json::to_string_pretty(&sorted).map_err(|e| Error::numerical(format!("json encoding: {e}")))
}

pub fn from_json(text: &str) -> Result<Vec<SweepRecord>> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("json decoding: {e}")))
}

/// Writes the records to `path`.
pub fn export(records: &[SweepRecord], format: ExportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ExportFormat::Csv => to_csv(records)?,
        ExportFormat::Json => to_json(records)?,
    };
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    out.write_all(text.as_bytes()).map_err(io)?;
    out.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(eps: f64, ratio: f64) -> SweepRecord {
        SweepRecord {
            n: 2,
            eps,
            d: 0.05,
            lambda1: Some(0.3),
            ratio: Some(ratio),
            lower_bound: Some(ratio - 0.1),
            upper_bound: Some(1.0 / eps),
            grid_n: 4096,
            wallclock_ms: 0.0,
            status: STATUS_OK.into(),
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(1e-5), "1e-05");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0 * 1e-7), "6.66666666667e-08");
        assert_eq!(format_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_sig(4096.0), "4096");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(0.0001), "0.0001");
    }

    #[test]
    fn decades_expand_inclusively() {
        assert_eq!(eps_decades(1, 4, 1).unwrap(), vec![0.1, 0.01, 0.001, 0.0001]);
        assert_eq!(eps_decades(2, 3, 2).unwrap().len(), 3);
        assert!(eps_decades(3, 1, 1).is_err());
    }

    #[test]
    fn grid_size_tracks_layer_width() {
        assert_eq!(grid_size(4096, 0.1), 4096);
        assert_eq!(grid_size(64, 1e-4), 6400);
    }

    #[test]
    fn fit_recovers_a_line() {
        let c2: f64 = 0.2;
        let recs: Vec<_> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&e| rec(e, analytic_sub_ratio(2, e, c2).unwrap()))
            .collect();
        let fit = fit_log_slope(&recs).unwrap();
        assert!((fit.slope - c2 * 2.0 / std::f64::consts::E).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let flat: Vec<_> = [1e-2, 1e-3, 1e-4].iter().map(|&e| rec(e, 1.5)).collect();
        assert_eq!(fit_log_slope(&flat).unwrap().slope, 0.0);
        assert!(matches!(
            fit_log_slope(&flat[..2]),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&[rec(1e-3, 2.0), rec(1e-1, 1.0), rec(1e-2, 1.5)]).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].starts_with("2,0.1,"));
        assert_eq!(to_csv(&[]).unwrap().lines().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut failed = rec(1e-4, 0.0);
        failed.ratio = None;
        failed.status = "failed: numerical failure: x".into();
        let recs = vec![rec(0.1, 1.0 / 3.0), rec(1e-2, std::f64::consts::PI), failed];
        assert_eq!(from_json(&to_json(&recs).unwrap()).unwrap(), recs);
    }
}
