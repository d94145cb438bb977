//! Command-line front end. [`run`] parses the arguments, runs one
//! experiment and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | invalid input (bad flags, parameters or paths) |
//! | 2 | numerical failure |
//! | 3 | a PASS/FAIL check failed |
//!
//! Numbers are printed with 12 significant digits so logs diff cleanly.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bessel;
use crate::bvp::{self, LogisticProblem, DEFAULT_TOL};
use crate::eigen::{self, sample_spike, SpikeProfile};
use crate::error::{Error, Result};
use crate::grid::{integrate_weighted, l1_ratio, make_grid, radial_integral, Domain, Grid};
use crate::operator::Boundary;
use crate::subsuper::{self, ConstantsPoint, ExplicitFamily};
use crate::svg::{line_chart, Series};
use crate::sweep::{self, format_sig, ExportFormat, SweepConfig, SweepRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Sandwich slack for sweep records and solver ordering checks.
const SWEEP_SLACK: f64 = 1e-3;
const ORDER_SLACK: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "massratio",
    version,
    about = "Mass ratio experiments for the logistic equation with spike resources"
)]
struct Cli {
    /// Print progress details to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Principal eigenvalue of the spike resource by every applicable route.
    Eig(EigArgs),
    /// Solve the logistic problem with a spike resource.
    Solve(SolveArgs),
    /// Check the sub/super-solution inequalities and sandwiches.
    Verify(VerifyArgs),
    /// Corners of the admissible constants region and membership of a point.
    Region(RegionArgs),
    /// Sweep eps over decades and export the records.
    Sweep(SweepArgs),
    /// Compare the Bessel evaluators against the reference series.
    BesselSelftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EigMethod {
    Trans,
    Bessel,
    Discrete,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(name = "1d")]
    OneD,
    #[value(name = "nd")]
    ND,
}

#[derive(Debug, Args)]
struct EigArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value = "all")]
    method: EigMethod,
    /// Minimum number of grid intervals for the discrete route.
    #[arg(long, default_value_t = 4096)]
    intervals: usize,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    d: f64,
    #[arg(long, value_enum)]
    bc: Bc,
    #[arg(long, default_value_t = 4096)]
    intervals: usize,
    /// Write the nodal solution as CSV (`r,u`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long, default_value_t = 4096)]
    intervals: usize,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[arg(long)]
    n: usize,
    /// A point `c1,c2` to test.
    #[arg(long, value_parser = parse_point)]
    point: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Decades `a:b`, expanding to eps = 10^-a, ..., 10^-b.
    #[arg(long, value_parser = parse_decades)]
    eps_decades: (u32, u32),
    #[arg(long, default_value_t = 1)]
    per_decade: u32,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long, default_value_t = 4096)]
    intervals: usize,
    /// Output file; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write an SVG chart of ratio against |log eps|.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Record wall-clock times (makes the output run dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 5000)]
    samples: usize,
}

fn parse_point(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected c1,c2")?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_decades(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let p = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Collects PASS/FAIL lines.
struct Checks<'a> {
    out: &'a mut dyn Write,
    failed: bool,
}

impl<'a> Checks<'a> {
    fn new(out: &'a mut dyn Write) -> Self {
        Checks { out, failed: false }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) -> Result<()> {
        self.failed |= !ok;
        let tag = if ok { "PASS" } else { "FAIL" };
        line(self.out, format!("{tag} {name}: {detail}"))
    }

    fn line(&mut self, text: String) -> Result<()> {
        line(self.out, text)
    }

    fn exit_code(&self) -> i32 {
        if self.failed {
            EXIT_CHECK_FAILED
        } else {
            EXIT_OK
        }
    }
}

fn line(out: &mut dyn Write, text: String) -> Result<()> {
    writeln!(out, "{text}").map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NumericalFailure(_) => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INVALID
                }
            };
        }
    };
    let verbose = cli.verbose > 0;
    let result = match cli.command {
        Command::Eig(a) => eig(&a, out),
        Command::Solve(a) => solve(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Region(a) => region(&a, out),
        Command::Sweep(a) => run_sweep(&a, out, err, verbose),
        Command::BesselSelftest(a) => selftest(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn spike_grid(n: usize, eps: f64, intervals: usize) -> Result<Arc<Grid>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let domain = Domain::for_dimension(n)?;
    Ok(Arc::new(make_grid(
        domain,
        sweep::grid_size(intervals, eps),
        eps,
    )?))
}

fn eig(a: &EigArgs, out: &mut dyn Write) -> Result<i32> {
    let applicable = |m: EigMethod| match m {
        EigMethod::Trans => a.n == 1,
        EigMethod::Bessel => a.n == 2,
        _ => true,
    };
    if !applicable(a.method) {
        return Err(Error::invalid(format!(
            "method {:?} does not apply to n = {}",
            a.method, a.n
        )));
    }
    let grid = spike_grid(a.n, a.eps, a.intervals)?;
    let mut checks = Checks::new(out);
    let mut closed = None;
    if matches!(a.method, EigMethod::Trans | EigMethod::All) && a.n == 1 {
        let l = eigen::lambda_k_interval(a.eps, 1)?;
        checks.line(format!("lambda1 transcendental {}", format_sig(l)))?;
        closed = Some(("transcendental", l, 1e-3));
    }
    if matches!(a.method, EigMethod::Bessel | EigMethod::All) && a.n == 2 {
        let l = eigen::lambda1_ball2(a.eps)?;
        checks.line(format!("lambda1 bessel {}", format_sig(l)))?;
        closed = Some(("bessel", l, 1e-2));
    }
    if a.n >= 2 {
        let b = eigen::lambda1_variational_bound(a.n, a.eps)?;
        checks.line(format!("lambda1 variational_upper_bound {}", format_sig(b)))?;
    }
    if matches!(a.method, EigMethod::Discrete | EigMethod::All) {
        let m = sample_spike(&SpikeProfile::new(a.n, a.eps)?, &grid)?;
        let disc = eigen::lambda1_discrete(&m, a.n)?;
        checks.line(format!("lambda1 discrete {}", format_sig(disc.lambda1)))?;
        if let Some((name, l, tol)) = closed {
            let rel = (disc.lambda1 - l).abs() / l;
            checks.check(
                &format!("discrete vs {name}"),
                rel <= tol,
                format!(
                    "relative delta {} (tolerance {})",
                    format_sig(rel),
                    format_sig(tol)
                ),
            )?;
        }
    }
    Ok(checks.exit_code())
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let grid = spike_grid(a.n, a.eps, a.intervals)?;
    let bc = match a.bc {
        Bc::Dirichlet => Boundary::Dirichlet,
        Bc::Neumann => Boundary::Neumann,
    };
    let problem = LogisticProblem::spike(a.n, a.eps, a.d, bc, &grid)?;
    let report = bvp::solve_logistic(&problem, DEFAULT_TOL)?;
    let ratio = l1_ratio(&report.solution, problem.resource(), a.n)?;
    line(out, format!("ratio {}", format_sig(ratio)))?;
    line(out, format!("max_u {}", format_sig(report.solution.max_abs())))?;
    line(out, format!("iterations {}", report.iterations))?;
    line(out, format!("method {:?}", report.method))?;
    line(out, format!("residual {}", format_sig(report.final_residual)))?;
    if let Some(l) = report.lambda1 {
        line(out, format!("d_lambda1 {}", format_sig(a.d * l)))?;
    }
    if let Some(path) = &a.out {
        let mut text = String::from("r,u\n");
        for (r, u) in grid.nodes().iter().zip(report.solution.values()) {
            text.push_str(&format!("{},{}\n", format_sig(*r), format_sig(*u)));
        }
        write_file(path, &text)?;
    }
    Ok(EXIT_OK)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    if a.n == 1 {
        verify_1d(a, out)
    } else {
        verify_nd(a, out)
    }
}

fn verify_1d(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let eps = a.eps;
    let grid = spike_grid(1, eps, a.intervals)?;
    let d = eps.sqrt();
    if d >= 1.0 - eps {
        return Err(Error::invalid("d = sqrt(eps) must stay below 1 - eps"));
    }
    let mut checks = Checks::new(out);
    let v = bvp::solve_neumann_reference(eps, &grid, DEFAULT_TOL)?;
    let sub = subsuper::build_sub_1d(&v, eps)?;
    let res = subsuper::residual_1d(&sub, eps)?;
    checks.check(
        "sub-solution residual",
        res.min_relative >= -subsuper::ROUNDING_SLACK,
        format!(
            "min {} (relative {})",
            format_sig(res.min_residual),
            format_sig(res.min_relative)
        ),
    )?;
    let cmp = bvp::compare_dirichlet_neumann(eps, d, &grid)?;
    let scale = cmp.u_neu.max_abs();
    checks.check(
        "dirichlet <= neumann",
        cmp.max_violation <= ORDER_SLACK * scale,
        format!("max violation {}", format_sig(cmp.max_violation)),
    )?;
    let problem = LogisticProblem::spike(1, eps, d, Boundary::Dirichlet, &grid)?;
    let ratio = l1_ratio(&cmp.u_dir, problem.resource(), 1)?;
    let mass = radial_integral(problem.resource(), 1);
    let int_v = radial_integral(&v, 1) / mass;
    let tail = *v.values().last().expect("nonempty grid") / mass;
    let lower = (1.0 - eps.powf(0.25)) * (int_v - tail);
    let tol = SWEEP_SLACK * ratio;
    checks.check(
        "integral sandwich",
        lower <= ratio + tol && ratio <= int_v + tol,
        format!(
            "{} <= {} <= {}",
            format_sig(lower),
            format_sig(ratio),
            format_sig(int_v)
        ),
    )?;
    checks.check(
        "ratio below 3",
        ratio < 3.0,
        format!("ratio {}", format_sig(ratio)),
    )?;
    Ok(checks.exit_code())
}

fn verify_nd(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (c1, c2) = match (a.c1, a.c2) {
        (Some(c1), Some(c2)) => (c1, c2),
        _ => return Err(Error::invalid("--c1 and --c2 are required for n >= 2")),
    };
    let point = ConstantsPoint::new(a.n, c1, c2)?;
    if !subsuper::region_contains(&point) {
        return Err(Error::invalid(format!("({c1}, {c2}) lies outside T_{}", a.n)));
    }
    let fam = ExplicitFamily::new(a.n, a.eps, c1, c2)?;
    let grid = spike_grid(a.n, a.eps, a.intervals)?;
    let mut checks = Checks::new(out);

    let res = subsuper::residual_nd(&fam, &grid)?;
    checks.check(
        "sub-solution residual >= 0",
        res.min_sub_residual >= 0.0,
        format!(
            "min {} at r = {}",
            format_sig(res.min_sub_residual),
            format_sig(res.argmin_sub)
        ),
    )?;
    checks.check(
        "super-solution residual <= 0",
        res.max_super_residual <= 0.0,
        format!("max {}", format_sig(res.max_super_residual)),
    )?;

    let (inner, outer) = (fam.sub_inner(a.eps), fam.sub_outer(a.eps));
    let (din, dout) = (fam.sub_inner_derivative(a.eps), fam.sub_outer_derivative(a.eps));
    let jump = ((inner - outer) / inner).abs().max(((din - dout) / din).abs());
    checks.check(
        "C1 matching at eps",
        jump <= 1e-12,
        format!("relative mismatch {}", format_sig(jump)),
    )?;

    let problem = LogisticProblem::spike(a.n, a.eps, fam.diffusion(), Boundary::Dirichlet, &grid)?;
    let u = bvp::solve_logistic(&problem, DEFAULT_TOL)?.solution;
    let sub = fam.sample_sub(&grid)?;
    let top = u.max_abs();
    let (mut below, mut above) = (0.0_f64, 0.0_f64);
    for (s, v) in sub.values().iter().zip(u.values()) {
        below = below.max(s - v);
        above = above.max(v - fam.sup());
    }
    checks.check(
        "sub <= u <= super",
        below <= ORDER_SLACK * top && above <= ORDER_SLACK * top,
        format!("violations {} / {}", format_sig(below), format_sig(above)),
    )?;

    let fine = Arc::new(make_grid(Domain::ball(a.n)?, 1 << 16, a.eps)?);
    let quad = integrate_weighted(&fam.sample_sub(&fine)?, a.n);
    let exact = subsuper::analytic_sub_l1(a.n, a.eps, c2)?;
    let rel = (quad - exact).abs() / exact;
    checks.check(
        "analytic L1 vs quadrature",
        rel <= 1e-6,
        format!(
            "{} vs {} (relative {})",
            format_sig(exact),
            format_sig(quad),
            format_sig(rel)
        ),
    )?;
    let ratio = l1_ratio(&u, problem.resource(), a.n)?;
    let bound = subsuper::analytic_sub_ratio(a.n, a.eps, c2)?;
    checks.check(
        "ratio above sub-solution ratio",
        ratio >= bound,
        format!("{} >= {}", format_sig(ratio), format_sig(bound)),
    )?;
    Ok(checks.exit_code())
}

fn region(a: &RegionArgs, out: &mut dyn Write) -> Result<i32> {
    let vertices = subsuper::region_vertices(a.n)?;
    for (c1, c2) in &vertices {
        line(out, format!("vertex {} {}", format_sig(*c1), format_sig(*c2)))?;
    }
    if let Some((c1, c2)) = a.point {
        let p = ConstantsPoint::new(a.n, c1, c2)?;
        let inside = subsuper::region_contains(&p);
        let where_ = if inside { "inside" } else { "outside" };
        line(out, format!("{where_} T_{}", a.n))?;
        let m = p.margins();
        line(
            out,
            format!(
                "margins {} {} {} {}",
                format_sig(m[0]),
                format_sig(m[1]),
                format_sig(m[2]),
                format_sig(m[3])
            ),
        )?;
    }
    Ok(EXIT_OK)
}

fn run_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write, verbose: bool) -> Result<i32> {
    let eps_list = sweep::eps_decades(a.eps_decades.0, a.eps_decades.1, a.per_decade)?;
    let config = SweepConfig {
        grid_n: a.intervals,
        tol: DEFAULT_TOL,
        timing: a.timing,
    };
    let records = match a.mode {
        Mode::OneD => sweep::sweep_1d(&eps_list, &config)?,
        Mode::ND => {
            let (n, c1, c2) = match (a.n, a.c1, a.c2) {
                (Some(n), Some(c1), Some(c2)) => (n, c1, c2),
                _ => return Err(Error::invalid("--n, --c1 and --c2 are required in nd mode")),
            };
            sweep::sweep_nd(n, c1, c2, &eps_list, &config)?
        }
    };
    if verbose {
        let _ = writeln!(err, "{} records", records.len());
    }
    let format = match a.out.extension().and_then(|e| e.to_str()) {
        Some("json") => ExportFormat::Json,
        _ => ExportFormat::Csv,
    };
    sweep::export(&records, format, &a.out)?;
    if let Some(path) = &a.plot {
        write_file(path, &sweep_chart(&records, a.mode))?;
    }

    let mut checks = Checks::new(out);
    for r in &records {
        checks.line(format!(
            "eps {} ratio {} lower {} upper {} status {}",
            format_sig(r.eps),
            r.ratio.map(format_sig).unwrap_or_else(|| "-".into()),
            r.lower_bound.map(format_sig).unwrap_or_else(|| "-".into()),
            r.upper_bound.map(format_sig).unwrap_or_else(|| "-".into()),
            r.status
        ))?;
    }
    let ok: Vec<&SweepRecord> = records.iter().filter(|r| r.is_ok()).collect();
    checks.check(
        "sandwich",
        ok.iter().all(|r| r.sandwich_holds(SWEEP_SLACK)),
        format!(
            "lower <= ratio <= upper within {} relative",
            format_sig(SWEEP_SLACK)
        ),
    )?;
    match a.mode {
        Mode::OneD => {
            let worst = ok
                .iter()
                .filter_map(|r| r.ratio)
                .fold(f64::NEG_INFINITY, f64::max);
            checks.check(
                "ratio below 3",
                worst < 3.0,
                format!("max ratio {}", format_sig(worst)),
            )?;
        }
        Mode::ND => {
            let growing = ok.windows(2).all(|w| w[1].ratio > w[0].ratio);
            checks.check(
                "ratio grows as eps shrinks",
                growing,
                format!("{} records", ok.len()),
            )?;
            if ok.len() >= 3 {
                let n = ok[0].n as f64;
                let c2 = a.c2.unwrap_or(0.0);
                let fit = sweep::fit_log_slope(&records)?;
                let target = 0.95 * c2 * n / std::f64::consts::E;
                checks.check(
                    "log slope",
                    fit.slope >= target,
                    format!(
                        "slope {} (>= {}), r^2 {}",
                        format_sig(fit.slope),
                        format_sig(target),
                        format_sig(fit.r_squared)
                    ),
                )?;
            }
        }
    }
    if ok.len() < records.len() {
        return Ok(EXIT_NUMERICAL.max(checks.exit_code()));
    }
    Ok(checks.exit_code())
}

fn sweep_chart(records: &[SweepRecord], mode: Mode) -> String {
    let mut data = Vec::new();
    let mut bound = Vec::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        let x = r.eps.ln().abs();
        if let Some(y) = r.ratio {
            data.push((x, y));
        }
        let b = match mode {
            Mode::OneD => r.upper_bound,
            Mode::ND => r.lower_bound,
        };
        if let Some(b) = b {
            bound.push((x, b));
        }
    }
    let bound_label = match mode {
        Mode::OneD => "Neumann reference integral",
        Mode::ND => "sub-solution ratio",
    };
    line_chart(
        "Mass ratio against |log eps|",
        "|log eps|",
        "ratio",
        &[
            Series {
                label: "computed ratio".into(),
                color: "#1f77b4".into(),
                points: data,
                dashed: false,
            },
            Series {
                label: bound_label.into(),
                color: "#d62728".into(),
                points: bound,
                dashed: true,
            },
        ],
    )
}

fn selftest(a: &SelftestArgs, out: &mut dyn Write) -> Result<i32> {
    if a.samples == 0 {
        return Err(Error::invalid("samples must be positive"));
    }
    let report = bessel::self_test(a.samples);
    let mut checks = Checks::new(out);
    checks.line(format!("max_err_j0 {}", format_sig(report.max_err_j0)))?;
    checks.line(format!("max_err_j1 {}", format_sig(report.max_err_j1)))?;
    checks.line(format!("max_zero_err {}", format_sig(report.max_zero_err)))?;
    checks.line(format!(
        "max_crossover_jump {}",
        format_sig(report.max_crossover_jump)
    ))?;
    checks.check(
        "bessel self test",
        report.passes(),
        format!("interlacing {}", report.interlacing),
    )?;
    Ok(checks.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("massratio").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn region_membership() {
        let (code, out) = call(&["region", "--n", "2", "--point", "0.05,0.2"]);
        assert_eq!(code, 0);
        assert!(out.contains("inside T_2"));
        let (_, out) = call(&["region", "--n", "2", "--point", "0.2,0.1"]);
        assert!(out.contains("outside T_2"));
    }

    #[test]
    fn bad_flags_exit_one() {
        assert_eq!(call(&["region", "--bogus"]).0, EXIT_INVALID);
        assert_eq!(call(&["eig", "--n", "1", "--eps", "2"]).0, EXIT_INVALID);
        assert_eq!(
            call(&["eig", "--n", "3", "--eps", "0.1", "--method", "bessel"]).0,
            EXIT_INVALID
        );
    }

    #[test]
    fn inadmissible_diffusion_is_a_validation_error() {
        let args = [
            "solve",
            "--n",
            "1",
            "--eps",
            "0.1",
            "--d",
            "0.95",
            "--bc",
            "dirichlet",
        ];
        assert_eq!(call(&args).0, EXIT_INVALID);
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_point("0.05, 0.2").unwrap(), (0.05, 0.2));
        assert!(parse_point("0.05").is_err());
        assert_eq!(parse_decades("1:4").unwrap(), (1, 4));
        assert!(parse_decades("x:4").is_err());
    }
}
