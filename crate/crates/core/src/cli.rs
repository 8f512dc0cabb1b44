//! Command-line front end for the `resq` binary.
//!
//! Exit codes: 0 on success, 1 on a domain error (printed to stderr with
//! its error kind), 2 on a usage error. Column indices given on the command
//! line are 0-based; tables print them 1-based.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::geometry::{verify_geometry, DEFAULT_DIRECTIONS};
use crate::reach::{reach_summary_with, sweep_ratio_with, Options, RatioValue, ReachTime, SweepSample};
use crate::resilience::{full_report_with, multi_column_assessment_with, quantitative_resilience_with, round_sig};
use crate::resilience::{lambda_star_with, r_max_with, resilience_verdict_with, ResilienceReport};
use crate::scenarios::{opinion_example, spacecraft_example, spacecraft_reconstructed};
use crate::system::{load_system_file, split, SystemSpec};

#[derive(Debug, Parser)]
#[command(name = "resq", version, about = "Reach times and quantitative resilience under actuator loss")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// LP feasibility tolerance.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub feas_tol: Option<f64>,

    /// Relative pivot tolerance of the rank test.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub rank_tol: Option<f64>,

    /// Largest number of lost columns whose disturbance vertices are enumerated.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..64))]
    pub vertex_cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resilience of every single-column loss.
    Report {
        /// System JSON file, or `-` for stdin.
        spec: PathBuf,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// λ*, r_max, verdict and r_q for one lost column.
    Rq {
        spec: PathBuf,
        #[arg(long)]
        lost: usize,
    },
    /// Nominal and malfunctioning reach times for one target.
    Reach {
        spec: PathBuf,
        /// Lost columns; defaults to the `lost` field of the spec file.
        #[arg(long, num_args = 1..)]
        lost: Vec<usize>,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
        target: Vec<f64>,
    },
    /// Time ratio along a circle of directions in a coordinate plane.
    Sweep {
        spec: PathBuf,
        #[arg(long, num_args = 1..)]
        lost: Vec<usize>,
        /// Coordinate axes spanning the plane.
        #[arg(long, num_args = 2, default_values_t = [0, 1])]
        plane: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
        samples: usize,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a case-study plant as system JSON.
    Scenario {
        name: ScenarioName,
        /// Rebuild the spacecraft matrix from orbital elements instead of
        /// using the published one.
        #[arg(long)]
        reconstructed: bool,
    },
    /// Sampling checks of the polytope results on random 2D instances.
    VerifyGeometry {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
        directions: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScenarioName {
    Spacecraft,
    Opinion,
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

impl CliConfig {
    fn options(&self) -> Options {
        let mut o = Options::default();
        if let Some(v) = self.feas_tol {
            o.feas_tol = v;
        }
        if let Some(v) = self.rank_tol {
            o.rank_tol = v;
        }
        if let Some(v) = self.vertex_cap {
            o.vertex_cap = v as usize;
        }
        o
    }
}

/// Runs the CLI against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI against the given streams and returns the exit code.
pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cfg, stdin, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.kind());
            1
        }
    }
}

fn read_spec(path: &PathBuf, stdin: &mut dyn Read) -> Result<(SystemSpec, Option<Vec<usize>>)> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    load_system_file(&text)
}

fn resolve_lost(flag: &[usize], from_file: Option<Vec<usize>>) -> Result<Vec<usize>> {
    if !flag.is_empty() {
        return Ok(flag.to_vec());
    }
    from_file.ok_or_else(|| Error::Validation { field: "lost", reason: "pass --lost or set `lost` in the spec".into() })
}

fn execute(cfg: &CliConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<()> {
    let opts = cfg.options();
    match &cfg.command {
        Command::Report { spec, json, out: path } => {
            let (sys, _) = read_spec(spec, stdin)?;
            let report = full_report_with(&sys, &opts)?;
            let text = if *json { report.to_json() + "\n" } else { format_report_table(&report) };
            emit(path.as_ref(), &text, out)
        }
        Command::Rq { spec, lost } => {
            let (sys, _) = read_spec(spec, stdin)?;
            let ms = split(&sys, &[*lost])?;
            let lambda = lambda_star_with(&ms, &opts)?;
            let verdict = resilience_verdict_with(&ms, &opts)?;
            writeln!(out, "column  = {}", lost + 1)?;
            writeln!(out, "lambda* = {}", fmt_sig(lambda, 4))?;
            match r_max_with(&ms, &opts) {
                Ok(r) => writeln!(out, "r_max   = {}", fmt_sig(r, 4))?,
                Err(Error::DegenerateDenominator) => writeln!(out, "r_max   = undefined")?,
                Err(e) => return Err(e),
            }
            writeln!(out, "verdict = {verdict}")?;
            writeln!(out, "r_q     = {}", fmt_sig(quantitative_resilience_with(&ms, &opts)?, 4))?;
            Ok(())
        }
        Command::Reach { spec, lost, target } => {
            let (sys, file_lost) = read_spec(spec, stdin)?;
            let ms = split(&sys, &resolve_lost(lost, file_lost)?)?;
            let s = reach_summary_with(&ms, target, &opts)?;
            let cols: Vec<String> = ms.lost().iter().map(|j| (j + 1).to_string()).collect();
            writeln!(out, "lost columns = [{}]", cols.join(", "))?;
            writeln!(out, "T_N* = {}", fmt_time(s.nominal))?;
            writeln!(out, "T_M* = {}", fmt_time(s.malfunctioning))?;
            writeln!(out, "t(d) = {}", fmt_ratio(s.ratio, 4))?;
            let w: Vec<String> = s.worst_vertex.w().iter().map(|v| fmt_sig(*v, 4)).collect();
            writeln!(out, "worst vertex = [{}]", w.join(", "))?;
            if ms.p() > 1 {
                let a = multi_column_assessment_with(&ms, &opts)?;
                writeln!(out, "verdict = {} ({})", a.verdict, a.marker)?;
            }
            Ok(())
        }
        Command::Sweep { spec, lost, plane, samples, out: path } => {
            let (sys, file_lost) = read_spec(spec, stdin)?;
            let ms = split(&sys, &resolve_lost(lost, file_lost)?)?;
            let n = sys.n();
            let (i, j) = (plane[0], plane[1]);
            if i >= n || j >= n || i == j {
                return Err(Error::Validation { field: "plane", reason: format!("need two distinct axes below {n}") });
            }
            let axis = |k: usize| -> Vec<f64> { (0..n).map(|r| if r == k { 1.0 } else { 0.0 }).collect() };
            let samples = sweep_ratio_with(&ms, &axis(i), &axis(j), *samples, &opts)?;
            emit(path.as_ref(), &sweep_csv(&samples), out)
        }
        Command::Scenario { name, reconstructed } => {
            let sys = match (name, reconstructed) {
                (ScenarioName::Opinion, _) => opinion_example(),
                (ScenarioName::Spacecraft, false) => spacecraft_example().printed_bbar,
                (ScenarioName::Spacecraft, true) => spacecraft_reconstructed()?,
            };
            writeln!(out, "{}", sys.to_json())?;
            Ok(())
        }
        Command::VerifyGeometry { seed, cases, directions } => {
            let summary = verify_geometry(*seed, *cases, *directions)?;
            let line = |name: &str, passed: usize| format!("{name:<20} {passed}/{cases}");
            writeln!(out, "seed {seed}, {cases} cases, {directions} directions")?;
            writeln!(out, "{}", line("vertex minimum", summary.vertex_minimum_passed))?;
            writeln!(out, "{}", line("collinear maximum", summary.collinear_maximum_passed))?;
            writeln!(out, "{}", line("segment maximum", summary.segment_maximum_passed))?;
            if summary.all_passed() {
                Ok(())
            } else {
                Err(Error::NumericalFailure("a geometry check failed".into()))
            }
        }
    }
}

fn emit(path: Option<&PathBuf>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `value` with `digits` significant digits; infinities print as `inf`.
pub fn fmt_sig(value: f64, digits: usize) -> String {
    if value == f64::INFINITY {
        return "inf".into();
    }
    if value == f64::NEG_INFINITY {
        return "-inf".into();
    }
    let r = round_sig(value, digits);
    if r == 0.0 {
        return "0".into();
    }
    let mag = r.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (digits as i32 - 1 - mag).max(0) as usize;
        let s = format!("{r:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.*e}", digits - 1, r)
    }
}

fn fmt_time(t: ReachTime) -> String {
    match t {
        ReachTime::Finite(v) => fmt_sig(v, 4),
        ReachTime::Infinite => "inf".into(),
    }
}

fn fmt_ratio(r: RatioValue, digits: usize) -> String {
    fmt_sig(r.as_f64(), digits)
}

/// `beta,ratio` CSV with 12 significant digits.
pub fn sweep_csv(samples: &[SweepSample]) -> String {
    let mut s = String::from("beta,ratio\n");
    for p in samples {
        s.push_str(&format!("{},{}\n", fmt_sig(p.beta, 12), fmt_ratio(p.ratio, 12)));
    }
    s
}

/// Human-readable report table with 1-based column numbers.
pub fn format_report_table(report: &ResilienceReport) -> String {
    let mut s = format!("controllable: {}\n", report.controllable);
    s.push_str(&format!("{:>6}  {:>10}  {:>10}  {:<15}  {:>8}\n", "column", "lambda*", "r_max", "verdict", "r_q"));
    for c in &report.per_column {
        s.push_str(&format!(
            "{:>6}  {:>10}  {:>10}  {:<15}  {:>8}\n",
            c.column_index + 1,
            fmt_sig(c.lambda_star, 4),
            fmt_sig(c.r_max, 4),
            c.verdict.to_string(),
            fmt_sig(c.r_q, 4),
        ));
    }
    s
}
