/*
Copyright 2026 The proxlab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::erowl::{erowl, erowl_limit, ErowlParams};
use crate::error::{invalid, ProxError, Result};
use crate::experiments::verify::{render_table, run_suite};
use crate::experiments::{parse_snr_list, run_scenario, MatrixKind, Scenario, ScenarioConfig};
use crate::geometry::{Point2, ProxSet, ScalarProxSet, WeightPair};
use crate::rowl::{prox_rowl_2d, prox_rowl_envelope_2d, rowl_envelope_2d, rowl_penalty_2d, rowl_shrink};
use crate::scalar_ops::{
    firm, hard, l0_envelope, l0_norm, mc_penalty, prox_l0, prox_l0_envelope, soft, FirmParams, MCParams,
};
use crate::transform::conjugate::weakly_convex_envelope_grid;
use crate::transform::grid::{Axis, SampledFunction};

#[derive(Debug, Parser)]
#[command(name = "proxlab", version, about = "Shrinkage operators, envelopes and oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a penalty or shrinkage operator at one point.
    Prox(ProxArgs),
    /// Sample a penalty and write its weakly convex envelope as CSV.
    Envelope(EnvelopeArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
    /// Run one of the linear-model scenarios.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    L0,
    L0Envelope,
    ProxL0,
    ProxL0Envelope,
    Hard,
    Soft,
    Firm,
    Mc,
    Rowl,
    RowlEnvelope,
    ProxRowl,
    ProxRowlEnvelope,
    RowlShrink,
    Erowl,
    ErowlLimit,
}

#[derive(Debug, Args)]
struct ProxArgs {
    #[arg(long, value_enum)]
    op: Op,
    /// Point: one value, or `x1,x2`.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, default_value = "0,2")]
    w: String,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Threshold of hard / soft shrinkage.
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda1: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Penalty {
    L0,
    Rowl,
}

#[derive(Debug, Args)]
struct EnvelopeArgs {
    #[arg(long, value_enum, default_value = "rowl")]
    f: Penalty,
    #[arg(long, default_value = "0,2")]
    w: String,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    hi: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// Write the closed form instead of the numerical envelope.
    #[arg(long)]
    closed_form: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixArg {
    Fixed,
    Gaussian,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    scenario: ScenarioArg,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// `lo:step:hi`, a comma-separated list, or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// eROWL weights `w1,w2`.
    #[arg(long)]
    w: Option<String>,
    /// ROWL weights `w1,w2`; replaces any per-SNR defaults.
    #[arg(long)]
    w_rowl: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    gamma_delta: Option<f64>,
    #[arg(long)]
    gamma_mu: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_true: Option<String>,
    /// Sweep of the first true component, `lo:step:hi` or a list.
    #[arg(long, allow_hyphen_values = true)]
    x1_sweep: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum)]
    matrix: Option<MatrixArg>,
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

/// Parses `args` (program name first) and runs the command, writing to the
/// process's standard streams. Returns the exit code.
pub fn run_cli<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let res = match cli.command {
        Command::Prox(a) => prox(&a).and_then(|s| writeln!(out, "{s}").map_err(ProxError::from)).map(|_| 0),
        Command::Envelope(a) => envelope(&a, out).map(|_| 0),
        Command::Verify(a) => verify(&a, out),
        Command::Experiment(a) => experiment(&a, out).map(|_| 0),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn parse_values(s: &str, what: &'static str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| invalid(what, format!("cannot parse `{t}`"))))
        .collect()
}

fn parse_pair(s: &str, what: &'static str) -> Result<[f64; 2]> {
    match parse_values(s, what)?.as_slice() {
        &[a, b] => Ok([a, b]),
        v => Err(ProxError::DimensionMismatch { expected: 2, got: v.len() }),
    }
}

/// Shortest decimal that survives 12 significant digits; `−0` prints as `0`.
fn num(v: f64) -> String {
    let r: f64 = format!("{v:.12e}").parse().unwrap_or(v);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn point(p: Point2<f64>) -> String {
    format!("{},{}", num(p.x1), num(p.x2))
}

fn planar_set(s: &ProxSet<f64>) -> String {
    match s {
        ProxSet::Single(p) => point(*p),
        ProxSet::PointPair(a, b) => format!("{{{};{}}}", point(*a), point(*b)),
        ProxSet::Segment(a, b) => format!("[{};{}]", point(*a), point(*b)),
    }
}

fn scalar_set(s: &ScalarProxSet<f64>) -> String {
    match s {
        ScalarProxSet::Single(a) => num(*a),
        ScalarProxSet::Pair(a, b) => format!("{{{};{}}}", num(*a), num(*b)),
        ScalarProxSet::Interval(a, b) => format!("[{};{}]", num(*a), num(*b)),
    }
}

fn prox(a: &ProxArgs) -> Result<String> {
    let xs = parse_values(&a.x, "x")?;
    let scalar_op = matches!(
        a.op,
        Op::L0 | Op::L0Envelope | Op::ProxL0 | Op::ProxL0Envelope | Op::Hard | Op::Soft | Op::Firm | Op::Mc
    );
    let expected = if scalar_op { 1 } else { 2 };
    if xs.len() != expected && !(scalar_op && xs.len() == 2) {
        return Err(ProxError::DimensionMismatch { expected, got: xs.len() });
    }
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(ProxError::NonFinite("x"));
    }
    if scalar_op {
        // scalar operators apply componentwise to a pair
        let parts: Result<Vec<String>> = xs.iter().map(|&x| scalar(a, x)).collect();
        return Ok(parts?.join(","));
    }
    let x = Point2::new(xs[0], xs[1])?;
    let wv = parse_pair(&a.w, "w")?;
    let w = WeightPair::new(wv[0], wv[1])?;
    Ok(match a.op {
        Op::Rowl => num(rowl_penalty_2d(x, &w)),
        Op::RowlEnvelope => num(rowl_envelope_2d(x, &w)),
        Op::ProxRowl => planar_set(&prox_rowl_2d(x, &w)),
        Op::ProxRowlEnvelope => planar_set(&prox_rowl_envelope_2d(x, &w)),
        Op::RowlShrink => point(rowl_shrink(x, &w)),
        Op::Erowl => point(erowl(x, &ErowlParams::new(w, a.delta)?)),
        Op::ErowlLimit => point(erowl_limit(x, &w)),
        _ => unreachable!("scalar operators handled above"),
    })
}

fn scalar(a: &ProxArgs, x: f64) -> Result<String> {
    Ok(match a.op {
        Op::L0 => num(l0_norm(x)),
        Op::L0Envelope => num(l0_envelope(x)),
        Op::ProxL0 => scalar_set(&prox_l0(x, a.gamma)?),
        Op::ProxL0Envelope => scalar_set(&prox_l0_envelope(x)),
        Op::Hard => num(hard(x, a.lambda)?),
        Op::Soft => num(soft(x, a.lambda)),
        Op::Firm => num(firm(x, FirmParams::new(a.lambda1, a.lambda2)?)),
        Op::Mc => num(mc_penalty(x, MCParams::new(a.lambda2)?)),
        _ => unreachable!("planar operators handled by the caller"),
    })
}

fn envelope(a: &EnvelopeArgs, out: &mut dyn Write) -> Result<()> {
    let axis = Axis::aligned(a.lo, a.hi, a.step)?;
    let f = match a.f {
        Penalty::L0 => {
            if a.closed_form {
                SampledFunction::from_fn_1d(axis, l0_envelope)?
            } else {
                weakly_convex_envelope_grid(&SampledFunction::from_fn_1d(axis, l0_norm)?)?
            }
        }
        Penalty::Rowl => {
            let wv = parse_pair(&a.w, "w")?;
            let w = WeightPair::new(wv[0], wv[1])?;
            if a.closed_form {
                SampledFunction::from_fn_2d(axis, axis, |p| rowl_envelope_2d(p, &w))?
            } else {
                weakly_convex_envelope_grid(&SampledFunction::from_fn_2d(axis, axis, |p| rowl_penalty_2d(p, &w))?)?
            }
        }
    };
    match &a.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            f.write_csv(std::io::BufWriter::new(fs::File::create(path)?))
        }
        None => f.write_csv(out),
    }
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let checks = run_suite(&a.suite, a.seed)
        .ok_or_else(|| invalid("suite", format!("unknown suite `{}`", a.suite)))?;
    write!(out, "{}", render_table(&checks))?;
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { 2 })
}

fn experiment(a: &ExperimentArgs, out: &mut dyn Write) -> Result<()> {
    let scenario = match a.scenario {
        ScenarioArg::A => Scenario::A,
        ScenarioArg::B => Scenario::B,
        ScenarioArg::C => Scenario::C,
    };
    let mut cfg = ScenarioConfig::default_for(scenario);
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.trials {
        cfg.trials = v;
    }
    if let Some(s) = &a.snr {
        cfg.snr_list_db = parse_snr_list(s)?;
    }
    if let Some(s) = &a.w {
        cfg.w_erowl = parse_pair(s, "w")?;
    }
    if let Some(s) = &a.w_rowl {
        cfg.w_rowl = parse_pair(s, "w-rowl")?;
        cfg.w_rowl_by_snr.clear();
    }
    if a.delta.is_some() {
        cfg.delta = a.delta;
    }
    if let Some(v) = a.gamma_delta {
        cfg.gamma_delta = v;
    }
    if let Some(v) = a.gamma_mu {
        cfg.gamma_mu = v;
    }
    if a.mu.is_some() {
        cfg.mu = a.mu;
    }
    if let Some(s) = &a.x_true {
        cfg.x_true = parse_pair(s, "x-true")?;
    }
    if let Some(s) = &a.x1_sweep {
        cfg.x1_sweep = parse_snr_list(s).map_err(|_| invalid("x1-sweep", format!("cannot parse `{s}`")))?;
    }
    if let Some(v) = a.m {
        cfg.m = v;
    }
    if let Some(k) = a.matrix {
        cfg.matrix_kind = match k {
            MatrixArg::Fixed => MatrixKind::Fixed,
            MatrixArg::Gaussian => MatrixKind::Gaussian,
        };
    }
    if let Some(v) = a.lambda2 {
        cfg.lambda2 = v;
    }
    if let Some(p) = &a.out {
        cfg.out_path = p.to_string_lossy().into_owned();
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    let result = run_scenario(&cfg)?;
    result.write_to(std::path::Path::new(&cfg.out_path))?;
    for r in &result.summary {
        writeln!(
            out,
            "{} {:<5} snr {:>6} x1 {:<5} mismatch {:>9.3} dB  xhat ({:.4}, {:.4})",
            r.scenario.label(),
            r.method.label(),
            num(r.snr_db),
            num(r.x_true[0]),
            r.mean_mismatch_db,
            r.mean_x_hat[0],
            r.mean_x_hat[1]
        )?;
    }
    writeln!(out, "wrote {}", cfg.out_path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run_cli_with(std::iter::once("proxlab").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn erowl_example() {
        let (c, o, _) = run(&["prox", "--op", "erowl", "--x", "2,2", "--w", "0,2", "--delta", "1"]);
        assert_eq!((c, o.as_str()), (0, "1.5,1.5\n"));
    }

    #[test]
    fn set_valued_output() {
        let (_, o, _) = run(&["prox", "--op", "prox-rowl", "--x", "2,2"]);
        assert_eq!(o, "{2,0;0,2}\n");
        let (_, o, _) = run(&["prox", "--op", "prox-l0", "--x", "-3"]);
        assert_eq!(o, "-3\n");
        let (_, o, _) = run(&["prox", "--op", "firm", "--x", "1.5,-3", "--lambda1", "1", "--lambda2", "2"]);
        assert_eq!(o, "1,-3\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["--help"]).0, 0);
        assert_eq!(run(&["prox", "--bogus"]).0, 1);
        assert_eq!(run(&["prox", "--op", "erowl", "--x", "1"]).0, 1);
        assert_eq!(run(&["prox", "--op", "erowl", "--x", "1,1", "--w", "2,0"]).0, 1);
        assert_eq!(run(&["verify", "--suite", "nope"]).0, 1);
        assert_eq!(run(&["verify", "--suite", "rowl"]).0, 0);
    }

    #[test]
    fn experiment_a_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("runA");
        let (c, _, e) = run(&["experiment", "a", "--out", out.to_str().unwrap()]);
        assert_eq!(c, 0, "{e}");
        for f in ["trajectory_rowl.csv", "trajectory_erowl.csv", "summary.csv", "meta.json"] {
            assert!(out.join(f).exists(), "{f}");
        }
    }

    #[test]
    fn envelope_writes_csv() {
        let (c, o, _) = run(&["envelope", "--f", "l0", "--lo", "-1", "--hi", "1", "--step", "0.5"]);
        assert_eq!(c, 0);
        let lines: Vec<&str> = o.lines().collect();
        assert_eq!(lines[0], "axis0,value");
        assert_eq!(lines.len(), 6);
    }
}
