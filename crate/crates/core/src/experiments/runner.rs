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

//! Trial execution, scenario drivers and CSV / JSON output.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::{MatrixKind, Scenario, ScenarioConfig};
use super::model::{fixed_rows, generate_model, TrialKey};
use crate::erowl::{erowl, ErowlParams};
use crate::error::{invalid, ProxError, Result};
use crate::geometry::{Point2, WeightPair};
use crate::rowl::rowl_shrink;
use crate::scalar_ops::{firm, FirmParams};
use crate::solver::{params_for_delta, pfbs, select_parameters, LinearModel, PfbsOptions, PfbsOutcome, SpectralBounds};
use crate::transform::grid::fmt17;

/// Lower clamp of the mismatch in dB.
pub const MISMATCH_FLOOR_DB: f64 = -400.0;

pub const RECORD_HEADER: &str = "scenario,method,trial,snr_db,xtrue1,xtrue2,xhat1,xhat2,mismatch_db,iterations,converged";
pub const SUMMARY_HEADER: &str =
    "scenario,method,snr_db,xtrue1,xtrue2,trials,mean_mismatch_db,mean_xhat1,mean_xhat2,mean_iterations,converged_fraction";
pub const TRAJECTORY_HEADER: &str = "half_step,x1,x2";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "LS")]
    Ls,
    #[serde(rename = "ROWL")]
    Rowl,
    #[serde(rename = "eROWL")]
    Erowl,
    #[serde(rename = "firm")]
    Firm,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Ls => "LS",
            Method::Rowl => "ROWL",
            Method::Erowl => "eROWL",
            Method::Firm => "firm",
        }
    }

    pub fn for_scenario(s: Scenario) -> &'static [Method] {
        match s {
            Scenario::A => &[Method::Rowl, Method::Erowl],
            Scenario::B => &[Method::Ls, Method::Rowl, Method::Erowl],
            Scenario::C => &[Method::Ls, Method::Rowl, Method::Erowl, Method::Firm],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub scenario: Scenario,
    pub method: Method,
    pub trial: usize,
    pub snr_db: f64,
    pub x_true: Point2<f64>,
    pub x_hat: Point2<f64>,
    pub mismatch_db: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario.label(),
            self.method.label(),
            self.trial,
            fmt17(self.snr_db),
            fmt17(self.x_true.x1),
            fmt17(self.x_true.x2),
            fmt17(self.x_hat.x1),
            fmt17(self.x_hat.x2),
            fmt17(self.mismatch_db),
            self.iterations,
            self.converged
        )
    }
}

/// `10·log10(‖x̂ − x‖² / ‖x‖²)`, clamped below at [`MISMATCH_FLOOR_DB`].
pub fn system_mismatch(x_hat: Point2<f64>, x_true: Point2<f64>) -> Result<f64> {
    let e = x_true.norm_sq();
    if e == 0.0 {
        return Err(invalid("x_true", "mismatch is undefined for x_true = 0"));
    }
    let r = (x_hat - x_true).norm_sq() / e;
    if r == 0.0 {
        return Ok(MISMATCH_FLOOR_DB);
    }
    Ok((10.0 * r.log10()).max(MISMATCH_FLOOR_DB))
}

/// Solver settings shared by all methods of one trial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialParams {
    pub rho: f64,
    pub kappa: f64,
    pub delta: f64,
    pub beta: f64,
    pub mu: f64,
    pub mu_interval: (f64, f64),
    pub firm_lambda1: f64,
    pub firm_mu: f64,
}

pub fn trial_params(cfg: &ScenarioConfig, b: SpectralBounds<f64>) -> Result<TrialParams> {
    let p = match cfg.delta {
        Some(d) => params_for_delta(b, d, cfg.gamma_delta, cfg.gamma_mu),
        None => select_parameters(b, cfg.gamma_delta, cfg.gamma_mu)?,
    };
    // firm: λ1 = ρλ2/(κ+ρ), β = κ/(κ+ρ), same step rule
    let fb = b.kappa / (b.kappa + b.rho);
    let firm_mu = cfg.gamma_mu * (1.0 - fb) / b.rho + (1.0 - cfg.gamma_mu) * (1.0 + fb) / b.kappa;
    Ok(TrialParams {
        rho: b.rho,
        kappa: b.kappa,
        delta: p.delta,
        beta: p.beta,
        mu: cfg.mu.unwrap_or(p.mu),
        mu_interval: p.mu_interval,
        firm_lambda1: b.rho * cfg.lambda2 / (b.kappa + b.rho),
        firm_mu,
    })
}

fn solve(
    cfg: &ScenarioConfig,
    model: &LinearModel<f64>,
    method: Method,
    tp: &TrialParams,
    snr_db: f64,
    traced: bool,
) -> Result<PfbsOutcome<f64>> {
    let opts = |mu: f64| {
        let o = PfbsOptions { tol: cfg.tol, max_iter: cfg.max_iter, ..PfbsOptions::new(mu) };
        if traced {
            o
        } else {
            o.untraced()
        }
    };
    match method {
        Method::Ls => Ok(PfbsOutcome {
            x_hat: model.least_squares()?,
            iterations: 0,
            converged: true,
            trace: Vec::new(),
        }),
        Method::Rowl => {
            let w = cfg.rowl_weights_at(snr_db);
            let w = WeightPair::new(w[0], w[1])?;
            pfbs(model, |v| rowl_shrink(v, &w), &opts(tp.mu))
        }
        Method::Erowl => {
            let p = ErowlParams::new(WeightPair::new(cfg.w_erowl[0], cfg.w_erowl[1])?, tp.delta)?;
            pfbs(model, |v| erowl(v, &p), &opts(tp.mu))
        }
        Method::Firm => {
            let p = FirmParams::new(tp.firm_lambda1, cfg.lambda2)?;
            pfbs(model, |v| Point2::raw(firm(v.x1, p), firm(v.x2, p)), &opts(tp.firm_mu))
        }
    }
}

struct CellResult {
    records: Vec<TrialRecord>,
    resamples: u64,
}

fn run_cell(cfg: &ScenarioConfig, truth: [f64; 2], snr_db: f64, trial: usize) -> Result<CellResult> {
    let x_true = Point2::new(truth[0], truth[1])?;
    let key = TrialKey { trial, snr_db, x1: truth[0] };
    let (model, resamples) = generate_model(cfg, key, x_true)?;
    let tp = trial_params(cfg, model.spectral_bounds()?)?;
    let mut records = Vec::new();
    for &method in Method::for_scenario(cfg.scenario) {
        let out = solve(cfg, &model, method, &tp, snr_db, false)?;
        records.push(TrialRecord {
            scenario: cfg.scenario,
            method,
            trial,
            snr_db,
            x_true,
            x_hat: out.x_hat,
            mismatch_db: system_mismatch(out.x_hat, x_true)?,
            iterations: out.iterations,
            converged: out.converged,
        });
    }
    Ok(CellResult { records, resamples })
}

/// Sort key: method, SNR, first true component, trial.
fn sort_records(records: &mut [TrialRecord]) {
    records.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(a.snr_db.total_cmp(&b.snr_db))
            .then(a.x_true.x1.total_cmp(&b.x_true.x1))
            .then(a.x_true.x2.total_cmp(&b.x_true.x2))
            .then(a.trial.cmp(&b.trial))
    });
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scenario: Scenario,
    pub method: Method,
    pub snr_db: f64,
    pub x_true: [f64; 2],
    pub trials: usize,
    /// `10·log10` of the mean linear mismatch.
    pub mean_mismatch_db: f64,
    pub mean_x_hat: [f64; 2],
    pub mean_iterations: f64,
    pub converged_fraction: f64,
}

impl SummaryRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario.label(),
            self.method.label(),
            fmt17(self.snr_db),
            fmt17(self.x_true[0]),
            fmt17(self.x_true[1]),
            self.trials,
            fmt17(self.mean_mismatch_db),
            fmt17(self.mean_x_hat[0]),
            fmt17(self.mean_x_hat[1]),
            fmt17(self.mean_iterations),
            fmt17(self.converged_fraction)
        )
    }
}

/// Mean of a set of dB values taken in the linear domain.
pub fn mean_db(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for v in values {
        s += 10f64.powf(v / 10.0);
        n += 1;
    }
    if n == 0 {
        return f64::NAN;
    }
    (10.0 * (s / n as f64).log10()).max(MISMATCH_FLOOR_DB)
}

/// One row per (method, SNR, truth) group of sorted records.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let same = |a: &TrialRecord, b: &TrialRecord| {
        a.method == b.method && a.snr_db == b.snr_db && a.x_true == b.x_true
    };
    let mut out = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let mut end = start + 1;
        while end < records.len() && same(&records[start], &records[end]) {
            end += 1;
        }
        let g = &records[start..end];
        let n = g.len() as f64;
        let r0 = &g[0];
        out.push(SummaryRow {
            scenario: r0.scenario,
            method: r0.method,
            snr_db: r0.snr_db,
            x_true: r0.x_true.to_array(),
            trials: g.len(),
            mean_mismatch_db: mean_db(g.iter().map(|r| r.mismatch_db)),
            mean_x_hat: [
                g.iter().map(|r| r.x_hat.x1).sum::<f64>() / n,
                g.iter().map(|r| r.x_hat.x2).sum::<f64>() / n,
            ],
            mean_iterations: g.iter().map(|r| r.iterations as f64).sum::<f64>() / n,
            converged_fraction: g.iter().filter(|r| r.converged).count() as f64 / n,
        });
        start = end;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub method: Method,
    pub points: Vec<Point2<f64>>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub config: ScenarioConfig,
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    pub trajectories: Vec<Trajectory>,
    pub resamples: u64,
    /// Solver settings when they do not vary between trials.
    pub params: Option<TrialParams>,
}

impl ExperimentOutput {
    pub fn records_csv(&self) -> String {
        let mut s = String::from(RECORD_HEADER);
        s.push('\n');
        for r in &self.records {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from(SUMMARY_HEADER);
        s.push('\n');
        for r in &self.summary {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    }

    pub fn trajectory_csv(t: &Trajectory) -> String {
        let mut s = String::from(TRAJECTORY_HEADER);
        s.push('\n');
        for (k, p) in t.points.iter().enumerate() {
            s.push_str(&format!("{k},{},{}\n", fmt17(p.x1), fmt17(p.x2)));
        }
        s
    }

    pub fn meta(&self) -> serde_json::Value {
        json!({
            "config": self.config,
            "params": self.params,
            "resamples": self.resamples,
            "records": self.records.len(),
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    /// Writes `records.csv`, `summary.csv`, `meta.json` and, for scenario A,
    /// one `trajectory_<method>.csv` per method into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("records.csv"), self.records_csv())?;
        fs::write(dir.join("summary.csv"), self.summary_csv())?;
        for t in &self.trajectories {
            let name = format!("trajectory_{}.csv", t.method.label().to_lowercase());
            fs::write(dir.join(name), Self::trajectory_csv(t))?;
        }
        let mut f = fs::File::create(dir.join("meta.json"))?;
        serde_json::to_writer_pretty(&mut f, &self.meta())?;
        f.write_all(b"\n")?;
        Ok(())
    }
}

fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| invalid("threads", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn check_scenario(cfg: &ScenarioConfig, s: Scenario) -> Result<()> {
    cfg.validate()?;
    if cfg.scenario != s {
        return Err(invalid("scenario", format!("config is for {:?}, expected {s:?}", cfg.scenario)));
    }
    Ok(())
}

/// Noiseless run from `x0 = 0` on the fixed matrix, keeping the trajectory
/// `x_0, x_{1/2}, x_1, …` of each method.
pub fn scenario_a(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    check_scenario(cfg, Scenario::A)?;
    if cfg.matrix_kind != MatrixKind::Fixed {
        return Err(invalid("matrix_kind", "scenario A uses the fixed matrix"));
    }
    let x_true = Point2::new(cfg.x_true[0], cfg.x_true[1])?;
    let model = LinearModel::synthesize(fixed_rows(), x_true, vec![0.0; 2])?;
    let tp = trial_params(cfg, model.spectral_bounds()?)?;
    let snr_db = f64::INFINITY;
    let mut records = Vec::new();
    let mut trajectories = Vec::new();
    for &method in Method::for_scenario(Scenario::A) {
        let out = solve(cfg, &model, method, &tp, snr_db, true)?;
        trajectories.push(Trajectory { method, points: out.trajectory() });
        records.push(TrialRecord {
            scenario: Scenario::A,
            method,
            trial: 0,
            snr_db,
            x_true,
            x_hat: out.x_hat,
            mismatch_db: system_mismatch(out.x_hat, x_true)?,
            iterations: out.iterations,
            converged: out.converged,
        });
    }
    sort_records(&mut records);
    Ok(ExperimentOutput {
        config: cfg.clone(),
        summary: summarize(&records),
        records,
        trajectories,
        resamples: 0,
        params: Some(tp),
    })
}

fn monte_carlo(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    let mut cells = Vec::new();
    for truth in cfg.truths() {
        for &snr in &cfg.snr_list_db {
            for trial in 0..cfg.trials {
                cells.push((truth, snr, trial));
            }
        }
    }
    let results: Vec<Result<CellResult>> = in_pool(cfg.threads, || {
        cells
            .par_iter()
            .map(|&(truth, snr, trial)| run_cell(cfg, truth, snr, trial))
            .collect()
    })?;
    let mut records = Vec::with_capacity(results.len() * 4);
    let mut resamples = 0;
    for r in results {
        let r = r?;
        resamples += r.resamples;
        records.extend(r.records);
    }
    sort_records(&mut records);
    let params = match cfg.matrix_kind {
        MatrixKind::Fixed => {
            let m = LinearModel::new(fixed_rows(), vec![0.0; 2])?;
            Some(trial_params(cfg, m.spectral_bounds()?)?)
        }
        MatrixKind::Gaussian => None,
    };
    Ok(ExperimentOutput {
        config: cfg.clone(),
        summary: summarize(&records),
        records,
        trajectories: Vec::new(),
        resamples,
        params,
    })
}

/// SNR sweep comparing LS, ROWL and eROWL.
pub fn scenario_b(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    check_scenario(cfg, Scenario::B)?;
    monte_carlo(cfg)
}

/// Sweep of the first true component comparing LS, ROWL, eROWL and firm.
pub fn scenario_c(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    check_scenario(cfg, Scenario::C)?;
    monte_carlo(cfg)
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    match cfg.scenario {
        Scenario::A => scenario_a(cfg),
        Scenario::B => scenario_b(cfg),
        Scenario::C => scenario_c(cfg),
    }
}

/// Summary row for `(method, snr, x1)`.
pub fn find_summary(out: &ExperimentOutput, method: Method, snr_db: f64, x1: f64) -> Result<&SummaryRow> {
    out.summary
        .iter()
        .find(|r| r.method == method && r.snr_db == snr_db && r.x_true[0] == x1)
        .ok_or_else(|| ProxError::OutOfRange(format!("no summary for {method:?} at snr {snr_db}, x1 {x1}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatch_examples() {
        let t = Point2::raw(0.0, 1.0);
        assert_eq!(system_mismatch(t, t).unwrap(), MISMATCH_FLOOR_DB);
        assert!((system_mismatch(Point2::raw(0.0, 0.99), t).unwrap() + 40.0).abs() < 1e-9);
        assert_eq!(system_mismatch(Point2::zero(), t).unwrap(), 0.0);
        assert!(system_mismatch(t, Point2::zero()).is_err());
    }

    #[test]
    fn scenario_a_endpoints_and_files() {
        let cfg = ScenarioConfig::default_for(Scenario::A);
        let out = scenario_a(&cfg).unwrap();
        let get = |m| out.records.iter().find(|r| r.method == m).unwrap();
        let e = get(Method::Erowl);
        assert!(e.x_hat.x1.abs() <= 0.02 && (e.x_hat.x2 - 0.99).abs() <= 0.02, "{:?}", e.x_hat);
        let r = get(Method::Rowl);
        assert!((r.x_hat.x1 - 0.88).abs() <= 0.02 && r.x_hat.x2.abs() <= 0.02, "{:?}", r.x_hat);
        for t in &out.trajectories {
            let n = get(t.method).iterations;
            assert_eq!(t.points.len(), 2 * n + 1);
        }
        let dir = tempfile::tempdir().unwrap();
        out.write_to(dir.path()).unwrap();
        for f in ["trajectory_rowl.csv", "trajectory_erowl.csv", "summary.csv", "records.csv", "meta.json"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
    }

    #[test]
    fn ls_is_exact_without_noise() {
        let cfg = ScenarioConfig {
            trials: 2,
            snr_list_db: vec![f64::INFINITY],
            ..ScenarioConfig::default_for(Scenario::B)
        };
        let out = scenario_b(&cfg).unwrap();
        for r in out.records.iter().filter(|r| r.method == Method::Ls) {
            assert!(r.mismatch_db <= -200.0, "{}", r.mismatch_db);
        }
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let mut cfg = ScenarioConfig {
            trials: 20,
            snr_list_db: vec![20.0],
            x1_sweep: vec![1.5, 4.0],
            ..ScenarioConfig::default_for(Scenario::C)
        };
        cfg.threads = Some(1);
        let a = scenario_c(&cfg).unwrap().records_csv();
        cfg.threads = Some(3);
        let b = scenario_c(&cfg).unwrap().records_csv();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 20 * 2 * 4);
    }

    #[test]
    fn mean_db_is_linear_average() {
        assert!((mean_db([0.0, -10.0]) - 10.0 * 0.55f64.log10()).abs() < 1e-12);
    }
}
