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

//! Scenario configuration with per-scenario defaults.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::solver::{DEFAULT_MAX_ITER, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    A,
    B,
    C,
}

impl Scenario {
    pub fn id(self) -> u64 {
        match self {
            Scenario::A => 1,
            Scenario::B => 2,
            Scenario::C => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scenario::A => "A",
            Scenario::B => "B",
            Scenario::C => "C",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Fixed,
    Gaussian,
}

/// ROWL weight override for one SNR value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnrWeight {
    #[serde(serialize_with = "ser_snr", deserialize_with = "de_snr")]
    pub snr_db: f64,
    pub w: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(serialize_with = "ser_snr_list", deserialize_with = "de_snr_list")]
    pub snr_list_db: Vec<f64>,
    pub w_erowl: [f64; 2],
    pub w_rowl: [f64; 2],
    /// ROWL weights that replace `w_rowl` at specific SNR values.
    pub w_rowl_by_snr: Vec<SnrWeight>,
    pub gamma_delta: f64,
    pub gamma_mu: f64,
    /// Manual relaxation, bypassing the spectral rule.
    pub delta: Option<f64>,
    /// Manual step size shared by ROWL and eROWL.
    pub mu: Option<f64>,
    pub x_true: [f64; 2],
    /// Values of the first component of `x_true` to sweep (scenario C).
    pub x1_sweep: Vec<f64>,
    /// `λ2` of firm shrinkage (scenario C).
    pub lambda2: f64,
    pub matrix_kind: MatrixKind,
    pub tol: f64,
    pub max_iter: usize,
    pub out_path: String,
    pub threads: Option<usize>,
}

impl ScenarioConfig {
    pub fn default_for(scenario: Scenario) -> Self {
        let base = Self {
            scenario,
            m: 2,
            trials: 1,
            seed: 1,
            snr_list_db: vec![f64::INFINITY],
            w_erowl: [0.0, 2.0],
            w_rowl: [0.0, 0.03],
            w_rowl_by_snr: Vec::new(),
            gamma_delta: 1.01,
            gamma_mu: 0.5,
            delta: None,
            mu: Some(2.0),
            x_true: [0.0, 1.0],
            x1_sweep: Vec::new(),
            lambda2: 3.0,
            matrix_kind: MatrixKind::Fixed,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            out_path: format!("run{}", scenario.label()),
            threads: None,
        };
        match scenario {
            Scenario::A => base,
            Scenario::B => Self {
                trials: 500,
                snr_list_db: (0..=6).map(|k| 5.0 * k as f64).collect(),
                w_erowl: [0.0, 1.0],
                w_rowl: [0.0, 0.01],
                mu: None,
                x_true: [0.01, 1.0],
                ..base
            },
            Scenario::C => Self {
                m: 4,
                trials: 500,
                snr_list_db: vec![10.0, 20.0],
                w_erowl: [0.0, 1.0],
                w_rowl: [0.0, 0.1],
                w_rowl_by_snr: vec![
                    SnrWeight { snr_db: 20.0, w: [0.0, 0.1] },
                    SnrWeight { snr_db: 10.0, w: [0.0, 0.3] },
                ],
                mu: None,
                x_true: [1.0, 0.01],
                x1_sweep: (0..=10).map(|k| 1.0 + 0.5 * k as f64).collect(),
                matrix_kind: MatrixKind::Gaussian,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if self.m == 0 {
            return Err(invalid("m", "must be at least 1"));
        }
        if self.matrix_kind == MatrixKind::Fixed && self.m != 2 {
            return Err(invalid("m", format!("the fixed matrix is 2x2, got m = {}", self.m)));
        }
        if self.snr_list_db.is_empty() {
            return Err(invalid("snr", "list is empty"));
        }
        if self.snr_list_db.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
            return Err(invalid("snr", "values must be finite or +inf"));
        }
        for w in [self.w_erowl, self.w_rowl].iter().chain(self.w_rowl_by_snr.iter().map(|s| &s.w)) {
            crate::geometry::WeightPair::new(w[0], w[1])?;
        }
        if !(self.gamma_delta > 1.0 && self.gamma_delta.is_finite()) {
            return Err(invalid("gamma_delta", format!("must exceed 1, got {}", self.gamma_delta)));
        }
        if !(self.gamma_mu > 0.0 && self.gamma_mu <= 1.0) {
            return Err(invalid("gamma_mu", format!("must lie in (0, 1], got {}", self.gamma_mu)));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d.is_finite()) {
                return Err(invalid("delta", format!("must be positive, got {d}")));
            }
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(invalid("mu", format!("must be positive, got {mu}")));
            }
        }
        if !self.x_true.iter().all(|v| v.is_finite()) || self.x_true == [0.0, 0.0] && self.x1_sweep.is_empty() {
            return Err(invalid("x_true", "must be finite and nonzero"));
        }
        if self.x1_sweep.iter().any(|v| !v.is_finite()) {
            return Err(invalid("x1_sweep", "values must be finite"));
        }
        if self.scenario == Scenario::C && !(self.lambda2 > 0.0 && self.lambda2.is_finite()) {
            return Err(invalid("lambda2", format!("must be positive, got {}", self.lambda2)));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(invalid("tol", "tolerance and iteration cap must be positive"));
        }
        if self.threads == Some(0) {
            return Err(invalid("threads", "must be at least 1"));
        }
        Ok(())
    }

    /// ROWL weights used at `snr_db`.
    pub fn rowl_weights_at(&self, snr_db: f64) -> [f64; 2] {
        self.w_rowl_by_snr
            .iter()
            .find(|s| s.snr_db == snr_db)
            .map_or(self.w_rowl, |s| s.w)
    }

    /// True parameter vectors of the run: the sweep over the first
    /// component if present, otherwise `x_true` alone.
    pub fn truths(&self) -> Vec<[f64; 2]> {
        if self.x1_sweep.is_empty() {
            vec![self.x_true]
        } else {
            self.x1_sweep.iter().map(|&x1| [x1, self.x_true[1]]).collect()
        }
    }
}

/// Parses `lo:step:hi`, a comma-separated list, or `inf`.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| -> Result<f64> {
        let t = t.trim();
        match t {
            "inf" | "+inf" | "Inf" => Ok(f64::INFINITY),
            _ => t.parse::<f64>().map_err(|_| invalid("snr", format!("cannot parse `{t}`"))),
        }
    };
    if parts.len() == 3 {
        let (lo, step, hi) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(lo.is_finite() && hi.is_finite() && step > 0.0 && step.is_finite() && hi >= lo) {
            return Err(invalid("snr", format!("bad range `{s}`")));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| lo + step * k as f64).collect());
    }
    if parts.len() != 1 {
        return Err(invalid("snr", format!("expected lo:step:hi or a list, got `{s}`")));
    }
    s.split(',').map(num).collect()
}

fn snr_to_json(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::json!("inf")
    }
}

fn snr_from_json<E: serde::de::Error>(v: serde_json::Value) -> std::result::Result<f64, E> {
    match v {
        serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| E::custom("bad number")),
        serde_json::Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        other => Err(E::custom(format!("bad snr value {other}"))),
    }
}

fn ser_snr<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    snr_to_json(*v).serialize(s)
}

fn de_snr<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    snr_from_json(serde_json::Value::deserialize(d)?)
}

fn ser_snr_list<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|&x| snr_to_json(x)).collect::<Vec<_>>().serialize(s)
}

fn de_snr_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    Vec::<serde_json::Value>::deserialize(d)?
        .into_iter()
        .map(snr_from_json)
        .collect()
}
