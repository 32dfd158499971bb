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

//! Random linear models for the trials.

use super::config::{MatrixKind, ScenarioConfig};
use crate::error::Result;
use crate::geometry::Point2;
use crate::linalg::Mat2;
use crate::rng::Stream;
use crate::solver::LinearModel;

/// Gram matrices with `λ_min ≤ SINGULAR_RATIO·λ_max` are resampled.
pub const SINGULAR_RATIO: f64 = 1e-12;
/// Bound on resampling attempts per trial.
pub const MAX_ATTEMPTS: u64 = 1000;

/// `Q·diag(1, 0.1)·Qᵀ/2` with `Q = [[1, −0.9], [0.9, 1]]`.
pub fn fixed_matrix() -> Mat2<f64> {
    let q = Mat2::new(1.0, -0.9, 0.9, 1.0);
    (q * Mat2::diag(1.0, 0.1) * q.transpose()).scale(0.5)
}

pub fn fixed_rows() -> Vec<[f64; 2]> {
    let a = fixed_matrix();
    vec![a.m[0], a.m[1]]
}

/// Labels of the random stream of a trial; `cell` separates SNR values and
/// sweep points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialKey {
    pub trial: usize,
    pub snr_db: f64,
    pub x1: f64,
}

fn stream(cfg: &ScenarioConfig, key: TrialKey, attempt: u64) -> Stream {
    Stream::for_parts(
        cfg.seed,
        &[
            cfg.scenario.id(),
            key.snr_db.to_bits(),
            key.x1.to_bits(),
            key.trial as u64,
            attempt,
        ],
    )
}

/// Noise standard deviation `σ` with `σ² = ‖Ax‖²·10^(−snr/10)/M`.
pub fn noise_sigma(clean: &[f64], snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        return 0.0;
    }
    let energy: f64 = clean.iter().map(|v| v * v).sum();
    (energy * 10f64.powf(-snr_db / 10.0) / clean.len() as f64).sqrt()
}

/// Model of one trial and the number of rejected draws before it.
pub fn generate_model(cfg: &ScenarioConfig, key: TrialKey, x_true: Point2<f64>) -> Result<(LinearModel<f64>, u64)> {
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream(cfg, key, attempt);
        let rows = match cfg.matrix_kind {
            MatrixKind::Fixed => fixed_rows(),
            MatrixKind::Gaussian => (0..cfg.m).map(|_| [rng.normal(), rng.normal()]).collect(),
        };
        let clean: Vec<f64> = rows.iter().map(|r| r[0] * x_true.x1 + r[1] * x_true.x2).collect();
        let sigma = noise_sigma(&clean, key.snr_db);
        let noise: Vec<f64> = if sigma == 0.0 {
            vec![0.0; rows.len()]
        } else {
            (0..rows.len()).map(|_| sigma * rng.normal()).collect()
        };
        let model = LinearModel::synthesize(rows, x_true, noise)?;
        let b = model.spectral_bounds()?;
        if b.rho > SINGULAR_RATIO * b.kappa && b.kappa > b.rho {
            return Ok((model, attempt));
        }
    }
    Err(crate::error::ProxError::Singular { rho: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::Scenario;

    #[test]
    fn fixed_matrix_entries_and_spectrum() {
        let a = fixed_matrix();
        assert!((a.m[0][0] - 0.5405).abs() < 1e-12);
        assert!((a.m[0][1] - 0.405).abs() < 1e-12);
        assert!((a.m[1][1] - 0.455).abs() < 1e-12);
        let m = LinearModel::new(fixed_rows(), vec![0.0, 0.0]).unwrap();
        let b = m.spectral_bounds().unwrap();
        assert!((b.rho - 0.00819025).abs() < 1e-10);
        assert!((b.kappa - 0.819025).abs() < 1e-10);
    }

    #[test]
    fn noiseless_and_deterministic() {
        let mut cfg = ScenarioConfig::default_for(Scenario::C);
        let x = Point2::raw(1.5, 0.01);
        let key = TrialKey { trial: 3, snr_db: f64::INFINITY, x1: 1.5 };
        let (m, _) = generate_model(&cfg, key, x).unwrap();
        assert!(m.noise().unwrap().iter().all(|&e| e == 0.0));
        let key = TrialKey { snr_db: 20.0, ..key };
        let (a, _) = generate_model(&cfg, key, x).unwrap();
        let (b, _) = generate_model(&cfg, key, x).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m(), 4);
        cfg.seed = 2;
        let (c, _) = generate_model(&cfg, key, x).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sigma_matches_snr() {
        let s = noise_sigma(&[3.0, 4.0], 20.0);
        assert!((s * s - 25.0 * 0.01 / 2.0).abs() < 1e-15);
    }
}
