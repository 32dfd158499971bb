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

//! Desk-scale reproduction of the linear-model experiments.

pub mod config;
pub mod model;
pub mod runner;
pub mod verify;

pub use config::{parse_snr_list, MatrixKind, Scenario, ScenarioConfig};
pub use model::{fixed_matrix, generate_model, TrialKey};
pub use runner::{
    run_scenario, scenario_a, scenario_b, scenario_c, system_mismatch, ExperimentOutput, Method, SummaryRow,
    TrialRecord,
};
