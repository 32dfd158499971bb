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

//! Grid-based numerical oracles: sampled functions, Fenchel conjugation,
//! brute-force prox, graph conversion and operator property checks.

pub mod checks;
pub mod conjugate;
pub mod convert;
pub mod grid;
pub mod oracle;

pub use checks::{check_lipschitz, check_monotone, jacobian_symmetry_defect, LipschitzReport, SampleBox};
pub use conjugate::{biconjugate_grid, legendre_conjugate_grid, weakly_convex_envelope_grid};
pub use convert::{convert_1d, AffinePiece, Breakpoint, MonotoneGraph1D};
pub use grid::{Axis, GridSpec, SampledFunction};
pub use oracle::{brute_force_prox_1d, brute_force_prox_2d, verify_inclusion_1d, verify_inclusion_2d};
