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

//! Discontinuous shrinkage operators and their continuous relaxations.
//!
//! The crate covers the l0 / hard / firm family on the real line, the
//! reversely ordered weighted l1 (ROWL) penalty in the plane together with
//! its weakly convex envelope and the continuous eROWL shrinkage, grid-based
//! oracles (Fenchel conjugation, brute-force prox, graph conversion), a
//! proximal forward-backward solver, and an experiment harness.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod cli;
pub mod erowl;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod linalg;
pub mod rng;
pub mod rowl;
pub mod scalar;
pub mod scalar_ops;
pub mod solver;
pub mod transform;

pub use error::{ProxError, Result};
pub use scalar::Scalar;

pub type Point = geometry::Point2<f64>;
pub type Weights = geometry::WeightPair<f64>;
pub type PlanarProxSet = geometry::ProxSet<f64>;
pub type LineProxSet = geometry::ScalarProxSet<f64>;
pub type Erowl = erowl::ErowlParams<f64>;
pub type Firm = scalar_ops::FirmParams<f64>;
pub type Model = solver::LinearModel<f64>;
pub type Graph = transform::MonotoneGraph1D<f64>;

pub type PointF32 = geometry::Point2<f32>;
pub type WeightsF32 = geometry::WeightPair<f32>;
pub type ErowlF32 = erowl::ErowlParams<f32>;
