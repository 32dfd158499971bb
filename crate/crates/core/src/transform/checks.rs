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

//! Sampled checks of monotonicity, Lipschitz continuity and Jacobian
//! symmetry for planar operators.

use rayon::prelude::*;

use crate::geometry::Point2;
use crate::rng::Stream;

/// Axis-aligned sampling box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleBox {
    pub lo: Point2<f64>,
    pub hi: Point2<f64>,
}

impl SampleBox {
    pub fn square(r: f64) -> Self {
        Self { lo: Point2::raw(-r, -r), hi: Point2::raw(r, r) }
    }

    pub fn sample(&self, rng: &mut Stream) -> Point2<f64> {
        Point2::raw(
            rng.uniform_in(self.lo.x1, self.hi.x1),
            rng.uniform_in(self.lo.x2, self.hi.x2),
        )
    }
}

impl Default for SampleBox {
    fn default() -> Self {
        Self::square(5.0)
    }
}

const CHUNK: usize = 4096;

/// Draws `pairs` pairs: the first half independent uniform, the second half
/// a uniform point and a neighbour at distance up to 0.05 so that region
/// boundaries get straddled often.
fn sample_pairs(pairs: usize, seed: u64, region: SampleBox) -> Vec<(Point2<f64>, Point2<f64>)> {
    let chunks = pairs.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = Stream::for_parts(seed, &[0x5eed, c as u64]);
            let start = c * CHUNK;
            let end = pairs.min(start + CHUNK);
            (start..end)
                .map(|i| {
                    let x = region.sample(&mut rng);
                    let y = if i < pairs / 2 {
                        region.sample(&mut rng)
                    } else {
                        let r = 0.05 * rng.uniform();
                        let t = std::f64::consts::TAU * rng.uniform();
                        x + Point2::raw(r * t.cos(), r * t.sin())
                    };
                    (x, y)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Smallest `⟨op(x) − op(y), x − y⟩` over the sampled pairs.
pub fn check_monotone<F>(op: F, pairs: usize, seed: u64, region: SampleBox) -> f64
where
    F: Fn(Point2<f64>) -> Point2<f64> + Sync,
{
    sample_pairs(pairs, seed, region)
        .par_iter()
        .map(|&(x, y)| (op(x) - op(y)).dot(x - y))
        .reduce(|| f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzReport {
    pub max_ratio: f64,
    pub bound: f64,
    pub pairs: usize,
}

impl LipschitzReport {
    /// `max_ratio ≤ bound·(1 + rel)`.
    pub fn within(&self, rel: f64) -> bool {
        self.max_ratio <= self.bound * (1.0 + rel)
    }
}

/// Largest `‖op(x) − op(y)‖ / ‖x − y‖` over the sampled pairs.
pub fn check_lipschitz<F>(op: F, bound: f64, pairs: usize, seed: u64, region: SampleBox) -> LipschitzReport
where
    F: Fn(Point2<f64>) -> Point2<f64> + Sync,
{
    let max_ratio = sample_pairs(pairs, seed, region)
        .par_iter()
        .filter_map(|&(x, y)| {
            let d = x.dist(y);
            (d > 0.0).then(|| op(x).dist(op(y)) / d)
        })
        .reduce(|| 0.0, f64::max);
    LipschitzReport { max_ratio, bound, pairs }
}

/// Central-difference Jacobian of `op` at `x` with step `h`.
pub fn jacobian<F>(op: F, x: Point2<f64>, h: f64) -> [[f64; 2]; 2]
where
    F: Fn(Point2<f64>) -> Point2<f64>,
{
    let e1 = Point2::raw(h, 0.0);
    let e2 = Point2::raw(0.0, h);
    let c1 = (op(x + e1) - op(x - e1)) * (0.5 / h);
    let c2 = (op(x + e2) - op(x - e2)) * (0.5 / h);
    [[c1.x1, c2.x1], [c1.x2, c2.x2]]
}

/// `|J₁₂ − J₂₁|` of the central-difference Jacobian.
pub fn jacobian_symmetry_defect<F>(op: F, x: Point2<f64>, h: f64) -> f64
where
    F: Fn(Point2<f64>) -> Point2<f64>,
{
    let j = jacobian(op, x, h);
    (j[0][1] - j[1][0]).abs()
}
