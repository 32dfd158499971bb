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

//! Piecewise-affine monotone graphs on the real line and the conversion
//! `p ↦ [T⁻¹ + δ Id]⁻¹((δ+1)q)` evaluated on the filled graph.

use crate::error::{ProxError, Result};
use crate::geometry::ScalarProxSet;
use crate::scalar::Scalar;

const RESIDUAL_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Breakpoint<T> {
    pub x: T,
    pub image: ScalarProxSet<T>,
}

/// `p = slope·x + intercept` between two consecutive breakpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffinePiece<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> AffinePiece<T> {
    pub fn new(slope: T, intercept: T) -> Self {
        Self { slope, intercept }
    }

    pub fn eval(&self, x: T) -> T {
        self.slope * x + self.intercept
    }
}

/// Monotone set-valued map given by `n` breakpoints and `n + 1` affine
/// pieces; piece `k` lives between breakpoints `k − 1` and `k`, the first and
/// last extend to infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneGraph1D<T> {
    breakpoints: Vec<Breakpoint<T>>,
    pieces: Vec<AffinePiece<T>>,
}

impl<T: Scalar> MonotoneGraph1D<T> {
    pub fn new(breakpoints: Vec<Breakpoint<T>>, pieces: Vec<AffinePiece<T>>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(ProxError::DimensionMismatch {
                expected: breakpoints.len() + 1,
                got: pieces.len(),
            });
        }
        for p in &pieces {
            if !(p.slope.is_finite() && p.intercept.is_finite()) {
                return Err(ProxError::NonFinite("affine piece"));
            }
            if p.slope < T::zero() {
                return Err(ProxError::NotMonotone(format!("negative slope {}", p.slope)));
            }
        }
        for (k, b) in breakpoints.iter().enumerate() {
            let (lo, hi) = b.image.bounds();
            if !(b.x.is_finite() && lo.is_finite() && hi.is_finite()) {
                return Err(ProxError::NonFinite("breakpoint"));
            }
            if k > 0 && b.x <= breakpoints[k - 1].x {
                return Err(ProxError::NotMonotone(format!(
                    "breakpoints not increasing at {}",
                    b.x
                )));
            }
            // the pieces must meet the filled image at its ends
            let left = pieces[k].eval(b.x);
            let right = pieces[k + 1].eval(b.x);
            let tol = T::lit(1e-9) * (T::one() + b.x.abs() + hi.abs());
            if (left - lo).abs() > tol || (right - hi).abs() > tol {
                return Err(ProxError::NotMonotone(format!(
                    "graph is not connected at x = {}: pieces give [{left}, {right}], image [{lo}, {hi}]",
                    b.x
                )));
            }
        }
        Ok(Self { breakpoints, pieces })
    }

    /// Graph of hard shrinkage with threshold `λ`, jumps at `±λ` carrying the
    /// pairs `{−λ, 0}` and `{0, λ}`.
    pub fn hard_threshold(lambda: T) -> Result<Self> {
        if !(lambda.is_finite() && lambda > T::zero()) {
            return Err(crate::error::invalid("lambda", format!("must be positive, got {lambda}")));
        }
        let id = AffinePiece::new(T::one(), T::zero());
        let zero = AffinePiece::new(T::zero(), T::zero());
        Self::new(
            vec![
                Breakpoint { x: -lambda, image: ScalarProxSet::pair(-lambda, T::zero()) },
                Breakpoint { x: lambda, image: ScalarProxSet::pair(T::zero(), lambda) },
            ],
            vec![id, zero, id],
        )
    }

    pub fn breakpoints(&self) -> &[Breakpoint<T>] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[AffinePiece<T>] {
        &self.pieces
    }

    /// Image at `x`: the breakpoint set on a breakpoint, otherwise the
    /// affine value.
    pub fn image(&self, x: T) -> ScalarProxSet<T> {
        let k = self.breakpoints.partition_point(|b| b.x < x);
        match self.breakpoints.get(k) {
            Some(b) if b.x == x => b.image,
            _ => ScalarProxSet::Single(self.pieces[k].eval(x)),
        }
    }

    /// Vertices of the filled graph between the two rays, in graph order.
    pub fn filled_polyline(&self) -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(2 * self.breakpoints.len());
        for b in &self.breakpoints {
            let (lo, hi) = b.image.bounds();
            out.push((b.x, lo));
            if hi > lo {
                out.push((b.x, hi));
            }
        }
        out
    }

    /// Unique `p` with `(x′, p)` on the filled graph and `x′ + δp = (δ+1)q`.
    pub fn convert(&self, delta: T, q: T) -> Result<T> {
        convert_1d(self, delta, q)
    }
}

pub fn convert_1d<T: Scalar>(graph: &MonotoneGraph1D<T>, delta: T, q: T) -> Result<T> {
    if !(delta.is_finite() && delta > T::zero()) {
        return Err(crate::error::invalid("delta", format!("must be positive, got {delta}")));
    }
    if !q.is_finite() {
        return Err(ProxError::OutOfRange(format!("query {q}")));
    }
    let target = (delta + T::one()) * q;
    let g = |(x, p): (T, T)| x + delta * p;
    let poly = graph.filled_polyline();
    let ray = |piece: &AffinePiece<T>, x0: T| {
        // x′ = x0 + s, p = piece(x′); g is affine in s with slope 1 + δa
        let s = (target - g((x0, piece.eval(x0)))) / (T::one() + delta * piece.slope);
        piece.eval(x0 + s)
    };
    let (first, last) = match (poly.first(), poly.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Ok(ray(&graph.pieces[0], T::zero())),
    };
    if target <= g(first) {
        return Ok(ray(&graph.pieces[0], first.0));
    }
    if target >= g(last) {
        return Ok(ray(graph.pieces.last().unwrap(), last.0));
    }
    // g increases strictly along the polyline; locate the edge then bisect
    // on arc length within it
    let k = poly.partition_point(|&v| g(v) <= target);
    let (a, b) = (poly[k - 1], poly[k]);
    let point = |t: T| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
    let (mut lo, mut hi) = (T::zero(), T::one());
    let tol = T::lit(RESIDUAL_TOL).max(T::epsilon() * T::lit(4.0) * (T::one() + target.abs()));
    let mut t = T::half();
    for _ in 0..MAX_BISECTIONS {
        t = T::half() * (lo + hi);
        let r = g(point(t)) - target;
        if r.abs() <= tol {
            break;
        }
        if r < T::zero() {
            lo = t;
        } else {
            hi = t;
        }
    }
    Ok(point(t).1)
}
