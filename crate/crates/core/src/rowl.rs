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

//! Reversely ordered weighted l1 (ROWL) penalty `Ω_w(x) = wᵀ|x|↓` with
//! nondecreasing weights, its exact prox in the plane, and its l.s.c.
//! 1-weakly convex envelope `Ω̃_w` with the corresponding prox.

use crate::error::{ProxError, Result};
use crate::geometry::{sorted_abs, Point2, ProxSet, WeightPair};
use crate::linalg::Mat2;
use crate::scalar::Scalar;

/// The matrices `C = ½[[1, −1], [−1, 1]]` and `V = (1/√2)[[1, 1], [−1, 1]]`
/// with `C = V diag(1, 0) Vᵀ`.
#[derive(Clone, Copy, Debug)]
pub struct EnvelopeConstants<T> {
    c: Mat2<T>,
    v: Mat2<T>,
}

impl<T: Scalar> EnvelopeConstants<T> {
    pub fn new() -> Self {
        let h = T::half();
        let c = Mat2::new(h, -h, -h, h);
        let s = T::FRAC_1_SQRT_2();
        let v = Mat2::new(s, s, -s, s);
        let rebuilt = v * Mat2::diag(T::one(), T::zero()) * v.transpose();
        debug_assert!(rebuilt.max_abs_diff(&c) <= T::lit(1e-15).max(T::epsilon() * T::two()));
        Self { c, v }
    }

    pub fn c(&self) -> Mat2<T> {
        self.c
    }

    pub fn v(&self) -> Mat2<T> {
        self.v
    }

    /// Largest entrywise deviation of `V diag(1,0) Vᵀ` from `C`.
    pub fn factorization_defect(&self) -> T {
        let rebuilt = self.v * Mat2::diag(T::one(), T::zero()) * self.v.transpose();
        rebuilt.max_abs_diff(&self.c)
    }
}

impl<T: Scalar> Default for EnvelopeConstants<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// `wᵀ|x|↓` for any length. Weights must be nonnegative and nondecreasing.
pub fn rowl_penalty<T: Scalar>(x: &[T], w: &[T]) -> Result<T> {
    if x.len() != w.len() {
        return Err(ProxError::DimensionMismatch {
            expected: w.len(),
            got: x.len(),
        });
    }
    if x.is_empty() {
        return Err(ProxError::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    if w.iter().any(|v| !v.is_finite() || *v < T::zero()) {
        return Err(ProxError::InvalidWeights("weights must be finite and nonnegative".into()));
    }
    if w.windows(2).any(|p| p[0] > p[1]) {
        return Err(ProxError::InvalidWeights("weights must be nondecreasing".into()));
    }
    let mut a: Vec<T> = x.iter().map(|v| v.abs()).collect();
    a.sort_by(|p, q| q.partial_cmp(p).unwrap_or(std::cmp::Ordering::Equal));
    Ok(a.iter().zip(w).fold(T::zero(), |acc, (ai, wi)| acc + *ai * *wi))
}

/// Planar fast path of [`rowl_penalty`].
pub fn rowl_penalty_2d<T: Scalar>(x: Point2<T>, w: &WeightPair<T>) -> T {
    let (s, _) = sorted_abs(x);
    w.as_point().dot(s)
}

/// The two prox candidates `((|x| − w)_+, (|x| − w↓)_+)` on the nonnegative
/// representative, before signs are reapplied.
fn candidates<T: Scalar>(a: Point2<T>, w: &WeightPair<T>) -> (Point2<T>, Point2<T>) {
    ((a - w.as_point()).ramp(), (a - w.reversed()).ramp())
}

/// Exact set-valued prox of `Ω_w` in the plane. On ties `|x1| = |x2|` both
/// candidates are returned (collapsed when they coincide).
pub fn prox_rowl_2d<T: Scalar>(x: Point2<T>, w: &WeightPair<T>) -> ProxSet<T> {
    let a = x.abs();
    let sign = x.signum();
    let (up, down) = candidates(a, w);
    let set = if a.x1 > a.x2 {
        ProxSet::Single(up)
    } else if a.x1 < a.x2 {
        ProxSet::Single(down)
    } else {
        ProxSet::pair(up, down)
    };
    set.map(|p| p.hadamard(sign))
}

/// Deterministic selection of the ROWL prox: ties take `(|x| − w)_+`.
pub fn rowl_shrink<T: Scalar>(x: Point2<T>, w: &WeightPair<T>) -> Point2<T> {
    let a = x.abs();
    let (up, down) = candidates(a, w);
    let p = if a.x1 >= a.x2 { up } else { down };
    p.hadamard(x.signum())
}

/// `s ∈ K1 ⇔ s1 >= s2 + w2 − w1` for the sorted representative `s`.
pub fn in_k1<T: Scalar>(sorted: Point2<T>, w: &WeightPair<T>) -> bool {
    sorted.x1 >= sorted.x2 + w.spread()
}

/// The l.s.c. 1-weakly convex envelope `Ω̃_w` in closed form, for the
/// sorted representative `s = |x|↓`:
///
/// * `wᵀs` on `K1`;
/// * `wᵀs − ½(s + w)ᵀ C (s + w)` on `K2` with `s1 + s2 >= w2 − w1`;
/// * `w1(s1 + s2) + s1·s2` on the triangle `s1 + s2 < w2 − w1`.
///
/// The quadratic K2 branch alone ([`rowl_envelope_2d_k2_formula`]) is only a
/// minorant on the triangle: there the chord across the diagonal would leave
/// the orthant, and the hull is spanned by `(s1 + s2)e1` and `(s1 + s2)e2`.
pub fn rowl_envelope_2d<T: Scalar>(x: Point2<T>, w: &WeightPair<T>) -> T {
    let (s, _) = sorted_abs(x);
    if s.x1 + s.x2 < w.spread() {
        w.w1() * (s.x1 + s.x2) + s.x1 * s.x2
    } else {
        rowl_envelope_2d_k2_formula(x, w)
    }
}

/// `wᵀs` on `K1`, `wᵀs − ½(s + w)ᵀ C (s + w)` on all of `K2`, without the
/// triangle correction of [`rowl_envelope_2d`]. Its minimum is `−wᵀCw/2`.
pub fn rowl_envelope_2d_k2_formula<T: Scalar>(x: Point2<T>, w: &WeightPair<T>) -> T {
    let (s, _) = sorted_abs(x);
    let base = w.as_point().dot(s);
    if in_k1(s, w) {
        base
    } else {
        let v = s + w.as_point();
        base - T::half() * EnvelopeConstants::<T>::new().c().quadratic_form(v)
    }
}

/// Prox of `Ω̃_w`: identical to [`prox_rowl_2d`] off the diagonal, the
/// segment between the two candidates on it.
pub fn prox_rowl_envelope_2d<T: Scalar>(x: Point2<T>, w: &WeightPair<T>) -> ProxSet<T> {
    let a = x.abs();
    let sign = x.signum();
    let (up, down) = candidates(a, w);
    let set = if a.x1 > a.x2 {
        ProxSet::Single(up)
    } else if a.x1 < a.x2 {
        ProxSet::Single(down)
    } else {
        ProxSet::segment(up, down)
    };
    set.map(|p| p.hadamard(sign))
}

fn planar<T: Scalar>(x: &[T], w: &[T]) -> Result<(Point2<T>, WeightPair<T>)> {
    if x.len() != 2 {
        return Err(ProxError::DimensionMismatch {
            expected: 2,
            got: x.len(),
        });
    }
    if w.len() != 2 {
        return Err(ProxError::DimensionMismatch {
            expected: 2,
            got: w.len(),
        });
    }
    Ok((Point2::new(x[0], x[1])?, WeightPair::new(w[0], w[1])?))
}

/// Slice front end of [`prox_rowl_2d`]; rejects lengths other than two.
pub fn prox_rowl<T: Scalar>(x: &[T], w: &[T]) -> Result<ProxSet<T>> {
    let (x, w) = planar(x, w)?;
    Ok(prox_rowl_2d(x, &w))
}

/// Slice front end of [`rowl_envelope_2d`]; rejects lengths other than two.
pub fn rowl_envelope<T: Scalar>(x: &[T], w: &[T]) -> Result<T> {
    let (x, w) = planar(x, w)?;
    Ok(rowl_envelope_2d(x, &w))
}
