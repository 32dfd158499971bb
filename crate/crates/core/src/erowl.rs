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

//! The eROWL shrinkage `R_δ`, the single-valued prox of `Ω̃_w/(δ+1)`.
//!
//! The operator is evaluated on the nonnegative representative `|x|` and
//! signs are reapplied afterwards. Four closed-form branches cover the
//! orthant:
//!
//! * `TriangleC1`: the triangle where `R(m)` touches both axes,
//! * `SlabC2`: the slab `|x1 − x2| < δ(w2 − w1)/(δ+1)` above the triangle,
//! * `UpperBranch` / `LowerBranch`: `(x − w/(δ+1))_+` and `(x − w↓/(δ+1))_+`.
//!
//! Branches are tested in that order with the strict and non-strict
//! inequalities of the region definitions.

use crate::error::{invalid, ProxError, Result};
use crate::geometry::{Point2, WeightPair};
use crate::scalar::{corner_tol, Scalar};

/// Relaxation parameter `δ` used by [`erowl_limit`].
pub const LIMIT_DELTA: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErowlParams<T> {
    w: WeightPair<T>,
    delta: T,
}

impl<T: Scalar> ErowlParams<T> {
    pub fn new(w: WeightPair<T>, delta: T) -> Result<Self> {
        if !(delta.is_finite() && delta > T::zero()) {
            return Err(invalid("delta", format!("must be positive, got {delta}")));
        }
        Ok(Self { w, delta })
    }

    pub fn w(&self) -> &WeightPair<T> {
        &self.w
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// `β = δ/(δ+1)`, the reciprocal of the Lipschitz constant `1 + 1/δ`.
    pub fn beta(&self) -> T {
        self.delta / (self.delta + T::one())
    }

    pub fn lipschitz(&self) -> T {
        T::one() + T::one() / self.delta
    }

    /// `η = (w2 − w1)δ/(δ+1)`, the half width of the slab `S`.
    pub fn eta(&self) -> T {
        self.w.spread() * self.beta()
    }

    /// `w̃ = w/(δ+1)`.
    pub fn scaled_weights(&self) -> Point2<T> {
        self.w.as_point() * (T::one() / (self.delta + T::one()))
    }

    /// `w_α = α w + (1 − α) w↓`.
    pub fn w_alpha(&self, alpha: T) -> Point2<T> {
        self.w.interpolate(alpha)
    }

    /// `α(x) = 1/2 + (δ+1)(x1 − x2)/(2δ(w2 − w1))`. Undefined for uniform weights.
    pub fn alpha(&self, a: Point2<T>) -> Option<T> {
        if self.w.is_uniform() {
            return None;
        }
        let d = self.delta;
        Some(T::half() + (d + T::one()) * (a.x1 - a.x2) / (T::two() * d * self.w.spread()))
    }

    /// `m = [(δ+1)(x1 + x2) + δ w1]/(δ+2)`.
    pub fn m(&self, a: Point2<T>) -> T {
        let d = self.delta;
        ((d + T::one()) * (a.x1 + a.x2) + d * self.w.w1()) / (d + T::two())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    UpperBranch,
    LowerBranch,
    TriangleC1,
    SlabC2,
}

/// Region membership of a point of the nonnegative orthant.
pub fn classify_region<T: Scalar>(xabs: Point2<T>, p: &ErowlParams<T>) -> Result<Region> {
    if xabs.x1 < T::zero() || xabs.x2 < T::zero() || !xabs.is_finite() {
        return Err(invalid(
            "xabs",
            format!("expected a finite point of the nonnegative orthant, got ({}, {})", xabs.x1, xabs.x2),
        ));
    }
    Ok(region_of(xabs, p))
}

fn region_of<T: Scalar>(a: Point2<T>, p: &ErowlParams<T>) -> Region {
    let d = p.delta;
    let d1 = d + T::one();
    let (w1, w2) = (p.w.w1(), p.w.w2());
    let diag_level = (w1 + w2) / d1 + w2 - w1;
    let sum = a.x1 + a.x2;
    let side = d * w1 / d1;

    let below = sum <= diag_level;
    if below && -a.x1 + d1 * a.x2 > side && d1 * a.x1 - a.x2 > side {
        return Region::TriangleC1;
    }
    if !below && (a.x1 - a.x2).abs() < p.eta() {
        return Region::SlabC2;
    }
    if a.x1 >= a.x2 {
        Region::UpperBranch
    } else {
        Region::LowerBranch
    }
}

/// Evaluates the closed form attached to `region` at the nonnegative point
/// `a`, whether or not `a` belongs to it. `erowl` only uses the formula of
/// the region containing `a`; the others are exposed for continuity checks
/// across region boundaries.
pub fn branch_value<T: Scalar>(a: Point2<T>, p: &ErowlParams<T>, region: Region) -> Point2<T> {
    let d = p.delta;
    let d1 = d + T::one();
    match region {
        Region::UpperBranch => (a - p.w.as_point() * (T::one() / d1)).ramp(),
        Region::LowerBranch => (a - p.w.reversed() * (T::one() / d1)).ramp(),
        Region::TriangleC1 => {
            let m = p.m(a);
            let t = (d1 * a.x2 - m) / d;
            let out = Point2::raw(m - p.w.w1() - t, t);
            let tol = corner_tol::<T>();
            let clamp = |v: T| if v < T::zero() && v >= -tol { T::zero() } else { v };
            Point2::raw(clamp(out.x1), clamp(out.x2))
        }
        Region::SlabC2 => match p.alpha(a) {
            Some(alpha) => a - p.w_alpha(alpha) * (T::one() / d1),
            // uniform weights: w_α = w for every α
            None => a - p.w.as_point() * (T::one() / d1),
        },
    }
}

/// Intermediate quantities of one `R_δ` evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErowlEvaluation<T> {
    pub region: Region,
    /// Result on the nonnegative representative `|x|`.
    pub unsigned: Point2<T>,
    pub output: Point2<T>,
    /// `m` and the convex weight `ω` of `p2 = ω p1 + (1 − ω) p3` in `TriangleC1`.
    pub m: Option<T>,
    pub omega: Option<T>,
    /// `α(x)` and `w_α` in `SlabC2`.
    pub alpha: Option<T>,
    pub w_alpha: Option<Point2<T>>,
}

pub fn erowl_detailed<T: Scalar>(x: Point2<T>, p: &ErowlParams<T>) -> ErowlEvaluation<T> {
    let a = x.abs();
    let region = region_of(a, p);
    let unsigned = branch_value(a, p, region);
    let (mut m, mut omega, mut alpha, mut w_alpha) = (None, None, None, None);
    match region {
        Region::TriangleC1 => {
            let mv = p.m(a);
            m = Some(mv);
            let denom = p.delta * (mv - p.w.w1());
            if denom != T::zero() {
                omega = Some(((p.delta + T::one()) * a.x2 - mv) / denom);
            }
        }
        Region::SlabC2 => {
            alpha = p.alpha(a);
            w_alpha = alpha.map(|al| p.w_alpha(al));
        }
        _ => {}
    }
    ErowlEvaluation {
        region,
        unsigned,
        output: unsigned.hadamard(x.signum()),
        m,
        omega,
        alpha,
        w_alpha,
    }
}

/// `R_δ(x) = sgn(x) ⊙ R_δ(|x|)`.
pub fn erowl<T: Scalar>(x: Point2<T>, p: &ErowlParams<T>) -> Point2<T> {
    let a = x.abs();
    branch_value(a, p, region_of(a, p)).hadamard(x.signum())
}

/// `lim_{δ↓0} R_δ(x)`, evaluated at `δ = LIMIT_DELTA`.
///
/// On the diagonal the limit is the midpoint of the segment
/// `R(x) = conv{(x − w)_+, (x − w↓)_+}` when that segment touches both axes,
/// and `x − w_{1/2}` once `x1 + x2 >= 2 w2`.
pub fn erowl_limit<T: Scalar>(x: Point2<T>, w: &WeightPair<T>) -> Point2<T> {
    let p = ErowlParams {
        w: *w,
        delta: T::lit(LIMIT_DELTA),
    };
    erowl(x, &p)
}

/// Recovers `(w, δ)` from `η = (w2 − w1)δ/(δ+1)` and `w̃ = w/(δ+1)`.
pub fn reparameterize<T: Scalar>(eta: T, wtilde: &WeightPair<T>) -> Result<ErowlParams<T>> {
    if !(eta.is_finite() && eta > T::zero()) {
        return Err(invalid("eta", format!("must be positive, got {eta}")));
    }
    if wtilde.is_uniform() {
        return Err(ProxError::InvalidWeights(
            "reparameterization needs w̃2 > w̃1".into(),
        ));
    }
    let delta = eta / wtilde.spread();
    let w = wtilde.scaled(delta + T::one())?;
    ErowlParams::new(w, delta)
}

/// Distance from `|x|` to the nearest line on which the piecewise formula
/// of `R_δ` may change: the axes, the diagonal, the boundaries of `C1` and
/// `S`, and the ramp kinks of the off-diagonal branches.
pub fn boundary_distance<T: Scalar>(x: Point2<T>, p: &ErowlParams<T>) -> T {
    let a = x.abs();
    let d = p.delta;
    let d1 = d + T::one();
    let (w1, w2) = (p.w.w1(), p.w.w2());
    let one = T::one();
    let zero = T::zero();
    let side = d * w1 / d1;
    let lines = [
        (one, zero, zero),
        (zero, one, zero),
        (one, -one, zero),
        (one, one, (w1 + w2) / d1 + w2 - w1),
        (-one, d1, side),
        (d1, -one, side),
        (one, -one, p.eta()),
        (one, -one, -p.eta()),
        (one, zero, w1 / d1),
        (zero, one, w2 / d1),
        (one, zero, w2 / d1),
        (zero, one, w1 / d1),
    ];
    lines
        .iter()
        .map(|&(n1, n2, c)| (n1 * a.x1 + n2 * a.x2 - c).abs() / n1.hypot(n2))
        .fold(T::infinity(), T::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(a: f64, b: f64) -> Point2<f64> {
        Point2::new(a, b).unwrap()
    }

    fn params(w1: f64, w2: f64, delta: f64) -> ErowlParams<f64> {
        ErowlParams::new(WeightPair::new(w1, w2).unwrap(), delta).unwrap()
    }

    fn close(a: Point2<f64>, b: Point2<f64>, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn region_examples() {
        let pr = params(0.0, 2.0, 1.0);
        assert_eq!(classify_region(p(1.0, 1.0), &pr).unwrap(), Region::TriangleC1);
        assert_eq!(classify_region(p(2.2, 1.8), &pr).unwrap(), Region::SlabC2);
        assert_eq!(classify_region(p(5.0, 1.0), &pr).unwrap(), Region::UpperBranch);
        assert_eq!(classify_region(p(1.0, 5.0), &pr).unwrap(), Region::LowerBranch);
        assert!(classify_region(p(-1.0, 1.0), &pr).is_err());
    }

    #[test]
    fn value_examples() {
        let pr = params(0.0, 2.0, 1.0);
        assert!(close(erowl(p(2.0, 2.0), &pr), p(1.5, 1.5), 1e-15));
        assert!(close(erowl(p(1.0, 1.0), &pr), p(2.0 / 3.0, 2.0 / 3.0), 1e-15));
        assert!(close(erowl(p(5.0, 1.0), &pr), p(5.0, 0.0), 1e-15));
        assert!(close(erowl(p(2.2, 1.8), &pr), p(1.9, 1.1), 1e-14));
        assert!(close(erowl(p(-2.2, 1.8), &pr), p(-1.9, 1.1), 1e-14));
        assert!(close(erowl(p(1.8, -2.2), &pr), p(1.1, -1.9), 1e-14));
    }

    #[test]
    fn intermediates() {
        let pr = params(0.0, 2.0, 1.0);
        let e = erowl_detailed(p(2.2, 1.8), &pr);
        assert_eq!(e.region, Region::SlabC2);
        assert_relative_eq!(e.alpha.unwrap(), 0.7, epsilon = 1e-14);
        assert!(close(e.w_alpha.unwrap(), p(0.6, 1.4), 1e-14));

        let e = erowl_detailed(p(1.0, 1.0), &pr);
        assert_eq!(e.region, Region::TriangleC1);
        assert_relative_eq!(e.m.unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        // p2 = ω p1 + (1 − ω) p3 with p1 = (0, m − w1), p3 = (m − w1, 0)
        let m = e.m.unwrap();
        let omega = e.omega.unwrap();
        let combo = p(0.0, m) * omega + p(m, 0.0) * (1.0 - omega);
        assert!(close(combo, e.output, 1e-14));
        assert!(omega > 0.0 && omega < 1.0);
    }

    #[test]
    fn uniform_weights_have_no_slab_or_triangle() {
        let pr = params(1.0, 1.0, 2.0);
        for &(a, b) in &[(0.3, 0.3), (1.0, 0.9), (5.0, 5.0), (0.2, 3.0)] {
            let r = classify_region(p(a, b), &pr).unwrap();
            assert!(matches!(r, Region::UpperBranch | Region::LowerBranch), "{a},{b}: {r:?}");
        }
        assert!(close(erowl(p(2.0, 2.0), &pr), p(2.0 - 1.0 / 3.0, 2.0 - 1.0 / 3.0), 1e-15));
    }

    #[test]
    fn limit_examples() {
        let w = WeightPair::new(0.0, 2.0).unwrap();
        assert!(close(erowl_limit(p(2.0, 2.0), &w), p(1.0, 1.0), 1e-6));
        assert!(close(erowl_limit(p(5.0, 1.0), &w), p(5.0, 0.0), 1e-6));
        assert!(close(erowl_limit(p(0.5, 0.5), &w), p(0.25, 0.25), 1e-6));
    }

    #[test]
    fn reparameterization_round_trip() {
        let pr = reparameterize(1.0, &WeightPair::new(0.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(pr.delta(), 1.0);
        assert!(close(pr.w().as_point(), p(0.0, 2.0), 1e-15));

        let fwd = params(0.0, 2.0, 50.0);
        assert_relative_eq!(fwd.eta(), 100.0 / 51.0, epsilon = 1e-14);
        let wt = fwd.scaled_weights();
        assert_relative_eq!(wt.x2, 2.0 / 51.0, epsilon = 1e-15);
        assert!((wt.x2 - 0.039).abs() < 5e-4);
        let back = reparameterize(fwd.eta(), &WeightPair::new(wt.x1, wt.x2).unwrap()).unwrap();
        assert_relative_eq!(back.delta(), 50.0, epsilon = 1e-12);
        assert!(close(back.w().as_point(), p(0.0, 2.0), 1e-12));
        assert!((back.eta() - fwd.eta()).abs() <= 1e-12);

        assert!(reparameterize(1.0, &WeightPair::new(1.0, 1.0).unwrap()).is_err());
        assert!(reparameterize(0.0, &WeightPair::new(0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn rejects_nonpositive_delta() {
        let w = WeightPair::new(0.0, 1.0).unwrap();
        assert!(ErowlParams::new(w, 0.0).is_err());
        assert!(ErowlParams::new(w, -1.0).is_err());
        assert!(ErowlParams::new(w, f64::NAN).is_err());
    }

    #[test]
    fn single_precision() {
        let pr = ErowlParams::new(WeightPair::new(0.0f32, 2.0).unwrap(), 1.0).unwrap();
        let out = erowl(Point2::new(2.2f32, 1.8).unwrap(), &pr);
        assert!((out.x1 - 1.9).abs() < 1e-5 && (out.x2 - 1.1).abs() < 1e-5);
    }
}
