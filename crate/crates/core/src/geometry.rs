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

//! Planar points, weight pairs, signed permutations and set-valued prox images.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{ProxError, Result};
use crate::scalar::{sgn, Scalar};

/// A point of the real plane with finite coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x1: T,
    pub x2: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x1: T, x2: T) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite()) {
            return Err(ProxError::NonFinite("Point2"));
        }
        Ok(Self { x1, x2 })
    }

    /// Builds a point without the finiteness check. Used for values produced
    /// by arithmetic on already validated inputs.
    #[inline]
    pub(crate) const fn raw(x1: T, x2: T) -> Self {
        Self { x1, x2 }
    }

    pub fn zero() -> Self {
        Self::raw(T::zero(), T::zero())
    }

    pub fn splat(v: T) -> Self {
        Self::raw(v, v)
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x1 * other.x1 + self.x2 * other.x2
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x1.hypot(self.x2)
    }

    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn max_abs(self) -> T {
        self.x1.abs().max(self.x2.abs())
    }

    /// Componentwise absolute value `|x|`.
    pub fn abs(self) -> Self {
        Self::raw(self.x1.abs(), self.x2.abs())
    }

    /// The ramp `(x)_+`, componentwise `max(x, 0)`.
    pub fn ramp(self) -> Self {
        Self::raw(self.x1.max(T::zero()), self.x2.max(T::zero()))
    }

    /// Coordinates in reversed order.
    pub fn swapped(self) -> Self {
        Self::raw(self.x2, self.x1)
    }

    /// Componentwise product.
    pub fn hadamard(self, other: Self) -> Self {
        Self::raw(self.x1 * other.x1, self.x2 * other.x2)
    }

    /// Componentwise sign with `sgn(0) = +1`.
    pub fn signum(self) -> Self {
        Self::raw(sgn(self.x1), sgn(self.x2))
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn to_array(self) -> [T; 2] {
        [self.x1, self.x2]
    }

    pub fn lerp(self, other: Self, t: T) -> Self {
        self + (other - self) * t
    }
}

impl<T: Scalar> TryFrom<[T; 2]> for Point2<T> {
    type Error = ProxError;

    fn try_from(v: [T; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::raw(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::raw(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::raw(-self.x1, -self.x2)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Self::raw(self.x1 * rhs, self.x2 * rhs)
    }
}

/// Nondecreasing nonnegative weights `0 <= w1 <= w2` of the two-dimensional
/// reversely ordered weighted l1 penalty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightPair<T> {
    w1: T,
    w2: T,
}

impl<T: Scalar> WeightPair<T> {
    pub fn new(w1: T, w2: T) -> Result<Self> {
        if !(w1.is_finite() && w2.is_finite()) {
            return Err(ProxError::NonFinite("WeightPair"));
        }
        if w1 < T::zero() || w1 > w2 {
            return Err(ProxError::InvalidWeights(format!(
                "need 0 <= w1 <= w2, got ({w1}, {w2})"
            )));
        }
        Ok(Self { w1, w2 })
    }

    pub fn w1(&self) -> T {
        self.w1
    }

    pub fn w2(&self) -> T {
        self.w2
    }

    /// The weights as a point `w = (w1, w2)`.
    pub fn as_point(&self) -> Point2<T> {
        Point2::raw(self.w1, self.w2)
    }

    /// The reversed weights `w↓ = (w2, w1)`.
    pub fn reversed(&self) -> Point2<T> {
        Point2::raw(self.w2, self.w1)
    }

    /// `w_α = α w + (1 − α) w↓`.
    pub fn interpolate(&self, alpha: T) -> Point2<T> {
        self.as_point() * alpha + self.reversed() * (T::one() - alpha)
    }

    /// `w1 = w2`: the penalty degenerates to a uniformly weighted l1 norm.
    pub fn is_uniform(&self) -> bool {
        self.w1 == self.w2
    }

    pub fn spread(&self) -> T {
        self.w2 - self.w1
    }

    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(self.w1 * factor, self.w2 * factor)
    }
}

/// A coordinate swap followed by componentwise sign flips.
///
/// `apply` maps the sorted nonnegative representative produced by
/// [`sorted_abs`] back to the original point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    sign1: i8,
    sign2: i8,
    swapped: bool,
}

impl SignedPermutation {
    pub fn new(sign1: i8, sign2: i8, swapped: bool) -> Result<Self> {
        if sign1.abs() != 1 || sign2.abs() != 1 {
            return Err(crate::error::invalid("sign", "signs must be +1 or -1"));
        }
        Ok(Self {
            sign1,
            sign2,
            swapped,
        })
    }

    pub const fn identity() -> Self {
        Self {
            sign1: 1,
            sign2: 1,
            swapped: false,
        }
    }

    /// All eight signed permutations of the plane.
    pub fn all() -> [Self; 8] {
        let mut out = [Self::identity(); 8];
        let mut i = 0;
        for swapped in [false, true] {
            for sign1 in [1, -1] {
                for sign2 in [1, -1] {
                    out[i] = Self {
                        sign1,
                        sign2,
                        swapped,
                    };
                    i += 1;
                }
            }
        }
        out
    }

    pub fn sign1(&self) -> i8 {
        self.sign1
    }

    pub fn sign2(&self) -> i8 {
        self.sign2
    }

    pub fn is_swapped(&self) -> bool {
        self.swapped
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    fn sign<T: Scalar>(s: i8) -> T {
        if s < 0 {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Swap (if recorded) and then flip signs.
    pub fn apply<T: Scalar>(&self, y: Point2<T>) -> Point2<T> {
        let z = if self.swapped { y.swapped() } else { y };
        Point2::raw(Self::sign::<T>(self.sign1) * z.x1, Self::sign::<T>(self.sign2) * z.x2)
    }

    /// Inverse of [`apply`](Self::apply).
    pub fn apply_inverse<T: Scalar>(&self, x: Point2<T>) -> Point2<T> {
        let z = Point2::raw(Self::sign::<T>(self.sign1) * x.x1, Self::sign::<T>(self.sign2) * x.x2);
        if self.swapped {
            z.swapped()
        } else {
            z
        }
    }
}

/// Sorts `|x|` into nonincreasing order and records how to undo it.
///
/// Ties `|x1| = |x2|` keep the identity ordering.
pub fn sorted_abs<T: Scalar>(x: Point2<T>) -> (Point2<T>, SignedPermutation) {
    let a = x.abs();
    let swapped = a.x2 > a.x1;
    let perm = SignedPermutation {
        sign1: if x.x1.is_sign_negative() { -1 } else { 1 },
        sign2: if x.x2.is_sign_negative() { -1 } else { 1 },
        swapped,
    };
    let sorted = if swapped { a.swapped() } else { a };
    (sorted, perm)
}

pub fn unsort<T: Scalar>(y: Point2<T>, perm: &SignedPermutation) -> Point2<T> {
    perm.apply(y)
}

/// Image of a set-valued proximity operator in the plane.
///
/// Build through [`ProxSet::pair`] and [`ProxSet::segment`] to get the
/// degenerate cases collapsed to `Single`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProxSet<T> {
    Single(Point2<T>),
    PointPair(Point2<T>, Point2<T>),
    Segment(Point2<T>, Point2<T>),
}

impl<T: Scalar> ProxSet<T> {
    pub fn pair(a: Point2<T>, b: Point2<T>) -> Self {
        if a == b {
            Self::Single(a)
        } else {
            Self::PointPair(a, b)
        }
    }

    pub fn segment(a: Point2<T>, b: Point2<T>) -> Self {
        if a == b {
            Self::Single(a)
        } else {
            Self::Segment(a, b)
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, Self::Single(_))
    }

    /// The defining points: one for `Single`, two otherwise.
    pub fn points(&self) -> Vec<Point2<T>> {
        match *self {
            Self::Single(p) => vec![p],
            Self::PointPair(a, b) | Self::Segment(a, b) => vec![a, b],
        }
    }

    /// Euclidean distance from `p` to the set.
    pub fn distance(&self, p: Point2<T>) -> T {
        match *self {
            Self::Single(a) => p.dist(a),
            Self::PointPair(a, b) => p.dist(a).min(p.dist(b)),
            Self::Segment(a, b) => {
                let d = b - a;
                let len_sq = d.norm_sq();
                let t = if len_sq > T::zero() {
                    ((p - a).dot(d) / len_sq).max(T::zero()).min(T::one())
                } else {
                    T::zero()
                };
                p.dist(a + d * t)
            }
        }
    }

    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        self.distance(p) <= tol
    }

    /// Every defining point of `self` lies in `other` within `tol`. For a
    /// segment this is equivalent to set inclusion when `other` is convex.
    pub fn is_subset_of(&self, other: &Self, tol: T) -> bool {
        self.points().into_iter().all(|p| other.contains(p, tol))
    }

    /// Applies a map to every defining point, preserving the variant.
    pub fn map(&self, f: impl Fn(Point2<T>) -> Point2<T>) -> Self {
        match *self {
            Self::Single(a) => Self::Single(f(a)),
            Self::PointPair(a, b) => Self::PointPair(f(a), f(b)),
            Self::Segment(a, b) => Self::Segment(f(a), f(b)),
        }
    }
}

/// Image of a set-valued proximity operator on the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalarProxSet<T> {
    Single(T),
    Pair(T, T),
    Interval(T, T),
}

impl<T: Scalar> ScalarProxSet<T> {
    pub fn pair(a: T, b: T) -> Self {
        if a == b {
            Self::Single(a)
        } else {
            Self::Pair(a, b)
        }
    }

    /// Closed interval between `a` and `b`, in either order.
    pub fn interval(a: T, b: T) -> Self {
        if a == b {
            Self::Single(a)
        } else {
            Self::Interval(a.min(b), a.max(b))
        }
    }

    pub fn points(&self) -> Vec<T> {
        match *self {
            Self::Single(a) => vec![a],
            Self::Pair(a, b) | Self::Interval(a, b) => vec![a, b],
        }
    }

    /// Smallest and largest element.
    pub fn bounds(&self) -> (T, T) {
        match *self {
            Self::Single(a) => (a, a),
            Self::Pair(a, b) | Self::Interval(a, b) => (a.min(b), a.max(b)),
        }
    }

    pub fn distance(&self, p: T) -> T {
        match *self {
            Self::Single(a) => (p - a).abs(),
            Self::Pair(a, b) => (p - a).abs().min((p - b).abs()),
            Self::Interval(lo, hi) => {
                if p < lo {
                    lo - p
                } else if p > hi {
                    p - hi
                } else {
                    T::zero()
                }
            }
        }
    }

    pub fn contains(&self, p: T, tol: T) -> bool {
        self.distance(p) <= tol
    }

    pub fn is_subset_of(&self, other: &Self, tol: T) -> bool {
        self.points().into_iter().all(|p| other.contains(p, tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> Point2<f64> {
        Point2::new(a, b).unwrap()
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Point2::new(f64::NAN, 0.0).is_err());
        assert!(Point2::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn weight_pair_validation() {
        assert!(WeightPair::new(0.0, 2.0).is_ok());
        assert!(WeightPair::new(1.0, 1.0).is_ok());
        assert!(WeightPair::new(2.0, 1.0).is_err());
        assert!(WeightPair::new(-0.1, 1.0).is_err());
        let w = WeightPair::new(0.0, 2.0).unwrap();
        assert_eq!(w.reversed(), p(2.0, 0.0));
        assert_eq!(w.interpolate(0.5), p(1.0, 1.0));
    }

    #[test]
    fn sorted_abs_examples() {
        let (s, perm) = sorted_abs(p(-1.0, 3.0));
        assert_eq!(s, p(3.0, 1.0));
        assert!(perm.is_swapped());
        assert_eq!(unsort(s, &perm), p(-1.0, 3.0));

        let (s, perm) = sorted_abs(p(0.0, 0.0));
        assert_eq!(s, p(0.0, 0.0));
        assert!(perm.is_identity());

        // ties keep the identity ordering
        let (s, perm) = sorted_abs(p(2.0, 2.0));
        assert_eq!(s, p(2.0, 2.0));
        assert!(perm.is_identity());
    }

    #[test]
    fn unsort_examples() {
        let (_, perm) = sorted_abs(p(-1.0, 3.0));
        assert_eq!(unsort(p(3.0, 1.0), &perm), p(-1.0, 3.0));
        assert_eq!(unsort(p(3.0, 1.0), &SignedPermutation::identity()), p(3.0, 1.0));
        let (s, perm) = sorted_abs(p(0.0, -5.0));
        assert_eq!(s, p(5.0, 0.0));
        assert_eq!(unsort(p(5.0, 0.0), &perm), p(0.0, -5.0));
    }

    #[test]
    fn negative_zero_round_trips_bitwise() {
        let x = p(-0.0, 1.0);
        let (s, perm) = sorted_abs(x);
        let back = unsort(s, &perm);
        assert_eq!(back.x1.to_bits(), x.x1.to_bits());
    }

    #[test]
    fn all_signed_permutations_are_distinct_and_invertible() {
        let all = SignedPermutation::all();
        let x = p(1.5, -0.25);
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.apply_inverse(a.apply(x)), x);
            for b in &all[i + 1..] {
                assert_ne!(a.apply(x), b.apply(x));
            }
        }
    }

    #[test]
    fn prox_set_membership() {
        let seg = ProxSet::segment(p(2.0, 0.0), p(0.0, 2.0));
        assert!(seg.contains(p(1.0, 1.0), 1e-12));
        assert!(seg.contains(p(2.0, 0.0), 0.0));
        assert!(!seg.contains(p(1.0, 1.1), 1e-3));
        assert!((seg.distance(p(3.0, 0.0)) - 1.0).abs() < 1e-15);

        let pair = ProxSet::pair(p(2.0, 0.0), p(0.0, 2.0));
        assert!(pair.contains(p(0.0, 2.0), 0.0));
        assert!(!pair.contains(p(1.0, 1.0), 1e-3));
        assert!(pair.is_subset_of(&seg, 1e-12));
        assert!(!seg.is_subset_of(&ProxSet::Single(p(2.0, 0.0)), 1e-3));

        assert!(ProxSet::pair(p(1.0, 1.0), p(1.0, 1.0)).is_single());
    }

    #[test]
    fn scalar_prox_set_membership() {
        let iv = ScalarProxSet::interval(0.0, -2.0_f64.sqrt());
        assert_eq!(iv.bounds(), (-2.0_f64.sqrt(), 0.0));
        assert!(iv.contains(-1.0, 0.0));
        assert!(!iv.contains(0.1, 1e-3));
        let pair = ScalarProxSet::pair(0.0, 1.0);
        assert!(pair.contains(1.0, 0.0));
        assert!(!pair.contains(0.5, 1e-3));
        assert_eq!(ScalarProxSet::pair(1.0, 1.0), ScalarProxSet::Single(1.0));
    }
}
