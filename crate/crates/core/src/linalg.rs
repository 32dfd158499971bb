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

//! Small dense 2x2 matrices.

use std::ops::Mul;

use crate::geometry::Point2;
use crate::scalar::Scalar;

/// Row-major 2x2 matrix `[[a11, a12], [a21, a22]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T: Scalar> Mat2<T> {
    pub const fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Self {
            m: [[a11, a12], [a21, a22]],
        }
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one())
    }

    pub fn diag(d1: T, d2: T) -> Self {
        Self::new(d1, T::zero(), T::zero(), d2)
    }

    pub fn scale(&self, s: T) -> Self {
        let m = self.m;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn transpose(&self) -> Self {
        let m = self.m;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn apply(&self, v: Point2<T>) -> Point2<T> {
        let m = self.m;
        Point2::raw(m[0][0] * v.x1 + m[0][1] * v.x2, m[1][0] * v.x1 + m[1][1] * v.x2)
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: Point2<T>) -> T {
        v.dot(self.apply(v))
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        d
    }

    pub fn is_symmetric(&self) -> bool {
        self.m[0][1] == self.m[1][0]
    }

    /// Eigenvalues `(λ_min, λ_max)` of a symmetric matrix.
    ///
    /// The larger root comes from the trace/determinant formula; the smaller
    /// one is recovered as `det / λ_max` when that is better conditioned.
    pub fn symmetric_eigenvalues(&self) -> (T, T) {
        let half_tr = self.trace() * T::half();
        let half_diff = (self.m[0][0] - self.m[1][1]) * T::half();
        let radius = half_diff.hypot(self.m[0][1]);
        let hi = half_tr + radius;
        let lo = if half_tr > T::zero() && hi > T::zero() {
            self.det() / hi
        } else {
            half_tr - radius
        };
        (lo.min(hi), hi.max(lo))
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = self.m;
        let b = rhs.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}
