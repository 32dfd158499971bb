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

use std::io::Write;

use crate::error::{invalid, ProxError, Result};
use crate::geometry::Point2;
use crate::scalar::Scalar;

/// One axis of a uniform grid.
///
/// Axes built with [`Axis::aligned`] place their nodes on exact integer
/// multiples of the step, so `0` is a node whenever the range covers it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis<T> {
    lo: T,
    step: T,
    len: usize,
    first_multiple: Option<i64>,
}

impl<T: Scalar> Axis<T> {
    pub fn new(lo: T, hi: T, step: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(ProxError::NonFinite("Axis"));
        }
        if !(step > T::zero()) {
            return Err(invalid("step", format!("must be positive, got {step}")));
        }
        if !(lo < hi) {
            return Err(invalid("lo", format!("need lo < hi, got [{lo}, {hi}]")));
        }
        let cells = (hi - lo) / step;
        let rounded = cells.round();
        if (cells - rounded).abs() > T::lit(1e-9) * rounded.max(T::one()) || rounded < T::one() {
            return Err(invalid(
                "step",
                format!("(hi - lo)/step = {cells} is not a positive integer"),
            ));
        }
        let n = rounded.to_usize().ok_or_else(|| invalid("step", "grid too large"))?;
        Ok(Self {
            lo,
            step,
            len: n + 1,
            first_multiple: None,
        })
    }

    /// Smallest axis of step `step` whose nodes are multiples of `step` and
    /// which covers `[lo, hi]`.
    pub fn aligned(lo: T, hi: T, step: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > T::zero() && lo < hi) {
            return Err(invalid("axis", format!("bad range [{lo}, {hi}] / {step}")));
        }
        let k_lo = (lo / step).floor().to_i64().ok_or_else(|| invalid("lo", "out of range"))?;
        let k_hi = (hi / step).ceil().to_i64().ok_or_else(|| invalid("hi", "out of range"))?;
        let k_hi = k_hi.max(k_lo + 1);
        Ok(Self {
            lo: T::from_i64(k_lo).unwrap() * step,
            step,
            len: (k_hi - k_lo + 1) as usize,
            first_multiple: Some(k_lo),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.point(self.len - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> T {
        match self.first_multiple {
            Some(k) => T::from_i64(k + i as i64).unwrap() * self.step,
            None => self.lo + T::from_index(i) * self.step,
        }
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    /// Index of the node nearest to `x`, clamped to the axis.
    pub fn nearest(&self, x: T) -> usize {
        let r = ((x - self.lo) / self.step).round();
        if r <= T::zero() {
            0
        } else {
            r.to_usize().unwrap_or(usize::MAX).min(self.len - 1)
        }
    }

    /// The middle two thirds of the axis, where conjugates are trusted.
    pub fn trusted_range(&self) -> (T, T) {
        let third = (self.hi() - self.lo) / T::lit(3.0);
        let center = (self.hi() + self.lo) * T::half();
        (center - third * T::half(), center + third * T::half())
    }
}

/// A one- or two-dimensional uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec<T> {
    OneD(Axis<T>),
    TwoD(Axis<T>, Axis<T>),
}

impl<T: Scalar> GridSpec<T> {
    pub fn dims(&self) -> usize {
        match self {
            Self::OneD(_) => 1,
            Self::TwoD(..) => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::OneD(a) => a.len(),
            Self::TwoD(a, b) => a.len() * b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axes(&self) -> Vec<Axis<T>> {
        match self {
            Self::OneD(a) => vec![*a],
            Self::TwoD(a, b) => vec![*a, *b],
        }
    }

    pub fn max_step(&self) -> T {
        self.axes().iter().map(|a| a.step()).fold(T::zero(), T::max)
    }
}

/// Marker for `+∞` samples: the largest finite value.
pub fn infinity_marker<T: Scalar>() -> T {
    T::max_value()
}

#[inline]
pub fn is_infinite_sample<T: Scalar>(v: T) -> bool {
    v >= T::max_value()
}

/// Function values on a grid, row-major (`axis0` outer) in 2-D.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction<T> {
    grid: GridSpec<T>,
    values: Vec<T>,
}

impl<T: Scalar> SampledFunction<T> {
    /// `+∞` and NaN-free infinite values are stored as the infinity marker.
    pub fn new(grid: GridSpec<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(ProxError::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| v.is_nan() || *v == T::neg_infinity()) {
            return Err(ProxError::NonFinite("SampledFunction values"));
        }
        let values = values
            .into_iter()
            .map(|v| if v.is_infinite() { infinity_marker() } else { v })
            .collect();
        Ok(Self { grid, values })
    }

    pub fn from_fn_1d(axis: Axis<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = axis.points().into_iter().map(f).collect();
        Self::new(GridSpec::OneD(axis), values)
    }

    pub fn from_fn_2d(a0: Axis<T>, a1: Axis<T>, f: impl Fn(Point2<T>) -> T) -> Result<Self> {
        let mut values = Vec::with_capacity(a0.len() * a1.len());
        for i in 0..a0.len() {
            for j in 0..a1.len() {
                values.push(f(Point2::raw(a0.point(i), a1.point(j))));
            }
        }
        Self::new(GridSpec::TwoD(a0, a1), values)
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value_1d(&self, i: usize) -> T {
        self.values[i]
    }

    pub fn value_2d(&self, i: usize, j: usize) -> T {
        match &self.grid {
            GridSpec::TwoD(_, b) => self.values[i * b.len() + j],
            GridSpec::OneD(_) => panic!("value_2d on a 1-D sample"),
        }
    }

    /// Elementwise `self + g(point)`, leaving `+∞` samples unchanged.
    pub fn add_fn(&self, g: impl Fn(&[T]) -> T) -> Self {
        let values = self
            .coordinates()
            .iter()
            .zip(&self.values)
            .map(|(c, &v)| if is_infinite_sample(v) { v } else { v + g(c) })
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Coordinates of every sample in storage order.
    pub fn coordinates(&self) -> Vec<Vec<T>> {
        match &self.grid {
            GridSpec::OneD(a) => a.points().into_iter().map(|x| vec![x]).collect(),
            GridSpec::TwoD(a, b) => {
                let mut out = Vec::with_capacity(self.values.len());
                for i in 0..a.len() {
                    for j in 0..b.len() {
                        out.push(vec![a.point(i), b.point(j)]);
                    }
                }
                out
            }
        }
    }

    /// Linear (1-D) or bilinear (2-D) interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: &[T]) -> Option<T> {
        fn locate<T: Scalar>(a: &Axis<T>, x: T) -> Option<(usize, T)> {
            if x < a.lo() || x > a.hi() {
                return None;
            }
            let r = (x - a.lo()) / a.step();
            let i = r.floor().to_usize()?.min(a.len() - 2);
            Some((i, r - T::from_index(i)))
        }
        match &self.grid {
            GridSpec::OneD(a) => {
                let (i, t) = locate(a, *x.first()?)?;
                let (v0, v1) = (self.values[i], self.values[i + 1]);
                Some(v0 + (v1 - v0) * t)
            }
            GridSpec::TwoD(a, b) => {
                let (i, s) = locate(a, *x.first()?)?;
                let (j, t) = locate(b, *x.get(1)?)?;
                let v = |ii, jj| self.value_2d(ii, jj);
                let one = T::one();
                Some(
                    v(i, j) * (one - s) * (one - t)
                        + v(i + 1, j) * s * (one - t)
                        + v(i, j + 1) * (one - s) * t
                        + v(i + 1, j + 1) * s * t,
                )
            }
        }
    }

    /// Writes `axis0,value` (1-D) or `axis0,axis1,value` (2-D) rows with
    /// 17 significant digits, `+∞` samples as `inf`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        match &self.grid {
            GridSpec::OneD(_) => writeln!(out, "axis0,value")?,
            GridSpec::TwoD(..) => writeln!(out, "axis0,axis1,value")?,
        }
        for (c, &v) in self.coordinates().iter().zip(&self.values) {
            let coords: Vec<String> = c.iter().map(|x| fmt17(x.to_f64_lossy())).collect();
            let val = if is_infinite_sample(v) {
                "inf".to_string()
            } else {
                fmt17(v.to_f64_lossy())
            };
            writeln!(out, "{},{}", coords.join(","), val)?;
        }
        Ok(())
    }
}

/// 17-significant-digit decimal in scientific notation.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 1.0, 0.25).is_ok());
        assert!(Axis::new(0.0, 1.0, 0.3).is_err());
        assert!(Axis::new(1.0, 0.0, 0.1).is_err());
        assert!(Axis::new(0.0, 1.0, 0.0).is_err());
        assert_eq!(Axis::new(-4.0, 4.0, 0.01).unwrap().len(), 801);
    }

    #[test]
    fn aligned_axis_contains_zero_exactly() {
        let a = Axis::aligned(-1.2345, 3.3, 0.01).unwrap();
        assert!(a.lo() <= -1.2345 && a.hi() >= 3.3);
        assert!((0..a.len()).any(|i| a.point(i) == 0.0));
        let i = a.nearest(0.0);
        assert_eq!(a.point(i), 0.0);
    }

    #[test]
    fn interpolation_is_exact_for_bilinear() {
        let a = Axis::new(-1.0f64, 1.0, 0.5).unwrap();
        let f = SampledFunction::from_fn_2d(a, a, |p| 2.0 * p.x1 - p.x2 + 0.5).unwrap();
        let v = f.interpolate(&[0.3, -0.7]).unwrap();
        assert!((v - (0.6 + 0.7 + 0.5)).abs() < 1e-14);
        assert!(f.interpolate(&[1.5, 0.0]).is_none());
    }

    #[test]
    fn csv_layout() {
        let a = Axis::new(0.0, 1.0, 0.5).unwrap();
        let f = SampledFunction::from_fn_2d(a, a, |p| p.x1 + 10.0 * p.x2).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "axis0,axis1,value");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[2], "0.0000000000000000e0,5.0000000000000000e-1,5.0000000000000000e0");
    }
}
