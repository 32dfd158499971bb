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

//! Discrete Fenchel conjugation and the weakly convex envelope.
//!
//! Conjugates are brute-force maxima over the sample nodes. In two
//! dimensions the transform is factorized into two passes of 1-D
//! conjugation, `f*(u0, u1) = max_x0 (x0 u0 + max_x1 (x1 u1 − f(x0, x1)))`.

use rayon::prelude::*;

use super::grid::{is_infinite_sample, Axis, GridSpec, SampledFunction};
use crate::error::{ProxError, Result};
use crate::scalar::Scalar;

/// `max_i (x_i u − v_i)` over the nodes where `v_i` is finite; `−∞` when
/// there is none. Ties resolve to the first index but only the value is kept.
fn conj_1d<T: Scalar>(xs: &[T], vals: &[T], u: T) -> T {
    let mut best = T::neg_infinity();
    for (&x, &v) in xs.iter().zip(vals) {
        if v == T::neg_infinity() || is_infinite_sample(v) {
            continue;
        }
        let c = x * u - v;
        if c > best {
            best = c;
        }
    }
    best
}

/// Legendre–Fenchel conjugate of a sampled function evaluated on `dual`.
pub fn legendre_conjugate_grid<T: Scalar>(
    f: &SampledFunction<T>,
    dual: &GridSpec<T>,
) -> Result<SampledFunction<T>> {
    if f.grid().dims() != dual.dims() {
        return Err(ProxError::DimensionMismatch {
            expected: f.grid().dims(),
            got: dual.dims(),
        });
    }
    if f.values().iter().all(|&v| is_infinite_sample(v)) {
        return Err(ProxError::EmptyDomain);
    }
    let values = match (f.grid(), dual) {
        (GridSpec::OneD(a), GridSpec::OneD(ua)) => {
            let xs = a.points();
            ua.points()
                .par_iter()
                .map(|&u| conj_1d(&xs, f.values(), u))
                .collect::<Vec<T>>()
        }
        (GridSpec::TwoD(a0, a1), GridSpec::TwoD(u0, u1)) => conj_2d(f, a0, a1, u0, u1),
        _ => unreachable!("dimensions checked above"),
    };
    SampledFunction::new(dual.clone(), values)
}

fn conj_2d<T: Scalar>(
    f: &SampledFunction<T>,
    a0: &Axis<T>,
    a1: &Axis<T>,
    u0: &Axis<T>,
    u1: &Axis<T>,
) -> Vec<T> {
    let x0 = a0.points();
    let x1 = a1.points();
    let du0 = u0.points();
    let du1 = u1.points();
    let n1 = a1.len();
    // partial[i0][j1] = max_x1 (x1 u1_j1 − f(x0_i0, x1))
    let partial: Vec<Vec<T>> = (0..a0.len())
        .into_par_iter()
        .map(|i0| {
            let row = &f.values()[i0 * n1..(i0 + 1) * n1];
            du1.iter().map(|&u| conj_1d(&x1, row, u)).collect()
        })
        .collect();
    let rows: Vec<Vec<T>> = du0
        .par_iter()
        .map(|&u| {
            (0..du1.len())
                .map(|j1| {
                    let mut best = T::neg_infinity();
                    for (i0, &x) in x0.iter().enumerate() {
                        let g = partial[i0][j1];
                        if g == T::neg_infinity() {
                            continue;
                        }
                        let c = x * u + g;
                        if c > best {
                            best = c;
                        }
                    }
                    best
                })
                .collect()
        })
        .collect();
    rows.into_iter().flatten().collect()
}

fn half_norm_sq<T: Scalar>(c: &[T]) -> T {
    c.iter().fold(T::zero(), |acc, &v| acc + v * v) * T::half()
}

/// `(f + ½‖·‖²)** − ½‖·‖²` on the grid of `f`, with the dual grid equal to
/// the primal one.
pub fn weakly_convex_envelope_grid<T: Scalar>(f: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    let dual = f.grid().clone();
    weakly_convex_envelope_grid_with_dual(f, &dual)
}

pub fn weakly_convex_envelope_grid_with_dual<T: Scalar>(
    f: &SampledFunction<T>,
    dual: &GridSpec<T>,
) -> Result<SampledFunction<T>> {
    let lifted = f.add_fn(half_norm_sq);
    let conj = legendre_conjugate_grid(&lifted, dual)?;
    let biconj = legendre_conjugate_grid(&conj, f.grid())?;
    Ok(biconj.add_fn(|c| -half_norm_sq(c)))
}

/// Convex biconjugate `f**` on the grid of `f`.
pub fn biconjugate_grid<T: Scalar>(f: &SampledFunction<T>, dual: &GridSpec<T>) -> Result<SampledFunction<T>> {
    let conj = legendre_conjugate_grid(f, dual)?;
    legendre_conjugate_grid(&conj, f.grid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_ops::{l0_envelope, l0_norm};

    fn axis(lo: f64, hi: f64, step: f64) -> Axis<f64> {
        Axis::new(lo, hi, step).unwrap()
    }

    #[test]
    fn half_square_is_self_conjugate() {
        let a = axis(-4.0, 4.0, 0.01);
        let f = SampledFunction::from_fn_1d(a, |x| 0.5 * x * x).unwrap();
        let dual = GridSpec::OneD(axis(-2.0, 2.0, 0.01));
        let c = legendre_conjugate_grid(&f, &dual).unwrap();
        for (u, v) in axis(-2.0, 2.0, 0.01).points().iter().zip(c.values()) {
            assert!((v - 0.5 * u * u).abs() <= 1e-4, "u={u}");
        }
    }

    #[test]
    fn abs_conjugate_is_indicator() {
        let a = axis(-4.0, 4.0, 0.01);
        let f = SampledFunction::from_fn_1d(a, |x: f64| x.abs()).unwrap();
        let dual = GridSpec::OneD(axis(-2.0, 2.0, 0.05));
        let c = legendre_conjugate_grid(&f, &dual).unwrap();
        for (u, v) in dual.axes()[0].points().iter().zip(c.values()) {
            if u.abs() <= 1.0 {
                assert!(v.abs() <= 1e-12, "u={u} v={v}");
            } else {
                assert!((v - 4.0 * (u.abs() - 1.0)).abs() <= 1e-9, "u={u} v={v}");
            }
        }
    }

    #[test]
    fn lifted_l0_biconjugate_at_sqrt2() {
        let a = axis(-4.0, 4.0, 0.01);
        let f = SampledFunction::from_fn_1d(a, |x| l0_norm(x) + 0.5 * x * x).unwrap();
        let bi = biconjugate_grid(&f, f.grid()).unwrap();
        let v = bi.interpolate(&[std::f64::consts::SQRT_2]).unwrap();
        assert!((v - 2.0).abs() <= 1e-3, "{v}");
    }

    #[test]
    fn l0_envelope_matches_closed_form() {
        let a = axis(-4.0, 4.0, 0.01);
        let f = SampledFunction::from_fn_1d(a, l0_norm).unwrap();
        let env = weakly_convex_envelope_grid(&f).unwrap();
        for (x, v) in a.points().iter().zip(env.values()) {
            if x.abs() <= 3.0 {
                assert!((v - l0_envelope(*x)).abs() <= 5e-3, "x={x}");
            }
        }
    }

    #[test]
    fn empty_domain_is_rejected() {
        let a = axis(0.0, 1.0, 0.5);
        let f = SampledFunction::new(GridSpec::OneD(a), vec![f64::INFINITY; 3]).unwrap();
        assert!(matches!(
            legendre_conjugate_grid(&f, &GridSpec::OneD(a)),
            Err(ProxError::EmptyDomain)
        ));
        let g = GridSpec::TwoD(a, a);
        assert!(legendre_conjugate_grid(&SampledFunction::from_fn_1d(a, |x| x).unwrap(), &g).is_err());
    }

    #[test]
    fn infinite_samples_are_skipped() {
        // indicator of [−1, 1] sampled on [−2, 2]: conjugate is |u|
        let a = axis(-2.0, 2.0, 0.5);
        let f = SampledFunction::from_fn_1d(a, |x: f64| if x.abs() <= 1.0 { 0.0 } else { f64::INFINITY }).unwrap();
        let c = legendre_conjugate_grid(&f, &GridSpec::OneD(axis(-3.0, 3.0, 1.0))).unwrap();
        assert_eq!(c.values(), &[3.0, 2.0, 1.0, 0.0, 1.0, 2.0, 3.0]);
    }
}
