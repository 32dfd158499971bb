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

//! Brute-force set-valued proximity operator on a grid.
//!
//! Every node of the search box is scored with `f(y) + ‖x − y‖²/(2γ)`. Nodes
//! within `cluster_tol` of the grid minimum are grouped into clusters of
//! adjacent nodes (8-neighbourhood in 2-D). A cluster wider than three steps
//! whose nodes hug a line is reported as a segment (an interval in 1-D);
//! anything else is a point represented by its best node.

use std::collections::HashMap;

use rayon::prelude::*;

use super::grid::Axis;
use crate::error::{ProxError, Result};
use crate::geometry::{Point2, ProxSet, ScalarProxSet};
use crate::scalar::Scalar;

/// `1e-9 + dims·step²/(4γ)`: twice the worst objective excess of the best
/// node next to an off-grid minimizer.
pub fn cluster_tol<T: Scalar>(dims: usize, step: T, gamma: T) -> T {
    T::lit(1e-9) + T::from_index(dims) * step * step / (T::lit(4.0) * gamma)
}

/// Per-coordinate default search interval: `[x − reach − 1, x + 1]` for
/// `x >= 0`, mirrored for negative `x`.
pub fn default_interval<T: Scalar>(x: T, reach: T) -> (T, T) {
    if x >= T::zero() {
        (x - reach - T::one(), x + T::one())
    } else {
        (x - T::one(), x + reach + T::one())
    }
}

pub fn default_axis<T: Scalar>(x: T, reach: T, step: T) -> Result<Axis<T>> {
    let (lo, hi) = default_interval(x, reach);
    Axis::aligned(lo, hi, step)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cluster1D<T> {
    Point(T),
    Interval(T, T),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cluster2D<T> {
    Point(Point2<T>),
    Segment(Point2<T>, Point2<T>),
}

/// Result of a brute-force prox evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleProx<C, P, T> {
    pub clusters: Vec<C>,
    /// Best node of each cluster, in cluster order.
    pub best: Vec<P>,
    /// Global best node.
    pub argmin: P,
    pub min_value: T,
    pub tol: T,
    pub step: T,
    /// Number of nodes within tolerance.
    pub candidates: usize,
}

pub type OracleProx1D<T> = OracleProx<Cluster1D<T>, T, T>;
pub type OracleProx2D<T> = OracleProx<Cluster2D<T>, Point2<T>, T>;

impl<T: Scalar> OracleProx1D<T> {
    pub fn to_prox_set(&self) -> Option<ScalarProxSet<T>> {
        match self.clusters.as_slice() {
            [Cluster1D::Point(a)] => Some(ScalarProxSet::Single(*a)),
            [Cluster1D::Interval(a, b)] => Some(ScalarProxSet::interval(*a, *b)),
            [Cluster1D::Point(a), Cluster1D::Point(b)] => Some(ScalarProxSet::pair(*a, *b)),
            _ => None,
        }
    }

    /// Distance from `p` to the union of clusters.
    pub fn distance(&self, p: T) -> T {
        self.clusters
            .iter()
            .map(|c| match *c {
                Cluster1D::Point(a) => ScalarProxSet::Single(a).distance(p),
                Cluster1D::Interval(a, b) => ScalarProxSet::interval(a, b).distance(p),
            })
            .fold(T::infinity(), T::min)
    }

    fn probe_points(&self) -> Vec<T> {
        let mut out = self.best.clone();
        for c in &self.clusters {
            if let Cluster1D::Interval(a, b) = *c {
                out.extend([a, b]);
            }
        }
        out
    }
}

impl<T: Scalar> OracleProx2D<T> {
    pub fn to_prox_set(&self) -> Option<ProxSet<T>> {
        match self.clusters.as_slice() {
            [Cluster2D::Point(a)] => Some(ProxSet::Single(*a)),
            [Cluster2D::Segment(a, b)] => Some(ProxSet::segment(*a, *b)),
            [Cluster2D::Point(a), Cluster2D::Point(b)] => Some(ProxSet::pair(*a, *b)),
            _ => None,
        }
    }

    pub fn distance(&self, p: Point2<T>) -> T {
        self.clusters
            .iter()
            .map(|c| match *c {
                Cluster2D::Point(a) => p.dist(a),
                Cluster2D::Segment(a, b) => ProxSet::Segment(a, b).distance(p),
            })
            .fold(T::infinity(), T::min)
    }

    fn probe_points(&self) -> Vec<Point2<T>> {
        let mut out = self.best.clone();
        for c in &self.clusters {
            if let Cluster2D::Segment(a, b) = *c {
                out.extend([a, b, a.lerp(b, T::half())]);
            }
        }
        out
    }
}

/// Brute-force prox of a scalar penalty over the nodes of `axis`.
pub fn brute_force_prox_1d<T, F>(f: F, x: T, gamma: T, axis: &Axis<T>) -> Result<OracleProx1D<T>>
where
    T: Scalar,
    F: Fn(T) -> T + Sync,
{
    check_gamma(gamma)?;
    let inv = T::one() / (T::two() * gamma);
    let scores: Vec<T> = (0..axis.len())
        .into_par_iter()
        .map(|i| {
            let y = axis.point(i);
            f(y) + inv * (x - y) * (x - y)
        })
        .collect();
    let (imin, min_value) = argmin(&scores)?;
    let tol = cluster_tol(1, axis.step(), gamma);
    let cand: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] <= min_value + tol).collect();
    if cand.iter().any(|&i| i == 0 || i + 1 == axis.len()) {
        return Err(ProxError::BoxTooSmall(format!(
            "[{}, {}] for x = {}",
            axis.lo(),
            axis.hi(),
            x
        )));
    }
    let mut clusters = Vec::new();
    let mut best = Vec::new();
    let mut start = 0;
    while start < cand.len() {
        let mut end = start;
        while end + 1 < cand.len() && cand[end + 1] == cand[end] + 1 {
            end += 1;
        }
        let run = &cand[start..=end];
        let b = *run
            .iter()
            .min_by(|&&i, &&j| scores[i].partial_cmp(&scores[j]).unwrap().then(i.cmp(&j)))
            .unwrap();
        best.push(axis.point(b));
        if run.len() > 4 {
            clusters.push(Cluster1D::Interval(axis.point(run[0]), axis.point(*run.last().unwrap())));
        } else {
            clusters.push(Cluster1D::Point(axis.point(b)));
        }
        start = end + 1;
    }
    Ok(OracleProx {
        clusters,
        best,
        argmin: axis.point(imin),
        min_value,
        tol,
        step: axis.step(),
        candidates: cand.len(),
    })
}

/// Brute-force prox of a planar penalty over the product grid `a0 × a1`.
pub fn brute_force_prox_2d<T, F>(
    f: F,
    x: Point2<T>,
    gamma: T,
    a0: &Axis<T>,
    a1: &Axis<T>,
) -> Result<OracleProx2D<T>>
where
    T: Scalar,
    F: Fn(Point2<T>) -> T + Sync,
{
    check_gamma(gamma)?;
    let inv = T::one() / (T::two() * gamma);
    let n1 = a1.len();
    let scores: Vec<T> = (0..a0.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let f = &f;
            (0..n1).map(move |j| {
                let y = Point2::raw(a0.point(i), a1.point(j));
                f(y) + inv * (x - y).norm_sq()
            })
        })
        .collect();
    let (imin, min_value) = argmin(&scores)?;
    let step = a0.step().max(a1.step());
    let tol = cluster_tol(2, step, gamma);
    let cand: Vec<(usize, usize)> = (0..scores.len())
        .filter(|&k| scores[k] <= min_value + tol)
        .map(|k| (k / n1, k % n1))
        .collect();
    if cand
        .iter()
        .any(|&(i, j)| i == 0 || j == 0 || i + 1 == a0.len() || j + 1 == n1)
    {
        return Err(ProxError::BoxTooSmall(format!(
            "[{}, {}] x [{}, {}] for x = ({}, {})",
            a0.lo(),
            a0.hi(),
            a1.lo(),
            a1.hi(),
            x.x1,
            x.x2
        )));
    }
    let node = |(i, j): (usize, usize)| Point2::raw(a0.point(i), a1.point(j));
    let groups = connected_components(&cand);
    let mut clusters = Vec::with_capacity(groups.len());
    let mut best = Vec::with_capacity(groups.len());
    for g in groups {
        let b = *g
            .iter()
            .min_by(|&&p, &&q| {
                let (sp, sq) = (scores[p.0 * n1 + p.1], scores[q.0 * n1 + q.1]);
                sp.partial_cmp(&sq).unwrap().then(p.cmp(&q))
            })
            .unwrap();
        best.push(node(b));
        let pts: Vec<Point2<T>> = g.iter().map(|&c| node(c)).collect();
        clusters.push(shape_of(&pts, node(b), step));
    }
    Ok(OracleProx {
        clusters,
        best,
        argmin: node((imin / n1, imin % n1)),
        min_value,
        tol,
        step,
        candidates: cand.len(),
    })
}

fn check_gamma<T: Scalar>(gamma: T) -> Result<()> {
    if gamma.is_finite() && gamma > T::zero() {
        Ok(())
    } else {
        Err(crate::error::invalid("gamma", format!("must be positive, got {gamma}")))
    }
}

/// First index of the smallest score.
fn argmin<T: Scalar>(scores: &[T]) -> Result<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if s.is_nan() {
            continue;
        }
        if best.map_or(true, |(_, b)| s < b) {
            best = Some((i, s));
        }
    }
    best.filter(|(_, v)| v.is_finite()).ok_or(ProxError::EmptyDomain)
}

/// Groups grid indices into 8-connected components, each sorted, ordered by
/// their smallest index.
fn connected_components(cells: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let index: HashMap<(usize, usize), usize> = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut seen = vec![false; cells.len()];
    let mut out = Vec::new();
    for start in 0..cells.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut group = Vec::new();
        while let Some(k) = stack.pop() {
            let (i, j) = cells[k];
            group.push((i, j));
            for di in [-1i64, 0, 1] {
                for dj in [-1i64, 0, 1] {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 {
                        continue;
                    }
                    if let Some(&n) = index.get(&(ni as usize, nj as usize)) {
                        if !seen[n] {
                            seen[n] = true;
                            stack.push(n);
                        }
                    }
                }
            }
        }
        group.sort_unstable();
        out.push(group);
    }
    out
}

/// Segment if the cluster extends beyond three steps and every node lies
/// within 1.5 steps of its principal line; otherwise the best node.
fn shape_of<T: Scalar>(pts: &[Point2<T>], best: Point2<T>, step: T) -> Cluster2D<T> {
    let n = T::from_index(pts.len());
    let mean = pts.iter().fold(Point2::zero(), |acc, &p| acc + p) * (T::one() / n);
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for p in pts {
        let d = *p - mean;
        sxx = sxx + d.x1 * d.x1;
        sxy = sxy + d.x1 * d.x2;
        syy = syy + d.x2 * d.x2;
    }
    let theta = T::half() * (T::two() * sxy).atan2(sxx - syy);
    let dir = Point2::raw(theta.cos(), theta.sin());
    let normal = Point2::raw(-dir.x2, dir.x1);
    let mut lo = (T::infinity(), best);
    let mut hi = (T::neg_infinity(), best);
    let mut off = T::zero();
    for &p in pts {
        let t = (p - mean).dot(dir);
        off = off.max((p - mean).dot(normal).abs());
        if t < lo.0 {
            lo = (t, p);
        }
        if t > hi.0 {
            hi = (t, p);
        }
    }
    let span = hi.0 - lo.0;
    if span > T::lit(3.0) * step && off <= T::lit(1.5) * step {
        // endpoints projected onto the principal line
        Cluster2D::Segment(mean + dir * lo.0, mean + dir * hi.0)
    } else {
        Cluster2D::Point(best)
    }
}

/// Outcome of comparing the oracle prox of a penalty with that of its
/// envelope.
#[derive(Clone, Debug)]
pub struct InclusionReport<O> {
    pub original: O,
    pub envelope: O,
    pub included: bool,
    /// Largest distance from a probe point of `original` to `envelope`.
    pub worst_gap: f64,
}

/// Checks `Prox_f(x) ⊂ Prox_f̃(x)` with both sides computed by the oracle
/// at `γ = 1`; every cluster of the first must lie within two steps of the
/// second.
pub fn verify_inclusion_1d<T, F, G>(
    f: F,
    f_env: G,
    x: T,
    axis: &Axis<T>,
) -> Result<InclusionReport<OracleProx1D<T>>>
where
    T: Scalar,
    F: Fn(T) -> T + Sync,
    G: Fn(T) -> T + Sync,
{
    let original = brute_force_prox_1d(f, x, T::one(), axis)?;
    let envelope = brute_force_prox_1d(f_env, x, T::one(), axis)?;
    let gap = original
        .probe_points()
        .into_iter()
        .map(|p| envelope.distance(p))
        .fold(T::zero(), T::max);
    Ok(InclusionReport {
        included: gap <= T::two() * axis.step(),
        worst_gap: gap.to_f64_lossy(),
        original,
        envelope,
    })
}

pub fn verify_inclusion_2d<T, F, G>(
    f: F,
    f_env: G,
    x: Point2<T>,
    a0: &Axis<T>,
    a1: &Axis<T>,
) -> Result<InclusionReport<OracleProx2D<T>>>
where
    T: Scalar,
    F: Fn(Point2<T>) -> T + Sync,
    G: Fn(Point2<T>) -> T + Sync,
{
    let original = brute_force_prox_2d(f, x, T::one(), a0, a1)?;
    let envelope = brute_force_prox_2d(f_env, x, T::one(), a0, a1)?;
    let step = a0.step().max(a1.step());
    let gap = original
        .probe_points()
        .into_iter()
        .map(|p| envelope.distance(p))
        .fold(T::zero(), T::max);
    Ok(InclusionReport {
        included: gap <= T::two() * step,
        worst_gap: gap.to_f64_lossy(),
        original,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_ops::{l0_envelope, l0_norm};

    const R2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn l0_oracle_cases() {
        let ax = default_axis(2.0f64, 2.0, 0.01).unwrap();
        let o = brute_force_prox_1d(l0_norm, 2.0, 1.0, &ax).unwrap();
        assert_eq!(o.clusters.len(), 1);
        assert!((o.argmin - 2.0).abs() < 1e-12);

        let ax = default_axis(R2, R2, 0.01).unwrap();
        let o = brute_force_prox_1d(l0_norm, R2, 1.0, &ax).unwrap();
        assert_eq!(o.clusters.len(), 2, "{:?}", o.clusters);
        assert!(o.best[0].abs() < 1e-12);
        assert!((o.best[1] - R2).abs() <= 0.01);
    }

    #[test]
    fn envelope_oracle_at_threshold_is_an_interval() {
        let ax = default_axis(R2, R2, 0.01).unwrap();
        let o = brute_force_prox_1d(l0_envelope, R2, 1.0, &ax).unwrap();
        match o.to_prox_set().unwrap() {
            ScalarProxSet::Interval(lo, hi) => {
                assert!(lo.abs() <= 0.01 && (hi - R2).abs() <= 0.01);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn box_too_small_is_reported() {
        let ax = Axis::aligned(-0.5, 0.5, 0.01).unwrap();
        assert!(matches!(
            brute_force_prox_1d(l0_norm, 3.0, 1.0, &ax),
            Err(ProxError::BoxTooSmall(_))
        ));
    }

    #[test]
    fn quadratic_oracle_2d() {
        let x = Point2::new(0.7, -1.3).unwrap();
        let a0 = default_axis(x.x1, 1.0, 0.01).unwrap();
        let a1 = default_axis(x.x2, 1.0, 0.01).unwrap();
        // f = ½‖y‖² gives prox x/2
        let o = brute_force_prox_2d(|y: Point2<f64>| 0.5 * y.norm_sq(), x, 1.0, &a0, &a1).unwrap();
        assert_eq!(o.clusters.len(), 1);
        assert!(o.argmin.dist(x * 0.5) <= 0.01);
    }

    #[test]
    fn inclusion_for_quadratic_is_equality() {
        let q = |y: f64| 0.5 * y * y;
        let ax = default_axis(1.3, 1.0, 0.01).unwrap();
        let r = verify_inclusion_1d(q, q, 1.3, &ax).unwrap();
        assert!(r.included);
        assert_eq!(r.original.clusters, r.envelope.clusters);
    }

    #[test]
    fn l0_inclusion_at_threshold() {
        let ax = default_axis(R2, R2, 0.01).unwrap();
        let r = verify_inclusion_1d(l0_norm, l0_envelope, R2, &ax).unwrap();
        assert!(r.included, "{r:?}");
    }
}
