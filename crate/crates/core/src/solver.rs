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

//! Proximal forward-backward splitting for `½‖Ax − y‖²` plus a shrinkage
//! step, with the step-size and relaxation rules driven by the spectrum of
//! `AᵀA`.

use crate::error::{invalid, ProxError, Result};
use crate::geometry::Point2;
use crate::linalg::Mat2;
use crate::scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Iterates with a larger norm are reported as divergence.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// `y = A x + noise` with an `M × 2` matrix stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel<T> {
    rows: Vec<[T; 2]>,
    y: Vec<T>,
    x_true: Option<Point2<T>>,
    noise: Option<Vec<T>>,
    gram: Mat2<T>,
    aty: Point2<T>,
}

impl<T: Scalar> LinearModel<T> {
    pub fn new(rows: Vec<[T; 2]>, y: Vec<T>) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("A", "needs at least one row"));
        }
        if y.len() != rows.len() {
            return Err(ProxError::DimensionMismatch { expected: rows.len(), got: y.len() });
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ProxError::NonFinite("A"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(ProxError::NonFinite("y"));
        }
        let gram = gram_of(&rows);
        let mut aty = Point2::zero();
        for (r, &yi) in rows.iter().zip(&y) {
            aty = aty + Point2::raw(r[0], r[1]) * yi;
        }
        Ok(Self { rows, y, x_true: None, noise: None, gram, aty })
    }

    /// Builds `y = A x_true + noise`, keeping both for reference.
    pub fn synthesize(rows: Vec<[T; 2]>, x_true: Point2<T>, noise: Vec<T>) -> Result<Self> {
        if noise.len() != rows.len() {
            return Err(ProxError::DimensionMismatch { expected: rows.len(), got: noise.len() });
        }
        let y = rows
            .iter()
            .zip(&noise)
            .map(|(r, &e)| r[0] * x_true.x1 + r[1] * x_true.x2 + e)
            .collect();
        let mut m = Self::new(rows, y)?;
        m.x_true = Some(x_true);
        m.noise = Some(noise);
        Ok(m)
    }

    pub fn rows(&self) -> &[[T; 2]] {
        &self.rows
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn x_true(&self) -> Option<Point2<T>> {
        self.x_true
    }

    pub fn noise(&self) -> Option<&[T]> {
        self.noise.as_deref()
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// `AᵀA`.
    pub fn gram(&self) -> Mat2<T> {
        self.gram
    }

    pub fn apply(&self, x: Point2<T>) -> Vec<T> {
        self.rows.iter().map(|r| r[0] * x.x1 + r[1] * x.x2).collect()
    }

    /// `Aᵀ(Ax − y)`, evaluated as `AᵀA x − Aᵀy`.
    pub fn gradient(&self, x: Point2<T>) -> Point2<T> {
        self.gram.apply(x) - self.aty
    }

    /// `½‖Ax − y‖²`.
    pub fn objective(&self, x: Point2<T>) -> T {
        let mut s = T::zero();
        for (r, &yi) in self.rows.iter().zip(&self.y) {
            let e = r[0] * x.x1 + r[1] * x.x2 - yi;
            s = s + e * e;
        }
        T::half() * s
    }

    /// Solution of the normal equations.
    pub fn least_squares(&self) -> Result<Point2<T>> {
        let g = self.gram.m;
        let det = self.gram.det();
        let (rho, _) = self.gram.symmetric_eigenvalues();
        if !(rho > T::zero()) || det == T::zero() {
            return Err(ProxError::Singular { rho: rho.to_f64_lossy() });
        }
        let b = self.aty;
        Ok(Point2::raw(
            (g[1][1] * b.x1 - g[0][1] * b.x2) / det,
            (g[0][0] * b.x2 - g[1][0] * b.x1) / det,
        ))
    }
}

fn gram_of<T: Scalar>(rows: &[[T; 2]]) -> Mat2<T> {
    let (mut a, mut b, mut d) = (T::zero(), T::zero(), T::zero());
    for r in rows {
        a = a + r[0] * r[0];
        b = b + r[0] * r[1];
        d = d + r[1] * r[1];
    }
    Mat2::new(a, b, b, d)
}

/// Extreme eigenvalues of `AᵀA`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBounds<T> {
    pub rho: T,
    pub kappa: T,
}

impl<T: Scalar> SpectralBounds<T> {
    pub fn new(rho: T, kappa: T) -> Result<Self> {
        if !(rho.is_finite() && kappa.is_finite()) {
            return Err(ProxError::NonFinite("spectral bounds"));
        }
        if rho < T::zero() || kappa < rho {
            return Err(invalid("spectral bounds", format!("need 0 <= rho <= kappa, got ({rho}, {kappa})")));
        }
        Ok(Self { rho, kappa })
    }

    pub fn condition(&self) -> T {
        self.kappa / self.rho
    }
}

pub fn spectral_bounds<T: Scalar>(rows: &[[T; 2]]) -> Result<SpectralBounds<T>> {
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ProxError::NonFinite("A"));
    }
    gram_bounds(&gram_of(rows))
}

pub fn gram_bounds<T: Scalar>(gram: &Mat2<T>) -> Result<SpectralBounds<T>> {
    let (lo, hi) = gram.symmetric_eigenvalues();
    SpectralBounds::new(lo.max(T::zero()), hi)
}

impl<T: Scalar> LinearModel<T> {
    pub fn spectral_bounds(&self) -> Result<SpectralBounds<T>> {
        gram_bounds(&self.gram)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverParams<T> {
    pub delta: T,
    pub beta: T,
    pub mu: T,
    pub gamma_delta: T,
    pub gamma_mu: T,
    pub max_iter: usize,
    pub tol: T,
    /// `[(1−β)ρ, (1+β)/κ)`.
    pub mu_interval: (T, T),
}

impl<T: Scalar> SolverParams<T> {
    pub fn mu_admissible(&self) -> bool {
        self.mu >= self.mu_interval.0 && self.mu < self.mu_interval.1
    }

    pub fn with_mu(mut self, mu: T) -> Self {
        self.mu = mu;
        self
    }
}

/// `δ = γ_δ(κ − ρ)/(2ρ)`, `β = δ/(1+δ)`, `μ = γ_μ(1−β)/ρ + (1−γ_μ)(1+β)/κ`.
pub fn select_parameters<T: Scalar>(b: SpectralBounds<T>, gamma_delta: T, gamma_mu: T) -> Result<SolverParams<T>> {
    if !(gamma_delta.is_finite() && gamma_delta > T::one()) {
        return Err(invalid("gamma_delta", format!("must exceed 1, got {gamma_delta}")));
    }
    if !(gamma_mu > T::zero() && gamma_mu <= T::one()) {
        return Err(invalid("gamma_mu", format!("must lie in (0, 1], got {gamma_mu}")));
    }
    if !(b.rho > T::zero()) {
        return Err(ProxError::Singular { rho: b.rho.to_f64_lossy() });
    }
    let delta = gamma_delta * (b.kappa - b.rho) / (T::two() * b.rho);
    if !(delta > T::zero()) {
        return Err(invalid(
            "delta",
            format!("rho = kappa = {} gives delta = {delta}; supply delta manually", b.rho),
        ));
    }
    Ok(params_for_delta(b, delta, gamma_delta, gamma_mu))
}

/// Step size and interval for a given relaxation `δ`.
pub fn params_for_delta<T: Scalar>(b: SpectralBounds<T>, delta: T, gamma_delta: T, gamma_mu: T) -> SolverParams<T> {
    let beta = delta / (T::one() + delta);
    let mu = gamma_mu * (T::one() - beta) / b.rho + (T::one() - gamma_mu) * (T::one() + beta) / b.kappa;
    SolverParams {
        delta,
        beta,
        mu,
        gamma_delta,
        gamma_mu,
        max_iter: DEFAULT_MAX_ITER,
        tol: T::lit(DEFAULT_TOL),
        mu_interval: ((T::one() - beta) * b.rho, (T::one() + beta) / b.kappa),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfbsOutcome<T> {
    pub x_hat: Point2<T>,
    pub iterations: usize,
    pub converged: bool,
    /// `(x_k, x_k − μ∇f(x_k))` for every iteration, empty when untraced.
    pub trace: Vec<(Point2<T>, Point2<T>)>,
}

impl<T: Scalar> PfbsOutcome<T> {
    /// `x_0, x_{1/2}, x_1, …, x_n`.
    pub fn trajectory(&self) -> Vec<Point2<T>> {
        let mut out: Vec<Point2<T>> = self.trace.iter().flat_map(|&(x, h)| [x, h]).collect();
        out.push(self.x_hat);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PfbsOptions<T> {
    pub mu: T,
    pub x0: Point2<T>,
    pub tol: T,
    pub max_iter: usize,
    pub record_trace: bool,
}

impl<T: Scalar> PfbsOptions<T> {
    pub fn new(mu: T) -> Self {
        Self {
            mu,
            x0: Point2::zero(),
            tol: T::lit(DEFAULT_TOL),
            max_iter: DEFAULT_MAX_ITER,
            record_trace: true,
        }
    }

    pub fn untraced(mut self) -> Self {
        self.record_trace = false;
        self
    }
}

/// `x_{k+1} = shrink(x_k − μ∇f(x_k))` until `‖x_{k+1} − x_k‖ ≤ tol`.
pub fn pfbs<T, F>(model: &LinearModel<T>, shrink: F, opts: &PfbsOptions<T>) -> Result<PfbsOutcome<T>>
where
    T: Scalar,
    F: Fn(Point2<T>) -> Point2<T>,
{
    if !(opts.mu.is_finite() && opts.mu > T::zero()) {
        return Err(invalid("mu", format!("must be positive, got {}", opts.mu)));
    }
    if !(opts.tol > T::zero()) {
        return Err(invalid("tol", format!("must be positive, got {}", opts.tol)));
    }
    if !opts.x0.is_finite() {
        return Err(ProxError::NonFinite("x0"));
    }
    let mut trace = Vec::new();
    let mut x = opts.x0;
    for k in 0..opts.max_iter {
        let half = x - model.gradient(x) * opts.mu;
        let next = shrink(half);
        if opts.record_trace {
            trace.push((x, half));
        }
        let norm = next.norm();
        if !(norm <= T::lit(DIVERGENCE_NORM)) {
            return Err(ProxError::Diverged { iteration: k + 1, norm: norm.to_f64_lossy() });
        }
        let step = (next - x).norm();
        x = next;
        if step <= opts.tol {
            return Ok(PfbsOutcome { x_hat: x, iterations: k + 1, converged: true, trace });
        }
    }
    Ok(PfbsOutcome { x_hat: x, iterations: opts.max_iter, converged: false, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario_a_rows() -> Vec<[f64; 2]> {
        let q = Mat2::new(1.0, -0.9, 0.9, 1.0);
        let a = (q * Mat2::diag(1.0, 0.1) * q.transpose()).scale(0.5);
        vec![a.m[0], a.m[1]]
    }

    #[test]
    fn spectral_examples() {
        let b = spectral_bounds(&scenario_a_rows()).unwrap();
        assert!((b.rho - 0.00819025).abs() < 1e-9 && (b.kappa - 0.819025).abs() < 1e-9);
        let b = spectral_bounds(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!((b.rho, b.kappa), (1.0, 1.0));
        let b = spectral_bounds(&[[1.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!((b.rho, b.kappa), (1.0, 4.0));
        assert!(spectral_bounds(&[[f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn parameter_examples() {
        let p = select_parameters(SpectralBounds::new(0.0082f64, 0.82).unwrap(), 1.01, 0.5).unwrap();
        assert!((p.delta - 49.995).abs() < 1e-9);
        assert!((p.beta - 0.980390).abs() < 1e-5);
        assert!((p.beta - p.delta / (1.0 + p.delta)).abs() < 1e-15);
        assert!((p.mu_interval.0 - 1.61e-4).abs() < 1e-6);
        assert!((p.mu_interval.1 - 2.415).abs() < 1e-3);
        assert!(p.mu_admissible());

        assert!(select_parameters(SpectralBounds::new(1.0, 1.0).unwrap(), 1.01, 0.5).is_err());
        assert!(matches!(
            select_parameters(SpectralBounds::new(0.0, 1.0).unwrap(), 1.01, 0.5),
            Err(ProxError::Singular { .. })
        ));

        let p = select_parameters(SpectralBounds::new(1.0, 4.0).unwrap(), 2.0, 1.0).unwrap();
        assert_eq!((p.delta, p.beta, p.mu), (3.0, 0.75, 0.25));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let m = LinearModel::new(vec![[1.0, 2.0], [-0.5, 0.3], [0.7, 0.1]], vec![0.2, -1.0, 0.4]).unwrap();
        let x = Point2::raw(0.3f64, -0.8);
        let h = 1e-6;
        let g = m.gradient(x);
        let fd1 = (m.objective(x + Point2::raw(h, 0.0)) - m.objective(x - Point2::raw(h, 0.0))) / (2.0 * h);
        let fd2 = (m.objective(x + Point2::raw(0.0, h)) - m.objective(x - Point2::raw(0.0, h))) / (2.0 * h);
        assert!((g.x1 - fd1).abs() <= 1e-6 * g.x1.abs().max(1.0));
        assert!((g.x2 - fd2).abs() <= 1e-6 * g.x2.abs().max(1.0));
    }

    #[test]
    fn zero_data_is_a_fixed_point() {
        let m = LinearModel::new(scenario_a_rows(), vec![0.0, 0.0]).unwrap();
        let out = pfbs(&m, |v| v, &PfbsOptions::new(2.0)).unwrap();
        assert_eq!(out.x_hat, Point2::zero());
        assert_eq!(out.iterations, 1);
        assert_eq!(out.trajectory().len(), 3);
    }

    #[test]
    fn least_squares_recovers_noiseless_truth() {
        let x = Point2::raw(0.01, 1.0);
        let m = LinearModel::synthesize(scenario_a_rows(), x, vec![0.0; 2]).unwrap();
        assert!(m.least_squares().unwrap().dist(x) < 1e-12);
        let s = LinearModel::new(vec![[1.0, 1.0], [2.0, 2.0]], vec![1.0, 2.0]).unwrap();
        assert!(matches!(s.least_squares(), Err(ProxError::Singular { .. })));
    }

    #[test]
    fn divergence_is_reported() {
        let m = LinearModel::new(vec![[1.0, 0.0], [0.0, 1.0]], vec![1.0, 1.0]).unwrap();
        // μ = 3 makes the gradient step expand by a factor of 2
        let r = pfbs(&m, |v| v, &PfbsOptions::new(3.0));
        assert!(matches!(r, Err(ProxError::Diverged { .. })));
    }
}
