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

//! One-dimensional penalties and shrinkage operators: the l0 pseudo norm, the
//! minimax concave (MC) penalty, the l0 weakly convex envelope, and the soft,
//! hard and firm shrinkers.

use crate::error::{invalid, Result};
use crate::geometry::ScalarProxSet;
use crate::scalar::Scalar;

/// Thresholds `0 < λ1 < λ2` of the firm shrinkage operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirmParams<T> {
    lambda1: T,
    lambda2: T,
}

impl<T: Scalar> FirmParams<T> {
    pub fn new(lambda1: T, lambda2: T) -> Result<Self> {
        if !(lambda1.is_finite() && lambda2.is_finite()) {
            return Err(invalid("lambda", "thresholds must be finite"));
        }
        if !(lambda1 > T::zero() && lambda2 > lambda1) {
            return Err(invalid(
                "lambda",
                format!("need 0 < lambda1 < lambda2, got ({lambda1}, {lambda2})"),
            ));
        }
        Ok(Self { lambda1, lambda2 })
    }

    pub fn lambda1(&self) -> T {
        self.lambda1
    }

    pub fn lambda2(&self) -> T {
        self.lambda2
    }

    /// Lipschitz constant `λ2 / (λ2 − λ1)` of the firm shrinker.
    pub fn lipschitz(&self) -> T {
        self.lambda2 / (self.lambda2 - self.lambda1)
    }
}

/// Parameter `λ2 > 0` of the MC penalty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCParams<T> {
    lambda2: T,
}

impl<T: Scalar> MCParams<T> {
    pub fn new(lambda2: T) -> Result<Self> {
        if !(lambda2.is_finite() && lambda2 > T::zero()) {
            return Err(invalid("lambda2", format!("must be positive, got {lambda2}")));
        }
        Ok(Self { lambda2 })
    }

    pub fn lambda2(&self) -> T {
        self.lambda2
    }
}

pub fn l0_norm<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        T::one()
    }
}

/// `|x| − x²/(2λ2)` for `|x| <= λ2`, `λ2/2` beyond.
pub fn mc_penalty<T: Scalar>(x: T, p: MCParams<T>) -> T {
    let a = x.abs();
    let l2 = p.lambda2;
    if a <= l2 {
        a - x * x / (T::two() * l2)
    } else {
        l2 * T::half()
    }
}

/// The l.s.c. 1-weakly convex envelope of `‖·‖₀`, equal to `√2 φ^MC_√2`.
pub fn l0_envelope<T: Scalar>(x: T) -> T {
    let r2 = T::SQRT_2();
    let a = x.abs();
    if a <= r2 {
        // rounding near √2 can push the quadratic a hair above 1
        (r2 * a - x * x * T::half()).min(T::one())
    } else {
        T::one()
    }
}

/// Set-valued prox of `γ‖·‖₀`; the threshold is `√(2γ)`.
pub fn prox_l0<T: Scalar>(x: T, gamma: T) -> Result<ScalarProxSet<T>> {
    if !(gamma.is_finite() && gamma > T::zero()) {
        return Err(invalid("gamma", format!("must be positive, got {gamma}")));
    }
    let threshold = (T::two() * gamma).sqrt();
    let a = x.abs();
    Ok(if a < threshold {
        ScalarProxSet::Single(T::zero())
    } else if a == threshold {
        ScalarProxSet::pair(T::zero(), x)
    } else {
        ScalarProxSet::Single(x)
    })
}

/// Prox of the l0 envelope: the closed convex hull of the l0 prox image.
pub fn prox_l0_envelope<T: Scalar>(x: T) -> ScalarProxSet<T> {
    let a = x.abs();
    let r2 = T::SQRT_2();
    if a < r2 {
        ScalarProxSet::Single(T::zero())
    } else if a == r2 {
        ScalarProxSet::interval(T::zero(), x)
    } else {
        ScalarProxSet::Single(x)
    }
}

/// Hard shrinkage with threshold `λ`; the boundary `|x| = λ` maps to 0.
pub fn hard<T: Scalar>(x: T, lambda: T) -> Result<T> {
    if !(lambda.is_finite() && lambda > T::zero()) {
        return Err(invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(if x.abs() <= lambda { T::zero() } else { x })
}

pub fn firm<T: Scalar>(x: T, p: FirmParams<T>) -> T {
    let a = x.abs();
    if a <= p.lambda1 {
        T::zero()
    } else if a <= p.lambda2 {
        x.signum() * p.lambda2 * (a - p.lambda1) / (p.lambda2 - p.lambda1)
    } else {
        x
    }
}

/// Soft shrinkage `sign(x) max(|x| − λ, 0)`. Expects `λ >= 0`.
pub fn soft<T: Scalar>(x: T, lambda: T) -> T {
    let a = x.abs() - lambda;
    if a > T::zero() {
        x.signum() * a
    } else {
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const R2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn l0_values() {
        assert_eq!(l0_norm(0.0), 0.0);
        assert_eq!(l0_norm(0.001), 1.0);
        assert_eq!(l0_norm(-7.0), 1.0);
    }

    #[test]
    fn mc_values() {
        let p = MCParams::new(2.0).unwrap();
        assert_eq!(mc_penalty(0.0, p), 0.0);
        assert_eq!(mc_penalty(3.0, p), 1.0);
        assert_relative_eq!(mc_penalty(1.0, p), 0.75);
        assert_relative_eq!(mc_penalty(2.0, p), 1.0);
        assert_relative_eq!(mc_penalty(-1.0, p), mc_penalty(1.0, p));
        assert!(MCParams::new(0.0).is_err());
    }

    #[test]
    fn envelope_values() {
        assert_eq!(l0_envelope(0.0), 0.0);
        assert_eq!(l0_envelope(2.0), 1.0);
        assert_relative_eq!(l0_envelope(1.0), R2 - 0.5, epsilon = 1e-15);
        assert_relative_eq!(l0_envelope(R2), 1.0, epsilon = 1e-15);
        // same as √2 φ^MC_√2
        let mc = MCParams::new(R2).unwrap();
        for &x in &[-3.0, -1.2, -0.3, 0.0, 0.7, 1.4, 5.0] {
            assert_relative_eq!(l0_envelope(x), R2 * mc_penalty(x, mc), epsilon = 1e-14);
        }
    }

    #[test]
    fn prox_l0_cases() {
        assert_eq!(prox_l0(1.0, 1.0).unwrap(), ScalarProxSet::Single(0.0));
        assert_eq!(prox_l0(R2, 1.0).unwrap(), ScalarProxSet::Pair(0.0, R2));
        assert_eq!(prox_l0(2.0, 1.0).unwrap(), ScalarProxSet::Single(2.0));
        assert_eq!(prox_l0(-2.0, 1.0).unwrap(), ScalarProxSet::Single(-2.0));
        // γ = 2 moves the threshold to 2
        assert_eq!(prox_l0(1.9, 2.0).unwrap(), ScalarProxSet::Single(0.0));
        assert_eq!(prox_l0(2.0, 2.0).unwrap(), ScalarProxSet::Pair(0.0, 2.0));
        assert!(prox_l0(1.0, 0.0).is_err());
        assert!(prox_l0(1.0, -1.0).is_err());
    }

    #[test]
    fn prox_l0_pair_members_tie() {
        let x = R2;
        let obj = |y: f64| l0_norm(y) + 0.5 * (x - y) * (x - y);
        if let ScalarProxSet::Pair(a, b) = prox_l0(x, 1.0).unwrap() {
            assert!((obj(a) - obj(b)).abs() <= 1e-12);
        } else {
            panic!("expected a pair");
        }
    }

    #[test]
    fn prox_envelope_cases() {
        assert_eq!(prox_l0_envelope(1.0), ScalarProxSet::Single(0.0));
        assert_eq!(prox_l0_envelope(R2), ScalarProxSet::Interval(0.0, R2));
        assert_eq!(prox_l0_envelope(-R2), ScalarProxSet::Interval(-R2, 0.0));
        assert_eq!(prox_l0_envelope(3.0), ScalarProxSet::Single(3.0));
    }

    #[test]
    fn hard_cases() {
        assert_eq!(hard(1.0, R2).unwrap(), 0.0);
        assert_eq!(hard(R2, R2).unwrap(), 0.0);
        assert_eq!(hard(2.0, R2).unwrap(), 2.0);
        assert_eq!(hard(-2.0, R2).unwrap(), -2.0);
        assert!(hard(1.0, 0.0).is_err());
    }

    #[test]
    fn firm_cases() {
        let p = FirmParams::new(1.0, 2.0).unwrap();
        assert_eq!(firm(0.5, p), 0.0);
        assert_relative_eq!(firm(1.5, p), 1.0);
        assert_eq!(firm(3.0, p), 3.0);
        assert_relative_eq!(firm(-1.5, p), -1.0);
        assert_relative_eq!(firm(2.0, p), 2.0);
        assert_eq!(p.lipschitz(), 2.0);
        assert!(FirmParams::new(2.0, 1.0).is_err());
        assert!(FirmParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn soft_cases() {
        assert_eq!(soft(2.0, 1.0), 1.0);
        assert_eq!(soft(-0.5, 1.0), 0.0);
        assert_eq!(soft(-3.0, 1.0), -2.0);
        assert_eq!(soft(0.37, 0.0), 0.37);
    }

    #[test]
    fn firm_approaches_hard() {
        let delta = 1e-6;
        let p = FirmParams::new(R2 / (1.0 + delta), R2).unwrap();
        let mut x: f64 = -4.0;
        while x <= 4.0 {
            if x.abs() != R2 {
                assert!((firm(x, p) - hard(x, R2).unwrap()).abs() <= 1e-5, "x = {x}");
            }
            x += 0.001;
        }
    }

    #[test]
    fn works_in_single_precision() {
        let p = FirmParams::new(1.0f32, 2.0).unwrap();
        assert_eq!(firm(1.5f32, p), 1.0);
        assert_eq!(l0_envelope(2.0f32), 1.0);
    }
}
