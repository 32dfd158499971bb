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

//! Invariant suites behind `proxlab verify`.

use super::config::{Scenario, ScenarioConfig};
use super::runner::{scenario_a, scenario_c, Method};
use crate::erowl::{boundary_distance, erowl, erowl_limit, ErowlParams};
use crate::geometry::{Point2, WeightPair};
use crate::rng::Stream;
use crate::rowl::{in_k1, prox_rowl_envelope_2d, rowl_envelope_2d, rowl_penalty_2d};
use crate::scalar_ops::{firm, l0_envelope, l0_norm, prox_l0, FirmParams};
use crate::solver::{select_parameters, LinearModel};
use crate::transform::checks::{check_lipschitz, check_monotone, jacobian_symmetry_defect, SampleBox};
use crate::transform::conjugate::weakly_convex_envelope_grid;
use crate::transform::convert::MonotoneGraph1D;
use crate::transform::grid::{Axis, SampledFunction};
use crate::transform::oracle::{brute_force_prox_2d, default_axis, verify_inclusion_1d};

pub const SUITES: [&str; 6] = ["scalar", "rowl", "erowl", "transform", "solver", "experiments"];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: &'static str, name: &'static str, passed: bool, detail: String) -> Check {
    Check { suite, name, passed, detail }
}

fn error_check(suite: &'static str, name: &'static str, e: impl std::fmt::Display) -> Check {
    check(suite, name, false, format!("error: {e}"))
}

/// Runs the named suite, or every suite for `"all"`; `None` for an unknown
/// name.
pub fn run_suite(name: &str, seed: u64) -> Option<Vec<Check>> {
    match name {
        "all" => Some(SUITES.iter().flat_map(|s| run_suite(s, seed).unwrap()).collect()),
        "scalar" => Some(scalar_suite(seed)),
        "rowl" => Some(rowl_suite(seed)),
        "erowl" => Some(erowl_suite(seed)),
        "transform" => Some(transform_suite(seed)),
        "solver" => Some(solver_suite()),
        "experiments" => Some(experiments_suite(seed)),
        _ => None,
    }
}

pub fn render_table(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{:<4} {:<12} {:<32} {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.detail
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    s.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    s
}

fn points(seed: u64, tag: u64, n: usize, r: f64) -> Vec<Point2<f64>> {
    let mut rng = Stream::for_parts(seed, &[tag]);
    (0..n)
        .map(|_| Point2::raw(rng.uniform_in(-r, r), rng.uniform_in(-r, r)))
        .collect()
}

fn scalar_suite(seed: u64) -> Vec<Check> {
    const S: &str = "scalar";
    let r2 = std::f64::consts::SQRT_2;
    let mut out = Vec::new();
    let cases = prox_l0(2.0, 1.0).ok() == Some(crate::geometry::ScalarProxSet::Single(2.0))
        && prox_l0(1.0, 1.0).ok() == Some(crate::geometry::ScalarProxSet::Single(0.0))
        && prox_l0(r2, 1.0).ok() == Some(crate::geometry::ScalarProxSet::pair(0.0, r2));
    out.push(check(S, "prox_l0 cases", cases, String::new()));
    let env_gap = (0..=600)
        .map(|i| -3.0 + 0.01 * i as f64)
        .map(|x| l0_envelope(x) - l0_norm(x))
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(check(S, "l0 envelope below l0", env_gap <= 0.0, format!("max gap {env_gap:e}")));
    let p = FirmParams::new(1.0, 2.0).unwrap();
    let op = move |x: Point2<f64>| Point2::raw(firm(x.x1, p), firm(x.x2, p));
    let m = check_monotone(op, 20_000, seed, SampleBox::default());
    out.push(check(S, "firm monotone", m >= 0.0, format!("min inner product {m:e}")));
    let l = check_lipschitz(op, p.lipschitz(), 20_000, seed, SampleBox::default());
    out.push(check(S, "firm Lipschitz", l.max_ratio <= l.bound + 1e-9, format!("max ratio {}", l.max_ratio)));
    out
}

fn rowl_suite(seed: u64) -> Vec<Check> {
    const S: &str = "rowl";
    let w = WeightPair::new(0.0, 2.0).unwrap();
    let xs = points(seed, 11, 10_000, 6.0);
    let below = xs.iter().all(|&x| rowl_envelope_2d(x, &w) <= rowl_penalty_2d(x, &w) + 1e-12);
    let k1_equal = xs.iter().all(|&x| {
        let s = crate::geometry::sorted_abs(x).0;
        !in_k1(s, &w) || rowl_envelope_2d(x, &w) == rowl_penalty_2d(x, &w)
    });
    let ys = points(seed, 12, 10_000, 6.0);
    let g = |x: Point2<f64>| rowl_envelope_2d(x, &w) + 0.5 * x.norm_sq();
    let worst = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| g(x.lerp(y, 0.5)) - 0.5 * (g(x) + g(y)))
        .fold(f64::NEG_INFINITY, f64::max);
    vec![
        check(S, "envelope below penalty", below, String::new()),
        check(S, "envelope equals penalty on K1", k1_equal, String::new()),
        check(S, "envelope + quadratic convex", worst <= 1e-10, format!("max midpoint excess {worst:e}")),
    ]
}

fn erowl_suite(seed: u64) -> Vec<Check> {
    const S: &str = "erowl";
    let w = WeightPair::new(0.0, 2.0).unwrap();
    let mut out = Vec::new();
    for &d in &[0.5, 1.0, 5.0] {
        let p = ErowlParams::new(w, d).unwrap();
        let op = |x| erowl(x, &p);
        let m = check_monotone(op, 20_000, seed, SampleBox::square(6.0));
        let l = check_lipschitz(op, p.lipschitz(), 20_000, seed, SampleBox::square(6.0));
        out.push(check(S, "monotone", m >= -1e-10, format!("delta {d}: min {m:e}")));
        out.push(check(S, "Lipschitz", l.within(1e-6), format!("delta {d}: ratio {}", l.max_ratio)));
        let mut rng = Stream::for_parts(seed, &[21, d.to_bits()]);
        let mut worst = 0f64;
        let mut n = 0;
        while n < 200 {
            let x = Point2::raw(rng.uniform_in(-6.0, 6.0), rng.uniform_in(-6.0, 6.0));
            if boundary_distance(x, &p) < 1e-3 {
                continue;
            }
            worst = worst.max(jacobian_symmetry_defect(op, x, 1e-5));
            n += 1;
        }
        out.push(check(S, "Jacobian symmetric", worst <= 1e-4, format!("delta {d}: defect {worst:e}")));
    }
    let gap = points(seed, 22, 2000, 6.0)
        .into_iter()
        .map(|x| prox_rowl_envelope_2d(x, &w).distance(erowl_limit(x, &w)))
        .fold(0.0, f64::max);
    out.push(check(S, "limit inside envelope prox", gap <= 1e-6, format!("max distance {gap:e}")));
    out
}

fn transform_suite(seed: u64) -> Vec<Check> {
    const S: &str = "transform";
    let r2 = std::f64::consts::SQRT_2;
    let mut out = Vec::new();
    match MonotoneGraph1D::hard_threshold(r2) {
        Ok(g) => {
            let mut worst = 0f64;
            for &d in &[0.5, 1.0, 2.0] {
                let p = FirmParams::new(r2 / (d + 1.0), r2).unwrap();
                for i in 0..=1000 {
                    let q = -4.0 + 0.008 * i as f64;
                    worst = worst.max(g.convert(d, q).map_or(f64::INFINITY, |v| (v - firm(q, p)).abs()));
                }
            }
            out.push(check(S, "conversion gives firm", worst <= 1e-9, format!("max error {worst:e}")));
        }
        Err(e) => out.push(error_check(S, "conversion gives firm", e)),
    }
    let env = Axis::aligned(-4.0f64, 4.0, 0.01)
        .and_then(|a| SampledFunction::from_fn_1d(a, l0_norm))
        .and_then(|f| weakly_convex_envelope_grid(&f));
    match env {
        Ok(e) => {
            let worst = e
                .coordinates()
                .iter()
                .zip(e.values())
                .filter(|(c, _)| c[0].abs() <= 3.0)
                .map(|(c, &v)| (v - l0_envelope(c[0])).abs())
                .fold(0.0, f64::max);
            out.push(check(S, "l0 envelope on grid", worst <= 5e-3, format!("max error {worst:e}")));
        }
        Err(e) => out.push(error_check(S, "l0 envelope on grid", e)),
    }
    let mut incl = true;
    for x in [-r2, r2, 0.3, 2.5, -1.0f64] {
        let r = default_axis(x, x.abs(), 0.01).and_then(|a| verify_inclusion_1d(l0_norm, l0_envelope, x, &a));
        incl &= r.map_or(false, |r| r.included);
    }
    out.push(check(S, "l0 inclusion", incl, String::new()));
    let w = WeightPair::new(0.0, 2.0).unwrap();
    let mut worst = 0f64;
    let mut failed = None;
    for x in points(seed, 31, 10, 5.0) {
        let p = ErowlParams::new(w, 1.0).unwrap();
        let f = |y: Point2<f64>| rowl_envelope_2d(y, &w) / 2.0;
        let res = default_axis(x.x1, 2.0, 0.01)
            .and_then(|a0| default_axis(x.x2, 2.0, 0.01).map(|a1| (a0, a1)))
            .and_then(|(a0, a1)| brute_force_prox_2d(f, x, 1.0, &a0, &a1));
        match res {
            Ok(o) => worst = worst.max(o.argmin.dist(erowl(x, &p))),
            Err(e) => failed = Some(e.to_string()),
        }
    }
    out.push(match failed {
        Some(e) => check(S, "oracle matches erowl", false, e),
        None => check(S, "oracle matches erowl", worst <= 0.02, format!("max distance {worst:e}")),
    });
    out
}

fn solver_suite() -> Vec<Check> {
    const S: &str = "solver";
    let model = LinearModel::new(super::model::fixed_rows(), vec![0.0; 2]).unwrap();
    let mut out = Vec::new();
    match model.spectral_bounds().and_then(|b| select_parameters(b, 1.01, 0.5).map(|p| (b, p))) {
        Ok((b, p)) => {
            out.push(check(
                S,
                "spectrum of fixed matrix",
                (0.815..=0.825).contains(&b.kappa) && (0.0081..=0.0083).contains(&b.rho),
                format!("rho {} kappa {}", b.rho, b.kappa),
            ));
            out.push(check(S, "relaxation", (49.5..=50.5).contains(&p.delta), format!("delta {}", p.delta)));
        }
        Err(e) => out.push(error_check(S, "spectrum of fixed matrix", e)),
    }
    match scenario_a(&ScenarioConfig::default_for(Scenario::A)) {
        Ok(a) => {
            for r in &a.records {
                let target = match r.method {
                    Method::Erowl => Point2::raw(0.0, 0.99),
                    _ => Point2::raw(0.88, 0.0),
                };
                let ok = (r.x_hat - target).max_abs() <= 0.02;
                out.push(check(S, "scenario A endpoint", ok, format!("{}: {:?}", r.method.label(), r.x_hat.to_array())));
            }
        }
        Err(e) => out.push(error_check(S, "scenario A endpoint", e)),
    }
    out
}

fn experiments_suite(seed: u64) -> Vec<Check> {
    const S: &str = "experiments";
    let mut cfg = ScenarioConfig {
        seed,
        trials: 16,
        snr_list_db: vec![20.0],
        x1_sweep: vec![1.5],
        threads: Some(1),
        ..ScenarioConfig::default_for(Scenario::C)
    };
    let a = scenario_c(&cfg).map(|o| o.records_csv());
    cfg.threads = Some(2);
    let b = scenario_c(&cfg).map(|o| o.records_csv());
    vec![match (a, b) {
        (Ok(a), Ok(b)) => check(S, "deterministic across threads", a == b, String::new()),
        (Err(e), _) | (_, Err(e)) => error_check(S, "deterministic across threads", e),
    }]
}
