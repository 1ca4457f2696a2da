// Copyright 2026 The cvcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line to the
//! real stderr (so it survives output capture) and then asserts.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;
use std::time::{Duration, Instant};

use cvcat::fock_core::{cat_trunc02_formula, even_cat_fock, truncation_fidelity, DEFAULT_DIM};
use cvcat::oracle::{self, GridSpec, OracleResource};
use cvcat::protocols::{
    amplify, amplify_iterate, average_fidelity, default_beta, measurement_amplitudes, output_closed_form, teleport,
    AmplifyInput, AverageSpec, BlochParametrization, ClosedFormCoefficients, MomentConvention, Resource, TeleportSetup,
};
use cvcat::states::{approx_cat_fidelity, fit_effective_params, make_approx, squeezing_g, ApproxStateParams, Parity};
use cvcat::validate::{oracle_corpus, teleport_oracle_checks, GRANGIER_ALPHA_SQ, GRANGIER_R, ORACLE_TOL};
use num_complex::Complex64;

fn report(criterion: u32, passed: bool, elapsed: Duration, budget: Duration, detail: &str) {
    let ok = passed && elapsed < budget;
    let line = format!(
        "acceptance {criterion}: {} ({:.3} s of {:.0} s) {detail}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(passed, "criterion {criterion} failed: {detail}");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its time budget: {elapsed:?}"
    );
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn criterion_1_truncation() {
    let start = Instant::now();
    let mut passed = true;
    let mut detail = String::new();
    for (alpha, target) in [(1.0, 0.97), (1.5, 0.73)] {
        let formula = cat_trunc02_formula(alpha);
        let fock = truncation_fidelity(&even_cat_fock(alpha, DEFAULT_DIM).unwrap(), &[0, 2]).unwrap();
        let ok = within(formula, target, 0.005) && (formula - fock).abs() < 1e-10;
        passed &= ok;
        detail += &format!(
            "F({alpha})={formula:.6} (target {target} +- 0.005, |formula-fock|={:.1e}); ",
            (formula - fock).abs()
        );
    }
    report(1, passed, start.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn criterion_2_approximate_state() {
    let start = Instant::now();
    let alpha = GRANGIER_ALPHA_SQ.sqrt();
    let f = approx_cat_fidelity(2, alpha, squeezing_g(GRANGIER_R)).unwrap();
    let fit = fit_effective_params(2).unwrap();
    let a2 = fit.alpha * fit.alpha;
    let passed = within(f, 0.99, 0.005) && within(a2, GRANGIER_ALPHA_SQ, 0.1) && within(fit.r, 0.40, 0.02);
    let detail = format!(
        "F={f:.6}, fit alpha^2={a2:.4}, r={:.4}, F_fit={:.6}",
        fit.r, fit.fidelity
    );
    report(2, passed, start.elapsed(), Duration::from_secs(10), &detail);
}

#[test]
fn criterion_3_ideal_teleportation() {
    let start = Instant::now();
    let setup = TeleportSetup::new(Resource::Ideal(Parity::Even), GRANGIER_ALPHA_SQ.sqrt(), GRANGIER_R).unwrap();
    let f = teleport(&setup.signal(c(1.0), c(1.0)).unwrap(), setup.resource, None)
        .unwrap()
        .fidelity_vs_signal;
    let mut passed = within(f, 1.0, 1e-9);
    let mut worst_ratio = 0.0f64;
    let mut worst_r_spread = 0.0f64;
    for alpha in [0.5, 1.0, GRANGIER_ALPHA_SQ.sqrt()] {
        let expected = (2.0 * alpha * alpha).exp();
        let ratios: Vec<f64> = [0.0, GRANGIER_R, 0.8]
            .iter()
            .map(|&r| measurement_amplitudes(alpha, r, Parity::Even, true).unwrap().ratio())
            .collect();
        for &q in &ratios {
            worst_ratio = worst_ratio.max((q / expected - 1.0).abs());
            worst_r_spread = worst_r_spread.max((q / ratios[0] - 1.0).abs());
        }
    }
    passed &= worst_ratio < 1e-8 && worst_r_spread < 1e-10;
    let detail = format!("F(a=b)={f:.12}, max rel ratio error {worst_ratio:.1e}, max r-spread {worst_r_spread:.1e}");
    report(3, passed, start.elapsed(), Duration::from_secs(5), &detail);
}

#[test]
fn criterion_4_approximate_resource() {
    let start = Instant::now();
    let alpha = GRANGIER_ALPHA_SQ.sqrt();
    let approx = TeleportSetup::new(Resource::approx(2).unwrap(), alpha, GRANGIER_R).unwrap();
    let ideal = TeleportSetup::new(Resource::Ideal(Parity::Even), alpha, GRANGIER_R).unwrap();
    let f_eq = teleport(&approx.signal(c(1.0), c(1.0)).unwrap(), approx.resource, None)
        .unwrap()
        .fidelity_vs_signal;
    let f_op = teleport(&approx.signal(c(1.0), c(-1.0)).unwrap(), approx.resource, None)
        .unwrap()
        .fidelity_vs_signal;
    let mut passed = within(f_eq, 0.9996, 3e-4) && within(f_op, 0.9974, 5e-4);
    let mut detail = format!("F(a=b)={f_eq:.6}, F(a=-b)={f_op:.6}; ");
    let mut any_param = false;
    for param in [BlochParametrization::HalfAngle, BlochParametrization::FigureAxis] {
        let mut all = true;
        for (name, setup) in [("ideal", &ideal), ("approx(2)", &approx)] {
            let avg = average_fidelity(setup, param, AverageSpec::default()).unwrap();
            all &= within(avg.value, 0.9963, 0.002);
            detail += &format!(
                "{} {name} F_avg={:.6} ({}x{}); ",
                param.name(),
                avg.value,
                avg.n_theta,
                avg.n_phi
            );
        }
        any_param |= all;
    }
    passed &= any_param;
    report(4, passed, start.elapsed(), Duration::from_secs(300), &detail);
}

#[test]
fn criterion_5_closed_form() {
    let start = Instant::now();
    let setup = TeleportSetup::new(Resource::approx(2).unwrap(), GRANGIER_ALPHA_SQ.sqrt(), GRANGIER_R).unwrap();
    let mut worst = 1.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let theta = PI * i as f64 / 4.0;
            let phi = 2.0 * PI * j as f64 / 5.0;
            let (a, b) = BlochParametrization::HalfAngle.coefficients(theta, phi);
            let sig = setup.signal(a, b).unwrap();
            for beta in [0.0, default_beta(&sig, Parity::Odd)] {
                let engine = teleport(&sig, setup.resource, Some(beta)).unwrap().output;
                let closed = output_closed_form(
                    &sig,
                    2,
                    beta,
                    ClosedFormCoefficients::Derived,
                    MomentConvention::Normalized,
                )
                .unwrap();
                worst = worst.min(engine.fidelity(&closed).unwrap());
            }
        }
    }

    // Settle the moment convention against direct quadrature.
    let sig = setup
        .signal(Complex64::new(0.6, 0.2), Complex64::new(-0.3, 0.7))
        .unwrap();
    let beta = default_beta(&sig, Parity::Odd);
    let grid = GridSpec::uniform(1, -10.0, 10.0, 801).unwrap();
    let quad = oracle::quad_teleport(
        &sig,
        OracleResource::Approx(2),
        beta,
        &grid,
        &GridSpec::default_for(1).unwrap(),
    )
    .unwrap();
    let oracle_fidelity = |moments| {
        let s = oracle::sample(
            &output_closed_form(&sig, 2, beta, ClosedFormCoefficients::Derived, moments).unwrap(),
            &grid,
        )
        .unwrap();
        let ov = oracle::quad_inner(&s, &quad.values, &grid).unwrap().value.norm_sqr();
        ov / (oracle::quad_norm_sqr(&s, &grid).unwrap() * oracle::quad_norm_sqr(&quad.values, &grid).unwrap())
    };
    let f_norm = oracle_fidelity(MomentConvention::Normalized);
    let f_raw = oracle_fidelity(MomentConvention::Raw);
    let passed = worst >= 1.0 - 1e-8 && f_norm >= 1.0 - 1e-8 && f_raw < f_norm;
    let detail = format!(
        "min engine fidelity {worst:.12} over 5x5 x 2 beta; oracle: normalized moments {f_norm:.10}, raw {f_raw:.6}"
    );
    report(5, passed, start.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn criterion_6_amplification_doubling() {
    let start = Instant::now();
    let mut worst = 1.0f64;
    for n in [1, 2, 4] {
        let out = amplify(AmplifyInput::Approx(n)).unwrap();
        let f = out
            .output
            .fidelity(&make_approx(ApproxStateParams::new(2 * n).unwrap()).unwrap())
            .unwrap();
        worst = worst.min(f);
    }
    let steps = amplify_iterate(
        AmplifyInput::Ideal {
            alpha: 0.3,
            r: GRANGIER_R,
        },
        4,
    )
    .unwrap();
    let fs: Vec<f64> = steps.iter().map(|o| o.fidelity_vs_target).collect();
    let decreasing = fs.windows(2).all(|w| w[1] < w[0]);
    let passed = within(worst, 1.0, 1e-10) && decreasing;
    let detail = format!("min doubling fidelity {worst:.14}; iterated at alpha=0.3: {fs:.5?}");
    report(6, passed, start.elapsed(), Duration::from_secs(10), &detail);
}

#[test]
fn criterion_7_oracle_equivalence() {
    let start = Instant::now();
    let corpus = oracle_corpus(2009, 100).unwrap();
    let teleport_checks = teleport_oracle_checks().unwrap();
    let worst = corpus
        .iter()
        .chain(&teleport_checks)
        .map(|c| c.value)
        .fold(0.0, f64::max);
    let failures: Vec<&str> = corpus
        .iter()
        .chain(&teleport_checks)
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let passed = failures.is_empty();
    let detail = format!(
        "{} corpus checks on 100 states, {} teleport cases, worst error {worst:.1e} (tolerance {ORACLE_TOL:e}), failures {failures:?}",
        corpus.len(),
        teleport_checks.len()
    );
    report(7, passed, start.elapsed(), Duration::from_secs(120), &detail);
}

#[test]
fn criterion_8_amplification_curve() {
    let start = Instant::now();
    let alphas: Vec<f64> = (0..=100).map(|k| 2.5 * k as f64 / 100.0).collect();
    let outs: Vec<_> = alphas
        .iter()
        .map(|&alpha| amplify(AmplifyInput::Ideal { alpha, r: GRANGIER_R }).unwrap())
        .collect();
    let fs: Vec<f64> = outs.iter().map(|o| o.fidelity_vs_target).collect();
    let max_jump = fs.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let continuous = fs.iter().all(|f| f.is_finite()) && max_jump < 0.02;
    let high = alphas
        .iter()
        .zip(&fs)
        .filter(|(a, _)| **a >= 1.5)
        .all(|(_, f)| *f > 0.99);
    let spurious_at_zero = outs[0].spurious && outs[0].fidelity_vs_target > 0.99;
    let unflagged_when_large = alphas
        .iter()
        .zip(&outs)
        .filter(|(a, _)| **a >= 1.5)
        .all(|(_, o)| !o.spurious);
    let min = fs.iter().cloned().fold(f64::INFINITY, f64::min);
    let passed = continuous && high && spurious_at_zero && unflagged_when_large;
    let detail = format!(
        "max step jump {max_jump:.2e} at d(alpha)=0.025, min F {min:.4}, F(0)={:.6} flagged={}, F>0.99 for alpha>=1.5: {high}",
        fs[0], outs[0].spurious
    );
    report(8, passed, start.elapsed(), Duration::from_secs(30), &detail);
}

#[test]
fn signal_amplitude_is_cat_amplitude_over_sqrt2() {
    let setup = TeleportSetup::new(Resource::approx(2).unwrap(), GRANGIER_ALPHA_SQ.sqrt(), GRANGIER_R).unwrap();
    assert!((setup.signal_alpha() * SQRT_2 - GRANGIER_ALPHA_SQ.sqrt()).abs() < 1e-15);
}
