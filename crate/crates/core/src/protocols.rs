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

//! Teleportation and amplification of squeezed cat states.
//!
//! The teleportation circuit: a resource state (squeezed cat of amplitude
//! `√2α` or `ψ_app(n)`) on mode `1` is mixed with squeezed vacuum on mode
//! `2`; the signal on mode `s` is mixed with mode `1`; `x₁ = 0` and
//! `p_s = β` are post-selected and mode `2` carries the output. All states
//! go through the exact engine; nothing is read off printed expansions.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gausspoly::{GaussPolyState, GaussTerm, Poly};
use crate::legendre::gauss_legendre;
use crate::states::{
    fit_effective_params, make_approx, make_ideal_squeezed_cat, make_signal, make_squeezed_coherent,
    make_squeezed_vacuum, squeezing_g, ApproxStateParams, Parity, SignalParams, DEFAULT_MODE,
};

pub const SIGNAL_MODE: &str = "s";
pub const OUTPUT_MODE: &str = "2";
const RESOURCE_MODE: &str = "1";

/// Fidelity at or above which an amplified state counts as mostly squeezed
/// vacuum.
pub const SPURIOUS_VACUUM_OVERLAP: f64 = 0.9;

const MIN_HERALD_WEIGHT: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resource {
    /// Squeezed cat `S(r)|±(√2α)⟩` split with squeezed vacuum.
    Ideal(Parity),
    /// `ψ_app(n)` split with squeezed vacuum.
    Approx(ApproxStateParams),
}

impl Resource {
    pub fn approx(n: u32) -> Result<Resource> {
        Ok(Resource::Approx(ApproxStateParams::new(n)?))
    }

    pub fn parity(&self) -> Parity {
        match self {
            Resource::Ideal(p) => *p,
            Resource::Approx(p) => Parity::of(p.n),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Resource::Ideal(Parity::Even) => "ideal-even".into(),
            Resource::Ideal(Parity::Odd) => "ideal-odd".into(),
            Resource::Approx(p) => format!("approx-{}", p.n),
        }
    }
}

/// `0` for even resources, `π/(4α√g)` for odd ones.
pub fn default_beta(signal: &SignalParams, parity: Parity) -> f64 {
    match parity {
        Parity::Even => 0.0,
        Parity::Odd => PI / (4.0 * signal.alpha * signal.g().sqrt()),
    }
}

#[derive(Clone, Debug)]
pub struct TeleportOutcome {
    /// Normalized output on mode `"2"`.
    pub output: GaussPolyState,
    /// Squared norm of the conditioned state (a density in `x₁`, `p_s`).
    pub herald_weight: f64,
    pub fidelity_vs_signal: f64,
    pub beta: f64,
}

/// Resource on modes `1`, `2` after the first beam splitter.
fn resource_state(resource: Resource, signal_alpha: f64, r: f64) -> Result<GaussPolyState> {
    let cat = match resource {
        Resource::Ideal(parity) => make_ideal_squeezed_cat(SQRT_2 * signal_alpha, r, parity)?,
        Resource::Approx(p) => make_approx(p)?,
    };
    let cat = cat.relabel(&[RESOURCE_MODE])?;
    let vac = make_squeezed_vacuum(squeezing_g(r))?.relabel(&[OUTPUT_MODE])?;
    cat.multiply(&vac)?.beam_splitter(OUTPUT_MODE, RESOURCE_MODE)
}

fn run_circuit(signal: &GaussPolyState, resource: &GaussPolyState, beta: f64) -> Result<GaussPolyState> {
    signal
        .relabel(&[SIGNAL_MODE])?
        .multiply(resource)?
        .beam_splitter(SIGNAL_MODE, RESOURCE_MODE)?
        .condition_x(RESOURCE_MODE, 0.0)?
        .project_p(SIGNAL_MODE, beta)
}

fn accept(state: GaussPolyState) -> Result<(GaussPolyState, f64)> {
    let weight = state.norm_sqr()?;
    if !(weight > MIN_HERALD_WEIGHT) || !weight.is_finite() {
        return Err(Error::Rejected(format!("heralding weight {weight:e} is zero")));
    }
    Ok((state.scale(Complex64::new(1.0 / weight.sqrt(), 0.0)), weight))
}

/// Post-selected teleportation of `signal` through `resource`. `beta`
/// defaults to [`default_beta`].
pub fn teleport(signal: &SignalParams, resource: Resource, beta: Option<f64>) -> Result<TeleportOutcome> {
    signal.validate()?;
    let beta = beta.unwrap_or_else(|| default_beta(signal, resource.parity()));
    let sig = make_signal(signal)?;
    let res = resource_state(resource, signal.alpha, signal.r)?;
    let (output, herald_weight) = accept(run_circuit(&sig, &res, beta)?)?;
    let fidelity_vs_signal = output.fidelity(&sig.relabel(&[OUTPUT_MODE])?)?;
    Ok(TeleportOutcome {
        output,
        herald_weight,
        fidelity_vs_signal,
        beta,
    })
}

/// Which printed coefficient set enters the closed-form output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormCoefficients {
    /// `B± ∋ iβ`, `C ∋ β²/A + iβx(1/g−1)/(2√2A)`, `D ∋ iβ/A`.
    Printed,
    /// `B± ∋ iβ/2`, `C ∋ β²/(4A) − iβx(1/g−1)/(4√2A)`, `D ∋ iβ/(2A√g)`.
    Derived,
}

/// Meaning of `μ_{k,±}` in the closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentConvention {
    /// `E[X^k]` of the normal law with mean `B/A` and variance `1/(2A)`.
    Normalized,
    /// `∫ x^k exp(−Ax² + 2Bx) dx`.
    Raw,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Output wavefunction of `ψ_app(n)` teleportation assembled from
/// `Σ_k C(n,k) (x/√2)^{n−k} 2^{−k} e^{−C} [a e^{Dα} μ_{k,+} + b e^{−Dα} μ_{k,−}]`,
/// normalized, on mode `"2"`.
pub fn output_closed_form(
    signal: &SignalParams,
    n: u32,
    beta: f64,
    coefficients: ClosedFormCoefficients,
    moments: MomentConvention,
) -> Result<GaussPolyState> {
    signal.validate()?;
    ApproxStateParams::new(n)?;
    let g = signal.g();
    let alpha = signal.alpha;
    let c = |re: f64| Complex64::new(re, 0.0);
    let i = Complex64::i();
    let a_coef = (3.0 / g + 1.0) / 8.0;
    let k1 = 1.0 / g - 1.0;

    let b1 = k1 / (4.0 * SQRT_2);
    let c2 = 0.25 * (1.0 + 1.0 / g - k1 * k1 / (8.0 * a_coef));
    let d1 = k1 / (4.0 * (2.0 * g).sqrt() * a_coef);
    let (b_beta, c1, c0_beta, d0) = match coefficients {
        ClosedFormCoefficients::Printed => (
            i * beta,
            i * beta * k1 / (2.0 * SQRT_2 * a_coef),
            c(beta * beta / a_coef),
            i * beta / a_coef,
        ),
        ClosedFormCoefficients::Derived => (
            i * beta / 2.0,
            -i * beta * k1 / (4.0 * SQRT_2 * a_coef),
            c(beta * beta / (4.0 * a_coef)),
            i * beta / (2.0 * a_coef * g.sqrt()),
        ),
    };
    let c0 = c(alpha * alpha * (1.0 - 1.0 / (4.0 * a_coef * g))) + c0_beta;

    let mut terms = Vec::with_capacity(2);
    for (sign, amp) in [(1.0, signal.a), (-1.0, signal.b)] {
        if amp.norm() == 0.0 {
            continue;
        }
        let b0 = c(sign * alpha / (2.0 * g.sqrt())) + b_beta;
        let mean = Poly::linear(1, b0 / a_coef, &[c(b1 / a_coef)]);
        let half_var = c(1.0 / (2.0 * a_coef));
        let mut mu = vec![Poly::one(1), mean.clone()];
        for k in 2..=n as usize {
            let mut next = mean.mul(&mu[k - 1]);
            next.add_scaled(&mu[k - 2], half_var * (k as f64 - 1.0));
            mu.push(next);
        }
        let mut poly = Poly::zero(1);
        for k in 0..=n {
            let lead = Poly::monomial(
                1,
                0,
                (n - k) as u16,
                c(binomial(n, k) * SQRT_2.powi(-((n - k) as i32)) / 2f64.powi(k as i32)),
            );
            poly.add_assign(&lead.mul(&mu[k as usize]));
        }
        let mut q = c(2.0 * c2);
        let mut l = -c1 + sign * alpha * d1;
        let mut c_term = -c0 + sign * alpha * d0;
        if moments == MomentConvention::Raw {
            q -= 2.0 * b1 * b1 / a_coef;
            l += 2.0 * b1 * b0 / a_coef;
            c_term += b0 * b0 / a_coef + 0.5 * (PI / a_coef).ln();
        }
        terms.push(GaussTerm::univariate(poly.scale(amp), q, l, c_term));
    }
    let state = GaussPolyState::single_mode(OUTPUT_MODE, terms)?;
    Ok(accept(state)?.0)
}

/// `|P_{x,0} P_{p,±}| / |P_{x,+} P_{p,0}|` as printed: `e^{2α²}` for the
/// even resource, `e^{2α²} √tanh(2α²)` for the odd one.
pub fn signal_content_ratio(alpha: f64, parity: Parity) -> f64 {
    let a2 = alpha * alpha;
    match parity {
        Parity::Even => (2.0 * a2).exp(),
        Parity::Odd => (2.0 * a2).exp() * (2.0 * a2).tanh().sqrt(),
    }
}

/// Homodyne amplitudes of the single-mode states reaching the detectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAmplitudes {
    /// `⟨x=0|S(r)|0⟩`.
    pub x_vacuum: Complex64,
    /// `⟨x=0|S(r)|+(√2α)⟩`.
    pub x_cat: Complex64,
    /// `⟨p=β|S(r)|0⟩`.
    pub p_vacuum: Complex64,
    /// `⟨p=β|S(r)|±(√2α)⟩`, parity as requested.
    pub p_cat: Complex64,
    pub beta: f64,
}

impl MeasurementAmplitudes {
    /// `|x_vacuum p_cat| / |x_cat p_vacuum|`.
    pub fn ratio(&self) -> f64 {
        (self.x_vacuum * self.p_cat).norm() / (self.x_cat * self.p_vacuum).norm()
    }
}

fn cat_components(alpha: f64, r: f64, parity: Parity, normalized: bool) -> Result<GaussPolyState> {
    if normalized {
        return make_ideal_squeezed_cat(alpha, r, parity);
    }
    let plus = make_squeezed_coherent(alpha, r)?;
    let minus = make_squeezed_coherent(-alpha, r)?.scale(Complex64::new(parity.sign(), 0.0));
    plus.add(&minus)
}

fn scalar(state: GaussPolyState) -> Result<Complex64> {
    state
        .as_scalar()
        .ok_or_else(|| Error::Domain("expected a scalar amplitude".into()))
}

/// Amplitudes computed with the engine; cats `|α⟩ ± |−α⟩` are taken
/// unnormalized unless `normalized_cats`.
pub fn measurement_amplitudes(
    alpha: f64,
    r: f64,
    parity: Parity,
    normalized_cats: bool,
) -> Result<MeasurementAmplitudes> {
    if !(alpha > 0.0) {
        return Err(Error::Usage(format!("alpha must be positive, got {alpha}")));
    }
    let g = squeezing_g(r);
    let beta = match parity {
        Parity::Even => 0.0,
        Parity::Odd => PI / (4.0 * alpha * g.sqrt()),
    };
    let vac = make_squeezed_vacuum(g)?;
    let cat_x = cat_components(SQRT_2 * alpha, r, Parity::Even, normalized_cats)?;
    let cat_p = cat_components(SQRT_2 * alpha, r, parity, normalized_cats)?;
    Ok(MeasurementAmplitudes {
        x_vacuum: scalar(vac.condition_x(DEFAULT_MODE, 0.0)?)?,
        x_cat: scalar(cat_x.condition_x(DEFAULT_MODE, 0.0)?)?,
        p_vacuum: scalar(vac.project_p(DEFAULT_MODE, beta)?)?,
        p_cat: scalar(cat_p.project_p(DEFAULT_MODE, beta)?)?,
        beta,
    })
}

/// `R² / (1 + R²)` for `R > 0`.
pub fn fidelity_lower_bound(ratio: f64) -> f64 {
    let r2 = ratio * ratio;
    if r2.is_infinite() {
        1.0
    } else {
        r2 / (1.0 + r2)
    }
}

/// A teleportation experiment over varying signal coefficients `(a, b)`.
/// `cat_alpha` is the amplitude of the state split at the first beam
/// splitter; the signal amplitude is `cat_alpha/√2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TeleportSetup {
    pub resource: Resource,
    pub cat_alpha: f64,
    pub r: f64,
}

impl TeleportSetup {
    pub fn new(resource: Resource, cat_alpha: f64, r: f64) -> Result<Self> {
        if !(cat_alpha > 0.0) || !cat_alpha.is_finite() || !r.is_finite() {
            return Err(Error::Usage(format!(
                "setup needs finite alpha > 0 and finite r, got alpha = {cat_alpha}, r = {r}"
            )));
        }
        Ok(TeleportSetup { resource, cat_alpha, r })
    }

    pub fn signal_alpha(&self) -> f64 {
        self.cat_alpha / SQRT_2
    }

    pub fn signal(&self, a: Complex64, b: Complex64) -> Result<SignalParams> {
        SignalParams::new(a, b, self.signal_alpha(), self.r)
    }

    /// Precomputes the linear teleportation map on the two signal
    /// components.
    pub fn channel(&self) -> Result<TeleportChannel> {
        TeleportChannel::new(self)
    }
}

type Gram = [[Complex64; 2]; 2];

/// Teleportation restricted to signals `a S|α⟩ + b S|−α⟩`. The circuit is
/// linear in the signal, so two engine runs give every `(a, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TeleportChannel {
    beta: f64,
    signal_gram: Gram,
    output_gram: Gram,
    cross_gram: Gram,
}

fn gram(u: &[GaussPolyState; 2], v: &[GaussPolyState; 2]) -> Result<Gram> {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = u[i].inner_product(&v[j])?;
        }
    }
    Ok(m)
}

fn quadratic_form(m: &Gram, c: [Complex64; 2]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            s += c[i].conj() * m[i][j] * c[j];
        }
    }
    s
}

impl TeleportChannel {
    fn new(setup: &TeleportSetup) -> Result<Self> {
        let alpha = setup.signal_alpha();
        let one = SignalParams::real(1.0, 0.0, alpha, setup.r)?;
        let beta = default_beta(&one, setup.resource.parity());
        let res = resource_state(setup.resource, alpha, setup.r)?;
        let comps = [
            make_squeezed_coherent(alpha, setup.r)?.relabel(&[OUTPUT_MODE])?,
            make_squeezed_coherent(-alpha, setup.r)?.relabel(&[OUTPUT_MODE])?,
        ];
        let outs = [run_circuit(&comps[0], &res, beta)?, run_circuit(&comps[1], &res, beta)?];
        Ok(TeleportChannel {
            beta,
            signal_gram: gram(&comps, &comps)?,
            output_gram: gram(&outs, &outs)?,
            cross_gram: gram(&comps, &outs)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Teleportation fidelity of the signal `∝ a S|α⟩ + b S|−α⟩`.
    pub fn fidelity(&self, a: Complex64, b: Complex64) -> f64 {
        let c = [a, b];
        let ss = quadratic_form(&self.signal_gram, c).re;
        let oo = quadratic_form(&self.output_gram, c).re;
        let so = quadratic_form(&self.cross_gram, c);
        if !(ss > 0.0) || !(oo > 0.0) {
            return 0.0;
        }
        so.norm_sqr() / (ss * oo)
    }
}

/// Inclusive `(θ, φ)` grid, θ-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepGrid {
    pub theta: (f64, f64),
    pub phi: (f64, f64),
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SweepGrid {
    /// `θ ∈ [0, π/2]`, `φ ∈ [0, 2π]`.
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        SweepGrid::with_ranges((0.0, PI / 2.0), (0.0, 2.0 * PI), n_theta, n_phi)
    }

    pub fn with_ranges(theta: (f64, f64), phi: (f64, f64), n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 {
            return Err(Error::Usage(format!(
                "sweep grid must be at least 2x2, got {n_theta}x{n_phi}"
            )));
        }
        if !(theta.1 >= theta.0) || !(phi.1 >= phi.0) {
            return Err(Error::Usage("sweep ranges must be ordered".into()));
        }
        Ok(SweepGrid {
            theta,
            phi,
            n_theta,
            n_phi,
        })
    }

    fn at(range: (f64, f64), n: usize, i: usize) -> f64 {
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }

    pub fn theta_at(&self, i: usize) -> f64 {
        SweepGrid::at(self.theta, self.n_theta, i)
    }

    pub fn phi_at(&self, j: usize) -> f64 {
        SweepGrid::at(self.phi, self.n_phi, j)
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapPoint {
    pub theta: f64,
    pub phi: f64,
    pub fidelity: f64,
}

/// Teleportation fidelity for `a = cos θ`, `b = e^{iφ} sin θ` on every grid
/// point, θ-major.
pub fn fidelity_map(setup: &TeleportSetup, grid: &SweepGrid) -> Result<Vec<MapPoint>> {
    let channel = setup.channel()?;
    Ok((0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (theta, phi) = (grid.theta_at(k / grid.n_phi), grid.phi_at(k % grid.n_phi));
            let (a, b) = BlochParametrization::FigureAxis.coefficients(theta, phi);
            MapPoint {
                theta,
                phi,
                fidelity: channel.fidelity(a, b),
            }
        })
        .collect())
}

/// How `(θ, φ)` on the sphere maps to signal coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlochParametrization {
    /// `a = cos(θ/2)`, `b = e^{iφ} sin(θ/2)`.
    HalfAngle,
    /// `a = cos θ`, `b = e^{iφ} sin θ`.
    FigureAxis,
}

impl BlochParametrization {
    pub fn coefficients(self, theta: f64, phi: f64) -> (Complex64, Complex64) {
        let t = match self {
            BlochParametrization::HalfAngle => theta / 2.0,
            BlochParametrization::FigureAxis => theta,
        };
        (Complex64::new(t.cos(), 0.0), Complex64::from_polar(t.sin(), phi))
    }

    pub fn name(self) -> &'static str {
        match self {
            BlochParametrization::HalfAngle => "half-angle",
            BlochParametrization::FigureAxis => "figure-axis",
        }
    }
}

/// Gauss–Legendre in `cos θ` times trapezoid in `φ`, both resolutions
/// doubled until successive averages differ by less than `tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub tol: f64,
    pub max_doublings: u32,
}

impl Default for AverageSpec {
    fn default() -> Self {
        AverageSpec {
            n_theta: 32,
            n_phi: 64,
            tol: 1e-5,
            max_doublings: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageFidelity {
    pub value: f64,
    pub parametrization: BlochParametrization,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Change against the previous resolution.
    pub last_change: f64,
}

fn sphere_average<F>(f: &F, param: BlochParametrization, n_theta: usize, n_phi: usize) -> f64
where
    F: Fn(Complex64, Complex64) -> f64 + Sync,
{
    let (nodes, weights) = gauss_legendre(n_theta);
    let total: f64 = (0..n_theta * n_phi)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n_phi, k % n_phi);
            let theta = nodes[i].acos();
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let (a, b) = param.coefficients(theta, phi);
            weights[i] * f(a, b)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    total / (2.0 * n_phi as f64)
}

/// `(1/4π) ∫ F dΩ` for an arbitrary fidelity function of `(a, b)`.
pub fn average_fidelity_of<F>(f: F, param: BlochParametrization, spec: AverageSpec) -> Result<AverageFidelity>
where
    F: Fn(Complex64, Complex64) -> f64 + Sync,
{
    if spec.n_theta < 1 || spec.n_phi < 1 || !(spec.tol > 0.0) {
        return Err(Error::Usage("average needs positive resolutions and tolerance".into()));
    }
    let (mut nt, mut np) = (spec.n_theta, spec.n_phi);
    let mut prev = sphere_average(&f, param, nt, np);
    let mut change = f64::INFINITY;
    for _ in 0..spec.max_doublings {
        nt *= 2;
        np *= 2;
        let next = sphere_average(&f, param, nt, np);
        change = (next - prev).abs();
        prev = next;
        if change < spec.tol {
            return Ok(AverageFidelity {
                value: next,
                parametrization: param,
                n_theta: nt,
                n_phi: np,
                last_change: change,
            });
        }
    }
    Err(Error::NotConverged(format!(
        "average fidelity {prev} still changed by {change:e} at {nt}x{np} nodes (tolerance {:e})",
        spec.tol
    )))
}

/// Bloch-sphere average of the teleportation fidelity.
pub fn average_fidelity(
    setup: &TeleportSetup,
    param: BlochParametrization,
    spec: AverageSpec,
) -> Result<AverageFidelity> {
    let channel = setup.channel()?;
    average_fidelity_of(|a, b| channel.fidelity(a, b), param, spec)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AmplifyInput {
    /// Even squeezed cat of amplitude `alpha`.
    Ideal { alpha: f64, r: f64 },
    /// `ψ_app(n)`.
    Approx(u32),
}

#[derive(Clone, Debug)]
pub struct AmplifyOutcome {
    pub output: GaussPolyState,
    pub herald_weight: f64,
    /// Against the even cat of amplitude `√2α` (ideal input) or the best
    /// fitting cat of `ψ_app(2n)` (approximate input).
    pub fidelity_vs_target: f64,
    pub target_alpha: f64,
    pub target_r: f64,
    /// Fidelity with the squeezed vacuum of the same squeezing.
    pub vacuum_overlap: f64,
    /// The high fidelity comes from the vacuum portion of the state.
    pub spurious: bool,
}

/// Two copies of `u` on a balanced beam splitter, `x₂ = 0` post-selected.
fn amplify_state(u: &GaussPolyState) -> Result<(GaussPolyState, f64)> {
    let one = u.relabel(&["1"])?;
    let two = u.relabel(&["2"])?;
    let mixed = one.multiply(&two)?.beam_splitter("1", "2")?;
    let (out, weight) = accept(mixed.condition_x("2", 0.0)?)?;
    Ok((out.relabel(&[DEFAULT_MODE])?, weight))
}

fn outcome(
    output: GaussPolyState,
    herald_weight: f64,
    target: &GaussPolyState,
    target_alpha: f64,
    target_r: f64,
) -> Result<AmplifyOutcome> {
    let vacuum_overlap = output.fidelity(&make_squeezed_vacuum(squeezing_g(target_r))?)?;
    Ok(AmplifyOutcome {
        fidelity_vs_target: output.fidelity(target)?,
        output,
        herald_weight,
        target_alpha,
        target_r,
        vacuum_overlap,
        spurious: vacuum_overlap >= SPURIOUS_VACUUM_OVERLAP,
    })
}

fn approx_outcome(output: GaussPolyState, weight: f64, doubled: u32) -> Result<AmplifyOutcome> {
    let fit = fit_effective_params(doubled)?;
    let target = make_ideal_squeezed_cat(fit.alpha, fit.r, fit.parity)?;
    outcome(output, weight, &target, fit.alpha, fit.r)
}

fn check_ideal(alpha: f64, r: f64) -> Result<()> {
    if !(alpha >= 0.0) || !alpha.is_finite() || !r.is_finite() {
        return Err(Error::Usage(format!(
            "amplify needs finite alpha >= 0, got alpha = {alpha}, r = {r}"
        )));
    }
    Ok(())
}

/// One amplification step.
pub fn amplify(input: AmplifyInput) -> Result<AmplifyOutcome> {
    match input {
        AmplifyInput::Ideal { alpha, r } => {
            check_ideal(alpha, r)?;
            let cat = make_ideal_squeezed_cat(alpha, r, Parity::Even)?;
            let (out, weight) = amplify_state(&cat)?;
            let target = make_ideal_squeezed_cat(SQRT_2 * alpha, r, Parity::Even)?;
            outcome(out, weight, &target, SQRT_2 * alpha, r)
        }
        AmplifyInput::Approx(n) => {
            let doubled = ApproxStateParams::new(2 * n)?.n;
            let (out, weight) = amplify_state(&make_approx(ApproxStateParams::new(n)?)?)?;
            approx_outcome(out, weight, doubled)
        }
    }
}

/// Repeated amplification, each output feeding both copies of the next step.
pub fn amplify_iterate(input: AmplifyInput, steps: usize) -> Result<Vec<AmplifyOutcome>> {
    if steps == 0 {
        return Err(Error::Usage("amplify_iterate needs steps >= 1".into()));
    }
    let at_step = |k: usize| {
        move |e: Error| match e {
            Error::Capacity(msg) => Error::Capacity(format!("step {k}: {msg}")),
            other => other,
        }
    };
    let mut out = Vec::with_capacity(steps);
    let mut state = match input {
        AmplifyInput::Ideal { alpha, r } => {
            check_ideal(alpha, r)?;
            make_ideal_squeezed_cat(alpha, r, Parity::Even)?
        }
        AmplifyInput::Approx(n) => make_approx(ApproxStateParams::new(n)?)?,
    };
    for k in 1..=steps {
        let (next, weight) = amplify_state(&state).map_err(at_step(k))?;
        let result = match input {
            AmplifyInput::Ideal { alpha, r } => {
                let target_alpha = alpha * SQRT_2.powi(k as i32);
                let target = make_ideal_squeezed_cat(target_alpha, r, Parity::Even)?;
                outcome(next.clone(), weight, &target, target_alpha, r)?
            }
            AmplifyInput::Approx(n) => {
                let doubled = n.saturating_mul(1 << k);
                let doubled = ApproxStateParams::new(doubled).map_err(at_step(k))?.n;
                approx_outcome(next.clone(), weight, doubled)?
            }
        };
        out.push(result);
        state = next;
    }
    Ok(out)
}
