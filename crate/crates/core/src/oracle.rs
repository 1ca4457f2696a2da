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

//! Brute-force quadrature used to cross-check the exact engine.
//!
//! Everything here works on sampled values. The reference wavefunctions are
//! written directly from their closed forms and never touch
//! [`GaussPolyState`] algebra.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gausspoly::{GaussPolyState, GaussTerm, Monomial, Poly};
use crate::states::{Parity, SignalParams};

/// Upper bound on the number of grid points of one sampling.
pub const MAX_GRID_POINTS: usize = 1 << 24;

/// Smallest number of points per axis.
pub const MIN_AXIS_POINTS: usize = 64;

/// Default points per axis for one- and two-dimensional grids.
pub const DEFAULT_POINTS_1D: usize = 4096;
pub const DEFAULT_POINTS_2D: usize = 1024;
pub const DEFAULT_BOUND: f64 = 12.0;

/// Uniform grid on `[lo, hi]` with both endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Usage(format!(
                "grid axis needs finite hi > lo, got [{lo}, {hi}]"
            )));
        }
        if points < MIN_AXIS_POINTS {
            return Err(Error::Usage(format!(
                "grid axis needs at least {MIN_AXIS_POINTS} points, got {points}"
            )));
        }
        Ok(Axis { lo, hi, points })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.coord(i)).collect()
    }
}

/// Tensor-product grid, one axis per mode, row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::Usage(format!("grids have 1 to 3 axes, got {}", axes.len())));
        }
        let total = axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.points))
            .unwrap_or(usize::MAX);
        if total > MAX_GRID_POINTS {
            return Err(Error::Capacity(format!(
                "grid of {total} points exceeds the budget of {MAX_GRID_POINTS}"
            )));
        }
        Ok(GridSpec { axes })
    }

    /// `dims` identical axes on `[lo, hi]`.
    pub fn uniform(dims: usize, lo: f64, hi: f64, points: usize) -> Result<Self> {
        let axis = Axis::new(lo, hi, points)?;
        GridSpec::new(vec![axis; dims])
    }

    /// `[−12, 12]` with 4096 points in 1-D, 1024 per axis in 2-D, 256 in 3-D.
    pub fn default_for(dims: usize) -> Result<Self> {
        let points = match dims {
            1 => DEFAULT_POINTS_1D,
            2 => DEFAULT_POINTS_2D,
            _ => 256,
        };
        GridSpec::uniform(dims, -DEFAULT_BOUND, DEFAULT_BOUND, points)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of the flat index `k`.
    pub fn point(&self, mut k: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dims()];
        for (d, axis) in self.axes.iter().enumerate().rev() {
            x[d] = axis.coord(k % axis.points);
            k /= axis.points;
        }
        x
    }

    fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step()).product()
    }

    /// The same box with every other point dropped.
    fn half(&self) -> Option<GridSpec> {
        let axes = self
            .axes
            .iter()
            .map(|a| {
                let points = (a.points - 1) / 2 + 1;
                (points >= 2).then(|| Axis {
                    lo: a.lo,
                    hi: a.lo + (points - 1) as f64 * 2.0 * a.step(),
                    points,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GridSpec { axes })
    }
}

/// Half-width, in envelope standard deviations, a grid must cover around a
/// term of per-variable degree `d`.
fn coverage_sigmas(degree: u16) -> f64 {
    7.5 + (2.0 * degree as f64).sqrt()
}

/// Checks that every term's envelope lies inside the grid.
pub fn check_coverage(u: &GaussPolyState, grid: &GridSpec) -> Result<()> {
    if u.nmodes() != grid.dims() {
        return Err(Error::Usage(format!(
            "state has {} modes but the grid has {} axes",
            u.nmodes(),
            grid.dims()
        )));
    }
    let mut need_lo = vec![f64::INFINITY; grid.dims()];
    let mut need_hi = vec![f64::NEG_INFINITY; grid.dims()];
    for t in u.terms() {
        let (centre, sd) = t
            .envelope()
            .ok_or_else(|| Error::Domain("a term is not square integrable".into()))?;
        let k = coverage_sigmas(t.poly.max_degree_per_var());
        for d in 0..grid.dims() {
            need_lo[d] = need_lo[d].min(centre[d] - k * sd[d]);
            need_hi[d] = need_hi[d].max(centre[d] + k * sd[d]);
        }
    }
    let short: Vec<usize> = (0..grid.dims())
        .filter(|&d| need_lo[d] < grid.axes[d].lo || need_hi[d] > grid.axes[d].hi)
        .collect();
    if short.is_empty() {
        return Ok(());
    }
    let suggestion: Vec<String> = (0..grid.dims())
        .map(|d| {
            format!(
                "[{:.3}, {:.3}]",
                need_lo[d].min(grid.axes[d].lo).floor(),
                need_hi[d].max(grid.axes[d].hi).ceil()
            )
        })
        .collect();
    Err(Error::Domain(format!(
        "grid does not cover the state along axes {short:?}; use bounds {}",
        suggestion.join(" x ")
    )))
}

/// Pointwise values of `u` on the grid, row-major.
pub fn sample(u: &GaussPolyState, grid: &GridSpec) -> Result<Vec<Complex64>> {
    check_coverage(u, grid)?;
    Ok((0..grid.len())
        .into_par_iter()
        .map(|k| u.evaluate(&grid.point(k)))
        .collect())
}

/// Samples any function of the grid coordinates.
pub fn sample_fn<F>(f: F, grid: &GridSpec) -> Vec<Complex64>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    (0..grid.len()).into_par_iter().map(|k| f(&grid.point(k))).collect()
}

/// A trapezoidal integral with its half-resolution counterpart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub half_resolution: Option<Complex64>,
}

impl Quadrature {
    /// `|value − half_resolution|`, the self-consistency estimate.
    pub fn richardson_gap(&self) -> Option<f64> {
        self.half_resolution.map(|h| (self.value - h).norm())
    }
}

fn trapezoid(values: &[Complex64], grid: &GridSpec, stride: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let dims = grid.dims();
    let mut idx = vec![0usize; dims];
    for (k, v) in values.iter().enumerate() {
        let mut rem = k;
        for d in (0..dims).rev() {
            idx[d] = rem % grid.axes[d].points;
            rem /= grid.axes[d].points;
        }
        if idx.iter().any(|&i| i % stride != 0) {
            continue;
        }
        let mut w = 1.0;
        for (&i, axis) in idx.iter().zip(&grid.axes) {
            let last = (axis.points - 1) / stride * stride;
            if i == 0 || i == last {
                w *= 0.5;
            }
        }
        sum += v * w;
    }
    sum
}

/// Trapezoidal `∫ u* v` from samples on `grid`.
pub fn quad_inner(u: &[Complex64], v: &[Complex64], grid: &GridSpec) -> Result<Quadrature> {
    if u.len() != grid.len() || v.len() != grid.len() {
        return Err(Error::Usage(format!(
            "sample lengths {} and {} do not match the grid size {}",
            u.len(),
            v.len(),
            grid.len()
        )));
    }
    let prod: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| a.conj() * b).collect();
    let value = trapezoid(&prod, grid, 1) * grid.cell_volume();
    let half_resolution = grid.half().map(|h| trapezoid(&prod, grid, 2) * h.cell_volume());
    Ok(Quadrature { value, half_resolution })
}

/// Trapezoidal `∫ |u|²`.
pub fn quad_norm_sqr(u: &[Complex64], grid: &GridSpec) -> Result<f64> {
    Ok(quad_inner(u, u, grid)?.value.re)
}

/// Random one- or two-mode state with per-variable degree at most
/// `max_degree`, redrawn until `grid` covers it.
pub fn random_state<R: Rng + ?Sized>(
    rng: &mut R,
    modes: &[&str],
    max_degree: u16,
    grid: &GridSpec,
) -> Result<GaussPolyState> {
    let m = modes.len();
    if m == 0 || m > 2 || grid.dims() != m {
        return Err(Error::Usage(
            "random states have one or two modes matching the grid".into(),
        ));
    }
    for _ in 0..1000 {
        let nterms = rng.gen_range(1..=3);
        let mut terms = Vec::with_capacity(nterms);
        for _ in 0..nterms {
            let mut q = vec![Complex64::new(0.0, 0.0); m * m];
            for i in 0..m {
                q[i * m + i] = Complex64::new(rng.gen_range(0.8..2.0), rng.gen_range(-0.5..0.5));
            }
            if m == 2 {
                let off = Complex64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.3..0.3));
                q[1] = off;
                q[2] = off;
            }
            let l = (0..m)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let mut poly = Poly::zero(m);
            for _ in 0..rng.gen_range(1..=4) {
                let mut powers = [0u16; 3];
                for p in powers.iter_mut().take(m) {
                    *p = rng.gen_range(0..=max_degree);
                }
                let coef = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                poly.add_term(Monomial(powers), coef);
            }
            if poly.is_zero() {
                poly = Poly::one(m);
            }
            let c = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-3.0..3.0));
            terms.push(GaussTerm::new(poly, q, l, c)?);
        }
        let labels = modes.iter().map(|s| s.to_string()).collect();
        let state = GaussPolyState::new(labels, terms)?;
        if check_coverage(&state, grid).is_ok() {
            return Ok(state);
        }
    }
    Err(Error::Domain(
        "could not draw a random state covered by the grid".into(),
    ))
}

/// Reference wavefunctions written out from their closed forms.
pub mod reference {
    use super::*;

    fn ln_factorial(n: u32) -> f64 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    }

    /// `(πg)^{−1/4} e^{−(x − α√(2g))²/2g}`.
    pub fn squeezed_coherent(alpha: f64, g: f64, x: f64) -> f64 {
        let d = x - alpha * (2.0 * g).sqrt();
        (PI * g).powf(-0.25) * (-d * d / (2.0 * g)).exp()
    }

    /// `(πg)^{−1/4} e^{−x²/2g}`.
    pub fn squeezed_vacuum(g: f64, x: f64) -> f64 {
        squeezed_coherent(0.0, g, x)
    }

    /// Normalized `S(r)(|α⟩ ± |−α⟩)`, using `⟨α|−α⟩ = e^{−2α²}`.
    pub fn cat(alpha: f64, g: f64, parity: Parity, x: f64) -> f64 {
        let s = parity.sign();
        let norm = 1.0 / (2.0 + 2.0 * s * (-2.0 * alpha * alpha).exp()).sqrt();
        norm * (squeezed_coherent(alpha, g, x) + s * squeezed_coherent(-alpha, g, x))
    }

    /// `xⁿ e^{−x²/2} √(2^{2n} n!/(√π (2n)!))`.
    pub fn approx(n: u32, x: f64) -> f64 {
        let ln_norm = 0.5 * (2.0 * n as f64 * 2f64.ln() + ln_factorial(n) - 0.5 * PI.ln() - ln_factorial(2 * n));
        x.powi(n as i32) * (-x * x / 2.0).exp() * ln_norm.exp()
    }

    /// `𝒩_sig (a S|α⟩ + b S|−α⟩)`.
    pub fn signal(p: &SignalParams, x: f64) -> Complex64 {
        let g = p.g();
        let nsig = 1.0
            / (p.a.norm_sqr() + p.b.norm_sqr() + 2.0 * (-2.0 * p.alpha * p.alpha).exp() * (p.a * p.b.conj()).re).sqrt();
        (p.a * squeezed_coherent(p.alpha, g, x) + p.b * squeezed_coherent(-p.alpha, g, x)) * nsig
    }

    /// Normalized Hermite–Gauss function `⟨x|n⟩` via the three-term recurrence.
    pub fn number_state(n: usize, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = PI.powf(-0.25) * (-x * x / 2.0).exp();
        for k in 0..n {
            let next = (2.0 / (k as f64 + 1.0)).sqrt() * x * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// Resource fed into the first beam splitter of the teleportation circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleResource {
    /// Squeezed cat of amplitude `√2 α_sig`, squeezing as the signal.
    Ideal(Parity),
    /// `ψ_app(n)`.
    Approx(u32),
}

/// Output of [`quad_teleport`] on its `x` grid (unnormalized).
#[derive(Clone, Debug, PartialEq)]
pub struct TeleportSamples {
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl TeleportSamples {
    /// Rescaled to unit trapezoidal norm.
    pub fn normalized(&self, grid: &GridSpec) -> Result<TeleportSamples> {
        let n2 = quad_norm_sqr(&self.values, grid)?;
        if !(n2 > 0.0) {
            return Err(Error::Rejected("quadrature output has zero norm".into()));
        }
        let s = 1.0 / n2.sqrt();
        Ok(TeleportSamples {
            x: self.x.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        })
    }
}

/// Direct quadrature of
/// `ψ_out(x) = ∫ e^{iβx_s} ψ_vac(x/√2 − x_s/2) ψ_cat(x_s/2 + x/√2) ψ_sig(x_s/√2) dx_s`
/// for every `x` of `x_grid`, integrating `x_s` over `xs_grid`.
pub fn quad_teleport(
    signal: &SignalParams,
    resource: OracleResource,
    beta: f64,
    x_grid: &GridSpec,
    xs_grid: &GridSpec,
) -> Result<TeleportSamples> {
    signal.validate()?;
    if x_grid.dims() != 1 || xs_grid.dims() != 1 {
        return Err(Error::Usage("quad_teleport needs one-dimensional grids".into()));
    }
    let g = signal.g();
    let xs_axis = xs_grid.axes()[0];
    // ψ_sig(x_s/√2) has its envelope at ±2α√g with width √g
    let reach = 2.0 * signal.alpha * g.sqrt() + 9.0 * g.sqrt().max(1.0);
    if xs_axis.lo > -reach || xs_axis.hi < reach {
        return Err(Error::Domain(format!(
            "x_s grid [{}, {}] does not cover the integrand; use [{:.1}, {:.1}]",
            xs_axis.lo,
            xs_axis.hi,
            -reach.ceil(),
            reach.ceil()
        )));
    }
    let cat_alpha = std::f64::consts::SQRT_2 * signal.alpha;
    let cat = move |y: f64| match resource {
        OracleResource::Ideal(parity) => reference::cat(cat_alpha, g, parity, y),
        OracleResource::Approx(n) => reference::approx(n, y),
    };
    let xs = xs_axis.coords();
    let dxs = xs_axis.step();
    let sig: Vec<Complex64> = xs
        .iter()
        .map(|&s| reference::signal(signal, s / std::f64::consts::SQRT_2) * Complex64::from_polar(1.0, beta * s))
        .collect();
    let x = x_grid.axes()[0].coords();
    let values = x
        .par_iter()
        .map(|&xo| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &s) in xs.iter().enumerate() {
                let w = if k == 0 || k + 1 == xs.len() { 0.5 } else { 1.0 };
                let u = xo / std::f64::consts::SQRT_2;
                acc += sig[k] * (w * reference::squeezed_vacuum(g, u - s / 2.0) * cat(s / 2.0 + u));
            }
            acc * dxs
        })
        .collect();
    Ok(TeleportSamples { x, values })
}

/// Quadrature counterpart of the engine's two-component teleportation map.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadChannel {
    signal_gram: [[Complex64; 2]; 2],
    output_gram: [[Complex64; 2]; 2],
    cross_gram: [[Complex64; 2]; 2],
}

impl QuadChannel {
    pub fn new(
        signal_alpha: f64,
        r: f64,
        resource: OracleResource,
        beta: f64,
        x_grid: &GridSpec,
        xs_grid: &GridSpec,
    ) -> Result<Self> {
        let comps = [
            SignalParams::real(1.0, 0.0, signal_alpha, r)?,
            SignalParams::real(0.0, 1.0, signal_alpha, r)?,
        ];
        let mut sig = Vec::with_capacity(2);
        let mut out = Vec::with_capacity(2);
        for p in &comps {
            sig.push(
                x_grid.axes()[0]
                    .coords()
                    .iter()
                    .map(|&x| reference::signal(p, x))
                    .collect::<Vec<_>>(),
            );
            out.push(quad_teleport(p, resource, beta, x_grid, xs_grid)?.values);
        }
        let gram = |u: &[Vec<Complex64>], v: &[Vec<Complex64>]| -> Result<[[Complex64; 2]; 2]> {
            let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] = quad_inner(&u[i], &v[j], x_grid)?.value;
                }
            }
            Ok(m)
        };
        Ok(QuadChannel {
            signal_gram: gram(&sig, &sig)?,
            output_gram: gram(&out, &out)?,
            cross_gram: gram(&sig, &out)?,
        })
    }

    pub fn fidelity(&self, a: Complex64, b: Complex64) -> f64 {
        let c = [a, b];
        let form = |m: &[[Complex64; 2]; 2]| {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    s += c[i].conj() * m[i][j] * c[j];
                }
            }
            s
        };
        let ss = form(&self.signal_gram).re;
        let oo = form(&self.output_gram).re;
        if !(ss > 0.0) || !(oo > 0.0) {
            return 0.0;
        }
        form(&self.cross_gram).norm_sqr() / (ss * oo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_approx, make_ideal_squeezed_cat, make_signal, make_squeezed_vacuum, ApproxStateParams};

    fn grangier() -> (f64, f64) {
        (2.6f64.sqrt(), 0.4029)
    }

    #[test]
    fn vacuum_norm() {
        let grid = GridSpec::uniform(1, -8.0, 8.0, 1024).unwrap();
        let s = sample(&make_squeezed_vacuum(1.0).unwrap(), &grid).unwrap();
        assert!((quad_norm_sqr(&s, &grid).unwrap() - 1.0).abs() < 1e-8);
        let q = quad_inner(&s, &s, &grid).unwrap();
        assert!(q.richardson_gap().unwrap() < 1e-8);
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(Axis::new(1.0, 1.0, 100), Err(Error::Usage(_))));
        assert!(matches!(Axis::new(-1.0, 1.0, 63), Err(Error::Usage(_))));
        assert!(matches!(GridSpec::uniform(3, -1.0, 1.0, 1024), Err(Error::Capacity(_))));
        let g = GridSpec::default_for(2).unwrap();
        assert_eq!(g.len(), 1024 * 1024);
        assert_eq!(g.point(1), vec![-12.0, -12.0 + g.axes()[1].step()]);
    }

    #[test]
    fn coverage_is_enforced() {
        let cat = make_ideal_squeezed_cat(3.0, 0.0, Parity::Even).unwrap();
        let grid = GridSpec::uniform(1, -4.0, 4.0, 256).unwrap();
        match sample(&cat, &grid) {
            Err(Error::Domain(msg)) => assert!(msg.contains("use bounds")),
            other => panic!("expected a coverage error, got {other:?}"),
        }
    }

    #[test]
    fn approx_peaks_symmetric() {
        let grid = GridSpec::uniform(1, -10.0, 10.0, 2001).unwrap();
        let s = sample(&make_approx(ApproxStateParams::new(2).unwrap()).unwrap(), &grid).unwrap();
        let dens: Vec<f64> = s.iter().map(|v| v.norm_sqr()).collect();
        let argmax = |r: std::ops::Range<usize>| r.max_by(|&a, &b| dens[a].total_cmp(&dens[b])).unwrap();
        let left = argmax(0..1000);
        let right = argmax(1001..2001);
        assert_eq!(left + right, 2000);
    }

    #[test]
    fn signal_peak_separation() {
        let (alpha, r) = grangier();
        let p = SignalParams::real(1.0, 1.0, alpha, r).unwrap();
        let grid = GridSpec::uniform(1, -8.0, 8.0, 16001).unwrap();
        let s = sample(&make_signal(&p).unwrap(), &grid).unwrap();
        let dens: Vec<f64> = s.iter().map(|v| v.norm_sqr()).collect();
        let right = (8000..16001).max_by(|&a, &b| dens[a].total_cmp(&dens[b])).unwrap();
        let left = (0..8000).max_by(|&a, &b| dens[a].total_cmp(&dens[b])).unwrap();
        let sep = grid.point(right)[0] - grid.point(left)[0];
        let g = p.g();
        // the two lobes barely overlap, so the maxima sit at ±α√(2g)
        assert!((sep - 2.0 * alpha * (2.0 * g).sqrt()).abs() < 2e-3, "sep = {sep}");
    }

    #[test]
    fn approx_vs_squeezed_cat() {
        let (alpha, r) = grangier();
        let grid = GridSpec::default_for(1).unwrap();
        let u = sample(&make_approx(ApproxStateParams::new(2).unwrap()).unwrap(), &grid).unwrap();
        let v = sample(&make_ideal_squeezed_cat(alpha, r, Parity::Even).unwrap(), &grid).unwrap();
        let f = quad_inner(&u, &v, &grid).unwrap().value.norm_sqr();
        assert!((f - 0.99).abs() < 0.005, "F = {f}");
    }

    #[test]
    fn reference_functions_match_engine() {
        let (alpha, r) = grangier();
        let g = crate::states::squeezing_g(r);
        let cat = make_ideal_squeezed_cat(alpha, r, Parity::Odd).unwrap();
        let app = make_approx(ApproxStateParams::new(3).unwrap()).unwrap();
        let p = SignalParams::new(Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.9), 1.1, 0.2).unwrap();
        let sig = make_signal(&p).unwrap();
        let h5 = crate::states::hermite_gauss(5).unwrap();
        for i in 0..40 {
            let x = -5.0 + 0.25 * i as f64;
            assert!((cat.evaluate(&[x]) - reference::cat(alpha, g, Parity::Odd, x)).norm() < 1e-13);
            assert!((app.evaluate(&[x]) - reference::approx(3, x)).norm() < 1e-13);
            assert!((sig.evaluate(&[x]) - reference::signal(&p, x)).norm() < 1e-13);
            assert!((h5.evaluate(&[x]) - reference::number_state(5, x)).norm() < 1e-12);
        }
    }

    #[test]
    fn vacuum_signal_through_vacuum_resource_is_gaussian() {
        let p = SignalParams::real(1.0, 0.0, 1e-9, 0.0).unwrap();
        let x_grid = GridSpec::uniform(1, -8.0, 8.0, 161).unwrap();
        let xs_grid = GridSpec::default_for(1).unwrap();
        let out = quad_teleport(&p, OracleResource::Approx(0), 0.0, &x_grid, &xs_grid).unwrap();
        let out = out.normalized(&x_grid).unwrap();
        let logs: Vec<f64> = out.values.iter().map(|v| v.norm().ln()).collect();
        // second differences of ln|ψ| are constant for a Gaussian
        let h = x_grid.axes()[0].step();
        let curv: Vec<f64> = logs.windows(3).map(|w| (w[0] - 2.0 * w[1] + w[2]) / (h * h)).collect();
        for c in &curv {
            assert!((c - curv[0]).abs() < 1e-6 * curv[0].abs());
        }
        assert!(out.values.iter().all(|v| v.im.abs() < 1e-14));
    }

    #[test]
    fn quad_channel_matches_engine() {
        use crate::protocols::{Resource, TeleportSetup};
        let setup = TeleportSetup::new(Resource::approx(2).unwrap(), 2.6f64.sqrt(), 0.4029).unwrap();
        let x_grid = GridSpec::uniform(1, -10.0, 10.0, 1001).unwrap();
        let quad = QuadChannel::new(
            setup.signal_alpha(),
            setup.r,
            OracleResource::Approx(2),
            0.0,
            &x_grid,
            &GridSpec::default_for(1).unwrap(),
        )
        .unwrap();
        let engine = setup.channel().unwrap();
        for (a, b) in [(1.0, 1.0), (1.0, -1.0), (0.3, 0.8)] {
            let (a, b) = (Complex64::new(a, 0.0), Complex64::new(b, 0.2));
            assert!((quad.fidelity(a, b) - engine.fidelity(a, b)).abs() < 1e-10);
        }
    }

    #[test]
    fn half_resolution_is_consistent() {
        let grid = GridSpec::default_for(1).unwrap();
        let (alpha, r) = grangier();
        let u = sample(&make_ideal_squeezed_cat(alpha, r, Parity::Even).unwrap(), &grid).unwrap();
        let q = quad_inner(&u, &u, &grid).unwrap();
        assert!(q.richardson_gap().unwrap() < 1e-12);
    }
}
