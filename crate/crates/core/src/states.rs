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

//! Constructors for the named states: squeezed coherent states, the
//! qubit-like signal `a S(r)|α⟩ + b S(r)|−α⟩`, even/odd squeezed cats, the
//! two-mode entangled resource, the approximate state `xⁿ e^{−x²/2}` and
//! Hermite–Gauss number states. All normalizations are recomputed from
//! inner products.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gausspoly::{real_poly, GaussPolyState, GaussTerm, Poly};
use crate::optimize::NelderMead;

/// Mode label used by single-mode constructors.
pub const DEFAULT_MODE: &str = "x";

/// Largest supported excitation number of the approximate state.
pub const MAX_APPROX_N: u32 = 32;

/// `g = e^{-2r}`, the x-quadrature variance scale of `S(r)`.
pub fn squeezing_g(r: f64) -> f64 {
    (-2.0 * r).exp()
}

/// `r = -ln(g)/2`.
pub fn squeezing_r(g: f64) -> f64 {
    -0.5 * g.ln()
}

/// Parity of a cat state `|α⟩ ± |−α⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn of(n: u32) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Signal `𝒩 S(r)(a|α⟩ + b|−α⟩)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignalParams {
    pub a: Complex64,
    pub b: Complex64,
    pub alpha: f64,
    pub r: f64,
}

impl SignalParams {
    pub fn new(a: Complex64, b: Complex64, alpha: f64, r: f64) -> Result<Self> {
        let p = SignalParams { a, b, alpha, r };
        p.validate()?;
        Ok(p)
    }

    /// Real-amplitude convenience constructor.
    pub fn real(a: f64, b: f64, alpha: f64, r: f64) -> Result<Self> {
        SignalParams::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), alpha, r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.norm() == 0.0 && self.b.norm() == 0.0 {
            return Err(Error::Usage("signal amplitudes (a, b) must not both vanish".into()));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() || !self.r.is_finite() {
            return Err(Error::Usage(format!(
                "signal needs finite alpha > 0 and finite r, got alpha = {}, r = {}",
                self.alpha, self.r
            )));
        }
        if !self.printed_normalization().is_finite() {
            return Err(Error::Usage("signal normalization diverges".into()));
        }
        Ok(())
    }

    pub fn g(&self) -> f64 {
        squeezing_g(self.r)
    }

    /// `[|a|² + |b|² + 2 e^{−2α²} Re(a b*)]^{−1/2}`.
    pub fn printed_normalization(&self) -> f64 {
        let overlap = (-2.0 * self.alpha * self.alpha).exp();
        let s = self.a.norm_sqr() + self.b.norm_sqr() + 2.0 * overlap * (self.a * self.b.conj()).re;
        1.0 / s.sqrt()
    }

    /// Closed-form `⟨ψ_sig|ψ_sig^S⟩` where `ψ^S` swaps `|α⟩ ↔ |−α⟩`.
    pub fn swapped_overlap_formula(&self) -> f64 {
        let overlap = (-2.0 * self.alpha * self.alpha).exp();
        let re_ab = (self.a * self.b.conj()).re;
        let aa = self.a.norm_sqr() + self.b.norm_sqr();
        (aa * overlap + 2.0 * re_ab) / (aa + 2.0 * overlap * re_ab)
    }

    /// The signal with `|α⟩ ↔ |−α⟩` swapped.
    pub fn swapped(&self) -> SignalParams {
        SignalParams {
            a: self.b,
            b: self.a,
            ..*self
        }
    }
}

/// Approximate state `ψ_app(x) ∝ xⁿ e^{−x²/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxStateParams {
    pub n: u32,
}

impl ApproxStateParams {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_APPROX_N {
            return Err(Error::Capacity(format!(
                "approximate state excitation n = {n} exceeds {MAX_APPROX_N}"
            )));
        }
        Ok(ApproxStateParams { n })
    }
}

/// Unnormalized-coefficient term `coef · (πg)^{-1/4} exp(-(x − α√(2g))²/2g)`,
/// i.e. `coef · S(r)|α⟩`.
pub(crate) fn squeezed_coherent_term(alpha: f64, g: f64, coef: Complex64) -> GaussTerm {
    GaussTerm::univariate(
        Poly::constant(1, coef),
        Complex64::new(1.0 / g, 0.0),
        Complex64::new(alpha * (2.0 / g).sqrt(), 0.0),
        Complex64::new(-alpha * alpha - 0.25 * (PI * g).ln(), 0.0),
    )
}

fn check_g(g: f64) -> Result<()> {
    if g > 0.0 && g.is_finite() {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "squeezing g must be positive and finite, got {g}"
        )))
    }
}

/// `S(r)|α⟩` for real `α`.
pub fn make_squeezed_coherent(alpha: f64, r: f64) -> Result<GaussPolyState> {
    let g = squeezing_g(r);
    check_g(g)?;
    GaussPolyState::single_mode(
        DEFAULT_MODE,
        vec![squeezed_coherent_term(alpha, g, Complex64::new(1.0, 0.0))],
    )
}

/// `ψ_vac(x) = (πg)^{-1/4} e^{−x²/2g}`.
pub fn make_squeezed_vacuum(g: f64) -> Result<GaussPolyState> {
    check_g(g)?;
    GaussPolyState::single_mode(
        DEFAULT_MODE,
        vec![squeezed_coherent_term(0.0, g, Complex64::new(1.0, 0.0))],
    )
}

/// Normalized signal state.
pub fn make_signal(p: &SignalParams) -> Result<GaussPolyState> {
    p.validate()?;
    let g = p.g();
    check_g(g)?;
    let mut terms = Vec::with_capacity(2);
    if p.a.norm() > 0.0 {
        terms.push(squeezed_coherent_term(p.alpha, g, p.a));
    }
    if p.b.norm() > 0.0 {
        terms.push(squeezed_coherent_term(-p.alpha, g, p.b));
    }
    Ok(GaussPolyState::single_mode(DEFAULT_MODE, terms)?.normalized()?.0)
}

/// `√(2^{2n} n! / (√π (2n)!))`, the printed normalization of `xⁿe^{−x²/2}`.
pub fn approx_normalization(n: u32) -> f64 {
    let ln_fact = |k: u32| (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    let ln = 2.0 * n as f64 * 2f64.ln() + ln_fact(n) - 0.5 * PI.ln() - ln_fact(2 * n);
    (0.5 * ln).exp()
}

/// `ψ_app(x) = xⁿ e^{−x²/2} √(2^{2n} n!/(√π (2n)!))`.
pub fn make_approx(p: ApproxStateParams) -> Result<GaussPolyState> {
    let p = ApproxStateParams::new(p.n)?;
    let poly = Poly::monomial(1, 0, p.n as u16, Complex64::new(approx_normalization(p.n), 0.0));
    let term = GaussTerm::univariate(
        poly,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    );
    GaussPolyState::single_mode(DEFAULT_MODE, vec![term])
}

/// Normalized `S(r)(|α⟩ ± |−α⟩)`.
pub fn make_ideal_squeezed_cat(alpha: f64, r: f64, parity: Parity) -> Result<GaussPolyState> {
    if parity == Parity::Odd && alpha == 0.0 {
        return Err(Error::Domain("the odd cat state is undefined at alpha = 0".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::Usage(format!("alpha must be finite, got {alpha}")));
    }
    let g = squeezing_g(r);
    check_g(g)?;
    let one = Complex64::new(1.0, 0.0);
    let terms = vec![
        squeezed_coherent_term(alpha, g, one),
        squeezed_coherent_term(-alpha, g, one * parity.sign()),
    ];
    Ok(GaussPolyState::single_mode(DEFAULT_MODE, terms)?.normalized()?.0)
}

/// Mode labels of the two-mode entangled resource.
pub const RESOURCE_MODES: [&str; 2] = ["1", "2"];

/// Normalized `S₁(r)S₂(r)(|α,α⟩ ± |−α,−α⟩)` on modes `"1"`, `"2"`.
pub fn make_entangled_resource(alpha: f64, r: f64, parity: Parity) -> Result<GaussPolyState> {
    if parity == Parity::Odd && alpha == 0.0 {
        return Err(Error::Domain(
            "the odd entangled resource is undefined at alpha = 0".into(),
        ));
    }
    let g = squeezing_g(r);
    check_g(g)?;
    let one = Complex64::new(1.0, 0.0);
    let plus = squeezed_coherent_term(alpha, g, one).tensor(&squeezed_coherent_term(alpha, g, one));
    let minus = squeezed_coherent_term(-alpha, g, one * parity.sign()).tensor(&squeezed_coherent_term(-alpha, g, one));
    let modes = RESOURCE_MODES.iter().map(|s| s.to_string()).collect();
    Ok(GaussPolyState::new(modes, vec![plus, minus])?.normalized()?.0)
}

/// Normalization of the resource as printed next to its definition,
/// `[2 + 2 exp(−α²/2)]^{−1/2}`.
pub fn printed_entangled_normalization(alpha: f64) -> f64 {
    1.0 / (2.0 + 2.0 * (-alpha * alpha / 2.0).exp()).sqrt()
}

/// Normalization implied by `⟨α,α|−α,−α⟩ = e^{−4α²}`: `[2 ± 2e^{−4α²}]^{−1/2}`.
pub fn entangled_normalization(alpha: f64, parity: Parity) -> f64 {
    1.0 / (2.0 + parity.sign() * 2.0 * (-4.0 * alpha * alpha).exp()).sqrt()
}

/// Hermite polynomial `H_n` coefficients (physicists'), ascending.
pub fn hermite_coefficients(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Number state `|n⟩` as `(2ⁿ n! √π)^{−1/2} H_n(x) e^{−x²/2}`.
pub fn hermite_gauss(n: usize) -> Result<GaussPolyState> {
    let ln_norm = -0.5 * (n as f64 * 2f64.ln() + (1..=n).map(|i| (i as f64).ln()).sum::<f64>() + 0.5 * PI.ln());
    let scale = ln_norm.exp();
    let coefs: Vec<f64> = hermite_coefficients(n).iter().map(|c| c * scale).collect();
    let term = GaussTerm::univariate(
        real_poly(&coefs),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    );
    GaussPolyState::single_mode(DEFAULT_MODE, vec![term])
}

/// Best squeezed-cat description of `ψ_app(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveParams {
    pub alpha: f64,
    pub g: f64,
    pub r: f64,
    pub parity: Parity,
    pub fidelity: f64,
    pub converged: bool,
    pub evaluations: usize,
}

const FIT_ALPHA: (f64, f64) = (0.05, 3.0);
const FIT_G: (f64, f64) = (0.01, 1.0);

/// Fidelity between `ψ_app(n)` and the squeezed cat `(α, g)` of matching
/// parity.
pub fn approx_cat_fidelity(n: u32, alpha: f64, g: f64) -> Result<f64> {
    let app = make_approx(ApproxStateParams::new(n)?)?;
    let cat = make_ideal_squeezed_cat(alpha, squeezing_r(g), Parity::of(n))?;
    Ok(app.inner_product(&cat)?.norm_sqr())
}

/// Maximises the fidelity between `ψ_app(n)` and a squeezed cat over
/// `(α, g) ∈ [0.05, 3] × [0.01, 1]`: a coarse grid picks five starts, each
/// refined by Nelder–Mead. Non-convergence is reported through
/// [`EffectiveParams::converged`] with the best point found.
pub fn fit_effective_params(n: u32) -> Result<EffectiveParams> {
    if n == 0 {
        return Err(Error::Usage("fit_effective_params needs n >= 1".into()));
    }
    let app = make_approx(ApproxStateParams::new(n)?)?;
    let parity = Parity::of(n);
    let objective = |x: &[f64]| -> f64 {
        make_ideal_squeezed_cat(x[0], squeezing_r(x[1]), parity)
            .and_then(|cat| app.inner_product(&cat))
            .map(|ov| -ov.norm_sqr())
            .unwrap_or(f64::INFINITY)
    };

    let steps = 12;
    let mut grid: Vec<(f64, [f64; 2])> = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let alpha = FIT_ALPHA.0 + (FIT_ALPHA.1 - FIT_ALPHA.0) * (i as f64 + 0.5) / steps as f64;
            let g = FIT_G.0 + (FIT_G.1 - FIT_G.0) * (j as f64 + 0.5) / steps as f64;
            grid.push((objective(&[alpha, g]), [alpha, g]));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));

    let nm = NelderMead::default();
    let lower = [FIT_ALPHA.0, FIT_G.0];
    let upper = [FIT_ALPHA.1, FIT_G.1];
    let runs: Vec<_> = grid
        .iter()
        .take(5)
        .map(|(_, start)| nm.minimize(objective, start, &lower, &upper))
        .collect();
    let evaluations = grid.len() + runs.iter().map(|m| m.evaluations).sum::<usize>();
    let best = runs
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("five starts");
    Ok(EffectiveParams {
        alpha: best.x[0],
        g: best.x[1],
        r: squeezing_r(best.x[1]),
        parity,
        fidelity: -best.value,
        converged: best.converged,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRANGIER_R: f64 = 0.4029;

    fn grangier_alpha() -> f64 {
        2.6f64.sqrt()
    }

    #[test]
    fn constructors_are_normalized() {
        let states = [
            make_squeezed_coherent(1.2, 0.3).unwrap(),
            make_squeezed_vacuum(0.4466).unwrap(),
            make_signal(&SignalParams::new(Complex64::new(0.3, 0.1), Complex64::new(-0.7, 0.5), 0.9, 0.2).unwrap())
                .unwrap(),
            make_approx(ApproxStateParams::new(5).unwrap()).unwrap(),
            make_ideal_squeezed_cat(1.1, 0.4, Parity::Odd).unwrap(),
            make_entangled_resource(0.8, 0.4, Parity::Even).unwrap(),
            hermite_gauss(7).unwrap(),
        ];
        for s in &states {
            assert!((s.norm_sqr().unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn approx_prefactor_normalizes_exactly() {
        for n in 0..=3 {
            let u = make_approx(ApproxStateParams::new(n).unwrap()).unwrap();
            assert!((u.norm_sqr().unwrap() - 1.0).abs() < 1e-12, "n = {n}");
        }
        let vac = make_squeezed_vacuum(1.0).unwrap();
        let app0 = make_approx(ApproxStateParams::new(0).unwrap()).unwrap();
        assert!((vac.fidelity(&app0).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(ApproxStateParams::new(33), Err(Error::Capacity(_))));
    }

    #[test]
    fn coherent_overlap() {
        // |⟨α|−α⟩|² = e^{−4α²}
        let a = make_squeezed_coherent(1.0, 0.0).unwrap();
        let b = make_squeezed_coherent(-1.0, 0.0).unwrap();
        let f = a.inner_product(&b).unwrap().norm_sqr();
        assert!((f - (-4.0f64).exp()).abs() < 1e-15);
        assert!((f - 0.018316).abs() < 1e-6);
    }

    #[test]
    fn hermite_gauss_orthogonality() {
        let h0 = hermite_gauss(0).unwrap();
        let h2 = hermite_gauss(2).unwrap();
        assert!(h0.inner_product(&h2).unwrap().norm() < 1e-15);
        assert_eq!(hermite_coefficients(3), vec![0.0, -12.0, 0.0, 8.0]);
    }

    #[test]
    fn signal_special_cases() {
        let alpha = grangier_alpha();
        let sig = make_signal(&SignalParams::real(1.0, 1.0, alpha, GRANGIER_R).unwrap()).unwrap();
        let cat = make_ideal_squeezed_cat(alpha, GRANGIER_R, Parity::Even).unwrap();
        assert!((sig.fidelity(&cat).unwrap() - 1.0).abs() < 1e-10);

        let coh = make_signal(&SignalParams::real(1.0, 0.0, 0.7, 0.0).unwrap()).unwrap();
        let direct = make_squeezed_coherent(0.7, 0.0).unwrap();
        assert!((coh.fidelity(&direct).unwrap() - 1.0).abs() < 1e-14);

        assert!(matches!(SignalParams::real(0.0, 0.0, 1.0, 0.0), Err(Error::Usage(_))));
    }

    #[test]
    fn swapped_overlap_matches_formula() {
        let p = SignalParams::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), 1.0, 0.3).unwrap();
        let sig = make_signal(&p).unwrap();
        let swapped = make_signal(&p.swapped()).unwrap();
        let ov = sig.inner_product(&swapped).unwrap();
        assert!((ov.re - p.swapped_overlap_formula()).abs() < 1e-10);
        assert!(ov.im.abs() < 1e-10);

        let p = SignalParams::real(0.8, -0.3, 0.6, 0.1).unwrap();
        let ov = make_signal(&p)
            .unwrap()
            .inner_product(&make_signal(&p.swapped()).unwrap())
            .unwrap();
        assert!((ov.re - p.swapped_overlap_formula()).abs() < 1e-10);
    }

    #[test]
    fn cat_parities() {
        let even = make_ideal_squeezed_cat(1.3, 0.2, Parity::Even).unwrap();
        let odd = make_ideal_squeezed_cat(1.3, 0.2, Parity::Odd).unwrap();
        assert!(even.inner_product(&odd).unwrap().norm() < 1e-14);
        assert!(matches!(
            make_ideal_squeezed_cat(0.0, 0.2, Parity::Odd),
            Err(Error::Domain(_))
        ));
        let tiny = make_ideal_squeezed_cat(1e-4, 0.2, Parity::Even).unwrap();
        let vac = make_squeezed_vacuum(squeezing_g(0.2)).unwrap();
        assert!((tiny.fidelity(&vac).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn entangled_resource_normalization() {
        let alpha = 1.0;
        let res = make_entangled_resource(alpha, 0.0, Parity::Even).unwrap();
        // unnormalized components, overlap e^{-4α²}
        let one = Complex64::new(1.0, 0.0);
        let g = 1.0;
        let plus = squeezed_coherent_term(alpha, g, one).tensor(&squeezed_coherent_term(alpha, g, one));
        let minus = squeezed_coherent_term(-alpha, g, one).tensor(&squeezed_coherent_term(-alpha, g, one));
        let modes = RESOURCE_MODES.iter().map(|s| s.to_string()).collect();
        let raw = GaussPolyState::new(modes, vec![plus, minus]).unwrap();
        let n_recomputed = 1.0 / raw.norm_sqr().unwrap().sqrt();
        assert!((n_recomputed - entangled_normalization(alpha, Parity::Even)).abs() < 1e-12);
        assert!((n_recomputed - (2.0 + 2.0 * (-4.0f64).exp()).powf(-0.5)).abs() < 1e-12);
        assert!((printed_entangled_normalization(alpha) - n_recomputed).abs() > 0.05);
        assert!((res.fidelity(&raw).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entangled_resource_from_beam_splitter() {
        for parity in [Parity::Even, Parity::Odd] {
            let (alpha, r) = (0.9, 0.35);
            let cat = make_ideal_squeezed_cat(2f64.sqrt() * alpha, r, parity)
                .unwrap()
                .relabel(&["1"])
                .unwrap();
            let vac = make_squeezed_vacuum(squeezing_g(r)).unwrap().relabel(&["2"]).unwrap();
            let mixed = cat.multiply(&vac).unwrap().beam_splitter("2", "1").unwrap();
            let direct = make_entangled_resource(alpha, r, parity).unwrap();
            assert!((mixed.fidelity(&direct).unwrap() - 1.0).abs() < 1e-10);
        }
        let low = make_entangled_resource(1e-5, 0.3, Parity::Even).unwrap();
        let g = squeezing_g(0.3);
        let vv = make_squeezed_vacuum(g)
            .unwrap()
            .relabel(&["1"])
            .unwrap()
            .multiply(&make_squeezed_vacuum(g).unwrap().relabel(&["2"]).unwrap())
            .unwrap();
        assert!((low.fidelity(&vv).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn approx_two_matches_grangier_cat() {
        let app = make_approx(ApproxStateParams::new(2).unwrap()).unwrap();
        let cat = make_ideal_squeezed_cat(grangier_alpha(), GRANGIER_R, Parity::Even).unwrap();
        let f = app.fidelity(&cat).unwrap();
        assert!((f - 0.99).abs() < 0.005, "F = {f}");
    }

    #[test]
    fn squeezed_vacuum_x_variance() {
        // ⟨x²⟩ = g/2: compare against the Gaussian second moment of |ψ|²
        let g = 0.4466;
        let v = make_squeezed_vacuum(g).unwrap();
        let x2 = Poly::monomial(1, 0, 2, Complex64::new(1.0, 0.0));
        let xv = GaussPolyState::single_mode(
            DEFAULT_MODE,
            v.terms()
                .iter()
                .map(|t| GaussTerm {
                    poly: t.poly.mul(&x2),
                    ..t.clone()
                })
                .collect(),
        )
        .unwrap();
        let var = v.inner_product(&xv).unwrap().re;
        assert!((var - g / 2.0).abs() < 1e-14);
        assert!(
            (v.condition_x(DEFAULT_MODE, 0.0).unwrap().as_scalar().unwrap().re - (PI * g).powf(-0.25)).abs() < 1e-14
        );
    }

    #[test]
    fn fit_recovers_grangier_parameters() {
        let fit = fit_effective_params(2).unwrap();
        assert!(fit.converged);
        assert!(
            (fit.alpha * fit.alpha - 2.6).abs() < 0.1,
            "alpha² = {}",
            fit.alpha * fit.alpha
        );
        assert!((fit.r - 0.40).abs() < 0.02, "r = {}", fit.r);
        assert!((fit.fidelity - 0.99).abs() < 0.005);
    }
}
