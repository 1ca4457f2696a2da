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

//! Truncated Fock-basis vectors and truncation fidelities.
//!
//! Squeezed states never enter as Fock-space operators; their number-state
//! amplitudes are extracted from the Gauss-polynomial wavefunction with the
//! ladder operator, `⟨n|ψ⟩ = ⟨0|aⁿ|ψ⟩/√n!`, `a = (x + d/dx)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gausspoly::{GaussPolyState, GaussTerm, Poly};
use crate::states::{hermite_gauss, make_ideal_squeezed_cat, make_squeezed_vacuum, squeezing_g, Parity};

/// Default truncation dimension.
pub const DEFAULT_DIM: usize = 40;

const NORM_SLACK: f64 = 1e-10;

/// Amplitudes `⟨n|ψ⟩` for `n = 0..dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Usage("a Fock vector needs dim >= 1".into()));
        }
        let v = FockVector { amps };
        if v.norm_sqr() > 1.0 + NORM_SLACK {
            return Err(Error::Usage(format!(
                "Fock amplitudes carry squared norm {} > 1",
                v.norm_sqr()
            )));
        }
        Ok(v)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized_from(amps: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !(n2 > 0.0) {
            return Err(Error::Domain("cannot normalize a zero Fock vector".into()));
        }
        let s = 1.0 / n2.sqrt();
        FockVector::new(amps.into_iter().map(|a| a * s).collect())
    }

    /// `|n⟩` in a space of dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Usage(format!("index {n} outside dimension {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[n] = Complex64::new(1.0, 0.0);
        FockVector::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability outside the truncated space, `1 − Σ|amps|²`.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.norm_sqr()).max(0.0)
    }

    pub fn normalize(&self) -> Result<Self> {
        FockVector::normalized_from(self.amps.clone())
    }
}

/// `ln n!` for `n = 0..=nmax`, accumulated as sums of logarithms.
fn ln_factorials(nmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=nmax {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::Usage("dim must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `|α⟩` truncated: `amps_n = e^{−α²/2} αⁿ/√n!`.
pub fn coherent_fock(alpha: f64, dim: usize) -> Result<FockVector> {
    check_dim(dim)?;
    let lf = ln_factorials(dim);
    let amps = (0..dim)
        .map(|n| {
            if n == 0 {
                return Complex64::new((-alpha * alpha / 2.0).exp(), 0.0);
            }
            if alpha == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let mag = (-alpha * alpha / 2.0 + n as f64 * alpha.abs().ln() - 0.5 * lf[n]).exp();
            let sign = if alpha < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            Complex64::new(sign * mag, 0.0)
        })
        .collect();
    FockVector::new(amps)
}

/// Even cat `𝒩(|α⟩ + |−α⟩)`: `c_n = αⁿ/√(n! cosh α²)` for even `n`, zero
/// for odd `n`. Not renormalized after truncation.
pub fn even_cat_fock(alpha: f64, dim: usize) -> Result<FockVector> {
    check_dim(dim)?;
    let lf = ln_factorials(dim);
    let a2 = alpha * alpha;
    // ln cosh(α²) without overflow
    let ln_cosh = a2 + (0.5 * (1.0 + (-2.0 * a2).exp())).ln();
    let amps = (0..dim)
        .map(|n| {
            if n % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else if n == 0 {
                Complex64::new((-0.5 * ln_cosh).exp(), 0.0)
            } else if alpha == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                let ln = n as f64 * alpha.abs().ln() - 0.5 * lf[n] - 0.5 * ln_cosh;
                Complex64::new(ln.exp(), 0.0)
            }
        })
        .collect();
    FockVector::new(amps)
}

/// `a·t = [((1 − q) x + l) P + P'] / √2 · e^{…}` for a single-mode term.
fn annihilate(t: &GaussTerm) -> GaussTerm {
    let q = t.q[0];
    let l = t.l[0];
    let lin = Poly::linear(1, l, &[Complex64::new(1.0, 0.0) - q]);
    let mut poly = lin.mul(&t.poly);
    poly.add_assign(&t.poly.derivative(0));
    GaussTerm {
        poly: poly.scale(Complex64::new(FRAC_1_SQRT_2, 0.0)),
        ..t.clone()
    }
}

/// `⟨n|u⟩` for `n = 0..dim` of a single-mode state.
pub fn fock_from_wavefunction(u: &GaussPolyState, dim: usize) -> Result<FockVector> {
    check_dim(dim)?;
    if u.nmodes() != 1 {
        return Err(Error::Usage(format!(
            "fock_from_wavefunction needs a single-mode state, got modes {:?}",
            u.modes()
        )));
    }
    let mode = u.modes()[0].clone();
    let vacuum = make_squeezed_vacuum(1.0)?.relabel(&[mode.as_str()])?;
    let mut terms: Vec<GaussTerm> = u.terms().to_vec();
    let mut amps = Vec::with_capacity(dim);
    for n in 0..dim {
        if n > 0 {
            let s = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
            terms = terms
                .iter()
                .map(|t| {
                    let mut next = annihilate(t);
                    next.poly = next.poly.scale(s);
                    next
                })
                .collect();
        }
        let f = GaussPolyState::new(vec![mode.clone()], terms.clone()).and_then(|s| s.with_degree_cap(u16::MAX))?;
        amps.push(vacuum.inner_product(&f)?);
    }
    FockVector::new(amps)
}

/// `Σ_n amps_n |n⟩` as a wavefunction.
pub fn reconstruct(v: &FockVector) -> Result<GaussPolyState> {
    let mut out: Option<GaussPolyState> = None;
    for (n, a) in v.amps().iter().enumerate() {
        if a.norm() == 0.0 {
            continue;
        }
        let hn = hermite_gauss(n)?.scale(*a);
        out = Some(match out {
            None => hn,
            Some(acc) => acc.add(&hn)?,
        });
    }
    out.ok_or_else(|| Error::Domain("cannot reconstruct a zero Fock vector".into()))
}

/// Probability of `target` inside the span of `kept`, the best fidelity any
/// state supported on `kept` can reach.
pub fn truncation_fidelity(target: &FockVector, kept: &[usize]) -> Result<f64> {
    let mut seen = Vec::with_capacity(kept.len());
    let mut total = 0.0;
    for &i in kept {
        if i >= target.dim() {
            return Err(Error::Usage(format!("index {i} outside dimension {}", target.dim())));
        }
        if !seen.contains(&i) {
            seen.push(i);
            total += target.amps[i].norm_sqr();
        }
    }
    Ok(total)
}

/// `(α⁴ + 2) / (2 cosh α²)`, the {0, 2} truncation fidelity of the even cat.
pub fn cat_trunc02_formula(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    (a2 * a2 + 2.0) / (2.0 * a2.cosh())
}

/// `⟨Ψ_s|0⟩² + ⟨Ψ_s|2⟩²` for the even squeezed cat, from its wavefunction.
pub fn squeezed_cat_trunc02_fidelity(alpha: f64, r: f64) -> Result<f64> {
    let state = if alpha == 0.0 {
        make_squeezed_vacuum(squeezing_g(r))?
    } else {
        make_ideal_squeezed_cat(alpha, r, Parity::Even)?
    };
    let v = fock_from_wavefunction(&state, 3)?;
    truncation_fidelity(&v, &[0, 2])
}

/// The printed closed form for the squeezed-cat {0,2} fidelity, with its
/// parentheses balanced:
/// `2√(2g) / ([1 + e^{−2α²}](1+g)⁵) · e^{−2gα²/(1+g)} · [2(1+g)⁴ + (4gα² − 1 + g²)²]`.
///
/// This evaluates to exactly `√2` times [`squeezed_cat_trunc02_fidelity`].
pub fn printed_squeezed_trunc02(alpha: f64, r: f64) -> f64 {
    let g = squeezing_g(r);
    let a2 = alpha * alpha;
    let pre = 2.0 * (2.0 * g).sqrt() / ((1.0 + (-2.0 * a2).exp()) * (1.0 + g).powi(5));
    pre * (-2.0 * g * a2 / (1.0 + g)).exp() * (2.0 * (1.0 + g).powi(4) + (4.0 * g * a2 - 1.0 + g * g).powi(2))
}

/// `|⟨u|v⟩|²`.
pub fn fidelity(u: &FockVector, v: &FockVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::Usage(format!("dimension mismatch: {} vs {}", u.dim(), v.dim())));
    }
    let ov: Complex64 = u.amps.iter().zip(&v.amps).map(|(a, b)| a.conj() * b).sum();
    Ok(ov.norm_sqr())
}
