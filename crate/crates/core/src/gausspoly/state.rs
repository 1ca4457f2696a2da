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

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::poly::{Poly, MAX_VARS};
use super::term::GaussTerm;
use crate::error::{Error, Result};

/// Default cap on the polynomial degree in any single variable.
pub const DEFAULT_DEGREE_CAP: u16 = 64;

/// Relative threshold below which polynomial coefficients are dropped.
const PRUNE_TOL: f64 = 1e-14;
/// Tolerance used to decide that two terms share `(Q, L)`.
const MERGE_TOL: f64 = 1e-13;

/// A wavefunction `Σ_t P_t(x) exp(-½ xᵀQ_t x + L_tᵀx + c_t)` over an ordered
/// set of labelled modes (quadratures `x = (a + a†)/√2`).
///
/// A state with no modes is a plain complex number; conditioning or
/// projecting the last remaining mode produces one.
#[derive(Clone, Debug)]
pub struct GaussPolyState {
    modes: Vec<String>,
    terms: Vec<GaussTerm>,
    degree_cap: u16,
}

impl GaussPolyState {
    pub fn new(modes: Vec<String>, terms: Vec<GaussTerm>) -> Result<Self> {
        if modes.len() > MAX_VARS {
            return Err(Error::Usage(format!(
                "at most {MAX_VARS} modes are supported, got {}",
                modes.len()
            )));
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::Usage(format!("duplicate mode label {m:?}")));
            }
        }
        if let Some(t) = terms.iter().find(|t| t.nvars() != modes.len()) {
            return Err(Error::Usage(format!(
                "term has {} variables but the state has {} modes",
                t.nvars(),
                modes.len()
            )));
        }
        let state = GaussPolyState {
            modes,
            terms,
            degree_cap: DEFAULT_DEGREE_CAP,
        };
        state.check_cap()?;
        Ok(state.compact())
    }

    /// Single-mode state built from univariate terms.
    pub fn single_mode(mode: &str, terms: Vec<GaussTerm>) -> Result<Self> {
        GaussPolyState::new(vec![mode.to_string()], terms)
    }

    /// The 0-mode state holding `value`.
    pub fn scalar(value: Complex64) -> Self {
        GaussPolyState {
            modes: Vec::new(),
            terms: vec![GaussTerm::scalar(value)],
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }

    pub fn with_degree_cap(mut self, cap: u16) -> Result<Self> {
        self.degree_cap = cap;
        self.check_cap()?;
        Ok(self)
    }

    pub fn degree_cap(&self) -> u16 {
        self.degree_cap
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn nmodes(&self) -> usize {
        self.modes.len()
    }

    pub fn terms(&self) -> &[GaussTerm] {
        &self.terms
    }

    pub fn mode_index(&self, mode: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m == mode)
            .ok_or_else(|| Error::Usage(format!("mode {mode:?} not present in {:?}", self.modes)))
    }

    /// Largest per-variable polynomial degree over all terms.
    pub fn max_degree(&self) -> u16 {
        self.terms
            .iter()
            .map(|t| t.poly.max_degree_per_var())
            .max()
            .unwrap_or(0)
    }

    fn check_cap(&self) -> Result<()> {
        let deg = self.max_degree();
        if deg > self.degree_cap {
            Err(Error::Capacity(format!(
                "polynomial degree {deg} exceeds the cap of {}",
                self.degree_cap
            )))
        } else {
            Ok(())
        }
    }

    fn derived(&self, modes: Vec<String>, terms: Vec<GaussTerm>) -> Result<Self> {
        let state = GaussPolyState {
            modes,
            terms,
            degree_cap: self.degree_cap,
        };
        state.check_cap()?;
        Ok(state.compact())
    }

    /// Merges terms with identical `(Q, L)` and prunes negligible
    /// coefficients.
    fn compact(self) -> Self {
        let mut merged: Vec<GaussTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            match merged.iter_mut().find(|m| m.same_exponent(&t, MERGE_TOL)) {
                Some(m) => m.absorb(&t),
                None => merged.push(t),
            }
        }
        for t in merged.iter_mut() {
            t.prune(PRUNE_TOL);
        }
        merged.retain(|t| !t.poly.is_zero());
        GaussPolyState {
            modes: self.modes,
            terms: merged,
            degree_cap: self.degree_cap,
        }
    }

    /// The same wavefunction under new mode labels (positionally).
    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.modes.len() {
            return Err(Error::Usage(format!(
                "relabel needs {} labels, got {}",
                self.modes.len(),
                labels.len()
            )));
        }
        GaussPolyState::new(
            labels.iter().map(|s| s.as_ref().to_string()).collect(),
            self.terms.clone(),
        )
        .and_then(|s| s.with_degree_cap(self.degree_cap))
    }

    /// Reorders `other`'s terms to this state's mode order.
    fn aligned_terms(&self, other: &GaussPolyState) -> Result<Vec<GaussTerm>> {
        if self.modes.len() != other.modes.len() {
            return Err(Error::Usage(format!(
                "mode sets differ: {:?} vs {:?}",
                self.modes, other.modes
            )));
        }
        if self.modes == other.modes {
            return Ok(other.terms.clone());
        }
        let perm = self
            .modes
            .iter()
            .map(|m| {
                other
                    .modes
                    .iter()
                    .position(|o| o == m)
                    .ok_or_else(|| Error::Usage(format!("mode sets differ: {:?} vs {:?}", self.modes, other.modes)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(other.terms.iter().map(|t| t.permute(&perm)).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| GaussTerm {
                poly: t.poly.scale(s),
                ..t.clone()
            })
            .collect();
        GaussPolyState {
            modes: self.modes.clone(),
            terms,
            degree_cap: self.degree_cap,
        }
        .compact()
    }

    /// Superposition `self + other` over the same modes.
    pub fn add(&self, other: &GaussPolyState) -> Result<Self> {
        let mut terms = self.terms.clone();
        terms.extend(self.aligned_terms(other)?);
        self.derived(self.modes.clone(), terms)
    }

    /// Wavefunction value at a real point (ordered as [`Self::modes`]).
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.modes.len());
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Value of a 0-mode state.
    pub fn as_scalar(&self) -> Option<Complex64> {
        if self.modes.is_empty() {
            Some(self.terms.iter().map(GaussTerm::scalar_value).sum())
        } else {
            None
        }
    }

    /// Pointwise product on a shared mode set, or tensor product on disjoint
    /// mode sets.
    pub fn multiply(&self, other: &GaussPolyState) -> Result<Self> {
        let shared = self.modes.iter().filter(|m| other.modes.contains(m)).count();
        if shared == 0 {
            if self.modes.len() + other.modes.len() > MAX_VARS {
                return Err(Error::Usage(format!(
                    "tensor product would have {} modes (max {MAX_VARS})",
                    self.modes.len() + other.modes.len()
                )));
            }
            let mut modes = self.modes.clone();
            modes.extend(other.modes.iter().cloned());
            let terms = self
                .terms
                .iter()
                .flat_map(|a| other.terms.iter().map(move |b| a.tensor(b)))
                .collect();
            return self.derived(modes, terms);
        }
        if shared != self.modes.len() || shared != other.modes.len() {
            return Err(Error::Usage(format!(
                "multiply needs identical or disjoint mode sets: {:?} vs {:?}",
                self.modes, other.modes
            )));
        }
        let rhs = self.aligned_terms(other)?;
        let terms = self
            .terms
            .iter()
            .flat_map(|a| rhs.iter().map(move |b| a.product(b)))
            .collect();
        self.derived(self.modes.clone(), terms)
    }

    /// `∫ conj(self) · other` over all modes, in closed form.
    pub fn inner_product(&self, other: &GaussPolyState) -> Result<Complex64> {
        let rhs = self.aligned_terms(other)?;
        let m = self.modes.len();
        let mut total = Complex64::new(0.0, 0.0);
        for a in &self.terms {
            let ac = a.conj();
            for b in &rhs {
                let mut t = ac.product(b);
                for var in (0..m).rev() {
                    t = t.integrate(var, 0.0)?;
                }
                total += t.scalar_value();
            }
        }
        Ok(total)
    }

    pub fn norm_sqr(&self) -> Result<f64> {
        Ok(self.inner_product(self)?.re)
    }

    /// Normalized copy together with the squared norm it was divided by.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let n2 = self.norm_sqr()?;
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::Domain(format!(
                "cannot normalize a state with squared norm {n2}"
            )));
        }
        Ok((self.scale(Complex64::new(1.0 / n2.sqrt(), 0.0)), n2))
    }

    /// `|⟨self|other⟩|² / (⟨self|self⟩⟨other|other⟩)`.
    pub fn fidelity(&self, other: &GaussPolyState) -> Result<f64> {
        let ov = self.inner_product(other)?;
        Ok(ov.norm_sqr() / (self.norm_sqr()? * other.norm_sqr()?))
    }

    /// Balanced beam splitter: `(x_i, x_j) → ((x_i − x_j)/√2, (x_i + x_j)/√2)`.
    pub fn beam_splitter(&self, mode_i: &str, mode_j: &str) -> Result<Self> {
        self.beam_splitter_angle(mode_i, mode_j, FRAC_PI_4)
    }

    /// Beam splitter with mixing angle `theta`:
    /// `x_i → cos θ x_i − sin θ x_j`, `x_j → sin θ x_i + cos θ x_j`.
    pub fn beam_splitter_angle(&self, mode_i: &str, mode_j: &str, theta: f64) -> Result<Self> {
        let i = self.mode_index(mode_i)?;
        let j = self.mode_index(mode_j)?;
        if i == j {
            return Err(Error::Usage("beam splitter needs two distinct modes".into()));
        }
        let m = self.modes.len();
        let mut t = vec![vec![0.0; m]; m];
        for (k, row) in t.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        let (s, c) = theta.sin_cos();
        t[i][i] = c;
        t[i][j] = -s;
        t[j][i] = s;
        t[j][j] = c;
        let terms = self.terms.iter().map(|term| term.linear_substitute(&t)).collect();
        self.derived(self.modes.clone(), terms)
    }

    /// Post-selects `x_mode = value`; the result is unnormalized.
    pub fn condition_x(&self, mode: &str, value: f64) -> Result<Self> {
        let var = self.mode_index(mode)?;
        let mut modes = self.modes.clone();
        modes.remove(var);
        let terms = self.terms.iter().map(|t| t.condition(var, value)).collect();
        self.derived(modes, terms)
    }

    /// Projects `mode` with the kernel `(2π)^{-1/2} e^{iβx}`; the result is
    /// unnormalized.
    pub fn project_p(&self, mode: &str, beta: f64) -> Result<Self> {
        let var = self.mode_index(mode)?;
        let mut modes = self.modes.clone();
        modes.remove(var);
        let shift = Complex64::new(-0.5 * (2.0 * PI).ln(), 0.0);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut out = t.integrate(var, beta)?;
                out.c += shift;
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        self.derived(modes, terms)
    }
}

/// Builds a univariate polynomial from real ascending coefficients.
pub(crate) fn real_poly(coefs: &[f64]) -> Poly {
    Poly::from_univariate(&coefs.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Normalized vacuum with the given x-variance scale g.
    fn sq_vac(mode: &str, g: f64) -> GaussPolyState {
        let t = GaussTerm::univariate(Poly::one(1), c(1.0 / g), c(0.0), c(-0.25 * (PI * g).ln()));
        GaussPolyState::single_mode(mode, vec![t]).unwrap()
    }

    #[test]
    fn vacuum_tensor_vacuum_is_identity_form() {
        let v = sq_vac("a", 1.0).multiply(&sq_vac("b", 1.0)).unwrap();
        assert_eq!(v.nmodes(), 2);
        let t = &v.terms()[0];
        assert_eq!(t.q, vec![c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert!((v.norm_sqr().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn beam_splitter_keeps_two_mode_vacuum() {
        let v = sq_vac("a", 1.0).multiply(&sq_vac("b", 1.0)).unwrap();
        let w = v.beam_splitter("a", "b").unwrap();
        assert!((w.fidelity(&v).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn conditioning_vacuum() {
        let g = 0.4466;
        let s = sq_vac("a", g).condition_x("a", 0.0).unwrap();
        let v = s.as_scalar().unwrap();
        assert!((v - c((PI * g).powf(-0.25))).norm() < 1e-14);

        let two = sq_vac("a", 1.0).multiply(&sq_vac("b", 1.0)).unwrap();
        let one = two.condition_x("b", 0.0).unwrap();
        let expected = sq_vac("a", 1.0).scale(c(PI.powf(-0.25)));
        assert!((one.inner_product(&expected).unwrap().re - PI.powf(-0.5)).abs() < 1e-14);
        assert!((one.fidelity(&expected).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn project_squeezed_vacuum() {
        let g = 0.37;
        let p = sq_vac("a", g).project_p("a", 0.0).unwrap().as_scalar().unwrap();
        assert!((p - c((g / PI).powf(0.25))).norm() < 1e-14);
    }

    #[test]
    fn usage_errors() {
        let a = sq_vac("a", 1.0);
        let ab = a.multiply(&sq_vac("b", 1.0)).unwrap();
        assert!(matches!(a.inner_product(&ab), Err(Error::Usage(_))));
        assert!(matches!(ab.multiply(&sq_vac("a", 1.0)), Err(Error::Usage(_))));
        assert!(matches!(a.condition_x("z", 0.0), Err(Error::Usage(_))));
        assert!(matches!(ab.beam_splitter("a", "a"), Err(Error::Usage(_))));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let t = GaussTerm::univariate(Poly::monomial(1, 0, 40, c(1.0)), c(1.0), c(0.0), c(0.0));
        let u = GaussPolyState::single_mode("a", vec![t]).unwrap();
        assert!(matches!(u.multiply(&u), Err(Error::Capacity(_))));
        let small = u.clone().with_degree_cap(16);
        assert!(matches!(small, Err(Error::Capacity(_))));
    }

    #[test]
    fn merging_identical_exponents() {
        let t1 = GaussTerm::univariate(real_poly(&[1.0]), c(1.0), c(0.5), c(0.0));
        let t2 = GaussTerm::univariate(real_poly(&[0.0, 1.0]), c(1.0), c(0.5), c(0.3));
        let u = GaussPolyState::single_mode("a", vec![t1, t2]).unwrap();
        assert_eq!(u.terms().len(), 1);
        let x = 0.7;
        let expected = (1.0 + x * 0.3f64.exp()) * (-0.5 * x * x + 0.5 * x).exp();
        assert!((u.evaluate(&[x]) - c(expected)).norm() < 1e-14);
    }
}
