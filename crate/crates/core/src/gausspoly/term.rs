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

use num_complex::Complex64;

use super::moments::{check_integrable, log_gaussian_mass};
use super::poly::{Poly, MAX_VARS};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One term `P(x) · exp(-½ xᵀQx + Lᵀx + c)` of a Gauss-polynomial
/// wavefunction. `q` is stored row-major and kept symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussTerm {
    pub poly: Poly,
    pub q: Vec<Complex64>,
    pub l: Vec<Complex64>,
    pub c: Complex64,
}

impl GaussTerm {
    pub fn new(poly: Poly, q: Vec<Complex64>, l: Vec<Complex64>, c: Complex64) -> Result<Self> {
        let m = poly.nvars();
        if l.len() != m || q.len() != m * m {
            return Err(Error::Usage(format!(
                "term dimensions disagree: poly has {m} variables, L has {}, Q has {} entries",
                l.len(),
                q.len()
            )));
        }
        for i in 0..m {
            for j in 0..i {
                let (a, b) = (q[i * m + j], q[j * m + i]);
                if (a - b).norm() > 1e-12 * (1.0 + a.norm()) {
                    return Err(Error::Usage("quadratic form must be symmetric".into()));
                }
            }
        }
        Ok(GaussTerm { poly, q, l, c })
    }

    /// `poly · exp(-½ q x² + l x + c)` in one variable.
    pub fn univariate(poly: Poly, q: Complex64, l: Complex64, c: Complex64) -> Self {
        assert_eq!(poly.nvars(), 1);
        GaussTerm {
            poly,
            q: vec![q],
            l: vec![l],
            c,
        }
    }

    /// A constant (no variables).
    pub fn scalar(value: Complex64) -> Self {
        GaussTerm {
            poly: Poly::constant(0, value),
            q: Vec::new(),
            l: Vec::new(),
            c: ZERO,
        }
    }

    pub fn nvars(&self) -> usize {
        self.l.len()
    }

    #[inline]
    pub fn qij(&self, i: usize, j: usize) -> Complex64 {
        self.q[i * self.nvars() + j]
    }

    pub fn exponent(&self, x: &[f64]) -> Complex64 {
        let m = self.nvars();
        let mut e = self.c;
        for i in 0..m {
            e += self.l[i] * x[i];
            for j in 0..m {
                e -= 0.5 * self.qij(i, j) * x[i] * x[j];
            }
        }
        e
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.poly.eval_real(x) * self.exponent(x).exp()
    }

    /// Value of a variable-free term.
    pub fn scalar_value(&self) -> Complex64 {
        debug_assert_eq!(self.nvars(), 0);
        self.poly.constant_term() * self.c.exp()
    }

    pub fn conj(&self) -> GaussTerm {
        GaussTerm {
            poly: self.poly.conj(),
            q: self.q.iter().map(|v| v.conj()).collect(),
            l: self.l.iter().map(|v| v.conj()).collect(),
            c: self.c.conj(),
        }
    }

    /// Pointwise product of two terms over the same variables.
    pub fn product(&self, other: &GaussTerm) -> GaussTerm {
        assert_eq!(self.nvars(), other.nvars());
        GaussTerm {
            poly: self.poly.mul(&other.poly),
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
            l: self.l.iter().zip(&other.l).map(|(a, b)| a + b).collect(),
            c: self.c + other.c,
        }
    }

    /// Tensor product: `self` on the first variables, `other` after them.
    pub fn tensor(&self, other: &GaussTerm) -> GaussTerm {
        let (m1, m2) = (self.nvars(), other.nvars());
        let m = m1 + m2;
        assert!(m <= MAX_VARS);
        let mut q = vec![ZERO; m * m];
        for i in 0..m1 {
            for j in 0..m1 {
                q[i * m + j] = self.qij(i, j);
            }
        }
        for i in 0..m2 {
            for j in 0..m2 {
                q[(m1 + i) * m + m1 + j] = other.qij(i, j);
            }
        }
        let mut l = self.l.clone();
        l.extend_from_slice(&other.l);
        GaussTerm {
            poly: self.poly.embed(m, 0).mul(&other.poly.embed(m, m1)),
            q,
            l,
            c: self.c + other.c,
        }
    }

    /// Substitutes `x_var = value`, removing the variable.
    pub fn condition(&self, var: usize, value: f64) -> GaussTerm {
        let m = self.nvars();
        let rest: Vec<usize> = (0..m).filter(|&k| k != var).collect();
        let c = self.c - 0.5 * self.qij(var, var) * value * value + self.l[var] * value;
        let l = rest.iter().map(|&k| self.l[k] - self.qij(var, k) * value).collect();
        let q = sub_matrix(&self.q, m, &rest);
        GaussTerm {
            poly: self.poly.substitute(var, Complex64::new(value, 0.0)),
            q,
            l,
            c,
        }
    }

    /// `∫ dx_var e^{iβ x_var} · term`, in closed form. The remaining
    /// variables keep their order.
    pub fn integrate(&self, var: usize, beta: f64) -> Result<GaussTerm> {
        let m = self.nvars();
        let a = 0.5 * self.qij(var, var);
        check_integrable(a)?;
        let rest: Vec<usize> = (0..m).filter(|&k| k != var).collect();
        // Exponent in x_var: -a x² + 2 (b0 + Σ b_k x_k) x.
        let b0 = 0.5 * (self.l[var] + Complex64::new(0.0, beta));
        let bk: Vec<Complex64> = rest.iter().map(|&k| -0.5 * self.qij(var, k)).collect();

        let mean_coef: Vec<Complex64> = bk.iter().map(|b| b / a).collect();
        let mean = Poly::linear(m - 1, b0 / a, &mean_coef);
        let half_var = 1.0 / (2.0 * a);

        let parts = self.poly.split_by_var(var);
        let mut moments: Vec<Poly> = Vec::with_capacity(parts.len());
        moments.push(Poly::one(m - 1));
        if parts.len() > 1 {
            moments.push(mean.clone());
        }
        for p in 2..parts.len() {
            let mut next = mean.mul(&moments[p - 1]);
            next.add_scaled(&moments[p - 2], (p as f64 - 1.0) * half_var);
            moments.push(next);
        }
        let mut poly = Poly::zero(m - 1);
        for (part, mom) in parts.iter().zip(&moments) {
            if !part.is_zero() {
                poly.add_assign(&part.mul(mom));
            }
        }

        let mut q = sub_matrix(&self.q, m, &rest);
        let r = rest.len();
        let qvv = self.qij(var, var);
        for (i, &ki) in rest.iter().enumerate() {
            for (j, &kj) in rest.iter().enumerate() {
                q[i * r + j] -= self.qij(var, ki) * self.qij(var, kj) / qvv;
            }
        }
        let l = rest
            .iter()
            .enumerate()
            .map(|(i, &k)| self.l[k] + 2.0 * b0 * bk[i] / a)
            .collect();
        let c = self.c + log_gaussian_mass(a, b0)?;
        Ok(GaussTerm { poly, q, l, c })
    }

    /// Composition with `x = T y` for a real matrix `T` (row-major rows).
    pub fn linear_substitute(&self, t: &[Vec<f64>]) -> GaussTerm {
        let m = self.nvars();
        let mut q = vec![ZERO; m * m];
        for a in 0..m {
            for b in 0..m {
                let mut s = ZERO;
                for i in 0..m {
                    for j in 0..m {
                        s += t[i][a] * self.qij(i, j) * t[j][b];
                    }
                }
                q[a * m + b] = s;
            }
        }
        let l = (0..m).map(|a| (0..m).map(|i| t[i][a] * self.l[i]).sum()).collect();
        GaussTerm {
            poly: self.poly.linear_substitute(t),
            q,
            l,
            c: self.c,
        }
    }

    /// New variable `k` is old variable `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> GaussTerm {
        let m = self.nvars();
        let mut q = vec![ZERO; m * m];
        for a in 0..m {
            for b in 0..m {
                q[a * m + b] = self.qij(perm[a], perm[b]);
            }
        }
        GaussTerm {
            poly: self.poly.permute(perm),
            q,
            l: perm.iter().map(|&k| self.l[k]).collect(),
            c: self.c,
        }
    }

    pub fn real_quadratic(&self) -> Vec<f64> {
        self.q.iter().map(|v| v.re).collect()
    }

    /// Whether `Re Q` is positive definite.
    pub fn is_integrable(&self) -> bool {
        cholesky(&self.real_quadratic(), self.nvars()).is_some()
    }

    /// Centre and marginal standard deviations of the Gaussian envelope of
    /// `|term|²`, i.e. of `exp(-xᵀ Re(Q) x + 2 Re(L)ᵀ x)`.
    pub fn envelope(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let m = self.nvars();
        let inv = invert(&self.real_quadratic(), m)?;
        let re_l: Vec<f64> = self.l.iter().map(|v| v.re).collect();
        let centre = (0..m).map(|i| (0..m).map(|j| inv[i * m + j] * re_l[j]).sum()).collect();
        let sd = (0..m).map(|i| (0.5 * inv[i * m + i]).max(0.0).sqrt()).collect();
        Some((centre, sd))
    }

    /// Whether `other` has the same quadratic and linear parts.
    pub fn same_exponent(&self, other: &GaussTerm, tol: f64) -> bool {
        let close = |a: &Complex64, b: &Complex64| (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()));
        self.nvars() == other.nvars()
            && self.q.iter().zip(&other.q).all(|(a, b)| close(a, b))
            && self.l.iter().zip(&other.l).all(|(a, b)| close(a, b))
    }

    /// Folds `other` (same exponent) into `self`.
    pub fn absorb(&mut self, other: &GaussTerm) {
        if other.c.re > self.c.re {
            let ratio = (self.c - other.c).exp();
            let mut poly = self.poly.scale(ratio);
            poly.add_assign(&other.poly);
            self.poly = poly;
            self.c = other.c;
        } else {
            let ratio = (other.c - self.c).exp();
            self.poly.add_scaled(&other.poly, ratio);
        }
    }

    /// Removes negligible polynomial coefficients, weighting monomials by
    /// the extent of the term's envelope.
    pub fn prune(&mut self, rel_tol: f64) {
        let m = self.nvars();
        let scales: Vec<f64> = match self.envelope() {
            Some((centre, sd)) => (0..m).map(|i| (centre[i].abs() + 3.0 * sd[i]).max(1.0)).collect(),
            None => vec![1.0; m],
        };
        self.poly.prune(&scales, rel_tol);
    }
}

fn sub_matrix(q: &[Complex64], m: usize, keep: &[usize]) -> Vec<Complex64> {
    let r = keep.len();
    let mut out = vec![ZERO; r * r];
    for (i, &ki) in keep.iter().enumerate() {
        for (j, &kj) in keep.iter().enumerate() {
            out[i * r + j] = q[ki * m + kj];
        }
    }
    out
}

/// Cholesky factor of a small symmetric matrix, `None` unless positive definite.
pub(crate) fn cholesky(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * m + i] = s.sqrt();
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    Some(l)
}

/// Inverse of a small real matrix by Gauss–Jordan elimination.
pub(crate) fn invert(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut w = a.to_vec();
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for col in 0..m {
        let pivot = (col..m).max_by(|&x, &y| w[x * m + col].abs().total_cmp(&w[y * m + col].abs()))?;
        if w[pivot * m + col].abs() < 1e-300 {
            return None;
        }
        for k in 0..m {
            w.swap(col * m + k, pivot * m + k);
            inv.swap(col * m + k, pivot * m + k);
        }
        let p = w[col * m + col];
        for k in 0..m {
            w[col * m + k] /= p;
            inv[col * m + k] /= p;
        }
        for row in 0..m {
            if row != col {
                let f = w[row * m + col];
                for k in 0..m {
                    w[row * m + k] -= f * w[col * m + k];
                    inv[row * m + k] -= f * inv[col * m + k];
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn integrate_vacuum_gives_sqrt_two_pi() {
        let t = GaussTerm::univariate(Poly::one(1), c(1.0), c(0.0), c(0.0));
        let s = t.integrate(0, 0.0).unwrap();
        assert_eq!(s.nvars(), 0);
        assert!((s.scalar_value() - c((2.0 * PI).sqrt())).norm() < 1e-14);
    }

    #[test]
    fn integrate_fourier_kernel() {
        // ∫ e^{iβx} e^{-x²/2} dx = √(2π) e^{-β²/2}
        let t = GaussTerm::univariate(Poly::one(1), c(1.0), c(0.0), c(0.0));
        let beta = 0.8;
        let s = t.integrate(0, beta).unwrap().scalar_value();
        assert!((s - c((2.0 * PI).sqrt() * (-beta * beta / 2.0).exp())).norm() < 1e-14);
    }

    #[test]
    fn integrate_rejects_growing_exponent() {
        let t = GaussTerm::univariate(Poly::one(1), c(-1.0), c(0.0), c(0.0));
        assert!(matches!(t.integrate(0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn condition_then_evaluate_matches_direct() {
        let a = GaussTerm::univariate(Poly::from_univariate(&[c(1.0), c(0.5)]), c(1.3), c(0.2), c(0.1));
        let b = GaussTerm::univariate(
            Poly::from_univariate(&[c(0.0), c(0.0), c(2.0)]),
            c(0.7),
            c(-0.4),
            c(0.0),
        );
        let t = a.tensor(&b).linear_substitute(&[vec![0.6, -0.8], vec![0.8, 0.6]]);
        let conditioned = t.condition(1, 0.37);
        for &x in &[-1.0, 0.0, 0.4, 2.0] {
            let direct = t.eval(&[x, 0.37]);
            let via = conditioned.eval(&[x]);
            assert!((direct - via).norm() < 1e-13 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn invert_and_cholesky() {
        let a = [2.0, 0.5, 0.5, 1.0];
        let inv = invert(&a, 2).unwrap();
        let id = [a[0] * inv[0] + a[1] * inv[2], a[0] * inv[1] + a[1] * inv[3]];
        assert!((id[0] - 1.0).abs() < 1e-14 && id[1].abs() < 1e-14);
        assert!(cholesky(&a, 2).is_some());
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }
}
