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

//! Sparse multivariate polynomials with complex coefficients in at most
//! [`MAX_VARS`] variables.

use std::collections::BTreeMap;

use num_complex::Complex64;

/// Maximum number of variables (modes) a polynomial can carry.
pub const MAX_VARS: usize = 3;

/// Exponent vector of a monomial. Entries beyond the owning polynomial's
/// variable count are always zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = [0u16; MAX_VARS];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = self.0[k] + other.0[k];
        }
        Monomial(e)
    }

    /// Drops variable `var`, shifting the higher variables down.
    fn remove(&self, var: usize) -> Monomial {
        let mut e = [0u16; MAX_VARS];
        let mut k = 0;
        for (i, &x) in self.0.iter().enumerate() {
            if i != var {
                e[k] = x;
                k += 1;
            }
        }
        Monomial(e)
    }

    fn shifted(&self, offset: usize) -> Monomial {
        let mut e = [0u16; MAX_VARS];
        for (i, &x) in self.0.iter().enumerate() {
            if x != 0 {
                e[i + offset] = x;
            }
        }
        Monomial(e)
    }
}

/// Polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    coeffs: BTreeMap<Monomial, Complex64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        Poly {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Complex64::new(1.0, 0.0))
    }

    /// `c * x_var^power`.
    pub fn monomial(nvars: usize, var: usize, power: u16, c: Complex64) -> Self {
        assert!(var < nvars);
        let mut e = [0u16; MAX_VARS];
        e[var] = power;
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial(e), c);
        p
    }

    /// `c0 + Σ_k coef[k] x_k`.
    pub fn linear(nvars: usize, c0: Complex64, coef: &[Complex64]) -> Self {
        assert_eq!(coef.len(), nvars);
        let mut p = Poly::constant(nvars, c0);
        for (k, &c) in coef.iter().enumerate() {
            let mut e = [0u16; MAX_VARS];
            e[k] = 1;
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn from_univariate(coefs: &[Complex64]) -> Self {
        let mut p = Poly::zero(1);
        for (k, &c) in coefs.iter().enumerate() {
            p.add_term(Monomial([k as u16, 0, 0]), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.coeffs.get(m).copied().unwrap_or_default()
    }

    /// Constant coefficient (the whole value for a 0-variable polynomial).
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&Monomial::default())
    }

    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.coeffs.entry(m).or_default();
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&m);
        }
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.coeffs.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn max_degree_per_var(&self) -> u16 {
        (0..self.nvars).map(|v| self.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.coeffs {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn conj(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars);
        for (m, c) in &other.coeffs {
            self.add_term(*m, *c);
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Poly, s: Complex64) {
        assert_eq!(self.nvars, other.nvars);
        for (m, c) in &other.coeffs {
            self.add_term(*m, c * s);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.coeffs {
            let e = m.0[var];
            if e > 0 {
                let mut d = *m;
                d.0[var] -= 1;
                out.add_term(d, c * e as f64);
            }
        }
        out
    }

    /// Evaluates at a complex point.
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.nvars);
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.coeffs {
            let mut v = *c;
            for (k, &xk) in x.iter().enumerate() {
                if m.0[k] > 0 {
                    v *= xk.powu(m.0[k] as u32);
                }
            }
            total += v;
        }
        total
    }

    /// Evaluates at a real point.
    pub fn eval_real(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.nvars);
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.coeffs {
            let mut v = 1.0;
            for (k, &xk) in x.iter().enumerate() {
                if m.0[k] > 0 {
                    v *= xk.powi(m.0[k] as i32);
                }
            }
            total += c * v;
        }
        total
    }

    /// Substitutes `x_var = value` and removes that variable.
    pub fn substitute(&self, var: usize, value: Complex64) -> Poly {
        assert!(var < self.nvars);
        let mut out = Poly::zero(self.nvars - 1);
        for (m, c) in &self.coeffs {
            let e = m.0[var];
            let factor = if e == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                value.powu(e as u32)
            };
            out.add_term(m.remove(var), c * factor);
        }
        out
    }

    /// Splits `P = Σ_p x_var^p R_p` and returns the `R_p` (in the remaining
    /// variables), indexed by `p`.
    pub fn split_by_var(&self, var: usize) -> Vec<Poly> {
        assert!(var < self.nvars);
        let deg = self.degree_in(var) as usize;
        let mut parts = vec![Poly::zero(self.nvars - 1); deg + 1];
        for (m, c) in &self.coeffs {
            parts[m.0[var] as usize].add_term(m.remove(var), *c);
        }
        parts
    }

    /// Re-expresses the polynomial over `nvars` variables with its own
    /// variables occupying `offset..offset + self.nvars`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Poly {
        assert!(offset + self.nvars <= nvars && nvars <= MAX_VARS);
        Poly {
            nvars,
            coeffs: self.coeffs.iter().map(|(m, c)| (m.shifted(offset), *c)).collect(),
        }
    }

    /// Reorders variables: new variable `k` is old variable `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Poly {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.coeffs {
            let mut e = [0u16; MAX_VARS];
            for (k, &old) in perm.iter().enumerate() {
                e[k] = m.0[old];
            }
            out.add_term(Monomial(e), *c);
        }
        out
    }

    /// Composition with the linear map `x_i = Σ_j t[i][j] y_j`.
    pub fn linear_substitute(&self, t: &[Vec<f64>]) -> Poly {
        let n = self.nvars;
        assert_eq!(t.len(), n);
        let images: Vec<Poly> = t
            .iter()
            .map(|row| {
                let coef: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                Poly::linear(n, Complex64::new(0.0, 0.0), &coef)
            })
            .collect();
        // powers[i][e] = images[i]^e
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for (i, img) in images.iter().enumerate() {
            let deg = self.degree_in(i) as usize;
            let mut row = Vec::with_capacity(deg + 1);
            row.push(Poly::one(n));
            for e in 1..=deg {
                let next = row[e - 1].mul(img);
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Poly::zero(n);
        for (m, c) in &self.coeffs {
            let mut acc = Poly::constant(n, *c);
            for (i, row) in powers.iter().enumerate() {
                let e = m.0[i] as usize;
                if e > 0 {
                    acc = acc.mul(&row[e]);
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Drops coefficients whose weighted magnitude `|c| Π scale_k^{e_k}` is
    /// below `rel_tol` times the largest weighted magnitude.
    pub fn prune(&mut self, scales: &[f64], rel_tol: f64) {
        assert_eq!(scales.len(), self.nvars);
        let weight = |m: &Monomial, c: &Complex64| {
            let mut w = c.norm();
            for (k, &s) in scales.iter().enumerate() {
                w *= s.powi(m.0[k] as i32);
            }
            w
        };
        let max = self.coeffs.iter().map(|(m, c)| weight(m, c)).fold(0.0, f64::max);
        if max == 0.0 || !max.is_finite() {
            return;
        }
        self.coeffs.retain(|m, c| weight(m, c) >= rel_tol * max);
    }
}
