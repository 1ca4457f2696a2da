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

//! Exact algebra over Gauss-polynomial wavefunctions.
//!
//! Every state handled by this crate is a finite sum of terms
//! `P(x) · exp(-½ xᵀQx + Lᵀx + c)` over one to three quadrature variables.
//! The family is closed under products, beam splitters (orthogonal changes
//! of variables), x-homodyne conditioning (substitution) and p-homodyne
//! projection (integration against `e^{iβx}`), and all of these are done in
//! closed form through Gaussian moments.

mod moments;
mod poly;
mod state;
mod term;

use num_complex::Complex64;

pub use moments::{gaussian_moment_integral, log_gaussian_mass, normalized_moments, GaussianMomentSpec};
pub use poly::{Monomial, Poly, MAX_VARS};
pub use state::{GaussPolyState, DEFAULT_DEGREE_CAP};
pub use term::GaussTerm;

pub(crate) use state::real_poly;

use crate::error::Result;

pub fn multiply(u: &GaussPolyState, v: &GaussPolyState) -> Result<GaussPolyState> {
    u.multiply(v)
}

pub fn inner_product(u: &GaussPolyState, v: &GaussPolyState) -> Result<Complex64> {
    u.inner_product(v)
}

pub fn beam_splitter(u: &GaussPolyState, mode_i: &str, mode_j: &str) -> Result<GaussPolyState> {
    u.beam_splitter(mode_i, mode_j)
}

pub fn condition_x(u: &GaussPolyState, mode: &str, value: f64) -> Result<GaussPolyState> {
    u.condition_x(mode, value)
}

pub fn project_p(u: &GaussPolyState, mode: &str, beta: f64) -> Result<GaussPolyState> {
    u.project_p(mode, beta)
}
