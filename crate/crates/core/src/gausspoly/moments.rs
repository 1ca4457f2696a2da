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

//! Closed-form moments of complex Gaussians,
//! `I_k = ∫ x^k exp(-A x² + 2 B x) dx` with `Re A > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of a single moment integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianMomentSpec {
    pub a: Complex64,
    pub b: Complex64,
    pub order: u32,
}

impl GaussianMomentSpec {
    pub fn new(a: Complex64, b: Complex64, order: u32) -> Self {
        GaussianMomentSpec { a, b, order }
    }
}

pub(crate) fn check_integrable(a: Complex64) -> Result<()> {
    if a.re > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "non-integrable Gaussian exponent: Re(A) = {} must be positive",
            a.re
        )))
    }
}

/// Moments `E[X^k]`, `k = 0..=kmax`, of the (complex) normal law with mean
/// `B/A` and variance `1/(2A)`.
///
/// Uses `m_k = (B/A) m_{k-1} + (k-1)/(2A) m_{k-2}`.
pub fn normalized_moments(a: Complex64, b: Complex64, kmax: u32) -> Result<Vec<Complex64>> {
    check_integrable(a)?;
    let mean = b / a;
    let half_var = 1.0 / (2.0 * a);
    let mut m = Vec::with_capacity(kmax as usize + 1);
    m.push(Complex64::new(1.0, 0.0));
    if kmax >= 1 {
        m.push(mean);
    }
    for k in 2..=kmax as usize {
        let next = mean * m[k - 1] + (k as f64 - 1.0) * half_var * m[k - 2];
        m.push(next);
    }
    Ok(m)
}

/// `ln ∫ exp(-A x² + 2 B x) dx = ½ ln(π/A) + B²/A` (principal branch).
pub fn log_gaussian_mass(a: Complex64, b: Complex64) -> Result<Complex64> {
    check_integrable(a)?;
    Ok(0.5 * (Complex64::new(PI, 0.0) / a).ln() + b * b / a)
}

/// Evaluates `∫ x^k exp(-A x² + 2 B x) dx` in closed form.
pub fn gaussian_moment_integral(spec: GaussianMomentSpec) -> Result<Complex64> {
    let moments = normalized_moments(spec.a, spec.b, spec.order)?;
    let mass = log_gaussian_mass(spec.a, spec.b)?.exp();
    Ok(mass * moments[spec.order as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn standard_gaussian() {
        let i0 = gaussian_moment_integral(GaussianMomentSpec::new(c(1.0, 0.0), c(0.0, 0.0), 0)).unwrap();
        assert!((i0 - c(PI.sqrt(), 0.0)).norm() < 1e-15);
        let i1 = gaussian_moment_integral(GaussianMomentSpec::new(c(1.0, 0.0), c(0.0, 0.0), 1)).unwrap();
        assert!(i1.norm() < 1e-15);
    }

    #[test]
    fn rejects_non_integrable() {
        let r = gaussian_moment_integral(GaussianMomentSpec::new(c(0.0, 1.0), c(0.0, 0.0), 0));
        assert!(matches!(r, Err(Error::Domain(_))));
        let r = gaussian_moment_integral(GaussianMomentSpec::new(c(-1.0, 0.0), c(0.0, 0.0), 2));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn variance_is_one_over_two_a() {
        let a = c(0.7, 0.2);
        let b = c(0.3, -0.4);
        let m = normalized_moments(a, b, 2).unwrap();
        let var = m[2] - m[1] * m[1];
        assert!((var - 1.0 / (2.0 * a)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn moment_recurrence(ar in 0.1f64..4.0, ai in -3.0f64..3.0,
                             br in -2.0f64..2.0, bi in -2.0f64..2.0, k in 2u32..24) {
            let a = c(ar, ai);
            let b = c(br, bi);
            let ik = |k| gaussian_moment_integral(GaussianMomentSpec::new(a, b, k)).unwrap();
            let lhs = ik(k);
            let rhs = (2.0 * b * ik(k - 1) + (k as f64 - 1.0) * ik(k - 2)) / (2.0 * a);
            let scale = lhs.norm()
                .max((2.0 * b * ik(k - 1) / (2.0 * a)).norm())
                .max(((k as f64 - 1.0) * ik(k - 2) / (2.0 * a)).norm())
                .max(1e-300);
            prop_assert!((lhs - rhs).norm() / scale < 1e-12);
        }
    }
}
