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

use std::f64::consts::FRAC_PI_4;

use cvcat::gausspoly::GaussPolyState;
use cvcat::oracle::{self, GridSpec};
use cvcat::protocols::{teleport, Resource, TeleportSetup};
use cvcat::states::Parity;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64, modes: &[&str]) -> (GaussPolyState, GaussPolyState) {
    let grid = GridSpec::uniform(modes.len(), -12.0, 12.0, if modes.len() == 1 { 4096 } else { 256 }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = oracle::random_state(&mut rng, modes, 6, &grid).unwrap();
    let v = oracle::random_state(&mut rng, modes, 6, &grid).unwrap();
    (u, v)
}

fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * scale.max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inner_product_is_hermitian(seed in any::<u64>()) {
        let (u, v) = pair(seed, &["a", "b"]);
        let uv = u.inner_product(&v).unwrap();
        let vu = v.inner_product(&u).unwrap();
        let scale = (u.norm_sqr().unwrap() * v.norm_sqr().unwrap()).sqrt();
        prop_assert!(close(uv, vu.conj(), scale));
        prop_assert!(uv.norm() <= scale * (1.0 + 1e-12));
    }

    #[test]
    fn beam_splitter_is_unitary_and_invertible(seed in any::<u64>(), theta in -1.5f64..1.5) {
        let (u, v) = pair(seed, &["a", "b"]);
        let scale = (u.norm_sqr().unwrap() * v.norm_sqr().unwrap()).sqrt();
        let bu = u.beam_splitter_angle("a", "b", theta).unwrap();
        let bv = v.beam_splitter_angle("a", "b", theta).unwrap();
        prop_assert!(close(bu.inner_product(&bv).unwrap(), u.inner_product(&v).unwrap(), scale));
        let back = bu.beam_splitter_angle("a", "b", -theta).unwrap();
        prop_assert!((back.fidelity(&u).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn balanced_beam_splitter_is_quarter_turn(seed in any::<u64>()) {
        let (u, _) = pair(seed, &["a", "b"]);
        let f = u.beam_splitter("a", "b").unwrap().fidelity(&u.beam_splitter_angle("a", "b", FRAC_PI_4).unwrap()).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditioning_is_evaluation(seed in any::<u64>(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let (u, _) = pair(seed, &["a", "b"]);
        let cond = u.condition_x("b", y).unwrap();
        let direct = u.evaluate(&[x, y]);
        prop_assert!(close(cond.evaluate(&[x]), direct, 1.0 + direct.norm()));
    }

    #[test]
    fn scaling_and_addition_are_linear(seed in any::<u64>(), s in -2.0f64..2.0) {
        let (u, v) = pair(seed, &["a"]);
        let w = u.scale(Complex64::new(s, 0.5)).add(&v).unwrap();
        for x in [-1.3, 0.0, 0.7, 2.1] {
            let expected = Complex64::new(s, 0.5) * u.evaluate(&[x]) + v.evaluate(&[x]);
            prop_assert!(close(w.evaluate(&[x]), expected, 1.0 + expected.norm()));
        }
    }

    #[test]
    fn ideal_even_resource_teleports_any_signal_with_symmetric_phase(theta in 0.0f64..1.5, phi in -3.0f64..3.0) {
        let setup = TeleportSetup::new(Resource::Ideal(Parity::Even), 1.6, 0.4).unwrap();
        let a = Complex64::new(theta.cos(), 0.0);
        let b = Complex64::from_polar(theta.sin(), phi);
        let f = teleport(&setup.signal(a, b).unwrap(), setup.resource, None).unwrap().fidelity_vs_signal;
        prop_assert!(f > 0.9 && f <= 1.0 + 1e-12);
    }
}
