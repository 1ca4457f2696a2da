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

//! Squeezed coherent-superposition ("cat") states in continuous-variable
//! quantum optics: Fock-space truncation, single-outcome teleportation with
//! ideal and approximate resources, and homodyne-heralded amplification.
//!
//! Wavefunctions use the quadrature convention `x = (a + a†)/√2`,
//! `[x, p] = i`, vacuum variance ½ and squeezing `g = e^{-2r}` of the x
//! quadrature, so `S(r)|α⟩` has wavefunction
//! `(πg)^{-1/4} exp(-(x - α√(2g))² / 2g)` for real `α`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock_core;
pub mod gausspoly;
pub mod oracle;
pub mod protocols;
pub mod states;
pub mod validate;

mod legendre;
mod optimize;

pub use error::{Error, Result};

/// Engine version recorded in emitted metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
