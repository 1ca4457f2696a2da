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

use thiserror::Error;

/// Errors raised by the simulation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numerical precondition failed (non-integrable exponent, zero norm,
    /// grid not covering a state, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A polynomial degree or size cap was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// The caller combined incompatible inputs.
    #[error("usage error: {0}")]
    Usage(String),
    /// A post-selected outcome has zero heralding weight.
    #[error("outcome rejected: {0}")]
    Rejected(String),
    /// An iterative procedure did not reach its tolerance.
    #[error("not converged: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
