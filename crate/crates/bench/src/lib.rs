// Copyright 2026 The ecp-sim Authors
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

//! Shared fixtures for the benchmarks.

use ecp_core::SchmidtCoefficients;

/// The 99-point grid `a² ∈ {0.01, …, 0.99}`.
pub fn alpha_squared_grid() -> Vec<SchmidtCoefficients> {
    (1..=99).map(|k| SchmidtCoefficients::from_alpha_squared(k as f64 / 100.0).expect("grid point in range")).collect()
}
