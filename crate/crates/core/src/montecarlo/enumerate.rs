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

//! Exhaustive branch enumeration of the iterated protocol.

use serde::Serialize;

use super::TrajectoryConfig;
use crate::ecp::{failure_coefficients, ghz_state, round_branches, EcpError, RoundVerdict, SchmidtCoefficients};
use crate::quantum::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnumerationSummary {
    pub success_probability: f64,
    pub failure_probability: f64,
    /// Number of terminal paths visited.
    pub leaves: usize,
}

/// Sum the probability of every success path over `rounds` rounds.
///
/// The branch tree grows as `8^rounds` with a noisy detector and `4^rounds`
/// without one.
pub fn enumerate_success(
    config: &TrajectoryConfig,
    c: SchmidtCoefficients,
    rounds: usize,
) -> Result<EnumerationSummary, EcpError> {
    let mut summary = EnumerationSummary { success_probability: 0.0, failure_probability: 0.0, leaves: 0 };
    let state = ghz_state(config.n_photons, c)?;
    descend(config, &state, c, 1.0, rounds, &mut summary)?;
    Ok(summary)
}

fn descend(
    config: &TrajectoryConfig,
    state: &PureState,
    c: SchmidtCoefficients,
    weight: f64,
    rounds_left: usize,
    summary: &mut EnumerationSummary,
) -> Result<(), EcpError> {
    if rounds_left == 0 {
        summary.failure_probability += weight;
        summary.leaves += 1;
        return Ok(());
    }
    for branch in round_branches(state, 0, c, &config.model)? {
        let w = weight * branch.probability;
        match branch.verdict {
            RoundVerdict::Success => {
                summary.success_probability += w;
                summary.leaves += 1;
            }
            RoundVerdict::Failure => {
                descend(config, &branch.post_state, failure_coefficients(c), w, rounds_left - 1, summary)?;
            }
        }
    }
    Ok(())
}
