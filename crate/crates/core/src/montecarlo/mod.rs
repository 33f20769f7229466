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

//! Seeded ensemble estimates and brute-force oracles.
//!
//! Trial `t` of an ensemble seeded with `s` draws from ChaCha stream `t` of
//! key `s`, so results do not depend on how trials are scheduled across
//! threads.

mod enumerate;
mod pool;
mod rng;

pub use enumerate::{enumerate_success, EnumerationSummary};
pub use pool::{pool_schmidt_oracle, schmidt_projection_attempt, PairOutcome, PoolLevel, PoolStats};
pub use rng::trial_rng;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ecp::{ghz_state, round_statevector, EcpError, RoundVerdict, SchmidtCoefficients};
use crate::pcd::ProbeModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonteCarloError {
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("pool size must be even and positive, got {0}")]
    InvalidPool(usize),
    #[error(transparent)]
    Ecp(#[from] EcpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    /// `√(p̂(1 − p̂)/trials)`.
    pub standard_error: f64,
    pub seed: u64,
}

impl EnsembleStats {
    pub fn from_counts(trials: u64, successes: u64, seed: u64) -> Self {
        let estimate = successes as f64 / trials as f64;
        EnsembleStats {
            trials,
            successes,
            estimate,
            standard_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
            seed,
        }
    }

    /// Standardized distance from `expected`. A zero standard error gives
    /// zero on an exact match and an infinite score otherwise.
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = self.estimate - expected;
        if self.standard_error > 0.0 {
            diff / self.standard_error
        } else if diff.abs() <= 1e-15 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

/// Register size and detector model for trajectory sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub n_photons: usize,
    pub model: ProbeModel,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig { n_photons: 2, model: ProbeModel::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trajectory {
    pub verdict: RoundVerdict,
    pub rounds_used: usize,
}

/// Run the iterated protocol on one fresh GHZ-class system until success or
/// `rounds` failures.
pub fn run_trajectory<R: Rng + ?Sized>(
    config: &TrajectoryConfig,
    c: SchmidtCoefficients,
    rounds: usize,
    rng: &mut R,
) -> Result<Trajectory, EcpError> {
    let mut state = ghz_state(config.n_photons, c)?;
    let mut coeffs = c;
    for round in 1..=rounds {
        let r = round_statevector(&state, 0, coeffs, &config.model, rng)?;
        match r.verdict {
            RoundVerdict::Success => return Ok(Trajectory { verdict: RoundVerdict::Success, rounds_used: round }),
            RoundVerdict::Failure => {
                coeffs = r.record.next_coefficients.expect("failure carries next coefficients");
                state = r.state;
            }
        }
    }
    Ok(Trajectory { verdict: RoundVerdict::Failure, rounds_used: rounds })
}

/// Two-photon ideal-detector estimate of `P_n`.
pub fn estimate_success(
    c: SchmidtCoefficients,
    rounds: usize,
    trials: u64,
    seed: u64,
) -> Result<EnsembleStats, MonteCarloError> {
    estimate_success_with(&TrajectoryConfig::default(), c, rounds, trials, seed)
}

pub fn estimate_success_with(
    config: &TrajectoryConfig,
    c: SchmidtCoefficients,
    rounds: usize,
    trials: u64,
    seed: u64,
) -> Result<EnsembleStats, MonteCarloError> {
    if trials == 0 {
        return Err(MonteCarloError::ZeroTrials);
    }
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            run_trajectory(config, c, rounds, &mut rng).map(|tr| tr.verdict == RoundVerdict::Success)
        })
        .try_fold(|| 0u64, |acc, r| r.map(|ok| acc + ok as u64))
        .try_reduce(|| 0, |x, y| Ok(x + y))?;
    Ok(EnsembleStats::from_counts(trials, successes, seed))
}
