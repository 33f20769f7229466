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

//! Pool simulation of pairwise Schmidt-projection concentration.
//!
//! Two copies of `a|HH⟩ + b|VV⟩` are combined after both photons of the
//! second copy are bit-flipped, giving `(a|HH⟩ + b|VV⟩)(b|HH⟩ + a|VV⟩)` on
//! `A₁B₁A₂B₂`. A parity check on `A₁A₂` selects
//!
//! ```text
//! even: ab(|HHHH⟩ + |VVVV⟩)        p = 2a²b²
//! odd:  a²|HHVV⟩ + b²|VVHH⟩        p = a⁴ + b⁴
//! ```
//!
//! and `A₂B₂` are then measured in the diagonal basis. The even branch leaves
//! a Bell pair on `A₁B₁`; the odd branch leaves one less-entangled pair that
//! is recycled into the next level.

use rand::Rng;
use serde::Serialize;

use super::{trial_rng, MonteCarloError};
use crate::ecp::{ghz_state, EcpError, SchmidtCoefficients};
use crate::pcd::{pcd_measure, Parity, ProbeModel};
use crate::quantum::{BasisOutcome, MeasurementBasis, SingleQubitUnitary};

/// Result of one pairwise attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairOutcome {
    Success,
    /// One system survives with these coefficients.
    Recycled(SchmidtCoefficients),
}

/// Run one Schmidt-projection attempt on two systems with coefficients `c`.
pub fn schmidt_projection_attempt<R: Rng + ?Sized>(
    c: SchmidtCoefficients,
    rng: &mut R,
) -> Result<PairOutcome, EcpError> {
    let x = SingleQubitUnitary::pauli_x();
    let first = ghz_state(2, c)?;
    let second = ghz_state(2, c)?.apply_unitary(0, &x)?.apply_unitary(1, &x)?;
    let joint = first.tensor(&second)?;
    let reading = pcd_measure(&joint, 0, 2, &ProbeModel::default(), rng)?;

    let diagonal = MeasurementBasis::diagonal();
    let b2 = reading.post_state.measure_qubit(3, &diagonal, rng.random())?;
    let a2 = b2.post_state.measure_qubit(2, &diagonal, rng.random())?;
    let minus_count = [b2.outcome, a2.outcome].iter().filter(|&&o| o == BasisOutcome::Orthogonal).count();
    let pair = if minus_count % 2 == 1 {
        a2.post_state.apply_unitary(0, &SingleQubitUnitary::pauli_z())?
    } else {
        a2.post_state
    };

    match reading.outcome.parity {
        Parity::Even => {
            debug_assert!(pair.fidelity(&ghz_state(2, SchmidtCoefficients::maximally_entangled())?)? > 1.0 - 1e-9);
            Ok(PairOutcome::Success)
        }
        Parity::Odd => {
            let amps = pair.amplitudes();
            Ok(PairOutcome::Recycled(SchmidtCoefficients::normalized(amps[0].re, amps[3].re)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoolLevel {
    pub systems: u64,
    pub pairs: u64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoolStats {
    pub pool_size: u64,
    pub successes: u64,
    /// Bell pairs per initial system.
    pub yield_estimate: f64,
    /// First-order error of the yield propagated through the recycling levels.
    pub standard_error: f64,
    pub seed: u64,
    pub levels: Vec<PoolLevel>,
}

impl PoolStats {
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = self.yield_estimate - expected;
        if self.standard_error > 0.0 {
            diff / self.standard_error
        } else if diff.abs() <= 1e-15 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

/// Concentrate a pool of `pool_size` identical systems over `levels` levels.
///
/// At each level the surviving systems are paired off; an unpaired leftover
/// is discarded. Level `l` draws from substream `l` of `seed`.
pub fn pool_schmidt_oracle(
    c: SchmidtCoefficients,
    levels: usize,
    pool_size: u64,
    seed: u64,
) -> Result<PoolStats, MonteCarloError> {
    if pool_size == 0 || pool_size % 2 == 1 {
        return Err(MonteCarloError::InvalidPool(pool_size as usize));
    }
    let mut stats = Vec::with_capacity(levels);
    let (mut systems, mut coeffs) = (pool_size, c);
    for level in 0..levels {
        let mut rng = trial_rng(seed, level as u64);
        let pairs = systems / 2;
        let (mut successes, mut recycled) = (0u64, 0u64);
        let mut next = coeffs;
        for _ in 0..pairs {
            match schmidt_projection_attempt(coeffs, &mut rng)? {
                PairOutcome::Success => successes += 1,
                PairOutcome::Recycled(c_next) => {
                    recycled += 1;
                    next = c_next;
                }
            }
        }
        stats.push(PoolLevel { systems, pairs, successes });
        systems = recycled;
        coeffs = next;
    }
    let successes: u64 = stats.iter().map(|l| l.successes).sum();

    // Var ≈ Σ_l pairs_l p_l (1 − p_l) (1 − y_{l+1})², with y_{l+1} the observed
    // downstream yield per system entering level l+1.
    let mut variance = 0.0;
    let mut downstream = 0u64;
    for (i, level) in stats.iter().enumerate().rev() {
        let next_systems = stats.get(i + 1).map_or(level.pairs - level.successes, |n| n.systems);
        let y_next = if next_systems > 0 { downstream as f64 / next_systems as f64 } else { 0.0 };
        if level.pairs > 0 {
            let p = level.successes as f64 / level.pairs as f64;
            variance += level.pairs as f64 * p * (1.0 - p) * (1.0 - y_next).powi(2);
        }
        downstream += level.successes;
    }
    Ok(PoolStats {
        pool_size,
        successes,
        yield_estimate: successes as f64 / pool_size as f64,
        standard_error: variance.sqrt() / pool_size as f64,
        seed,
        levels: stats,
    })
}
