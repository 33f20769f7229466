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

//! Cross-Kerr parity-check detector.
//!
//! The two photons are split by polarizing beam splitters so that an `H`
//! photon passes a `+θ` Kerr medium and a `V` photon a `−θ` medium. The probe
//! therefore picks up `+θ` for `HH`, `−θ` for `VV` and `0` for `HV`/`VH`. An
//! X-quadrature measurement cannot tell `+θ` from `−θ`, so the detector only
//! resolves the phase magnitude and hence the parity, leaving superpositions
//! inside each parity subspace intact.
//!
//! The probe beam is not simulated as a field; it is reduced to the signed
//! phase it would acquire.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{label_at, Polarization, PureState, QuantumError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcdError {
    #[error("probe phase must be positive and finite, got {0}")]
    InvalidTheta(f64),
    #[error("misclassification probability must lie in [0, 0.5), got {0}")]
    InvalidMisclassification(f64),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flipped(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn of(a: Polarization, b: Polarization) -> Self {
        if a == b {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Signed probe phase in units of θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseShift {
    PlusTheta,
    MinusTheta,
    Zero,
}

impl PhaseShift {
    pub fn radians(self, theta: f64) -> f64 {
        match self {
            PhaseShift::PlusTheta => theta,
            PhaseShift::MinusTheta => -theta,
            PhaseShift::Zero => 0.0,
        }
    }
}

/// What the X-quadrature measurement resolves: the phase magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseClass {
    Theta,
    Zero,
}

/// Which polarization is routed through the `+θ` medium.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    #[default]
    HorizontalPositive,
    VerticalPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeModel {
    theta: f64,
    misclassification: f64,
    convention: SignConvention,
}

impl Default for ProbeModel {
    fn default() -> Self {
        ProbeModel { theta: 0.1, misclassification: 0.0, convention: SignConvention::HorizontalPositive }
    }
}

impl ProbeModel {
    /// A detector with Kerr phase `theta = χt` whose reported label is flipped
    /// with probability `misclassification`.
    pub fn new(theta: f64, misclassification: f64) -> Result<Self, PcdError> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(PcdError::InvalidTheta(theta));
        }
        if !(0.0..0.5).contains(&misclassification) {
            return Err(PcdError::InvalidMisclassification(misclassification));
        }
        Ok(ProbeModel { theta, misclassification, convention: SignConvention::HorizontalPositive })
    }

    pub fn with_convention(self, convention: SignConvention) -> Self {
        ProbeModel { convention, ..self }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn misclassification(&self) -> f64 {
        self.misclassification
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    /// Phase the probe acquires from a photon pair.
    pub fn probe_phase(&self, pair: (Polarization, Polarization)) -> PhaseShift {
        use Polarization::{H, V};
        let (same, other) = match self.convention {
            SignConvention::HorizontalPositive => (PhaseShift::PlusTheta, PhaseShift::MinusTheta),
            SignConvention::VerticalPositive => (PhaseShift::MinusTheta, PhaseShift::PlusTheta),
        };
        match pair {
            (H, H) => same,
            (V, V) => other,
            _ => PhaseShift::Zero,
        }
    }
}

pub fn x_quadrature_class(shift: PhaseShift) -> PhaseClass {
    match shift {
        PhaseShift::PlusTheta | PhaseShift::MinusTheta => PhaseClass::Theta,
        PhaseShift::Zero => PhaseClass::Zero,
    }
}

/// Parity together with the probe phase class that revealed it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityOutcome {
    pub parity: Parity,
    pub phase_class: PhaseClass,
}

impl ParityOutcome {
    pub fn from_class(phase_class: PhaseClass) -> Self {
        let parity = match phase_class {
            PhaseClass::Theta => Parity::Even,
            PhaseClass::Zero => Parity::Odd,
        };
        ParityOutcome { parity, phase_class }
    }

    pub fn from_parity(parity: Parity) -> Self {
        let phase_class = match parity {
            Parity::Even => PhaseClass::Theta,
            Parity::Odd => PhaseClass::Zero,
        };
        ParityOutcome { parity, phase_class }
    }
}

/// A sampled parity check.
#[derive(Debug, Clone, PartialEq)]
pub struct PcdReading {
    /// The parity the state was actually projected onto.
    pub outcome: ParityOutcome,
    /// The label the detector reports; differs from `outcome.parity` on a
    /// misclassification.
    pub reported: Parity,
    /// Probability of the projected branch.
    pub probability: f64,
    pub post_state: PureState,
}

fn check_pair(state: &PureState, i: usize, j: usize) -> Result<(), QuantumError> {
    let n = state.photon_count();
    for q in [i, j] {
        if q >= n {
            return Err(QuantumError::QubitOutOfRange { qubit: q, photon_count: n });
        }
    }
    if i == j {
        return Err(QuantumError::SameQubit(i));
    }
    Ok(())
}

/// Deterministic `(p_even, p_odd)` for photons `i` and `j`.
pub fn pcd_probabilities(state: &PureState, i: usize, j: usize) -> Result<(f64, f64), PcdError> {
    check_pair(state, i, j)?;
    let n = state.photon_count();
    let (mut even, mut odd) = (0.0, 0.0);
    for (index, amp) in state.amplitudes().iter().enumerate() {
        match Parity::of(label_at(index, i, n), label_at(index, j, n)) {
            Parity::Even => even += amp.norm_sqr(),
            Parity::Odd => odd += amp.norm_sqr(),
        }
    }
    Ok((even, odd))
}

/// Project photons `i`, `j` onto the subspace the probe assigns to `parity`.
///
/// Returns the branch probability and the renormalized post-state (both
/// photons retained), or `None` when the branch is empty.
pub fn pcd_project(
    state: &PureState,
    i: usize,
    j: usize,
    model: &ProbeModel,
    parity: Parity,
) -> Result<(f64, Option<PureState>), PcdError> {
    check_pair(state, i, j)?;
    let n = state.photon_count();
    let wanted = ParityOutcome::from_parity(parity).phase_class;
    Ok(state.restrict(|index| {
        let shift = model.probe_phase((label_at(index, i, n), label_at(index, j, n)));
        x_quadrature_class(shift) == wanted
    }))
}

/// Sampled, nondestructive parity check of photons `i` and `j`.
///
/// Two uniform draws are consumed from `rng`: one selects the projected
/// branch, the other decides whether the reported label is flipped.
pub fn pcd_measure<R: Rng + ?Sized>(
    state: &PureState,
    i: usize,
    j: usize,
    model: &ProbeModel,
    rng: &mut R,
) -> Result<PcdReading, PcdError> {
    let branch_draw: f64 = rng.random();
    let flip_draw: f64 = rng.random();
    let (p_even, _) = pcd_probabilities(state, i, j)?;
    let parity = if branch_draw < p_even { Parity::Even } else { Parity::Odd };
    let (probability, post_state) = pcd_project(state, i, j, model, parity)?;
    let post_state = post_state.expect("selected parity branch has zero norm");
    let reported = if flip_draw < model.misclassification { parity.flipped() } else { parity };
    Ok(PcdReading { outcome: ParityOutcome::from_parity(parity), reported, probability, post_state })
}
