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

//! Full state-vector execution of a concentration round.

use std::ops::Range;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{failure_coefficients, prepare_ancilla, projection_basis, EcpError, RoundVerdict, SchmidtCoefficients};
use crate::pcd::{pcd_measure, pcd_project, Parity, ParityOutcome, ProbeModel};
use crate::quantum::{BasisOutcome, PureState, SingleQubitUnitary, DEFAULT_MAX_PHOTONS};

/// `a|H…H⟩ + b|V…V⟩` on `n_photons` photons.
pub fn ghz_state(n_photons: usize, c: SchmidtCoefficients) -> Result<PureState, EcpError> {
    if n_photons < 2 {
        return Err(EcpError::TooFewPhotons(n_photons));
    }
    if n_photons > DEFAULT_MAX_PHOTONS {
        return Err(crate::quantum::QuantumError::PhotonLimit { requested: n_photons, max: DEFAULT_MAX_PHOTONS }.into());
    }
    let dim = 1usize << n_photons;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[0] = Complex64::new(c.a(), 0.0);
    amplitudes[dim - 1] = Complex64::new(c.b(), 0.0);
    Ok(PureState::new(amplitudes)?)
}

/// How an `N`-photon GHZ-class state maps onto the two-level form
/// `a|H⟩_A|H′⟩ + b|V⟩_A|V′⟩` with `|H′⟩ = |H…H⟩` and `|V′⟩ = |V…V⟩` on the
/// remote photons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhzReduction {
    pub n_photons: usize,
    pub alice_qubit: usize,
    pub remote_qubits: Range<usize>,
}

impl GhzReduction {
    pub fn is_identity(&self) -> bool {
        self.n_photons == 2
    }

    pub fn embed(&self, c: SchmidtCoefficients) -> Result<PureState, EcpError> {
        ghz_state(self.n_photons, c)
    }

    /// Amplitudes on `|H⟩|H′⟩` and `|V⟩|V′⟩`, or `None` if `state` has weight
    /// outside that span (beyond 1e−12).
    pub fn two_level_amplitudes(&self, state: &PureState) -> Option<(Complex64, Complex64)> {
        if state.photon_count() != self.n_photons {
            return None;
        }
        let amps = state.amplitudes();
        let last = amps.len() - 1;
        let stray: f64 = amps[1..last].iter().map(|z| z.norm_sqr()).sum();
        (stray <= 1e-12).then(|| (amps[0], amps[last]))
    }
}

/// Reduce an `n_photons` GHZ-class state to the two-photon analysis.
///
/// The coefficients are unchanged; every two-photon formula applies as is.
pub fn ghz_reduce(n_photons: usize, c: SchmidtCoefficients) -> Result<(SchmidtCoefficients, GhzReduction), EcpError> {
    if n_photons < 2 {
        return Err(EcpError::TooFewPhotons(n_photons));
    }
    Ok((c, GhzReduction { n_photons, alice_qubit: 0, remote_qubits: 1..n_photons }))
}

/// Per-round log of what Alice did and saw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub coefficients: SchmidtCoefficients,
    /// True parity the state was projected onto.
    pub parity: ParityOutcome,
    pub reported_parity: Parity,
    pub parity_probability: f64,
    pub bit_flip_applied: bool,
    pub ancilla_outcome: BasisOutcome,
    pub ancilla_probability: f64,
    pub verdict: RoundVerdict,
    /// Coefficients Alice assumes for the next round on failure.
    pub next_coefficients: Option<SchmidtCoefficients>,
    /// Fidelity of the post-state with the GHZ state the verdict promises.
    pub target_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundResult {
    pub verdict: RoundVerdict,
    pub state: PureState,
    pub record: RoundRecord,
}

fn verdict_of(outcome: BasisOutcome) -> RoundVerdict {
    match outcome {
        BasisOutcome::Orthogonal => RoundVerdict::Success,
        BasisOutcome::Primary => RoundVerdict::Failure,
    }
}

fn promised_state(n_photons: usize, c: SchmidtCoefficients, verdict: RoundVerdict) -> Result<PureState, EcpError> {
    match verdict {
        RoundVerdict::Success => ghz_state(n_photons, SchmidtCoefficients::maximally_entangled()),
        RoundVerdict::Failure => ghz_state(n_photons, failure_coefficients(c)),
    }
}

/// Sample one concentration round on `state`, which must be the GHZ-class
/// state described by `c`.
///
/// The ancilla is appended after the last photon, parity-checked against
/// `alice_qubit`, bit-flipped when the detector reports odd parity, and
/// finally absorbed by a measurement in `projection_basis(c)`.
pub fn round_statevector<R: Rng + ?Sized>(
    state: &PureState,
    alice_qubit: usize,
    c: SchmidtCoefficients,
    model: &ProbeModel,
    rng: &mut R,
) -> Result<RoundResult, EcpError> {
    let n = state.photon_count();
    debug_assert!(
        model.misclassification() > 0.0
            || ghz_state(n, c).and_then(|g| Ok(state.fidelity(&g)?)).is_ok_and(|f| f > 1.0 - 1e-9),
        "input state is not the GHZ-class state of {c:?}"
    );
    let extended = state.tensor(&prepare_ancilla())?;
    let ancilla = n;
    let reading = pcd_measure(&extended, alice_qubit, ancilla, model, rng)?;
    let bit_flip_applied = reading.reported == Parity::Odd;
    let corrected = if bit_flip_applied {
        reading.post_state.apply_unitary(ancilla, &SingleQubitUnitary::pauli_x())?
    } else {
        reading.post_state
    };
    let basis = projection_basis(c);
    let measured = corrected.measure_qubit(ancilla, basis.basis(), rng.random())?;
    let verdict = verdict_of(measured.outcome);
    let target_fidelity = measured.post_state.fidelity(&promised_state(n, c, verdict)?)?;
    let record = RoundRecord {
        coefficients: c,
        parity: reading.outcome,
        reported_parity: reading.reported,
        parity_probability: reading.probability,
        bit_flip_applied,
        ancilla_outcome: measured.outcome,
        ancilla_probability: measured.probability,
        verdict,
        next_coefficients: (verdict == RoundVerdict::Failure).then(|| failure_coefficients(c)),
        target_fidelity,
    };
    Ok(RoundResult { verdict, state: measured.post_state, record })
}

/// One fully resolved path through a round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundBranch {
    pub parity: Parity,
    pub reported: Parity,
    pub ancilla_outcome: BasisOutcome,
    /// Joint probability of this path.
    pub probability: f64,
    /// State right after the parity projection, before any correction.
    pub after_parity: PureState,
    pub after_correction: PureState,
    pub post_state: PureState,
    pub verdict: RoundVerdict,
}

/// Enumerate every nonzero-probability path of one round without sampling.
pub fn round_branches(
    state: &PureState,
    alice_qubit: usize,
    c: SchmidtCoefficients,
    model: &ProbeModel,
) -> Result<Vec<RoundBranch>, EcpError> {
    let extended = state.tensor(&prepare_ancilla())?;
    let ancilla = state.photon_count();
    let basis = projection_basis(c);
    let eps = model.misclassification();
    let mut branches = Vec::with_capacity(8);
    for parity in [Parity::Even, Parity::Odd] {
        let (p_parity, after_parity) = pcd_project(&extended, alice_qubit, ancilla, model, parity)?;
        let Some(after_parity) = after_parity else { continue };
        for (reported, p_report) in [(parity, 1.0 - eps), (parity.flipped(), eps)] {
            if p_report == 0.0 {
                continue;
            }
            let after_correction = if reported == Parity::Odd {
                after_parity.apply_unitary(ancilla, &SingleQubitUnitary::pauli_x())?
            } else {
                after_parity.clone()
            };
            for outcome in [BasisOutcome::Primary, BasisOutcome::Orthogonal] {
                let (p_ancilla, post) = after_correction.project_qubit(ancilla, basis.basis().vector(outcome))?;
                let Some(post_state) = post else { continue };
                branches.push(RoundBranch {
                    parity,
                    reported,
                    ancilla_outcome: outcome,
                    probability: p_parity * p_report * p_ancilla,
                    after_parity: after_parity.clone(),
                    after_correction: after_correction.clone(),
                    post_state,
                    verdict: verdict_of(outcome),
                });
            }
        }
    }
    Ok(branches)
}
