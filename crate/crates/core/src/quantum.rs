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

//! Dense pure states of polarization qubits.
//!
//! A register of `n` photons is stored as `2ⁿ` complex amplitudes. Basis kets
//! are encoded with `H → 0`, `V → 1`, big-endian by photon index, so photon 0
//! is the most significant bit of the amplitude index:
//!
//! ```text
//! |H H V⟩  →  0b001 = 1
//! |V H H⟩  →  0b100 = 4
//! ```
//!
//! States are immutable values. Every operation returns a new state.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for unitarity, orthonormality and normalization checks.
pub const TOLERANCE: f64 = 1e-12;

/// Largest register [`PureState::tensor`] will build.
pub const DEFAULT_MAX_PHOTONS: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("register of {requested} photons exceeds the limit of {max}")]
    PhotonLimit { requested: usize, max: usize },
    #[error("qubit {qubit} out of range for a {photon_count}-photon register")]
    QubitOutOfRange { qubit: usize, photon_count: usize },
    #[error("dimension mismatch: {left} vs {right} photons")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude vector of length {0} is not a power of two")]
    InvalidLength(usize),
    #[error("the zero vector is not a valid state")]
    ZeroVector,
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("basis vectors are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("qubits must be distinct (got {0} twice)")]
    SameQubit(usize),
    #[error("invalid basis ket label {0:?}")]
    InvalidLabel(String),
}

/// Polarization of a single photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn bit(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Polarization::H
        } else {
            Polarization::V
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

/// A computational basis ket `|p₀ p₁ … pₙ₋₁⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisKet {
    labels: Vec<Polarization>,
}

impl BasisKet {
    pub fn new(labels: Vec<Polarization>) -> Self {
        BasisKet { labels }
    }

    /// Decode an amplitude index of an `photon_count`-photon register.
    pub fn from_index(index: usize, photon_count: usize) -> Self {
        debug_assert!(photon_count == 0 || index >> photon_count == 0);
        let labels = (0..photon_count).map(|q| Polarization::from_bit(index >> (photon_count - 1 - q))).collect();
        BasisKet { labels }
    }

    pub fn index(&self) -> usize {
        self.labels.iter().fold(0, |acc, p| (acc << 1) | p.bit())
    }

    pub fn labels(&self) -> &[Polarization] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.labels {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

impl FromStr for BasisKet {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'H' | 'h' => Ok(Polarization::H),
                'V' | 'v' => Ok(Polarization::V),
                _ => Err(QuantumError::InvalidLabel(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BasisKet::new)
    }
}

/// Polarization label of `qubit` inside amplitude index `index`.
#[inline]
pub(crate) fn label_at(index: usize, qubit: usize, photon_count: usize) -> Polarization {
    Polarization::from_bit(index >> (photon_count - 1 - qubit))
}

/// Insert `bit` at position `qubit` of a reduced index over `photon_count - 1` photons.
#[inline]
fn insert_bit(reduced: usize, qubit: usize, photon_count: usize, bit: usize) -> usize {
    let shift = photon_count - 1 - qubit;
    let low = reduced & ((1 << shift) - 1);
    let high = reduced >> shift;
    (high << (shift + 1)) | (bit << shift) | low
}

/// A 2×2 unitary acting on one polarization qubit.
///
/// `matrix[row][col]` so that `|out⟩ = U |in⟩` with rows indexed by the output
/// label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitUnitary {
    matrix: [[Complex64; 2]; 2],
}

impl SingleQubitUnitary {
    pub fn new(matrix: [[Complex64; 2]; 2]) -> Result<Self, QuantumError> {
        let mut deviation: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let entry: Complex64 = (0..2).map(|k| matrix[k][i].conj() * matrix[k][j]).sum();
                let expected = if i == j { ONE } else { ZERO };
                deviation = deviation.max((entry - expected).norm());
            }
        }
        if deviation > TOLERANCE {
            return Err(QuantumError::NotUnitary(deviation));
        }
        Ok(SingleQubitUnitary { matrix })
    }

    pub fn identity() -> Self {
        SingleQubitUnitary { matrix: [[ONE, ZERO], [ZERO, ONE]] }
    }

    /// Bit flip `σₓ = |H⟩⟨V| + |V⟩⟨H|`.
    pub fn pauli_x() -> Self {
        SingleQubitUnitary { matrix: [[ZERO, ONE], [ONE, ZERO]] }
    }

    /// Phase flip `σ_z = |H⟩⟨H| − |V⟩⟨V|`.
    pub fn pauli_z() -> Self {
        SingleQubitUnitary { matrix: [[ONE, ZERO], [ZERO, -ONE]] }
    }

    pub fn hadamard() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        SingleQubitUnitary { matrix: [[s, s], [s, -s]] }
    }

    /// Real rotation of the polarization plane by `angle` radians.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let (s, c) = (Complex64::new(s, 0.0), Complex64::new(c, 0.0));
        SingleQubitUnitary { matrix: [[c, -s], [s, c]] }
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.matrix
    }
}

/// Which vector of a [`MeasurementBasis`] a projective measurement selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisOutcome {
    /// The first basis vector `v`.
    Primary,
    /// The orthogonal complement `v⊥`.
    Orthogonal,
}

/// An orthonormal single-qubit basis `{v, v⊥}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    primary: [Complex64; 2],
    orthogonal: [Complex64; 2],
}

impl MeasurementBasis {
    pub fn new(primary: [Complex64; 2], orthogonal: [Complex64; 2]) -> Result<Self, QuantumError> {
        let dot = |x: &[Complex64; 2], y: &[Complex64; 2]| x[0].conj() * y[0] + x[1].conj() * y[1];
        let deviation = (dot(&primary, &primary) - ONE)
            .norm()
            .max((dot(&orthogonal, &orthogonal) - ONE).norm())
            .max(dot(&primary, &orthogonal).norm());
        if deviation > TOLERANCE {
            return Err(QuantumError::NotOrthonormal(deviation));
        }
        Ok(MeasurementBasis { primary, orthogonal })
    }

    /// `{|H⟩, |V⟩}`.
    pub fn computational() -> Self {
        MeasurementBasis { primary: [ONE, ZERO], orthogonal: [ZERO, ONE] }
    }

    /// `{|+⟩, |−⟩}`.
    pub fn diagonal() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        MeasurementBasis { primary: [s, s], orthogonal: [s, -s] }
    }

    pub fn vector(&self, outcome: BasisOutcome) -> &[Complex64; 2] {
        match outcome {
            BasisOutcome::Primary => &self.primary,
            BasisOutcome::Orthogonal => &self.orthogonal,
        }
    }

    pub fn primary(&self) -> &[Complex64; 2] {
        &self.primary
    }

    pub fn orthogonal(&self) -> &[Complex64; 2] {
        &self.orthogonal
    }
}

/// Result of a destructive single-qubit measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub outcome: BasisOutcome,
    /// Probability of the selected outcome.
    pub probability: f64,
    /// Normalized state of the remaining photons.
    pub post_state: PureState,
}

/// A normalized pure state of `photon_count` polarization qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    photon_count: usize,
}

impl PureState {
    /// Build a state from raw amplitudes, normalizing them.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(QuantumError::InvalidLength(len));
        }
        let photon_count = len.trailing_zeros() as usize;
        if photon_count > DEFAULT_MAX_PHOTONS {
            return Err(QuantumError::PhotonLimit { requested: photon_count, max: DEFAULT_MAX_PHOTONS });
        }
        Self::normalized(amplitudes, photon_count).ok_or(QuantumError::ZeroVector)
    }

    /// Real amplitudes, for the common case of polarization states with real coefficients.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, QuantumError> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Superposition `Σ cₖ |ketₖ⟩`, normalized.
    pub fn from_terms<'a, I>(photon_count: usize, terms: I) -> Result<Self, QuantumError>
    where
        I: IntoIterator<Item = (&'a str, Complex64)>,
    {
        if photon_count > DEFAULT_MAX_PHOTONS {
            return Err(QuantumError::PhotonLimit { requested: photon_count, max: DEFAULT_MAX_PHOTONS });
        }
        let mut amplitudes = vec![ZERO; 1 << photon_count];
        for (label, c) in terms {
            let ket: BasisKet = label.parse()?;
            if ket.len() != photon_count {
                return Err(QuantumError::DimensionMismatch { left: photon_count, right: ket.len() });
            }
            amplitudes[ket.index()] += c;
        }
        Self::new(amplitudes)
    }

    pub fn basis(ket: &BasisKet) -> Result<Self, QuantumError> {
        if ket.len() > DEFAULT_MAX_PHOTONS {
            return Err(QuantumError::PhotonLimit { requested: ket.len(), max: DEFAULT_MAX_PHOTONS });
        }
        let mut amplitudes = vec![ZERO; 1 << ket.len()];
        amplitudes[ket.index()] = ONE;
        Ok(PureState { amplitudes, photon_count: ket.len() })
    }

    pub fn horizontal() -> Self {
        PureState { amplitudes: vec![ONE, ZERO], photon_count: 1 }
    }

    pub fn vertical() -> Self {
        PureState { amplitudes: vec![ZERO, ONE], photon_count: 1 }
    }

    /// `(|H⟩ + |V⟩)/√2`.
    pub fn plus() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        PureState { amplitudes: vec![s, s], photon_count: 1 }
    }

    fn normalized(mut amplitudes: Vec<Complex64>, photon_count: usize) -> Option<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if norm_sqr.is_nan() || norm_sqr <= 0.0 || norm_sqr.is_infinite() {
            return None;
        }
        let scale = norm_sqr.sqrt().recip();
        amplitudes.iter_mut().for_each(|c| *c *= scale);
        Some(PureState { amplitudes, photon_count })
    }

    pub fn photon_count(&self) -> usize {
        self.photon_count
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, ket: &BasisKet) -> Complex64 {
        assert_eq!(ket.len(), self.photon_count, "ket length must match the register");
        self.amplitudes[ket.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), QuantumError> {
        if qubit >= self.photon_count {
            return Err(QuantumError::QubitOutOfRange { qubit, photon_count: self.photon_count });
        }
        Ok(())
    }

    /// Kronecker product `self ⊗ right`; `right`'s photons follow `self`'s.
    pub fn tensor(&self, right: &PureState) -> Result<PureState, QuantumError> {
        self.tensor_with_limit(right, DEFAULT_MAX_PHOTONS)
    }

    pub fn tensor_with_limit(&self, right: &PureState, max_photons: usize) -> Result<PureState, QuantumError> {
        let photon_count = self.photon_count + right.photon_count;
        if photon_count > max_photons {
            return Err(QuantumError::PhotonLimit { requested: photon_count, max: max_photons });
        }
        let amplitudes = self.amplitudes.iter().flat_map(|&l| right.amplitudes.iter().map(move |&r| l * r)).collect();
        Ok(PureState { amplitudes, photon_count })
    }

    /// Apply `u` to photon `qubit`.
    pub fn apply_unitary(&self, qubit: usize, u: &SingleQubitUnitary) -> Result<PureState, QuantumError> {
        self.check_qubit(qubit)?;
        let n = self.photon_count;
        let m = u.matrix();
        let mut amplitudes = self.amplitudes.clone();
        for reduced in 0..(1usize << (n - 1)) {
            let i0 = insert_bit(reduced, qubit, n, 0);
            let i1 = insert_bit(reduced, qubit, n, 1);
            let (x0, x1) = (self.amplitudes[i0], self.amplitudes[i1]);
            amplitudes[i0] = m[0][0] * x0 + m[0][1] * x1;
            amplitudes[i1] = m[1][0] * x0 + m[1][1] * x1;
        }
        Ok(PureState { amplitudes, photon_count: n })
    }

    /// Unnormalized projection of `qubit` onto `vector`, with that qubit removed.
    fn project_raw(&self, qubit: usize, vector: &[Complex64; 2]) -> Vec<Complex64> {
        let n = self.photon_count;
        let (c0, c1) = (vector[0].conj(), vector[1].conj());
        (0..(1usize << (n - 1)))
            .map(|reduced| {
                c0 * self.amplitudes[insert_bit(reduced, qubit, n, 0)]
                    + c1 * self.amplitudes[insert_bit(reduced, qubit, n, 1)]
            })
            .collect()
    }

    /// Project `qubit` onto `vector` and absorb it.
    ///
    /// Returns the branch probability and, when it is nonzero, the normalized
    /// state of the remaining photons.
    pub fn project_qubit(
        &self,
        qubit: usize,
        vector: &[Complex64; 2],
    ) -> Result<(f64, Option<PureState>), QuantumError> {
        self.check_qubit(qubit)?;
        let raw = self.project_raw(qubit, vector);
        let probability: f64 = raw.iter().map(|c| c.norm_sqr()).sum();
        Ok((probability, Self::normalized(raw, self.photon_count - 1)))
    }

    /// Deterministic `(p_v, p_v⊥)` for measuring `qubit` in `basis`.
    pub fn branch_probabilities(&self, qubit: usize, basis: &MeasurementBasis) -> Result<(f64, f64), QuantumError> {
        self.check_qubit(qubit)?;
        let p = |v: &[Complex64; 2]| self.project_raw(qubit, v).iter().map(|c| c.norm_sqr()).sum::<f64>();
        Ok((p(basis.primary()), p(basis.orthogonal())))
    }

    /// Destructive measurement of `qubit` in `basis`.
    ///
    /// `draw` is a uniform sample in `[0, 1)`; the outcome is `v` when
    /// `draw < p_v`.
    pub fn measure_qubit(
        &self,
        qubit: usize,
        basis: &MeasurementBasis,
        draw: f64,
    ) -> Result<Measurement, QuantumError> {
        let (p_primary, _) = self.branch_probabilities(qubit, basis)?;
        let outcome = if draw < p_primary { BasisOutcome::Primary } else { BasisOutcome::Orthogonal };
        let (probability, post_state) = self.project_qubit(qubit, basis.vector(outcome))?;
        let post_state = post_state.expect("selected measurement branch has zero norm");
        Ok(Measurement { outcome, probability, post_state })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64, QuantumError> {
        if self.photon_count != other.photon_count {
            return Err(QuantumError::DimensionMismatch { left: self.photon_count, right: other.photon_count });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨target|self⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, target: &PureState) -> Result<f64, QuantumError> {
        Ok(target.inner(self)?.norm_sqr().min(1.0))
    }

    /// Keep only amplitudes whose index satisfies `keep`, then renormalize.
    ///
    /// Returns the retained probability mass and the post-state, if any.
    pub(crate) fn restrict<F>(&self, keep: F) -> (f64, Option<PureState>)
    where
        F: Fn(usize) -> bool,
    {
        let raw: Vec<Complex64> =
            self.amplitudes.iter().enumerate().map(|(i, &c)| if keep(i) { c } else { ZERO }).collect();
        let probability = raw.iter().map(|c| c.norm_sqr()).sum();
        (probability, Self::normalized(raw, self.photon_count))
    }
}
