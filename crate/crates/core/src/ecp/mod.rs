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

//! Projection-based entanglement concentration.
//!
//! A GHZ-class state `a|H…H⟩ + b|V…V⟩` is extended with a `|+⟩` ancilla,
//! parity-checked against Alice's photon and the ancilla is then measured in
//! the basis
//!
//! ```text
//! v  = a|H⟩ − b|V⟩
//! v⊥ = b|H⟩ + a|V⟩
//! ```
//!
//! The `v⊥` outcome (probability `2a²b²`) leaves the maximally entangled
//! state; the `v` outcome leaves `a²|H…H⟩ − b²|V…V⟩`, which is concentrated
//! again in the next round.

mod analytics;
mod round;

pub use analytics::{
    comparison_curves, concentration_report, schmidt_projection_yield, sum_of_products, total_success_probability,
    ComparisonPoint, ConcentrationReport,
};
pub use round::{
    ghz_reduce, ghz_state, round_branches, round_statevector, GhzReduction, RoundBranch, RoundRecord, RoundResult,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pcd::PcdError;
use crate::quantum::{MeasurementBasis, PureState, QuantumError, TOLERANCE};

/// Default number of concentration rounds.
pub const DEFAULT_ROUNDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EcpError {
    #[error("coefficients ({a}, {b}) are not normalized (|a²+b²−1| = {deviation:e})")]
    NotNormalized { a: f64, b: f64, deviation: f64 },
    #[error("coefficients must be finite")]
    NonFinite,
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("GHZ-class states need at least 2 photons, got {0}")]
    TooFewPhotons(usize),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Pcd(#[from] PcdError),
}

/// Signed real coefficients `(a, b)` of `a|H…H⟩ + b|V…V⟩`.
///
/// The global phase is fixed so that `a ≥ 0`, and `b ≥ 0` when `a = 0`. `b`
/// keeps its sign otherwise: the failure branch of a round turns it negative
/// and the next projection basis depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficients")]
pub struct SchmidtCoefficients {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawCoefficients {
    a: f64,
    b: f64,
}

impl TryFrom<RawCoefficients> for SchmidtCoefficients {
    type Error = EcpError;

    fn try_from(raw: RawCoefficients) -> Result<Self, Self::Error> {
        SchmidtCoefficients::new(raw.a, raw.b)
    }
}

impl SchmidtCoefficients {
    pub fn new(a: f64, b: f64) -> Result<Self, EcpError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(EcpError::NonFinite);
        }
        let deviation = (a * a + b * b - 1.0).abs();
        if deviation > TOLERANCE {
            return Err(EcpError::NotNormalized { a, b, deviation });
        }
        Ok(Self::canonical(a, b))
    }

    /// Rescale `(a, b)` to unit norm.
    pub fn normalized(a: f64, b: f64) -> Result<Self, EcpError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(EcpError::NonFinite);
        }
        let norm = a.hypot(b);
        if norm == 0.0 {
            return Err(EcpError::NotNormalized { a, b, deviation: 1.0 });
        }
        Ok(Self::canonical(a / norm, b / norm))
    }

    /// `a = √p`, `b = √(1 − p)`.
    pub fn from_alpha_squared(p: f64) -> Result<Self, EcpError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EcpError::OutOfRange { name: "alpha squared", value: p });
        }
        Ok(SchmidtCoefficients { a: p.sqrt(), b: (1.0 - p).sqrt() })
    }

    /// The `|a| ≤ |b|` state with entanglement `E = 2a²`.
    pub fn from_entanglement(e: f64) -> Result<Self, EcpError> {
        if !(0.0..=1.0).contains(&e) {
            return Err(EcpError::OutOfRange { name: "entanglement", value: e });
        }
        Self::from_alpha_squared(e / 2.0)
    }

    pub fn maximally_entangled() -> Self {
        SchmidtCoefficients { a: std::f64::consts::FRAC_1_SQRT_2, b: std::f64::consts::FRAC_1_SQRT_2 }
    }

    fn canonical(a: f64, b: f64) -> Self {
        let (a, b) = if a < 0.0 { (-a, -b) } else { (a, b) };
        let b = if a == 0.0 { b.abs() } else { b };
        // normalizes -0.0
        SchmidtCoefficients { a: a + 0.0, b: b + 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha_squared(&self) -> f64 {
        self.a * self.a
    }

    pub fn beta_squared(&self) -> f64 {
        self.b * self.b
    }

    pub fn is_product(&self) -> bool {
        self.a == 0.0 || self.b == 0.0
    }
}

/// Ancilla measurement basis matched to the current coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionBasis {
    coefficients: SchmidtCoefficients,
    basis: MeasurementBasis,
}

impl ProjectionBasis {
    /// Analyzer angle `φ` with `cos φ = a`, `sin φ = −b`.
    pub fn angle(&self) -> f64 {
        (-self.coefficients.b).atan2(self.coefficients.a)
    }

    pub fn basis(&self) -> &MeasurementBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> SchmidtCoefficients {
        self.coefficients
    }
}

pub fn projection_basis(c: SchmidtCoefficients) -> ProjectionBasis {
    let r = |x: f64| Complex64::new(x, 0.0);
    let basis = MeasurementBasis::new([r(c.a), r(-c.b)], [r(c.b), r(c.a)])
        .expect("projection basis of normalized coefficients is orthonormal");
    ProjectionBasis { coefficients: c, basis }
}

/// The `|+⟩` polarization ancilla Alice adds each round.
pub fn prepare_ancilla() -> PureState {
    PureState::plus()
}

/// Coefficients of the state left behind when the ancilla lands on `v`:
/// `(a², −b²) / √(a⁴ + b⁴)`.
pub fn failure_coefficients(c: SchmidtCoefficients) -> SchmidtCoefficients {
    let (a2, b2) = (c.alpha_squared(), c.beta_squared());
    let norm = (a2 * a2 + b2 * b2).sqrt();
    SchmidtCoefficients::canonical(a2 / norm, -b2 / norm)
}

/// `E = min(2a², 2b²)`.
pub fn entanglement(c: SchmidtCoefficients) -> f64 {
    2.0 * c.alpha_squared().min(c.beta_squared())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundVerdict {
    Success,
    Failure,
}

/// Branch probabilities of one ideal round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundDistribution {
    pub success_probability: f64,
    pub failure_probability: f64,
    pub failure_coefficients: SchmidtCoefficients,
}

impl RoundDistribution {
    pub fn outcome(&self, verdict: RoundVerdict) -> RoundOutcome {
        RoundOutcome {
            verdict,
            success_probability: self.success_probability,
            failure_coefficients: match verdict {
                RoundVerdict::Success => None,
                RoundVerdict::Failure => Some(self.failure_coefficients),
            },
        }
    }
}

/// A resolved round: the verdict plus, on failure, the recycled coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundOutcome {
    pub verdict: RoundVerdict,
    pub success_probability: f64,
    pub failure_coefficients: Option<SchmidtCoefficients>,
}

pub fn round_exact(c: SchmidtCoefficients) -> RoundDistribution {
    let (a2, b2) = (c.alpha_squared(), c.beta_squared());
    RoundDistribution {
        success_probability: 2.0 * a2 * b2,
        failure_probability: a2 * a2 + b2 * b2,
        failure_coefficients: failure_coefficients(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-12
    }

    #[test]
    fn coefficient_validation_and_phase_convention() {
        assert!(matches!(SchmidtCoefficients::new(0.6, 0.7), Err(EcpError::NotNormalized { .. })));
        assert!(matches!(SchmidtCoefficients::new(f64::NAN, 0.0), Err(EcpError::NonFinite)));
        let c = SchmidtCoefficients::new(-0.6, 0.8).unwrap();
        assert_eq!((c.a(), c.b()), (0.6, -0.8));
        let c = SchmidtCoefficients::new(0.0, -1.0).unwrap();
        assert_eq!((c.a(), c.b()), (0.0, 1.0));
        assert!(SchmidtCoefficients::from_entanglement(1.5).is_err());
        let c = SchmidtCoefficients::normalized(3.0, 4.0).unwrap();
        assert!(close(c.a(), 0.6) && close(c.b(), 0.8));
    }

    #[test]
    fn serde_validates() {
        let c: SchmidtCoefficients = serde_json::from_str(r#"{"a":0.6,"b":0.8}"#).unwrap();
        assert_eq!(c.b(), 0.8);
        assert!(serde_json::from_str::<SchmidtCoefficients>(r#"{"a":0.6,"b":0.6}"#).is_err());
    }

    #[test]
    fn ancilla_is_plus() {
        let a = prepare_ancilla();
        assert!(close(a.amplitudes()[0].re, FRAC_1_SQRT_2) && close(a.amplitudes()[1].re, FRAC_1_SQRT_2));
        let (p_h, p_v) = a.branch_probabilities(0, &MeasurementBasis::computational()).unwrap();
        assert!(close(p_h, 0.5) && close(p_v, 0.5));
        // (|HH⟩ + |VH⟩)/√2
        let t = a.tensor(&PureState::horizontal()).unwrap();
        let r = FRAC_1_SQRT_2;
        assert!(close(t.fidelity(&PureState::from_real(&[r, 0.0, r, 0.0]).unwrap()).unwrap(), 1.0));
    }

    #[test]
    fn projection_basis_examples() {
        let pb = projection_basis(SchmidtCoefficients::maximally_entangled());
        let v = pb.basis().primary();
        assert!(close(v[0].re, FRAC_1_SQRT_2) && close(v[1].re, -FRAC_1_SQRT_2));

        let pb = projection_basis(SchmidtCoefficients::new(1.0, 0.0).unwrap());
        assert_eq!(pb.basis(), &MeasurementBasis::computational());

        let c = SchmidtCoefficients::from_alpha_squared(0.2).unwrap();
        let pb = projection_basis(c);
        let v = pb.basis().primary();
        assert!((v[0].re - 0.4472135955).abs() < 1e-10 && (v[1].re + 0.894427191).abs() < 1e-9);
        assert!(close(pb.angle().cos(), c.a()) && close(pb.angle().sin(), -c.b()));
    }

    #[test]
    fn failure_coefficient_examples() {
        let f = failure_coefficients(SchmidtCoefficients::maximally_entangled());
        assert!(close(f.a(), FRAC_1_SQRT_2) && close(f.b(), -FRAC_1_SQRT_2));

        let fixed = SchmidtCoefficients::new(1.0, 0.0).unwrap();
        assert_eq!(failure_coefficients(fixed), fixed);
        let fixed = SchmidtCoefficients::new(0.0, 1.0).unwrap();
        assert_eq!(failure_coefficients(fixed), fixed);

        let f = failure_coefficients(SchmidtCoefficients::from_alpha_squared(0.2).unwrap());
        // 0.04/0.68 and 0.64/0.68
        assert!(close(f.alpha_squared(), 0.04 / 0.68) && close(f.beta_squared(), 0.64 / 0.68));
        assert!((f.alpha_squared() - 0.058824).abs() < 1e-6);
        assert!(f.b() < 0.0);
    }

    #[test]
    fn round_exact_examples() {
        let d = round_exact(SchmidtCoefficients::from_alpha_squared(0.2).unwrap());
        assert!(close(d.success_probability, 0.32));
        assert!(close(d.success_probability + d.failure_probability, 1.0));
        assert!(close(round_exact(SchmidtCoefficients::maximally_entangled()).success_probability, 0.5));
        assert_eq!(round_exact(SchmidtCoefficients::new(1.0, 0.0).unwrap()).success_probability, 0.0);
        let o = d.outcome(RoundVerdict::Failure);
        assert_eq!(o.failure_coefficients, Some(d.failure_coefficients));
        assert_eq!(d.outcome(RoundVerdict::Success).failure_coefficients, None);
    }

    #[test]
    fn entanglement_examples() {
        assert!(close(entanglement(SchmidtCoefficients::maximally_entangled()), 1.0));
        assert_eq!(entanglement(SchmidtCoefficients::new(1.0, 0.0).unwrap()), 0.0);
        assert!(close(entanglement(SchmidtCoefficients::from_alpha_squared(0.2).unwrap()), 0.4));
        assert!(close(entanglement(SchmidtCoefficients::from_alpha_squared(0.8).unwrap()), 0.4));
    }
}
