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

//! Simulation and analysis of optimal nonlocal entanglement concentration
//! for partially entangled GHZ-class photon states.
//!
//! * [`quantum`]: dense polarization-qubit pure states.
//! * [`pcd`]: the cross-Kerr parity-check detector.
//! * [`ecp`]: concentration rounds, the success-probability recursion and
//!   comparison baselines.
//! * [`locc`]: a multi-party harness with a simulated classical channel.
//! * [`montecarlo`]: seeded ensembles and brute-force oracles.

pub mod ecp;
pub mod locc;
pub mod montecarlo;
pub mod pcd;
pub mod quantum;

pub use ecp::{
    entanglement, failure_coefficients, projection_basis, round_exact, total_success_probability, RoundVerdict,
    SchmidtCoefficients,
};
pub use pcd::{Parity, ParityOutcome, ProbeModel};
pub use quantum::{BasisKet, MeasurementBasis, Polarization, PureState, SingleQubitUnitary};
