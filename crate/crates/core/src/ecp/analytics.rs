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

//! Closed-form success probabilities.
//!
//! The iterated protocol succeeds in round `k` with probability
//!
//! ```text
//! P_n(c) = 2a²b² + (a⁴ + b⁴) · P_{n−1}(c′),    P_0 = 0
//! ```
//!
//! where `c′` are the failure coefficients. Expanding the recursion in
//! unnormalized powers gives the sum of products
//!
//! ```text
//! P_n = 2 Σ_{k=1..n} a^{2^k} b^{2^k} / Π_{j=1..k} (a^{2^j} + b^{2^j})
//! ```
//!
//! which [`sum_of_products`] evaluates independently as a cross-check.

use serde::Serialize;

use super::{entanglement, round_exact, SchmidtCoefficients};

/// Round-by-round view of the iterated protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    /// Probability that round `k` is the first success.
    pub increments: Vec<f64>,
    /// `P_k` after `k` rounds.
    pub cumulative: Vec<f64>,
    /// Coefficients entering round `k`.
    pub trajectory: Vec<SchmidtCoefficients>,
}

impl ConcentrationReport {
    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

pub fn concentration_report(c: SchmidtCoefficients, rounds: usize) -> ConcentrationReport {
    let mut report = ConcentrationReport {
        increments: Vec::with_capacity(rounds),
        cumulative: Vec::with_capacity(rounds),
        trajectory: Vec::with_capacity(rounds),
    };
    let (mut coeffs, mut survival, mut total) = (c, 1.0, 0.0);
    for _ in 0..rounds {
        let d = round_exact(coeffs);
        let increment = survival * d.success_probability;
        total += increment;
        report.trajectory.push(coeffs);
        report.increments.push(increment);
        report.cumulative.push(total);
        survival *= d.failure_probability;
        coeffs = d.failure_coefficients;
    }
    report
}

/// `P_n` for `rounds` iterations; zero rounds give zero.
pub fn total_success_probability(c: SchmidtCoefficients, rounds: usize) -> f64 {
    concentration_report(c, rounds).total()
}

/// `ln(eˣ + eʸ)` without overflow.
fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Sum-of-products form of `P_n` over unnormalized powers of `a` and `b`.
///
/// Every term is assembled in log space, so `a^{2^k}` never underflows.
pub fn sum_of_products(c: SchmidtCoefficients, rounds: usize) -> f64 {
    if c.is_product() {
        return 0.0;
    }
    let (ln_a2, ln_b2) = (c.alpha_squared().ln(), c.beta_squared().ln());
    let mut ln_denominator = 0.0;
    let mut power = 1.0; // a^{2^k} = (a²)^{2^{k−1}}
    let mut sum = 0.0;
    for _ in 0..rounds {
        ln_denominator += log_add_exp(power * ln_a2, power * ln_b2);
        sum += (power * (ln_a2 + ln_b2) - ln_denominator).exp();
        power *= 2.0;
    }
    2.0 * sum
}

/// Per-system yield of the iterated pairwise Schmidt-projection scheme.
///
/// Each attempt consumes two systems, succeeds with `2a²b²` and otherwise
/// recycles one system with the failure coefficients:
/// `Y_k(c) = a²b² + ((a⁴ + b⁴)/2) · Y_{k−1}(c′)`, `Y_0 = 0`.
pub fn schmidt_projection_yield(c: SchmidtCoefficients, levels: usize) -> f64 {
    let (mut coeffs, mut weight, mut total) = (c, 1.0, 0.0);
    for _ in 0..levels {
        let d = round_exact(coeffs);
        total += weight * d.success_probability / 2.0;
        weight *= d.failure_probability / 2.0;
        coeffs = d.failure_coefficients;
    }
    total
}

/// One point of the comparison between concentration schemes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonPoint {
    pub entanglement: f64,
    /// This protocol after `n` rounds.
    pub p_o: f64,
    /// Single-level Schmidt projection, `a²b²` per system.
    pub p_z: f64,
    /// Iterated Schmidt projection with recycling.
    pub p_s: f64,
    /// Collective-unitary schemes, `min(a², b²) = E/2`.
    pub p_b: f64,
}

pub fn comparison_curves(c: SchmidtCoefficients, rounds: usize) -> ComparisonPoint {
    ComparisonPoint {
        entanglement: entanglement(c),
        p_o: total_success_probability(c, rounds),
        p_z: c.alpha_squared() * c.beta_squared(),
        p_s: schmidt_projection_yield(c, rounds),
        p_b: c.alpha_squared().min(c.beta_squared()),
    }
}
