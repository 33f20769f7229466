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

//! Simulated classical channel between the parties.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::{LoccError, PartyId};

/// One-way latency in virtual nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Latency {
    Fixed { ns: u64 },
    Uniform { min_ns: u64, max_ns: u64 },
    Exponential { mean_ns: f64 },
}

impl Latency {
    fn validate(&self) -> Result<(), LoccError> {
        match *self {
            Latency::Fixed { .. } => Ok(()),
            Latency::Uniform { min_ns, max_ns } if min_ns <= max_ns => Ok(()),
            Latency::Exponential { mean_ns } if mean_ns > 0.0 && mean_ns.is_finite() => Ok(()),
            other => Err(LoccError::ChannelPolicy(format!("invalid latency distribution {other:?}"))),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match *self {
            Latency::Fixed { ns } => ns,
            Latency::Uniform { min_ns, max_ns } => rng.random_range(min_ns..=max_ns),
            Latency::Exponential { mean_ns } => {
                let exp = Exp::new(1.0 / mean_ns).expect("validated mean");
                exp.sample(rng).round() as u64
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeliveryOrder {
    /// Messages on a link arrive in the order they were sent.
    #[default]
    PerSenderFifo,
    /// Each message keeps its own sampled latency and may overtake earlier ones.
    Unordered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub latency: Latency,
    pub order: DeliveryOrder,
    /// Fault injection. The protocol needs exactly-once delivery, so any
    /// nonzero value is rejected by [`ChannelConfig::validate`].
    pub drop_probability: f64,
    pub duplicate_probability: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            latency: Latency::Fixed { ns: 1_000 },
            order: DeliveryOrder::PerSenderFifo,
            drop_probability: 0.0,
            duplicate_probability: 0.0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), LoccError> {
        self.latency.validate()?;
        if self.drop_probability != 0.0 || self.duplicate_probability != 0.0 {
            return Err(LoccError::ChannelPolicy(format!(
                "exactly-once delivery required (drop {}, duplicate {})",
                self.drop_probability, self.duplicate_probability
            )));
        }
        Ok(())
    }
}

/// Assigns delivery times; enforces per-link FIFO when configured.
#[derive(Debug)]
pub(crate) struct Channel {
    config: ChannelConfig,
    last_delivery: HashMap<(PartyId, PartyId), u64>,
}

impl Channel {
    pub(crate) fn new(config: ChannelConfig) -> Result<Self, LoccError> {
        config.validate()?;
        Ok(Channel { config, last_delivery: HashMap::new() })
    }

    pub(crate) fn delivery_time<R: Rng + ?Sized>(&mut self, from: PartyId, to: PartyId, sent: u64, rng: &mut R) -> u64 {
        let at = sent + self.config.latency.sample(rng);
        match self.config.order {
            DeliveryOrder::Unordered => at,
            DeliveryOrder::PerSenderFifo => {
                let last = self.last_delivery.entry((from, to)).or_insert(0);
                let at = at.max(*last);
                *last = at;
                at
            }
        }
    }
}
