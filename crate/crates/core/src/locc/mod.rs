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

//! Multi-party harness for the nonlocal setting.
//!
//! Alice holds photon 0 of the shared GHZ-class state and performs every
//! quantum operation. The other parties only hold their photons and learn the
//! outcome of each round from Alice's classical broadcasts. Runs are driven by
//! a single-threaded event loop over a virtual clock; the quantum outcomes and
//! the channel latencies draw from separate substreams of the run seed, so
//! changing the channel never changes what happens to the photons.

mod channel;
mod transcript;

pub use channel::{ChannelConfig, DeliveryOrder, Latency};
pub use transcript::{Event, EventKind, EventPayload, PartyVerdict, Transcript};

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ecp::{ghz_state, round_statevector, EcpError, RoundVerdict, SchmidtCoefficients};
use crate::montecarlo::trial_rng;
use crate::pcd::{Parity, ProbeModel};
use crate::quantum::BasisOutcome;
use channel::Channel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoccError {
    #[error("the protocol needs at least 2 parties, got {0}")]
    TooFewParties(usize),
    #[error("at least one round is required")]
    ZeroRounds,
    #[error("channel policy violates exactly-once delivery: {0}")]
    ChannelPolicy(String),
    #[error(transparent)]
    Ecp(#[from] EcpError),
}

const NAMES: [&str; 26] = [
    "Alice", "Bob", "Charlie", "Dave", "Erin", "Frank", "Grace", "Heidi", "Ivan", "Judy", "Kevin", "Laura", "Mallory",
    "Niaj", "Olivia", "Peggy", "Quentin", "Rupert", "Sybil", "Trent", "Ursula", "Victor", "Walter", "Xavier", "Yvonne",
    "Zach",
];

/// A party, by photon index. Party 0 is Alice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartyId(pub usize);

impl PartyId {
    pub const ALICE: PartyId = PartyId(0);

    pub fn label(&self) -> String {
        NAMES.get(self.0).map_or_else(|| format!("Party{}", self.0), |s| s.to_string())
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for PartyId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MessagePayload {
    ParityResult { round: usize, parity: Parity },
    AncillaProjection { round: usize, outcome: BasisOutcome },
    RoundVerdict { round: usize, verdict: RoundVerdict, residual: Option<SchmidtCoefficients> },
    Done { rounds: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub n_parties: usize,
    pub coefficients: SchmidtCoefficients,
    pub max_rounds: usize,
    pub model: ProbeModel,
    pub channel: ChannelConfig,
    pub seed: u64,
    /// Also broadcast the parity and ancilla readings each round.
    pub announce_measurements: bool,
    /// Virtual time between Alice's rounds.
    pub round_interval_ns: u64,
}

impl ProtocolConfig {
    pub fn new(n_parties: usize, coefficients: SchmidtCoefficients, max_rounds: usize, seed: u64) -> Self {
        ProtocolConfig {
            n_parties,
            coefficients,
            max_rounds,
            model: ProbeModel::default(),
            channel: ChannelConfig::default(),
            seed,
            announce_measurements: false,
            round_interval_ns: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Action {
    AliceRound(usize),
    Deliver { broadcast: u64, to: usize },
}

#[derive(Debug, Clone, Copy, Default)]
struct PartyView {
    latest: Option<(usize, RoundVerdict, Option<SchmidtCoefficients>)>,
    done: Option<usize>,
    finalized: bool,
}

struct Simulation {
    config: ProtocolConfig,
    clock: u64,
    seq: u64,
    queue: BinaryHeap<Reverse<(u64, u64, Action)>>,
    broadcasts: Vec<MessagePayload>,
    channel: Channel,
    events: Vec<Event>,
    views: Vec<PartyView>,
}

impl Simulation {
    fn schedule(&mut self, at: u64, action: Action) {
        self.queue.push(Reverse((at, self.seq, action)));
        self.seq += 1;
    }

    fn log(&mut self, kind: EventKind, actor: PartyId, payload: EventPayload) {
        self.events.push(Event { time: self.clock, kind, actor, payload });
    }

    fn broadcast<R: rand::Rng + ?Sized>(&mut self, message: MessagePayload, rng: &mut R) {
        let id = self.broadcasts.len() as u64;
        self.broadcasts.push(message);
        let to: Vec<PartyId> = (1..self.config.n_parties).map(PartyId).collect();
        for &party in &to {
            let at = self.channel.delivery_time(PartyId::ALICE, party, self.clock, rng);
            self.schedule(at, Action::Deliver { broadcast: id, to: party.0 });
        }
        self.log(EventKind::Send, PartyId::ALICE, EventPayload::Send { broadcast: id, to, message });
    }

    fn try_finalize(&mut self, party: usize) {
        let view = self.views[party];
        if view.finalized {
            return;
        }
        if let (Some(rounds), Some((round, verdict, residual))) = (view.done, view.latest) {
            if round == rounds {
                self.views[party].finalized = true;
                self.log(EventKind::Verdict, PartyId(party), EventPayload::FinalVerdict { verdict, round, residual });
            }
        }
    }
}

/// Run the concentration protocol among `config.n_parties` parties.
pub fn run_protocol(config: &ProtocolConfig) -> Result<Transcript, LoccError> {
    let n = config.n_parties;
    if n < 2 {
        return Err(LoccError::TooFewParties(n));
    }
    if config.max_rounds == 0 {
        return Err(LoccError::ZeroRounds);
    }
    let mut quantum_rng = trial_rng(config.seed, 0);
    let mut channel_rng = trial_rng(config.seed, 1);
    let mut sim = Simulation {
        config: *config,
        clock: 0,
        seq: 0,
        queue: BinaryHeap::new(),
        broadcasts: Vec::new(),
        channel: Channel::new(config.channel)?,
        events: Vec::new(),
        views: vec![PartyView::default(); n],
    };
    let mut state = ghz_state(n, config.coefficients)?;
    let mut coeffs = config.coefficients;
    sim.schedule(0, Action::AliceRound(1));

    while let Some(Reverse((time, _, action))) = sim.queue.pop() {
        sim.clock = time;
        match action {
            Action::AliceRound(round) => {
                let result = round_statevector(&state, 0, coeffs, &config.model, &mut quantum_rng)?;
                let r = &result.record;
                let alice = PartyId::ALICE;
                sim.log(EventKind::Quantum, alice, EventPayload::PrepareAncilla { round, qubit: n });
                sim.log(
                    EventKind::Quantum,
                    alice,
                    EventPayload::ParityCheck {
                        round,
                        qubits: [0, n],
                        parity: r.parity.parity,
                        reported: r.reported_parity,
                        probability: r.parity_probability,
                    },
                );
                if r.bit_flip_applied {
                    sim.log(EventKind::Quantum, alice, EventPayload::BitFlip { round, qubit: n });
                }
                sim.log(
                    EventKind::Quantum,
                    alice,
                    EventPayload::AncillaMeasurement {
                        round,
                        outcome: r.ancilla_outcome,
                        probability: r.ancilla_probability,
                    },
                );
                if config.announce_measurements {
                    let parity = MessagePayload::ParityResult { round, parity: r.reported_parity };
                    sim.broadcast(parity, &mut channel_rng);
                    let projection = MessagePayload::AncillaProjection { round, outcome: r.ancilla_outcome };
                    sim.broadcast(projection, &mut channel_rng);
                }
                let (verdict, residual) = (result.verdict, r.next_coefficients);
                sim.broadcast(MessagePayload::RoundVerdict { round, verdict, residual }, &mut channel_rng);
                sim.views[0].latest = Some((round, verdict, residual));
                if verdict == RoundVerdict::Success || round == config.max_rounds {
                    sim.broadcast(MessagePayload::Done { rounds: round }, &mut channel_rng);
                    sim.views[0].done = Some(round);
                    sim.try_finalize(0);
                } else {
                    coeffs = residual.expect("failure carries next coefficients");
                    state = result.state;
                    sim.schedule(time + config.round_interval_ns, Action::AliceRound(round + 1));
                }
            }
            Action::Deliver { broadcast, to } => {
                let message = sim.broadcasts[broadcast as usize];
                sim.log(
                    EventKind::Deliver,
                    PartyId(to),
                    EventPayload::Deliver { broadcast, from: PartyId::ALICE, message },
                );
                let view = &mut sim.views[to];
                match message {
                    MessagePayload::RoundVerdict { round, verdict, residual } => {
                        if view.latest.map_or(true, |(r, _, _)| round > r) {
                            view.latest = Some((round, verdict, residual));
                        }
                    }
                    MessagePayload::Done { rounds } => view.done = Some(rounds),
                    _ => {}
                }
                sim.try_finalize(to);
            }
        }
    }

    let final_verdicts = sim
        .views
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let (round, verdict, residual) = v.latest.expect("every party hears every verdict");
            PartyVerdict { party: PartyId(i), verdict, round, residual }
        })
        .collect();
    Ok(Transcript { n_parties: n, events: sim.events, final_verdicts })
}
