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

use std::collections::HashMap;
use std::io::{self, Write};

use serde::Serialize;

use super::{MessagePayload, PartyId};
use crate::ecp::{RoundVerdict, SchmidtCoefficients};
use crate::pcd::Parity;
use crate::quantum::BasisOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Quantum,
    Send,
    Deliver,
    Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventPayload {
    PrepareAncilla { round: usize, qubit: usize },
    ParityCheck { round: usize, qubits: [usize; 2], parity: Parity, reported: Parity, probability: f64 },
    BitFlip { round: usize, qubit: usize },
    AncillaMeasurement { round: usize, outcome: BasisOutcome, probability: f64 },
    Send { broadcast: u64, to: Vec<PartyId>, message: MessagePayload },
    Deliver { broadcast: u64, from: PartyId, message: MessagePayload },
    FinalVerdict { verdict: RoundVerdict, round: usize, residual: Option<SchmidtCoefficients> },
}

/// One line of the transcript log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    /// Virtual time in nanoseconds.
    pub time: u64,
    pub kind: EventKind,
    pub actor: PartyId,
    pub payload: EventPayload,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartyVerdict {
    pub party: PartyId,
    pub verdict: RoundVerdict,
    pub round: usize,
    pub residual: Option<SchmidtCoefficients>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transcript {
    pub n_parties: usize,
    pub events: Vec<Event>,
    /// Indexed by party.
    pub final_verdicts: Vec<PartyVerdict>,
}

impl Transcript {
    /// Alice's verdict.
    pub fn verdict(&self) -> RoundVerdict {
        self.final_verdicts[0].verdict
    }

    pub fn rounds_used(&self) -> usize {
        self.final_verdicts[0].round
    }

    pub fn verdicts_agree(&self) -> bool {
        let alice = &self.final_verdicts[0];
        self.final_verdicts.len() == self.n_parties
            && self.final_verdicts.iter().all(|v| v.verdict == alice.verdict && v.round == alice.round)
    }

    pub fn quantum_events_alice_only(&self) -> bool {
        self.events.iter().filter(|e| e.kind == EventKind::Quantum).all(|e| e.actor == PartyId::ALICE)
    }

    /// Every broadcast reaches each of its receivers exactly once, and only
    /// Alice sends.
    pub fn check_exactly_once(&self) -> Result<(), String> {
        let mut expected: HashMap<u64, Vec<PartyId>> = HashMap::new();
        let mut delivered: HashMap<u64, Vec<PartyId>> = HashMap::new();
        for e in &self.events {
            match &e.payload {
                EventPayload::Send { broadcast, to, .. } => {
                    if e.actor != PartyId::ALICE {
                        return Err(format!("broadcast {broadcast} sent by {}", e.actor));
                    }
                    let mut to = to.clone();
                    to.sort();
                    let others: Vec<PartyId> = (1..self.n_parties).map(PartyId).collect();
                    if to != others {
                        return Err(format!("broadcast {broadcast} does not address every other party"));
                    }
                    expected.insert(*broadcast, to);
                }
                EventPayload::Deliver { broadcast, .. } => delivered.entry(*broadcast).or_default().push(e.actor),
                _ => {}
            }
        }
        for (id, mut got) in delivered.iter().map(|(k, v)| (*k, v.clone())) {
            got.sort();
            if expected.get(&id) != Some(&got) {
                return Err(format!("broadcast {id} delivered to {got:?}"));
            }
        }
        if let Some(id) = expected.keys().find(|id| !delivered.contains_key(id)) {
            return Err(format!("broadcast {id} never delivered"));
        }
        Ok(())
    }

    /// Deliveries of `RoundVerdict` messages.
    pub fn verdict_deliveries(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e.payload, EventPayload::Deliver { message: MessagePayload::RoundVerdict { .. }, .. }))
            .count()
    }

    pub fn write_json_lines<W: Write>(&self, mut out: W) -> io::Result<()> {
        for e in &self.events {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_json_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_json_lines(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}
