use std::collections::VecDeque;
use std::fmt;

use crate::compiler::{SlotId, VisibleSchedule};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        })
    }
}

/// Everything the two parties exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    /// Bob's half of an EPR pair has been measured; Alice's half is the
    /// program state for this slot.
    ProgramStateDelivery { slot: SlotId },
    ScheduleInfo { n_vars: usize, schedule: VisibleSchedule },
    OutcomeReport(Vec<(SlotId, bool)>),
    /// Alice's plaintext variables, by index.
    RevealedVars(Vec<(usize, bool)>),
    ReducedPoly { constant: bool, coeffs: Vec<bool> },
    OttBits(Vec<(u64, bool)>),
    FinalShare(bool),
    AheCiphertexts(Vec<Vec<u8>>),
    AheResult(Vec<u8>),
    /// Bell-measurement bits `(x, z)` per teleported qubit.
    TeleportOutcomes(Vec<(bool, bool)>),
    /// All of Alice's variables, sent at handover so Bob can undo the pad.
    HandoverVars(Vec<(usize, bool)>),
}

fn u32_be(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_be_bytes());
}

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::ProgramStateDelivery { .. } => "ProgramStateDelivery",
            Message::ScheduleInfo { .. } => "ScheduleInfo",
            Message::OutcomeReport(_) => "OutcomeReport",
            Message::RevealedVars(_) => "RevealedVars",
            Message::ReducedPoly { .. } => "ReducedPoly",
            Message::OttBits(_) => "OTTBits",
            Message::FinalShare(_) => "FinalShare",
            Message::AheCiphertexts(_) => "AheCiphertexts",
            Message::AheResult(_) => "AheResult",
            Message::TeleportOutcomes(_) => "TeleportOutcomes",
            Message::HandoverVars(_) => "HandoverVars",
        }
    }

    /// Wire payload. Bits take one byte each; indices are big-endian `u32`,
    /// table ids big-endian `u64`.
    pub fn payload(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            Message::ProgramStateDelivery { slot } => u32_be(&mut out, *slot),
            Message::ScheduleInfo { n_vars, schedule } => {
                u32_be(&mut out, *n_vars);
                out.extend(schedule.to_bytes());
            }
            Message::OutcomeReport(v) | Message::RevealedVars(v) | Message::HandoverVars(v) => {
                for &(i, b) in v {
                    u32_be(&mut out, i);
                    out.push(u8::from(b));
                }
            }
            Message::ReducedPoly { constant, coeffs } => {
                out.push(u8::from(*constant));
                out.extend(coeffs.iter().map(|&b| u8::from(b)));
            }
            Message::OttBits(v) => {
                for &(id, b) in v {
                    out.extend_from_slice(&id.to_be_bytes());
                    out.push(u8::from(b));
                }
            }
            Message::FinalShare(b) => out.push(u8::from(*b)),
            Message::AheCiphertexts(cts) => {
                for ct in cts {
                    u32_be(&mut out, ct.len());
                    out.extend(ct);
                }
            }
            Message::AheResult(ct) => out.extend(ct),
            Message::TeleportOutcomes(v) => {
                for &(x, z) in v {
                    out.push(u8::from(x));
                    out.push(u8::from(z));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub seq: u64,
    pub sender: Party,
    pub message: Message,
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let payload = self.message.payload();
        let hex = if payload.is_empty() { "-".to_string() } else { hex::encode(payload) };
        write!(f, "{} {} {} {}", self.seq, self.sender, self.message.kind(), hex)
    }
}

/// Totally ordered record of everything sent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<Envelope>,
}

impl Transcript {
    pub fn entries(&self) -> &[Envelope] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Envelope> + 'a {
        self.entries.iter().filter(move |e| e.message.kind() == kind)
    }

    /// Total payload bytes of messages of one kind.
    pub fn payload_bytes(&self, kind: &str) -> usize {
        self.of_kind(kind).map(|e| e.message.payload().len()).sum()
    }

    /// One line per message: `seq sender kind payload-hex`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }
}

/// Synchronous in-process queue pair. Every send is appended to the
/// transcript.
#[derive(Debug, Default)]
pub struct Channel {
    to_alice: VecDeque<Message>,
    to_bob: VecDeque<Message>,
    transcript: Transcript,
}

impl Channel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn send(&mut self, from: Party, message: Message) {
        let seq = self.transcript.entries.len() as u64;
        self.transcript.entries.push(Envelope {
            seq,
            sender: from,
            message: message.clone(),
        });
        match from {
            Party::Alice => self.to_bob.push_back(message),
            Party::Bob => self.to_alice.push_back(message),
        }
    }

    pub fn recv(&mut self, to: Party) -> Result<Message> {
        let queue = match to {
            Party::Alice => &mut self.to_alice,
            Party::Bob => &mut self.to_bob,
        };
        queue.pop_front().ok_or(Error::ChannelEmpty(match to {
            Party::Alice => "alice",
            Party::Bob => "bob",
        }))
    }

    pub fn pending(&self, to: Party) -> usize {
        match to {
            Party::Alice => self.to_alice.len(),
            Party::Bob => self.to_bob.len(),
        }
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }
}

/// Pulls the next message for `to` and checks its kind.
macro_rules! expect_msg {
    ($ch:expr, $to:expr, $pat:pat => $out:expr, $kind:literal) => {
        match $ch.recv($to)? {
            $pat => $out,
            other => {
                return Err($crate::error::Error::UnexpectedMessage {
                    expected: $kind.to_string(),
                    got: other.kind().to_string(),
                })
            }
        }
    };
}
pub(crate) use expect_msg;
