use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::channel::{expect_msg, Channel, Message, Party, Transcript};
use super::distribute::{distribute_program_states, epr_pair, BobRecord};
use super::privacy::{privacy_report, PrivacyReport};
use crate::compiler::{compile_with, CompileOptions, Instruction, Purpose, Schedule, SlotId, SourceCircuit, VisibleSchedule};
use crate::error::{Error, Result};
use crate::gadget::run_gadget_with_register;
use crate::keytrack::{init_keys, AliceKeys, Bits, CliffordUpdate, InputClass, KeyTracker, LinearPoly, SymbolicKeys};
use crate::qcore::gates::{self, Axis};
use crate::qcore::{fidelity, Basis, StateVector};
use crate::subproto::{PolyEvalPort, SubprotoChoice};

/// Where the output ends up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Output stays with Alice.
    Qhe,
    /// Alice teleports the output to Bob before the final corrections.
    Bqc,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Qhe => "qhe",
            Mode::Bqc => "bqc",
        }
    }
}

/// Dishonest Bob strategies available to tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adversary {
    /// On Z-axis slots acting on a qubit no X- or Y-axis slot has touched yet,
    /// Bob keeps his EPR half unmeasured and measures it in the X basis after
    /// Alice's report, reading off the masked data bit.
    DeferClassicalZ,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub input_class: InputClass,
    pub subproto: SubprotoChoice,
    pub seed: u64,
    pub compile: CompileOptions,
    /// Tables provisioned for the one-time-table subprotocol; `None` means
    /// exactly what the schedule needs.
    pub ott_tables: Option<usize>,
    pub adversary: Option<Adversary>,
}

impl RunConfig {
    pub fn new(mode: Mode, input_class: InputClass, subproto: SubprotoChoice, seed: u64) -> Self {
        Self {
            mode,
            input_class,
            subproto,
            seed,
            compile: CompileOptions::default(),
            ott_tables: None,
            adversary: None,
        }
    }
}

/// Outcome of an honest or adversarial run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub mode: Mode,
    /// Alice's register in QHE mode, Bob's in BQC mode.
    pub output_state: StateVector,
    pub fidelity_vs_direct: f64,
    pub transcript: Transcript,
    pub privacy: PrivacyReport,
    /// Whether Bob's engine ever held quantum state.
    pub bob_held_state: bool,
    /// Whether Alice's engine still holds the output after the run.
    pub alice_holds_output: bool,
    /// Bits learned by an adversarial Bob: `(slot, qubit, masked data bit)`.
    pub adversary_learned: Vec<(SlotId, usize, bool)>,
}

/// A run that stopped early. The transcript up to the failure is kept.
#[derive(Debug, Clone)]
pub struct Aborted {
    pub error: Error,
    pub transcript: Transcript,
}

impl std::fmt::Display for Aborted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "run aborted after {} messages: {}", self.transcript.len(), self.error)
    }
}

impl std::error::Error for Aborted {}

fn stream(seed: u64, s: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(s);
    rng
}

const ALICE_STREAM: u64 = 1;
const BOB_STREAM: u64 = 2;

/// Checks the promise Alice makes about her input.
pub fn check_input_class(input: &StateVector, class: InputClass) -> Result<()> {
    const TOL: f64 = 1e-9;
    match class {
        InputClass::General => Ok(()),
        InputClass::Classical => {
            let max = input.amplitudes().iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
            if (max - 1.0).abs() < TOL {
                Ok(())
            } else {
                Err(Error::InputClassMismatch("classical"))
            }
        }
        InputClass::RealProduct => {
            let pivot = input
                .amplitudes()
                .iter()
                .copied()
                .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
                .unwrap();
            let phase = pivot.conj() / pivot.norm();
            let real = input.amplitudes().iter().all(|a| (a * phase).im.abs() < TOL);
            let product = (0..input.n_qubits()).all(|q| {
                let rho = input.reduced_density(q).unwrap();
                let purity = (&rho * &rho).trace().re;
                (purity - 1.0).abs() < TOL
            });
            if real && product {
                Ok(())
            } else {
                Err(Error::InputClassMismatch("real-product"))
            }
        }
    }
}

enum Register {
    Local(StateVector),
    /// Half of an EPR pair whose other half Bob still holds.
    Entangled,
}

/// Alice's side. `world` is her quantum memory; in adversarial runs a few
/// trailing qubits of it are Bob's unmeasured EPR halves.
struct AliceEngine {
    keys: AliceKeys,
    world: Option<StateVector>,
    n: usize,
    schedule: Option<VisibleSchedule>,
    registers: HashMap<SlotId, Register>,
    outcomes: Vec<(SlotId, bool)>,
    bob_halves: Vec<SlotId>,
    t_corrections: HashMap<usize, bool>,
    finals: HashMap<Purpose, bool>,
    rng: ChaCha8Rng,
}

impl AliceEngine {
    fn world(&mut self) -> &mut StateVector {
        self.world.as_mut().expect("Alice holds her register until handover")
    }

    fn slot(&mut self, id: SlotId, qubit: usize, axis: Axis) -> Result<()> {
        let register = match self.registers.remove(&id).ok_or(Error::UnknownSlot(id))? {
            Register::Local(r) => r,
            Register::Entangled => {
                self.bob_halves.push(id);
                epr_pair()
            }
        };
        let state = self.world.take().expect("register present");
        let out = run_gadget_with_register(&state, qubit, &register, axis, &mut self.rng)?;
        self.world = Some(out.post_state);
        self.outcomes.push((id, out.m));
        Ok(())
    }

    fn report(&mut self, ids: &[SlotId], ch: &mut Channel) -> Result<()> {
        let bits: HashMap<SlotId, bool> = self.outcomes.drain(..).collect();
        let report = ids
            .iter()
            .map(|id| bits.get(id).map(|&m| (*id, m)).ok_or(Error::UnknownSlot(*id)))
            .collect::<Result<Vec<_>>>()?;
        ch.send(Party::Alice, Message::OutcomeReport(report));
        Ok(())
    }

    fn fixed_t(&mut self, q: usize) -> Result<()> {
        let y = self.t_corrections.remove(&q).unwrap_or(false);
        let w = self.world();
        w.apply(&gates::t_gate(), &[q])?;
        if y {
            w.apply(&gates::phase_dag(), &[q])?;
        }
        Ok(())
    }

    fn final_corrections(&mut self) -> Result<()> {
        for q in 0..self.n {
            let x = self.finals[&Purpose::FinalX(q)];
            let z = self.finals[&Purpose::FinalZ(q)];
            let w = self.world();
            if x {
                w.apply(&gates::pauli_x(), &[q])?;
            }
            if z {
                w.apply(&gates::pauli_z(), &[q])?;
            }
        }
        Ok(())
    }

    /// Teleports every data qubit out; returns the Bell outcomes and the
    /// state of the receiving halves.
    fn teleport_out(&mut self) -> Result<(Vec<(bool, bool)>, StateVector)> {
        let mut state = self.world.take().expect("register present");
        let mut outcomes = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            // remaining data qubit is always at index 0, received halves at the end
            let a = state.n_qubits();
            state = state.tensor(&epr_pair());
            state.apply(&gates::cnot(), &[0, a])?;
            state.apply(&gates::hadamard(), &[0])?;
            let (z, s) = state.measure(0, Basis::Z, &mut self.rng)?;
            let (x, s) = s.measure(a - 1, Basis::Z, &mut self.rng)?;
            state = s;
            outcomes.push((x, z));
        }
        Ok((outcomes, state))
    }
}

/// Bob's side: the full schedule and the symbolic keys, never any state
/// vector of Alice's.
struct BobEngine {
    schedule: Schedule,
    tracker: KeyTracker,
    records: Vec<Option<BobRecord>>,
    port: Box<dyn PolyEvalPort>,
    finals: Option<Vec<(LinearPoly, LinearPoly)>>,
    deferred: Vec<(SlotId, usize)>,
    received: Option<StateVector>,
}

impl BobEngine {
    fn slot(&mut self, id: SlotId, qubit: usize, axis: Axis) -> Result<()> {
        let theta = self.schedule.assignment(id)?;
        let (q, a) = self.schedule.slot_sites()[id];
        if (q, a) != (qubit, axis) {
            return Err(Error::SlotMismatch {
                slot: id,
                expected: q,
                got: qubit,
            });
        }
        let flip = self.records[id].map(|r| r.flip).unwrap_or(false);
        self.tracker.record_slot(id, qubit, axis, theta, flip)
    }

    fn poly_for(&mut self, purpose: Purpose) -> Result<LinearPoly> {
        match purpose {
            Purpose::TCorrection(q) => self.tracker.update_t(q),
            Purpose::FinalX(q) | Purpose::FinalZ(q) => {
                if self.finals.is_none() {
                    self.finals = Some(self.tracker.final_polys()?);
                }
                let (x, z) = &self.finals.as_ref().unwrap()[q];
                Ok(if matches!(purpose, Purpose::FinalX(_)) { x.clone() } else { z.clone() })
            }
        }
    }
}

/// Runs the protocol with the subprotocol named in `config`.
pub fn run_scheme1(
    circuit: &SourceCircuit,
    input: &StateVector,
    config: &RunConfig,
) -> std::result::Result<RunReport, Aborted> {
    let m = config.input_class.n_vars(circuit.n_qubits());
    let early = |error| Aborted {
        error,
        transcript: Transcript::default(),
    };
    let mut bob_rng = stream(config.seed, BOB_STREAM);
    let schedule = compile_with(circuit, &config.compile, &mut bob_rng).map_err(early)?;
    let port = match (config.subproto, config.ott_tables) {
        (SubprotoChoice::Ott, Some(count)) => {
            let mut dealer = crate::subproto::Dealer::new(config.seed);
            Box::new(crate::subproto::DealerOtt::provisioned(&mut dealer, count)) as Box<dyn PolyEvalPort>
        }
        (choice, _) => choice.build(m, schedule.poly_count(), config.seed).map_err(early)?,
    };
    run_with_port(circuit, schedule, input, config, port, bob_rng)
}

/// BQC mode: same parameters, output delivered to Bob.
pub fn run_bqc_handover(
    circuit: &SourceCircuit,
    input: &StateVector,
    config: &RunConfig,
) -> std::result::Result<RunReport, Aborted> {
    let mut c = config.clone();
    c.mode = Mode::Bqc;
    run_scheme1(circuit, input, &c)
}

fn run_with_port(
    circuit: &SourceCircuit,
    schedule: Schedule,
    input: &StateVector,
    config: &RunConfig,
    port: Box<dyn PolyEvalPort>,
    mut bob_rng: ChaCha8Rng,
) -> std::result::Result<RunReport, Aborted> {
    let mut ch = Channel::new();
    let result = drive(circuit, schedule, input, config, port, &mut bob_rng, &mut ch);
    match result {
        Ok(mut report) => {
            report.transcript = ch.into_transcript();
            report.privacy = privacy_report(&report.transcript, config);
            Ok(report)
        }
        Err(error) => Err(Aborted {
            error,
            transcript: ch.into_transcript(),
        }),
    }
}

fn drive(
    circuit: &SourceCircuit,
    schedule: Schedule,
    input: &StateVector,
    config: &RunConfig,
    port: Box<dyn PolyEvalPort>,
    bob_rng: &mut ChaCha8Rng,
    ch: &mut Channel,
) -> Result<RunReport> {
    let n = circuit.n_qubits();
    if input.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: input.n_qubits(),
        });
    }
    check_input_class(input, config.input_class)?;
    let mut alice_rng = stream(config.seed, ALICE_STREAM);

    // Step 2: Alice pads her input.
    let (alice_keys, _) = init_keys(n, config.input_class, &mut alice_rng);
    let symbolic = SymbolicKeys::fresh(n, config.input_class);
    let mut world = input.clone();
    let pad = alice_keys.initial_pad();
    for (q, p) in pad.kinds.iter().enumerate() {
        world.apply(&p.matrix(), &[q])?;
    }

    let mut alice = AliceEngine {
        keys: alice_keys,
        world: Some(world),
        n,
        schedule: None,
        registers: HashMap::new(),
        outcomes: Vec::new(),
        bob_halves: Vec::new(),
        t_corrections: HashMap::new(),
        finals: HashMap::new(),
        rng: alice_rng,
    };

    // Bob decides which slots he leaves unmeasured.
    let mut defer = vec![false; schedule.slot_count()];
    if config.adversary == Some(Adversary::DeferClassicalZ) && config.input_class == InputClass::Classical {
        let mut classical = vec![true; n];
        for ins in schedule.instructions() {
            if let Instruction::Slot { id, qubit, axis } = *ins {
                if axis == Axis::Z && classical[qubit] {
                    defer[id] = true;
                } else if axis != Axis::Z {
                    classical[qubit] = false;
                }
            }
        }
    }

    // Step 1: program states through EPR pairs.
    let dist = distribute_program_states(&schedule, bob_rng)?;
    let mut records = Vec::with_capacity(schedule.slot_count());
    for (id, (half, rec)) in dist.alice_halves.into_iter().zip(dist.bob_records).enumerate() {
        if defer[id] {
            alice.registers.insert(id, Register::Entangled);
            records.push(None);
        } else {
            alice.registers.insert(id, Register::Local(half));
            records.push(Some(rec));
        }
        ch.send(Party::Bob, Message::ProgramStateDelivery { slot: id });
        expect_msg!(ch, Party::Alice, Message::ProgramStateDelivery { .. } => (), "ProgramStateDelivery");
    }

    let mut bob = BobEngine {
        schedule,
        tracker: KeyTracker::new(symbolic),
        records,
        port,
        finals: None,
        deferred: Vec::new(),
        received: None,
    };

    // Step 3: schedule message, once up front.
    ch.send(
        Party::Bob,
        Message::ScheduleInfo {
            n_vars: bob.tracker.keys().n_vars(),
            schedule: bob.schedule.visible(),
        },
    );
    alice.schedule = Some(expect_msg!(ch, Party::Alice, Message::ScheduleInfo { schedule, .. } => schedule, "ScheduleInfo"));

    let mut learned = Vec::new();
    let visible = alice.schedule.clone().unwrap();
    let mut handed_over = false;
    for ins in &visible.instructions {
        match ins {
            Instruction::Slot { id, qubit, axis } => {
                alice.slot(*id, *qubit, *axis)?;
                bob.slot(*id, *qubit, *axis)?;
                if defer.get(*id).copied().unwrap_or(false) {
                    bob.deferred.push((*id, *qubit));
                }
            }
            Instruction::FixedG(a, b) => {
                alice.world().apply(&gates::g_gate(), &[*a, *b])?;
                bob.tracker.clifford(CliffordUpdate::G(*a, *b))?;
            }
            Instruction::FixedT(q) => alice.fixed_t(*q)?,
            Instruction::MeasureAndReport(ids) => {
                alice.report(ids, ch)?;
                let report = expect_msg!(ch, Party::Bob, Message::OutcomeReport(r) => r, "OutcomeReport");
                bob.tracker.resolve(&report)?;
                if !bob.deferred.is_empty() {
                    let by_id: HashMap<SlotId, bool> = report.iter().copied().collect();
                    for (id, qubit) in std::mem::take(&mut bob.deferred) {
                        let pos = alice.bob_halves.iter().position(|s| *s == id).expect("half present");
                        alice.bob_halves.remove(pos);
                        let idx = n + pos;
                        let (o, rest) = alice.world().measure(idx, Basis::X, bob_rng)?;
                        alice.world = Some(rest);
                        learned.push((id, qubit, o ^ by_id[&id]));
                    }
                }
            }
            Instruction::PolyEval { purpose, .. } => {
                let is_final = matches!(purpose, Purpose::FinalX(_) | Purpose::FinalZ(_));
                if config.mode == Mode::Bqc && is_final {
                    if !handed_over {
                        handover(&mut alice, &mut bob, ch)?;
                        handed_over = true;
                    }
                    continue;
                }
                let poly = bob.poly_for(*purpose)?;
                let y = bob.port.evaluate(&poly, alice.keys.variables(), ch)?;
                match purpose {
                    Purpose::TCorrection(q) => {
                        alice.t_corrections.insert(*q, y);
                    }
                    p => {
                        alice.finals.insert(*p, y);
                    }
                }
            }
        }
    }

    let output_state = match config.mode {
        Mode::Qhe => {
            alice.final_corrections()?;
            alice.world.clone().expect("register present")
        }
        Mode::Bqc => bob.received.clone().ok_or_else(|| Error::InvalidArgument("no handover happened".into()))?,
    };
    let direct = circuit.apply_direct(input)?;
    Ok(RunReport {
        mode: config.mode,
        fidelity_vs_direct: fidelity(&output_state, &direct)?,
        output_state,
        transcript: Transcript::default(),
        privacy: PrivacyReport::default(),
        bob_held_state: bob.received.is_some(),
        alice_holds_output: alice.world.is_some(),
        adversary_learned: learned,
    })
}

/// Alice teleports the output and reveals her variables; Bob evaluates the
/// final polynomials himself and corrects.
fn handover(alice: &mut AliceEngine, bob: &mut BobEngine, ch: &mut Channel) -> Result<()> {
    let (outcomes, mut received) = alice.teleport_out()?;
    ch.send(Party::Alice, Message::TeleportOutcomes(outcomes));
    let vars: Vec<(usize, bool)> = alice.keys.variables().iter().by_vals().enumerate().collect();
    ch.send(Party::Alice, Message::HandoverVars(vars));

    let outcomes = expect_msg!(ch, Party::Bob, Message::TeleportOutcomes(o) => o, "TeleportOutcomes");
    let vars = expect_msg!(ch, Party::Bob, Message::HandoverVars(v) => v, "HandoverVars");
    let x: Bits = vars.iter().map(|&(_, b)| b).collect();
    let finals = bob.tracker.final_polys()?;
    for (q, ((tx, tz), (px, pz))) in outcomes.iter().zip(&finals).enumerate() {
        // received = X^tx Z^tz X^px Z^pz · output
        if *tx {
            received.apply(&gates::pauli_x(), &[q])?;
        }
        if *tz {
            received.apply(&gates::pauli_z(), &[q])?;
        }
        if px.eval(&x)? {
            received.apply(&gates::pauli_x(), &[q])?;
        }
        if pz.eval(&x)? {
            received.apply(&gates::pauli_z(), &[q])?;
        }
    }
    bob.received = Some(received);
    Ok(())
}
