use rand::{Rng, SeedableRng};

use super::circuit::{SourceCircuit, SourceGate};
use super::decompose::{decompose_clifford, synthesize_cz};
use crate::error::{Error, Result};
use crate::qcore::gates::{self, Angle, Axis};

pub type SlotId = usize;
pub type PolyId = usize;

/// What a polynomial evaluation decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    /// Whether to apply `P†` after the T gate on this qubit.
    TCorrection(usize),
    /// Final X-mask bit of an output qubit.
    FinalX(usize),
    /// Final Z-mask bit of an output qubit.
    FinalZ(usize),
}

/// One step of the schedule Alice executes. Nothing here reveals the angle
/// Bob chose for a slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// Consume one program state on `qubit` through a controlled-`σ_axis`.
    Slot { id: SlotId, qubit: usize, axis: Axis },
    FixedG(usize, usize),
    FixedT(usize),
    /// Alice reports the gadget outcomes of these slots.
    MeasureAndReport(Vec<SlotId>),
    PolyEval { id: PolyId, purpose: Purpose },
}

/// Bob's choice for each G-choice block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GChoice {
    ApplyG,
    ApplyIdentity,
}

/// A compiled circuit: the public instruction list plus Bob's private angle
/// for every slot.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    n_qubits: usize,
    instructions: Vec<Instruction>,
    /// Indexed by slot id.
    assignments: Vec<Angle>,
    n_polys: usize,
}

/// The part of a [`Schedule`] Alice is allowed to see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibleSchedule {
    pub n_qubits: usize,
    pub instructions: Vec<Instruction>,
}

impl Schedule {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn slot_count(&self) -> usize {
        self.assignments.len()
    }

    pub fn poly_count(&self) -> usize {
        self.n_polys
    }

    /// Bob's logical angle for a slot.
    pub fn assignment(&self, slot: SlotId) -> Result<Angle> {
        self.assignments.get(slot).copied().ok_or(Error::UnknownSlot(slot))
    }

    pub fn assignments(&self) -> &[Angle] {
        &self.assignments
    }

    pub fn visible(&self) -> VisibleSchedule {
        VisibleSchedule {
            n_qubits: self.n_qubits,
            instructions: self.instructions.clone(),
        }
    }

    pub fn t_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::FixedT(_)))
            .count()
    }

    /// `(qubit, axis)` of every slot, by id.
    pub fn slot_sites(&self) -> Vec<(usize, Axis)> {
        let mut sites = vec![(0, Axis::X); self.slot_count()];
        for ins in &self.instructions {
            if let Instruction::Slot { id, qubit, axis } = *ins {
                sites[id] = (qubit, axis);
            }
        }
        sites
    }
}

/// Compilation knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompileOptions {
    /// Probability of inserting an identity G-choice block after each source
    /// gate on a random pair of qubits. Zero disables padding.
    pub dummy_g_density: f64,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { dummy_g_density: 0.0 }
    }
}

#[derive(Default)]
struct Builder {
    instructions: Vec<Instruction>,
    assignments: Vec<Angle>,
    pending: Vec<SlotId>,
    n_polys: usize,
}

impl Builder {
    fn slot(&mut self, qubit: usize, axis: Axis, theta: Angle) {
        let id = self.assignments.len();
        self.assignments.push(theta);
        self.pending.push(id);
        self.instructions.push(Instruction::Slot { id, qubit, axis });
    }

    fn report(&mut self) {
        let ids = std::mem::take(&mut self.pending);
        self.instructions.push(Instruction::MeasureAndReport(ids));
    }

    fn poly(&mut self, purpose: Purpose) {
        let id = self.n_polys;
        self.n_polys += 1;
        self.instructions.push(Instruction::PolyEval { id, purpose });
    }

    fn clifford(&mut self, u: &gates::Matrix, qubit: usize) -> Result<()> {
        for (theta, axis) in decompose_clifford(u)?.steps {
            self.slot(qubit, axis, theta);
        }
        Ok(())
    }

    /// Three slots `X, Z, X` realizing `H` (all π/4) or `I` (all 0).
    fn h_or_identity(&mut self, qubit: usize, apply_h: bool) {
        let theta = if apply_h { Angle::QUARTER_PI } else { Angle::ZERO };
        for axis in [Axis::X, Axis::Z, Axis::X] {
            self.slot(qubit, axis, theta);
        }
    }

    fn g_block(&mut self, a: usize, b: usize, choice: GChoice) {
        let apply = choice == GChoice::ApplyG;
        // Application order of G (I⊗H) G (I⊗H) G (Z⊗H) G.
        let first_qubit = [
            if apply { Angle::HALF_PI } else { Angle::ZERO },
            Angle::ZERO,
            Angle::ZERO,
        ];
        self.instructions.push(Instruction::FixedG(a, b));
        for theta_a in first_qubit {
            self.slot(a, Axis::Z, theta_a);
            self.h_or_identity(b, apply);
            self.instructions.push(Instruction::FixedG(a, b));
        }
    }

    fn cz(&mut self, a: usize, b: usize) {
        let synth = synthesize_cz();
        self.g_block(a, b, GChoice::ApplyG);
        let (theta, axis) = synth.single_qubit;
        self.slot(a, axis, theta);
        self.slot(b, axis, theta);
    }

    fn finish(mut self, n_qubits: usize) -> Schedule {
        self.report();
        for q in 0..n_qubits {
            self.poly(Purpose::FinalX(q));
            self.poly(Purpose::FinalZ(q));
        }
        Schedule {
            n_qubits,
            instructions: self.instructions,
            assignments: self.assignments,
            n_polys: self.n_polys,
        }
    }
}

/// The fixed-structure fragment for one G-versus-identity choice on `(a, b)`:
/// four `FixedG` interleaved with three slot groups, identical in shape for
/// both choices.
pub fn g_choice_block(a: usize, b: usize, choice: GChoice) -> Schedule {
    let mut builder = Builder::default();
    builder.g_block(a, b, choice);
    Schedule {
        n_qubits: a.max(b) + 1,
        instructions: builder.instructions,
        assignments: builder.assignments,
        n_polys: 0,
    }
}

/// Compiles with default options.
pub fn compile(circuit: &SourceCircuit) -> Result<Schedule> {
    // density zero never draws from the generator
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    compile_with(circuit, &CompileOptions::default(), &mut rng)
}

/// Compiles `circuit` into Alice's instruction list and Bob's slot angles.
pub fn compile_with<R: Rng + ?Sized>(
    circuit: &SourceCircuit,
    options: &CompileOptions,
    rng: &mut R,
) -> Result<Schedule> {
    let n = circuit.n_qubits();
    let mut b = Builder::default();
    for gate in circuit.gates() {
        match *gate {
            SourceGate::H(q) => b.clifford(&gates::hadamard(), q)?,
            SourceGate::P(q) => b.clifford(&gates::phase(), q)?,
            SourceGate::Eq1 { theta, axis, qubit } => b.slot(qubit, axis, theta),
            SourceGate::T(q) => {
                b.report();
                b.poly(Purpose::TCorrection(q));
                b.instructions.push(Instruction::FixedT(q));
            }
            SourceGate::G(x, y) => b.g_block(x, y, GChoice::ApplyG),
            SourceGate::Cz(x, y) => b.cz(x, y),
            SourceGate::Cnot(c, t) => {
                b.clifford(&gates::hadamard(), t)?;
                b.cz(c, t);
                b.clifford(&gates::hadamard(), t)?;
            }
        }
        if n >= 2 && options.dummy_g_density > 0.0 && rng.random::<f64>() < options.dummy_g_density {
            let x = rng.random_range(0..n);
            let mut y = rng.random_range(0..n - 1);
            if y >= x {
                y += 1;
            }
            b.g_block(x, y, GChoice::ApplyIdentity);
        }
    }
    Ok(b.finish(n))
}

const TAG_SLOT: u8 = 1;
const TAG_G: u8 = 2;
const TAG_T: u8 = 3;
const TAG_REPORT: u8 = 4;
const TAG_POLY: u8 = 5;

fn push_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_be_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn u8(&mut self) -> Result<u8> {
        let b = *self
            .bytes
            .get(self.pos)
            .ok_or_else(|| Error::InvalidArgument("truncated schedule".into()))?;
        self.pos += 1;
        Ok(b)
    }

    fn u32(&mut self) -> Result<usize> {
        let end = self.pos + 4;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::InvalidArgument("truncated schedule".into()))?;
        self.pos = end;
        Ok(u32::from_be_bytes(chunk.try_into().unwrap()) as usize)
    }
}

impl VisibleSchedule {
    /// Big-endian wire form: qubit count, instruction count, then one tagged
    /// record per instruction.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        push_u32(&mut out, self.n_qubits);
        push_u32(&mut out, self.instructions.len());
        for ins in &self.instructions {
            match ins {
                Instruction::Slot { id, qubit, axis } => {
                    out.push(TAG_SLOT);
                    push_u32(&mut out, *id);
                    push_u32(&mut out, *qubit);
                    out.push(axis.index());
                }
                Instruction::FixedG(a, b) => {
                    out.push(TAG_G);
                    push_u32(&mut out, *a);
                    push_u32(&mut out, *b);
                }
                Instruction::FixedT(q) => {
                    out.push(TAG_T);
                    push_u32(&mut out, *q);
                }
                Instruction::MeasureAndReport(ids) => {
                    out.push(TAG_REPORT);
                    push_u32(&mut out, ids.len());
                    for id in ids {
                        push_u32(&mut out, *id);
                    }
                }
                Instruction::PolyEval { id, purpose } => {
                    out.push(TAG_POLY);
                    push_u32(&mut out, *id);
                    let (kind, q) = match purpose {
                        Purpose::TCorrection(q) => (0u8, q),
                        Purpose::FinalX(q) => (1, q),
                        Purpose::FinalZ(q) => (2, q),
                    };
                    out.push(kind);
                    push_u32(&mut out, *q);
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        let n_qubits = r.u32()?;
        let count = r.u32()?;
        let bad = |what: &str| Error::InvalidArgument(format!("bad schedule {what}"));
        let mut instructions = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let ins = match r.u8()? {
                TAG_SLOT => Instruction::Slot {
                    id: r.u32()?,
                    qubit: r.u32()?,
                    axis: Axis::from_index(r.u8()?).ok_or_else(|| bad("axis"))?,
                },
                TAG_G => Instruction::FixedG(r.u32()?, r.u32()?),
                TAG_T => Instruction::FixedT(r.u32()?),
                TAG_REPORT => {
                    let k = r.u32()?;
                    Instruction::MeasureAndReport((0..k).map(|_| r.u32()).collect::<Result<_>>()?)
                }
                TAG_POLY => {
                    let id = r.u32()?;
                    let kind = r.u8()?;
                    let q = r.u32()?;
                    let purpose = match kind {
                        0 => Purpose::TCorrection(q),
                        1 => Purpose::FinalX(q),
                        2 => Purpose::FinalZ(q),
                        _ => return Err(bad("purpose")),
                    };
                    Instruction::PolyEval { id, purpose }
                }
                _ => return Err(bad("tag")),
            };
            instructions.push(ins);
        }
        if r.pos != bytes.len() {
            return Err(bad("trailer"));
        }
        Ok(Self { n_qubits, instructions })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &Schedule) -> Vec<String> {
        s.instructions()
            .iter()
            .map(|i| match i {
                Instruction::Slot { axis, .. } => format!("S{}", axis.letter()),
                Instruction::FixedG(..) => "G".into(),
                Instruction::FixedT(q) => format!("T{q}"),
                Instruction::MeasureAndReport(ids) => format!("M{}", ids.len()),
                Instruction::PolyEval { purpose, .. } => format!("{purpose:?}"),
            })
            .collect()
    }

    #[test]
    fn empty_circuit_has_only_final_block() {
        let c = SourceCircuit::new(2, vec![]).unwrap();
        let s = compile(&c).unwrap();
        assert_eq!(kinds(&s), ["M0", "FinalX(0)", "FinalZ(0)", "FinalX(1)", "FinalZ(1)"]);
        assert_eq!(s.poly_count(), 4);
    }

    #[test]
    fn single_t_block() {
        let c = SourceCircuit::new(1, vec![SourceGate::T(0)]).unwrap();
        let s = compile(&c).unwrap();
        assert_eq!(
            kinds(&s),
            ["M0", "TCorrection(0)", "T0", "M0", "FinalX(0)", "FinalZ(0)"]
        );
    }

    #[test]
    fn h_then_t_uses_three_slots() {
        let c = SourceCircuit::new(1, vec![SourceGate::H(0), SourceGate::T(0)]).unwrap();
        let s = compile(&c).unwrap();
        assert_eq!(
            kinds(&s)[..6],
            ["SX", "SZ", "SX", "M3", "TCorrection(0)", "T0"]
        );
        assert_eq!(s.assignments(), &[Angle::QUARTER_PI; 3]);
    }

    #[test]
    fn every_t_follows_report_and_correction() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let c = SourceCircuit::random(3, 15, 3, &mut rng);
            let s = compile(&c).unwrap();
            let ins = s.instructions();
            for (i, x) in ins.iter().enumerate() {
                if let Instruction::FixedT(q) = x {
                    assert!(matches!(ins[i - 2], Instruction::MeasureAndReport(_)));
                    assert_eq!(
                        ins[i - 1],
                        Instruction::PolyEval { id: match ins[i - 1] { Instruction::PolyEval { id, .. } => id, _ => unreachable!() }, purpose: Purpose::TCorrection(*q) }
                    );
                }
            }
            // every slot is reported exactly once
            let mut seen = vec![0; s.slot_count()];
            for x in ins {
                if let Instruction::MeasureAndReport(ids) = x {
                    for &id in ids {
                        seen[id] += 1;
                    }
                }
            }
            assert!(seen.iter().all(|&k| k == 1));
        }
    }

    #[test]
    fn g_blocks_look_identical_to_alice() {
        let g = g_choice_block(0, 1, GChoice::ApplyG);
        let id = g_choice_block(0, 1, GChoice::ApplyIdentity);
        assert_eq!(g.visible().to_bytes(), id.visible().to_bytes());
        assert_ne!(g.assignments(), id.assignments());
        let gs = g.instructions().iter().filter(|i| matches!(i, Instruction::FixedG(..))).count();
        assert_eq!(gs, 4);
        assert_eq!(g.slot_count(), 12);
    }

    #[test]
    fn same_shape_circuits_have_same_projection() {
        let h = SourceCircuit::new(1, vec![SourceGate::H(0)]).unwrap();
        let eqs = SourceCircuit::new(
            1,
            vec![
                SourceGate::Eq1 { theta: Angle::HALF_PI, axis: Axis::X, qubit: 0 },
                SourceGate::Eq1 { theta: Angle::ZERO, axis: Axis::Z, qubit: 0 },
                SourceGate::Eq1 { theta: Angle::THREE_QUARTER_PI, axis: Axis::X, qubit: 0 },
            ],
        )
        .unwrap();
        let (a, b) = (compile(&h).unwrap(), compile(&eqs).unwrap());
        assert_eq!(a.visible(), b.visible());
        assert_ne!(a.assignments(), b.assignments());
    }

    #[test]
    fn padding_inserts_identity_blocks() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let c = SourceCircuit::new(2, vec![SourceGate::H(0); 5]).unwrap();
        let padded = compile_with(&c, &CompileOptions { dummy_g_density: 1.0 }, &mut rng).unwrap();
        let plain = compile(&c).unwrap();
        assert_eq!(padded.slot_count(), plain.slot_count() + 5 * 12);
    }

    #[test]
    fn visible_schedule_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let c = SourceCircuit::random(3, 12, 2, &mut rng);
        let v = compile(&c).unwrap().visible();
        assert_eq!(VisibleSchedule::from_bytes(&v.to_bytes()).unwrap(), v);
        assert!(VisibleSchedule::from_bytes(&v.to_bytes()[..7]).is_err());
    }

}
