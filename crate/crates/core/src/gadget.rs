//! The program-state gadget.
//!
//! A program register in `cos θ|0⟩ + i sin θ|1⟩` controls a `σ_j` on a data
//! qubit; the register is then measured in the X basis. Outcome 0 leaves
//! `cos θ I + i sin θ σ_j` on the data qubit, outcome 1 leaves
//! `cos θ I − i sin θ σ_j`. Corrections are never applied here; callers track
//! them as Pauli key updates.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::qcore::gates::{self, Angle, Axis, Matrix};
use crate::qcore::{Basis, Pauli, PauliOp, StateVector};

/// Which basis a program state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProgramBasis {
    /// `θ ∈ {0, π/2}`: `|0⟩` or `|1⟩`.
    Z,
    /// `θ ∈ {π/4, 3π/4}`: `|y+⟩` or `|y−⟩`.
    Y,
}

impl ProgramBasis {
    pub fn of(theta: Angle) -> Self {
        if theta.is_odd() {
            ProgramBasis::Y
        } else {
            ProgramBasis::Z
        }
    }

    pub fn measurement_basis(self) -> Basis {
        match self {
            ProgramBasis::Z => Basis::Z,
            ProgramBasis::Y => Basis::Y,
        }
    }
}

/// One program register's content, together with the axis of the
/// controlled-Pauli it will drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProgramState {
    pub theta: Angle,
    pub axis: Axis,
}

impl ProgramState {
    pub fn new(theta: Angle, axis: Axis) -> Self {
        Self { theta, axis }
    }

    pub fn basis_tag(&self) -> ProgramBasis {
        ProgramBasis::of(self.theta)
    }

    /// `cos θ|0⟩ + i sin θ|1⟩`
    pub fn register(&self) -> StateVector {
        register_state(self.theta)
    }

    /// The gate this state implements when the outcome is 0.
    pub fn gate(&self) -> Matrix {
        gates::eq1(self.theta, self.axis)
    }

    /// Bob picks one of the two orthogonal states that encode `theta`
    /// uniformly at random. Returns the state and whether the flipped member
    /// of the pair was chosen.
    pub fn prepare_direct<R: Rng + ?Sized>(theta: Angle, axis: Axis, rng: &mut R) -> (Self, bool) {
        let flip = rng.random::<bool>();
        let prog = Self::new(theta, axis);
        if flip {
            (orthogonal_flip(prog).0, true)
        } else {
            (prog, false)
        }
    }
}

/// `cos θ|0⟩ + i sin θ|1⟩` for a program angle.
pub fn register_state(theta: Angle) -> StateVector {
    let t = theta.radians();
    StateVector::from_amplitudes(vec![
        Complex64::new(t.cos(), 0.0),
        Complex64::new(0.0, t.sin()),
    ])
    .expect("program state is normalized")
}

/// Result of one gadget use.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetOutcome {
    pub m: bool,
    pub post_state: StateVector,
}

/// Entangles a program register (appended as the last qubit) with
/// `data_qubit` via controlled-`σ_axis`, then rotates the register with `H`
/// ready for a Z measurement.
fn couple(state: &StateVector, data_qubit: usize, register: &StateVector, axis: Axis) -> Result<(StateVector, usize)> {
    if data_qubit >= state.n_qubits() {
        return Err(crate::Error::QubitOutOfRange {
            qubit: data_qubit,
            n_qubits: state.n_qubits(),
        });
    }
    let anc = state.n_qubits();
    let mut joint = state.tensor(register);
    joint.apply(&gates::controlled(&axis.matrix()), &[anc, data_qubit])?;
    joint.apply(&gates::hadamard(), &[anc])?;
    Ok((joint, anc))
}

/// Runs the gadget with an arbitrary single-qubit program register.
pub fn run_gadget_with_register<R: Rng + ?Sized>(
    state: &StateVector,
    data_qubit: usize,
    register: &StateVector,
    axis: Axis,
    rng: &mut R,
) -> Result<GadgetOutcome> {
    let (joint, anc) = couple(state, data_qubit, register, axis)?;
    let (m, post_state) = joint.measure(anc, Basis::Z, rng)?;
    Ok(GadgetOutcome { m, post_state })
}

/// Gadget use with the program register prepared directly in `prog`.
pub fn run_gadget<R: Rng + ?Sized>(
    state: &StateVector,
    data_qubit: usize,
    prog: ProgramState,
    rng: &mut R,
) -> Result<GadgetOutcome> {
    run_gadget_with_register(state, data_qubit, &prog.register(), prog.axis, rng)
}

/// Deterministic branch of the gadget: post-selects outcome `m`.
/// Returns the branch probability and the renormalized data state.
pub fn postselect_gadget(
    state: &StateVector,
    data_qubit: usize,
    register: &StateVector,
    axis: Axis,
    m: bool,
) -> Result<(f64, StateVector)> {
    let (joint, anc) = couple(state, data_qubit, register, axis)?;
    joint.project(anc, Basis::Z, m)
}

/// Effective data-qubit map for outcome `m`: `cos θ I ± i sin θ σ`.
pub fn branch_map(theta: Angle, axis: Axis, m: bool) -> Matrix {
    let t = theta.radians();
    let s = if m { -t.sin() } else { t.sin() };
    gates::identity(1) * Complex64::new(t.cos(), 0.0) + axis.matrix() * Complex64::new(0.0, s)
}

/// Correction needed after outcome 1: `cos 2θ I + i sin 2θ σ_axis`.
pub fn correction_for(theta: Angle, axis: Axis) -> Matrix {
    let t = 2.0 * theta.radians();
    gates::identity(1) * Complex64::new(t.cos(), 0.0) + axis.matrix() * Complex64::new(0.0, t.sin())
}

/// The orthogonal partner of `prog` (angle shifted by π/2) and the Pauli
/// `iσ_axis` relating the two gates: `gate(flipped) = ±iσ · gate(prog)`.
pub fn orthogonal_flip(prog: ProgramState) -> (ProgramState, PauliOp) {
    (
        ProgramState::new(prog.theta.plus_half_pi(), prog.axis),
        PauliOp::single(Pauli::from(prog.axis)).with_phase(1),
    )
}
