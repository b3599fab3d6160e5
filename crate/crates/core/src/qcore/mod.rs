//! Dense statevector simulation and Pauli algebra shared by every other module.

pub mod gates;
pub mod pauli;
pub mod state;

pub use gates::{equal_up_to_global_phase, phase_deviation, Angle, Axis, Matrix, PHASE_TOL};
pub use pauli::{Pauli, PauliOp};
pub use state::{apply_gate, fidelity, measure_x_basis, Basis, StateVector};
