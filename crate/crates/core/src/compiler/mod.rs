//! Bob-side compilation of a Clifford+T circuit into a fixed-structure
//! schedule of program-state slots, `G` gates and `T` gates.

mod circuit;
mod decompose;
mod schedule;

pub use circuit::{SourceCircuit, SourceGate};
pub use decompose::{
    decompose_clifford, single_qubit_cliffords, synthesize_cz, CzSynthesis, Eq1Sequence, GENERATORS,
    MAX_SEQUENCE_LEN,
};
pub use schedule::{
    compile, compile_with, g_choice_block, CompileOptions, GChoice, Instruction, PolyId, Purpose, Schedule,
    SlotId, VisibleSchedule,
};
