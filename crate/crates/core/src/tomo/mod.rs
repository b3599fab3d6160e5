//! Simulated tomography of post-selected gadget runs.
//!
//! The path of a photon is the control, its polarization the data. After the
//! controlled-Pauli and the Hadamard on the path, one output port is selected
//! and the polarization is analyzed and reconstructed by maximum likelihood.

mod density;
mod figures;
mod mle;
mod sim;

pub use density::{bloch_angle, DensityMatrix, PHYS_TOL};
pub use figures::{
    fidelity_curve, mean_std, overlap_curve, overlap_test_states, phi1, phi2, run_figure, theta_grid, write_csvs,
    Figure, FigureTable, Row, TomoConfig, CSV_HEADER,
};
pub use mle::{mle_reconstruct, MleResult, LL_TOL, MAX_ITERS};
pub use sim::{
    ideal_output, postselected_density, sample_counts, simulate_postselected_run, MeasurementSetting, NoiseModel,
    PolBasis, PostselectedRun, Port, SettingsChoice, Shots, Tally, MIN_POSTSELECTION,
};
