//! The two-party protocol: engines, channel, program-state distribution,
//! BQC handover and privacy accounting.

pub mod channel;
mod distribute;
mod engine;
mod privacy;

pub use channel::{Channel, Envelope, Message, Party, Transcript};
pub use distribute::{distribute_program_states, epr_pair, measure_pair, realized_angle, BobRecord, Distribution};
pub use engine::{check_input_class, run_bqc_handover, run_scheme1, Aborted, Adversary, Mode, RunConfig, RunReport};
pub use privacy::{chi2_two_sample, chi2_uniform, privacy_report, PrivacyReport, CHI2_DF1_3SIGMA};

#[cfg(test)]
mod tests;
