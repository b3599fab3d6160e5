use super::channel::{Message, Party, Transcript};
use super::engine::{Mode, RunConfig};
use crate::subproto::SubprotoChoice;

/// 3σ threshold for a chi-square statistic with one degree of freedom.
pub const CHI2_DF1_3SIGMA: f64 = 9.0;

/// Structural leakage counts, all read off the transcript.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrivacyReport {
    pub mode: Option<Mode>,
    pub subproto: &'static str,
    pub n_vars: usize,
    /// Variables Alice sent in plaintext through the class-1 subprotocol.
    pub data_bits_revealed: usize,
    /// Variables Alice sent at BQC handover.
    pub handover_bits_revealed: usize,
    /// Per evaluated polynomial, how many coefficients Alice never saw.
    pub hidden_coeff_bits: Vec<usize>,
    pub polys_evaluated: usize,
    pub outcome_bits_sent: usize,
    pub outcome_ones: usize,
    pub teleport_bits: usize,
}

impl PrivacyReport {
    /// The common per-polynomial hidden count, if all polynomials agree.
    pub fn hidden_coeff_bits_per_poly(&self) -> Option<usize> {
        let first = *self.hidden_coeff_bits.first()?;
        self.hidden_coeff_bits.iter().all(|&h| h == first).then_some(first)
    }

    pub fn outcome_one_fraction(&self) -> f64 {
        if self.outcome_bits_sent == 0 {
            return 0.5;
        }
        self.outcome_ones as f64 / self.outcome_bits_sent as f64
    }

    /// Chi-square of the outcome bits against a fair coin.
    pub fn outcome_chi2(&self) -> f64 {
        chi2_uniform(self.outcome_ones, self.outcome_bits_sent)
    }

    pub fn to_text(&self) -> String {
        let mode = self.mode.map(Mode::name).unwrap_or("-");
        let hidden = match self.hidden_coeff_bits_per_poly() {
            Some(h) => h.to_string(),
            None if self.hidden_coeff_bits.is_empty() => "-".into(),
            None => format!("{:?}", self.hidden_coeff_bits),
        };
        format!(
            "mode {mode}\nsubproto {}\nvariables {}\ndata_bits_revealed {}\nhandover_bits_revealed {}\n\
             hidden_coeff_bits_per_poly {hidden}\npolys_evaluated {}\noutcome_bits_sent {}\n\
             outcome_one_fraction {:.4}\noutcome_chi2 {:.4}\nteleport_bits {}\n",
            self.subproto,
            self.n_vars,
            self.data_bits_revealed,
            self.handover_bits_revealed,
            self.polys_evaluated,
            self.outcome_bits_sent,
            self.outcome_one_fraction(),
            self.outcome_chi2(),
            self.teleport_bits,
        )
    }
}

/// `(ones − N/2)² / (N/4)`
pub fn chi2_uniform(ones: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let d = ones as f64 - n / 2.0;
    d * d / (n / 4.0)
}

/// Pearson chi-square for a 2×2 table of two bit samples.
pub fn chi2_two_sample(ones_a: usize, total_a: usize, ones_b: usize, total_b: usize) -> f64 {
    let n = (total_a + total_b) as f64;
    let ones = (ones_a + ones_b) as f64;
    let zeros = n - ones;
    if ones == 0.0 || zeros == 0.0 {
        return 0.0;
    }
    let mut chi = 0.0;
    for (o, t) in [(ones_a, total_a), (ones_b, total_b)] {
        let t = t as f64;
        for (obs, col) in [(o as f64, ones), (t - o as f64, zeros)] {
            let exp = t * col / n;
            chi += (obs - exp).powi(2) / exp;
        }
    }
    chi
}

/// Counts leakage-relevant quantities in a transcript.
pub fn privacy_report(transcript: &Transcript, config: &RunConfig) -> PrivacyReport {
    let mut r = PrivacyReport {
        mode: Some(config.mode),
        subproto: config.subproto.name(),
        ..Default::default()
    };
    for e in transcript.entries() {
        match &e.message {
            Message::ScheduleInfo { n_vars, .. } => r.n_vars = *n_vars,
            Message::OutcomeReport(v) => {
                r.outcome_bits_sent += v.len();
                r.outcome_ones += v.iter().filter(|(_, b)| *b).count();
            }
            Message::RevealedVars(v) => r.data_bits_revealed += v.len(),
            Message::HandoverVars(v) => r.handover_bits_revealed += v.len(),
            Message::TeleportOutcomes(v) => r.teleport_bits += 2 * v.len(),
            Message::ReducedPoly { coeffs, .. } => {
                r.polys_evaluated += 1;
                r.hidden_coeff_bits.push(r.n_vars - coeffs.len());
            }
            Message::FinalShare(_) if e.sender == Party::Bob && config.subproto == SubprotoChoice::Ott => {
                r.polys_evaluated += 1;
                r.hidden_coeff_bits.push(r.n_vars);
            }
            Message::AheResult(_) => {
                r.polys_evaluated += 1;
                r.hidden_coeff_bits.push(r.n_vars);
            }
            _ => {}
        }
    }
    r
}
