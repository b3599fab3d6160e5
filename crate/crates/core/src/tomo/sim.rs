use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::density::{projector, DensityMatrix};
use crate::error::{Error, Result};
use crate::qcore::gates::{self, Axis, Matrix};
use crate::qcore::{Basis, StateVector};

/// Post-selection below this probability is rejected.
pub const MIN_POSTSELECTION: f64 = 1e-12;

/// Interferometric visibilities of the two loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub visibility_upper: f64,
    pub visibility_lower: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            visibility_upper: 0.9983,
            visibility_lower: 0.9973,
        }
    }
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self {
            visibility_upper: 1.0,
            visibility_lower: 1.0,
        }
    }

    pub fn new(visibility_upper: f64, visibility_lower: f64) -> Result<Self> {
        let n = Self {
            visibility_upper,
            visibility_lower,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.visibility_upper, self.visibility_lower] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("visibility {v} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Net factor on the path coherence after both loops.
    pub fn coherence(&self) -> f64 {
        self.visibility_upper * self.visibility_lower
    }
}

/// Output port, i.e. the post-selected X-basis outcome of the path qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    Plus,
    Minus,
}

impl Port {
    pub fn outcome(self) -> bool {
        self == Port::Minus
    }
}

/// Polarization analysis basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolBasis {
    HV,
    DA,
    RL,
}

impl PolBasis {
    pub const ALL: [PolBasis; 3] = [PolBasis::HV, PolBasis::DA, PolBasis::RL];

    fn qubit_basis(self) -> Basis {
        match self {
            PolBasis::HV => Basis::Z,
            PolBasis::DA => Basis::X,
            PolBasis::RL => Basis::Y,
        }
    }
}

impl fmt::Display for PolBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolBasis::HV => "H/V",
            PolBasis::DA => "D/A",
            PolBasis::RL => "R/L",
        })
    }
}

/// One detected polarization: a rank-1 projector.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    pub basis: PolBasis,
    pub outcome: bool,
    projector: Matrix,
}

impl MeasurementSetting {
    pub fn new(basis: PolBasis, outcome: bool) -> Self {
        Self {
            basis,
            outcome,
            projector: projector(basis.qubit_basis().eigenvector(outcome)),
        }
    }

    pub fn projector(&self) -> &Matrix {
        &self.projector
    }

    pub fn label(&self) -> &'static str {
        match (self.basis, self.outcome) {
            (PolBasis::HV, false) => "H",
            (PolBasis::HV, true) => "V",
            (PolBasis::DA, false) => "D",
            (PolBasis::DA, true) => "A",
            (PolBasis::RL, false) => "R",
            (PolBasis::RL, true) => "L",
        }
    }
}

/// Which polarizations are analyzed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SettingsChoice {
    /// Both outcomes of each of the three bases, measured basis by basis.
    #[default]
    Pauli6,
    /// H, V, D and R, each measured on its own.
    Four,
}

impl SettingsChoice {
    /// Groups of settings recorded together on the same photons.
    pub fn groups(self) -> Vec<Vec<MeasurementSetting>> {
        match self {
            SettingsChoice::Pauli6 => PolBasis::ALL
                .iter()
                .map(|&b| vec![MeasurementSetting::new(b, false), MeasurementSetting::new(b, true)])
                .collect(),
            SettingsChoice::Four => [
                (PolBasis::HV, false),
                (PolBasis::HV, true),
                (PolBasis::DA, false),
                (PolBasis::RL, false),
            ]
            .iter()
            .map(|&(b, o)| vec![MeasurementSetting::new(b, o)])
            .collect(),
        }
    }
}

/// Photons per setting group, or exact frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Exact,
    Sampled(u64),
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => f.write_str("inf"),
            Shots::Sampled(n) => write!(f, "{n}"),
        }
    }
}

/// Counts for one group of settings. When the group's projectors do not sum
/// to the identity, the remaining `shots − Σ counts` photons went undetected.
#[derive(Debug, Clone, PartialEq)]
pub struct Tally {
    pub settings: Vec<MeasurementSetting>,
    pub counts: Vec<f64>,
    pub shots: f64,
}

impl Tally {
    pub fn is_complete(&self) -> bool {
        let sum = self
            .settings
            .iter()
            .fold(Matrix::zeros(2, 2), |acc, s| acc + s.projector());
        gates::max_abs_diff(&sum, &gates::identity(1)) < 1e-12
    }
}

#[derive(Debug, Clone)]
pub struct PostselectedRun {
    pub probability: f64,
    pub output: DensityMatrix,
    pub tallies: Vec<Tally>,
}

/// Noise-free output for `ctrl = a|0⟩ + b|1⟩`: `a ψ ± b σ ψ`, normalized.
pub fn ideal_output(ctrl: &StateVector, data: &StateVector, axis: Axis, port: Port) -> Result<StateVector> {
    check_qubit(ctrl)?;
    check_qubit(data)?;
    let [a, b] = [ctrl.amplitudes()[0], ctrl.amplitudes()[1]];
    let b = if port.outcome() { -b } else { b };
    let d = data.amplitudes();
    let sigma = axis.matrix();
    let out: Vec<Complex64> = (0..2)
        .map(|i| a * d[i] + b * (sigma[(i, 0)] * d[0] + sigma[(i, 1)] * d[1]))
        .collect();
    let n: f64 = out.iter().map(Complex64::norm_sqr).sum();
    if n < MIN_POSTSELECTION {
        return Err(Error::PostselectionTooSmall(n / 2.0));
    }
    StateVector::normalized(out)
}

fn check_qubit(s: &StateVector) -> Result<()> {
    if s.n_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: s.n_qubits() });
    }
    Ok(())
}

/// Post-selected polarization state as a density matrix, with the path
/// coherence reduced by the loop visibilities. Returns the port probability.
pub fn postselected_density(
    ctrl: &StateVector,
    data: &StateVector,
    axis: Axis,
    port: Port,
    noise: &NoiseModel,
) -> Result<(f64, DensityMatrix)> {
    check_qubit(ctrl)?;
    check_qubit(data)?;
    noise.validate()?;
    let rho = gates::kron(&ctrl.density(), &data.density());
    let u = gates::controlled(&axis.matrix());
    let mut rho = &u * rho * u.adjoint();
    let v = Complex64::new(noise.coherence(), 0.0);
    for i in 0..4 {
        for j in 0..4 {
            if i >> 1 != j >> 1 {
                rho[(i, j)] *= v;
            }
        }
    }
    let h = gates::kron(&gates::hadamard(), &gates::identity(1));
    let rho = &h * rho * h.adjoint();
    let o = 2 * usize::from(port.outcome());
    let block = rho.view((o, o), (2, 2)).clone_owned();
    let p = block.trace().re;
    if p < MIN_POSTSELECTION {
        return Err(Error::PostselectionTooSmall(p));
    }
    let out = block / Complex64::new(p, 0.0);
    let out = (&out + out.adjoint()) * Complex64::new(0.5, 0.0);
    Ok((p, DensityMatrix::new(out)?))
}

/// Photon counts for each settings group on the output state `rho`.
pub fn sample_counts<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    settings: SettingsChoice,
    shots: Shots,
    rng: &mut R,
) -> Result<Vec<Tally>> {
    settings
        .groups()
        .into_iter()
        .map(|group| {
            let probs: Vec<f64> = group.iter().map(|s| rho.expectation(s.projector()).clamp(0.0, 1.0)).collect();
            let (counts, total) = match shots {
                Shots::Exact => (probs, 1.0),
                Shots::Sampled(n) => {
                    let mut draw = |p: f64| -> Result<u64> {
                        Ok(Binomial::new(n, p)
                            .map_err(|e| Error::InvalidArgument(e.to_string()))?
                            .sample(rng))
                    };
                    let counts = if group.len() == 2 {
                        let k = draw(probs[0] / (probs[0] + probs[1]))?;
                        vec![k as f64, (n - k) as f64]
                    } else {
                        probs.iter().map(|&p| draw(p).map(|k| k as f64)).collect::<Result<_>>()?
                    };
                    (counts, n as f64)
                }
            };
            Ok(Tally {
                settings: group,
                counts,
                shots: total,
            })
        })
        .collect()
}

/// One post-selected gadget run: controlled-`σ_axis` from the path qubit
/// `ctrl` to the polarization qubit `data`, Hadamard on the path, detection in
/// `port`, then polarization analysis.
pub fn simulate_postselected_run<R: Rng + ?Sized>(
    ctrl: &StateVector,
    data: &StateVector,
    axis: Axis,
    port: Port,
    noise: &NoiseModel,
    settings: SettingsChoice,
    shots: Shots,
    rng: &mut R,
) -> Result<PostselectedRun> {
    if shots == Shots::Sampled(0) {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let (probability, output) = postselected_density(ctrl, data, axis, port, noise)?;
    let tallies = sample_counts(&output, settings, shots, rng)?;
    Ok(PostselectedRun {
        probability,
        output,
        tallies,
    })
}
