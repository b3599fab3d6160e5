use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::density::bloch_angle;
use super::mle::mle_reconstruct;
use super::sim::{ideal_output, simulate_postselected_run, NoiseModel, Port, SettingsChoice, Shots};
use crate::batch;
use crate::error::{Error, Result};
use crate::qcore::{Axis, StateVector};

pub const CSV_HEADER: &str = "theta_or_alpha,value,stddev,shots,noise_upper,noise_lower";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// Fidelity on `|1⟩ ⊗ (cos θ|0⟩ + sin θ|1⟩)`.
    Fig3,
    /// Overlap with φ1, control `|1⟩`.
    Fig4a,
    /// Overlap with φ2, control `|1⟩`.
    Fig4b,
    /// Overlap with φ1, control `|y+⟩`.
    Fig5a,
    /// Overlap with φ2, control `|y+⟩`.
    Fig5b,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig3, Figure::Fig4a, Figure::Fig4b, Figure::Fig5a, Figure::Fig5b];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig5a => "fig5a",
            Figure::Fig5b => "fig5b",
        }
    }

    fn index(self) -> u64 {
        Self::ALL.iter().position(|&f| f == self).unwrap() as u64
    }

    fn control(self) -> StateVector {
        match self {
            Figure::Fig3 | Figure::Fig4a | Figure::Fig4b => StateVector::basis(1, 1),
            Figure::Fig5a | Figure::Fig5b => y_plus(),
        }
    }

    fn reference(self) -> Option<StateVector> {
        match self {
            Figure::Fig3 => None,
            Figure::Fig4a | Figure::Fig5a => Some(phi1()),
            Figure::Fig4b | Figure::Fig5b => Some(phi2()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomoConfig {
    pub noise: NoiseModel,
    pub shots: Shots,
    pub settings: SettingsChoice,
    pub batches: usize,
    pub seed: u64,
}

impl Default for TomoConfig {
    fn default() -> Self {
        Self {
            noise: NoiseModel::default(),
            shots: Shots::Sampled(100_000),
            settings: SettingsChoice::Pauli6,
            batches: 5,
            seed: 0,
        }
    }
}

impl TomoConfig {
    pub fn noiseless(mut self) -> Self {
        self.noise = NoiseModel::ideal();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// θ for the fidelity figure, the Bloch angle α for overlap figures.
    pub x: f64,
    pub value: f64,
    pub stddev: f64,
    /// Noise-free value: 1 for fidelities, `cos²(α/2)` for overlaps.
    pub theory: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub figure: Figure,
    pub rows: Vec<Row>,
    pub shots: Shots,
    pub noise: NoiseModel,
}

impl FigureTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            writeln!(
                s,
                "{:.10},{:.10},{:.10},{},{},{}",
                r.x, r.value, r.stddev, self.shots, self.noise.visibility_upper, self.noise.visibility_lower
            )
            .unwrap();
        }
        s
    }
}

fn y_plus() -> StateVector {
    StateVector::qubit(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)).unwrap()
}

fn qubit_polar(theta: f64, phase: f64) -> StateVector {
    StateVector::qubit(
        Complex64::new(theta.cos(), 0.0),
        Complex64::from_polar(theta.sin(), phase),
    )
    .unwrap()
}

/// `cos(π/8)|0⟩ + e^{−i4π/5} sin(π/8)|1⟩`
pub fn phi1() -> StateVector {
    qubit_polar(PI / 8.0, -4.0 * PI / 5.0)
}

/// `cos(−π/3)|0⟩ + e^{iπ/7} sin(−π/3)|1⟩`
pub fn phi2() -> StateVector {
    qubit_polar(-PI / 3.0, PI / 7.0)
}

/// The 13-point grid `θ = kπ/12`.
pub fn theta_grid() -> Vec<f64> {
    (0..=12).map(|k| k as f64 * PI / 12.0).collect()
}

/// `cos θ|0⟩ + sin θ|1⟩` and `cos θ|0⟩ + i sin θ|1⟩` for `θ = kπ/8`, plus one
/// generic state.
pub fn overlap_test_states() -> Vec<StateVector> {
    let mut v: Vec<StateVector> = (0..8).map(|k| qubit_polar(k as f64 * PI / 8.0, 0.0)).collect();
    v.extend((1..8).map(|k| qubit_polar(k as f64 * PI / 8.0, PI / 2.0)));
    v.push(StateVector::qubit(Complex64::new(0.6, 0.0), Complex64::new(0.48, 0.64)).unwrap());
    v
}

fn batch_rng(seed: u64, figure: Figure, point: usize, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((figure.index() << 48) | ((point as u64) << 16) | batch as u64);
    rng
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

struct Point {
    x: f64,
    data: StateVector,
    target: StateVector,
    theory: f64,
}

fn run_points(figure: Figure, points: Vec<Point>, config: &TomoConfig) -> Result<FigureTable> {
    if config.batches == 0 {
        return Err(Error::InvalidArgument("at least one batch is required".into()));
    }
    config.noise.validate()?;
    let ctrl = figure.control();
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..config.batches).map(move |b| (p, b)))
        .collect();
    let results = batch::map(&jobs, |&(p, b)| -> Result<(f64, bool)> {
        let mut rng = batch_rng(config.seed, figure, p, b);
        let run = simulate_postselected_run(
            &ctrl,
            &points[p].data,
            Axis::Z,
            Port::Minus,
            &config.noise,
            config.settings,
            config.shots,
            &mut rng,
        )?;
        let mle = mle_reconstruct(&run.tallies)?;
        Ok((mle.rho.fidelity_pure(&points[p].target), mle.converged))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = points
        .iter()
        .zip(results.chunks(config.batches))
        .map(|(pt, chunk)| {
            let vals: Vec<f64> = chunk.iter().map(|r| r.0).collect();
            let (value, stddev) = mean_std(&vals);
            Row {
                x: pt.x,
                value,
                stddev,
                theory: pt.theory,
                converged: chunk.iter().all(|r| r.1),
            }
        })
        .collect();
    Ok(FigureTable {
        figure,
        rows,
        shots: config.shots,
        noise: config.noise,
    })
}

/// Fidelity of the reconstructed output with the ideal output over the θ grid.
pub fn fidelity_curve(config: &TomoConfig) -> Result<FigureTable> {
    let ctrl = Figure::Fig3.control();
    let points = theta_grid()
        .into_iter()
        .map(|t| {
            let data = qubit_polar(t, 0.0);
            let target = ideal_output(&ctrl, &data, Axis::Z, Port::Minus)?;
            Ok(Point {
                x: t,
                data,
                target,
                theory: 1.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_points(Figure::Fig3, points, config)
}

/// Squared overlap of the reconstructed output with `figure`'s reference
/// state, one row per test state, sorted by the Bloch angle α between the
/// ideal output and the reference.
pub fn overlap_curve(figure: Figure, tests: &[StateVector], config: &TomoConfig) -> Result<FigureTable> {
    let reference = figure
        .reference()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no reference state", figure.name())))?;
    let ctrl = figure.control();
    let mut points = tests
        .iter()
        .map(|psi| {
            let out = ideal_output(&ctrl, psi, Axis::Z, Port::Minus)?;
            let alpha = bloch_angle(&out, &reference)?;
            Ok(Point {
                x: alpha,
                data: psi.clone(),
                target: reference.clone(),
                theory: (alpha / 2.0).cos().powi(2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.x.total_cmp(&b.x));
    run_points(figure, points, config)
}

pub fn run_figure(figure: Figure, config: &TomoConfig) -> Result<FigureTable> {
    match figure {
        Figure::Fig3 => fidelity_curve(config),
        f => overlap_curve(f, &overlap_test_states(), config),
    }
}

/// Writes `<name>.csv` for each table into `dir`, creating it if needed.
pub fn write_csvs(dir: &Path, tables: &[FigureTable]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    tables
        .iter()
        .map(|t| {
            let path = dir.join(format!("{}.csv", t.figure.name()));
            std::fs::write(&path, t.to_csv())?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> TomoConfig {
        TomoConfig {
            shots: Shots::Exact,
            batches: 1,
            ..TomoConfig::default()
        }
        .noiseless()
    }

    #[test]
    fn references_match_their_definitions() {
        let p1 = phi1();
        let a = p1.amplitudes();
        assert!((a[0].re - (PI / 8.0).cos()).abs() < 1e-15);
        assert!((a[1].arg() + 4.0 * PI / 5.0).abs() < 1e-12);
        let a = phi2().amplitudes().to_vec();
        assert!((a[0].re - 0.5).abs() < 1e-15);
        assert!((a[1].norm() - (PI / 3.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn mean_std_values() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!((m - 3.0).abs() < 1e-15);
        assert!((s - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn noiseless_exact_fidelity_is_one() {
        let t = fidelity_curve(&exact()).unwrap();
        assert_eq!(t.rows.len(), 13);
        for r in &t.rows {
            assert!((r.value - 1.0).abs() < 1e-6, "{r:?}");
            assert!(r.converged);
        }
    }

    #[test]
    fn noiseless_exact_overlaps_follow_bloch_angle() {
        for f in [Figure::Fig4a, Figure::Fig4b, Figure::Fig5a, Figure::Fig5b] {
            let t = run_figure(f, &exact()).unwrap();
            assert_eq!(t.rows.len(), overlap_test_states().len());
            for r in &t.rows {
                assert!((r.value - r.theory).abs() < 1e-6, "{f:?} {r:?}");
            }
        }
    }

    #[test]
    fn overlap_endpoints() {
        // test state chosen so that the ideal output is the reference, or its antipode
        let out = phi1();
        let z = crate::qcore::gates::pauli_z();
        let psi = out.clone().applied(&z, &[0]).unwrap();
        let t = overlap_curve(Figure::Fig4a, &[psi], &exact()).unwrap();
        assert!(t.rows[0].x.abs() < 1e-7);
        assert!((t.rows[0].value - 1.0).abs() < 1e-6);
        let a = out.amplitudes();
        let anti = StateVector::qubit(-a[1].conj(), a[0].conj()).unwrap();
        let psi = anti.applied(&z, &[0]).unwrap();
        let t = overlap_curve(Figure::Fig4a, &[psi], &exact()).unwrap();
        assert!((t.rows[0].x - PI).abs() < 1e-7);
        assert!(t.rows[0].value < 1e-6);
    }

    #[test]
    fn csv_layout() {
        let t = fidelity_curve(&exact()).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 6);
        assert_eq!(first[3], "inf");
        assert_eq!(first[4], "1");
    }

    #[test]
    fn sampled_fidelity_band_with_default_noise() {
        let cfg = TomoConfig {
            shots: Shots::Sampled(100_000),
            batches: 2,
            seed: 3,
            ..TomoConfig::default()
        };
        for f in [Figure::Fig3] {
            for r in &run_figure(f, &cfg).unwrap().rows {
                assert!((0.98..=1.0).contains(&r.value), "{r:?}");
            }
        }
    }
}
