use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::gates::{self, Matrix, ONE, ZERO};
use crate::qcore::StateVector;

/// Tolerance for the physicality checks.
pub const PHYS_TOL: f64 = 1e-10;

/// Physical single-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Matrix);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.shape() != (2, 2) {
            return Err(Error::DimensionMismatch { expected: 2, got: m.nrows() });
        }
        let herm = gates::max_abs_diff(&m, &m.adjoint());
        let tr = (m[(0, 0)] + m[(1, 1)]).re;
        if herm > PHYS_TOL || (tr - 1.0).abs() > PHYS_TOL {
            return Err(Error::InvalidArgument(format!(
                "not a density matrix (hermiticity {herm:e}, trace {tr})"
            )));
        }
        let rho = Self(m);
        if rho.min_eigenvalue() < -PHYS_TOL {
            return Err(Error::InvalidArgument(format!(
                "negative eigenvalue {}",
                rho.min_eigenvalue()
            )));
        }
        Ok(rho)
    }

    pub fn pure(psi: &StateVector) -> Result<Self> {
        if psi.n_qubits() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: psi.n_qubits() });
        }
        Ok(Self(psi.density()))
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix::identity(2, 2) * Complex64::new(0.5, 0.0))
    }

    /// `(I + r·σ)/2`, with `|r|` clipped to 1.
    pub fn from_bloch(r: [f64; 3]) -> Self {
        let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let s = if n > 1.0 { 1.0 / n } else { 1.0 };
        let [x, y, z] = r.map(|c| c * s);
        Self(Matrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        ))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn bloch(&self) -> [f64; 3] {
        let b = self.0[(1, 0)];
        [2.0 * b.re, 2.0 * b.im, (self.0[(0, 0)] - self.0[(1, 1)]).re]
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let [x, y, z] = self.bloch();
        let r = (x * x + y * y + z * z).sqrt();
        [(1.0 - r) / 2.0, (1.0 + r) / 2.0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `⟨ψ|ρ|ψ⟩`; equals `|⟨ψ|η⟩|²` when `ρ = |η⟩⟨η|`.
    pub fn fidelity_pure(&self, psi: &StateVector) -> f64 {
        let a = psi.amplitudes();
        let mut acc = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += a[i].conj() * self.0[(i, j)] * a[j];
            }
        }
        acc.re.clamp(0.0, 1.0)
    }

    /// `tr(Π ρ)`
    pub fn expectation(&self, op: &Matrix) -> f64 {
        (op * &self.0).trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }
}

/// Angle between the Bloch vectors of two pure qubit states.
pub fn bloch_angle(a: &StateVector, b: &StateVector) -> Result<f64> {
    let ra = DensityMatrix::pure(a)?.bloch();
    let rb = DensityMatrix::pure(b)?.bloch();
    let dot: f64 = ra.iter().zip(&rb).map(|(x, y)| x * y).sum();
    Ok(dot.clamp(-1.0, 1.0).acos())
}

pub(crate) fn projector(v: [Complex64; 2]) -> Matrix {
    Matrix::from_fn(2, 2, |i, j| v[i] * v[j].conj())
}

pub(crate) fn unit() -> Matrix {
    Matrix::from_diagonal_element(2, 2, ONE)
}
