use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::gates::{Matrix, I, ONE, ZERO};
use crate::error::{Error, Result};

/// Tolerance on the squared norm of a state.
pub const NORM_TOL: f64 = 1e-12;

/// Branches sampled with probability below this are treated as an internal error.
pub const MIN_BRANCH_PROB: f64 = 1e-15;

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `{|0⟩, |1⟩}`
    Z,
    /// `{|+⟩, |−⟩}`
    X,
    /// `{|y+⟩, |y−⟩}`
    Y,
}

impl Basis {
    /// Eigenvector for outcome `bit` (0 is the +1 eigenstate).
    pub fn eigenvector(self, bit: bool) -> [Complex64; 2] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match (self, bit) {
            (Basis::Z, false) => [ONE, ZERO],
            (Basis::Z, true) => [ZERO, ONE],
            (Basis::X, false) => [h, h],
            (Basis::X, true) => [h, -h],
            (Basis::Y, false) => [h, I * h],
            (Basis::Y, true) => [h, -I * h],
        }
    }
}

/// Normalized pure state of `n` qubits. Qubit 0 is the most significant bit of
/// the amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        Self { n_qubits, amps }
    }

    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(1),
                got: len,
            });
        }
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }

    /// Single-qubit state from two amplitudes, normalized.
    pub fn qubit(a0: Complex64, a1: Complex64) -> Result<Self> {
        Self::normalized(vec![a0, a1])
    }

    /// Tensor product of single-qubit states, first factor is qubit 0.
    pub fn product(factors: &[StateVector]) -> Result<Self> {
        let mut out = Self {
            n_qubits: 0,
            amps: vec![ONE],
        };
        for f in factors {
            out = out.tensor(f);
        }
        Ok(out)
    }

    /// Gaussian-sampled (Haar-distributed) random state.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps).expect("gaussian sample is nonzero")
    }

    /// Product of random real single-qubit states.
    pub fn random_real_product<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let factors: Vec<StateVector> = (0..n_qubits)
            .map(|_| {
                let t: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                Self::qubit(Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0)).unwrap()
            })
            .collect();
        Self::product(&factors).unwrap()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ other`; the qubits of `other` are appended after those of `self`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    fn bit_of(&self, qubit: usize) -> usize {
        self.n_qubits - 1 - qubit
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Applies `u` to `targets` in place; `targets[0]` is the most significant
    /// qubit of `u`'s index.
    pub fn apply(&mut self, u: &Matrix, targets: &[usize]) -> Result<()> {
        let k = targets.len();
        if u.nrows() != 1 << k || u.ncols() != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                got: u.nrows(),
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            self.check_qubit(t)?;
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        let masks: Vec<usize> = targets.iter().map(|&t| 1 << self.bit_of(t)).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|local| {
                (0..k)
                    .filter(|&i| local >> (k - 1 - i) & 1 == 1)
                    .map(|i| masks[i])
                    .sum()
            })
            .collect();
        let mut buf = vec![ZERO; 1 << k];
        for base in 0..self.dim() {
            if base & all != 0 {
                continue;
            }
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = self.amps[base + off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (col, v) in buf.iter().enumerate() {
                    acc += u[(row, col)] * v;
                }
                self.amps[base + off] = acc;
            }
        }
        Ok(())
    }

    /// Owned variant of [`apply`](Self::apply).
    pub fn applied(mut self, u: &Matrix, targets: &[usize]) -> Result<Self> {
        self.apply(u, targets)?;
        Ok(self)
    }

    /// Probability of outcome 0 when `qubit` is measured in `basis`.
    pub fn probability_zero(&self, qubit: usize, basis: Basis) -> Result<f64> {
        Ok(self.project_raw(qubit, basis.eigenvector(false))?.1)
    }

    /// Contracts `qubit` with `⟨v|`, returning unnormalized amplitudes of the
    /// remaining qubits and the branch probability.
    fn project_raw(&self, qubit: usize, v: [Complex64; 2]) -> Result<(Vec<Complex64>, f64)> {
        self.check_qubit(qubit)?;
        let bit = self.bit_of(qubit);
        let low = (1usize << bit) - 1;
        let half = self.dim() / 2;
        let (c0, c1) = (v[0].conj(), v[1].conj());
        let mut out = Vec::with_capacity(half);
        for idx in 0..half {
            let i0 = ((idx & !low) << 1) | (idx & low);
            let i1 = i0 | (1 << bit);
            out.push(c0 * self.amps[i0] + c1 * self.amps[i1]);
        }
        let p = out.iter().map(Complex64::norm_sqr).sum();
        Ok((out, p))
    }

    /// Post-selects `qubit` on outcome `bit` of `basis` and removes it.
    /// Returns the branch probability and the renormalized remainder.
    pub fn project(&self, qubit: usize, basis: Basis, bit: bool) -> Result<(f64, StateVector)> {
        let (amps, p) = self.project_raw(qubit, basis.eigenvector(bit))?;
        if p < MIN_BRANCH_PROB {
            return Err(Error::ImprobableBranch(p));
        }
        let s = p.sqrt();
        Ok((
            p,
            StateVector {
                n_qubits: self.n_qubits - 1,
                amps: amps.into_iter().map(|a| a / s).collect(),
            },
        ))
    }

    /// Measures `qubit` in `basis`, removing it from the register.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(bool, StateVector)> {
        let p0 = self.probability_zero(qubit, basis)?;
        let bit = rng.random::<f64>() >= p0;
        let (_, post) = self.project(qubit, basis, bit)?;
        Ok((bit, post))
    }

    /// Reduced density matrix of one qubit.
    pub fn reduced_density(&self, qubit: usize) -> Result<Matrix> {
        self.check_qubit(qubit)?;
        let bit = self.bit_of(qubit);
        let mut rho = Matrix::zeros(2, 2);
        for i in 0..self.dim() {
            if i >> bit & 1 == 1 {
                continue;
            }
            let j = i | (1 << bit);
            let (a0, a1) = (self.amps[i], self.amps[j]);
            rho[(0, 0)] += a0 * a0.conj();
            rho[(0, 1)] += a0 * a1.conj();
            rho[(1, 0)] += a1 * a0.conj();
            rho[(1, 1)] += a1 * a1.conj();
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn density(&self) -> Matrix {
        let d = self.dim();
        Matrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj())
    }
}

/// Applies `u` to `targets`, returning the transformed state.
pub fn apply_gate(state: StateVector, u: &Matrix, targets: &[usize]) -> Result<StateVector> {
    state.applied(u, targets)
}

/// Measures `qubit` in the `{|+⟩, |−⟩}` basis; outcome 0 is `|+⟩`. The
/// measured qubit is removed from the returned state.
pub fn measure_x_basis<R: Rng + ?Sized>(
    state: &StateVector,
    qubit: usize,
    rng: &mut R,
) -> Result<(bool, StateVector)> {
    state.measure(qubit, Basis::X, rng)
}

/// `|⟨ψ|η⟩|²`, clamped to `[0, 1]`.
pub fn fidelity(psi: &StateVector, eta: &StateVector) -> Result<f64> {
    Ok(psi.inner(eta)?.norm_sqr().clamp(0.0, 1.0))
}
