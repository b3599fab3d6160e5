use num_complex::Complex64;

use super::gates::{self, Axis, Matrix};

/// Single-qubit Pauli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Symplectic `(x, z)` bits, ignoring phase (`Y ↦ (1, 1)`).
    pub fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_xz(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::I => gates::identity(1),
            Pauli::X => gates::pauli_x(),
            Pauli::Y => gates::pauli_y(),
            Pauli::Z => gates::pauli_z(),
        }
    }

    /// `self · other = i^k · result`
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        let (x1, z1) = self.xz();
        let (x2, z2) = other.xz();
        !((x1 & z2) ^ (z1 & x2))
    }
}

impl From<Axis> for Pauli {
    fn from(a: Axis) -> Pauli {
        match a {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

/// `i^phase · P_0 ⊗ P_1 ⊗ …`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub kinds: Vec<Pauli>,
    /// Exponent of `i`, mod 4.
    pub phase: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self {
            kinds: vec![Pauli::I; n],
            phase: 0,
        }
    }

    pub fn single(p: Pauli) -> Self {
        Self {
            kinds: vec![p],
            phase: 0,
        }
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    /// `X^x Z^z` on each qubit, with the phase that product carries.
    pub fn from_masks(x: &[bool], z: &[bool]) -> Self {
        assert_eq!(x.len(), z.len());
        let mut phase = 0u8;
        let kinds = x
            .iter()
            .zip(z)
            .map(|(&xb, &zb)| {
                if xb && zb {
                    // XZ = -iY
                    phase += 3;
                }
                Pauli::from_xz(xb, zb)
            })
            .collect();
        Self {
            kinds,
            phase: phase % 4,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.kinds.len()
    }

    /// `self · other`
    pub fn compose(&self, other: &PauliOp) -> PauliOp {
        assert_eq!(self.n_qubits(), other.n_qubits(), "qubit counts differ");
        let mut phase = self.phase + other.phase;
        let kinds = self
            .kinds
            .iter()
            .zip(&other.kinds)
            .map(|(a, b)| {
                let (k, p) = a.mul(*b);
                phase += k;
                p
            })
            .collect();
        PauliOp {
            kinds,
            phase: phase % 4,
        }
    }

    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        self.kinds
            .iter()
            .zip(&other.kinds)
            .filter(|(a, b)| !a.commutes_with(**b))
            .count()
            % 2
            == 0
    }

    pub fn phase_factor(&self) -> Complex64 {
        [
            gates::ONE,
            gates::I,
            -gates::ONE,
            -gates::I,
        ][usize::from(self.phase)]
    }

    pub fn matrix(&self) -> Matrix {
        let mut m = Matrix::identity(1, 1);
        for p in &self.kinds {
            m = gates::kron(&m, &p.matrix());
        }
        m * self.phase_factor()
    }
}
