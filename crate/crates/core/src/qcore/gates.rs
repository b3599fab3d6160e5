//! Dense gate matrices and matrix comparisons.
//!
//! Multi-qubit matrices use the same ordering as [`StateVector`](super::StateVector):
//! the first listed qubit is the most significant bit of the matrix index.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex matrix.
pub type Matrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default tolerance for identities that hold up to a global phase.
pub const PHASE_TOL: f64 = 1e-10;

/// One of the three Pauli axes, numbered 1, 2, 3 for x, y, z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> u8 {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    pub fn from_index(j: u8) -> Option<Axis> {
        match j {
            1 => Some(Axis::X),
            2 => Some(Axis::Y),
            3 => Some(Axis::Z),
            _ => None,
        }
    }

    /// `(x, z)` symplectic bits of the axis Pauli.
    pub fn xz(self) -> (bool, bool) {
        match self {
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }

    pub fn matrix(self) -> Matrix {
        match self {
            Axis::X => pauli_x(),
            Axis::Y => pauli_y(),
            Axis::Z => pauli_z(),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// An angle that is an integer multiple of π/4, reduced mod π.
///
/// Only the four values `0, π/4, π/2, 3π/4` occur as program angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(u8);

impl Angle {
    pub const ZERO: Angle = Angle(0);
    pub const QUARTER_PI: Angle = Angle(1);
    pub const HALF_PI: Angle = Angle(2);
    pub const THREE_QUARTER_PI: Angle = Angle(3);
    pub const ALL: [Angle; 4] = [Angle(0), Angle(1), Angle(2), Angle(3)];

    /// `k·π/4`, reduced mod π.
    pub fn from_quarters(k: i64) -> Angle {
        Angle(k.rem_euclid(4) as u8)
    }

    pub fn quarters(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * FRAC_PI_4
    }

    /// Odd multiples of π/4 are prepared in the Y basis, even ones in the Z basis.
    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn plus_half_pi(self) -> Angle {
        Angle((self.0 + 2) % 4)
    }

    pub fn negate(self) -> Angle {
        Angle((4 - self.0) % 4)
    }

    pub fn double(self) -> Angle {
        Angle((2 * self.0) % 4)
    }
}

fn m2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Matrix {
    Matrix::from_row_slice(2, 2, &[a, b, c, d])
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(n_qubits: usize) -> Matrix {
    Matrix::identity(1 << n_qubits, 1 << n_qubits)
}

pub fn pauli_x() -> Matrix {
    m2(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Matrix {
    m2(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Matrix {
    m2(ONE, ZERO, ZERO, -ONE)
}

pub fn hadamard() -> Matrix {
    let h = re(FRAC_1_SQRT_2);
    m2(h, h, h, -h)
}

/// Phase gate `diag(1, i)`.
pub fn phase() -> Matrix {
    m2(ONE, ZERO, ZERO, I)
}

pub fn phase_dag() -> Matrix {
    m2(ONE, ZERO, ZERO, -I)
}

/// `diag(1, e^{iπ/4})`.
pub fn t_gate() -> Matrix {
    m2(ONE, ZERO, ZERO, Complex64::from_polar(1.0, FRAC_PI_4))
}

/// The native two-qubit gate `diag(1, -i, -i, 1)`.
pub fn g_gate() -> Matrix {
    Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, -I, -I, ONE]))
}

pub fn cz() -> Matrix {
    Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE]))
}

/// CNOT with the first qubit as control.
pub fn cnot() -> Matrix {
    controlled(&pauli_x())
}

/// `cos θ I + i sin θ σ_axis`.
pub fn eq1(theta: Angle, axis: Axis) -> Matrix {
    let r = theta.radians();
    identity(1) * re(r.cos()) + axis.matrix() * Complex64::new(0.0, r.sin())
}

/// Controlled-`u` with the control as the first (most significant) qubit.
pub fn controlled(u: &Matrix) -> Matrix {
    let d = u.nrows();
    let mut out = Matrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        out[(i, i)] = ONE;
    }
    out.view_mut((d, d), (d, d)).copy_from(u);
    out
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `u - v`.
pub fn max_abs_diff(u: &Matrix, v: &Matrix) -> f64 {
    assert_eq!(u.shape(), v.shape(), "matrix shapes differ");
    u.iter()
        .zip(v.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

pub fn is_unitary(u: &Matrix, tol: f64) -> bool {
    u.is_square() && max_abs_diff(&(u.adjoint() * u), &Matrix::identity(u.nrows(), u.ncols())) <= tol
}

/// Smallest `‖u − λv‖_max` over the unit scalar `λ` that best aligns `v` with `u`.
///
/// `λ` is taken from the Frobenius overlap `⟨v, u⟩`. Returns `f64::INFINITY` on a
/// shape mismatch.
pub fn phase_deviation(u: &Matrix, v: &Matrix) -> f64 {
    if u.shape() != v.shape() {
        return f64::INFINITY;
    }
    let overlap: Complex64 = v.iter().zip(u.iter()).map(|(b, a)| b.conj() * a).sum();
    let lambda = if overlap.norm() > 1e-300 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    max_abs_diff(u, &(v * lambda))
}

/// True iff `u = λ v` for some unit complex `λ`, within `tol` in max-entry norm.
pub fn equal_up_to_global_phase(u: &Matrix, v: &Matrix, tol: f64) -> bool {
    phase_deviation(u, v) <= tol
}
