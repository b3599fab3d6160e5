//! Single-qubit Clifford decomposition into program-state primitives, and the
//! two-qubit constructions built from the native `G` gate.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::gates::{self, Angle, Axis, Matrix};

/// Longest primitive sequence searched before a matrix is rejected.
pub const MAX_SEQUENCE_LEN: usize = 6;

/// Primitives used by the search, in tie-breaking order. Only the X and Z axes
/// are used so that `H` comes out as the fixed three-slot `X, Z, X` pattern.
pub const GENERATORS: [(Angle, Axis); 6] = [
    (Angle::QUARTER_PI, Axis::X),
    (Angle::QUARTER_PI, Axis::Z),
    (Angle::HALF_PI, Axis::X),
    (Angle::HALF_PI, Axis::Z),
    (Angle::THREE_QUARTER_PI, Axis::X),
    (Angle::THREE_QUARTER_PI, Axis::Z),
];

/// A product of primitives `cos θ I + i sin θ σ_j`, listed in application
/// order, with `global_phase · U_last ⋯ U_first` equal to the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Eq1Sequence {
    pub steps: Vec<(Angle, Axis)>,
    pub global_phase: Complex64,
}

impl Eq1Sequence {
    /// `U_last ⋯ U_first`, without the global phase.
    pub fn product(&self) -> Matrix {
        product_of(&self.steps)
    }

    pub fn matrix(&self) -> Matrix {
        self.product() * self.global_phase
    }
}

fn product_of(steps: &[(Angle, Axis)]) -> Matrix {
    steps
        .iter()
        .fold(gates::identity(1), |acc, &(t, a)| gates::eq1(t, a) * acc)
}

fn phase_between(target: &Matrix, product: &Matrix) -> Complex64 {
    let overlap: Complex64 = product.iter().zip(target.iter()).map(|(p, t)| p.conj() * t).sum();
    overlap / overlap.norm()
}

/// Lexicographically-first shortest sequence for each of the 24 Cliffords.
fn canonical_table() -> &'static [(Matrix, Vec<(Angle, Axis)>)] {
    static TABLE: OnceLock<Vec<(Matrix, Vec<(Angle, Axis)>)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<(Matrix, Vec<(Angle, Axis)>)> = vec![(gates::identity(1), Vec::new())];
        let mut frontier: Vec<Vec<(Angle, Axis)>> = vec![Vec::new()];
        for _ in 0..MAX_SEQUENCE_LEN {
            if table.len() == 24 {
                break;
            }
            // Extending the previous layer in order keeps each layer sorted.
            let mut next = Vec::new();
            for prefix in &frontier {
                for g in GENERATORS {
                    let mut seq = prefix.clone();
                    seq.push(g);
                    let m = product_of(&seq);
                    if !table
                        .iter()
                        .any(|(u, _)| gates::equal_up_to_global_phase(&m, u, 1e-9))
                    {
                        table.push((m, seq.clone()));
                    }
                    next.push(seq);
                }
            }
            frontier = next;
        }
        table
    })
}

/// Shortest primitive sequence for a single-qubit Clifford, up to global phase.
pub fn decompose_clifford(u: &Matrix) -> Result<Eq1Sequence> {
    if u.shape() != (2, 2) || !gates::is_unitary(u, 1e-9) {
        return Err(Error::NotClifford);
    }
    let (_, steps) = canonical_table()
        .iter()
        .find(|(m, _)| gates::equal_up_to_global_phase(u, m, 1e-9))
        .ok_or(Error::NotClifford)?;
    let product = product_of(steps);
    Ok(Eq1Sequence {
        steps: steps.clone(),
        global_phase: phase_between(u, &product),
    })
}

/// All 24 single-qubit Cliffords (up to phase), in canonical-table order.
pub fn single_qubit_cliffords() -> Vec<Matrix> {
    canonical_table().iter().map(|(m, _)| m.clone()).collect()
}

/// CZ from one `G` plus `cos(3π/4) I + i sin(3π/4) Z` on each qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct CzSynthesis {
    /// Primitive applied to each qubit after the `G`.
    pub single_qubit: (Angle, Axis),
    pub g_count: usize,
    pub global_phase: Complex64,
}

impl CzSynthesis {
    pub fn matrix(&self) -> Matrix {
        let (t, a) = self.single_qubit;
        let p = gates::eq1(t, a);
        gates::kron(&p, &p) * gates::g_gate() * self.global_phase
    }

    /// CNOT as `(I⊗H) · CZ · (I⊗H)`, with `H` expanded into primitives.
    pub fn cnot_matrix(&self) -> Result<Matrix> {
        let h = decompose_clifford(&gates::hadamard())?.matrix();
        let ih = gates::kron(&gates::identity(1), &h);
        Ok(&ih * self.matrix() * &ih)
    }
}

pub fn synthesize_cz() -> CzSynthesis {
    CzSynthesis {
        single_qubit: (Angle::THREE_QUARTER_PI, Axis::Z),
        g_count: 1,
        global_phase: gates::I,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{max_abs_diff, PHASE_TOL};

    #[test]
    fn identity_is_empty() {
        let s = decompose_clifford(&gates::identity(1)).unwrap();
        assert!(s.steps.is_empty());
        assert!((s.global_phase - gates::ONE).norm() < 1e-12);
    }

    #[test]
    fn z_is_one_half_pi_slot() {
        let s = decompose_clifford(&gates::pauli_z()).unwrap();
        assert_eq!(s.steps, vec![(Angle::HALF_PI, Axis::Z)]);
        assert!((s.global_phase + gates::I).norm() < 1e-12);
    }

    #[test]
    fn hadamard_is_xzx() {
        // (I+iX)(I+iZ)(I+iX)/2√2 = iH
        let h = decompose_clifford(&gates::hadamard()).unwrap();
        assert_eq!(
            h.steps,
            vec![
                (Angle::QUARTER_PI, Axis::X),
                (Angle::QUARTER_PI, Axis::Z),
                (Angle::QUARTER_PI, Axis::X)
            ]
        );
        assert!((h.global_phase + gates::I).norm() < 1e-12);
        assert!(max_abs_diff(&h.matrix(), &gates::hadamard()) < 1e-12);
    }

    #[test]
    fn all_24_cliffords_decompose_within_six() {
        let all = single_qubit_cliffords();
        assert_eq!(all.len(), 24);
        for u in &all {
            // feed a rephased copy to exercise phase recovery
            let target = u * Complex64::from_polar(1.0, 0.7);
            let s = decompose_clifford(&target).unwrap();
            assert!(s.steps.len() <= MAX_SEQUENCE_LEN);
            assert!(max_abs_diff(&s.matrix(), &target) < 1e-12);
        }
    }

    #[test]
    fn t_is_rejected() {
        assert_eq!(decompose_clifford(&gates::t_gate()), Err(Error::NotClifford));
        assert_eq!(decompose_clifford(&gates::cz()), Err(Error::NotClifford));
    }

    #[test]
    fn cz_and_cnot_reconstruct() {
        let synth = synthesize_cz();
        assert!(max_abs_diff(&synth.matrix(), &gates::cz()) < 1e-12);
        assert!(gates::equal_up_to_global_phase(
            &synth.cnot_matrix().unwrap(),
            &gates::cnot(),
            PHASE_TOL
        ));
    }

    #[test]
    fn decomposition_is_deterministic() {
        let a = decompose_clifford(&gates::phase()).unwrap();
        let b = decompose_clifford(&gates::phase()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.steps, vec![(Angle::THREE_QUARTER_PI, Axis::Z)]);
    }
}
