//! Exhaustive algebraic checks run by `qhelab selftest`.

use std::fmt;

use num_complex::Complex64;

use crate::compiler::{decompose_clifford, single_qubit_cliffords, synthesize_cz};
use crate::gadget::{correction_for, postselect_gadget, register_state};
use crate::keytrack::{
    incorporate_slot_outcome, update_clifford, update_t, Bits, CliffordUpdate, InputClass, SymbolicKeys,
};
use crate::qcore::gates::{self, max_abs_diff, phase_deviation, Angle, Axis, Matrix};
use crate::qcore::{PauliOp, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} cases {:>4}  max deviation {:.3e}  tol {:.0e}  {}",
            self.name,
            self.cases,
            self.max_deviation,
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn check(name: &'static str, tolerance: f64, devs: impl IntoIterator<Item = f64>) -> IdentityCheck {
    let mut cases = 0;
    let mut max_deviation: f64 = 0.0;
    for d in devs {
        cases += 1;
        max_deviation = max_deviation.max(if d.is_nan() { f64::INFINITY } else { d });
    }
    IdentityCheck {
        name,
        cases,
        max_deviation,
        tolerance,
    }
}

/// Data-qubit map of the gadget for outcome `m`, read off the post-selected
/// images of `|0⟩` and `|1⟩` and scaled to be unitary.
pub fn gadget_branch(theta: Angle, axis: Axis, m: bool) -> Matrix {
    let reg = register_state(theta);
    let mut out = Matrix::zeros(2, 2);
    for c in 0..2 {
        let (p, post) = postselect_gadget(&StateVector::basis(1, c), 0, &reg, axis, m).expect("valid branch");
        let s = (2.0 * p).sqrt();
        for r in 0..2 {
            out[(r, c)] = post.amplitudes()[r] * s;
        }
    }
    out
}

/// After outcome 1 and its correction, every gadget branch equals the
/// intended primitive up to global phase.
pub fn gadget_corrections() -> IdentityCheck {
    let mut devs = Vec::new();
    for theta in Angle::ALL {
        for axis in Axis::ALL {
            for m in [false, true] {
                let branch = gadget_branch(theta, axis, m);
                let corrected = if m { correction_for(theta, axis) * branch } else { branch };
                devs.push(phase_deviation(&corrected, &gates::eq1(theta, axis)));
            }
        }
    }
    check("gadget-correction", 1e-10, devs)
}

/// `G(I⊗H)G(I⊗H)G(Z⊗H)G = e^{−iπ/4} G`, exactly.
pub fn g_sandwich() -> IdentityCheck {
    let g = gates::g_gate();
    let ih = gates::kron(&gates::identity(1), &gates::hadamard());
    let zh = gates::kron(&gates::pauli_z(), &gates::hadamard());
    let lhs = &g * &ih * &g * &ih * &g * &zh * &g;
    let rhs = &g * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    check("g-sandwich", 1e-12, [max_abs_diff(&lhs, &rhs)])
}

pub fn g_fourth_power() -> IdentityCheck {
    let g = gates::g_gate();
    check("g-fourth-power", 1e-12, [max_abs_diff(&(&g * &g * &g * &g), &gates::identity(2))])
}

fn keys_matrix(keys: &SymbolicKeys, vars: &Bits) -> Matrix {
    let (x, z): (Vec<bool>, Vec<bool>) = keys.eval(vars).expect("sized").into_iter().unzip();
    PauliOp::from_masks(&x, &z).matrix()
}

fn assignments(m: usize) -> impl Iterator<Item = Bits> {
    (0..1usize << m).map(move |v| (0..m).map(|i| v >> i & 1 == 1).collect())
}

/// `U M U† ∝ M'` over every mask `M` of `n` qubits.
fn key_rule(name: &'static str, n: usize, u: Matrix, gate: CliffordUpdate) -> IdentityCheck {
    let fresh = SymbolicKeys::fresh(n, InputClass::General);
    let mut after = fresh.clone();
    update_clifford(&mut after, gate).expect("valid gate");
    let devs: Vec<f64> = assignments(2 * n)
        .map(|v| phase_deviation(&(&u * keys_matrix(&fresh, &v) * u.adjoint()), &keys_matrix(&after, &v)))
        .collect();
    check(name, 1e-12, devs)
}

/// `P†^{x} T M T† ∝ M` over the four single-qubit masks.
pub fn key_rule_t() -> IdentityCheck {
    let fresh = SymbolicKeys::fresh(1, InputClass::General);
    let mut after = fresh.clone();
    let y = update_t(&mut after, 0).expect("valid qubit");
    let t = gates::t_gate();
    let devs: Vec<f64> = assignments(2)
        .map(|v| {
            let corr = if y.eval(&v).unwrap() { gates::phase_dag() } else { gates::identity(1) };
            let lhs = corr * &t * keys_matrix(&fresh, &v) * t.adjoint();
            phase_deviation(&lhs, &keys_matrix(&after, &v))
        })
        .collect();
    check("key-update-t", 1e-12, devs)
}

pub fn key_rules() -> Vec<IdentityCheck> {
    vec![
        key_rule("key-update-h", 1, gates::hadamard(), CliffordUpdate::H(0)),
        key_rule("key-update-p", 1, gates::phase(), CliffordUpdate::P(0)),
        key_rule_t(),
        key_rule("key-update-cnot", 2, gates::cnot(), CliffordUpdate::Cnot(0, 1)),
        key_rule("key-update-cz", 2, gates::cz(), CliffordUpdate::Cz(0, 1)),
        key_rule("key-update-g", 2, gates::g_gate(), CliffordUpdate::G(0, 1)),
    ]
}

/// The symbolic slot rule against the physical gadget: every mask, angle,
/// axis, flip and outcome.
pub fn slot_rule() -> IdentityCheck {
    let mut devs = Vec::new();
    for v in assignments(2) {
        let fresh = SymbolicKeys::fresh(1, InputClass::General);
        let pad = keys_matrix(&fresh, &v);
        for theta in Angle::ALL {
            for axis in Axis::ALL {
                for flip in [false, true] {
                    let realized = if flip { theta.plus_half_pi() } else { theta };
                    for m in [false, true] {
                        let physical = gadget_branch(realized, axis, m) * &pad;
                        let mut keys = fresh.clone();
                        incorporate_slot_outcome(&mut keys, 0, axis, theta, flip, m).expect("valid slot");
                        let tracked = keys_matrix(&keys, &v) * gates::eq1(theta, axis);
                        devs.push(phase_deviation(&physical, &tracked));
                    }
                }
            }
        }
    }
    check("slot-key-rule", 1e-10, devs)
}

/// Each single-qubit Clifford is a short product of primitives.
pub fn clifford_decompositions() -> IdentityCheck {
    let devs: Vec<f64> = single_qubit_cliffords()
        .iter()
        .map(|u| match decompose_clifford(u) {
            Ok(seq) if seq.steps.len() <= 6 => max_abs_diff(&seq.matrix(), u),
            _ => f64::INFINITY,
        })
        .collect();
    check("clifford-decomposition", 1e-12, devs)
}

pub fn cz_synthesis() -> Vec<IdentityCheck> {
    let s = synthesize_cz();
    vec![
        check("cz-synthesis", 1e-12, [max_abs_diff(&s.matrix(), &gates::cz())]),
        check(
            "cnot-synthesis",
            1e-12,
            [s.cnot_matrix().map_or(f64::INFINITY, |m| max_abs_diff(&m, &gates::cnot()))],
        ),
    ]
}

pub fn all_identities() -> Vec<IdentityCheck> {
    let mut v = vec![gadget_corrections(), g_sandwich(), g_fourth_power()];
    v.extend(key_rules());
    v.push(slot_rule());
    v.push(clifford_decompositions());
    v.extend(cz_synthesis());
    v
}
