//! Dense-matrix oracle built from scratch, independent of the library's gate
//! and state code. Qubit 0 is the most significant bit.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

use qhelab::compiler::{SourceCircuit, SourceGate};
use qhelab::qcore::{Angle, Axis};

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn m2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> M {
    M::from_row_slice(2, 2, &[a, b, cc, d])
}

pub fn id(dim: usize) -> M {
    M::identity(dim, dim)
}

pub fn x() -> M {
    m2(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
}

pub fn y() -> M {
    m2(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
}

pub fn z() -> M {
    m2(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
}

pub fn h() -> M {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    m2(c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.))
}

pub fn s() -> M {
    m2(c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.))
}

pub fn t() -> M {
    m2(c(1., 0.), c(0., 0.), c(0., 0.), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4))
}

pub fn diag(v: &[Complex64]) -> M {
    M::from_fn(v.len(), v.len(), |i, j| if i == j { v[i] } else { c(0., 0.) })
}

pub fn g() -> M {
    diag(&[c(1., 0.), c(0., -1.), c(0., -1.), c(1., 0.)])
}

pub fn cz() -> M {
    diag(&[c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.)])
}

pub fn cnot() -> M {
    let mut m = M::zeros(4, 4);
    for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(r, col)] = c(1., 0.);
    }
    m
}

pub fn sigma(axis: Axis) -> M {
    match axis {
        Axis::X => x(),
        Axis::Y => y(),
        Axis::Z => z(),
    }
}

/// `cos θ I + i sin θ σ` for `θ = k·π/4`.
pub fn prim(quarters: u8, axis: Axis) -> M {
    let th = quarters as f64 * std::f64::consts::FRAC_PI_4;
    id(2) * c(th.cos(), 0.) + sigma(axis) * c(0., th.sin())
}

pub fn prim_angle(theta: Angle, axis: Axis) -> M {
    prim(theta.quarters(), axis)
}

/// Embeds a `2^k`-dimensional gate on `targets` (first target is the gate's
/// most significant bit) into `n` qubits, by acting on basis states.
pub fn embed(u: &M, targets: &[usize], n: usize) -> M {
    let dim = 1usize << n;
    let k = targets.len();
    let bit = |q: usize| n - 1 - q;
    let mut out = M::zeros(dim, dim);
    for col in 0..dim {
        let local_in = (0..k).fold(0, |acc, i| acc << 1 | (col >> bit(targets[i]) & 1));
        for local_out in 0..1usize << k {
            let amp = u[(local_out, local_in)];
            if amp == c(0., 0.) {
                continue;
            }
            let mut row = col;
            for (i, &tq) in targets.iter().enumerate() {
                let b = local_out >> (k - 1 - i) & 1;
                row = (row & !(1 << bit(tq))) | (b << bit(tq));
            }
            out[(row, col)] += amp;
        }
    }
    out
}

pub fn gate_matrix(gate: &SourceGate, n: usize) -> M {
    match *gate {
        SourceGate::H(q) => embed(&h(), &[q], n),
        SourceGate::P(q) => embed(&s(), &[q], n),
        SourceGate::T(q) => embed(&t(), &[q], n),
        SourceGate::Cz(a, b) => embed(&cz(), &[a, b], n),
        SourceGate::Cnot(a, b) => embed(&cnot(), &[a, b], n),
        SourceGate::G(a, b) => embed(&g(), &[a, b], n),
        SourceGate::Eq1 { theta, axis, qubit } => embed(&prim_angle(theta, axis), &[qubit], n),
    }
}

pub fn circuit_unitary(circuit: &SourceCircuit) -> M {
    let n = circuit.n_qubits();
    circuit
        .gates()
        .iter()
        .fold(id(1 << n), |acc, g| gate_matrix(g, n) * acc)
}

/// `⊗_q X^{x_q} Z^{z_q}`
pub fn pauli_mask(xs: &[bool], zs: &[bool]) -> M {
    xs.iter().zip(zs).fold(id(1), |acc, (&xb, &zb)| {
        let mut p = id(2);
        if xb {
            p = x() * p;
        }
        if zb {
            p *= z();
        }
        acc.kronecker(&p)
    })
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter().zip(b.iter()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

/// `min_λ ‖a − λ b‖_max` over unit `λ`, with `λ` from the Frobenius overlap.
pub fn phase_diff(a: &M, b: &M) -> f64 {
    let ov: Complex64 = b.iter().zip(a.iter()).map(|(q, p)| q.conj() * p).sum();
    if ov.norm() < 1e-300 {
        return f64::INFINITY;
    }
    max_diff(a, &(b * (ov / ov.norm())))
}

/// Finds the mask `(x, z)` with `m ∝ X^x Z^z`, if any.
pub fn as_mask(m: &M, n: usize) -> Option<(Vec<bool>, Vec<bool>)> {
    for code in 0..1usize << (2 * n) {
        let xs: Vec<bool> = (0..n).map(|q| code >> q & 1 == 1).collect();
        let zs: Vec<bool> = (0..n).map(|q| code >> (n + q) & 1 == 1).collect();
        if phase_diff(m, &pauli_mask(&xs, &zs)) < 1e-9 {
            return Some((xs, zs));
        }
    }
    None
}

/// `|⟨a|b⟩|²`
pub fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p.conj() * q).sum::<Complex64>().norm_sqr()
}

pub fn apply(u: &M, v: &[Complex64]) -> Vec<Complex64> {
    (0..u.nrows()).map(|r| (0..u.ncols()).map(|k| u[(r, k)] * v[k]).sum()).collect()
}

pub fn bloch(v: &[Complex64]) -> [f64; 3] {
    let n: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    let (a, b) = (v[0] / n.sqrt(), v[1] / n.sqrt());
    let ab = a.conj() * b;
    [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()]
}
