use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qcore::gates::{self, Angle, Axis};
use crate::qcore::StateVector;

/// A gate of Bob's source circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceGate {
    H(usize),
    P(usize),
    T(usize),
    Cz(usize, usize),
    /// Control first.
    Cnot(usize, usize),
    G(usize, usize),
    /// `cos θ I + i sin θ σ_axis`
    Eq1 { theta: Angle, axis: Axis, qubit: usize },
}

impl SourceGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            SourceGate::H(q) | SourceGate::P(q) | SourceGate::T(q) => vec![q],
            SourceGate::Eq1 { qubit, .. } => vec![qubit],
            SourceGate::Cz(a, b) | SourceGate::Cnot(a, b) | SourceGate::G(a, b) => vec![a, b],
        }
    }

    pub fn matrix(&self) -> gates::Matrix {
        match *self {
            SourceGate::H(_) => gates::hadamard(),
            SourceGate::P(_) => gates::phase(),
            SourceGate::T(_) => gates::t_gate(),
            SourceGate::Cz(..) => gates::cz(),
            SourceGate::Cnot(..) => gates::cnot(),
            SourceGate::G(..) => gates::g_gate(),
            SourceGate::Eq1 { theta, axis, .. } => gates::eq1(theta, axis),
        }
    }

    pub fn is_t(&self) -> bool {
        matches!(self, SourceGate::T(_))
    }
}

impl fmt::Display for SourceGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SourceGate::H(q) => write!(f, "H {q}"),
            SourceGate::P(q) => write!(f, "P {q}"),
            SourceGate::T(q) => write!(f, "T {q}"),
            SourceGate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            SourceGate::Cnot(a, b) => write!(f, "CNOT {a} {b}"),
            SourceGate::G(a, b) => write!(f, "G {a} {b}"),
            SourceGate::Eq1 { theta, axis, qubit } => {
                write!(f, "EQ1 {} {} {qubit}", theta.quarters(), axis.index())
            }
        }
    }
}

/// Bob's circuit over Clifford+T gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceCircuit {
    n_qubits: usize,
    gates: Vec<SourceGate>,
}

impl SourceCircuit {
    pub fn new(n_qubits: usize, gates: Vec<SourceGate>) -> Result<Self> {
        for g in &gates {
            let qs = g.qubits();
            for &q in &qs {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
                }
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::DuplicateTarget(qs[0]));
            }
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[SourceGate] {
        &self.gates
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_t()).count()
    }

    /// Parses the line-oriented circuit format: `H q`, `P q`, `T q`,
    /// `CZ a b`, `CNOT c t`, `G a b`, with `#` comments. `EQ1 k j q` adds
    /// `cos(kπ/4) I + i sin(kπ/4) σ_j` on qubit `q`. The register width is
    /// `n_qubits` if given, otherwise one more than the largest index.
    pub fn parse(text: &str, n_qubits: Option<usize>) -> Result<Self> {
        let mut gates = Vec::new();
        let mut widest = 0usize;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let mut toks = line.split_whitespace();
            let op = toks.next().unwrap().to_ascii_uppercase();
            let args: Vec<usize> = toks
                .map(|t| t.parse::<usize>().map_err(|_| err(format!("bad qubit index `{t}`"))))
                .collect::<Result<_>>()?;
            let arity = match op.as_str() {
                "H" | "P" | "T" => 1,
                "CZ" | "CNOT" | "G" => 2,
                "EQ1" => 3,
                other => return Err(err(format!("unknown gate `{other}`"))),
            };
            if args.len() != arity {
                return Err(err(format!("`{op}` takes {arity} qubit(s), got {}", args.len())));
            }
            if arity == 2 && args[0] == args[1] {
                return Err(err(format!("`{op}` operands must differ")));
            }
            if op == "EQ1" {
                let axis = u8::try_from(args[1])
                    .ok()
                    .and_then(Axis::from_index)
                    .ok_or_else(|| err(format!("axis must be 1, 2 or 3, got {}", args[1])))?;
                if args[0] > 3 {
                    return Err(err(format!("angle index must be 0..=3, got {}", args[0])));
                }
                widest = widest.max(args[2] + 1);
                gates.push(SourceGate::Eq1 {
                    theta: Angle::from_quarters(args[0] as i64),
                    axis,
                    qubit: args[2],
                });
                continue;
            }
            widest = widest.max(args.iter().max().unwrap() + 1);
            gates.push(match op.as_str() {
                "H" => SourceGate::H(args[0]),
                "P" => SourceGate::P(args[0]),
                "T" => SourceGate::T(args[0]),
                "CZ" => SourceGate::Cz(args[0], args[1]),
                "CNOT" => SourceGate::Cnot(args[0], args[1]),
                _ => SourceGate::G(args[0], args[1]),
            });
        }
        let n = n_qubits.unwrap_or(widest.max(1));
        if widest > n {
            return Err(Error::QubitOutOfRange {
                qubit: widest - 1,
                n_qubits: n,
            });
        }
        Self::new(n, gates)
    }

    /// Applies the circuit gate by gate to `input`.
    pub fn apply_direct(&self, input: &StateVector) -> Result<StateVector> {
        if input.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: input.n_qubits(),
            });
        }
        let mut s = input.clone();
        for g in &self.gates {
            s.apply(&g.matrix(), &g.qubits())?;
        }
        Ok(s)
    }

    /// Random circuit over `{H, P, T, Eq1, CZ, CNOT, G}` with at least `min_t` T gates.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, n_gates: usize, min_t: usize, rng: &mut R) -> Self {
        assert!(min_t <= n_gates && n_qubits >= 1);
        let mut gates: Vec<SourceGate> = Vec::with_capacity(n_gates);
        let t_positions = rand::seq::index::sample(rng, n_gates, min_t).into_vec();
        for i in 0..n_gates {
            let q = rng.random_range(0..n_qubits);
            if t_positions.contains(&i) {
                gates.push(SourceGate::T(q));
                continue;
            }
            let kinds = if n_qubits >= 2 { 7 } else { 4 };
            let g = match rng.random_range(0..kinds) {
                0 => SourceGate::H(q),
                1 => SourceGate::P(q),
                2 => SourceGate::T(q),
                3 => SourceGate::Eq1 {
                    theta: Angle::from_quarters(rng.random_range(0..4)),
                    axis: Axis::ALL[rng.random_range(0..3)],
                    qubit: q,
                },
                k => {
                    let mut r = rng.random_range(0..n_qubits - 1);
                    if r >= q {
                        r += 1;
                    }
                    match k {
                        4 => SourceGate::Cz(q, r),
                        5 => SourceGate::Cnot(q, r),
                        _ => SourceGate::G(q, r),
                    }
                }
            };
            gates.push(g);
        }
        Self { n_qubits, gates }
    }
}

impl fmt::Display for SourceCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
