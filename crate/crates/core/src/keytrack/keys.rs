use std::collections::HashMap;

use rand::Rng;

use super::poly::{Bits, Gf2Affine, LinearPoly};
use crate::compiler::SlotId;
use crate::error::{Error, Result};
use crate::qcore::gates::{Angle, Axis};
use crate::qcore::PauliOp;

/// What Alice promises about her input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputClass {
    General,
    /// Product of real-amplitude qubits.
    RealProduct,
    /// A computational-basis state.
    Classical,
}

impl InputClass {
    /// Number of pad variables for `n` qubits.
    pub fn n_vars(self, n: usize) -> usize {
        match self {
            InputClass::General => 2 * n,
            _ => n,
        }
    }
}

/// Alice's secret pad variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliceKeys {
    variables: Bits,
    input_class: InputClass,
}

impl AliceKeys {
    pub fn new(variables: Bits, input_class: InputClass) -> Self {
        Self { variables, input_class }
    }

    pub fn variables(&self) -> &Bits {
        &self.variables
    }

    pub fn input_class(&self) -> InputClass {
        self.input_class
    }

    pub fn n_qubits(&self) -> usize {
        match self.input_class {
            InputClass::General => self.variables.len() / 2,
            _ => self.variables.len(),
        }
    }

    /// Initial `(x, z)` mask bits of qubit `q`.
    pub fn initial_mask(&self, q: usize) -> (bool, bool) {
        match self.input_class {
            InputClass::General => (self.variables[2 * q], self.variables[2 * q + 1]),
            _ => (self.variables[q], self.variables[q]),
        }
    }

    /// The pad `⊗ X^x Z^z` Alice applies to her input.
    pub fn initial_pad(&self) -> PauliOp {
        let (x, z): (Vec<bool>, Vec<bool>) = (0..self.n_qubits()).map(|q| self.initial_mask(q)).unzip();
        PauliOp::from_masks(&x, &z)
    }
}

/// Bob's symbolic view of the mask `X^x Z^z` on one qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QubitKey {
    pub xpoly: Gf2Affine,
    pub zpoly: Gf2Affine,
}

/// Symbolic keys for every data qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicKeys {
    qubits: Vec<QubitKey>,
    n_vars: usize,
}

impl SymbolicKeys {
    pub fn fresh(n: usize, input_class: InputClass) -> Self {
        let m = input_class.n_vars(n);
        let qubits = (0..n)
            .map(|q| match input_class {
                InputClass::General => QubitKey {
                    xpoly: Gf2Affine::variable(m, 2 * q),
                    zpoly: Gf2Affine::variable(m, 2 * q + 1),
                },
                _ => QubitKey {
                    xpoly: Gf2Affine::variable(m, q),
                    zpoly: Gf2Affine::variable(m, q),
                },
            })
            .collect();
        Self { qubits, n_vars: m }
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn qubit(&self, q: usize) -> &QubitKey {
        &self.qubits[q]
    }

    pub fn qubits(&self) -> &[QubitKey] {
        &self.qubits
    }

    #[cfg(test)]
    pub(crate) fn qubits_mut(&mut self) -> &mut [QubitKey] {
        &mut self.qubits
    }

    /// Concrete `(x, z)` mask per qubit for the given variable assignment.
    pub fn eval(&self, vars: &Bits) -> Result<Vec<(bool, bool)>> {
        self.qubits
            .iter()
            .map(|k| Ok((k.xpoly.eval(vars)?, k.zpoly.eval(vars)?)))
            .collect()
    }

    fn check(&self, q: usize) -> Result<()> {
        if q < self.qubits.len() {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.qubits.len(),
            })
        }
    }

    fn pair(&mut self, a: usize, b: usize) -> Result<(&mut QubitKey, &mut QubitKey)> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::DuplicateTarget(a));
        }
        if a < b {
            let (lo, hi) = self.qubits.split_at_mut(b);
            Ok((&mut lo[a], &mut hi[0]))
        } else {
            let (lo, hi) = self.qubits.split_at_mut(a);
            Ok((&mut hi[0], &mut lo[b]))
        }
    }

    /// XORs `σ_axis^e` into the mask of `q`.
    fn push_pauli(&mut self, q: usize, axis: Axis, e: &Gf2Affine) {
        let (sx, sz) = axis.xz();
        let k = &mut self.qubits[q];
        if sx {
            k.xpoly ^= e;
        }
        if sz {
            k.zpoly ^= e;
        }
    }

    /// Indicator that `σ_axis` anticommutes with the current mask of `q`.
    fn anticommutes(&self, q: usize, axis: Axis) -> Gf2Affine {
        let k = &self.qubits[q];
        match axis {
            Axis::X => k.zpoly.clone(),
            Axis::Y => &k.xpoly ^ &k.zpoly,
            Axis::Z => k.xpoly.clone(),
        }
    }
}

/// Samples Alice's variables and gives Bob the matching symbolic keys.
pub fn init_keys<R: Rng + ?Sized>(n: usize, input_class: InputClass, rng: &mut R) -> (AliceKeys, SymbolicKeys) {
    assert!(n >= 1, "need at least one qubit");
    let m = input_class.n_vars(n);
    let vars: Bits = (0..m).map(|_| rng.random::<bool>()).collect();
    (AliceKeys::new(vars, input_class), SymbolicKeys::fresh(n, input_class))
}

/// A Clifford through which Bob conjugates the mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordUpdate {
    H(usize),
    P(usize),
    /// Control first.
    Cnot(usize, usize),
    Cz(usize, usize),
    G(usize, usize),
    Eq1 { theta: Angle, axis: Axis, qubit: usize },
}

/// Conjugates the symbolic mask through a Clifford applied directly.
pub fn update_clifford(keys: &mut SymbolicKeys, gate: CliffordUpdate) -> Result<()> {
    match gate {
        CliffordUpdate::H(q) => {
            keys.check(q)?;
            let k = &mut keys.qubits[q];
            std::mem::swap(&mut k.xpoly, &mut k.zpoly);
        }
        CliffordUpdate::P(q) => {
            keys.check(q)?;
            let k = &mut keys.qubits[q];
            k.zpoly ^= &k.xpoly.clone();
        }
        CliffordUpdate::Cnot(c, t) => {
            let (kc, kt) = keys.pair(c, t)?;
            kc.zpoly ^= &kt.zpoly;
            kt.xpoly ^= &kc.xpoly;
        }
        CliffordUpdate::Cz(a, b) => {
            let (ka, kb) = keys.pair(a, b)?;
            ka.zpoly ^= &kb.xpoly;
            kb.zpoly ^= &ka.xpoly;
        }
        CliffordUpdate::G(a, b) => {
            // G X₁ G† ∝ Y₁ Z₂; G commutes with Z masks and with X⊗X.
            let (ka, kb) = keys.pair(a, b)?;
            let s = &ka.xpoly ^ &kb.xpoly;
            ka.zpoly ^= &s;
            kb.zpoly ^= &s;
        }
        CliffordUpdate::Eq1 { theta, axis, qubit } => {
            keys.check(qubit)?;
            if theta.is_odd() {
                let t = keys.anticommutes(qubit, axis);
                keys.push_pauli(qubit, axis, &t);
            }
        }
    }
    Ok(())
}

/// Polynomial deciding the `P†` after a `T` on `q`.
///
/// `T X = e^{-iπ/4} P X T`, so once the conditional `P†` is applied the mask
/// passes through unchanged.
pub fn update_t(keys: &mut SymbolicKeys, q: usize) -> Result<LinearPoly> {
    keys.check(q)?;
    Ok(keys.qubits[q].xpoly.clone())
}

/// Folds one slot into the keys: the logical primitive `cos θ I + i sin θ σ`
/// was applied, using a program state whose angle was shifted by π/2 when
/// `flip` is set, with gadget outcome `m`.
pub fn incorporate_slot_outcome(
    keys: &mut SymbolicKeys,
    qubit: usize,
    axis: Axis,
    theta: Angle,
    flip: bool,
    m: bool,
) -> Result<()> {
    keys.check(qubit)?;
    let mut e = if theta.is_odd() {
        let mut t = keys.anticommutes(qubit, axis);
        t.flip_constant(m);
        t
    } else {
        Gf2Affine::zero(keys.n_vars)
    };
    e.flip_constant(flip);
    keys.push_pauli(qubit, axis, &e);
    Ok(())
}

/// Current `(xpoly, zpoly)` per qubit.
pub fn final_polys(keys: &SymbolicKeys) -> Vec<(LinearPoly, LinearPoly)> {
    keys.qubits.iter().map(|k| (k.xpoly.clone(), k.zpoly.clone())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Pending {
    Slot {
        id: SlotId,
        qubit: usize,
        axis: Axis,
        theta: Angle,
        flip: bool,
    },
    Clifford(CliffordUpdate),
}

/// Bob's key state across a schedule. Slots and the Cliffords interleaved
/// with them are queued until Alice reports the gadget outcomes, then
/// replayed in order.
#[derive(Debug, Clone)]
pub struct KeyTracker {
    keys: SymbolicKeys,
    pending: Vec<Pending>,
}

impl KeyTracker {
    pub fn new(keys: SymbolicKeys) -> Self {
        Self {
            keys,
            pending: Vec::new(),
        }
    }

    pub fn keys(&self) -> &SymbolicKeys {
        &self.keys
    }

    pub fn pending_slots(&self) -> usize {
        self.pending.iter().filter(|p| matches!(p, Pending::Slot { .. })).count()
    }

    pub fn record_slot(&mut self, id: SlotId, qubit: usize, axis: Axis, theta: Angle, flip: bool) -> Result<()> {
        self.keys.check(qubit)?;
        self.pending.push(Pending::Slot {
            id,
            qubit,
            axis,
            theta,
            flip,
        });
        Ok(())
    }

    pub fn clifford(&mut self, gate: CliffordUpdate) -> Result<()> {
        if self.pending.is_empty() {
            update_clifford(&mut self.keys, gate)
        } else {
            self.pending.push(Pending::Clifford(gate));
            Ok(())
        }
    }

    /// Replays the queue with Alice's reported outcomes.
    pub fn resolve(&mut self, outcomes: &[(SlotId, bool)]) -> Result<()> {
        let mut by_id: HashMap<SlotId, bool> = HashMap::with_capacity(outcomes.len());
        for &(id, m) in outcomes {
            by_id.insert(id, m);
        }
        for p in &self.pending {
            if let Pending::Slot { id, .. } = p {
                if !by_id.contains_key(id) {
                    return Err(Error::PendingOutcomes(self.pending_slots()));
                }
            }
        }
        if by_id.len() != self.pending_slots() {
            let stray = by_id
                .keys()
                .find(|id| {
                    !self
                        .pending
                        .iter()
                        .any(|p| matches!(p, Pending::Slot { id: pid, .. } if pid == *id))
                })
                .copied()
                .unwrap_or(0);
            return Err(Error::UnknownSlot(stray));
        }
        for p in std::mem::take(&mut self.pending) {
            match p {
                Pending::Slot {
                    id,
                    qubit,
                    axis,
                    theta,
                    flip,
                } => incorporate_slot_outcome(&mut self.keys, qubit, axis, theta, flip, by_id[&id])?,
                Pending::Clifford(g) => update_clifford(&mut self.keys, g)?,
            }
        }
        Ok(())
    }

    pub fn update_t(&mut self, q: usize) -> Result<LinearPoly> {
        self.settled()?;
        update_t(&mut self.keys, q)
    }

    pub fn final_polys(&self) -> Result<Vec<(LinearPoly, LinearPoly)>> {
        self.settled()?;
        Ok(final_polys(&self.keys))
    }

    fn settled(&self) -> Result<()> {
        match self.pending_slots() {
            0 => Ok(()),
            n => Err(Error::PendingOutcomes(n)),
        }
    }
}
