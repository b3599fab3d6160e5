//! Symbolic tracking of Alice's Pauli pad. Bob never learns the variables;
//! he only updates the affine coefficients each mask bit depends on.

mod keys;
mod poly;

pub use keys::{
    final_polys, incorporate_slot_outcome, init_keys, update_clifford, update_t, AliceKeys, CliffordUpdate,
    InputClass, KeyTracker, QubitKey, SymbolicKeys,
};
pub use poly::{Bits, Gf2Affine, LinearPoly};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{postselect_gadget, register_state};
    use crate::qcore::gates::{self, Angle, Axis, Matrix};
    use crate::qcore::{equal_up_to_global_phase, fidelity, PauliOp, StateVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assignments(m: usize) -> impl Iterator<Item = Bits> {
        (0..1usize << m).map(move |v| (0..m).map(|i| v >> i & 1 == 1).collect())
    }

    fn mask_matrix(keys: &SymbolicKeys, vars: &Bits) -> Matrix {
        let (x, z): (Vec<bool>, Vec<bool>) = keys.eval(vars).unwrap().into_iter().unzip();
        PauliOp::from_masks(&x, &z).matrix()
    }

    fn full_gate(u: &Matrix, targets: &[usize], n: usize) -> Matrix {
        // columns are images of basis states
        let dim = 1 << n;
        let mut out = Matrix::zeros(dim, dim);
        for c in 0..dim {
            let s = StateVector::basis(n, c).applied(u, targets).unwrap();
            for r in 0..dim {
                out[(r, c)] = s.amplitudes()[r];
            }
        }
        out
    }

    fn update_matrix(g: CliffordUpdate, n: usize) -> Matrix {
        match g {
            CliffordUpdate::H(q) => full_gate(&gates::hadamard(), &[q], n),
            CliffordUpdate::P(q) => full_gate(&gates::phase(), &[q], n),
            CliffordUpdate::Cnot(a, b) => full_gate(&gates::cnot(), &[a, b], n),
            CliffordUpdate::Cz(a, b) => full_gate(&gates::cz(), &[a, b], n),
            CliffordUpdate::G(a, b) => full_gate(&gates::g_gate(), &[a, b], n),
            CliffordUpdate::Eq1 { theta, axis, qubit } => full_gate(&gates::eq1(theta, axis), &[qubit], n),
        }
    }

    fn all_updates() -> Vec<CliffordUpdate> {
        let mut v = vec![
            CliffordUpdate::H(0),
            CliffordUpdate::H(1),
            CliffordUpdate::P(0),
            CliffordUpdate::P(1),
            CliffordUpdate::Cnot(0, 1),
            CliffordUpdate::Cnot(1, 0),
            CliffordUpdate::Cz(0, 1),
            CliffordUpdate::G(0, 1),
            CliffordUpdate::G(1, 0),
        ];
        for theta in Angle::ALL {
            for axis in Axis::ALL {
                v.push(CliffordUpdate::Eq1 { theta, axis, qubit: 1 });
            }
        }
        v
    }

    #[test]
    fn init_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (alice, keys) = init_keys(1, InputClass::General, &mut rng);
        assert_eq!(alice.variables().len(), 2);
        assert_eq!(keys.qubit(0).xpoly, Gf2Affine::variable(2, 0));
        assert_eq!(keys.qubit(0).zpoly, Gf2Affine::variable(2, 1));
        let (alice, keys) = init_keys(2, InputClass::Classical, &mut rng);
        assert_eq!(alice.variables().len(), 2);
        for q in 0..2 {
            assert_eq!(keys.qubit(q).xpoly, Gf2Affine::variable(2, q));
            assert_eq!(keys.qubit(q).zpoly, keys.qubit(q).xpoly);
        }
        let again = init_keys(1, InputClass::General, &mut ChaCha8Rng::seed_from_u64(1)).0;
        let first = init_keys(1, InputClass::General, &mut ChaCha8Rng::seed_from_u64(1)).0;
        assert_eq!(again, first);
    }

    #[test]
    fn named_rules() {
        let m = 4;
        let (a, b, c, d) = (
            Gf2Affine::variable(m, 0),
            Gf2Affine::variable(m, 1),
            Gf2Affine::variable(m, 2),
            Gf2Affine::variable(m, 3),
        );
        let mut k = SymbolicKeys::fresh(2, InputClass::General);
        update_clifford(&mut k, CliffordUpdate::H(0)).unwrap();
        assert_eq!((&k.qubit(0).xpoly, &k.qubit(0).zpoly), (&b, &a));
        let mut k = SymbolicKeys::fresh(2, InputClass::General);
        update_clifford(&mut k, CliffordUpdate::P(0)).unwrap();
        assert_eq!(k.qubit(0).zpoly, &a ^ &b);
        let mut k = SymbolicKeys::fresh(2, InputClass::General);
        update_clifford(&mut k, CliffordUpdate::Cnot(0, 1)).unwrap();
        assert_eq!(k.qubit(0).xpoly, a);
        assert_eq!(k.qubit(0).zpoly, &b ^ &d);
        assert_eq!(k.qubit(1).xpoly, &a ^ &c);
        assert_eq!(k.qubit(1).zpoly, d);
    }

    #[test]
    fn clifford_rules_match_conjugation() {
        for g in all_updates() {
            let before = SymbolicKeys::fresh(2, InputClass::General);
            let mut after = before.clone();
            update_clifford(&mut after, g).unwrap();
            let u = update_matrix(g, 2);
            for vars in assignments(4) {
                let lhs = &u * mask_matrix(&before, &vars) * u.adjoint();
                assert!(
                    equal_up_to_global_phase(&lhs, &mask_matrix(&after, &vars), 1e-12),
                    "{g:?} {vars:?}"
                );
            }
        }
    }

    #[test]
    fn random_clifford_sequences_match_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pool = all_updates();
        for _ in 0..40 {
            let mut keys = SymbolicKeys::fresh(2, InputClass::General);
            let mut u = gates::identity(2);
            for _ in 0..8 {
                let g = pool[rand::Rng::random_range(&mut rng, 0..pool.len())];
                update_clifford(&mut keys, g).unwrap();
                u = update_matrix(g, 2) * u;
            }
            let fresh = SymbolicKeys::fresh(2, InputClass::General);
            for vars in assignments(4) {
                let lhs = &u * mask_matrix(&fresh, &vars) * u.adjoint();
                assert!(equal_up_to_global_phase(&lhs, &mask_matrix(&keys, &vars), 1e-12));
            }
        }
    }

    #[test]
    fn t_poly_after_clifford_prefix() {
        let mut keys = SymbolicKeys::fresh(2, InputClass::General);
        update_clifford(&mut keys, CliffordUpdate::H(0)).unwrap();
        update_clifford(&mut keys, CliffordUpdate::Cnot(0, 1)).unwrap();
        let pre = keys.clone();
        let y = update_t(&mut keys, 1).unwrap();
        let prefix = update_matrix(CliffordUpdate::Cnot(0, 1), 2) * update_matrix(CliffordUpdate::H(0), 2);
        let fresh = SymbolicKeys::fresh(2, InputClass::General);
        let t = full_gate(&gates::t_gate(), &[1], 2);
        let pdag = full_gate(&gates::phase_dag(), &[1], 2);
        for vars in assignments(4) {
            let mask = &prefix * mask_matrix(&fresh, &vars) * prefix.adjoint();
            // X content of qubit 1 equals the returned poly
            let expect_x = mask_matrix(&pre, &vars);
            assert!(equal_up_to_global_phase(&mask, &expect_x, 1e-12));
            let yv = y.eval(&vars).unwrap();
            assert_eq!(yv, pre.eval(&vars).unwrap()[1].0);
            let corr = if yv { pdag.clone() } else { gates::identity(2) };
            let lhs = corr * &t * &mask * t.adjoint();
            assert!(equal_up_to_global_phase(&lhs, &mask_matrix(&keys, &vars), 1e-12));
        }
    }

    #[test]
    fn t_without_x_mask_needs_nothing() {
        let mut k = SymbolicKeys::fresh(1, InputClass::General);
        k.qubits_mut_for_test(0).xpoly = Gf2Affine::zero(2);
        assert!(update_t(&mut k, 0).unwrap().is_constant());
    }

    /// Runs the physical gadget on a masked state and checks the symbolic rule.
    fn check_slot(mask: (bool, bool), theta: Angle, axis: Axis, flip: bool, m: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = StateVector::random(1, &mut rng);
        let pad = PauliOp::from_masks(&[mask.0], &[mask.1]).matrix();
        let masked = psi.clone().applied(&pad, &[0]).unwrap();
        let register = register_state(if flip { theta.plus_half_pi() } else { theta });
        let (_, post) = postselect_gadget(&masked, 0, &register, axis, m).unwrap();

        let mut keys = SymbolicKeys::fresh(1, InputClass::General);
        incorporate_slot_outcome(&mut keys, 0, axis, theta, flip, m).unwrap();
        let vars: Bits = [mask.0, mask.1].into_iter().collect();
        let expected = psi
            .applied(&gates::eq1(theta, axis), &[0])
            .unwrap()
            .applied(&mask_matrix(&keys, &vars), &[0])
            .unwrap();
        let f = fidelity(&post, &expected).unwrap();
        assert!(f > 1.0 - 1e-12, "{mask:?} {theta:?} {axis:?} flip={flip} m={m}: {f}");
    }

    #[test]
    fn slot_rule_matches_gadget() {
        for x in [false, true] {
            for z in [false, true] {
                for theta in Angle::ALL {
                    for axis in Axis::ALL {
                        for flip in [false, true] {
                            for m in [false, true] {
                                check_slot((x, z), theta, axis, flip, m);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn slot_examples() {
        let m = 2;
        let x1 = Gf2Affine::variable(m, 0);
        let x2 = Gf2Affine::variable(m, 1);
        let mut k = SymbolicKeys::fresh(1, InputClass::General);
        *k.qubits_mut_for_test(0) = QubitKey { xpoly: Gf2Affine::zero(m), zpoly: Gf2Affine::zero(m) };
        incorporate_slot_outcome(&mut k, 0, Axis::Z, Angle::QUARTER_PI, false, false).unwrap();
        assert_eq!(k.qubit(0).zpoly, Gf2Affine::zero(m));

        *k.qubits_mut_for_test(0) = QubitKey { xpoly: x1.clone(), zpoly: Gf2Affine::zero(m) };
        incorporate_slot_outcome(&mut k, 0, Axis::Z, Angle::QUARTER_PI, false, false).unwrap();
        assert_eq!(k.qubit(0).zpoly, x1);

        *k.qubits_mut_for_test(0) = QubitKey { xpoly: Gf2Affine::zero(m), zpoly: x2.clone() };
        incorporate_slot_outcome(&mut k, 0, Axis::X, Angle::QUARTER_PI, false, true).unwrap();
        let mut want = x2.clone();
        want.flip_constant(true);
        assert_eq!(k.qubit(0).xpoly, want);
    }

    #[test]
    fn tracker_defers_until_report() {
        let mut t = KeyTracker::new(SymbolicKeys::fresh(2, InputClass::General));
        t.clifford(CliffordUpdate::G(0, 1)).unwrap();
        t.record_slot(0, 0, Axis::Z, Angle::HALF_PI, false).unwrap();
        t.clifford(CliffordUpdate::G(0, 1)).unwrap();
        assert!(matches!(t.final_polys(), Err(crate::Error::PendingOutcomes(1))));
        assert!(matches!(t.update_t(0), Err(crate::Error::PendingOutcomes(1))));
        assert!(t.resolve(&[]).is_err());
        assert!(t.resolve(&[(0, true), (7, false)]).is_err());
        t.resolve(&[(0, true)]).unwrap();
        // two G's cancel up to phase; the π/2 slot adds nothing
        assert_eq!(t.final_polys().unwrap(), final_polys(&SymbolicKeys::fresh(2, InputClass::General)));
    }

    #[test]
    fn single_h_swaps() {
        let mut k = SymbolicKeys::fresh(1, InputClass::General);
        update_clifford(&mut k, CliffordUpdate::H(0)).unwrap();
        let f = final_polys(&k);
        assert_eq!(f[0], (Gf2Affine::variable(2, 1), Gf2Affine::variable(2, 0)));
    }

    #[test]
    fn out_of_range() {
        let mut k = SymbolicKeys::fresh(1, InputClass::General);
        assert!(update_clifford(&mut k, CliffordUpdate::H(3)).is_err());
        assert!(update_clifford(&mut k, CliffordUpdate::Cz(0, 0)).is_err());
    }

    impl SymbolicKeys {
        fn qubits_mut_for_test(&mut self, q: usize) -> &mut QubitKey {
            &mut self.qubits_mut()[q]
        }
    }
}
