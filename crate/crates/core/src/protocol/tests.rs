use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::compiler::{SourceCircuit, SourceGate};
use crate::keytrack::InputClass;
use crate::qcore::{fidelity, StateVector};
use crate::subproto::SubprotoChoice;

const ALL_SUBPROTOS: [SubprotoChoice; 3] = [SubprotoChoice::Class1 { k: 1 }, SubprotoChoice::Ott, SubprotoChoice::Ahe];

fn cfg(mode: Mode, class: InputClass, sub: SubprotoChoice, seed: u64) -> RunConfig {
    RunConfig::new(mode, class, sub, seed)
}

#[test]
fn empty_circuit_returns_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let input = StateVector::random(2, &mut rng);
    let c = SourceCircuit::new(2, vec![]).unwrap();
    for mode in [Mode::Qhe, Mode::Bqc] {
        let r = run_scheme1(&c, &input, &cfg(mode, InputClass::General, SubprotoChoice::Class1 { k: 0 }, 3)).unwrap();
        assert!(fidelity(&r.output_state, &input).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn single_t_on_plus() {
    let plus = StateVector::product(&[StateVector::qubit(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap()]);
    let plus = plus.unwrap();
    let c = SourceCircuit::new(1, vec![SourceGate::T(0)]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let want = StateVector::from_amplitudes(vec![
        Complex64::new(h, 0.0),
        Complex64::from_polar(h, std::f64::consts::FRAC_PI_4),
    ])
    .unwrap();
    for seed in 0..20 {
        let r = run_scheme1(&c, &plus, &cfg(Mode::Qhe, InputClass::General, SubprotoChoice::Ott, seed)).unwrap();
        assert!(fidelity(&r.output_state, &want).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn random_circuits_all_subprotocols_both_modes() {
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = SourceCircuit::random(3, 15, 3, &mut rng);
        let input = StateVector::random(3, &mut rng);
        for sub in ALL_SUBPROTOS {
            for mode in [Mode::Qhe, Mode::Bqc] {
                let r = run_scheme1(&c, &input, &cfg(mode, InputClass::General, sub, seed)).unwrap();
                assert!(r.fidelity_vs_direct > 1.0 - 1e-9, "seed {seed} {sub:?} {mode:?}: {}", r.fidelity_vs_direct);
            }
        }
    }
}

#[test]
fn real_and_classical_classes() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let c = SourceCircuit::random(2, 12, 2, &mut rng);
        let real = StateVector::random_real_product(2, &mut rng);
        let r = run_scheme1(&c, &real, &cfg(Mode::Qhe, InputClass::RealProduct, SubprotoChoice::Ahe, seed)).unwrap();
        assert!(r.fidelity_vs_direct > 1.0 - 1e-9);
        assert_eq!(r.privacy.n_vars, 2);
        let classical = StateVector::basis(2, (seed % 4) as usize);
        let r = run_scheme1(&c, &classical, &cfg(Mode::Bqc, InputClass::Classical, SubprotoChoice::Class1 { k: 2 }, seed))
            .unwrap();
        assert!(r.fidelity_vs_direct > 1.0 - 1e-9);
    }
}

#[test]
fn input_class_is_checked() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = SourceCircuit::new(2, vec![]).unwrap();
    let general = StateVector::random(2, &mut rng);
    for class in [InputClass::Classical, InputClass::RealProduct] {
        let e = run_scheme1(&c, &general, &cfg(Mode::Qhe, class, SubprotoChoice::Ott, 1)).unwrap_err();
        assert!(matches!(e.error, crate::Error::InputClassMismatch(_)));
    }
    let wrong_width = StateVector::zero(3);
    assert!(run_scheme1(&c, &wrong_width, &cfg(Mode::Qhe, InputClass::General, SubprotoChoice::Ott, 1)).is_err());
}

#[test]
fn transcript_replays_byte_identically() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = SourceCircuit::random(3, 10, 2, &mut rng);
    let input = StateVector::random(3, &mut rng);
    for sub in ALL_SUBPROTOS {
        let a = run_scheme1(&c, &input, &cfg(Mode::Qhe, InputClass::General, sub, 77)).unwrap();
        let b = run_scheme1(&c, &input, &cfg(Mode::Qhe, InputClass::General, sub, 77)).unwrap();
        assert_eq!(a.transcript.to_text(), b.transcript.to_text());
        let other = run_scheme1(&c, &input, &cfg(Mode::Qhe, InputClass::General, sub, 78)).unwrap();
        assert_ne!(a.transcript.to_text(), other.transcript.to_text());
    }
}

#[test]
fn modes_keep_state_where_they_should() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = SourceCircuit::random(2, 8, 1, &mut rng);
    let input = StateVector::random(2, &mut rng);
    let q = run_scheme1(&c, &input, &cfg(Mode::Qhe, InputClass::General, SubprotoChoice::Ott, 1)).unwrap();
    assert!(!q.bob_held_state && q.alice_holds_output);
    assert_eq!(q.transcript.of_kind("TeleportOutcomes").count(), 0);
    let b = run_bqc_handover(&c, &input, &cfg(Mode::Qhe, InputClass::General, SubprotoChoice::Ott, 1)).unwrap();
    assert!(b.bob_held_state && !b.alice_holds_output);
    assert_eq!(b.privacy.handover_bits_revealed, 4);
}

#[test]
fn bqc_h_on_zero_gives_plus() {
    let c = SourceCircuit::new(1, vec![SourceGate::H(0)]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::from_amplitudes(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap();
    let r = run_bqc_handover(&c, &StateVector::zero(1), &cfg(Mode::Bqc, InputClass::General, SubprotoChoice::Ahe, 4))
        .unwrap();
    assert!(fidelity(&r.output_state, &plus).unwrap() > 1.0 - 1e-9);
}

#[test]
fn class1_structural_counts() {
    // two T gates on one qubit, m = 4
    let c = SourceCircuit::new(2, vec![SourceGate::H(0), SourceGate::T(0), SourceGate::H(1), SourceGate::T(1)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let input = StateVector::random(2, &mut rng);
    let r = run_scheme1(&c, &input, &cfg(Mode::Qhe, InputClass::General, SubprotoChoice::Class1 { k: 0 }, 2)).unwrap();
    assert_eq!(r.privacy.data_bits_revealed, 0);
    for e in r.transcript.of_kind("ReducedPoly") {
        assert_eq!(e.message.payload().len(), 5);
    }
    assert_eq!(r.privacy.polys_evaluated, 2 + 4);
    let r = run_scheme1(&c, &input, &cfg(Mode::Qhe, InputClass::General, SubprotoChoice::Class1 { k: 4 }, 2)).unwrap();
    assert_eq!(r.privacy.data_bits_revealed, 4);
    assert_eq!(r.privacy.hidden_coeff_bits_per_poly(), Some(4));
    for e in r.transcript.of_kind("ReducedPoly") {
        assert_eq!(e.message.payload().len(), 1);
    }
}

#[test]
fn ott_shortfall_aborts_with_transcript() {
    let c = SourceCircuit::new(1, vec![SourceGate::T(0)]).unwrap();
    let mut config = cfg(Mode::Qhe, InputClass::General, SubprotoChoice::Ott, 3);
    config.ott_tables = Some(1);
    let e = run_scheme1(&c, &StateVector::zero(1), &config).unwrap_err();
    assert!(matches!(e.error, crate::Error::TableShortfall { needed: 2, available: 1 }));
    assert!(e.transcript.of_kind("ScheduleInfo").count() == 1);
}

#[test]
fn deferred_measurement_adversary_copies_classical_bits() {
    // Z-axis slots on untouched qubits, then some mixing gates
    let text = "EQ1 0 3 0\nEQ1 2 3 1\nCZ 0 1\nT 0\nH 1\nCNOT 1 0\n";
    let c = SourceCircuit::parse(text, Some(2)).unwrap();
    for seed in 0..20u64 {
        for idx in 0..4 {
            let input = StateVector::basis(2, idx);
            // k = m makes the pad visible in the transcript for checking
            let sub = SubprotoChoice::Class1 { k: 2 };
            let mut config = cfg(Mode::Qhe, InputClass::Classical, sub, seed);
            config.adversary = Some(Adversary::DeferClassicalZ);
            let r = run_scheme1(&c, &input, &config).unwrap();
            assert!(r.fidelity_vs_direct > 1.0 - 1e-9);
            assert!(r.adversary_learned.len() >= 2);
            let honest = run_scheme1(&c, &input, &cfg(Mode::Qhe, InputClass::Classical, sub, seed)).unwrap();
            assert!(honest.adversary_learned.is_empty());
            let pad = match &r.transcript.of_kind("RevealedVars").next().unwrap().message {
                Message::RevealedVars(v) => v.clone(),
                _ => unreachable!(),
            };
            // diagonal gates keep the basis value, so every learned bit is the
            // input bit under the Y^y pad
            assert!(r.adversary_learned.iter().any(|l| l.1 == 1));
            for &(_, q, d) in &r.adversary_learned {
                let input_bit = idx >> (1 - q) & 1 == 1;
                assert_eq!(d, input_bit ^ pad[q].1);
            }
        }
    }
}
