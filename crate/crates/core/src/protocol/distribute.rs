use num_complex::Complex64;
use rand::Rng;

use crate::compiler::Schedule;
use crate::error::Result;
use crate::gadget::ProgramBasis;
use crate::qcore::gates::Angle;
use crate::qcore::{Basis, StateVector};

/// `(|00⟩ + |11⟩)/√2`, Alice's half first.
pub fn epr_pair() -> StateVector {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    StateVector::from_amplitudes(vec![h, z, z, h]).expect("normalized")
}

/// What Bob learned from measuring his half of one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BobRecord {
    pub basis: Basis,
    pub outcome: bool,
    /// Angle of the program state Alice actually holds.
    pub realized: Angle,
    /// `realized` is the orthogonal partner of the scheduled angle.
    pub flip: bool,
}

/// Program state realized on Alice's half once Bob measures his half.
#[derive(Debug, Clone)]
pub struct Distribution {
    pub alice_halves: Vec<StateVector>,
    pub bob_records: Vec<BobRecord>,
}

/// Angle Alice's half carries after Bob sees `outcome` in `basis`. Her half
/// is the complex conjugate of Bob's post-measurement state, so `y+` on
/// Bob's side leaves `y−` = φ(3π/4) on hers.
pub fn realized_angle(basis: Basis, outcome: bool) -> Angle {
    match (basis, outcome) {
        (Basis::Y, false) => Angle::THREE_QUARTER_PI,
        (Basis::Y, true) => Angle::QUARTER_PI,
        (_, false) => Angle::ZERO,
        (_, true) => Angle::HALF_PI,
    }
}

/// Bob's measurement of one pair for a slot with scheduled angle `theta`.
pub fn measure_pair<R: Rng + ?Sized>(theta: Angle, rng: &mut R) -> Result<(StateVector, BobRecord)> {
    let basis = ProgramBasis::of(theta).measurement_basis();
    let (outcome, alice) = epr_pair().measure(1, basis, rng)?;
    let realized = realized_angle(basis, outcome);
    Ok((
        alice,
        BobRecord {
            basis,
            outcome,
            realized,
            flip: realized != theta,
        },
    ))
}

/// Simulates one EPR pair per slot and Bob's Z- or Y-basis measurement.
pub fn distribute_program_states<R: Rng + ?Sized>(schedule: &Schedule, rng: &mut R) -> Result<Distribution> {
    let mut alice_halves = Vec::with_capacity(schedule.slot_count());
    let mut bob_records = Vec::with_capacity(schedule.slot_count());
    for &theta in schedule.assignments() {
        let (a, b) = measure_pair(theta, rng)?;
        alice_halves.push(a);
        bob_records.push(b);
    }
    Ok(Distribution {
        alice_halves,
        bob_records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::register_state;
    use crate::qcore::fidelity;
    use crate::qcore::gates::{max_abs_diff, Matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn halves_are_the_announced_program_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for theta in Angle::ALL {
            let mut ones = 0;
            for _ in 0..2000 {
                let (alice, rec) = measure_pair(theta, &mut rng).unwrap();
                assert!(fidelity(&alice, &register_state(rec.realized)).unwrap() > 1.0 - 1e-12);
                assert_eq!(rec.realized.is_odd(), theta.is_odd());
                ones += usize::from(rec.outcome);
            }
            assert!((900..1100).contains(&ones), "{theta:?}: {ones}");
        }
    }

    #[test]
    fn alice_half_is_maximally_mixed_before_measurement() {
        let rho = epr_pair().reduced_density(0).unwrap();
        let half = Matrix::identity(2, 2) * Complex64::new(0.5, 0.0);
        assert!(max_abs_diff(&rho, &half) < 1e-15);
    }
}
