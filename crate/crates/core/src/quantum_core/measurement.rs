use num_complex::Complex64;
use rand::Rng;

use super::state::{apply_rotation, Matrix2, PureState};
use crate::error::{Error, Result};

/// Result of a two-outcome measurement on one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub outcome: u8,
    /// Collapsed state of the whole register, renormalized.
    pub post_state: PureState,
    /// Born probability of the realized outcome.
    pub probability: f64,
}

/// Picks outcome 0 with probability `p0`.
///
/// Probability-0 branches are never selected; a draw equal to the boundary
/// goes to the lower label.
pub(crate) fn sample_binary<R: Rng + ?Sized>(p0: f64, rng: &mut R) -> u8 {
    if p0 <= 0.0 {
        return 1;
    }
    if p0 >= 1.0 {
        return 0;
    }
    let u: f64 = rng.random();
    if u < p0 {
        0
    } else {
        1
    }
}

fn check_qubit(state: &PureState, qubit: usize) -> Result<usize> {
    let k = state.num_qubits();
    if qubit >= k {
        return Err(Error::QubitOutOfRange { qubit, count: k });
    }
    Ok(1usize << (k - 1 - qubit))
}

/// Probability that `qubit` reads 0 in the Z basis.
pub fn prob_zero(state: &PureState, qubit: usize) -> Result<f64> {
    let mask = check_qubit(state, qubit)?;
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>()
        .clamp(0.0, 1.0))
}

/// Projective measurement of one qubit in `{|0_z>, |1_z>}`.
pub fn measure_z<R: Rng + ?Sized>(
    state: &PureState,
    qubit: usize,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let mask = check_qubit(state, qubit)?;
    let p0 = prob_zero(state, qubit)?;
    let outcome = sample_binary(p0, rng);
    let keep = if outcome == 0 { 0 } else { mask };
    let zero = Complex64::new(0.0, 0.0);
    let amps = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if i & mask == keep { *a } else { zero })
        .collect();
    let post_state = PureState::from_raw(amps)
        .renormalized()
        .expect("realized branch has non-zero weight");
    let probability = if outcome == 0 { p0 } else { 1.0 - p0 };
    Ok(MeasurementOutcome {
        outcome,
        post_state,
        probability,
    })
}

/// Measures one qubit in the basis `{R(phi)|0_z>, R(phi)|1_z>}`.
///
/// Same statistics as applying `R(phi)^-1` and then [`measure_z`]; the
/// returned post-state is rotated back into the original frame.
pub fn measure_in_rotated_basis<R: Rng + ?Sized>(
    state: &PureState,
    qubit: usize,
    phi: f64,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let unrotated = apply_rotation(state, qubit, -phi)?;
    let mut out = measure_z(&unrotated, qubit, rng)?;
    out.post_state = apply_rotation(&out.post_state, qubit, phi)?;
    Ok(out)
}

/// Two-outcome measurement on one qubit given the Kraus operators of each
/// outcome (e.g. square roots of POVM elements).
pub(crate) fn measure_kraus<R: Rng + ?Sized>(
    state: &PureState,
    qubit: usize,
    kraus: &[Matrix2; 2],
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let branch0 = state.apply_single(qubit, &kraus[0])?;
    let p0 = branch0.norm().powi(2).clamp(0.0, 1.0);
    let outcome = sample_binary(p0, rng);
    let (branch, probability) = if outcome == 0 {
        (branch0, p0)
    } else {
        (state.apply_single(qubit, &kraus[1])?, 1.0 - p0)
    };
    let post_state = branch
        .renormalized()
        .expect("realized branch has non-zero weight");
    Ok(MeasurementOutcome {
        outcome,
        post_state,
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_core::{prepare_state, AngleIndex};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn z_measurement_of_basis_states_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let one = PureState::basis(1, 1).unwrap();
        for _ in 0..100 {
            let m = measure_z(&one, 0, &mut rng).unwrap();
            assert_eq!(m.outcome, 1);
            assert_eq!(m.probability, 1.0);
        }
        for n in 1..=62 {
            let st = prepare_state(AngleIndex::half_turn(n).unwrap());
            assert_eq!(measure_z(&st, 0, &mut rng).unwrap().outcome, 1);
        }
    }

    #[test]
    fn plus_state_is_fair() {
        let plus = prepare_state(AngleIndex::new(1, 2).unwrap());
        assert!((prob_zero(&plus, 0).unwrap() - 0.5).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 100_000;
        let zeros = (0..trials)
            .filter(|_| measure_z(&plus, 0, &mut rng).unwrap().outcome == 0)
            .count();
        let p = zeros as f64 / trials as f64;
        let se = (0.25f64 / trials as f64).sqrt();
        assert!((p - 0.5).abs() < 3.0 * se + 1e-3);
    }

    #[test]
    fn post_state_collapses_the_measured_qubit_only() {
        let plus = prepare_state(AngleIndex::new(1, 2).unwrap());
        let joint = plus.tensor(&plus);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = measure_z(&joint, 0, &mut rng).unwrap();
        assert!((m.post_state.norm() - 1.0).abs() < 1e-12);
        let first = PureState::basis(1, m.outcome as usize).unwrap();
        let want = first.tensor(&plus);
        assert!((m.post_state.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotated_basis_alignment() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [3u32, 8, 20, 62] {
            for s in [0u64, 1, 3, 1 << (n - 1), (1 << n) - 1] {
                let idx = AngleIndex::new(s, n).unwrap();
                let phi = idx.radians();
                let aligned = measure_in_rotated_basis(&prepare_state(idx), 0, phi, &mut rng).unwrap();
                assert_eq!(aligned.outcome, 0);
                assert!(aligned.probability > 1.0 - 1e-12);
                let orth =
                    measure_in_rotated_basis(&prepare_state(idx.flipped()), 0, phi, &mut rng).unwrap();
                assert_eq!(orth.outcome, 1);
            }
        }
    }

    #[test]
    fn rotated_basis_with_zero_angle_is_z() {
        let st = prepare_state(AngleIndex::new(3, 4).unwrap());
        let a = measure_in_rotated_basis(&st, 0, 0.0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = measure_z(&st, 0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert!((a.probability - b.probability).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(measure_z(&PureState::zeros(1), 1, &mut rng).is_err());
    }
}
