use num_complex::Complex64;
use rand::Rng;

use super::measurement::sample_binary;
use super::state::PureState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwapOutcome {
    /// Projected onto the symmetric subspace.
    Pass,
    /// Projected onto the antisymmetric subspace.
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapTestResult {
    pub outcome: SwapOutcome,
    /// Normalized two-qubit state after the projection.
    pub post_joint: PureState,
    pub probability: f64,
}

fn symmetric_part(a: &[Complex64]) -> Vec<Complex64> {
    let mid = (a[1] + a[2]) * 0.5;
    vec![a[0], mid, mid, a[3]]
}

fn antisymmetric_part(a: &[Complex64]) -> Vec<Complex64> {
    let half = (a[1] - a[2]) * 0.5;
    vec![Complex64::new(0.0, 0.0), half, -half, Complex64::new(0.0, 0.0)]
}

/// Probability that a SWAP test on the two-qubit state passes.
pub fn swap_pass_probability(joint: &PureState) -> Result<f64> {
    check_pair(joint)?;
    let sym = symmetric_part(joint.amplitudes());
    Ok(sym.iter().map(|z| z.norm_sqr()).sum::<f64>().clamp(0.0, 1.0))
}

fn check_pair(joint: &PureState) -> Result<()> {
    if joint.num_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "SWAP test needs a two-qubit state, got {} qubits",
            joint.num_qubits()
        )));
    }
    Ok(())
}

/// SWAP test on an arbitrary (possibly entangled) two-qubit state.
pub fn swap_test_pair<R: Rng + ?Sized>(joint: &PureState, rng: &mut R) -> Result<SwapTestResult> {
    let p_pass = swap_pass_probability(joint)?;
    let outcome = match sample_binary(p_pass, rng) {
        0 => SwapOutcome::Pass,
        _ => SwapOutcome::Fail,
    };
    let (amps, probability) = match outcome {
        SwapOutcome::Pass => (symmetric_part(joint.amplitudes()), p_pass),
        SwapOutcome::Fail => (antisymmetric_part(joint.amplitudes()), 1.0 - p_pass),
    };
    let post_joint = PureState::from_raw(amps)
        .renormalized()
        .expect("realized SWAP branch has non-zero weight");
    Ok(SwapTestResult {
        outcome,
        post_joint,
        probability,
    })
}

/// SWAP test between two single-qubit states.
///
/// Passes with probability `(1 + |<a|b>|^2) / 2`.
pub fn swap_test<R: Rng + ?Sized>(
    a: &PureState,
    b: &PureState,
    rng: &mut R,
) -> Result<SwapTestResult> {
    if a.num_qubits() != 1 || b.num_qubits() != 1 {
        return Err(Error::InvalidArgument("SWAP test takes two single qubits".into()));
    }
    swap_test_pair(&a.tensor(b), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_core::{partial_trace, prepare_state, AngleIndex, DensityMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_states_always_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = prepare_state(AngleIndex::new(5, 6).unwrap());
        for _ in 0..1000 {
            let r = swap_test(&a, &a, &mut rng).unwrap();
            assert_eq!(r.outcome, SwapOutcome::Pass);
        }
    }

    #[test]
    fn orthogonal_states_pass_half_the_time() {
        let a = prepare_state(AngleIndex::new(5, 6).unwrap());
        let b = prepare_state(AngleIndex::new(5, 6).unwrap().flipped());
        let p = swap_pass_probability(&a.tensor(&b)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn failed_test_leaves_singlet() {
        let a = prepare_state(AngleIndex::new(1, 3).unwrap());
        let b = prepare_state(AngleIndex::new(6, 3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = loop {
            let r = swap_test(&a, &b, &mut rng).unwrap();
            if r.outcome == SwapOutcome::Fail {
                break r;
            }
        };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = PureState::from_amplitudes(
            [0.0, h, -h, 0.0].iter().map(|x| Complex64::new(*x, 0.0)).collect(),
        )
        .unwrap();
        assert!((r.post_joint.fidelity(&singlet).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pass_on_orthogonal_pair_entangles() {
        let a = prepare_state(AngleIndex::new(3, 5).unwrap());
        let b = prepare_state(AngleIndex::new(3, 5).unwrap().flipped());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = loop {
            let r = swap_test(&a, &b, &mut rng).unwrap();
            if r.outcome == SwapOutcome::Pass {
                break r;
            }
        };
        let rho = DensityMatrix::from_pure(&r.post_joint);
        for keep in 0..2 {
            assert!(partial_trace(&rho, keep, 2).unwrap().purity() < 1.0 - 1e-9);
        }
    }

    #[test]
    fn rejects_wrong_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let two = PureState::zeros(2);
        assert!(swap_test(&two, &PureState::zeros(1), &mut rng).is_err());
        assert!(swap_test_pair(&PureState::zeros(3), &mut rng).is_err());
    }
}
