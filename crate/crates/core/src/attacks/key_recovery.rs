use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::security_analysis::{simulate, MeasurementStrategy, MutualInformationEstimate};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyRecoveryReport {
    pub estimate: MutualInformationEstimate,
    /// `H(s) = n` bits per qubit.
    pub key_entropy_bits: f64,
    /// `H(s) - I`.
    pub residual_entropy_bits: f64,
    /// Mean fidelity of each measured copy's post-measurement state to the
    /// original; 1 means no disturbance.
    pub mean_post_fidelity: f64,
}

/// Per-qubit information Eve extracts about `s` by measuring `copies`
/// public-key copies, and how much the measurement disturbs them.
/// `copies` may not exceed the circulation cap `k`.
pub fn key_recovery_baseline<R: Rng + ?Sized>(
    n: u32,
    copies: usize,
    copy_cap: usize,
    strategy: &MeasurementStrategy,
    trials: usize,
    rng: &mut R,
) -> Result<KeyRecoveryReport> {
    if copies > copy_cap {
        return Err(Error::CapExhausted {
            key_id: "baseline".into(),
            cap: copy_cap as u32,
        });
    }
    let run = simulate(strategy, n, copies, trials, rng)?;
    Ok(KeyRecoveryReport {
        key_entropy_bits: n as f64,
        residual_entropy_bits: n as f64 - run.estimate.bits,
        mean_post_fidelity: run.mean_fidelity,
        estimate: run.estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    const Z: MeasurementStrategy = MeasurementStrategy::FixedBasis { phi: 0.0 };

    #[test]
    fn one_bit_key_is_read_without_disturbance() {
        let r = key_recovery_baseline(1, 1, 1, &Z, 10_000, &mut seeded(1)).unwrap();
        assert!((r.estimate.bits - 1.0).abs() < 1e-3);
        assert!((r.mean_post_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn n8_measurement_learns_little_and_disturbs() {
        let r = key_recovery_baseline(8, 1, 16, &Z, 20_000, &mut seeded(2)).unwrap();
        assert!(r.estimate.bits < 1.0);
        assert!(r.residual_entropy_bits > 7.0);
        assert!(r.mean_post_fidelity < 1.0);
    }

    #[test]
    fn zero_copies_and_cap() {
        let r = key_recovery_baseline(8, 0, 16, &Z, 10, &mut seeded(3)).unwrap();
        assert_eq!(r.estimate.bits, 0.0);
        assert_eq!(r.mean_post_fidelity, 1.0);
        assert!(key_recovery_baseline(8, 5, 4, &Z, 10, &mut seeded(3)).is_err());
    }
}
