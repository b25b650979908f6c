//! What measuring public-key copies reveals about the key, and at what cost.

use qpke::attacks::key_recovery_baseline;
use qpke::rng::seeded;
use qpke::security_analysis::{MeasurementStrategy, Povm};

fn main() -> qpke::Result<()> {
    let strategies = [
        ("Z basis", MeasurementStrategy::FixedBasis { phi: 0.0 }),
        ("random of 4 bases", MeasurementStrategy::RandomBasis { angles: 4 }),
        ("unsharp Z, eta 0.6", MeasurementStrategy::Povm(Povm::unsharp_z(0.6)?)),
    ];
    let mut rng = seeded(12);
    for n in [1, 4, 8] {
        for (name, s) in &strategies {
            let r = key_recovery_baseline(n, 1, 16, s, 50_000, &mut rng)?;
            println!(
                "n = {n}, {name:<19} I = {:.4} ± {:.4} bits of {n}, post-measurement fidelity {:.4}",
                r.estimate.bits, r.estimate.stderr_bits, r.mean_post_fidelity
            );
        }
    }
    Ok(())
}
