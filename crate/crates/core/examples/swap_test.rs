//! SWAP-test statistics and the entanglement it leaves behind.

use std::f64::consts::PI;

use qpke::quantum_core::{
    partial_trace, prepare_state, swap_test, AngleIndex, DensityMatrix, SwapOutcome,
};
use qpke::rng::seeded;

fn main() -> qpke::Result<()> {
    let mut rng = seeded(3);
    let trials = 50_000;
    let a = prepare_state(AngleIndex::zero(3)?);
    for (label, s) in [("1", 0u64), ("cos(pi/8)", 1), ("cos(pi/4)", 2), ("0", 4)] {
        let b = prepare_state(AngleIndex::new(s, 3)?);
        let ov = a.inner(&b)?.norm();
        let mut passes = 0;
        let mut purity = None;
        for _ in 0..trials {
            let r = swap_test(&a, &b, &mut rng)?;
            if r.outcome == SwapOutcome::Pass {
                passes += 1;
                purity.get_or_insert(partial_trace(&DensityMatrix::from_pure(&r.post_joint), 0, 2)?.purity());
            }
        }
        let p = passes as f64 / trials as f64;
        println!(
            "overlap {label:>9}: pass {p:.4} (formula {:.4}), reduced purity after pass {:.4}",
            (1.0 + ov * ov) / 2.0,
            purity.unwrap_or(f64::NAN)
        );
    }
    println!("cos(pi/8) = {:.4}", (PI / 8.0).cos());
    Ok(())
}
