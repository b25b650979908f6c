//! The trapdoor one-way function `s -> |psi_s(theta_n)>`: easy to evaluate,
//! exactly invertible with the key, nearly opaque without it.

use qpke::quantum_core::{measure_z, overlap, prepare_state, AngleIndex};
use qpke::rng::seeded;

fn main() -> qpke::Result<()> {
    let n = 3;
    println!("theta_{n} = pi/{}", 1u64 << (n - 1));
    for s in 0..(1u64 << n) {
        let idx = AngleIndex::new(s, n)?;
        let psi = prepare_state(idx);
        let a = psi.amplitudes();
        println!("s = {s}: angle {:.4} rad, amplitudes ({:+.4}, {:+.4})", idx.radians(), a[0].re, a[1].re);
    }

    // Adding a half turn is the encryption of bit 1: c = s + 2^(n-1) mod 2^n.
    let s = AngleIndex::new(5, n)?;
    let c = s.flipped();
    println!("s = 5, m = 1 -> c = {}; overlap <psi_s|psi_c> = {:.1}", c.s(), overlap(s, c)?);

    // With the key, undoing s*theta_n leaves a Z eigenstate: exact recovery.
    let recovered = c.sub(s)?;
    println!("c - s = {} (the half turn, i.e. m = 1)", recovered.s());

    // Without it, one Z measurement at n = 40 says almost nothing about s.
    let mut rng = seeded(1);
    let big = AngleIndex::new(123_456_789_012, 40)?;
    let m = measure_z(&prepare_state(big), 0, &mut rng)?;
    println!("n = 40, one Z measurement of |psi_s>: outcome {}", m.outcome);
    Ok(())
}
