//! Key entropy, Holevo ceiling and secrecy margin across parameters.

use qpke::security_analysis::{secrecy_condition, KeyParams, DEFAULT_MARGIN_THRESHOLD};

fn main() -> qpke::Result<()> {
    let cases = [
        KeyParams::default(),
        KeyParams::new(48, 48, 256, 16)?,
        KeyParams::new(62, 62, 256, 1)?,
        KeyParams::new(32, 62, 1024, 0)?,
    ];
    for p in cases {
        let r = secrecy_condition(&p, DEFAULT_MARGIN_THRESHOLD)?;
        println!(
            "n in [{}, {}], N = {}, k = {}: H(d) = {:.1}, H(d') = {:.1}, cap = {}, margin = {:.3}, satisfied = {}",
            p.n_low, p.n_high, p.qubits, p.copies, r.h_d, r.h_d_prime, r.holevo_cap, r.margin, r.satisfied
        );
    }
    Ok(())
}
