//! Parity encoding of one bit over `alpha` qubits.

use std::collections::BTreeMap;

use qpke::protocol::encode_redundant;
use qpke::rng::seeded;

fn main() -> qpke::Result<()> {
    let mut rng = seeded(7);
    for alpha in 1..=3 {
        for bit in [false, true] {
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for _ in 0..40_000 {
                let mask = encode_redundant(bit, alpha, &mut rng)?;
                let key: String = mask.iter().map(|&b| if b { '1' } else { '0' }).collect();
                *counts.entry(key).or_default() += 1;
            }
            let freqs: Vec<String> = counts
                .iter()
                .map(|(m, c)| format!("{m}:{:.3}", *c as f64 / 40_000.0))
                .collect();
            println!("alpha = {alpha}, bit = {}: {}", u8::from(bit), freqs.join(" "));
        }
    }
    Ok(())
}
