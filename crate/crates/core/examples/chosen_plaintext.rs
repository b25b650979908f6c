//! Exact check that every message yields the same cipher ensemble.

use qpke::attacks::CpaEnumerator;

fn main() -> qpke::Result<()> {
    for n in [1, 4, 8, 12] {
        for qubits in 1..=4 {
            let worst = CpaEnumerator::new(n, qubits)?.max_over_all_messages()?;
            println!("n = {n:>2}, N = {qubits}: max trace distance {worst:.2e}");
        }
    }
    Ok(())
}
