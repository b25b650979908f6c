//! Chosen-ciphertext session against a capped decryption device.

use num_complex::Complex64;
use qpke::attacks::{chosen_ciphertext_session, Submission};
use qpke::protocol::{encrypt, DecryptionOracle, KeyRegistry, PrivateKey};
use qpke::quantum_core::PureState;
use qpke::rng::seeded;

fn main() -> qpke::Result<()> {
    let mut rng = seeded(8);
    let key = PrivateKey::new(10, vec![17, 512, 1000], None)?;
    let mut registry = KeyRegistry::new();
    let id = registry.enroll(key.clone(), 1)?;
    let cipher = encrypt(registry.issue_copy(&id)?, &[true, true, false], 1, &mut rng)?;

    // three data qubits, the first entangled with one ancilla qubit Eve keeps
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[0b0000] = Complex64::new(h, 0.0);
    amps[0b1001] = Complex64::new(h, 0.0);

    let program = vec![
        Submission::AllZero,
        Submission::Cipher(cipher),
        Submission::Entangled { state: PureState::from_amplitudes(amps)?, data_qubits: 3 },
        Submission::AllZero,
    ];
    let mut device = DecryptionOracle::new(key, 3);
    let session = chosen_ciphertext_session(&mut device, program, &mut rng)?;
    for e in &session.transcript.entries {
        println!("{}… -> {:?}", &e.descriptor_hash[..12], e.outcome);
    }
    println!(
        "uses {}, rejected {}, outcome bits {}, Holevo ceiling {} bits",
        session.accounting.uses,
        session.rejected,
        session.accounting.outcome_bits_received,
        session.accounting.holevo_ceiling_bits
    );
    Ok(())
}
