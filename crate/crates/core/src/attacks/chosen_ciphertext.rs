use rand::Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::protocol::{CipherState, DecryptionOracle, QuantumRegister};
use crate::quantum_core::PureState;

/// One state Eve hands to the decryption device.
#[derive(Debug)]
pub enum Submission {
    /// `|0_z>^{⊗N}`.
    AllZero,
    /// Independently prepared single qubits.
    Product(Vec<PureState>),
    /// First `data_qubits` qubits of `state`; the rest is Eve's ancilla.
    Entangled { state: PureState, data_qubits: usize },
    /// A genuine ciphertext, decoded by the device as a message.
    Cipher(CipherState),
}

impl Submission {
    /// What Eve knows about her submission, hashed for the transcript.
    fn descriptor_hash(&self, qubits: usize) -> String {
        let mut h = Sha256::new();
        let mut amps = |tag: &str, states: &[&PureState]| {
            h.update(tag.as_bytes());
            for s in states {
                for a in s.amplitudes() {
                    h.update(a.re.to_le_bytes());
                    h.update(a.im.to_le_bytes());
                }
            }
        };
        match self {
            Submission::AllZero => amps(&format!("all-zero:{qubits}"), &[]),
            Submission::Product(states) => {
                amps("product", &states.iter().collect::<Vec<_>>())
            }
            Submission::Entangled { state, data_qubits } => {
                amps(&format!("entangled:{data_qubits}"), &[state])
            }
            Submission::Cipher(c) => amps(
                &format!(
                    "cipher:{}:{}:{}",
                    c.key_id().map(|k| k.as_str()).unwrap_or("-"),
                    c.bits(),
                    c.alpha()
                ),
                &[],
            ),
        }
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub descriptor_hash: String,
    /// Raw outcome bits, or decoded message bits for a ciphertext.
    pub outcome: Vec<u8>,
}

/// Everything Eve learns from the device: outcome bits only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleTranscript {
    pub entries: Vec<TranscriptEntry>,
    pub uses_consumed: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcaAccounting {
    #[serde(rename = "N")]
    pub qubits: usize,
    pub uses: u32,
    /// Classical bits handed back: `N` per use.
    pub outcome_bits_received: u64,
    /// Holevo ceiling on the key information those uses can carry.
    pub holevo_ceiling_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcaSession {
    pub transcript: OracleTranscript,
    pub accounting: CcaAccounting,
    /// Submissions refused because the device had deactivated.
    pub rejected: usize,
    pub deactivated: bool,
}

/// Feeds `program` to the device in order. Once the device deactivates the
/// remaining submissions are refused and counted in `rejected`; other
/// errors (wrong register size) abort the session.
pub fn chosen_ciphertext_session<R: Rng + ?Sized>(
    oracle: &mut DecryptionOracle,
    program: Vec<Submission>,
    rng: &mut R,
) -> Result<CcaSession> {
    let qubits = oracle.qubits();
    let start_uses = oracle.uses();
    let mut entries = Vec::new();
    let mut rejected = 0;
    for sub in program {
        let descriptor_hash = sub.descriptor_hash(qubits);
        let result = match sub {
            Submission::AllZero => oracle.decrypt_raw(QuantumRegister::zeros(qubits)?, rng),
            Submission::Product(states) => {
                oracle.decrypt_raw(QuantumRegister::from_product_states(states)?, rng)
            }
            Submission::Entangled { state, data_qubits } => {
                oracle.decrypt_raw(QuantumRegister::with_ancilla(state, data_qubits)?, rng)
            }
            Submission::Cipher(c) => oracle
                .decrypt(c, rng)
                .map(|bits| bits.into_iter().map(u8::from).collect()),
        };
        match result {
            Ok(outcome) => entries.push(TranscriptEntry {
                descriptor_hash,
                outcome,
            }),
            Err(Error::OracleDeactivated(_)) => rejected += 1,
            Err(e) => return Err(e),
        }
    }
    let uses = oracle.uses() - start_uses;
    Ok(CcaSession {
        transcript: OracleTranscript {
            entries,
            uses_consumed: uses,
        },
        accounting: CcaAccounting {
            qubits,
            uses,
            outcome_bits_received: qubits as u64 * uses as u64,
            holevo_ceiling_bits: (qubits as u64 * uses as u64) as f64,
        },
        rejected,
        deactivated: !oracle.is_active(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{encrypt, KeyRegistry, PrivateKey};
    use crate::rng::seeded;
    use num_complex::Complex64;

    #[test]
    fn transcript_stops_at_cap() {
        let key = PrivateKey::new(4, vec![3, 8, 0], None).unwrap();
        let mut oracle = DecryptionOracle::new(key, 4);
        let program = (0..6).map(|_| Submission::AllZero).collect();
        let s = chosen_ciphertext_session(&mut oracle, program, &mut seeded(1)).unwrap();
        assert_eq!(s.transcript.entries.len(), 4);
        assert_eq!(s.transcript.uses_consumed, 4);
        assert_eq!(s.rejected, 2);
        assert!(s.deactivated);
        assert_eq!(s.accounting.outcome_bits_received, 12);
        assert_eq!(s.accounting.holevo_ceiling_bits, 12.0);
        // s = 8 at n = 4 is a half turn: un-rotating |0> gives |1>
        assert!(s.transcript.entries.iter().all(|e| e.outcome[1] == 1 && e.outcome[2] == 0));
    }

    #[test]
    fn valid_ciphertext_decrypts_and_costs_a_use() {
        let mut rng = seeded(2);
        let key = PrivateKey::new(12, vec![100, 2000, 7], None).unwrap();
        let mut reg = KeyRegistry::new();
        let id = reg.enroll(key.clone(), 2).unwrap();
        let c = encrypt(reg.issue_copy(&id).unwrap(), &[true, false, true], 1, &mut rng).unwrap();
        let mut oracle = DecryptionOracle::new(key, 2);
        let s = chosen_ciphertext_session(&mut oracle, vec![Submission::Cipher(c)], &mut rng)
            .unwrap();
        assert_eq!(s.transcript.entries[0].outcome, vec![1, 0, 1]);
        assert_eq!(oracle.remaining(), 1);
    }

    #[test]
    fn ancilla_entangled_submission() {
        // Bell pair between data qubit 0 and one ancilla, plus a |0> data qubit
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        // ordering: data0, data1, ancilla
        amps[0b000] = Complex64::new(h, 0.0);
        amps[0b101] = Complex64::new(h, 0.0);
        let state = PureState::from_amplitudes(amps).unwrap();
        let key = PrivateKey::new(2, vec![0, 0], None).unwrap();
        let mut oracle = DecryptionOracle::new(key, 1);
        let s = chosen_ciphertext_session(
            &mut oracle,
            vec![Submission::Entangled {
                state,
                data_qubits: 2,
            }],
            &mut seeded(3),
        )
        .unwrap();
        assert_eq!(s.transcript.entries[0].outcome.len(), 2);
        assert_eq!(s.transcript.entries[0].outcome[1], 0);
    }

    #[test]
    fn wrong_size_aborts() {
        let key = PrivateKey::new(2, vec![0, 0], None).unwrap();
        let mut oracle = DecryptionOracle::new(key, 1);
        let bad = vec![Submission::Product(vec![PureState::zeros(1)])];
        assert!(chosen_ciphertext_session(&mut oracle, bad, &mut seeded(4)).is_err());
        assert_eq!(oracle.uses(), 0);
    }

    #[test]
    fn hashes_distinguish_submissions() {
        let a = Submission::AllZero.descriptor_hash(3);
        let b = Submission::AllZero.descriptor_hash(4);
        let c = Submission::Product(vec![PureState::zeros(1); 3]).descriptor_hash(3);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }
}
