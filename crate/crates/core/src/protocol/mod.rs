//! The asymmetric cryptosystem: key generation, encryption, decryption.
//!
//! The private key `{n, s, perm}` is classical. The public key is a register
//! of `N` qubits with qubit `perm[i]` prepared in `R(s_i * theta_n)|0_z>`.
//! A sender encrypts bit `m` by applying `R(m * pi)`, which on the exact
//! representation is the index shift `s -> s + 2^(n-1) mod 2^n`. The owner
//! decrypts by undoing the key rotation and measuring in Z.

mod cipher;
mod keys;
mod oracle;
mod register;
mod registry;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use cipher::{encode_redundant, encrypt, encrypt_with_flags, CipherState};
pub use keys::{
    generate_private_key, Fingerprint, KeyGenParams, KeyId, OwnerCredential, Precision,
    PrivateKey, RECOMMENDED_MIN_PRECISION,
};
pub use oracle::{decrypt, DecryptionOracle};
pub use register::QuantumRegister;
pub use registry::{KeyRegistry, PublicKey, RegistryRecord};

use crate::error::{Error, Result};
use crate::quantum_core::AngleIndex;

/// Generates a key pair; the returned public key is copy 0.
pub fn keygen<R: Rng + ?Sized>(
    params: &KeyGenParams,
    rng: &mut R,
) -> Result<(PrivateKey, PublicKey)> {
    let key = generate_private_key(params, rng)?;
    let pk = PublicKey::new(key.key_id(), 0, key.prepare_public_register());
    Ok((key, pk))
}

/// Exact per-qubit descriptors of a register, for its owner only.
pub fn describe_register(
    register: &QuantumRegister,
    credential: &OwnerCredential,
) -> Result<Vec<AngleIndex>> {
    match register.owner() {
        Some(owner) if owner == credential.fingerprint() => {}
        _ => return Err(Error::AccessDenied),
    }
    register.descriptors().ok_or_else(|| {
        Error::InvalidArgument("register no longer holds exact rotation indices".into())
    })
}

pub const EXPORT_NOTE: &str = "simulation-internal — physically unrealizable";

#[derive(Debug, Serialize, Deserialize)]
struct PublicKeyExport {
    schema_version: u32,
    note: String,
    key_id: KeyId,
    copy_index: u32,
    n: u32,
    indices: Vec<String>,
}

/// Owner-only JSON dump of a public-key copy. A real public key is a quantum
/// state and cannot be written down; this exists for tests and tooling.
pub fn export_public_key(pk: &PublicKey, credential: &OwnerCredential) -> Result<String> {
    let desc = describe_register(pk.register(), credential)?;
    let n = desc.first().map(AngleIndex::n).unwrap_or(1);
    let out = PublicKeyExport {
        schema_version: 1,
        note: EXPORT_NOTE.to_owned(),
        key_id: pk.key_id().clone(),
        copy_index: pk.copy_index(),
        n,
        indices: desc.iter().map(|a| a.s().to_string()).collect(),
    };
    Ok(serde_json::to_string(&out)?)
}

/// Rebuilds an exported copy; requires the owner's credential.
pub fn import_public_key(text: &str, credential: &OwnerCredential) -> Result<PublicKey> {
    let exp: PublicKeyExport = serde_json::from_str(text)?;
    let indices = exp
        .indices
        .iter()
        .map(|v| {
            let s = v
                .parse::<u64>()
                .map_err(|e| Error::Serialization(format!("bad index {v:?}: {e}")))?;
            AngleIndex::new(s, exp.n)
        })
        .collect::<Result<Vec<_>>>()?;
    if exp.key_id.as_str() != &credential.fingerprint().to_hex()[..16] {
        return Err(Error::AccessDenied);
    }
    let register = QuantumRegister::prepared(indices, *credential.fingerprint());
    Ok(PublicKey::new(exp.key_id, exp.copy_index, register))
}
