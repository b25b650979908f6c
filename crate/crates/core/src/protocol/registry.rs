use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::keys::{KeyId, PrivateKey};
use super::register::QuantumRegister;
use crate::error::{Error, Result};

/// One issued copy of a public key: `{N, register}` plus issuance metadata.
#[derive(Debug)]
pub struct PublicKey {
    key_id: KeyId,
    copy_index: u32,
    register: QuantumRegister,
}

impl PublicKey {
    pub(super) fn new(key_id: KeyId, copy_index: u32, register: QuantumRegister) -> Self {
        Self {
            key_id,
            copy_index,
            register,
        }
    }

    pub fn key_id(&self) -> &KeyId {
        &self.key_id
    }

    pub fn copy_index(&self) -> u32 {
        self.copy_index
    }

    /// Key length `N`.
    pub fn qubits(&self) -> usize {
        self.register.len()
    }

    pub fn register(&self) -> &QuantumRegister {
        &self.register
    }

    pub fn register_mut(&mut self) -> &mut QuantumRegister {
        &mut self.register
    }

    pub fn into_register(self) -> QuantumRegister {
        self.register
    }
}

struct Entry {
    key: PrivateKey,
    cap: u32,
    issued: u32,
}

/// Public metadata of a registry entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryRecord {
    pub key_id: KeyId,
    pub fingerprint: String,
    pub qubits: usize,
    pub cap: u32,
    pub issued: u32,
}

/// Issues at most `cap` copies of each enrolled public key.
///
/// Counters only grow. Mutation goes through `&mut self`; wrap the registry
/// in a `Mutex` to share it between threads.
#[derive(Default)]
pub struct KeyRegistry {
    entries: BTreeMap<KeyId, Entry>,
}

impl KeyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn enroll(&mut self, key: PrivateKey, cap: u32) -> Result<KeyId> {
        let id = key.key_id();
        if self.entries.contains_key(&id) {
            return Err(Error::InvalidArgument(format!("key {id} already enrolled")));
        }
        self.entries.insert(id.clone(), Entry { key, cap, issued: 0 });
        Ok(id)
    }

    /// Prepares and hands out the next copy, failing once `cap` copies exist.
    pub fn issue_copy(&mut self, key_id: &KeyId) -> Result<PublicKey> {
        let entry = self
            .entries
            .get_mut(key_id)
            .ok_or_else(|| Error::UnknownKey(key_id.to_string()))?;
        if entry.issued >= entry.cap {
            return Err(Error::CapExhausted {
                key_id: key_id.to_string(),
                cap: entry.cap,
            });
        }
        let copy_index = entry.issued;
        entry.issued += 1;
        Ok(PublicKey::new(
            key_id.clone(),
            copy_index,
            entry.key.prepare_public_register(),
        ))
    }

    pub fn issued(&self, key_id: &KeyId) -> Option<u32> {
        self.entries.get(key_id).map(|e| e.issued)
    }

    pub fn records(&self) -> Vec<RegistryRecord> {
        self.entries
            .iter()
            .map(|(id, e)| RegistryRecord {
                key_id: id.clone(),
                fingerprint: e.key.fingerprint().to_hex(),
                qubits: e.key.len(),
                cap: e.cap,
                issued: e.issued,
            })
            .collect()
    }
}
