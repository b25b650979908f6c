use rand::Rng;

use super::keys::KeyId;
use super::register::QuantumRegister;
use super::registry::PublicKey;
use crate::error::{Error, Result};

/// Public-key register after the sender's `R(pi)` rotations, with the
/// classical framing `(bits, alpha)` needed to decode it.
#[derive(Debug)]
pub struct CipherState {
    register: QuantumRegister,
    bits: usize,
    alpha: usize,
    key_id: Option<KeyId>,
}

impl CipherState {
    /// Wraps an arbitrary register as a ciphertext (e.g. one crafted by an
    /// adversary).
    pub fn from_register(register: QuantumRegister, bits: usize, alpha: usize) -> Result<Self> {
        check_framing(bits, alpha, register.len())?;
        Ok(Self {
            register,
            bits,
            alpha,
            key_id: None,
        })
    }

    /// Number of encoded message bits `r`.
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn qubits(&self) -> usize {
        self.register.len()
    }

    pub fn key_id(&self) -> Option<&KeyId> {
        self.key_id.as_ref()
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

fn check_framing(bits: usize, alpha: usize, available: usize) -> Result<()> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be >= 1".into()));
    }
    let needed = bits
        .checked_mul(alpha)
        .ok_or_else(|| Error::InvalidArgument("message length overflows".into()))?;
    if needed > available {
        return Err(Error::MessageTooLong { needed, available });
    }
    Ok(())
}

/// Random rotation mask of length `alpha` whose parity equals `bit`,
/// uniform over all such masks.
pub fn encode_redundant<R: Rng + ?Sized>(bit: bool, alpha: usize, rng: &mut R) -> Result<Vec<bool>> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be >= 1".into()));
    }
    let mut mask: Vec<bool> = (0..alpha - 1).map(|_| rng.random()).collect();
    let parity = mask.iter().fold(false, |acc, &b| acc ^ b);
    mask.push(parity ^ bit);
    Ok(mask)
}

/// Encrypts `message` on the public key, spreading each bit over `alpha`
/// consecutive qubits with a parity mask. Qubit order is preserved and the
/// trailing `N - r*alpha` qubits are left untouched.
pub fn encrypt<R: Rng + ?Sized>(
    pk: PublicKey,
    message: &[bool],
    alpha: usize,
    rng: &mut R,
) -> Result<CipherState> {
    check_framing(message.len(), alpha, pk.qubits())?;
    let mut flags = Vec::with_capacity(message.len() * alpha);
    for &bit in message {
        flags.extend(encode_redundant(bit, alpha, rng)?);
    }
    encrypt_with_flags(pk, &flags, alpha)
}

/// Applies `R(flags[j] * pi)` to qubit `j`. `flags.len()` must be a multiple
/// of `alpha`; block `i` decodes to the parity of `flags[i*alpha..]`.
pub fn encrypt_with_flags(pk: PublicKey, flags: &[bool], alpha: usize) -> Result<CipherState> {
    if alpha == 0 || flags.len() % alpha != 0 {
        return Err(Error::InvalidArgument(format!(
            "{} rotation flags do not split into blocks of {alpha}",
            flags.len()
        )));
    }
    let bits = flags.len() / alpha;
    check_framing(bits, alpha, pk.qubits())?;
    let key_id = pk.key_id().clone();
    let mut register = pk.into_register();
    for (j, &flag) in flags.iter().enumerate() {
        if flag {
            register.apply_half_turn(j)?;
        }
    }
    Ok(CipherState {
        register,
        bits,
        alpha,
        key_id: Some(key_id),
    })
}
