use rand::Rng;

use super::cipher::CipherState;
use super::keys::PrivateKey;
use super::register::QuantumRegister;
use crate::error::{Error, Result};

/// The key owner's decryption device. It deactivates permanently after
/// `cap` decryptions of `N`-qubit states.
///
/// Every accepted call counts, whether or not the submission was a valid
/// ciphertext. Submissions of the wrong size are rejected without counting.
#[derive(Debug)]
pub struct DecryptionOracle {
    key: PrivateKey,
    cap: u32,
    used: u32,
}

impl DecryptionOracle {
    pub fn new(key: PrivateKey, cap: u32) -> Self {
        Self { key, cap, used: 0 }
    }

    pub fn is_active(&self) -> bool {
        self.used < self.cap
    }

    pub fn uses(&self) -> u32 {
        self.used
    }

    pub fn remaining(&self) -> u32 {
        self.cap - self.used
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Key length `N` the device accepts.
    pub fn qubits(&self) -> usize {
        self.key.len()
    }

    fn admit(&mut self, register: &QuantumRegister) -> Result<()> {
        if register.len() != self.key.len() {
            return Err(Error::DimensionMismatch {
                left: self.key.len(),
                right: register.len(),
            });
        }
        if !self.is_active() {
            return Err(Error::OracleDeactivated(self.cap));
        }
        self.used += 1;
        Ok(())
    }

    /// Undoes the key rotations on every qubit and measures each in Z.
    fn unrotate_and_measure<R: Rng + ?Sized>(
        &self,
        register: &mut QuantumRegister,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<u8>> {
        let indices = self.key.public_indices();
        let mut outcomes = Vec::with_capacity(count);
        for (j, idx) in indices.into_iter().enumerate().take(count) {
            register.unrotate(j, idx)?;
            outcomes.push(register.measure_z(j, rng)?);
        }
        Ok(outcomes)
    }

    /// Recovers the message: un-rotate, measure, and take the parity of each
    /// `alpha`-block. Qubits past `bits * alpha` are discarded.
    pub fn decrypt<R: Rng + ?Sized>(
        &mut self,
        cipher: CipherState,
        rng: &mut R,
    ) -> Result<Vec<bool>> {
        self.admit(cipher.register())?;
        let (bits, alpha) = (cipher.bits(), cipher.alpha());
        let mut register = cipher.into_register();
        let outcomes = self.unrotate_and_measure(&mut register, bits * alpha, rng)?;
        Ok(outcomes
            .chunks(alpha)
            .map(|block| block.iter().fold(false, |acc, &b| acc ^ (b == 1)))
            .collect())
    }

    /// Raw device output for an arbitrary `N`-qubit submission: all `N`
    /// measurement outcomes after un-rotation.
    pub fn decrypt_raw<R: Rng + ?Sized>(
        &mut self,
        mut register: QuantumRegister,
        rng: &mut R,
    ) -> Result<Vec<u8>> {
        self.admit(&register)?;
        let n = register.len();
        self.unrotate_and_measure(&mut register, n, rng)
    }
}

/// Free-function form of [`DecryptionOracle::decrypt`].
pub fn decrypt<R: Rng + ?Sized>(
    oracle: &mut DecryptionOracle,
    cipher: CipherState,
    rng: &mut R,
) -> Result<Vec<bool>> {
    oracle.decrypt(cipher, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{encrypt, KeyRegistry};
    use crate::rng::seeded;

    #[test]
    fn deactivates_after_cap() {
        let key = PrivateKey::new(8, vec![5, 9], None).unwrap();
        let mut reg = KeyRegistry::new();
        let id = reg.enroll(key.clone(), 10).unwrap();
        let mut oracle = DecryptionOracle::new(key, 3);
        let mut rng = seeded(1);
        for _ in 0..3 {
            let c = encrypt(reg.issue_copy(&id).unwrap(), &[true, false], 1, &mut rng).unwrap();
            assert_eq!(oracle.decrypt(c, &mut rng).unwrap(), vec![true, false]);
        }
        assert!(!oracle.is_active());
        let c = encrypt(reg.issue_copy(&id).unwrap(), &[true], 1, &mut rng).unwrap();
        assert_eq!(oracle.decrypt(c, &mut rng), Err(Error::OracleDeactivated(3)));
        assert_eq!(oracle.uses(), 3);
    }

    #[test]
    fn wrong_size_is_not_counted() {
        let key = PrivateKey::new(8, vec![5, 9], None).unwrap();
        let mut oracle = DecryptionOracle::new(key, 1);
        let mut rng = seeded(2);
        let bad = QuantumRegister::zeros(3).unwrap();
        assert!(matches!(
            oracle.decrypt_raw(bad, &mut rng),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(oracle.uses(), 0);
        assert!(oracle.decrypt_raw(QuantumRegister::zeros(2).unwrap(), &mut rng).is_ok());
        assert!(!oracle.is_active());
    }

    #[test]
    fn all_zero_submission_follows_born_rule() {
        // n = 3, s = 2: un-rotating |0> by pi/2 gives P(1) = sin^2(pi/4) = 1/2
        // s = 4: un-rotating by pi gives |1> up to sign, P(1) = 1
        let key = PrivateKey::new(3, vec![2, 4, 0], None).unwrap();
        let mut oracle = DecryptionOracle::new(key, 20_000);
        let mut rng = seeded(3);
        let trials = 20_000;
        let mut ones = [0usize; 3];
        for _ in 0..trials {
            let out = oracle.decrypt_raw(QuantumRegister::zeros(3).unwrap(), &mut rng).unwrap();
            for j in 0..3 {
                ones[j] += out[j] as usize;
            }
        }
        let p0 = ones[0] as f64 / trials as f64;
        assert!((p0 - 0.5).abs() < 4.0 * (0.25f64 / trials as f64).sqrt());
        assert_eq!(ones[1], trials);
        assert_eq!(ones[2], 0);
    }
}
