use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum_core::{
    prepare_state, trace_distance, AngleIndex, DensityMatrix, EnsembleAccumulator,
};

/// Largest precision enumerated by the chosen-plaintext check.
pub const CPA_PRECISION_CAP: u32 = 12;
/// Largest key length enumerated by the chosen-plaintext check.
pub const CPA_QUBIT_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpaDistances {
    pub n: u32,
    #[serde(rename = "N")]
    pub qubits: usize,
    /// `D(rho_c(m0), rho_c(m1))`.
    pub between_messages: f64,
    /// `D(rho_c(m0), rho_pk)`.
    pub m0_vs_public: f64,
    /// `D(rho_c(m1), rho_pk)`.
    pub m1_vs_public: f64,
    /// `D(rho_pk, I/2^N)`.
    pub public_vs_mixed: f64,
}

fn check_caps(n: u32, qubits: usize) -> Result<()> {
    crate::quantum_core::check_precision(n)?;
    if n > CPA_PRECISION_CAP || qubits == 0 || qubits > CPA_QUBIT_CAP {
        return Err(Error::EnumerationCap(format!(
            "chosen-plaintext enumeration supports n <= {CPA_PRECISION_CAP} and \
             1 <= N <= {CPA_QUBIT_CAP}, got n = {n}, N = {qubits}"
        )));
    }
    Ok(())
}

/// Single-qubit cipher density with the key index uniform over `Z_{2^n}`:
/// `sum_s 2^-n |psi_{s + m 2^(n-1)}><..|`.
fn qubit_cipher_density(n: u32, rotated: bool) -> Result<DensityMatrix> {
    let count = 1u64 << n;
    let p = 1.0 / count as f64;
    let mut acc = EnsembleAccumulator::new(2);
    for s in 0..count {
        let idx = AngleIndex::new(s, n)?;
        acc.add(p, &prepare_state(if rotated { idx.flipped() } else { idx }))?;
    }
    acc.finish()
}

/// Exact cipher densities for `n`, reused across many message pairs.
///
/// The key indices are independent and uniform, and a permutation of
/// independent uniform indices leaves their joint law unchanged, so the
/// `N`-qubit cipher density is the tensor product of per-qubit densities.
#[derive(Debug, Clone)]
pub struct CpaEnumerator {
    n: u32,
    qubits: usize,
    plain: DensityMatrix,
    rotated: DensityMatrix,
    public: DensityMatrix,
}

impl CpaEnumerator {
    pub fn new(n: u32, qubits: usize) -> Result<Self> {
        check_caps(n, qubits)?;
        let plain = qubit_cipher_density(n, false)?;
        let rotated = qubit_cipher_density(n, true)?;
        let mut public = plain.clone();
        for _ in 1..qubits {
            public = public.tensor(&plain);
        }
        Ok(Self {
            n,
            qubits,
            plain,
            rotated,
            public,
        })
    }

    /// Cipher density for message `m` (alpha = 1; missing trailing bits
    /// count as 0).
    pub fn cipher_density(&self, m: &[bool]) -> Result<DensityMatrix> {
        if m.len() > self.qubits {
            return Err(Error::MessageTooLong {
                needed: m.len(),
                available: self.qubits,
            });
        }
        let pick = |j: usize| {
            if m.get(j).copied().unwrap_or(false) {
                &self.rotated
            } else {
                &self.plain
            }
        };
        let mut rho = pick(0).clone();
        for j in 1..self.qubits {
            rho = rho.tensor(pick(j));
        }
        Ok(rho)
    }

    pub fn public_density(&self) -> &DensityMatrix {
        &self.public
    }

    pub fn distances(&self, m0: &[bool], m1: &[bool]) -> Result<CpaDistances> {
        let c0 = self.cipher_density(m0)?;
        let c1 = self.cipher_density(m1)?;
        Ok(CpaDistances {
            n: self.n,
            qubits: self.qubits,
            between_messages: trace_distance(&c0, &c1)?,
            m0_vs_public: trace_distance(&c0, &self.public)?,
            m1_vs_public: trace_distance(&c1, &self.public)?,
            public_vs_mixed: trace_distance(
                &self.public,
                &DensityMatrix::maximally_mixed(self.qubits),
            )?,
        })
    }

    /// Largest distance over every message pair and every message vs the
    /// public-key density.
    pub fn max_over_all_messages(&self) -> Result<f64> {
        let msgs: Vec<Vec<bool>> = (0..1u32 << self.qubits)
            .map(|v| (0..self.qubits).map(|j| v >> j & 1 == 1).collect())
            .collect();
        let dens = msgs
            .iter()
            .map(|m| self.cipher_density(m))
            .collect::<Result<Vec<_>>>()?;
        let mut worst = trace_distance(&self.public, &DensityMatrix::maximally_mixed(self.qubits))?;
        for (i, a) in dens.iter().enumerate() {
            worst = worst.max(trace_distance(a, &self.public)?);
            for b in &dens[i + 1..] {
                worst = worst.max(trace_distance(a, b)?);
            }
        }
        Ok(worst)
    }
}

/// Exact trace distances between the cipher ensembles of `m0` and `m1`,
/// averaged over the uniform private key at precision `n`.
pub fn chosen_plaintext_distinguishability(
    n: u32,
    qubits: usize,
    m0: &[bool],
    m1: &[bool],
) -> Result<CpaDistances> {
    CpaEnumerator::new(n, qubits)?.distances(m0, m1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_messages_have_zero_distance() {
        let d = chosen_plaintext_distinguishability(5, 3, &[true, false], &[true, false]).unwrap();
        assert_eq!(d.between_messages, 0.0);
    }

    #[test]
    fn opposite_messages_are_indistinguishable() {
        let d = chosen_plaintext_distinguishability(6, 2, &[false, false], &[true, true]).unwrap();
        assert!(d.between_messages < 1e-12);
        assert!(d.m0_vs_public < 1e-12 && d.m1_vs_public < 1e-12);
        assert!(d.public_vs_mixed < 1e-12);
    }

    #[test]
    fn caps() {
        assert!(CpaEnumerator::new(13, 1).is_err());
        assert!(CpaEnumerator::new(4, 5).is_err());
        assert!(CpaEnumerator::new(4, 0).is_err());
        assert!(CpaEnumerator::new(4, 2).unwrap().cipher_density(&[true; 3]).is_err());
    }

    #[test]
    fn known_key_would_distinguish() {
        // sanity check that the distance is not trivially zero: a single
        // fixed key maps m and not-m to orthogonal states
        let a = DensityMatrix::from_pure(&prepare_state(AngleIndex::new(3, 4).unwrap()));
        let b = DensityMatrix::from_pure(&prepare_state(AngleIndex::new(3, 4).unwrap().flipped()));
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }
}
