use serde::Serialize;

use super::entropy::KeyParams;
use crate::error::{Error, Result};
use crate::quantum_core::{
    check_precision, prepare_state, von_neumann_entropy, AngleIndex, DensityMatrix,
    EnsembleAccumulator,
};

/// Largest `n` whose `2^n` rotation states are summed explicitly.
pub const ENSEMBLE_ENUMERATION_CAP: u32 = 16;

/// Largest `N` for which the full `2^N`-dimensional key state is built.
pub const MATERIALIZE_CAP: usize = 10;

#[derive(Debug, Clone)]
pub struct EnsembleDensity {
    pub n: u32,
    pub density: DensityMatrix,
    /// `true` when `n` exceeds the enumeration cap and the closed form
    /// `I/2` was returned instead of a sum.
    pub analytic: bool,
}

/// Single-qubit state of the uniform mixture over all `2^n` rotation states.
pub fn ensemble_density(n: u32) -> Result<EnsembleDensity> {
    check_precision(n)?;
    if n > ENSEMBLE_ENUMERATION_CAP {
        return Ok(EnsembleDensity {
            n,
            density: DensityMatrix::maximally_mixed(1),
            analytic: true,
        });
    }
    let count = 1u64 << n;
    let p = 1.0 / count as f64;
    let mut acc = EnsembleAccumulator::new(2);
    for s in 0..count {
        acc.add(p, &prepare_state(AngleIndex::new(s, n)?))?;
    }
    Ok(EnsembleDensity {
        n,
        density: acc.finish()?,
        analytic: false,
    })
}

/// Mixture over `n` uniform on `n_low..=n_high`, each term enumerated.
pub fn mixed_precision_density(n_low: u32, n_high: u32) -> Result<DensityMatrix> {
    check_precision(n_low)?;
    check_precision(n_high)?;
    if n_low > n_high {
        return Err(Error::InvalidArgument(format!("empty range {n_low}:{n_high}")));
    }
    let weight = 1.0 / (n_high - n_low + 1) as f64;
    let mut sum = nalgebra::DMatrix::zeros(2, 2);
    for n in n_low..=n_high {
        sum += ensemble_density(n)?.density.matrix() * num_complex::Complex64::new(weight, 0.0);
    }
    DensityMatrix::from_matrix(sum)
}

/// Factorized description of the public key as seen without the private
/// key: `(I/2)^{⊗N}` with entropy `N` bits.
#[derive(Debug, Clone, Serialize)]
pub struct PublicKeyDensity {
    pub qubits: u64,
    #[serde(skip)]
    pub per_qubit: DensityMatrix,
    pub per_qubit_entropy_bits: f64,
    pub entropy_bits: f64,
}

impl PublicKeyDensity {
    /// Explicit `2^N x 2^N` tensor power, for `N <= MATERIALIZE_CAP`.
    pub fn materialize(&self) -> Result<DensityMatrix> {
        if self.qubits as usize > MATERIALIZE_CAP {
            return Err(Error::EnumerationCap(format!(
                "N = {} exceeds {MATERIALIZE_CAP}",
                self.qubits
            )));
        }
        let mut rho = self.per_qubit.clone();
        for _ in 1..self.qubits {
            rho = rho.tensor(&self.per_qubit);
        }
        Ok(rho)
    }
}

pub fn public_key_density_description(p: &KeyParams) -> Result<PublicKeyDensity> {
    let high = p.n_high.min(ENSEMBLE_ENUMERATION_CAP);
    let per_qubit = if p.n_low <= high {
        // enumerable part of the range; larger n contribute I/2 exactly
        let enumerated = mixed_precision_density(p.n_low, high)?;
        let total = (p.n_high - p.n_low + 1) as f64;
        let enum_weight = (high - p.n_low + 1) as f64 / total;
        let m = enumerated.matrix() * num_complex::Complex64::new(enum_weight, 0.0)
            + DensityMatrix::maximally_mixed(1).matrix()
                * num_complex::Complex64::new(1.0 - enum_weight, 0.0);
        DensityMatrix::from_matrix(m)?
    } else {
        DensityMatrix::maximally_mixed(1)
    };
    let s1 = von_neumann_entropy(&per_qubit);
    Ok(PublicKeyDensity {
        qubits: p.qubits,
        per_qubit,
        per_qubit_entropy_bits: s1,
        entropy_bits: s1 * p.qubits as f64,
    })
}
