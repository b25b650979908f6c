use std::f64::consts::PI;

use num_complex::Complex64;

use super::angle::AngleIndex;
use crate::error::{Error, Result};

pub(crate) const NORM_TOL: f64 = 1e-12;

/// 2x2 single-qubit operator, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Normalized state vector over the computational basis of `k` qubits.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
/// the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "state length {} is not a power of two >= 2",
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self { amps })
    }

    /// Real single-qubit state `a|0> + b|1>`; normalizes the input.
    pub fn qubit(a: f64, b: f64) -> Result<Self> {
        let norm = (a * a + b * b).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument("zero or non-finite qubit".into()));
        }
        Ok(Self {
            amps: vec![Complex64::new(a / norm, 0.0), Complex64::new(b / norm, 0.0)],
        })
    }

    /// `|0...0>` on `k` qubits.
    pub fn zeros(k: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << k];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// Computational basis state `|index>` on `k` qubits.
    pub fn basis(k: usize, index: usize) -> Result<Self> {
        if index >= 1 << k {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {k} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << k];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`; global phase does not matter.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `self ⊗ other`, with `self` as the leading factor.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// Applies a 2x2 operator to one qubit. The operator is not checked for
    /// unitarity.
    pub(crate) fn apply_single(&self, qubit: usize, op: &Matrix2) -> Result<PureState> {
        let k = self.num_qubits();
        if qubit >= k {
            return Err(Error::QubitOutOfRange { qubit, count: k });
        }
        let stride = 1usize << (k - 1 - qubit);
        let mut out = self.amps.clone();
        for base in 0..self.dim() {
            if base & stride != 0 {
                continue;
            }
            let a0 = self.amps[base];
            let a1 = self.amps[base | stride];
            out[base] = op[0][0] * a0 + op[0][1] * a1;
            out[base | stride] = op[1][0] * a0 + op[1][1] * a1;
        }
        Ok(Self { amps: out })
    }

    pub(crate) fn renormalized(mut self) -> Option<PureState> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Some(self)
    }
}

/// Matrix of `R(theta) = exp(-i theta Y / 2)`.
pub fn rotation_matrix(theta: f64) -> Result<[[f64; 2]; 2]> {
    if !theta.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite angle {theta}")));
    }
    let (s, c) = (theta / 2.0).sin_cos();
    Ok([[c, -s], [s, c]])
}

fn complex_matrix(m: [[f64; 2]; 2]) -> Matrix2 {
    m.map(|row| row.map(|x| Complex64::new(x, 0.0)))
}

/// `R(s*theta_n)|0_z> = cos(s*theta_n/2)|0_z> + sin(s*theta_n/2)|1_z>`.
pub fn prepare_state(idx: AngleIndex) -> PureState {
    let (c, s) = idx.half_angle_cos_sin();
    PureState {
        amps: vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
    }
}

/// Applies `R(theta)` to one qubit.
pub fn apply_rotation(state: &PureState, qubit: usize, theta: f64) -> Result<PureState> {
    let op = complex_matrix(rotation_matrix(theta)?);
    state.apply_single(qubit, &op)
}

/// `<psi_a|psi_b> = cos((b.s - a.s) * theta_n / 2)`, computed from the exact
/// index difference.
pub fn overlap(a: AngleIndex, b: AngleIndex) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::PrecisionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    // both indices are < 2^62, the signed difference fits in i64
    let diff = a.s() as i64 - b.s() as i64;
    let half = PI * (diff as f64) / (a.modulus() as f64);
    Ok(half.cos())
}
