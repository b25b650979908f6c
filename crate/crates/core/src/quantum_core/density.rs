use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::PureState;
use crate::error::{Error, Result};

/// Tolerance used for the Hermitian / trace / positivity invariants.
pub const DENSITY_TOL: f64 = 1e-12;

/// Hermitian, unit-trace, positive semidefinite operator on `k` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() || d < 2 || !d.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "density matrix must be square with power-of-two size, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm_err = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!("not Hermitian (error {herm_err:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!("trace {tr} differs from 1")));
        }
        let rho = Self { m };
        if let Some(min) = rho.raw_eigenvalues().into_iter().reduce(f64::min) {
            if min < -DENSITY_TOL {
                return Err(Error::InvalidArgument(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        Self { m }
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self { m: &v * v.adjoint() }
    }

    /// `I / 2^k`.
    pub fn maximally_mixed(k: usize) -> Self {
        let d = 1usize << k;
        Self {
            m: DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, p) in probs.iter().enumerate() {
            m[(i, i)] = Complex64::new(*p, 0.0);
        }
        Self::from_matrix(m)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho rho) = sum |rho_ij|^2 for Hermitian rho
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self {
            m: self.m.kronecker(&other.m),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_deviation(&self, other: &DensityMatrix) -> Result<f64> {
        check_dims(self, other)?;
        Ok((&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// Eigenvalues with values in `[-1e-12, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.raw_eigenvalues()
            .into_iter()
            .map(|l| if (-DENSITY_TOL..0.0).contains(&l) { 0.0 } else { l })
            .collect()
    }

    fn raw_eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Streaming sum `sum_i p_i |psi_i><psi_i|`, for ensembles too large to
/// hold as a list.
#[derive(Debug, Clone)]
pub struct EnsembleAccumulator {
    m: DMatrix<Complex64>,
    total_weight: f64,
}

impl EnsembleAccumulator {
    pub fn new(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
            total_weight: 0.0,
        }
    }

    pub fn add(&mut self, p: f64, state: &PureState) -> Result<()> {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad probability {p}")));
        }
        if state.dim() != self.m.nrows() {
            return Err(Error::DimensionMismatch {
                left: self.m.nrows(),
                right: state.dim(),
            });
        }
        let a = state.amplitudes();
        for i in 0..a.len() {
            if a[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..a.len() {
                self.m[(i, j)] += a[i] * a[j].conj() * p;
            }
        }
        self.total_weight += p;
        Ok(())
    }

    pub fn finish(self) -> Result<DensityMatrix> {
        if (self.total_weight - 1.0).abs() > DENSITY_TOL {
            return Err(Error::ProbabilitySum(self.total_weight));
        }
        Ok(DensityMatrix::from_matrix_unchecked(self.m))
    }
}

/// `sum_i p_i |psi_i><psi_i|` for a weighted list of pure states.
pub fn density_from_ensemble(members: &[(f64, PureState)]) -> Result<DensityMatrix> {
    let first = members
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
    let mut acc = EnsembleAccumulator::new(first.1.dim());
    for (p, st) in members {
        acc.add(*p, st)?;
    }
    acc.finish()
}

/// `-sum l log2 l` over the eigenvalues, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|l| *l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// `(1/2) sum |eig(a - b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let diff = &a.m - &b.m;
    let d: f64 = hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>() / 2.0;
    Ok(d.clamp(0.0, 1.0))
}

/// Reduced state of qubit `keep` of a `k`-qubit density matrix.
pub fn partial_trace(rho: &DensityMatrix, keep: usize, k: usize) -> Result<DensityMatrix> {
    if rho.dim() != 1 << k {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 1 << k,
        });
    }
    if keep >= k {
        return Err(Error::InvalidSubsystem { keep, qubits: k });
    }
    let mask = 1usize << (k - 1 - keep);
    let mut out = DMatrix::zeros(2, 2);
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            // traced-out bits must agree
            if (i & !mask) != (j & !mask) {
                continue;
            }
            let a = usize::from(i & mask != 0);
            let b = usize::from(j & mask != 0);
            out[(a, b)] += rho.m[(i, j)];
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}
