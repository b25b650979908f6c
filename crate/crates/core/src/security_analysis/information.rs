use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::hash::Hash;

use nalgebra::Matrix2 as NMatrix2;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum_core::{
    measure_in_rotated_basis, measure_kraus, prepare_state, AngleIndex, Matrix2, PureState,
};
use crate::rng::trial_rng;

/// Trial count below which an estimate is flagged as undersampled.
pub const MIN_REPORTED_TRIALS: usize = 10_000;
/// Bootstrap resamples behind every standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 32;
/// Largest `n` the estimator accepts.
pub const MI_PRECISION_CAP: u32 = 16;
const MAX_COPIES: usize = 16;
const POVM_TOL: f64 = 1e-10;

/// Single-qubit measurement an eavesdropper applies to each copy.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementStrategy {
    /// Projective measurement in `{R(phi)|0_z>, R(phi)|1_z>}`.
    FixedBasis { phi: f64 },
    /// Per copy, one of `angles` evenly spaced x-z bases in `[0, pi)`, chosen
    /// uniformly. The basis label is part of the recorded outcome.
    RandomBasis { angles: u32 },
    /// Two-outcome POVM, applied through the Kraus operators `sqrt(E_b)`.
    Povm(Povm),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: [Matrix2; 2],
    kraus: [Matrix2; 2],
}

impl Povm {
    /// Validates `E_0, E_1 >= 0` and `E_0 + E_1 = I` within `1e-10`.
    pub fn new(e0: Matrix2, e1: Matrix2) -> Result<Self> {
        let a = to_nalgebra(&e0);
        let b = to_nalgebra(&e1);
        for (name, m) in [("E0", &a), ("E1", &b)] {
            let herm = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if herm > POVM_TOL {
                return Err(Error::InvalidArgument(format!("{name} is not Hermitian")));
            }
            let min = m.symmetric_eigenvalues().min();
            if min < -POVM_TOL {
                return Err(Error::InvalidArgument(format!(
                    "{name} has negative eigenvalue {min:e}"
                )));
            }
        }
        let sum_err = (a + b - NMatrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if sum_err > POVM_TOL {
            return Err(Error::InvalidArgument(format!(
                "POVM elements do not sum to identity (error {sum_err:e})"
            )));
        }
        Ok(Self {
            elements: [e0, e1],
            kraus: [psd_sqrt(&a), psd_sqrt(&b)],
        })
    }

    /// Unsharp Z measurement: `E_0 = (I + eta Z)/2`, `0 <= eta <= 1`.
    pub fn unsharp_z(eta: f64) -> Result<Self> {
        let c = |x: f64| Complex64::new(x, 0.0);
        let z = c(0.0);
        Self::new(
            [[c((1.0 + eta) / 2.0), z], [z, c((1.0 - eta) / 2.0)]],
            [[c((1.0 - eta) / 2.0), z], [z, c((1.0 + eta) / 2.0)]],
        )
    }

    pub fn elements(&self) -> &[Matrix2; 2] {
        &self.elements
    }
}

fn to_nalgebra(m: &Matrix2) -> NMatrix2<Complex64> {
    NMatrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

fn psd_sqrt(m: &NMatrix2<Complex64>) -> Matrix2 {
    let eig = m.symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    let r = v * NMatrix2::from_diagonal(&roots) * v.adjoint();
    [[r[(0, 0)], r[(0, 1)]], [r[(1, 0)], r[(1, 1)]]]
}

impl MeasurementStrategy {
    /// Number of distinct outcome symbols per copy.
    pub fn symbols(&self) -> u64 {
        match self {
            MeasurementStrategy::RandomBasis { angles } => 2 * *angles as u64,
            _ => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            MeasurementStrategy::FixedBasis { phi } if !phi.is_finite() => {
                Err(Error::InvalidArgument(format!("non-finite basis angle {phi}")))
            }
            MeasurementStrategy::RandomBasis { angles: 0 } => {
                Err(Error::InvalidArgument("random-basis strategy needs angles >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Measures one copy; returns `(symbol, post-measurement state)`.
    fn apply<R: Rng + ?Sized>(&self, state: &PureState, rng: &mut R) -> Result<(u64, PureState)> {
        match self {
            MeasurementStrategy::FixedBasis { phi } => {
                let m = measure_in_rotated_basis(state, 0, *phi, rng)?;
                Ok((m.outcome as u64, m.post_state))
            }
            MeasurementStrategy::RandomBasis { angles } => {
                let b = rng.random_range(0..*angles);
                let phi = PI * b as f64 / *angles as f64;
                let m = measure_in_rotated_basis(state, 0, phi, rng)?;
                Ok((2 * b as u64 + m.outcome as u64, m.post_state))
            }
            MeasurementStrategy::Povm(p) => {
                let m = measure_kraus(state, 0, &p.kraus, rng)?;
                Ok((m.outcome as u64, m.post_state))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MutualInformationEstimate {
    /// Miller-Madow corrected plug-in estimate of `I(outcomes; s)`.
    pub bits: f64,
    /// Bootstrap standard error.
    pub stderr_bits: f64,
    pub trials: usize,
    pub copies: usize,
    pub n: u32,
    /// Size of the joint `(s, outcomes)` alphabet.
    pub joint_alphabet: f64,
    pub undersampled: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct SimulationRun {
    pub estimate: MutualInformationEstimate,
    /// Mean `|<psi_s|post>|^2` over every measured copy; 1 with no copies.
    pub mean_fidelity: f64,
}

/// Plug-in entropy in bits with the Miller-Madow bias correction.
fn entropy_mm<K: Eq + Hash>(counts: &HashMap<K, usize>, total: usize) -> f64 {
    let t = total as f64;
    let plug: f64 = counts
        .values()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum();
    let bins = counts.values().filter(|&&c| c > 0).count() as f64;
    plug + (bins - 1.0) / (2.0 * t * LN_2)
}

fn mi_from_records(records: &[(u64, u64)], picks: impl Iterator<Item = usize>) -> f64 {
    let mut xs: HashMap<u64, usize> = HashMap::new();
    let mut ss: HashMap<u64, usize> = HashMap::new();
    let mut joint: HashMap<(u64, u64), usize> = HashMap::new();
    let mut total = 0;
    for i in picks {
        let (s, x) = records[i];
        *ss.entry(s).or_default() += 1;
        *xs.entry(x).or_default() += 1;
        *joint.entry((s, x)).or_default() += 1;
        total += 1;
    }
    if total == 0 {
        return 0.0;
    }
    entropy_mm(&xs, total) + entropy_mm(&ss, total) - entropy_mm(&joint, total)
}

pub(crate) fn simulate<R: Rng + ?Sized>(
    strategy: &MeasurementStrategy,
    n: u32,
    copies: usize,
    trials: usize,
    rng: &mut R,
) -> Result<SimulationRun> {
    strategy.validate()?;
    if n == 0 || n > MI_PRECISION_CAP {
        return Err(Error::EnumerationCap(format!(
            "mutual-information estimation supports 1 <= n <= {MI_PRECISION_CAP}, got {n}"
        )));
    }
    if copies > MAX_COPIES {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_COPIES} copies per trial"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let joint_alphabet = 2f64.powi(n as i32) * (strategy.symbols() as f64).powi(copies as i32);
    if copies == 0 {
        return Ok(SimulationRun {
            estimate: MutualInformationEstimate {
                bits: 0.0,
                stderr_bits: 0.0,
                trials,
                copies,
                n,
                joint_alphabet,
                undersampled: false,
            },
            mean_fidelity: 1.0,
        });
    }

    let master: u64 = rng.random();
    let per_trial: Vec<(u64, u64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(u64, u64, f64)> {
            let mut r = trial_rng(master, t as u64);
            let s = r.random_range(0..(1u64 << n));
            let psi = prepare_state(AngleIndex::new(s, n)?);
            let mut x = 0u64;
            let mut fid = 0.0;
            for _ in 0..copies {
                let (sym, post) = strategy.apply(&psi, &mut r)?;
                x = x * strategy.symbols() + sym;
                fid += psi.fidelity(&post)?;
            }
            Ok((s, x, fid))
        })
        .collect::<Result<_>>()?;

    let records: Vec<(u64, u64)> = per_trial.iter().map(|&(s, x, _)| (s, x)).collect();
    let fid_sum: f64 = per_trial.iter().map(|r| r.2).sum();
    let bits = mi_from_records(&records, 0..trials);

    let boot_master: u64 = rng.random();
    let boots: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .into_par_iter()
        .map(|b| {
            let mut r = trial_rng(boot_master, b as u64);
            let picks: Vec<usize> = (0..trials).map(|_| r.random_range(0..trials)).collect();
            mi_from_records(&records, picks.into_iter())
        })
        .collect();
    let mean = boots.iter().sum::<f64>() / boots.len() as f64;
    let var = boots.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (boots.len() - 1) as f64;

    Ok(SimulationRun {
        estimate: MutualInformationEstimate {
            bits,
            stderr_bits: var.sqrt(),
            trials,
            copies,
            n,
            joint_alphabet,
            undersampled: trials < MIN_REPORTED_TRIALS || (trials as f64) < 10.0 * joint_alphabet,
        },
        mean_fidelity: fid_sum / (trials * copies) as f64,
    })
}

/// Monte Carlo estimate of the information `copies` measured copies of one
/// public-key qubit carry about `s`, with `s` uniform on `Z_{2^n}`.
pub fn estimate_mutual_information<R: Rng + ?Sized>(
    strategy: &MeasurementStrategy,
    n: u32,
    copies_per_trial: usize,
    trials: usize,
    rng: &mut R,
) -> Result<MutualInformationEstimate> {
    Ok(simulate(strategy, n, copies_per_trial, trials, rng)?.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn one_bit_keys_are_fully_readable() {
        let est = estimate_mutual_information(
            &MeasurementStrategy::FixedBasis { phi: 0.0 },
            1,
            1,
            20_000,
            &mut seeded(1),
        )
        .unwrap();
        assert!((est.bits - 1.0).abs() < 1e-3, "{est:?}");
        assert!(!est.undersampled);
    }

    #[test]
    fn n8_single_copy_z_basis() {
        // exact value: 1 - mean_s h(cos^2(pi s / 256)) = 0.442695...
        let est = estimate_mutual_information(
            &MeasurementStrategy::FixedBasis { phi: 0.0 },
            8,
            1,
            40_000,
            &mut seeded(2),
        )
        .unwrap();
        assert!(est.bits < 1.0);
        assert!((est.bits - 0.442695).abs() < 4.0 * est.stderr_bits + 0.01, "{est:?}");
    }

    #[test]
    fn zero_copies_reveal_nothing() {
        let run = simulate(&MeasurementStrategy::RandomBasis { angles: 4 }, 6, 0, 100, &mut seeded(3))
            .unwrap();
        assert_eq!(run.estimate.bits, 0.0);
        assert_eq!(run.mean_fidelity, 1.0);
    }

    #[test]
    fn povm_validation() {
        assert!(Povm::unsharp_z(0.5).is_ok());
        assert!(Povm::unsharp_z(1.5).is_err());
        let c = |x: f64| Complex64::new(x, 0.0);
        let z = c(0.0);
        let half = [[c(0.5), z], [z, c(0.5)]];
        assert!(Povm::new(half, [[c(0.5), c(0.1)], [z, c(0.5)]]).is_err());
        assert!(Povm::new(half, [[c(0.6), z], [z, c(0.5)]]).is_err());
    }

    #[test]
    fn kraus_square_root() {
        let p = Povm::unsharp_z(0.6).unwrap();
        // sqrt(0.8) and sqrt(0.2) on the diagonal
        assert!((p.kraus[0][0][0].re - 0.8f64.sqrt()).abs() < 1e-12);
        assert!((p.kraus[0][1][1].re - 0.2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn caps_are_enforced() {
        let s = MeasurementStrategy::FixedBasis { phi: 0.0 };
        assert!(estimate_mutual_information(&s, 17, 1, 10, &mut seeded(4)).is_err());
        assert!(estimate_mutual_information(&s, 4, 1, 0, &mut seeded(4)).is_err());
        assert!(estimate_mutual_information(&MeasurementStrategy::RandomBasis { angles: 0 }, 4, 1, 10, &mut seeded(4)).is_err());
        let small = estimate_mutual_information(&s, 4, 1, 100, &mut seeded(4)).unwrap();
        assert!(small.undersampled);
    }
}
