use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum_core::{
    partial_trace, prepare_state, swap_test, swap_test_pair, AngleIndex, DensityMatrix,
    SwapOutcome,
};
use crate::rng::trial_rng;

/// Repeated SWAP tests on one pair of qubits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatedSwapStats {
    pub label: String,
    /// `|<a|b>|`.
    pub overlap: f64,
    /// `(1 + |<a|b>|^2) / 2`.
    pub first_use_formula: f64,
    pub trials: usize,
    pub first_pass_rate: f64,
    /// Unconditional pass rate of a second test on the post-test pair.
    pub second_pass_rate: f64,
    /// Second-test pass rate among trials whose first test passed.
    pub second_pass_given_pass: Option<f64>,
    /// Second-test pass rate among trials whose first test failed.
    pub second_pass_given_fail: Option<f64>,
    /// Purity of one qubit's reduced state after a first-test pass.
    pub reduced_purity_after_pass: f64,
    /// A conditional second-use rate departs from the first-use formula by
    /// more than 3 standard errors.
    pub second_use_differs: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleUseRecord {
    pub cases: Vec<RepeatedSwapStats>,
}

#[derive(Default)]
struct Tally {
    pass1: usize,
    pass2: usize,
    pass2_after_pass: usize,
    pass2_after_fail: usize,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.pass1 += o.pass1;
        self.pass2 += o.pass2;
        self.pass2_after_pass += o.pass2_after_pass;
        self.pass2_after_fail += o.pass2_after_fail;
        self
    }
}

/// Runs `trials` first-then-second SWAP tests on `|psi_a>|psi_b>`.
pub fn repeated_swap_stats(
    label: &str,
    a: AngleIndex,
    b: AngleIndex,
    trials: usize,
    seed: u64,
) -> Result<RepeatedSwapStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let (sa, sb) = (prepare_state(a), prepare_state(b));
    let ov = sa.inner(&sb)?.norm();
    let formula = (1.0 + ov * ov) / 2.0;

    let tally = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Tally> {
            let mut rng = trial_rng(seed, t);
            let first = swap_test(&sa, &sb, &mut rng)?;
            let second = swap_test_pair(&first.post_joint, &mut rng)?;
            let p1 = first.outcome == SwapOutcome::Pass;
            let p2 = second.outcome == SwapOutcome::Pass;
            Ok(Tally {
                pass1: usize::from(p1),
                pass2: usize::from(p2),
                pass2_after_pass: usize::from(p1 && p2),
                pass2_after_fail: usize::from(!p1 && p2),
            })
        })
        .try_reduce(Tally::default, |x, y| Ok(x.merge(y)))?;

    let t = trials as f64;
    let fails = trials - tally.pass1;
    let rate = |k: usize, of: usize| (of > 0).then(|| k as f64 / of as f64);
    let differs = |k: usize, of: usize| {
        if of == 0 {
            return false;
        }
        let p = k as f64 / of as f64;
        let se = (formula * (1.0 - formula) / of as f64).sqrt();
        (p - formula).abs() > 3.0 * se.max(1e-12)
    };

    // deterministic purity of the pass branch
    let mut rng = trial_rng(seed, u64::MAX);
    let purity = if formula > 0.0 {
        loop {
            let r = swap_test(&sa, &sb, &mut rng)?;
            if r.outcome == SwapOutcome::Pass {
                let rho = DensityMatrix::from_pure(&r.post_joint);
                break partial_trace(&rho, 0, 2)?.purity();
            }
        }
    } else {
        f64::NAN
    };

    Ok(RepeatedSwapStats {
        label: label.to_owned(),
        overlap: ov,
        first_use_formula: formula,
        trials,
        first_pass_rate: tally.pass1 as f64 / t,
        second_pass_rate: tally.pass2 as f64 / t,
        second_pass_given_pass: rate(tally.pass2_after_pass, tally.pass1),
        second_pass_given_fail: rate(tally.pass2_after_fail, fails),
        reduced_purity_after_pass: purity,
        second_use_differs: differs(tally.pass2_after_pass, tally.pass1)
            || differs(tally.pass2_after_fail, fails),
    })
}

/// Shows that the cipher/public-key pair cannot be SWAP-tested twice to any
/// benefit: after the first test the pair sits in the symmetric or the
/// antisymmetric subspace and a second test just repeats the first verdict.
///
/// Cases: identical states, orthogonal states, and overlap `cos(pi/8)`.
pub fn single_use_constraint_check<R: Rng + ?Sized>(
    trials: usize,
    rng: &mut R,
) -> Result<SingleUseRecord> {
    let seed: u64 = rng.random();
    let n = 3;
    let s0 = AngleIndex::zero(n)?;
    let cases = [
        ("identical", s0),
        ("orthogonal", s0.flipped()),
        ("overlap cos(pi/8)", AngleIndex::new(1, n)?),
    ];
    let cases = cases
        .iter()
        .enumerate()
        .map(|(i, (label, b))| {
            repeated_swap_stats(label, s0, *b, trials, seed.wrapping_add(i as u64))
        })
        .collect::<Result<_>>()?;
    Ok(SingleUseRecord { cases })
}
