use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{
    encode_redundant, encrypt_with_flags, generate_private_key, KeyGenParams, KeyRegistry,
    Precision, QuantumRegister,
};
use crate::quantum_core::SwapOutcome;
use crate::rng::trial_rng;

/// Largest `alpha` for which the exact branch enumeration runs.
pub const ENUMERATION_ALPHA_CAP: usize = 20;

/// How a forward-search trial is scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionRule {
    /// Success only if every per-qubit rotation was identified.
    IdentifyAll,
    /// Success if the parity of the per-qubit guesses equals the bit.
    ParityAware,
}

impl DecisionRule {
    pub fn name(self) -> &'static str {
        match self {
            DecisionRule::IdentifyAll => "identify-all",
            DecisionRule::ParityAware => "parity-aware",
        }
    }
}

impl fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecisionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identify-all" => Ok(DecisionRule::IdentifyAll),
            "parity-aware" => Ok(DecisionRule::ParityAware),
            other => Err(Error::InvalidArgument(format!(
                "unknown decision rule {other:?} (expected identify-all or parity-aware)"
            ))),
        }
    }
}

/// Eve's per-qubit verdicts for one message bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardSearchGuess {
    /// `true` where the SWAP test failed, i.e. the qubit was judged rotated.
    pub rotated: Vec<bool>,
}

impl ForwardSearchGuess {
    /// Guessed message bit: parity of the per-qubit verdicts.
    pub fn bit(&self) -> bool {
        self.rotated.iter().fold(false, |acc, &r| acc ^ r)
    }

    pub fn score(&self, mask: &[bool], bit: bool, rule: DecisionRule) -> bool {
        match rule {
            DecisionRule::IdentifyAll => self.rotated == mask,
            DecisionRule::ParityAware => self.bit() == bit,
        }
    }
}

/// SWAP-tests qubits `block*alpha ..` of the cipher against the same
/// positions of a public-key copy. Pass is read as "not rotated", fail as
/// "rotated". Both registers lose the tested qubits.
pub fn forward_search_trial<R: Rng + ?Sized>(
    cipher: &mut QuantumRegister,
    pk_copy: &mut QuantumRegister,
    block: usize,
    alpha: usize,
    rng: &mut R,
) -> Result<ForwardSearchGuess> {
    if cipher.len() != pk_copy.len() {
        return Err(Error::DimensionMismatch {
            left: cipher.len(),
            right: pk_copy.len(),
        });
    }
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be >= 1".into()));
    }
    let start = block * alpha;
    if start + alpha > cipher.len() {
        return Err(Error::QubitOutOfRange {
            qubit: start + alpha - 1,
            count: cipher.len(),
        });
    }
    let rotated = (start..start + alpha)
        .map(|q| Ok(cipher.swap_test(q, pk_copy, q, rng)? == SwapOutcome::Fail))
        .collect::<Result<_>>()?;
    Ok(ForwardSearchGuess { rotated })
}

/// Success probability of the forward search, by enumerating every rotation
/// mask and every SWAP outcome branch.
pub fn exact_success_probability(alpha: usize, rule: DecisionRule) -> Result<f64> {
    if alpha == 0 || alpha > ENUMERATION_ALPHA_CAP {
        return Err(Error::EnumerationCap(format!(
            "branch enumeration supports 1 <= alpha <= {ENUMERATION_ALPHA_CAP}"
        )));
    }
    // The bit is uniform and the mask uniform within its parity class, so
    // the mask is uniform over all 2^alpha vectors.
    let p_mask = 0.5f64.powi(alpha as i32);
    let mut total = 0.0;
    for m in 0u32..(1 << alpha) {
        let mask: Vec<bool> = (0..alpha).map(|j| m >> j & 1 == 1).collect();
        let bit = mask.iter().fold(false, |a, &b| a ^ b);
        let rotated: Vec<usize> = (0..alpha).filter(|&j| mask[j]).collect();
        // unrotated qubits always pass; rotated ones pass or fail with 1/2
        let p_branch = 0.5f64.powi(rotated.len() as i32);
        for f in 0u32..(1 << rotated.len()) {
            let mut verdict = vec![false; alpha];
            for (i, &j) in rotated.iter().enumerate() {
                verdict[j] = f >> i & 1 == 1;
            }
            let guess = ForwardSearchGuess { rotated: verdict };
            if guess.score(&mask, bit, rule) {
                total += p_mask * p_branch;
            }
        }
    }
    Ok(total)
}

/// Closed forms matching [`exact_success_probability`].
pub fn theoretical_success(alpha: usize, rule: DecisionRule) -> f64 {
    match rule {
        DecisionRule::IdentifyAll => 0.75f64.powi(alpha as i32),
        DecisionRule::ParityAware => 0.5 + 0.5f64.powi(alpha as i32 + 1),
    }
}

/// Smallest `alpha` whose identify-all success drops below 1/2.
pub fn first_alpha_below_random() -> usize {
    (1..)
        .find(|&a| theoretical_success(a, DecisionRule::IdentifyAll) < 0.5)
        .expect("(3/4)^alpha decreases to 0")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    /// Key precision.
    pub n: u32,
    /// Key length `N`; must hold one `alpha`-block.
    #[serde(rename = "N")]
    pub qubits: usize,
    pub alpha: usize,
    /// Copy cap of the enrolled key; the attack consumes two copies a trial.
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
    pub rule: DecisionRule,
}

impl AttackConfig {
    pub fn forward_search(alpha: usize, rule: DecisionRule, trials: usize, seed: u64) -> Self {
        Self {
            n: 32,
            qubits: alpha,
            alpha,
            k: 2,
            trials,
            seed,
            rule,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.alpha == 0 {
            return Err(Error::InvalidArgument("alpha must be >= 1".into()));
        }
        if self.alpha > self.qubits {
            return Err(Error::MessageTooLong {
                needed: self.alpha,
                available: self.qubits,
            });
        }
        if self.k < 2 {
            return Err(Error::InvalidArgument(
                "forward search needs k >= 2 (one copy for Bob, one for Eve)".into(),
            ));
        }
        crate::quantum_core::check_precision(self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: String,
    pub alpha: usize,
    pub n: u32,
    #[serde(rename = "N")]
    pub qubits: usize,
    pub rule: DecisionRule,
    pub trials: usize,
    pub success_rate: f64,
    pub stderr: f64,
    pub theory: f64,
    pub seed: u64,
    /// `success_rate - theory`.
    pub deviation: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AttackReport {
    /// `|success_rate - theory|` in units of the standard error.
    pub fn deviation_in_stderr(&self) -> f64 {
        if self.stderr == 0.0 {
            if self.deviation == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            self.deviation.abs() / self.stderr
        }
    }
}

fn one_trial(config: &AttackConfig, index: u64) -> Result<bool> {
    let mut rng = trial_rng(config.seed, index);
    let key = generate_private_key(
        &KeyGenParams {
            precision: Precision::Fixed(config.n),
            qubits: config.qubits,
            permute: false,
        },
        &mut rng,
    )?;
    let mut registry = KeyRegistry::new();
    let id = registry.enroll(key, config.k)?;
    let bob_copy = registry.issue_copy(&id)?;
    let eve_copy = registry.issue_copy(&id)?;

    let bit: bool = rng.random();
    let mask = encode_redundant(bit, config.alpha, &mut rng)?;
    let cipher = encrypt_with_flags(bob_copy, &mask, config.alpha)?;

    let mut intercepted = cipher.into_register();
    let mut reference = eve_copy.into_register();
    let guess = forward_search_trial(&mut intercepted, &mut reference, 0, config.alpha, &mut rng)?;
    Ok(guess.score(&mask, bit, config.rule))
}

/// Monte Carlo forward search over fresh keys, bits, masks and SWAP
/// outcomes. Trial `t` draws from stream `t` of `config.seed`.
pub fn run_forward_search(config: &AttackConfig) -> Result<AttackReport> {
    config.validate()?;
    let wins = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| one_trial(config, t).map(usize::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let t = config.trials as f64;
    let p = wins as f64 / t;
    let theory = match exact_success_probability(config.alpha, config.rule) {
        Ok(v) => v,
        Err(_) => theoretical_success(config.alpha, config.rule),
    };
    let mut notes = Vec::new();
    if config.rule == DecisionRule::IdentifyAll {
        notes.push(format!(
            "success drops below random guessing from alpha = {} on (often quoted as alpha > 3)",
            first_alpha_below_random()
        ));
    }
    Ok(AttackReport {
        attack: "forward-search".into(),
        alpha: config.alpha,
        n: config.n,
        qubits: config.qubits,
        rule: config.rule,
        trials: config.trials,
        success_rate: p,
        stderr: (p * (1.0 - p) / t).sqrt(),
        theory,
        seed: config.seed,
        deviation: p - theory,
        notes,
    })
}
