use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::attacks::DecisionRule;
use crate::error::Error;

#[derive(Debug, Parser)]
#[command(
    name = "qpke",
    version,
    about = "Quantum public-key encryption simulator and adversary harness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a private key and enroll its public key.
    Keygen(KeygenArgs),
    /// Encrypt a message on a fresh public-key copy and decrypt it again.
    Roundtrip(RoundtripArgs),
    /// Run an adversary experiment.
    Attack(AttackArgs),
    /// Entropy, Holevo and secrecy-margin report.
    Analyze(AnalyzeArgs),
    /// Run a report over a parameter grid and write one CSV row per cell.
    Sweep(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Keygen(_) => "keygen",
            Command::Roundtrip(_) => "roundtrip",
            Command::Attack(_) => "attack",
            Command::Analyze(_) => "analyze",
            Command::Sweep(_) => "sweep",
        }
    }
}

/// `low:high`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrecisionRange {
    pub low: u32,
    pub high: u32,
}

impl FromStr for PrecisionRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidArgument(format!("expected low:high, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        Ok(Self {
            low: a.trim().parse().map_err(|_| bad())?,
            high: b.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Comma-separated integers and inclusive ranges, e.g. `1,2,5..8`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<u64>);

impl FromStr for IntList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || Error::InvalidArgument(format!("bad grid item {item:?}"));
            match item.split_once("..") {
                Some((a, b)) => {
                    let a: u64 = a.parse().map_err(|_| bad())?;
                    let b: u64 = b.parse().map_err(|_| bad())?;
                    if a > b {
                        return Err(bad());
                    }
                    if b - a >= 100_000 {
                        return Err(Error::InvalidArgument(format!("range {item} is too long")));
                    }
                    out.extend(a..=b);
                }
                None => out.push(item.parse().map_err(|_| bad())?),
            }
        }
        Ok(IntList(out))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct KeygenArgs {
    /// Fixed precision n (1..=62).
    #[arg(long, conflicts_with = "n_range")]
    pub n: Option<u32>,
    /// Precision drawn uniformly from low:high [default: 32:62].
    #[arg(long = "n-range")]
    pub n_range: Option<PrecisionRange>,
    /// Key length N.
    #[arg(long = "N", default_value_t = 256)]
    pub qubits: usize,
    /// Apply a random permutation to the public-key qubits.
    #[arg(long)]
    pub permute: bool,
    /// Number of public-key copies the registry may issue.
    #[arg(long, default_value_t = 16)]
    pub k: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "key.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct RoundtripArgs {
    /// Private-key file written by `keygen`.
    #[arg(long)]
    pub key: PathBuf,
    /// Message as a bit string (`0110`) or hex (`0x6f`).
    #[arg(long)]
    pub message: String,
    #[arg(long, default_value_t = 1)]
    pub alpha: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "roundtrip.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    ForwardSearch,
    Cpa,
    Cca,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            AttackKind::ForwardSearch => "forward-search",
            AttackKind::Cpa => "cpa",
            AttackKind::Cca => "cca",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct AttackArgs {
    #[arg(long, value_enum)]
    pub attack: AttackKind,
    #[arg(long, default_value_t = 1)]
    pub alpha: usize,
    /// Precision [default: 32 forward-search, 6 cpa, 8 cca].
    #[arg(long)]
    pub n: Option<u32>,
    /// Key length [default: alpha forward-search, 2 cpa, 4 cca].
    #[arg(long = "N")]
    pub qubits: Option<usize>,
    /// Copy cap (forward-search, default 2) or oracle cap (cca, default 4).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value = "identify-all")]
    #[serde(serialize_with = "ser_rule")]
    pub rule: DecisionRule,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write JSON (the default).
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Write CSV instead of JSON.
    #[arg(long)]
    pub csv: bool,
    /// Output file [default: attack-<name>.json or .csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn ser_rule<S: serde::Serializer>(r: &DecisionRule, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(r.name())
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[arg(long = "n-range", default_value = "32:62")]
    pub n_range: PrecisionRange,
    #[arg(long = "N", default_value_t = 256)]
    pub qubits: u64,
    #[arg(long, default_value_t = 16)]
    pub k: u64,
    /// Ratio standing in for "much greater than".
    #[arg(long, default_value_t = 100.0)]
    pub threshold: f64,
    /// Optional estimate: `z`, `fixed:<phi>`, `random:<angles>`, `unsharp:<eta>`.
    #[arg(long = "mi-strategy")]
    pub mi_strategy: Option<String>,
    /// Precision used by the mutual-information estimate (<= 16).
    #[arg(long = "mi-n", default_value_t = 8)]
    pub mi_n: u32,
    #[arg(long = "mi-copies", default_value_t = 1)]
    pub mi_copies: usize,
    #[arg(long, default_value_t = 20_000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub csv: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// Grid over alpha, rule, n, N.
    ForwardSearch,
    /// Grid over n; uniform-ensemble deviation from I/2.
    Ensemble,
    /// Grid over n-low, n-high, N, k; secrecy margins.
    Secrecy,
    /// Grid over n, N; exact chosen-plaintext distances.
    Cpa,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    #[arg(long)]
    pub alpha: Option<IntList>,
    #[arg(long)]
    pub n: Option<IntList>,
    #[arg(long = "N")]
    pub qubits: Option<IntList>,
    #[arg(long)]
    pub k: Option<IntList>,
    #[arg(long = "n-low")]
    pub n_low: Option<IntList>,
    #[arg(long = "n-high")]
    pub n_high: Option<IntList>,
    /// Comma-separated decision rules.
    #[arg(long, default_value = "identify-all")]
    pub rule: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 100.0)]
    pub threshold: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for sweep.csv and manifest.json.
    #[arg(long, default_value = "sweep")]
    pub out: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_lists() {
        assert_eq!("1,2,4..6".parse::<IntList>().unwrap().0, vec![1, 2, 4, 5, 6]);
        assert!("".parse::<IntList>().unwrap().0.is_empty());
        assert!("3..1".parse::<IntList>().is_err());
        assert!("x".parse::<IntList>().is_err());
    }

    #[test]
    fn ranges() {
        let r: PrecisionRange = "32:62".parse().unwrap();
        assert_eq!((r.low, r.high), (32, 62));
        assert!("32".parse::<PrecisionRange>().is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
