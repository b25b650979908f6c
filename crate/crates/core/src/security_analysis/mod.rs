//! Security accounting for the private key: entropies, Holevo ceilings,
//! secrecy margins, ensemble density operators, and Monte Carlo estimates of
//! what measurements on public-key copies reveal.

mod ensemble;
mod entropy;
mod information;

use serde::Serialize;

pub use ensemble::{
    ensemble_density, mixed_precision_density, public_key_density_description, EnsembleDensity,
    PublicKeyDensity, ENSEMBLE_ENUMERATION_CAP, MATERIALIZE_CAP,
};
pub use entropy::{
    holevo_cap, key_entropy_bits, log2_factorial, permuted_key_entropy, private_key_entropy,
    secrecy_condition, KeyParams, SecrecyReport, DEFAULT_MARGIN_THRESHOLD,
};
pub use information::{
    estimate_mutual_information, MeasurementStrategy, MutualInformationEstimate, Povm,
    BOOTSTRAP_RESAMPLES, MIN_REPORTED_TRIALS, MI_PRECISION_CAP,
};

pub(crate) use information::simulate;

/// One row of an analysis report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRecord {
    pub quantity: String,
    /// `null` in JSON when infinite.
    pub value_bits: Option<f64>,
    pub stderr_bits: Option<f64>,
    pub params: serde_json::Value,
    pub satisfied: Option<bool>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl SecrecyReport {
    pub fn records(&self) -> Vec<AnalysisRecord> {
        let params = serde_json::to_value(self.params).expect("params serialize");
        let row = |q: &str, v: f64, sat: Option<bool>| AnalysisRecord {
            quantity: q.to_owned(),
            value_bits: finite(v),
            stderr_bits: None,
            params: params.clone(),
            satisfied: sat,
        };
        vec![
            row("H(d)", self.h_d, None),
            row("H(d')", self.h_d_prime, None),
            row("holevo_cap", self.holevo_cap, None),
            row("H(d|x)", self.h_d_given_x, None),
            row("margin", self.margin, Some(self.satisfied)),
            row("margin_with_permutation", self.margin_with_permutation, Some(self.margin_with_permutation >= self.threshold)),
        ]
    }
}

impl MutualInformationEstimate {
    pub fn record(&self, strategy: &str) -> AnalysisRecord {
        AnalysisRecord {
            quantity: "I(x;s) per qubit".to_owned(),
            value_bits: finite(self.bits),
            stderr_bits: finite(self.stderr_bits),
            params: serde_json::json!({
                "strategy": strategy,
                "n": self.n,
                "copies": self.copies,
                "trials": self.trials,
                "undersampled": self.undersampled,
            }),
            satisfied: Some(self.bits <= self.copies as f64 + 3.0 * self.stderr_bits),
        }
    }
}
