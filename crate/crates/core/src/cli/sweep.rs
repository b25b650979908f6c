use rand::Rng;
use serde_json::{json, Value};

use super::args::{IntList, SweepArgs, SweepKind};
use super::output::{to_csv, write_text, RunManifest};
use super::{resolve_seed, CliError};
use crate::attacks::{run_forward_search, AttackConfig, CpaEnumerator, DecisionRule};
use crate::quantum_core::DensityMatrix;
use crate::rng::trial_rng;
use crate::security_analysis::{ensemble_density, secrecy_condition, KeyParams};

/// Upper bound on grid cells in one sweep.
pub const MAX_GRID_CELLS: usize = 10_000;

fn axis(list: &Option<IntList>, default: &[u64], name: &str) -> Result<Vec<u64>, CliError> {
    match list {
        None => Ok(default.to_vec()),
        Some(l) if l.0.is_empty() => Err(CliError::Usage(format!("empty grid axis --{name}"))),
        Some(l) => Ok(l.0.clone()),
    }
}

fn narrow<T: TryFrom<u64>>(v: u64, name: &str) -> Result<T, CliError> {
    T::try_from(v).map_err(|_| CliError::Usage(format!("--{name} value {v} is out of range")))
}

fn check_size(lens: &[usize]) -> Result<usize, CliError> {
    let cells = lens
        .iter()
        .try_fold(1usize, |acc, &l| acc.checked_mul(l))
        .unwrap_or(usize::MAX);
    if cells == 0 {
        return Err(CliError::Usage("empty grid".into()));
    }
    if cells > MAX_GRID_CELLS {
        return Err(CliError::Usage(format!(
            "grid has {cells} cells, limit is {MAX_GRID_CELLS}"
        )));
    }
    Ok(cells)
}

fn rules(text: &str) -> Result<Vec<DecisionRule>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(CliError::from))
        .collect()
}

fn forward_search_rows(a: &SweepArgs, seed: u64) -> Result<Vec<Value>, CliError> {
    let alphas = axis(&a.alpha, &[1], "alpha")?;
    let ns = axis(&a.n, &[32], "n")?;
    let ks = axis(&a.k, &[2], "k")?;
    let qubits = a.qubits.as_ref().map(|_| axis(&a.qubits, &[], "N")).transpose()?;
    let rules = rules(&a.rule)?;
    let n_len = qubits.as_ref().map_or(1, Vec::len);
    check_size(&[alphas.len(), ns.len(), ks.len(), n_len, rules.len()])?;

    let mut rows = Vec::new();
    let mut cell = 0u64;
    for &alpha in &alphas {
        for &n in &ns {
            for &k in &ks {
                let qs: Vec<u64> = qubits.clone().unwrap_or_else(|| vec![alpha]);
                for &q in &qs {
                    for &rule in &rules {
                        let cfg = AttackConfig {
                            n: narrow(n, "n")?,
                            qubits: narrow(q, "N")?,
                            alpha: narrow(alpha, "alpha")?,
                            k: narrow(k, "k")?,
                            trials: a.trials,
                            seed: trial_rng(seed, cell).random(),
                            rule,
                        };
                        cell += 1;
                        let r = run_forward_search(&cfg)?;
                        let mut v = serde_json::to_value(&r)?;
                        v["k"] = k.into();
                        v["deviation_in_stderr"] = r.deviation_in_stderr().into();
                        v["notes"] = r.notes.join("; ").into();
                        rows.push(v);
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn ensemble_rows(a: &SweepArgs) -> Result<Vec<Value>, CliError> {
    let ns = axis(&a.n, &(1..=16).collect::<Vec<_>>(), "n")?;
    check_size(&[ns.len()])?;
    let mixed = DensityMatrix::maximally_mixed(1);
    ns.iter()
        .map(|&n| {
            let e = ensemble_density(narrow(n, "n")?)?;
            let dev = e.density.max_abs_deviation(&mixed)?;
            Ok(json!({
                "n": n,
                "max_deviation": dev,
                "analytic": e.analytic,
                "satisfied": dev < 1e-12,
            }))
        })
        .collect()
}

fn secrecy_rows(a: &SweepArgs) -> Result<Vec<Value>, CliError> {
    let lows = axis(&a.n_low, &[32], "n-low")?;
    let highs = axis(&a.n_high, &[62], "n-high")?;
    let qs = axis(&a.qubits, &[256], "N")?;
    let ks = axis(&a.k, &[16], "k")?;
    check_size(&[lows.len(), highs.len(), qs.len(), ks.len()])?;
    let mut rows = Vec::new();
    for &lo in &lows {
        for &hi in &highs {
            if lo > hi {
                continue;
            }
            for &q in &qs {
                for &k in &ks {
                    let p = KeyParams::new(narrow(lo, "n-low")?, narrow(hi, "n-high")?, q, k)?;
                    let r = secrecy_condition(&p, a.threshold)?;
                    rows.push(json!({
                        "n_low": lo,
                        "n_high": hi,
                        "N": q,
                        "k": k,
                        "h_d": r.h_d,
                        "h_d_prime": r.h_d_prime,
                        "holevo_cap": r.holevo_cap,
                        "margin": r.margin,
                        "margin_with_permutation": r.margin_with_permutation,
                        "threshold": r.threshold,
                        "satisfied": r.satisfied,
                    }));
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Usage("grid has no cells with n-low <= n-high".into()));
    }
    Ok(rows)
}

fn cpa_rows(a: &SweepArgs) -> Result<Vec<Value>, CliError> {
    let ns = axis(&a.n, &[6], "n")?;
    let qs = axis(&a.qubits, &[2], "N")?;
    check_size(&[ns.len(), qs.len()])?;
    let mut rows = Vec::new();
    for &n in &ns {
        for &q in &qs {
            let e = CpaEnumerator::new(narrow(n, "n")?, narrow(q, "N")?)?;
            let worst = e.max_over_all_messages()?;
            rows.push(json!({
                "n": n,
                "N": q,
                "max_trace_distance": worst,
                "satisfied": worst < 1e-12,
            }));
        }
    }
    Ok(rows)
}

pub fn sweep(a: &SweepArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let rows = match a.kind {
        SweepKind::ForwardSearch => forward_search_rows(a, seed)?,
        SweepKind::Ensemble => ensemble_rows(a)?,
        SweepKind::Secrecy => secrecy_rows(a)?,
        SweepKind::Cpa => cpa_rows(a)?,
    };
    let mut manifest = RunManifest::new("sweep", serde_json::to_value(a)?, seed);
    let data = a.out.join("sweep.csv");
    write_text(&data, &to_csv(&rows, &manifest.manifest_id)?)?;
    let mpath = a.out.join("manifest.json");
    manifest.outputs = vec![data.display().to_string(), mpath.display().to_string()];
    manifest.write(&mpath)?;
    Ok(format!("{} rows written to {}\n", rows.len(), data.display()))
}
