use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::args::{AnalyzeArgs, AttackArgs, AttackKind, KeygenArgs, RoundtripArgs};
use super::output::{envelope, manifest_path_for, pretty, to_csv, write_text, RunManifest};
use super::{resolve_seed, CliError};
use crate::attacks::{
    chosen_ciphertext_session, run_forward_search, AttackConfig, CpaEnumerator, Submission,
};
use crate::protocol::{
    encrypt, generate_private_key, DecryptionOracle, KeyGenParams, KeyRegistry, Precision,
    PrivateKey, RECOMMENDED_MIN_PRECISION,
};
use crate::quantum_core::MAX_PRECISION;
use crate::rng::seeded;
use crate::security_analysis::{
    estimate_mutual_information, secrecy_condition, AnalysisRecord, KeyParams,
    MeasurementStrategy, Povm,
};

fn params_of<T: Serialize>(args: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(args)?)
}

/// Writes `body` as JSON or CSV rows, then the manifest next to it.
fn emit(
    manifest: &mut RunManifest,
    path: &Path,
    body: &Value,
    csv_rows: Option<&[Value]>,
) -> Result<(), CliError> {
    let text = match csv_rows {
        Some(rows) => to_csv(rows, &manifest.manifest_id)?,
        None => pretty(&envelope(body, &manifest.manifest_id)?)?,
    };
    write_text(path, &text)?;
    manifest.outputs.push(path.display().to_string());
    let mpath = manifest_path_for(path);
    manifest.outputs.push(mpath.display().to_string());
    manifest.write(&mpath)
}

pub fn keygen(a: &KeygenArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let precision = match (a.n, a.n_range) {
        (Some(n), _) => Precision::Fixed(n),
        (None, Some(r)) => Precision::Range {
            low: r.low,
            high: r.high,
        },
        (None, None) => Precision::Range {
            low: RECOMMENDED_MIN_PRECISION,
            high: MAX_PRECISION,
        },
    };
    let params = KeyGenParams {
        precision,
        qubits: a.qubits,
        permute: a.permute,
    };
    let key = generate_private_key(&params, &mut seeded(seed))?;
    let mut registry = KeyRegistry::new();
    let id = registry.enroll(key.clone(), a.k)?;
    let fingerprint = key.fingerprint().to_hex();

    let mut manifest = RunManifest::new("keygen", params_of(a)?, seed);
    let mut key_json: Value = serde_json::from_str(&key.to_json()?)?;
    key_json["manifest_id"] = manifest.manifest_id.clone().into();
    write_text(&a.out, &pretty(&key_json)?)?;
    manifest.outputs.push(a.out.display().to_string());

    let reg_path = sibling(&a.out, "registry.json");
    let reg = envelope(&json!({ "records": registry.records() }), &manifest.manifest_id)?;
    write_text(&reg_path, &pretty(&reg)?)?;
    manifest.outputs.push(reg_path.display().to_string());

    let mpath = manifest_path_for(&a.out);
    manifest.outputs.push(mpath.display().to_string());
    manifest.write(&mpath)?;

    Ok(format!(
        "key_id: {id}\nfingerprint: {fingerprint}\nn: {}\nN: {}\nkey file: {}\n",
        key.n(),
        key.len(),
        a.out.display()
    ))
}

/// `<dir>/<stem>.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

/// `0x..` is hex, most significant bit first; anything else must be `0`/`1`.
pub(crate) fn parse_message(text: &str) -> Result<Vec<bool>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("bad message {text:?}: {why}"));
    if let Some(h) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        let bytes = hex::decode(h).map_err(|e| bad(&e.to_string()))?;
        if bytes.is_empty() {
            return Err(bad("empty"));
        }
        return Ok(bytes
            .iter()
            .flat_map(|b| (0..8).rev().map(move |i| b >> i & 1 == 1))
            .collect());
    }
    if text.is_empty() {
        return Err(bad("empty"));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(bad("expected bits or 0x-prefixed hex")),
        })
        .collect()
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn roundtrip(a: &RoundtripArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let text = fs::read_to_string(&a.key).map_err(|e| CliError::io(&a.key, e))?;
    let key = PrivateKey::from_json(&text)?;
    let message = parse_message(&a.message)?;
    let mut rng = seeded(seed);

    let mut registry = KeyRegistry::new();
    let id = registry.enroll(key.clone(), 1)?;
    let pk = registry.issue_copy(&id)?;
    let t0 = Instant::now();
    let cipher = encrypt(pk, &message, a.alpha, &mut rng)?;
    let enc = t0.elapsed();
    let mut oracle = DecryptionOracle::new(key.clone(), 1);
    let t1 = Instant::now();
    let decoded = oracle.decrypt(cipher, &mut rng)?;
    let dec = t1.elapsed();
    let matched = decoded == message;

    let body = json!({
        "key_id": id,
        "n": key.n(),
        "N": key.len(),
        "alpha": a.alpha,
        "message": bit_string(&message),
        "decoded": bit_string(&decoded),
        "match": matched,
    });
    let mut manifest = RunManifest::new("roundtrip", params_of(a)?, seed);
    emit(&mut manifest, &a.out, &body, None)?;
    if !matched {
        return Err(CliError::Protocol("decrypted message differs from plaintext".into()));
    }
    Ok(format!(
        "match=true\nbits: {}\nencrypt: {:.3} ms\ndecrypt: {:.3} ms\n",
        message.len(),
        enc.as_secs_f64() * 1e3,
        dec.as_secs_f64() * 1e3
    ))
}

pub fn attack(a: &AttackArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let mut summary = String::new();
    let body: Value = match a.attack {
        AttackKind::ForwardSearch => {
            let config = AttackConfig {
                n: a.n.unwrap_or(32),
                qubits: a.qubits.unwrap_or(a.alpha),
                alpha: a.alpha,
                k: a.k.unwrap_or(2),
                trials: a.trials,
                seed,
                rule: a.rule,
            };
            let r = run_forward_search(&config)?;
            let _ = writeln!(
                summary,
                "success_rate={:.5} stderr={:.5} theory={:.5} rule={} alpha={} trials={}",
                r.success_rate, r.stderr, r.theory, r.rule, r.alpha, r.trials
            );
            for note in &r.notes {
                let _ = writeln!(summary, "note: {note}");
            }
            serde_json::to_value(&r)?
        }
        AttackKind::Cpa => {
            let n = a.n.unwrap_or(6);
            let qubits = a.qubits.unwrap_or(2);
            let e = CpaEnumerator::new(n, qubits)?;
            let worst = e.max_over_all_messages()?;
            let extremes = e.distances(&vec![false; qubits], &vec![true; qubits])?;
            let pairs = (1u64 << qubits) * ((1u64 << qubits) - 1) / 2;
            let _ = writeln!(summary, "max trace distance over {pairs} message pairs: {worst:e}");
            json!({
                "attack": "cpa",
                "n": n,
                "N": qubits,
                "message_pairs": pairs,
                "max_trace_distance": worst,
                "zeros_vs_ones": extremes,
                "theory": 0.0,
                "satisfied": worst < 1e-12,
            })
        }
        AttackKind::Cca => {
            let n = a.n.unwrap_or(8);
            let qubits = a.qubits.unwrap_or(4);
            let cap = a.k.unwrap_or(4);
            let mut rng = seeded(seed);
            let key = generate_private_key(
                &KeyGenParams {
                    precision: Precision::Fixed(n),
                    qubits,
                    permute: false,
                },
                &mut rng,
            )?;
            let mut oracle = DecryptionOracle::new(key, cap);
            let program = (0..=cap).map(|_| Submission::AllZero).collect();
            let s = chosen_ciphertext_session(&mut oracle, program, &mut rng)?;
            let _ = writeln!(
                summary,
                "uses={} rejected={} deactivated={} outcome_bits={} holevo_ceiling={}",
                s.accounting.uses,
                s.rejected,
                s.deactivated,
                s.accounting.outcome_bits_received,
                s.accounting.holevo_ceiling_bits
            );
            let mut v = serde_json::to_value(&s)?;
            v["attack"] = "cca".into();
            v["n"] = n.into();
            v["N"] = qubits.into();
            v["k"] = cap.into();
            v
        }
    };
    let ext = if a.csv { "csv" } else { "json" };
    let path = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("attack-{}.{ext}", a.attack.name())));
    let mut manifest = RunManifest::new("attack", params_of(a)?, seed);
    let rows = [body.clone()];
    emit(&mut manifest, &path, &body, a.csv.then_some(&rows[..]))?;
    let _ = writeln!(summary, "report: {}", path.display());
    Ok(summary)
}

pub(crate) fn parse_strategy(spec: &str) -> Result<MeasurementStrategy, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "bad strategy {spec:?} (expected z, fixed:<phi>, random:<angles>, unsharp:<eta>)"
        ))
    };
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match kind {
        "z" if arg.is_empty() => MeasurementStrategy::FixedBasis { phi: 0.0 },
        "fixed" => MeasurementStrategy::FixedBasis {
            phi: arg.parse().map_err(|_| bad())?,
        },
        "random" => MeasurementStrategy::RandomBasis {
            angles: arg.parse().map_err(|_| bad())?,
        },
        "unsharp" => MeasurementStrategy::Povm(Povm::unsharp_z(arg.parse().map_err(|_| bad())?)?),
        _ => return Err(bad()),
    })
}

pub fn analyze(a: &AnalyzeArgs) -> Result<String, CliError> {
    let seed = resolve_seed(a.seed);
    let p = KeyParams::new(a.n_range.low, a.n_range.high, a.qubits, a.k)?;
    let report = secrecy_condition(&p, a.threshold)?;
    let mut records = report.records();
    let mut summary = format!(
        "H(d) = {:.4} bits\nH(d') = {:.4} bits\nholevo cap = {} bits\nmargin = {:.4} (threshold {}, satisfied={})\n",
        report.h_d, report.h_d_prime, report.holevo_cap, report.margin, report.threshold, report.satisfied
    );
    let mut mi = None;
    if let Some(spec) = &a.mi_strategy {
        let strategy = parse_strategy(spec)?;
        let est = estimate_mutual_information(&strategy, a.mi_n, a.mi_copies, a.trials, &mut seeded(seed))?;
        let _ = writeln!(
            summary,
            "I = {:.5} ± {:.5} bits per qubit ({} copies, n = {}){}",
            est.bits,
            est.stderr_bits,
            est.copies,
            est.n,
            if est.undersampled { " [undersampled]" } else { "" }
        );
        records.push(est.record(spec));
        records.push(AnalysisRecord {
            quantity: "H(d|x) with estimate".into(),
            value_bits: Some(report.h_d - a.qubits as f64 * est.bits),
            stderr_bits: Some(a.qubits as f64 * est.stderr_bits),
            params: json!({ "strategy": spec, "copies": est.copies, "N": a.qubits }),
            satisfied: None,
        });
        mi = Some(est);
    }
    let body = json!({ "report": report, "records": records, "mutual_information": mi });
    let ext = if a.csv { "csv" } else { "json" };
    let path = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("analysis.{ext}")));
    let rows: Vec<Value> = records
        .iter()
        .map(serde_json::to_value)
        .collect::<Result<_, _>>()?;
    let mut manifest = RunManifest::new("analyze", params_of(a)?, seed);
    emit(&mut manifest, &path, &body, a.csv.then_some(&rows[..]))?;
    let _ = writeln!(summary, "report: {}", path.display());
    Ok(summary)
}
