//! The attack code must never see a register's description.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qpke::attacks::{run_forward_search, AttackConfig, DecisionRule};
use qpke::protocol::{describe_register, keygen, KeyGenParams};
use qpke::Error;

/// Owner-only entry points of the protocol module.
const OWNER_ONLY: [&str; 6] = [
    "describe_register",
    "export_public_key",
    "import_public_key",
    "credential",
    "descriptors",
    "public_indices",
];

/// Source of `path` with its `#[cfg(test)]` module removed.
fn non_test_source(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    match text.find("#[cfg(test)]") {
        Some(i) => text[..i].to_owned(),
        None => text,
    }
}

#[test]
fn attack_sources_do_not_reference_owner_api() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("src/attacks");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let src = non_test_source(&path);
        for name in OWNER_ONLY {
            assert!(!src.contains(name), "{} references {name}", path.display());
        }
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn foreign_credentials_cannot_describe() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (_, pk) = keygen(&KeyGenParams::default(), &mut rng).unwrap();
    let (eve, _) = keygen(&KeyGenParams::default(), &mut rng).unwrap();
    assert_eq!(describe_register(pk.register(), &eve.credential()), Err(Error::AccessDenied));
}

#[test]
fn attack_runs_without_owner_access() {
    // the runner works on issued copies only; it succeeds without any
    // credential being passed in
    let r = run_forward_search(&AttackConfig::forward_search(1, DecisionRule::IdentifyAll, 500, 3))
        .unwrap();
    assert!(r.success_rate > 0.5);
}
