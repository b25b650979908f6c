use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::register::QuantumRegister;
use crate::error::{Error, Result};
use crate::quantum_core::{check_precision, AngleIndex, MAX_PRECISION};

/// Below this precision the key is considered too coarse for real use.
pub const RECOMMENDED_MIN_PRECISION: u32 = 32;

const KEY_FILE_VERSION: u32 = 1;

/// SHA-256 of the owner's canonical key encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fingerprint([u8; 32]);

impl Fingerprint {
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({})", &self.to_hex()[..16])
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Identifier of a key pair: the first 16 hex digits of its fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeyId(String);

impl KeyId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for KeyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for KeyId {
    fn from(s: &str) -> Self {
        KeyId(s.to_owned())
    }
}

/// Proof of ownership of a key pair. Only obtainable from the
/// [`PrivateKey`] itself.
#[derive(Clone, PartialEq, Eq)]
pub struct OwnerCredential {
    fingerprint: Fingerprint,
}

impl OwnerCredential {
    pub(super) fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }
}

impl fmt::Debug for OwnerCredential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("OwnerCredential(..)")
    }
}

/// Classical private key `{n, s, perm}`.
///
/// `perm[i]` is the public-key position that carries `s[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    n: u32,
    s: Vec<u64>,
    perm: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct KeyFile {
    version: u32,
    n: u32,
    s: Vec<String>,
    perm: Option<Vec<usize>>,
}

impl PrivateKey {
    pub fn new(n: u32, s: Vec<u64>, perm: Option<Vec<usize>>) -> Result<Self> {
        check_precision(n)?;
        if s.is_empty() {
            return Err(Error::InvalidArgument("key length N must be >= 1".into()));
        }
        let modulus = 1u64 << n;
        if let Some(bad) = s.iter().find(|&&v| v >= modulus) {
            return Err(Error::InvalidArgument(format!(
                "key element {bad} not below 2^{n}"
            )));
        }
        if let Some(p) = &perm {
            if !is_permutation(p, s.len()) {
                return Err(Error::InvalidArgument(
                    "perm is not a bijection on 0..N".into(),
                ));
            }
        }
        Ok(Self { n, s, perm })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Key length `N`.
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s(&self) -> &[u64] {
        &self.s
    }

    pub fn perm(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    /// Rotation index carried by each public-key position, in register order.
    pub fn public_indices(&self) -> Vec<AngleIndex> {
        let mut out = vec![AngleIndex::zero(self.n).expect("n validated"); self.s.len()];
        for (i, &v) in self.s.iter().enumerate() {
            let pos = self.perm.as_ref().map_or(i, |p| p[i]);
            out[pos] = AngleIndex::new(v, self.n).expect("n validated");
        }
        out
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let bytes = self.to_json().expect("key encodes");
        Fingerprint(Sha256::digest(bytes.as_bytes()).into())
    }

    pub fn key_id(&self) -> KeyId {
        KeyId(self.fingerprint().to_hex()[..16].to_owned())
    }

    pub fn credential(&self) -> OwnerCredential {
        OwnerCredential {
            fingerprint: self.fingerprint(),
        }
    }

    /// Prepares a fresh copy of the public-key register. The owner knows the
    /// classical description, so this does not clone an unknown state.
    pub fn prepare_public_register(&self) -> QuantumRegister {
        QuantumRegister::prepared(self.public_indices(), self.fingerprint())
    }

    /// `{"version":1,"n":..,"s":["..",..],"perm":null|[..]}`; `s` entries are
    /// decimal strings.
    pub fn to_json(&self) -> Result<String> {
        let file = KeyFile {
            version: KEY_FILE_VERSION,
            n: self.n,
            s: self.s.iter().map(u64::to_string).collect(),
            perm: self.perm.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: KeyFile = serde_json::from_str(text)?;
        if file.version != KEY_FILE_VERSION {
            return Err(Error::Serialization(format!(
                "unsupported key file version {}",
                file.version
            )));
        }
        let s = file
            .s
            .iter()
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|e| Error::Serialization(format!("bad key element {v:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, s, file.perm)
    }
}

fn is_permutation(p: &[usize], len: usize) -> bool {
    if p.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    for &v in p {
        if v >= len || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// How the precision parameter `n` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Fixed(u32),
    /// Uniform over `low..=high`.
    Range { low: u32, high: u32 },
}

impl Precision {
    fn validate(&self) -> Result<()> {
        match *self {
            Precision::Fixed(n) => check_precision(n),
            Precision::Range { low, high } => {
                check_precision(low)?;
                check_precision(high)?;
                if low > high {
                    return Err(Error::InvalidArgument(format!(
                        "empty precision range {low}:{high}"
                    )));
                }
                Ok(())
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        match *self {
            Precision::Fixed(n) => n,
            Precision::Range { low, high } => rng.random_range(low..=high),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyGenParams {
    pub precision: Precision,
    /// Key length `N`.
    pub qubits: usize,
    pub permute: bool,
}

impl Default for KeyGenParams {
    fn default() -> Self {
        Self {
            precision: Precision::Range {
                low: RECOMMENDED_MIN_PRECISION,
                high: MAX_PRECISION,
            },
            qubits: 256,
            permute: false,
        }
    }
}

/// Draws a private key: `n` per `params.precision`, each `s_j` uniform on
/// `Z_{2^n}`, and a uniform permutation when `params.permute` is set.
pub fn generate_private_key<R: Rng + ?Sized>(
    params: &KeyGenParams,
    rng: &mut R,
) -> Result<PrivateKey> {
    params.precision.validate()?;
    if params.qubits == 0 {
        return Err(Error::InvalidArgument("key length N must be >= 1".into()));
    }
    let n = params.precision.sample(rng);
    if n < RECOMMENDED_MIN_PRECISION {
        log::warn!("precision n = {n} is small; the trapdoor needs n >> 1");
    }
    let mask = (1u64 << n) - 1;
    let s = (0..params.qubits).map(|_| rng.random::<u64>() & mask).collect();
    let perm = params.permute.then(|| {
        let mut p: Vec<usize> = (0..params.qubits).collect();
        p.shuffle(rng);
        p
    });
    PrivateKey::new(n, s, perm)
}
