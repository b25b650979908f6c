use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum_core::check_precision;

/// Default ratio standing in for "much greater than".
pub const DEFAULT_MARGIN_THRESHOLD: f64 = 100.0;

/// Key-space parameters: `n` uniform on `n_low..=n_high`, key length `N`,
/// and the number `k` of public-key copies in circulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyParams {
    pub n_low: u32,
    pub n_high: u32,
    pub qubits: u64,
    pub copies: u64,
}

impl KeyParams {
    /// `copies` may be zero (nothing issued yet).
    pub fn new(n_low: u32, n_high: u32, qubits: u64, copies: u64) -> Result<Self> {
        check_precision(n_low)?;
        check_precision(n_high)?;
        if n_low > n_high {
            return Err(Error::InvalidArgument(format!(
                "empty precision range {n_low}:{n_high}"
            )));
        }
        if qubits == 0 {
            return Err(Error::InvalidArgument("key length N must be >= 1".into()));
        }
        Ok(Self {
            n_low,
            n_high,
            qubits,
            copies,
        })
    }

    /// `|Ñ| = n_high - n_low + 1`.
    pub fn range_size(&self) -> u32 {
        self.n_high - self.n_low + 1
    }

    /// `(n_low + n_high) / 2`.
    pub fn mean_precision(&self) -> f64 {
        (self.n_low as f64 + self.n_high as f64) / 2.0
    }
}

impl Default for KeyParams {
    fn default() -> Self {
        Self {
            n_low: 32,
            n_high: 62,
            qubits: 256,
            copies: 16,
        }
    }
}

/// `H(d) = log2|Ñ| + N * (n_low + n_high) / 2`.
pub fn private_key_entropy(p: &KeyParams) -> f64 {
    key_entropy_bits(p.n_low, p.n_high, p.qubits)
}

/// Closed form behind [`private_key_entropy`], without the simulator's
/// `n <= 62` cap.
pub fn key_entropy_bits(n_low: u32, n_high: u32, qubits: u64) -> f64 {
    let range = (n_high - n_low + 1) as f64;
    range.log2() + qubits as f64 * (n_low as f64 + n_high as f64) / 2.0
}

/// `log2(N!)`.
pub fn log2_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).log2()).sum()
}

/// `H(d') = H(d) + log2(N!)` for a uniformly random permutation.
pub fn permuted_key_entropy(p: &KeyParams) -> f64 {
    private_key_entropy(p) + log2_factorial(p.qubits)
}

/// Holevo ceiling on what `k` copies of an `N`-qubit key can reveal: one bit
/// per qubit per copy.
pub fn holevo_cap(p: &KeyParams) -> f64 {
    p.qubits as f64 * p.copies as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub params: KeyParams,
    pub h_d: f64,
    pub h_d_prime: f64,
    pub holevo_cap: f64,
    /// `H(d) / (N k)`; infinite when no copies are issued.
    pub margin: f64,
    /// `H(d') / (N k)`.
    pub margin_with_permutation: f64,
    pub threshold: f64,
    pub satisfied: bool,
    /// Residual key uncertainty `H(d) - min(H(d), N k)`.
    pub h_d_given_x: f64,
}

/// Checks `log2|Ñ| + N n̄ >= threshold * N k`.
pub fn secrecy_condition(p: &KeyParams, threshold: f64) -> Result<SecrecyReport> {
    if !(threshold > 1.0 && threshold.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "margin threshold must be a finite value > 1, got {threshold}"
        )));
    }
    let h_d = private_key_entropy(p);
    let h_d_prime = permuted_key_entropy(p);
    let cap = holevo_cap(p);
    let ratio = |h: f64| if cap == 0.0 { f64::INFINITY } else { h / cap };
    let margin = ratio(h_d);
    Ok(SecrecyReport {
        params: *p,
        h_d,
        h_d_prime,
        holevo_cap: cap,
        margin,
        margin_with_permutation: ratio(h_d_prime),
        threshold,
        satisfied: margin >= threshold,
        h_d_given_x: h_d - h_d.min(cap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_precision_entropy_is_n_bits_per_qubit() {
        for nu in [1u32, 7, 48, 62] {
            for qubits in [1u64, 3, 256] {
                let p = KeyParams::new(nu, nu, qubits, 1).unwrap();
                assert_eq!(private_key_entropy(&p), (qubits * nu as u64) as f64);
            }
        }
        assert_eq!(private_key_entropy(&KeyParams::new(1, 1, 1, 1).unwrap()), 1.0);
    }

    #[test]
    fn range_entropy() {
        let p = KeyParams::new(32, 62, 1, 1).unwrap();
        assert!((private_key_entropy(&p) - (31f64.log2() + 47.0)).abs() < 1e-12);
        // the interval 32..=64 does not fit the n <= 62 cap; the formula does
        assert!(KeyParams::new(32, 64, 1, 1).is_err());
        let h = key_entropy_bits(32, 64, 1);
        assert!((h - (33f64.log2() + 48.0)).abs() < 1e-12);
        assert!((h - 53.044).abs() < 1e-3);
    }

    #[test]
    fn permutation_entropy() {
        let p1 = KeyParams::new(5, 9, 1, 1).unwrap();
        assert_eq!(permuted_key_entropy(&p1), private_key_entropy(&p1));
        let p4 = KeyParams::new(5, 9, 4, 1).unwrap();
        let diff = permuted_key_entropy(&p4) - private_key_entropy(&p4);
        assert!((diff - 24f64.log2()).abs() < 1e-12);
        assert!((diff - 4.585).abs() < 1e-3);
        let p2 = KeyParams::new(1, 1, 2, 1).unwrap();
        assert!((permuted_key_entropy(&p2) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn holevo_cap_examples() {
        assert_eq!(holevo_cap(&KeyParams::new(8, 8, 1, 1).unwrap()), 1.0);
        assert_eq!(holevo_cap(&KeyParams::new(8, 8, 256, 16).unwrap()), 4096.0);
        assert_eq!(holevo_cap(&KeyParams::new(8, 8, 256, 0).unwrap()), 0.0);
    }

    #[test]
    fn secrecy_examples() {
        let p = KeyParams::new(48, 48, 256, 16).unwrap();
        let r = secrecy_condition(&p, 2.0).unwrap();
        assert!((r.margin - 3.0).abs() < 1e-12);
        assert!(r.satisfied);
        assert_eq!(r.h_d_given_x, 12288.0 - 4096.0);

        let boundary = KeyParams::new(20, 20, 64, 20).unwrap();
        let r = secrecy_condition(&boundary, 1.0 + 1e-9).unwrap();
        assert!((r.margin - 1.0).abs() < 1e-12);
        assert!(!r.satisfied);

        let degenerate = KeyParams::new(1, 1, 1, 1).unwrap();
        let r = secrecy_condition(&degenerate, 1.5).unwrap();
        assert_eq!(r.margin, 1.0);
        assert!(!r.satisfied);

        assert!(secrecy_condition(&degenerate, 1.0).is_err());
    }

    #[test]
    fn default_params_margin() {
        let r = secrecy_condition(&KeyParams::default(), DEFAULT_MARGIN_THRESHOLD).unwrap();
        assert!((r.margin - 2.9387).abs() < 1e-3);
        assert!(!r.satisfied);
        assert!(secrecy_condition(&KeyParams::default(), 2.0).unwrap().satisfied);
    }

    #[test]
    fn zero_copies_never_leak() {
        let r = secrecy_condition(&KeyParams::new(8, 8, 4, 0).unwrap(), 100.0).unwrap();
        assert!(r.margin.is_infinite());
        assert!(r.satisfied);
        assert_eq!(r.h_d_given_x, r.h_d);
    }

    #[test]
    fn single_qubit_narrow_range_breaks_monotonicity_in_n_low() {
        // Raising n_low shrinks log2|Ñ| by up to one bit while N n̄ grows by
        // N/2, so for N = 1 the margin can drop.
        let a = secrecy_condition(&KeyParams::new(1, 2, 1, 1).unwrap(), 2.0).unwrap();
        let b = secrecy_condition(&KeyParams::new(2, 2, 1, 1).unwrap(), 2.0).unwrap();
        assert!(b.margin < a.margin);
    }
}
