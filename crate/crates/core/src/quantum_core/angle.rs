use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported precision parameter. Indices live in `u64`.
pub const MAX_PRECISION: u32 = 62;

/// Exact rotation angle `s * theta_n` with `theta_n = pi / 2^(n-1)`.
///
/// The index is always reduced modulo `2^n`, so `2^n` steps make a full
/// `2*pi` turn and `2^(n-1)` steps make a half turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngleIndex {
    s: u64,
    n: u32,
}

impl AngleIndex {
    /// Builds an index, reducing `s` modulo `2^n`.
    pub fn new(s: u64, n: u32) -> Result<Self> {
        check_precision(n)?;
        Ok(Self {
            s: s & modulus_mask(n),
            n,
        })
    }

    pub fn zero(n: u32) -> Result<Self> {
        Self::new(0, n)
    }

    /// The half-turn `pi`, i.e. `2^(n-1)` steps.
    pub fn half_turn(n: u32) -> Result<Self> {
        check_precision(n)?;
        Ok(Self { s: 1 << (n - 1), n })
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of distinct indices, `2^n`.
    pub fn modulus(&self) -> u64 {
        1u64 << self.n
    }

    /// Rotation angle `s * theta_n` in radians, in `[0, 2*pi)`.
    pub fn radians(&self) -> f64 {
        2.0 * PI * (self.s as f64) / (self.modulus() as f64)
    }

    /// Composition of two rotations about the same axis.
    pub fn add(self, other: AngleIndex) -> Result<AngleIndex> {
        self.same_precision(&other)?;
        Ok(Self {
            s: self.s.wrapping_add(other.s) & modulus_mask(self.n),
            n: self.n,
        })
    }

    pub fn sub(self, other: AngleIndex) -> Result<AngleIndex> {
        self.same_precision(&other)?;
        Ok(Self {
            s: self.s.wrapping_sub(other.s) & modulus_mask(self.n),
            n: self.n,
        })
    }

    /// Inverse rotation: `2^n - s mod 2^n`.
    pub fn inverse(self) -> AngleIndex {
        Self {
            s: self.s.wrapping_neg() & modulus_mask(self.n),
            n: self.n,
        }
    }

    /// Shifts by a half turn, the effect of `R(pi)`.
    pub fn flipped(self) -> AngleIndex {
        Self {
            s: (self.s ^ (1 << (self.n - 1))) & modulus_mask(self.n),
            n: self.n,
        }
    }

    /// `(cos(s*theta_n/2), sin(s*theta_n/2))`, exact at multiples of `pi/4`.
    pub fn half_angle_cos_sin(&self) -> (f64, f64) {
        cos_sin_pi_fraction(self.s, self.n)
    }

    fn same_precision(&self, other: &AngleIndex) -> Result<()> {
        if self.n != other.n {
            return Err(Error::PrecisionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for AngleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*pi/2^{}", self.s, self.n - 1)
    }
}

/// Free-function form of [`AngleIndex::add`].
pub fn index_add(a: AngleIndex, b: AngleIndex) -> Result<AngleIndex> {
    a.add(b)
}

pub(crate) fn check_precision(n: u32) -> Result<()> {
    if n == 0 || n > MAX_PRECISION {
        return Err(Error::PrecisionOutOfRange(n));
    }
    Ok(())
}

fn modulus_mask(n: u32) -> u64 {
    (1u64 << n) - 1
}

/// `(cos(pi*s/2^n), sin(pi*s/2^n))` for `0 <= s < 2^n`.
///
/// The argument is folded into `[0, pi/4]` with integer arithmetic before
/// any float rounding, so the quarter points come out exactly.
fn cos_sin_pi_fraction(s: u64, n: u32) -> (f64, f64) {
    let full = 1u64 << n;
    debug_assert!(s < full);
    let eval = |num: u64| {
        let x = PI * (num as f64) / (full as f64);
        (x.cos(), x.sin())
    };
    // pi - x: cos flips sign, sin unchanged
    let (s, cos_sign) = if 2 * s > full { (full - s, -1.0) } else { (s, 1.0) };
    if 2 * s == full {
        return (0.0, 1.0);
    }
    if 4 * s == full {
        return (cos_sign * FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    }
    // now x in [0, pi/2); fold around pi/4
    let (c, sn) = if 4 * s > full {
        let (c, sn) = eval(full / 2 - s);
        (sn, c)
    } else {
        eval(s)
    };
    (cos_sign * c, sn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_modulo() {
        let a = AngleIndex::new(19, 4).unwrap();
        assert_eq!(a.s(), 3);
    }

    #[test]
    fn rejects_bad_precision() {
        assert_eq!(AngleIndex::new(0, 0), Err(Error::PrecisionOutOfRange(0)));
        assert_eq!(AngleIndex::new(0, 63), Err(Error::PrecisionOutOfRange(63)));
        assert!(AngleIndex::new(u64::MAX, 62).is_ok());
    }

    #[test]
    fn addition_examples() {
        let a = AngleIndex::new(3, 4).unwrap();
        let z = AngleIndex::new(0, 4).unwrap();
        assert_eq!(index_add(a, z).unwrap(), a);

        let b = AngleIndex::new(12, 4).unwrap();
        let c = AngleIndex::new(7, 4).unwrap();
        assert_eq!(index_add(b, c).unwrap().s(), 3);

        for s in 0..16 {
            let x = AngleIndex::new(s, 4).unwrap();
            let inv = AngleIndex::new(16 - s, 4).unwrap();
            assert_eq!(index_add(x, inv).unwrap().s(), 0);
            assert_eq!(x.inverse(), inv);
        }
    }

    #[test]
    fn mismatched_precision_is_an_error() {
        let a = AngleIndex::new(1, 4).unwrap();
        let b = AngleIndex::new(1, 5).unwrap();
        assert_eq!(
            a.add(b),
            Err(Error::PrecisionMismatch { left: 4, right: 5 })
        );
    }

    #[test]
    fn flip_is_half_turn() {
        for n in 1..=MAX_PRECISION {
            let a = AngleIndex::new(12345, n).unwrap();
            assert_eq!(a.flipped(), a.add(AngleIndex::half_turn(n).unwrap()).unwrap());
            assert_eq!(a.flipped().flipped(), a);
        }
    }

    #[test]
    fn quarter_points_are_exact() {
        // s/2^n = 1/2 -> (0, 1); s/2^n = 1/4 -> (sqrt2/2, sqrt2/2)
        assert_eq!(cos_sin_pi_fraction(4, 3), (0.0, 1.0));
        assert_eq!(cos_sin_pi_fraction(0, 3), (1.0, 0.0));
        let (c, s) = cos_sin_pi_fraction(1, 2);
        assert!((c - s).abs() < 1e-16);
        let (c, s) = cos_sin_pi_fraction(6, 3);
        assert!((c + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn folded_trig_matches_direct() {
        for n in 1..=10u32 {
            for s in 0..(1u64 << n) {
                let x = PI * s as f64 / (1u64 << n) as f64;
                let (c, sn) = cos_sin_pi_fraction(s, n);
                assert!((c - x.cos()).abs() < 1e-14, "n={n} s={s}");
                assert!((sn - x.sin()).abs() < 1e-14, "n={n} s={s}");
            }
        }
    }
}
