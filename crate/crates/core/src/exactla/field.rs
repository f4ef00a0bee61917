use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus, 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Default prime set used for multi-prime confirmation.
pub const DEFAULT_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 1_073_741_789];

/// Smallest modulus accepted; keeps the per-trial failure bound `D/p` small.
pub const MIN_PRIME: u64 = 1 << 20;

/// Moduli must fit in 31 bits so that a product of two residues fits in 62
/// bits and the elimination kernel can accumulate lazily in `u64`.
pub const MAX_PRIME_EXCLUSIVE: u64 = 1 << 31;

/// The prime field `F_p` for a word-sized prime `2^20 < p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= MIN_PRIME {
            return Err(Error::PrimeTooSmall { p });
        }
        if p >= MAX_PRIME_EXCLUSIVE {
            return Err(Error::PrimeTooLarge { p });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime { p });
        }
        Ok(Self { p: p as u32 })
    }

    pub fn default_field() -> Self {
        Self { p: DEFAULT_PRIME as u32 }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p as u64
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        (x % self.p as u64) as u32
    }

    pub fn from_i64(&self, x: i64) -> u32 {
        let p = self.p as i64;
        (x.rem_euclid(p)) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// `2^63 mod p`, used to fold the top bit of a lazily accumulated value.
    #[inline]
    pub(crate) fn fold_constant(&self) -> u64 {
        (1u64 << 63) % self.p as u64
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.modulus()
    }
}

impl std::fmt::Display for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Trial division; moduli are below 2^31 so at most ~23k divisions.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
