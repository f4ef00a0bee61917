use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of `e = ⌊2^n/(n+1)⌋` and `e* = ⌈2^n/(n+1)⌉` is being used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "e")]
    Floor,
    #[serde(rename = "e*")]
    Ceil,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Floor => "e",
            Branch::Ceil => "e*",
        }
    }
}

/// Arithmetic attached to `n`: `n = 4q + r`, `2^n = (n+1)h + k`, `e`, `e*`
/// and their halves `t`, `t*` when odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterProfile {
    pub n: u32,
    pub q: u32,
    pub r: u32,
    pub two_n: BigInt,
    pub e: BigInt,
    pub e_star: BigInt,
    /// `e = 2t + 1`, when `e` is odd.
    pub t: Option<BigInt>,
    /// `e* = 2t* + 1`, when `e*` is odd.
    pub t_star: Option<BigInt>,
    pub h: BigInt,
    /// `0 ≤ k ≤ n`; `k = 0` exactly when `n + 1` divides `2^n`, and then
    /// neither `e` nor `e*` is odd.
    pub k: BigInt,
    /// The odd member of `{e, e*}`, if any.
    pub s: Option<BigInt>,
}

pub(crate) fn big(x: impl Into<BigInt>) -> BigInt {
    x.into()
}

pub(crate) fn pow2(n: u32) -> BigInt {
    BigInt::one() << n as usize
}

/// `⌊a / b⌋` for `b > 0`.
pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let q = a / b;
    if (a % b).is_negative() {
        q - 1
    } else {
        q
    }
}

pub(crate) fn is_even(x: &BigInt) -> bool {
    (x % 2u32).is_zero()
}

/// Rounds up to the next even integer.
pub(crate) fn even_up(x: &BigInt) -> BigInt {
    if is_even(x) {
        x.clone()
    } else {
        x + 1
    }
}

impl ParameterProfile {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let two_n = pow2(n);
        let n1 = big(n + 1);
        let h = &two_n / &n1;
        let k = &two_n % &n1;
        let e = h.clone();
        let e_star = if k.is_zero() { e.clone() } else { &e + 1 };
        let half = |x: &BigInt| if is_even(x) { None } else { Some((x - 1) / 2) };
        let t = half(&e);
        let t_star = half(&e_star);
        let s = if t.is_some() {
            Some(e.clone())
        } else if t_star.is_some() {
            Some(e_star.clone())
        } else {
            None
        };
        Ok(Self { n, q: n / 4, r: n % 4, two_n, e, e_star, t, t_star, h, k, s })
    }

    /// The branch whose member of `{e, e*}` is odd.
    pub fn odd_branch(&self) -> Option<Branch> {
        if self.t.is_some() {
            Some(Branch::Floor)
        } else if self.t_star.is_some() {
            Some(Branch::Ceil)
        } else {
            None
        }
    }

    pub fn s_of(&self, branch: Branch) -> &BigInt {
        match branch {
            Branch::Floor => &self.e,
            Branch::Ceil => &self.e_star,
        }
    }

    /// `(s - 1)/2` for the given branch; `None` if that member is even.
    pub fn half_of(&self, branch: Branch) -> Option<&BigInt> {
        match branch {
            Branch::Floor => self.t.as_ref(),
            Branch::Ceil => self.t_star.as_ref(),
        }
    }

    /// The defining identities, checked exactly.
    pub fn identities_hold(&self) -> bool {
        let n1 = big(self.n + 1);
        let ok_split = self.n == 4 * self.q + self.r && self.r < 4;
        let ok_hk = &n1 * &self.h + &self.k == self.two_n && !self.k.is_negative() && self.k <= big(self.n);
        let ok_e = &self.e * &n1 <= self.two_n && (&self.e + 1) * &n1 > self.two_n;
        let ok_es = &self.e_star * &n1 >= self.two_n && (&self.e_star - 1) * &n1 < self.two_n;
        let ok_t = self.t.as_ref().is_none_or(|t| t * 2 + 1 == self.e);
        let ok_ts = self.t_star.as_ref().is_none_or(|t| t * 2 + 1 == self.e_star);
        ok_split && ok_hk && ok_e && ok_es && ok_t && ok_ts
    }
}

/// Lossless conversion for values known to be small.
pub(crate) fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("value fits in i64")
}
