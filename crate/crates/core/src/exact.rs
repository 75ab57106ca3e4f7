//! Exact binary-to-decimal conversion and significant-digit accounting.

use std::fmt;

use crate::bignum::BigUint;
use crate::error::{Error, Result};
use crate::ieee::{DecodedFloat, Sign};

/// A decimal `(-1)^sign * w * 10^q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecimalFP {
    pub sign: Sign,
    pub w: BigUint,
    pub q: i32,
}

impl DecimalFP {
    pub fn new(sign: Sign, w: BigUint, q: i32) -> Self {
        DecimalFP { sign, w, q }
    }

    pub fn from_u64(sign: Sign, w: u64, q: i32) -> Self {
        DecimalFP {
            sign,
            w: BigUint::from_u64(w),
            q,
        }
    }

    pub fn zero(sign: Sign) -> Self {
        DecimalFP {
            sign,
            w: BigUint::zero(),
            q: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero()
    }

    /// True when `w` has no factor of ten (and zero sits at `q = 0`).
    pub fn is_canonical(&self) -> bool {
        if self.w.is_zero() {
            return self.q == 0;
        }
        self.w.divmod_small(10).1 != 0
    }

    /// Strips factors of ten from `w` into `q`.
    pub fn canonicalize(mut self) -> Self {
        if self.w.is_zero() {
            self.q = 0;
            return self;
        }
        if let Some(mut w) = self.w.to_u64() {
            while w % 10 == 0 {
                w /= 10;
                self.q += 1;
            }
            self.w = BigUint::from_u64(w);
            return self;
        }
        loop {
            let (quot, rem) = self.w.divmod_small(10);
            if rem != 0 {
                return self;
            }
            self.w = quot;
            self.q += 1;
        }
    }

    /// Significand as `u64` when it fits.
    pub fn w_u64(&self) -> Option<u64> {
        self.w.to_u64()
    }
}

impl fmt::Display for DecimalFP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign.is_negative() { "-" } else { "" };
        write!(f, "{s}{}e{}", self.w, self.q)
    }
}

/// The exact decimal value of a finite float, canonicalized.
pub fn to_exact_decimal(d: &DecodedFloat) -> Result<DecimalFP> {
    if !d.is_finite() {
        return Err(Error::NotFinite(d.class));
    }
    if d.m == 0 {
        return Ok(DecimalFP::zero(d.sign));
    }
    let dec = if d.p >= 0 {
        DecimalFP::new(d.sign, BigUint::from_u64(d.m).shl(d.p as u32), 0)
    } else {
        // 2^p = 10^p / 5^p
        DecimalFP::new(d.sign, BigUint::from_u64(d.m).mul_pow5((-d.p) as u32), d.p)
    };
    Ok(dec.canonicalize())
}

/// Significant digits of `w` once trailing zeros are removed; zero counts as one.
pub fn significant_digits(dec: &DecimalFP) -> u32 {
    if dec.w.is_zero() {
        return 1;
    }
    if let Some(mut w) = dec.w.to_u64() {
        while w % 10 == 0 {
            w /= 10;
        }
        return decimal_len_u64(w);
    }
    dec.clone().canonicalize().w.decimal_len()
}

pub(crate) fn decimal_len_u64(w: u64) -> u32 {
    if w == 0 {
        1
    } else {
        w.ilog10() + 1
    }
}
