//! Fixed-precision shortest conversion with a certainty check.
//!
//! The round-trip interval is scaled by a cached 128-bit power of ten so that
//! its endpoints land near `10^18` and are held as Q64.64 fixed-point values.
//! Digits are then removed from the right while some multiple of the next
//! power of ten still fits. Every product is a floor of the true value and the
//! cached power is truncated toward zero, so each scaled quantity lies in
//! `[computed, computed + 3)` units of `2^-64`. When that slack could change
//! the digit count or the rounding, the result is flagged uncertain and
//! [`shortest`] falls back to Dragon4.

use std::sync::OnceLock;

use crate::bignum::BigUint;
use crate::dragon::dragon4;
use crate::error::{Error, Result};
use crate::exact::DecimalFP;
use crate::ieee::{DecodedFloat, FloatClass};

/// A 64-bit significand with a binary exponent: `f * 2^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiyFp {
    pub f: u64,
    pub e: i32,
}

impl DiyFp {
    pub fn new(f: u64, e: i32) -> Self {
        DiyFp { f, e }
    }

    pub fn from_decoded(d: &DecodedFloat) -> Self {
        DiyFp { f: d.m, e: d.p }
    }

    /// Shifts `f` left until its top bit is set.
    pub fn normalize(self) -> Self {
        if self.f == 0 {
            return self;
        }
        let shift = self.f.leading_zeros();
        DiyFp {
            f: self.f << shift,
            e: self.e - shift as i32,
        }
    }
}

/// `10^decimal_exponent ≈ significand * 2^binary_exponent`, with the
/// significand in `[2^127, 2^128)` and truncated toward zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CachedPower {
    pub significand: u128,
    pub binary_exponent: i32,
    pub decimal_exponent: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerOfTenCache {
    entries: Vec<CachedPower>,
}

/// Smallest and largest decimal exponents a binary64 query can ask for.
pub const MIN_CACHED_EXPONENT: i32 = -292;
pub const MAX_CACHED_EXPONENT: i32 = 342;

/// Significant digits kept below the leading one when scaling.
const SCALE_DIGITS: i32 = 17;

/// Worst-case gap between a computed Q64.64 value and the true one.
const SLACK: u128 = 3;

impl PowerOfTenCache {
    pub fn entries(&self) -> &[CachedPower] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, decimal_exponent: i32) -> Option<&CachedPower> {
        let idx = decimal_exponent.checked_sub(MIN_CACHED_EXPONENT)?;
        self.entries.get(usize::try_from(idx).ok()?)
    }
}

fn cached_power(e: i32) -> CachedPower {
    let (significand, binary_exponent) = if e >= 0 {
        let pow = BigUint::pow10(e as u32);
        let bits = pow.bit_len() as i32;
        let top = if bits >= 128 {
            pow.shr((bits - 128) as u32)
        } else {
            pow.shl((128 - bits) as u32)
        };
        (top.to_u128().expect("128-bit window"), bits - 128)
    } else {
        let pow = BigUint::pow10(e.unsigned_abs());
        let bits = pow.bit_len() as i32;
        let (quot, _) = BigUint::one().shl((127 + bits) as u32).div_rem(&pow);
        (quot.to_u128().expect("128-bit quotient"), -(127 + bits))
    };
    debug_assert!(significand >> 127 == 1);
    CachedPower {
        significand,
        binary_exponent,
        decimal_exponent: e,
    }
}

/// Builds the table from exact big-integer powers.
pub fn build_cache() -> PowerOfTenCache {
    PowerOfTenCache {
        entries: (MIN_CACHED_EXPONENT..=MAX_CACHED_EXPONENT)
            .map(cached_power)
            .collect(),
    }
}

/// The process-wide table, built on first use.
pub fn global_cache() -> &'static PowerOfTenCache {
    static CACHE: OnceLock<PowerOfTenCache> = OnceLock::new();
    CACHE.get_or_init(build_cache)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastResult {
    pub decimal: DecimalFP,
    /// The decimal is provably what Dragon4 returns.
    pub certain: bool,
}

/// `floor(x * c / 2^shift)`, assuming the result fits in 128 bits.
#[inline]
fn mul_shift(x: u64, c: u128, shift: u32) -> u128 {
    let lo = x as u128 * (c as u64) as u128;
    let hi = x as u128 * (c >> 64);
    // floor(x * c / 2^64)
    let upper = hi + (lo >> 64);
    if shift >= 64 {
        upper >> (shift - 64)
    } else {
        (upper << (64 - shift)) | ((lo as u64) >> shift) as u128
    }
}

#[inline]
fn ceil_int(q: u128) -> u64 {
    ((q >> 64) + (q as u64 != 0) as u128) as u64
}

#[inline]
fn floor_int(q: u128) -> u64 {
    (q >> 64) as u64
}

/// `floor(log10(2^e))` for the exponents that occur here.
#[inline]
fn floor_log10_pow2(e: i32) -> i32 {
    (e * 78_913) >> 18
}

/// Shortest-candidate search against the given table.
pub fn fast_shortest(d: &DecodedFloat, cache: &PowerOfTenCache) -> Result<FastResult> {
    if !matches!(d.class, FloatClass::Normal | FloatClass::Subnormal) {
        return Err(Error::NoInterval(d.class));
    }
    let v = DiyFp::from_decoded(d);
    let (lower, mid, upper) = if d.has_asymmetric_boundary() {
        (4 * v.f - 1, 4 * v.f, 4 * v.f + 2)
    } else {
        (4 * v.f - 2, 4 * v.f, 4 * v.f + 2)
    };
    let top_bit = v.e + 63 - v.f.leading_zeros() as i32;
    let k = floor_log10_pow2(top_bit) - SCALE_DIGITS;
    let power = cache.get(-k).ok_or(Error::NoInterval(d.class))?;
    let shift = (-(power.binary_exponent + v.e - 2 + 64)) as u32;
    let c = power.significand;

    let lo_q = mul_shift(lower, c, shift);
    let v_q = mul_shift(mid, c, shift);
    let hi_q = mul_shift(upper, c, shift);

    // integer ranges that are surely inside / possibly inside the interval
    let mut safe = (ceil_int(lo_q + SLACK), floor_int(hi_q - 1));
    let mut outer = (ceil_int(lo_q), floor_int(hi_q + SLACK - 1));
    let mut vi = floor_int(v_q);
    let v_frac = v_q as u64;
    let mut removed = 0u64;
    let mut scale = 1u64;
    let mut j = 0i32;

    while outer.0.div_ceil(10) <= outer.1 / 10 {
        outer = (outer.0.div_ceil(10), outer.1 / 10);
        safe = (safe.0.div_ceil(10), safe.1 / 10);
        let digit = vi % 10;
        removed += digit * scale;
        vi /= 10;
        scale *= 10;
        j += 1;
    }

    // the slack could also carry into the integer part of v
    let mut certain = safe == outer && safe.0 <= safe.1 && v_frac as u128 + SLACK <= 1u128 << 64;
    let t = if vi < outer.0 {
        outer.0
    } else if vi >= outer.1 {
        outer.1
    } else {
        let round_up = if j == 0 {
            if v_frac as u128 + SLACK <= 1u128 << 63 {
                false
            } else if v_frac > 1 << 63 {
                true
            } else {
                certain = false;
                v_frac >= 1 << 63
            }
        } else {
            let half = scale / 2;
            if removed < half {
                false
            } else if removed > half || v_frac != 0 {
                true
            } else {
                // an exact tie cannot be told apart from a value just above it
                certain = false;
                vi & 1 == 1
            }
        };
        vi + round_up as u64
    };
    let decimal = DecimalFP::from_u64(d.sign, t, k + j).canonicalize();
    Ok(FastResult { decimal, certain })
}

/// Shortest correctly rounded decimal; identical to Dragon4 on every input.
pub fn shortest(d: &DecodedFloat) -> Result<DecimalFP> {
    shortest_with_fallback(d).map(|(dec, _)| dec)
}

/// As [`shortest`], also reporting whether Dragon4 had to be consulted.
pub fn shortest_with_fallback(d: &DecodedFloat) -> Result<(DecimalFP, bool)> {
    match d.class {
        FloatClass::Zero => Ok((DecimalFP::zero(d.sign), false)),
        FloatClass::Infinity | FloatClass::NaN => Err(Error::NotFinite(d.class)),
        _ => {
            let fast = fast_shortest(d, global_cache())?;
            if fast.certain {
                Ok((fast.decimal, false))
            } else {
                Ok((dragon4(d)?, true))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ieee::{decode, FloatFormat, Sign};
    use proptest::prelude::*;

    fn wq(dec: &DecimalFP) -> (u64, i32) {
        (dec.w.to_u64().unwrap(), dec.q)
    }

    #[test]
    fn identity_and_ten_entries() {
        let cache = build_cache();
        let one = cache.get(0).unwrap();
        assert_eq!((one.significand, one.binary_exponent), (1u128 << 127, -127));
        let ten = cache.get(1).unwrap();
        assert_eq!((ten.significand, ten.binary_exponent), (5u128 << 125, -124));
        assert_eq!(cache.len(), (MAX_CACHED_EXPONENT - MIN_CACHED_EXPONENT + 1) as usize);
    }

    #[test]
    fn entries_are_truncations() {
        // 10^e vs significand * 2^b, exactly: the error is below one unit
        let cache = build_cache();
        for e in [-292, -100, -22, -1, 27, 28, 60, 342] {
            let p = cache.get(e).unwrap();
            let sig = BigUint::from_u128(p.significand);
            let mut pow = BigUint::one();
            let mut lhs = sig.clone();
            let mut lhs1 = sig.add(&BigUint::one());
            // compare sig * 2^b <= 10^e < (sig+1) * 2^b, clearing denominators
            if e >= 0 { pow.mul_pow10_assign(e as u32) } else {
                lhs.mul_pow10_assign((-e) as u32);
                lhs1.mul_pow10_assign((-e) as u32);
            }
            if p.binary_exponent >= 0 {
                lhs.shl_assign(p.binary_exponent as u32);
                lhs1.shl_assign(p.binary_exponent as u32);
            } else {
                pow.shl_assign((-p.binary_exponent) as u32);
            }
            assert!(lhs <= pow && pow < lhs1, "entry {e}");
        }
    }

    #[test]
    fn cache_is_deterministic() {
        assert_eq!(build_cache(), build_cache());
        assert_eq!(&build_cache(), global_cache());
    }

    #[test]
    fn pi32_certain() {
        let d = decode(0x4049_0FDB, FloatFormat::BINARY32);
        let r = fast_shortest(&d, global_cache()).unwrap();
        assert!(r.certain);
        assert_eq!(wq(&r.decimal), (31_415_927, -7));
        assert_eq!(r.decimal, dragon4(&d).unwrap());
    }

    #[test]
    fn one_certain() {
        let r = fast_shortest(&DecodedFloat::from_f64(1.0), global_cache()).unwrap();
        assert!(r.certain);
        assert_eq!(wq(&r.decimal), (1, 0));
    }

    #[test]
    fn halfway_binary32() {
        let d = DecodedFloat::from_f32(2_150_000_128.0);
        assert_eq!(wq(&shortest(&d).unwrap()), (215, 7));
    }

    #[test]
    fn min_subnormal_and_extremes() {
        let d = decode(1, FloatFormat::BINARY64);
        assert_eq!(wq(&shortest(&d).unwrap()), (5, -324));
        for v in [f64::MAX, f64::MIN_POSITIVE, 1e-300, 1e300, 0.1, 123456789.0] {
            let d = DecodedFloat::from_f64(v);
            assert_eq!(shortest(&d).unwrap(), dragon4(&d).unwrap(), "{v}");
        }
    }

    #[test]
    fn signed_zero_and_specials() {
        let z = shortest(&DecodedFloat::from_f64(-0.0)).unwrap();
        assert_eq!((z.sign, z.is_zero(), z.q), (Sign::Negative, true, 0));
        assert!(shortest(&DecodedFloat::from_f64(f64::NAN)).is_err());
        assert!(fast_shortest(&DecodedFloat::from_f64(0.0), global_cache()).is_err());
    }

    #[test]
    fn diyfp_normalize() {
        let n = DiyFp::new(1, 0).normalize();
        assert_eq!((n.f, n.e), (1 << 63, -63));
    }

    proptest! {
        #[test]
        fn matches_dragon4_binary64(b in any::<u64>()) {
            let d = decode(b, FloatFormat::BINARY64);
            prop_assume!(d.is_finite() && !d.is_zero());
            let fast = fast_shortest(&d, global_cache()).unwrap();
            let reference = dragon4(&d).unwrap();
            if fast.certain {
                prop_assert_eq!(&fast.decimal, &reference);
            }
            prop_assert_eq!(shortest(&d).unwrap(), reference);
        }

        #[test]
        fn matches_dragon4_binary32(b in any::<u32>()) {
            let d = decode(b as u64, FloatFormat::BINARY32);
            prop_assume!(d.is_finite() && !d.is_zero());
            let fast = fast_shortest(&d, global_cache()).unwrap();
            let reference = dragon4(&d).unwrap();
            if fast.certain {
                prop_assert_eq!(&fast.decimal, &reference);
            }
            prop_assert_eq!(shortest(&d).unwrap(), reference);
        }
    }
}
