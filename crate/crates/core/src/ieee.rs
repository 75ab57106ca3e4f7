//! IEEE 754 binary32/binary64 decoding, encoding and round-trip intervals.

use std::cmp::Ordering;
use std::fmt;

use crate::bignum::BigUint;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Width {
    Binary32,
    Binary64,
}

/// Layout parameters of a binary interchange format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FloatFormat {
    pub width: Width,
    pub exponent_bits: u32,
    pub stored_significand_bits: u32,
    /// Decimal digits that always suffice to identify a value.
    pub max_exact_digits: u32,
    /// Smallest normal exponent in `1.f * 2^e` scaling.
    pub min_exponent: i32,
}

impl FloatFormat {
    pub const BINARY32: FloatFormat = FloatFormat {
        width: Width::Binary32,
        exponent_bits: 8,
        stored_significand_bits: 23,
        max_exact_digits: 9,
        min_exponent: -126,
    };

    pub const BINARY64: FloatFormat = FloatFormat {
        width: Width::Binary64,
        exponent_bits: 11,
        stored_significand_bits: 52,
        max_exact_digits: 17,
        min_exponent: -1022,
    };

    pub fn of(width: Width) -> FloatFormat {
        match width {
            Width::Binary32 => FloatFormat::BINARY32,
            Width::Binary64 => FloatFormat::BINARY64,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.width {
            Width::Binary32 => "binary32",
            Width::Binary64 => "binary64",
        }
    }

    /// Total encoding width in bits.
    pub fn total_bits(&self) -> u32 {
        1 + self.exponent_bits + self.stored_significand_bits
    }

    /// Significand precision including the implicit bit.
    pub fn precision(&self) -> u32 {
        self.stored_significand_bits + 1
    }

    /// Exponent of integral significands for subnormals and the smallest normals.
    pub fn min_p(&self) -> i32 {
        self.min_exponent - self.stored_significand_bits as i32
    }

    /// Exponent of integral significands for the largest normals.
    pub fn max_p(&self) -> i32 {
        -self.min_exponent + 1 - self.stored_significand_bits as i32
    }

    fn exponent_mask(&self) -> u64 {
        (1u64 << self.exponent_bits) - 1
    }

    fn fraction_mask(&self) -> u64 {
        (1u64 << self.stored_significand_bits) - 1
    }

    pub fn sign_mask(&self) -> u64 {
        1u64 << (self.total_bits() - 1)
    }

    fn hidden_bit(&self) -> u64 {
        1u64 << self.stored_significand_bits
    }

    pub fn infinity_bits(&self) -> u64 {
        self.exponent_mask() << self.stored_significand_bits
    }

    /// Largest finite bit pattern (positive).
    pub fn max_finite_bits(&self) -> u64 {
        self.infinity_bits() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloatClass {
    Zero,
    Subnormal,
    Normal,
    Infinity,
    NaN,
}

/// A float as `(-1)^sign * m * 2^p` with an integral significand.
///
/// Subnormals share the representation: no implicit bit and `p` pinned to the
/// format minimum. Zeros carry `m = 0`; infinities and NaNs carry `m = 0, p = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecodedFloat {
    pub sign: Sign,
    pub m: u64,
    pub p: i32,
    pub class: FloatClass,
    pub format: FloatFormat,
}

impl DecodedFloat {
    pub fn is_finite(&self) -> bool {
        !matches!(self.class, FloatClass::Infinity | FloatClass::NaN)
    }

    pub fn is_zero(&self) -> bool {
        self.class == FloatClass::Zero
    }

    /// The significand is the smallest of its binade, so the gap below is half the gap above.
    pub fn has_asymmetric_boundary(&self) -> bool {
        self.class == FloatClass::Normal
            && self.m == self.format.hidden_bit()
            && self.p > self.format.min_p()
    }

    /// Decodes the bits of a native `f64`.
    pub fn from_f64(v: f64) -> DecodedFloat {
        decode(v.to_bits(), FloatFormat::BINARY64)
    }

    pub fn from_f32(v: f32) -> DecodedFloat {
        decode(v.to_bits() as u64, FloatFormat::BINARY32)
    }
}

pub fn decode(bits: u64, format: FloatFormat) -> DecodedFloat {
    debug_assert!(
        format.total_bits() == 64 || bits >> format.total_bits() == 0,
        "bit pattern wider than {}",
        format.name()
    );
    let sign = if bits & format.sign_mask() != 0 {
        Sign::Negative
    } else {
        Sign::Positive
    };
    let fraction = bits & format.fraction_mask();
    let biased = (bits >> format.stored_significand_bits) & format.exponent_mask();
    let (m, p, class) = if biased == format.exponent_mask() {
        let class = if fraction == 0 {
            FloatClass::Infinity
        } else {
            FloatClass::NaN
        };
        (0, 0, class)
    } else if biased == 0 {
        let class = if fraction == 0 {
            FloatClass::Zero
        } else {
            FloatClass::Subnormal
        };
        (fraction, format.min_p(), class)
    } else {
        (
            fraction | format.hidden_bit(),
            biased as i32 - 1 + format.min_p(),
            FloatClass::Normal,
        )
    };
    DecodedFloat {
        sign,
        m,
        p,
        class,
        format,
    }
}

/// Encodes a decoded value back to its bit pattern.
///
/// Finite inputs need not be normalized: any `(m, p)` whose value is exactly
/// representable in the format is accepted.
pub fn encode(d: &DecodedFloat) -> Result<u64> {
    let f = d.format;
    let sign = if d.sign.is_negative() { f.sign_mask() } else { 0 };
    match d.class {
        FloatClass::Infinity => return Ok(sign | f.infinity_bits()),
        FloatClass::NaN => return Ok(sign | f.infinity_bits() | (f.hidden_bit() >> 1)),
        _ => {}
    }
    let (mut m, mut p) = (d.m, d.p);
    if m == 0 {
        return Ok(sign);
    }
    let not_representable = || Error::NotRepresentable {
        m: d.m,
        p: d.p,
        width: f.name(),
    };
    let limit = f.hidden_bit() << 1;
    while m >= limit {
        if m & 1 != 0 {
            return Err(not_representable());
        }
        m >>= 1;
        p += 1;
    }
    while m < f.hidden_bit() && p > f.min_p() {
        m <<= 1;
        p -= 1;
    }
    while p < f.min_p() {
        if m & 1 != 0 {
            return Err(not_representable());
        }
        m >>= 1;
        p += 1;
    }
    if p > f.max_p() {
        return Err(not_representable());
    }
    if m < f.hidden_bit() {
        Ok(sign | m)
    } else {
        let biased = (p - f.min_p() + 1) as u64;
        Ok(sign | biased << f.stored_significand_bits | (m & f.fraction_mask()))
    }
}

/// Exact midpoints to the neighbouring representable magnitudes.
///
/// Each endpoint is the rational `num / den` with `den` a power of two.
/// Decimals strictly between the endpoints read back as the decoded value;
/// endpoints themselves do so only when flagged inclusive (even significand).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripInterval {
    pub low_num: BigUint,
    pub low_den: BigUint,
    pub high_num: BigUint,
    pub high_den: BigUint,
    pub low_inclusive: bool,
    pub high_inclusive: bool,
}

impl RoundTripInterval {
    /// Compares `num / den` against the low endpoint.
    pub fn cmp_low(&self, num: &BigUint, den: &BigUint) -> Ordering {
        cmp_ratio(num, den, &self.low_num, &self.low_den)
    }

    pub fn cmp_high(&self, num: &BigUint, den: &BigUint) -> Ordering {
        cmp_ratio(num, den, &self.high_num, &self.high_den)
    }

    /// Whether the rational `num / den` reads back as the decoded value.
    pub fn contains(&self, num: &BigUint, den: &BigUint) -> bool {
        let lo = self.cmp_low(num, den);
        let hi = self.cmp_high(num, den);
        let above = lo == Ordering::Greater || (self.low_inclusive && lo == Ordering::Equal);
        let below = hi == Ordering::Less || (self.high_inclusive && hi == Ordering::Equal);
        above && below
    }
}

/// Compares `a / b` with `c / d` by cross multiplication.
pub(crate) fn cmp_ratio(a: &BigUint, b: &BigUint, c: &BigUint, d: &BigUint) -> Ordering {
    a.mul(d).cmp(&c.mul(b))
}

/// Scaled integer `x * 2^e` as an exact ratio.
fn ratio(x: u64, e: i32) -> (BigUint, BigUint) {
    if e >= 0 {
        (BigUint::from_u64(x).shl(e as u32), BigUint::one())
    } else {
        (BigUint::from_u64(x), BigUint::one().shl((-e) as u32))
    }
}

pub fn boundaries(d: &DecodedFloat) -> Result<RoundTripInterval> {
    if !matches!(d.class, FloatClass::Normal | FloatClass::Subnormal) {
        return Err(Error::NoInterval(d.class));
    }
    let low = if d.has_asymmetric_boundary() {
        4 * d.m - 1
    } else {
        4 * d.m - 2
    };
    let (low_num, low_den) = ratio(low, d.p - 2);
    let (high_num, high_den) = ratio(4 * d.m + 2, d.p - 2);
    let even = d.m & 1 == 0;
    Ok(RoundTripInterval {
        low_num,
        low_den,
        high_num,
        high_den,
        low_inclusive: even,
        high_inclusive: even,
    })
}

impl fmt::Display for DecodedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign.is_negative() { "-" } else { "" };
        match self.class {
            FloatClass::Infinity => write!(f, "{s}inf"),
            FloatClass::NaN => write!(f, "nan"),
            _ => write!(f, "{s}{}*2^{}", self.m, self.p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PI32: u64 = 0x4049_0FDB;

    #[test]
    fn table_parameters() {
        let f = FloatFormat::BINARY64;
        assert_eq!((f.exponent_bits, f.stored_significand_bits, f.precision()), (11, 52, 53));
        assert_eq!(f.max_exact_digits, 17);
        assert_eq!((f.min_p(), f.max_p()), (-1074, 971));
        let f = FloatFormat::BINARY32;
        assert_eq!((f.exponent_bits, f.stored_significand_bits, f.precision()), (8, 23, 24));
        assert_eq!(f.max_exact_digits, 9);
        assert_eq!((f.min_p(), f.max_p()), (-149, 104));
    }

    #[test]
    fn decode_pi32() {
        let d = decode(PI32, FloatFormat::BINARY32);
        assert_eq!((d.m, d.p, d.class), (13_176_795, -22, FloatClass::Normal));
        assert_eq!(d, DecodedFloat::from_f32(std::f32::consts::PI));
    }

    #[test]
    fn decode_zero_and_min_subnormal() {
        let z = decode(0, FloatFormat::BINARY32);
        assert_eq!((z.m, z.class, z.sign), (0, FloatClass::Zero, Sign::Positive));
        let s = decode(1, FloatFormat::BINARY64);
        assert_eq!((s.m, s.p, s.class), (1, -1074, FloatClass::Subnormal));
    }

    #[test]
    fn decode_specials() {
        let f = FloatFormat::BINARY64;
        assert_eq!(decode(f.infinity_bits(), f).class, FloatClass::Infinity);
        assert_eq!(decode(f64::NAN.to_bits(), f).class, FloatClass::NaN);
        let nz = decode(f.sign_mask(), f);
        assert_eq!((nz.class, nz.sign), (FloatClass::Zero, Sign::Negative));
    }

    #[test]
    fn encode_pi32_matches_brute_force() {
        let target = DecodedFloat {
            sign: Sign::Positive,
            m: 13_176_795,
            p: -22,
            class: FloatClass::Normal,
            format: FloatFormat::BINARY32,
        };
        let found = (0x4000_0000u64..0x4080_0000)
            .find(|&b| {
                let d = decode(b, FloatFormat::BINARY32);
                d.m == target.m && d.p == target.p
            })
            .unwrap();
        assert_eq!(found, PI32);
        assert_eq!(encode(&target).unwrap(), PI32);
    }

    #[test]
    fn encode_negative_zero_and_unnormalized() {
        let f = FloatFormat::BINARY64;
        let mut d = decode(f.sign_mask(), f);
        assert_eq!(encode(&d).unwrap(), f.sign_mask());
        // 1.0 written as 1 * 2^0
        d = DecodedFloat { sign: Sign::Positive, m: 1, p: 0, class: FloatClass::Normal, format: f };
        assert_eq!(encode(&d).unwrap(), 1.0f64.to_bits());
        d.m = 3;
        d.p = -1076;
        assert!(encode(&d).is_err());
        d.m = 1;
        d.p = 1024;
        assert!(encode(&d).is_err());
    }

    #[test]
    fn halfway_low_midpoint_is_inclusive() {
        let d = DecodedFloat::from_f32(2_150_000_128.0);
        assert_eq!((d.m, d.p), (8_398_438, 8));
        let iv = boundaries(&d).unwrap();
        assert_eq!(iv.low_num.to_string(), "2150000000");
        assert_eq!(iv.low_den, BigUint::one());
        assert!(iv.low_inclusive && iv.high_inclusive);
        assert!(iv.contains(&BigUint::from_u64(2_150_000_000), &BigUint::one()));
    }

    #[test]
    fn power_of_two_has_asymmetric_gaps() {
        let one = DecodedFloat::from_f64(1.0);
        let iv = boundaries(&one).unwrap();
        let below = decode(1.0f64.to_bits() - 1, FloatFormat::BINARY64);
        let above = decode(1.0f64.to_bits() + 1, FloatFormat::BINARY64);
        // gaps in units of 2^-54
        let gap_below = (1u64 << 54) - (below.m << 1);
        let gap_above = (above.m << 2) - (1u64 << 54);
        assert_eq!(gap_above, 2 * gap_below);
        // low midpoint = 1 - gap_below/2, high midpoint = 1 + gap_above/2
        assert_eq!(iv.low_num, BigUint::from_u64((1u64 << 54) - gap_below / 2));
        assert_eq!(iv.high_num, BigUint::from_u64((1u64 << 54) + gap_above / 2));
        assert_eq!(iv.low_den, BigUint::one().shl(54));
    }

    #[test]
    fn odd_significand_is_exclusive_and_specials_have_no_interval() {
        let iv = boundaries(&decode(PI32, FloatFormat::BINARY32)).unwrap();
        assert!(!iv.low_inclusive && !iv.high_inclusive);
        assert!(boundaries(&DecodedFloat::from_f64(0.0)).is_err());
        assert!(boundaries(&DecodedFloat::from_f64(f64::INFINITY)).is_err());
    }

    #[test]
    fn binary32_strata_roundtrip() {
        let f = FloatFormat::BINARY32;
        for exp in 0..255u64 {
            for frac in (0..(1u64 << 23)).step_by(4093) {
                let b = exp << 23 | frac;
                assert_eq!(encode(&decode(b, f)).unwrap(), b);
                let n = b | f.sign_mask();
                assert_eq!(encode(&decode(n, f)).unwrap(), n);
            }
        }
    }

    fn finite64() -> impl Strategy<Value = u64> {
        any::<u64>().prop_filter("finite", |b| f64::from_bits(*b).is_finite())
    }

    proptest! {
        #[test]
        fn binary64_roundtrip(b in finite64()) {
            prop_assert_eq!(encode(&decode(b, FloatFormat::BINARY64)).unwrap(), b);
        }

        #[test]
        fn neighbouring_boundaries_meet(b in finite64()) {
            let f = FloatFormat::BINARY64;
            let b = b & !f.sign_mask();
            prop_assume!(b != 0 && b + 1 < f.infinity_bits());
            let lo = boundaries(&decode(b, f)).unwrap();
            let hi = boundaries(&decode(b + 1, f)).unwrap();
            prop_assert_eq!(
                cmp_ratio(&lo.high_num, &lo.high_den, &hi.low_num, &hi.low_den),
                Ordering::Equal
            );
            prop_assert_eq!(lo.low_inclusive, decode(b, f).m % 2 == 0);
        }

        #[test]
        fn interval_brackets_value(b in finite64()) {
            let d = decode(b, FloatFormat::BINARY64);
            prop_assume!(d.class != FloatClass::Zero);
            let iv = boundaries(&d).unwrap();
            let (vn, vd) = ratio(d.m, d.p);
            prop_assert_eq!(iv.cmp_low(&vn, &vd), Ordering::Greater);
            prop_assert_eq!(iv.cmp_high(&vn, &vd), Ordering::Less);
        }
    }
}
