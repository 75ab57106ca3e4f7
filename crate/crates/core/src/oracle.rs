//! Slow, exact reference machinery: a correctly rounded decimal parser and
//! brute-force searches over the round-trip interval.
//!
//! Nothing here touches native floating-point arithmetic; every comparison is
//! between big integers.

use std::cmp::Ordering;

use crate::bignum::BigUint;
use crate::error::{Error, Result};
use crate::exact::DecimalFP;
use crate::ieee::{boundaries, encode, DecodedFloat, FloatClass, FloatFormat, RoundTripInterval, Sign};
use crate::render::{push_candidates, Candidate, RenderedString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Special {
    Inf,
    NaN,
}

/// `sign * digits * 10^exponent`, or a special value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedNumber {
    pub sign: Sign,
    pub digits: BigUint,
    pub exponent: i64,
    pub special: Option<Special>,
}

impl ParsedNumber {
    /// Same value with trailing zeros moved into the exponent.
    pub fn canonical(mut self) -> Self {
        if self.special.is_some() || self.digits.is_zero() {
            self.exponent = 0;
            return self;
        }
        loop {
            let (q, r) = self.digits.divmod_small(10);
            if r != 0 {
                return self;
            }
            self.digits = q;
            self.exponent += 1;
        }
    }
}

/// Exponents past this magnitude are saturated; the value is then far outside
/// any supported format.
const EXPONENT_CLAMP: i64 = 1 << 40;

fn malformed(text: &str, reason: &'static str) -> Error {
    Error::Malformed {
        text: text.to_string(),
        reason,
    }
}

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]`, `inf`, `infinity` or `nan`.
pub fn parse_number(text: &str) -> Result<ParsedNumber> {
    let bytes = text.as_bytes();
    let (sign, rest) = match bytes.first() {
        Some(b'-') => (Sign::Negative, &bytes[1..]),
        Some(b'+') => (Sign::Positive, &bytes[1..]),
        _ => (Sign::Positive, bytes),
    };
    let special = |s| ParsedNumber {
        sign,
        digits: BigUint::zero(),
        exponent: 0,
        special: Some(s),
    };
    if rest.eq_ignore_ascii_case(b"inf") || rest.eq_ignore_ascii_case(b"infinity") {
        return Ok(special(Special::Inf));
    }
    if rest.eq_ignore_ascii_case(b"nan") {
        return Ok(special(Special::NaN));
    }

    let mut digits = BigUint::zero();
    let mut exponent: i64 = 0;
    let mut seen_digit = false;
    let mut i = 0;
    let mut chunk = 0u64;
    let mut chunk_len = 0u32;
    let flush = |digits: &mut BigUint, chunk: &mut u64, chunk_len: &mut u32| {
        if *chunk_len > 0 {
            digits.mul_pow10_assign(*chunk_len);
            digits.add_small_assign(*chunk);
            *chunk = 0;
            *chunk_len = 0;
        }
    };
    let mut in_fraction = false;
    while i < rest.len() {
        match rest[i] {
            c @ b'0'..=b'9' => {
                seen_digit = true;
                chunk = chunk * 10 + (c - b'0') as u64;
                chunk_len += 1;
                if chunk_len == 19 {
                    flush(&mut digits, &mut chunk, &mut chunk_len);
                }
                if in_fraction {
                    exponent -= 1;
                }
            }
            b'.' if !in_fraction => in_fraction = true,
            b'e' | b'E' => break,
            _ => return Err(malformed(text, "unexpected character")),
        }
        i += 1;
    }
    flush(&mut digits, &mut chunk, &mut chunk_len);
    if !seen_digit {
        return Err(malformed(text, "no digits"));
    }
    if i < rest.len() {
        // exponent part
        let exp = &rest[i + 1..];
        let (neg, exp_digits) = match exp.first() {
            Some(b'-') => (true, &exp[1..]),
            Some(b'+') => (false, &exp[1..]),
            _ => (false, exp),
        };
        if exp_digits.is_empty() {
            return Err(malformed(text, "empty exponent"));
        }
        let mut e: i64 = 0;
        for &c in exp_digits {
            if !c.is_ascii_digit() {
                return Err(malformed(text, "bad exponent"));
            }
            e = (e * 10 + (c - b'0') as i64).min(EXPONENT_CLAMP);
        }
        exponent += if neg { -e } else { e };
    }
    Ok(ParsedNumber {
        sign,
        digits,
        exponent,
        special: None,
    })
}

/// `floor(x * log10(2))` for moderate `x`.
fn floor_log10_pow2(x: i64) -> i64 {
    (x * 78_913).div_euclid(1 << 18)
}

/// Nearest float to a parsed number, halfway cases to even.
pub fn to_bits(n: &ParsedNumber, format: FloatFormat) -> u64 {
    let sign_bits = if n.sign.is_negative() { format.sign_mask() } else { 0 };
    match n.special {
        Some(Special::Inf) => return sign_bits | format.infinity_bits(),
        Some(Special::NaN) => {
            let nan = DecodedFloat {
                sign: n.sign,
                m: 0,
                p: 0,
                class: FloatClass::NaN,
                format,
            };
            return encode(&nan).expect("nan encodes");
        }
        None => {}
    }
    if n.digits.is_zero() {
        return sign_bits;
    }
    let nd = n.digits.decimal_len() as i64;
    // value lies in [10^(nd+e-1), 10^(nd+e))
    let top = nd + n.exponent;
    let min_p = format.min_p() as i64;
    let precision = format.precision() as i64;
    if top <= floor_log10_pow2(min_p - 1) {
        // below half the smallest subnormal
        return sign_bits;
    }
    if top - 1 > floor_log10_pow2(format.max_p() as i64 + precision) {
        return sign_bits | format.infinity_bits();
    }
    let (num, den) = if n.exponent >= 0 {
        let mut num = n.digits.clone();
        num.mul_pow10_assign(n.exponent as u32);
        (num, BigUint::one())
    } else {
        (n.digits.clone(), BigUint::pow10((-n.exponent) as u32))
    };
    let bl = num.bit_len() as i64 - den.bit_len() as i64;
    let mut p = (bl - precision).max(min_p);
    let (mut m, rem, scaled_den) = loop {
        let (sn, sd) = if p >= 0 {
            (num.clone(), den.shl(p as u32))
        } else {
            (num.shl((-p) as u32), den.clone())
        };
        let (q, r) = sn.div_rem(&sd);
        let q = q.to_u64().expect("quotient below 2^(P+1)");
        if q >> precision != 0 {
            p += 1;
            continue;
        }
        break (q, r, sd);
    };
    let round_up = match rem.shl(1).cmp(&scaled_den) {
        Ordering::Less => false,
        Ordering::Greater => true,
        Ordering::Equal => m & 1 == 1,
    };
    m += round_up as u64;
    if m >> precision != 0 {
        m >>= 1;
        p += 1;
    }
    if m == 0 {
        return sign_bits;
    }
    if p > format.max_p() as i64 {
        return sign_bits | format.infinity_bits();
    }
    let d = DecodedFloat {
        sign: n.sign,
        m,
        p: p as i32,
        class: FloatClass::Normal,
        format,
    };
    encode(&d).expect("in range")
}

/// Correctly rounded decimal-to-binary conversion.
pub fn parse_exact(text: &str, format: FloatFormat) -> Result<u64> {
    Ok(to_bits(&parse_number(text)?, format))
}

/// Exact `floor(log10(v))` for a nonzero finite float.
pub fn floor_log10(d: &DecodedFloat) -> i32 {
    let top_bit = d.p as i64 + 63 - d.m.leading_zeros() as i64;
    let est = floor_log10_pow2(top_bit) as i32;
    // 2^top_bit <= v < 2^(top_bit+1), so est or est + 1
    if cmp_pow10(d, est + 1) != Ordering::Less {
        est + 1
    } else {
        est
    }
}

/// Compares `m * 2^p` with `10^x`.
fn cmp_pow10(d: &DecodedFloat, x: i32) -> Ordering {
    let mut lhs = BigUint::from_u64(d.m);
    let mut rhs = BigUint::one();
    if d.p >= 0 {
        lhs.shl_assign(d.p as u32);
    } else {
        rhs.shl_assign((-d.p) as u32);
    }
    if x >= 0 {
        rhs.mul_pow10_assign(x as u32);
    } else {
        lhs.mul_pow10_assign((-x) as u32);
    }
    lhs.cmp(&rhs)
}

/// The `k`-digit decimals inside a float's round-trip interval:
/// `t * 10^exponent` for `t` in `[first, last]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSlice {
    pub digits: u32,
    pub exponent: i32,
    pub first: BigUint,
    pub last: BigUint,
}

impl GridSlice {
    pub fn len(&self) -> u64 {
        self.last
            .sub(&self.first)
            .ok()
            .and_then(|n| n.to_u64())
            .map_or(0, |n| n + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.first > self.last
    }
}

/// Bounds `a/b` scaled by `10^-g` and rounded inward.
fn scaled_bound(num: &BigUint, den: &BigUint, g: i32, ceil: bool, inclusive: bool) -> Option<BigUint> {
    let (mut n, mut d) = (num.clone(), den.clone());
    if g >= 0 {
        d.mul_pow10_assign(g as u32);
    } else {
        n.mul_pow10_assign((-g) as u32);
    }
    let (q, r) = n.div_rem(&d);
    let exact = r.is_zero();
    if ceil {
        let mut q = q;
        if !exact || !inclusive {
            q.add_small_assign(1);
        }
        Some(q)
    } else if exact && !inclusive {
        q.sub(&BigUint::one()).ok()
    } else {
        Some(q)
    }
}

/// Intersects the interval with the grid `10^(E - k + 1)`, `E = floor(log10 v)`.
pub fn grid_slice(iv: &RoundTripInterval, e10: i32, k: u32) -> GridSlice {
    let g = e10 - k as i32 + 1;
    let first = scaled_bound(&iv.low_num, &iv.low_den, g, true, iv.low_inclusive)
        .expect("ceil bound exists");
    let last = scaled_bound(&iv.high_num, &iv.high_den, g, false, iv.high_inclusive)
        .unwrap_or_else(BigUint::zero);
    GridSlice {
        digits: k,
        exponent: g,
        first,
        last,
    }
}

fn require_interval(d: &DecodedFloat) -> Result<RoundTripInterval> {
    if !matches!(d.class, FloatClass::Normal | FloatClass::Subnormal) {
        return Err(Error::NoInterval(d.class));
    }
    boundaries(d)
}

/// First nonempty `k`-digit grid slice.
///
/// Nonempty slices stay nonempty as `k` grows (every `k`-digit grid point is
/// also a `k+1`-digit one), so the first one is found by bisection.
pub fn minimal_slice(d: &DecodedFloat) -> Result<GridSlice> {
    let iv = require_interval(d)?;
    let e10 = floor_log10(d);
    let (mut lo, mut hi) = (1, d.format.max_exact_digits);
    let mut found = grid_slice(&iv, e10, hi);
    assert!(!found.is_empty(), "max_exact_digits always suffices");
    while lo < hi {
        let mid = (lo + hi) / 2;
        let slice = grid_slice(&iv, e10, mid);
        if slice.is_empty() {
            lo = mid + 1;
        } else {
            hi = mid;
            found = slice;
        }
    }
    if found.digits != lo {
        found = grid_slice(&iv, e10, lo);
    }
    Ok(found)
}

/// Smallest significand length that reads back as `d`.
pub fn minimal_digit_count(d: &DecodedFloat) -> Result<u32> {
    Ok(minimal_slice(d)?.digits)
}

/// The minimal-length candidate closest to the exact value, even on ties.
pub fn closest_minimal(d: &DecodedFloat) -> Result<DecimalFP> {
    Ok(closest_in_slice(d, &minimal_slice(d)?))
}

/// What the oracle knows about a float's minimal-length decimals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalCandidates {
    pub digits: u32,
    /// How many decimals of that length read back as the float.
    pub count: u64,
    pub closest: DecimalFP,
}

pub fn minimal_and_closest(d: &DecodedFloat) -> Result<MinimalCandidates> {
    let slice = minimal_slice(d)?;
    Ok(MinimalCandidates {
        digits: slice.digits,
        count: slice.len(),
        closest: closest_in_slice(d, &slice),
    })
}

fn closest_in_slice(d: &DecodedFloat, slice: &GridSlice) -> DecimalFP {
    let (vn, vd) = crate::render::value_ratio(d);
    let mut best: Option<(BigUint, BigUint, BigUint)> = None;
    let mut t = slice.first.clone();
    while t <= slice.last {
        let (cn, cd) = crate::render::decimal_ratio(&t, slice.exponent);
        let (dn, dd) = crate::render::abs_diff(&cn, &cd, &vn, &vd);
        let better = match &best {
            None => true,
            Some((bt, bn, bdd)) => match dn.mul(bdd).cmp(&bn.mul(&dd)) {
                Ordering::Less => true,
                Ordering::Equal => t.is_even() && !bt.is_even(),
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((t.clone(), dn, dd));
        }
        t.add_small_assign(1);
    }
    let (t, _, _) = best.expect("nonempty slice");
    DecimalFP::new(d.sign, t, slice.exponent).canonicalize()
}

/// Every candidate in a slice, for slices small enough to enumerate.
pub fn slice_candidates(slice: &GridSlice, sign: Sign) -> Vec<DecimalFP> {
    let mut out = Vec::new();
    let mut t = slice.first.clone();
    while t <= slice.last {
        out.push(DecimalFP::new(sign, t.clone(), slice.exponent).canonicalize());
        t.add_small_assign(1);
    }
    out
}

/// Slices wider than this are searched only around the exact value.
const ENUMERATION_LIMIT: u64 = 4096;

/// Shortest minimal-length string that reads back as `d`, by enumeration.
pub fn shortest_string_oracle(d: &DecodedFloat) -> Result<RenderedString> {
    if !d.is_finite() {
        return Err(Error::NotFinite(d.class));
    }
    if d.is_zero() {
        let text = if d.sign.is_negative() { "-0" } else { "0" };
        return Ok(RenderedString::new(text.into()));
    }
    let iv = boundaries(d)?;
    let e10 = floor_log10(d);
    let mut best: Option<Candidate> = None;
    for k in 1..=d.format.max_exact_digits {
        if best.as_ref().is_some_and(|b| k as usize > b.text.len()) {
            break;
        }
        let slice = grid_slice(&iv, e10, k);
        if slice.is_empty() {
            continue;
        }
        let candidates = if slice.len() <= ENUMERATION_LIMIT {
            slice_candidates(&slice, d.sign)
        } else {
            // members with k significant digits all print at the same length,
            // so only the closest of them matters; shorter members belong to
            // earlier slices
            closest_on_grid(d, &slice)
                .into_iter()
                .map(|t| DecimalFP::new(d.sign, t, slice.exponent).canonicalize())
                .collect()
        };
        for dec in candidates {
            push_candidates(d, &dec, &mut best);
        }
    }
    Ok(RenderedString::new(best.expect("nonempty").text))
}

fn closest_on_grid(d: &DecodedFloat, slice: &GridSlice) -> Vec<BigUint> {
    let (vn, vd) = crate::render::value_ratio(d);
    let (mut n, mut dd) = (vn, vd);
    if slice.exponent >= 0 {
        dd.mul_pow10_assign(slice.exponent as u32);
    } else {
        n.mul_pow10_assign((-slice.exponent) as u32);
    }
    // floor - 1 ..= floor + 2 reaches a k-digit neighbour on each side even
    // when floor or ceil ends in zero
    let (floor, _) = n.div_rem(&dd);
    let mut t = floor.sub(&BigUint::one()).unwrap_or_else(|_| BigUint::zero());
    let mut out = Vec::new();
    for _ in 0..4 {
        if t >= slice.first && t <= slice.last {
            out.push(t.clone());
        }
        t.add_small_assign(1);
    }
    out
}

/// Whether `dec` is inside the round-trip interval of `d`.
pub fn round_trips(d: &DecodedFloat, dec: &DecimalFP) -> bool {
    let Ok(iv) = boundaries(d) else {
        return false;
    };
    if dec.sign != d.sign {
        return false;
    }
    let (n, dd) = crate::render::decimal_ratio(&dec.w, dec.q);
    iv.contains(&n, &dd)
}
