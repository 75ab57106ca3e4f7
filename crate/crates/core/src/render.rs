//! Decimal-to-text formatting policies.
//!
//! Three notations are produced from a `(w, q)` decimal:
//!
//! * fixed: `[-]digits[.digits]`
//! * point-scientific: `[-]d[.digits]e[-]digits`
//! * integer-scientific: `[-]digits e [-]digits` (minimal-length policy only,
//!   and only when it needs fewer exponent characters than point-scientific,
//!   so `12e9` replaces `1.2e10` while `2.15e9` stays as written)
//!
//! [`RenderPolicy::CStyle`] follows the C `%e` exponent rules (mandatory sign,
//! two digits at least) and picks the shorter of fixed and scientific, fixed on
//! ties. [`RenderPolicy::MinimalLength`] picks the fewest characters over all
//! three notations. [`RenderPolicy::ScientificAlways`] always writes
//! `d.dddE-x`.

use std::fmt;

use crate::bignum::BigUint;
use crate::error::{Error, Result};
use crate::exact::{decimal_len_u64, to_exact_decimal, DecimalFP};
use crate::ieee::{boundaries, DecodedFloat, FloatClass, RoundTripInterval, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RenderPolicy {
    CStyle,
    MinimalLength,
    ScientificAlways,
}

impl RenderPolicy {
    pub const ALL: [RenderPolicy; 3] = [
        RenderPolicy::MinimalLength,
        RenderPolicy::CStyle,
        RenderPolicy::ScientificAlways,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RenderPolicy::CStyle => "c",
            RenderPolicy::MinimalLength => "minimal",
            RenderPolicy::ScientificAlways => "sci",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "c" | "cstyle" | "c-style" => Ok(RenderPolicy::CStyle),
            "minimal" | "min" | "shortest" => Ok(RenderPolicy::MinimalLength),
            "sci" | "scientific" => Ok(RenderPolicy::ScientificAlways),
            _ => Err(Error::UnknownName {
                kind: "policy",
                name: name.to_string(),
            }),
        }
    }
}

/// Rendered text; `length` is its character count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RenderedString {
    pub text: String,
    pub length: usize,
}

impl RenderedString {
    pub fn new(text: String) -> Self {
        let length = text.len();
        RenderedString { text, length }
    }
}

impl fmt::Display for RenderedString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Notation of a rendered number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notation {
    Fixed,
    PointScientific,
    IntegerScientific,
}

static DIGIT_PAIRS: [[u8; 2]; 100] = {
    let mut table = [[0u8; 2]; 100];
    let mut i = 0;
    while i < 100 {
        table[i] = [b'0' + (i / 10) as u8, b'0' + (i % 10) as u8];
        i += 1;
    }
    table
};

/// Writes the digits of `w` right-aligned into `buf`, returning the start index.
fn write_u64_digits(mut w: u64, buf: &mut [u8; 20]) -> usize {
    let mut pos = buf.len();
    while w >= 100 {
        let pair = DIGIT_PAIRS[(w % 100) as usize];
        w /= 100;
        pos -= 2;
        buf[pos..pos + 2].copy_from_slice(&pair);
    }
    if w >= 10 {
        pos -= 2;
        buf[pos..pos + 2].copy_from_slice(&DIGIT_PAIRS[w as usize]);
    } else {
        pos -= 1;
        buf[pos] = b'0' + w as u8;
    }
    pos
}

/// Appends the decimal digits of `w` to `out`.
fn push_digits(w: &BigUint, out: &mut Vec<u8>) {
    if let Some(v) = w.to_u64() {
        let mut buf = [0u8; 20];
        let start = write_u64_digits(v, &mut buf);
        out.extend_from_slice(&buf[start..]);
        return;
    }
    let begin = out.len();
    let mut cur = w.clone();
    while !cur.is_zero() {
        let rem = cur.divmod_small_assign(100) as usize;
        let pair = DIGIT_PAIRS[rem];
        out.push(pair[1]);
        out.push(pair[0]);
    }
    // emitted least significant first
    out[begin..].reverse();
    let lead = out[begin..].iter().take_while(|&&c| c == b'0').count();
    out.drain(begin..begin + lead);
}

/// Decimal digits of `w` with no leading zeros, two per table lookup.
pub fn digits_to_chars(w: &BigUint) -> String {
    let mut out = Vec::new();
    push_digits(w, &mut out);
    String::from_utf8(out).expect("ascii digits")
}

fn exponent_len(e: i32, force_sign: bool, min_digits: u32) -> usize {
    let sign = (e < 0 || force_sign) as usize;
    sign + decimal_len_u64(e.unsigned_abs() as u64).max(min_digits) as usize
}

fn push_exponent(out: &mut Vec<u8>, marker: u8, e: i32, force_sign: bool, min_digits: u32) {
    out.push(marker);
    if e < 0 {
        out.push(b'-');
    } else if force_sign {
        out.push(b'+');
    }
    let mag = e.unsigned_abs() as u64;
    for _ in decimal_len_u64(mag)..min_digits {
        out.push(b'0');
    }
    let mut buf = [0u8; 20];
    let start = write_u64_digits(mag, &mut buf);
    out.extend_from_slice(&buf[start..]);
}

/// Shape of a decimal: digit count and exponents of its notations.
#[derive(Debug, Clone, Copy)]
struct Shape {
    digits: usize,
    q: i32,
    /// Exponent of the leading digit.
    sci_exp: i32,
    negative: bool,
}

impl Shape {
    fn of(dec: &DecimalFP) -> Shape {
        let digits = match dec.w.to_u64() {
            Some(v) => decimal_len_u64(v) as usize,
            None => dec.w.decimal_len() as usize,
        };
        Shape {
            digits,
            q: dec.q,
            sci_exp: digits as i32 - 1 + dec.q,
            negative: dec.sign.is_negative(),
        }
    }

    fn fixed_len(&self) -> usize {
        let n = self.digits as i64;
        let q = self.q as i64;
        let body = if q >= 0 {
            n + q
        } else if n > -q {
            n + 1
        } else {
            2 - q
        };
        body as usize + self.negative as usize
    }

    fn point_sci_len(&self, force_sign: bool, min_exp_digits: u32) -> usize {
        self.negative as usize
            + self.digits
            + (self.digits > 1) as usize
            + 1
            + exponent_len(self.sci_exp, force_sign, min_exp_digits)
    }

    fn int_sci_len(&self) -> usize {
        self.negative as usize + self.digits + 1 + exponent_len(self.q, false, 1)
    }

    fn len(&self, notation: Notation, policy: RenderPolicy) -> usize {
        match (notation, policy) {
            (Notation::Fixed, _) => self.fixed_len(),
            (Notation::PointScientific, RenderPolicy::CStyle) => self.point_sci_len(true, 2),
            (Notation::PointScientific, _) => self.point_sci_len(false, 1),
            (Notation::IntegerScientific, _) => self.int_sci_len(),
        }
    }
}

/// Notations a policy may emit for this decimal, in tie-break order.
fn allowed(shape: &Shape, policy: RenderPolicy) -> &'static [Notation] {
    match policy {
        RenderPolicy::CStyle => &[Notation::Fixed, Notation::PointScientific],
        RenderPolicy::ScientificAlways => &[Notation::PointScientific],
        RenderPolicy::MinimalLength => {
            // exponent-zero scientific forms are never shorter than fixed;
            // an integer significand is only worth it when it shortens the exponent
            let point = shape.sci_exp != 0;
            let integer = shape.digits > 1
                && exponent_len(shape.q, false, 1) < exponent_len(shape.sci_exp, false, 1);
            match (point, integer) {
                (true, true) => &[Notation::Fixed, Notation::PointScientific, Notation::IntegerScientific],
                (true, false) => &[Notation::Fixed, Notation::PointScientific],
                (false, true) => &[Notation::Fixed, Notation::IntegerScientific],
                (false, false) => &[Notation::Fixed],
            }
        }
    }
}

/// Picks the notation a policy renders this decimal in.
fn choose(shape: &Shape, policy: RenderPolicy) -> Notation {
    let options = allowed(shape, policy);
    let mut best = options[0];
    let mut best_len = shape.len(best, policy);
    for &n in &options[1..] {
        let len = shape.len(n, policy);
        if len < best_len {
            best = n;
            best_len = len;
        }
    }
    best
}

/// Appends `dec` in the given notation. `fixed_digits` optionally replaces
/// the zero-padded integer digits of a fixed rendering.
fn write_notation(
    dec: &DecimalFP,
    shape: &Shape,
    notation: Notation,
    policy: RenderPolicy,
    out: &mut Vec<u8>,
) {
    if shape.negative {
        out.push(b'-');
    }
    let start = out.len();
    push_digits(&dec.w, out);
    let n = shape.digits;
    match notation {
        Notation::Fixed => {
            let q = shape.q as i64;
            if q >= 0 {
                out.extend(std::iter::repeat_n(b'0', q as usize));
            } else if n as i64 > -q {
                let point = start + (n as i64 + q) as usize;
                out.insert(point, b'.');
            } else {
                let zeros = (-q) as usize - n;
                let lead: Vec<u8> = [b'0', b'.']
                    .into_iter()
                    .chain(std::iter::repeat_n(b'0', zeros))
                    .collect();
                out.splice(start..start, lead);
            }
        }
        Notation::PointScientific => {
            if n > 1 {
                out.insert(start + 1, b'.');
            }
            match policy {
                RenderPolicy::CStyle => push_exponent(out, b'e', shape.sci_exp, true, 2),
                RenderPolicy::ScientificAlways => push_exponent(out, b'E', shape.sci_exp, false, 1),
                RenderPolicy::MinimalLength => push_exponent(out, b'e', shape.sci_exp, false, 1),
            }
        }
        Notation::IntegerScientific => push_exponent(out, b'e', shape.q, false, 1),
    }
}

fn push_zero(sign: Sign, out: &mut Vec<u8>) {
    if sign.is_negative() {
        out.push(b'-');
    }
    out.push(b'0');
}

/// Renders into a reusable buffer (cleared first) and returns the length.
pub fn render_into(dec: &DecimalFP, policy: RenderPolicy, out: &mut Vec<u8>) -> usize {
    out.clear();
    if dec.is_zero() {
        push_zero(dec.sign, out);
        return out.len();
    }
    let shape = Shape::of(dec);
    let notation = choose(&shape, policy);
    write_notation(dec, &shape, notation, policy, out);
    out.len()
}

/// Length `render` would produce, without writing.
pub fn rendered_len(dec: &DecimalFP, policy: RenderPolicy) -> usize {
    if dec.is_zero() {
        return 1 + dec.sign.is_negative() as usize;
    }
    let shape = Shape::of(dec);
    shape.len(choose(&shape, policy), policy)
}

pub fn render(dec: &DecimalFP, policy: RenderPolicy) -> RenderedString {
    let mut out = Vec::with_capacity(32);
    render_into(dec, policy, &mut out);
    RenderedString::new(String::from_utf8(out).expect("ascii output"))
}

/// Renders `dec` as the conversion of `d`.
///
/// Non-finite values become `inf`, `-inf` or `nan`. Under
/// [`RenderPolicy::CStyle`] a fixed rendering of an integer-valued float uses
/// the float's exact digits when they have the same length as the padded
/// shortest digits, since that string is the numerically closest one.
pub fn render_decoded(d: &DecodedFloat, dec: &DecimalFP, policy: RenderPolicy) -> RenderedString {
    let mut out = Vec::with_capacity(32);
    render_decoded_into(d, dec, policy, &mut out);
    RenderedString::new(String::from_utf8(out).expect("ascii output"))
}

/// [`render_decoded`] into a reusable buffer; returns the length.
pub fn render_decoded_into(d: &DecodedFloat, dec: &DecimalFP, policy: RenderPolicy, out: &mut Vec<u8>) -> usize {
    out.clear();
    match d.class {
        FloatClass::NaN => {
            out.extend_from_slice(b"nan");
            return out.len();
        }
        FloatClass::Infinity => {
            let text: &[u8] = if d.sign.is_negative() { b"-inf" } else { b"inf" };
            out.extend_from_slice(text);
            return out.len();
        }
        _ => {}
    }
    if policy == RenderPolicy::CStyle && dec.q > 0 && d.p > 0 && !dec.is_zero() {
        let shape = Shape::of(dec);
        if choose(&shape, policy) == Notation::Fixed {
            let exact = BigUint::from_u64(d.m).shl(d.p as u32);
            if exact.decimal_len() as usize == shape.digits + shape.q as usize {
                if shape.negative {
                    out.push(b'-');
                }
                push_digits(&exact, out);
                return out.len();
            }
        }
    }
    render_into(dec, policy, out)
}

/// Every minimal-length notation of `dec`, each with its text.
pub fn minimal_forms(dec: &DecimalFP) -> Vec<(Notation, String)> {
    if dec.is_zero() {
        let mut out = Vec::new();
        push_zero(dec.sign, &mut out);
        return vec![(Notation::Fixed, String::from_utf8(out).unwrap())];
    }
    let shape = Shape::of(dec);
    allowed(&shape, RenderPolicy::MinimalLength)
        .iter()
        .map(|&n| {
            let mut out = Vec::new();
            write_notation(dec, &shape, n, RenderPolicy::MinimalLength, &mut out);
            (n, String::from_utf8(out).unwrap())
        })
        .collect()
}

/// Candidate ordering for the shortest printed string: length, fixed before
/// scientific, distance to the exact value, then text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Candidate {
    pub text: String,
    pub scientific: bool,
    /// `|candidate - value|` as `num / den`.
    pub dist_num: BigUint,
    pub dist_den: BigUint,
}

impl Candidate {
    pub(crate) fn better_than(&self, other: &Candidate) -> bool {
        use std::cmp::Ordering::*;
        let by_len = self.text.len().cmp(&other.text.len());
        let by_kind = self.scientific.cmp(&other.scientific);
        let by_dist = self
            .dist_num
            .mul(&other.dist_den)
            .cmp(&other.dist_num.mul(&self.dist_den));
        let order = by_len
            .then(by_kind)
            .then(by_dist)
            .then_with(|| self.text.cmp(&other.text));
        order == Less
    }
}

/// Exact rational form of a decimal `t * 10^g` (magnitude).
pub(crate) fn decimal_ratio(t: &BigUint, g: i32) -> (BigUint, BigUint) {
    if g >= 0 {
        let mut n = t.clone();
        n.mul_pow10_assign(g as u32);
        (n, BigUint::one())
    } else {
        (t.clone(), BigUint::pow10((-g) as u32))
    }
}

/// `|a/b - c/d|` as a ratio.
pub(crate) fn abs_diff(a: &BigUint, b: &BigUint, c: &BigUint, d: &BigUint) -> (BigUint, BigUint) {
    let lhs = a.mul(d);
    let rhs = c.mul(b);
    let num = if lhs >= rhs {
        lhs.sub(&rhs).unwrap()
    } else {
        rhs.sub(&lhs).unwrap()
    };
    (num, b.mul(d))
}

/// Exact value of a nonzero finite float's magnitude as a ratio.
pub(crate) fn value_ratio(d: &DecodedFloat) -> (BigUint, BigUint) {
    if d.p >= 0 {
        (BigUint::from_u64(d.m).shl(d.p as u32), BigUint::one())
    } else {
        (BigUint::from_u64(d.m), BigUint::one().shl((-d.p) as u32))
    }
}

pub(crate) fn push_candidates(
    d: &DecodedFloat,
    dec: &DecimalFP,
    best: &mut Option<Candidate>,
) {
    let (vn, vd) = value_ratio(d);
    let (cn, cd) = decimal_ratio(&dec.w, dec.q);
    let (dist_num, dist_den) = abs_diff(&cn, &cd, &vn, &vd);
    for (notation, text) in minimal_forms(dec) {
        let cand = Candidate {
            text,
            scientific: notation != Notation::Fixed,
            dist_num: dist_num.clone(),
            dist_den: dist_den.clone(),
        };
        if best.as_ref().is_none_or(|b| cand.better_than(b)) {
            *best = Some(cand);
        }
    }
}

/// Decimals on the `k`-digit grid next to the exact value that read back as
/// the float: the floor and ceiling of the value on that grid, plus one more
/// step on each side in case either of those ends in zero.
fn grid_neighbours(
    exact: &DecimalFP,
    exact_digits: u32,
    k: u32,
    iv: &RoundTripInterval,
) -> impl Iterator<Item = DecimalFP> {
    let e10 = exact.q + exact_digits as i32 - 1;
    let g = e10 - k as i32 + 1;
    let floor = if exact.q >= g {
        let mut w = exact.w.clone();
        w.mul_pow10_assign((exact.q - g) as u32);
        w
    } else {
        exact.w.div_rem(&BigUint::pow10((g - exact.q) as u32)).0
    };
    let mut t = floor.sub(&BigUint::one()).unwrap_or_else(|_| BigUint::zero());
    let sign = exact.sign;
    let iv = iv.clone();
    (0..4).filter_map(move |_| {
        let cur = t.clone();
        t.add_small_assign(1);
        let (n, dd) = decimal_ratio(&cur, g);
        iv.contains(&n, &dd)
            .then(|| DecimalFP::new(sign, cur, g).canonicalize())
    })
}

/// The shortest string under the minimal-length notations that reads back as `d`.
///
/// `shortest` must be the float's shortest correctly rounded decimal. Longer
/// significands are tried up to the format's digit bound: one more digit can
/// unlock a shorter exponent form, and an equal-length string with more digits
/// can be numerically closer.
pub fn to_shortest_string_from(d: &DecodedFloat, shortest: &DecimalFP) -> Result<RenderedString> {
    if !d.is_finite() {
        return Err(Error::NotFinite(d.class));
    }
    if d.is_zero() {
        return Ok(render(&DecimalFP::zero(d.sign), RenderPolicy::MinimalLength));
    }
    let iv = boundaries(d)?;
    let exact = to_exact_decimal(d)?;
    let exact_digits = exact.w.decimal_len();
    let mut best: Option<Candidate> = None;
    push_candidates(d, shortest, &mut best);
    let first = crate::exact::significant_digits(shortest);
    for k in first + 1..=d.format.max_exact_digits {
        let best_len = best.as_ref().map_or(usize::MAX, |b| b.text.len());
        if k as usize > best_len {
            break;
        }
        for dec in grid_neighbours(&exact, exact_digits, k, &iv) {
            push_candidates(d, &dec, &mut best);
        }
    }
    Ok(RenderedString::new(best.expect("at least one candidate").text))
}

/// Shortest round-tripping string for a finite float.
pub fn to_shortest_string(d: &DecodedFloat) -> Result<RenderedString> {
    let shortest = crate::fastpath::shortest(d)?;
    to_shortest_string_from(d, &shortest)
}
