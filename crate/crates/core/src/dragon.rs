//! The Steele & White printers.
//!
//! [`dragon2`] generates free-format digits with native floating-point
//! arithmetic and is not exact. [`dragon4`] performs the same digit generation
//! over big integers `R / S` with half-gap widths `M+` / `M-` and satisfies
//! round-trip, minimality and correct rounding. [`dragon4_fast_scaled`] replaces
//! Dragon4's iterative search for the decimal scale with a logarithm estimate
//! that is corrected at most twice.

use std::ops::{Add, Div, Mul, Sub};

use crate::bignum::BigUint;
use crate::error::{Error, Result};
use crate::exact::DecimalFP;
use crate::ieee::{DecodedFloat, FloatClass, Width};

/// Radixes and precision for [`dragon2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dragon2Params {
    /// Radix of the input significand.
    pub input_radix: u32,
    /// Radix of the generated digits.
    pub output_radix: u32,
    /// Input precision in radix-`input_radix` digits.
    pub precision: u32,
}

impl Dragon2Params {
    pub fn new(input_radix: u32, output_radix: u32, precision: u32) -> Result<Self> {
        if input_radix < 2 || output_radix < 2 || precision < 1 {
            return Err(Error::Malformed {
                text: format!("b={input_radix} B={output_radix} n={precision}"),
                reason: "radixes must be at least 2 and precision at least 1",
            });
        }
        Ok(Dragon2Params {
            input_radix,
            output_radix,
            precision,
        })
    }

    /// Binary input, decimal output, precision of the float's format.
    pub fn decimal_for(d: &DecodedFloat) -> Self {
        Dragon2Params {
            input_radix: 2,
            output_radix: 10,
            precision: d.format.precision(),
        }
    }
}

/// Digits `0.d1 d2 ... * radix^exponent`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    pub digits: Vec<u8>,
    pub exponent: i32,
}

impl DigitString {
    /// Reads decimal digits back as a canonical decimal.
    pub fn to_decimal(&self, sign: crate::ieee::Sign) -> DecimalFP {
        let mut w = BigUint::zero();
        for &digit in &self.digits {
            w.mul_small_assign(10);
            w.add_small_assign(digit as u64);
        }
        DecimalFP::new(sign, w, self.exponent - self.digits.len() as i32).canonicalize()
    }
}

/// Hard stop for [`dragon2`] when the approximate gap underflows to zero.
const DRAGON2_MAX_DIGITS: usize = 40;

trait NativeFloat:
    Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn floor(self) -> Self;
    fn to_u32(self) -> u32;
    fn exp2i(e: i32) -> Self;
}

impl NativeFloat for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn to_u32(self) -> u32 {
        self as u32
    }
    fn exp2i(e: i32) -> Self {
        // split so neither factor overflows before the product underflows
        2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }
}

impl NativeFloat for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    fn floor(self) -> Self {
        f32::floor(self)
    }
    fn to_u32(self) -> u32 {
        self as u32
    }
    fn exp2i(e: i32) -> Self {
        2f32.powi(e / 2) * 2f32.powi(e - e / 2)
    }
}

/// Free-format digits computed with the float format's own arithmetic.
///
/// The result can fail to read back as `d`; that inexactness is the point of
/// keeping this printer around.
pub fn dragon2(d: &DecodedFloat, params: Dragon2Params) -> Result<DigitString> {
    if !matches!(d.class, FloatClass::Normal | FloatClass::Subnormal) {
        return Err(Error::NoInterval(d.class));
    }
    let out = match d.format.width {
        Width::Binary32 => dragon2_in::<f32>(d, params),
        Width::Binary64 => dragon2_in::<f64>(d, params),
    };
    Ok(out)
}

fn dragon2_in<F: NativeFloat>(d: &DecodedFloat, params: Dragon2Params) -> DigitString {
    let out_radix = F::from_f64(params.output_radix as f64);
    let one = F::from_f64(1.0);
    let half = F::from_f64(0.5);
    let zero = F::from_f64(0.0);
    // value f * b^(e - n) with an n-digit significand f
    let e = d.p + params.precision as i32;
    let place = e - params.precision as i32;
    let unit = if params.input_radix == 2 {
        F::exp2i(place)
    } else {
        F::from_f64((params.input_radix as f64).powi(place))
    };
    let mut r = F::from_f64(d.m as f64) * unit;
    let mut gap = unit * half;

    let mut exponent = 0i32;
    while r >= one {
        r = r / out_radix;
        gap = gap / out_radix;
        exponent += 1;
    }
    while r * out_radix < one && r > zero {
        r = r * out_radix;
        gap = gap * out_radix;
        exponent -= 1;
    }

    let mut digits: Vec<u8> = Vec::new();
    loop {
        let scaled = r * out_radix;
        let mut u = scaled.floor();
        r = scaled - u;
        gap = gap * out_radix;
        let low = r < gap;
        let high = r > one - gap;
        if !(low || high) && digits.len() + 1 < DRAGON2_MAX_DIGITS {
            digits.push(u.to_u32() as u8);
            continue;
        }
        if (high && !low) || (high && low && r > half) {
            u = u + one;
        }
        digits.push(u.to_u32() as u8);
        break;
    }
    propagate_carries(&mut digits, &mut exponent, params.output_radix as u8);
    DigitString { digits, exponent }
}

fn propagate_carries(digits: &mut Vec<u8>, exponent: &mut i32, radix: u8) {
    let mut i = digits.len();
    while i > 0 {
        i -= 1;
        if digits[i] < radix {
            break;
        }
        digits[i] -= radix;
        if i == 0 {
            digits.insert(0, 1);
            *exponent += 1;
        } else {
            digits[i - 1] += 1;
        }
    }
    while digits.len() > 1 && digits.last() == Some(&0) {
        digits.pop();
    }
}

/// Integer state of Dragon4: value `R / S`, upper and lower half-gaps `M+ / S`
/// and `M- / S`, and the decimal position `k` (value = `0.d1 d2 ... * 10^k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledFraction {
    pub r: BigUint,
    pub s: BigUint,
    pub m_plus: BigUint,
    pub m_minus: BigUint,
    pub k: i32,
    /// Endpoints are admitted (even significand).
    pub inclusive: bool,
}

/// Work counters from one Dragon4 run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Dragon4Stats {
    /// Multiplications by ten (or corrections) spent finding `k`.
    pub scale_iterations: u32,
    pub digits: u32,
}

impl ScaledFraction {
    /// Unscaled state (`k = 0`) for a nonzero finite value.
    pub fn new(d: &DecodedFloat) -> Result<Self> {
        if !matches!(d.class, FloatClass::Normal | FloatClass::Subnormal) {
            return Err(Error::NoInterval(d.class));
        }
        let asym = d.has_asymmetric_boundary();
        let m = BigUint::from_u64(d.m);
        let (r, s, m_plus, m_minus) = if d.p >= 0 {
            let unit = BigUint::one().shl(d.p as u32);
            if asym {
                (m.shl(d.p as u32 + 2), BigUint::from_u64(4), unit.shl(1), unit)
            } else {
                (m.shl(d.p as u32 + 1), BigUint::from_u64(2), unit.clone(), unit)
            }
        } else if asym {
            (m.shl(2), BigUint::one().shl((2 - d.p) as u32), BigUint::from_u64(2), BigUint::one())
        } else {
            (m.shl(1), BigUint::one().shl((1 - d.p) as u32), BigUint::one(), BigUint::one())
        };
        Ok(ScaledFraction {
            r,
            s,
            m_plus,
            m_minus,
            k: 0,
            inclusive: d.m & 1 == 0,
        })
    }

    /// Whether the upper endpoint is below `10^k` (so the first digit is at most 9).
    fn high_fits(&self) -> bool {
        let high = self.r.add(&self.m_plus);
        if self.inclusive {
            high < self.s
        } else {
            high <= self.s
        }
    }

    /// Whether the upper endpoint is already below `10^(k-1)`.
    fn high_fits_one_lower(&self) -> bool {
        let high = self.r.add(&self.m_plus).mul_small(10);
        if self.inclusive {
            high < self.s
        } else {
            high <= self.s
        }
    }

    fn scale_up_numerator(&mut self, by_pow10: u32) {
        self.r.mul_pow10_assign(by_pow10);
        self.m_plus.mul_pow10_assign(by_pow10);
        self.m_minus.mul_pow10_assign(by_pow10);
    }

    /// Dragon4's scaling: one multiplication by ten per step.
    pub fn scale_iteratively(&mut self) -> u32 {
        let mut steps = 0;
        while self.r.mul_small(10) < self.s {
            self.k -= 1;
            self.r.mul_small_assign(10);
            self.m_plus.mul_small_assign(10);
            self.m_minus.mul_small_assign(10);
            steps += 1;
        }
        while !self.high_fits() {
            self.s.mul_small_assign(10);
            self.k += 1;
            steps += 1;
        }
        steps
    }

    /// Scaling seeded by [`estimate_scale`], then corrected.
    pub fn scale_estimated(&mut self, estimate: i32) -> u32 {
        if estimate >= 0 {
            self.s.mul_pow10_assign(estimate as u32);
        } else {
            self.scale_up_numerator((-estimate) as u32);
        }
        self.k = estimate;
        let mut corrections = 0;
        while corrections < 2 {
            if !self.high_fits() {
                self.s.mul_small_assign(10);
                self.k += 1;
            } else if self.high_fits_one_lower() {
                self.scale_up_numerator(1);
                self.k -= 1;
            } else {
                break;
            }
            corrections += 1;
        }
        debug_assert!(self.high_fits() && !self.high_fits_one_lower());
        corrections
    }

    /// Free-format digit generation from a scaled state.
    pub fn generate(mut self) -> (u64, i32, u32) {
        let mut w = 0u64;
        let mut count = 0u32;
        let mut k = self.k;
        loop {
            k -= 1;
            count += 1;
            self.r.mul_small_assign(10);
            self.m_plus.mul_small_assign(10);
            self.m_minus.mul_small_assign(10);
            let mut digit = 0u64;
            while self.r >= self.s {
                self.r.sub_assign_unchecked(&self.s);
                digit += 1;
            }
            let low = if self.inclusive {
                self.r <= self.m_minus
            } else {
                self.r < self.m_minus
            };
            let high_sum = self.r.add(&self.m_plus);
            let high = if self.inclusive {
                high_sum >= self.s
            } else {
                high_sum > self.s
            };
            if !low && !high {
                w = w * 10 + digit;
                continue;
            }
            let round_up = match (low, high) {
                (true, false) => false,
                (false, true) => true,
                _ => {
                    let twice = self.r.shl(1);
                    match twice.cmp(&self.s) {
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Greater => true,
                        std::cmp::Ordering::Equal => digit & 1 == 1,
                    }
                }
            };
            w = w * 10 + digit + round_up as u64;
            return (w, k, count);
        }
    }
}

fn finish(d: &DecodedFloat, w: u64, q: i32) -> DecimalFP {
    DecimalFP::from_u64(d.sign, w, q).canonicalize()
}

/// Shortest, correctly rounded decimal for a nonzero finite value.
pub fn dragon4(d: &DecodedFloat) -> Result<DecimalFP> {
    dragon4_with_stats(d).map(|(dec, _)| dec)
}

pub fn dragon4_with_stats(d: &DecodedFloat) -> Result<(DecimalFP, Dragon4Stats)> {
    let mut state = ScaledFraction::new(d)?;
    let scale_iterations = state.scale_iteratively();
    let (w, q, digits) = state.generate();
    Ok((
        finish(d, w, q),
        Dragon4Stats {
            scale_iterations,
            digits,
        },
    ))
}

/// `ceil(log10(v))` from a native logarithm; within one of Dragon4's `k`.
pub fn estimate_scale(d: &DecodedFloat) -> Result<i32> {
    if !matches!(d.class, FloatClass::Normal | FloatClass::Subnormal) {
        return Err(Error::NoInterval(d.class));
    }
    let log = (d.m as f64).log10() + d.p as f64 * std::f64::consts::LOG10_2;
    Ok(log.ceil() as i32)
}

/// Dragon4 with the scale seeded by [`estimate_scale`].
pub fn dragon4_fast_scaled(d: &DecodedFloat) -> Result<DecimalFP> {
    dragon4_fast_scaled_with_stats(d).map(|(dec, _)| dec)
}

pub fn dragon4_fast_scaled_with_stats(d: &DecodedFloat) -> Result<(DecimalFP, Dragon4Stats)> {
    let mut state = ScaledFraction::new(d)?;
    let scale_iterations = state.scale_estimated(estimate_scale(d)?);
    let (w, q, digits) = state.generate();
    Ok((
        finish(d, w, q),
        Dragon4Stats {
            scale_iterations,
            digits,
        },
    ))
}

/// The decimal position Dragon4's iterative loop settles on.
pub fn exact_scale(d: &DecodedFloat) -> Result<i32> {
    let mut state = ScaledFraction::new(d)?;
    state.scale_iteratively();
    Ok(state.k)
}
