//! Arbitrary-precision unsigned integers.
//!
//! Only the operations needed by the exact converters are provided:
//! small-factor multiplication, shifts, powers of five and ten, addition,
//! guarded subtraction, comparison and shift-subtract division.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Limbs = SmallVec<[u64; 4]>;

/// Largest power of five that fits in a `u64`.
const POW5_CHUNK: u32 = 27;
const POW5_27: u64 = 7_450_580_596_923_828_125;

/// Unsigned integer stored as little-endian 64-bit limbs.
///
/// The limb vector never has trailing zero limbs; zero is the empty vector.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BigUint {
    limbs: Limbs,
}

impl BigUint {
    pub fn zero() -> Self {
        BigUint { limbs: Limbs::new() }
    }

    pub fn one() -> Self {
        BigUint::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        let mut limbs = Limbs::new();
        if v != 0 {
            limbs.push(v);
        }
        BigUint { limbs }
    }

    pub fn from_u128(v: u128) -> Self {
        let mut out = BigUint {
            limbs: smallvec::smallvec![v as u64, (v >> 64) as u64],
        };
        out.normalize();
        out
    }

    /// Builds a value from little-endian limbs, trimming high zero limbs.
    pub fn from_limbs(limbs: &[u64]) -> Self {
        let mut out = BigUint {
            limbs: Limbs::from_slice(limbs),
        };
        out.normalize();
        out
    }

    /// `5^e`.
    pub fn pow5(e: u32) -> Self {
        BigUint::one().mul_pow5(e)
    }

    /// `10^e`.
    pub fn pow10(e: u32) -> Self {
        BigUint::pow5(e).shl(e)
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.limbs.first().is_none_or(|l| l & 1 == 0)
    }

    /// Number of significant bits; zero has bit length 0.
    pub fn bit_len(&self) -> u32 {
        match self.limbs.last() {
            None => 0,
            Some(&top) => 64 * (self.limbs.len() as u32 - 1) + (64 - top.leading_zeros()),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u128),
            2 => Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64),
            _ => None,
        }
    }

    /// Bits `[start, start + 64)` as a `u64`, zero-filled past the end.
    pub fn bits_at(&self, start: u32) -> u64 {
        let limb = (start / 64) as usize;
        let off = start % 64;
        let lo = self.limbs.get(limb).copied().unwrap_or(0);
        if off == 0 {
            return lo;
        }
        let hi = self.limbs.get(limb + 1).copied().unwrap_or(0);
        (lo >> off) | (hi << (64 - off))
    }

    /// True when any of the low `bits` bits is set.
    pub fn has_low_bits(&self, bits: u32) -> bool {
        let full = (bits / 64) as usize;
        if self.limbs.iter().take(full).any(|&l| l != 0) {
            return true;
        }
        let rem = bits % 64;
        rem != 0 && self.limbs.get(full).is_some_and(|&l| l & ((1u64 << rem) - 1) != 0)
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn mul_small(&self, k: u64) -> Self {
        let mut out = self.clone();
        out.mul_small_assign(k);
        out
    }

    pub fn mul_small_assign(&mut self, k: u64) {
        if k == 0 {
            self.limbs.clear();
            return;
        }
        let mut carry = 0u64;
        for limb in self.limbs.iter_mut() {
            let t = (*limb as u128) * (k as u128) + carry as u128;
            *limb = t as u64;
            carry = (t >> 64) as u64;
        }
        if carry != 0 {
            self.limbs.push(carry);
        }
    }

    /// `self + k` for a single-word addend.
    pub fn add_small_assign(&mut self, k: u64) {
        let mut carry = k;
        for limb in self.limbs.iter_mut() {
            if carry == 0 {
                return;
            }
            let (s, c) = limb.overflowing_add(carry);
            *limb = s;
            carry = c as u64;
        }
        if carry != 0 {
            self.limbs.push(carry);
        }
    }

    pub fn mul_pow5(&self, e: u32) -> Self {
        let mut out = self.clone();
        out.mul_pow5_assign(e);
        out
    }

    pub fn mul_pow5_assign(&mut self, mut e: u32) {
        while e >= POW5_CHUNK {
            self.mul_small_assign(POW5_27);
            e -= POW5_CHUNK;
        }
        if e > 0 {
            self.mul_small_assign(5u64.pow(e));
        }
    }

    /// Multiplies by `10^e` as `5^e` followed by a shift.
    pub fn mul_pow10_assign(&mut self, e: u32) {
        self.mul_pow5_assign(e);
        self.shl_assign(e);
    }

    pub fn shl(&self, bits: u32) -> Self {
        let mut out = self.clone();
        out.shl_assign(bits);
        out
    }

    pub fn shl_assign(&mut self, bits: u32) {
        if self.is_zero() || bits == 0 {
            return;
        }
        let words = (bits / 64) as usize;
        let off = bits % 64;
        if off != 0 {
            let mut carry = 0u64;
            for limb in self.limbs.iter_mut() {
                let next = *limb >> (64 - off);
                *limb = (*limb << off) | carry;
                carry = next;
            }
            if carry != 0 {
                self.limbs.push(carry);
            }
        }
        if words > 0 {
            self.limbs.insert_many(0, std::iter::repeat_n(0, words));
        }
    }

    pub fn shr(&self, bits: u32) -> Self {
        let mut out = self.clone();
        out.shr_assign(bits);
        out
    }

    pub fn shr_assign(&mut self, bits: u32) {
        let words = (bits / 64) as usize;
        if words >= self.limbs.len() {
            self.limbs.clear();
            return;
        }
        if words > 0 {
            self.limbs.drain(..words);
        }
        let off = bits % 64;
        if off != 0 {
            let n = self.limbs.len();
            for i in 0..n {
                let hi = if i + 1 < n { self.limbs[i + 1] << (64 - off) } else { 0 };
                self.limbs[i] = (self.limbs[i] >> off) | hi;
            }
            self.normalize();
        }
    }

    pub fn add(&self, other: &BigUint) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &BigUint) {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        let mut carry = false;
        for (i, limb) in self.limbs.iter_mut().enumerate() {
            let b = other.limbs.get(i).copied().unwrap_or(0);
            if b == 0 && !carry && i >= other.limbs.len() {
                break;
            }
            let (s1, c1) = limb.overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *limb = s2;
            carry = c1 || c2;
        }
        if carry {
            self.limbs.push(1);
        }
    }

    /// `self - other`, or [`Error::Underflow`] when `other > self`.
    pub fn sub(&self, other: &BigUint) -> Result<Self> {
        let mut out = self.clone();
        out.sub_assign(other)?;
        Ok(out)
    }

    pub fn sub_assign(&mut self, other: &BigUint) -> Result<()> {
        if *self < *other {
            return Err(Error::Underflow);
        }
        self.sub_assign_unchecked(other);
        Ok(())
    }

    /// Caller guarantees `self >= other`.
    pub(crate) fn sub_assign_unchecked(&mut self, other: &BigUint) {
        let mut borrow = false;
        for (i, limb) in self.limbs.iter_mut().enumerate() {
            let b = other.limbs.get(i).copied().unwrap_or(0);
            if b == 0 && !borrow && i >= other.limbs.len() {
                break;
            }
            let (d1, b1) = limb.overflowing_sub(b);
            let (d2, b2) = d1.overflowing_sub(borrow as u64);
            *limb = d2;
            borrow = b1 || b2;
        }
        debug_assert!(!borrow);
        self.normalize();
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &BigUint) -> BigUint {
        if self.is_zero() || other.is_zero() {
            return BigUint::zero();
        }
        let mut out: Limbs = smallvec::smallvec![0; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            let mut carry = 0u128;
            for (j, &b) in other.limbs.iter().enumerate() {
                let t = a as u128 * b as u128 + out[i + j] as u128 + carry;
                out[i + j] = t as u64;
                carry = t >> 64;
            }
            out[i + other.limbs.len()] = carry as u64;
        }
        let mut r = BigUint { limbs: out };
        r.normalize();
        r
    }

    /// Quotient and remainder by a single nonzero word.
    pub fn divmod_small(&self, k: u64) -> (BigUint, u64) {
        assert!(k != 0, "division by zero");
        let mut q = self.clone();
        let r = q.divmod_small_assign(k);
        (q, r)
    }

    /// Divides in place and returns the remainder.
    pub fn divmod_small_assign(&mut self, k: u64) -> u64 {
        let mut rem = 0u128;
        for limb in self.limbs.iter_mut().rev() {
            let cur = (rem << 64) | *limb as u128;
            *limb = (cur / k as u128) as u64;
            rem = cur % k as u128;
        }
        self.normalize();
        rem as u64
    }

    /// Shift-and-subtract long division.
    pub fn div_rem(&self, divisor: &BigUint) -> (BigUint, BigUint) {
        assert!(!divisor.is_zero(), "division by zero");
        if self < divisor {
            return (BigUint::zero(), self.clone());
        }
        let shift = self.bit_len() - divisor.bit_len();
        let mut rem = self.clone();
        let mut d = divisor.shl(shift);
        let mut q_limbs: Limbs = smallvec::smallvec![0; (shift / 64 + 1) as usize];
        for i in (0..=shift).rev() {
            if rem >= d {
                rem.sub_assign_unchecked(&d);
                q_limbs[(i / 64) as usize] |= 1u64 << (i % 64);
            }
            d.shr_assign(1);
        }
        let mut q = BigUint { limbs: q_limbs };
        q.normalize();
        (q, rem)
    }

    /// Number of decimal digits; zero has one digit.
    pub fn decimal_len(&self) -> u32 {
        if self.is_zero() {
            return 1;
        }
        // floor(log10(2^(b-1))) + 1 <= len <= floor(log10(2^b)) + 1
        let b = self.bit_len() as u64;
        let est = (((b - 1) * 1_292_913_986) >> 32) as u32 + 1;
        if *self >= BigUint::pow10(est) {
            est + 1
        } else {
            est
        }
    }
}

impl Ord for BigUint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for BigUint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for BigUint {
    fn from(v: u64) -> Self {
        BigUint::from_u64(v)
    }
}

impl fmt::Display for BigUint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_u64() {
            return write!(f, "{v}");
        }
        const CHUNK: u64 = 10_000_000_000_000_000_000;
        let mut parts = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            parts.push(cur.divmod_small_assign(CHUNK));
        }
        let mut iter = parts.iter().rev();
        if let Some(first) = iter.next() {
            write!(f, "{first}")?;
        }
        for p in iter {
            write!(f, "{p:019}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BigUint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigUint({self})")
    }
}
