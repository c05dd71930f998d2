//! Fixed-point binary reals over `BigInt`.
//!
//! A `Real` with `bits = p` stores `raw` and represents `raw / 2^p`. Every
//! operation truncates to the same absolute grid, so errors are absolute and
//! grow additively with the operation count. Callers size `p` with guard bits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    raw: BigInt,
    bits: u32,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(20))
    }
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { raw: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Real { raw: BigInt::one() << bits, bits }
    }

    pub fn from_raw(raw: BigInt, bits: u32) -> Self {
        Real { raw, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn from_int<T: Into<BigInt>>(n: T, bits: u32) -> Self {
        Real { raw: n.into() << bits, bits }
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        Real { raw: (num << bits).div_floor(den), bits }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        Real::from_ratio(r.numer(), r.denom(), bits)
    }

    /// `k^(-s)` for a positive integer `k`.
    pub fn recip_pow(k: u64, s: u32, bits: u32) -> Self {
        let den = BigInt::from(k).pow(s);
        Real { raw: (BigInt::one() << bits) / den, bits }
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    pub fn abs(&self) -> Real {
        Real { raw: self.raw.abs(), bits: self.bits }
    }

    pub fn mul(&self, other: &Real) -> Real {
        debug_assert_eq!(self.bits, other.bits);
        Real { raw: (&self.raw * &other.raw) >> self.bits, bits: self.bits }
    }

    pub fn mul_int(&self, n: i64) -> Real {
        Real { raw: &self.raw * n, bits: self.bits }
    }

    pub fn mul_big(&self, n: &BigInt) -> Real {
        Real { raw: &self.raw * n, bits: self.bits }
    }

    pub fn div_int(&self, n: i64) -> Real {
        assert!(n != 0, "division by zero");
        Real { raw: &self.raw / n, bits: self.bits }
    }

    pub fn div_big(&self, n: &BigInt) -> Real {
        Real { raw: &self.raw / n, bits: self.bits }
    }

    pub fn div(&self, other: &Real) -> Real {
        assert!(!other.raw.is_zero(), "division by zero");
        Real { raw: (&self.raw << self.bits) / &other.raw, bits: self.bits }
    }

    pub fn mul_rational(&self, r: &Rational) -> Real {
        Real { raw: (&self.raw * r.numer()) / r.denom(), bits: self.bits }
    }

    pub fn shl(&self, k: u32) -> Real {
        Real { raw: &self.raw << k, bits: self.bits }
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.raw.is_negative(), "sqrt of negative");
        let scaled: BigUint = (&self.raw << self.bits).to_biguint().expect("nonnegative");
        Real { raw: BigInt::from(scaled.sqrt()), bits: self.bits }
    }

    /// Change the grid, truncating or zero-extending.
    pub fn with_bits(&self, bits: u32) -> Real {
        let raw = match bits.cmp(&self.bits) {
            Ordering::Equal => self.raw.clone(),
            Ordering::Greater => &self.raw << (bits - self.bits),
            Ordering::Less => &self.raw >> (self.bits - bits),
        };
        Real { raw, bits }
    }

    pub fn to_f64(&self) -> f64 {
        let b = self.raw.bits();
        if b <= 1000 {
            self.raw.to_f64().unwrap_or(0.0) * 2f64.powi(-(self.bits as i32))
        } else {
            let shift = b - 900;
            (&self.raw >> shift).to_f64().unwrap_or(0.0) * 2f64.powf(shift as f64 - self.bits as f64)
        }
    }

    /// Fixed-point decimal rendering with `digits` fractional digits (truncated toward zero).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let neg = self.raw.is_negative();
        let scaled = (self.raw.abs() * scale) >> self.bits;
        let s = scaled.to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg && scaled.sign() != Sign::NoSign { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Parse a plain decimal string (`-0.0123...`) onto the grid.
    pub fn parse_decimal(s: &str, bits: u32) -> Option<Real> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let digits: String = int.chars().chain(frac.chars()).collect();
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let n = digits.parse::<BigInt>().ok()?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let r = Real::from_ratio(&n, &den, bits);
        Some(if neg { -r } else { r })
    }
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { raw: &self.raw + &rhs.raw, bits: self.bits }
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real { raw: &self.raw - &rhs.raw, bits: self.bits }
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        Real { raw: self.raw + rhs.raw, bits: self.bits }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        Real { raw: self.raw - rhs.raw, bits: self.bits }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { raw: -self.raw, bits: self.bits }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        Some(self.raw.cmp(&other.raw))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_decimal(20), self.im.to_decimal(20))
    }
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Complex { re: Real::zero(bits), im: Real::zero(bits) }
    }

    pub fn from_real(re: Real) -> Self {
        let bits = re.bits();
        Complex { re, im: Real::zero(bits) }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits()
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let re = &self.re.mul(&o.re) - &self.im.mul(&o.im);
        let im = &self.re.mul(&o.im) + &self.im.mul(&o.re);
        Complex { re, im }
    }

    pub fn mul_real(&self, r: &Real) -> Complex {
        Complex { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn mul_int(&self, n: i64) -> Complex {
        Complex { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    pub fn mul_big(&self, n: &BigInt) -> Complex {
        Complex { re: self.re.mul_big(n), im: self.im.mul_big(n) }
    }

    pub fn div_int(&self, n: i64) -> Complex {
        Complex { re: self.re.div_int(n), im: self.im.div_int(n) }
    }

    pub fn mul_rational(&self, r: &Rational) -> Complex {
        Complex { re: self.re.mul_rational(r), im: self.im.mul_rational(r) }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: -self.re.clone(), im: -self.im.clone() }
    }

    /// `1 / self`.
    pub fn recip(&self) -> Complex {
        let bits = self.bits();
        let n2 = &self.re.mul(&self.re) + &self.im.mul(&self.im);
        let inv = Real::one(bits).div(&n2);
        Complex { re: self.re.mul(&inv), im: (-self.im.clone()).mul(&inv) }
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn with_bits(&self, bits: u32) -> Complex {
        Complex { re: self.re.with_bits(bits), im: self.im.with_bits(bits) }
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

/// pi by Machin's formula, `16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(bits: u32) -> Real {
    let work = bits + 32;
    let a = atan_recip(5, work).mul_int(16);
    let b = atan_recip(239, work).mul_int(4);
    (a - b).with_bits(bits)
}

/// `atan(1/k)` by its Taylor series.
fn atan_recip(k: i64, bits: u32) -> Real {
    let k2 = BigInt::from(k * k);
    let mut power = (BigInt::one() << bits) / k; // 1/k^(2n+1)
    let mut sum = BigInt::zero();
    let mut n: i64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * n + 1);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        n += 1;
    }
    Real::from_raw(sum, bits)
}

/// Natural log of a positive real.
pub fn ln(x: &Real) -> Real {
    assert!(!x.is_negative() && !x.is_zero(), "ln of nonpositive value");
    let bits = x.bits();
    let work = bits + 32;
    let xw = x.with_bits(work);
    // x = 2^e * y with y in [1, 2)
    let e = xw.raw().bits() as i64 - 1 - work as i64;
    let y = if e >= 0 {
        Real::from_raw(xw.raw() >> e as u64, work)
    } else {
        Real::from_raw(xw.raw() << (-e) as u64, work)
    };
    let one = Real::one(work);
    let t = (&y - &one).div(&(&y + &one));
    let ln_y = atanh_series(&t).mul_int(2);
    let ln2 = atanh_series(&Real::one(work).div_int(3)).mul_int(2);
    (&ln_y + &ln2.mul_int(e)).with_bits(bits)
}

fn atanh_series(t: &Real) -> Real {
    let bits = t.bits();
    let t2 = t.mul(t);
    let mut power = t.clone();
    let mut sum = Real::zero(bits);
    let mut n: i64 = 0;
    while !power.is_zero() {
        sum = &sum + &power.div_int(2 * n + 1);
        power = power.mul(&t2);
        n += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert_eq!(
            p.to_decimal(50),
            "3.14159265358979323846264338327950288419716939937510"
        );
    }

    #[test]
    fn ln_values() {
        let b = 200;
        assert_eq!(ln(&Real::from_int(2, b)).to_decimal(40), "0.6931471805599453094172321214581765680755");
        assert_eq!(ln(&Real::from_int(3, b)).to_decimal(40), "1.0986122886681096913952452369225257046474");
        let small = Real::from_ratio(&BigInt::from(1), &BigInt::from(10), b);
        assert!((ln(&small).to_f64() + 10f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sqrt_and_decimal() {
        let s = Real::from_int(3, 200).sqrt();
        assert_eq!(s.to_decimal(30), "1.732050807568877293527446341505");
        let neg = -Real::from_ratio(&BigInt::from(1), &BigInt::from(8), 64);
        assert_eq!(neg.to_decimal(3), "-0.125");
        let parsed = Real::parse_decimal("-0.125", 64).unwrap();
        assert_eq!(parsed, neg);
    }

    #[test]
    fn complex_recip() {
        let b = 128;
        let z = Complex::new(Real::from_int(3, b), Real::from_int(4, b));
        let w = z.recip();
        assert!((w.re.to_f64() - 0.12).abs() < 1e-15);
        assert!((w.im.to_f64() + 0.16).abs() < 1e-15);
    }
}
