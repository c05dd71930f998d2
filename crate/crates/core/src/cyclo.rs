//! Exact arithmetic: rationals, binomial coefficients and the cyclotomic
//! field `Q(mu)` generated by `mu = exp(2 pi i / 12)`.
//!
//! Elements of `Q(mu)` are stored in the power basis `{1, mu, mu^2, mu^3}`
//! modulo the 12th cyclotomic polynomial `x^4 - x^2 + 1`. All N-th roots of
//! unity with `N | 12` live in this field as powers of `mu`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerics::{Complex, EvalResult, PrecisionContext, Real};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"num/den"`, denominator always printed.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n = BigInt::from_str(n).map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
    let d = BigInt::from_str(d).map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// Serde adapter for a single rational as a `"num/den"` string.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for a list of rationals.
pub mod rational_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(rational_to_string).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

/// Binomial coefficient `C(n, k)`.
///
/// Zero when `k < 0` or `k > n`, except that `C(-1, 0) = 1`; the reduction
/// formulas hit that corner when a loop like `binom(s + a - 1, a)` runs with
/// `s = 0, a = 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k == 0 && n >= -1 {
        return BigInt::one();
    }
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Element `c0 + c1 mu + c2 mu^2 + c3 mu^3` of `Q(mu)`, `mu = exp(2 pi i/12)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloRational {
    coords: [Rational; 4],
}

impl CycloRational {
    pub fn new(coords: [Rational; 4]) -> Self {
        CycloRational { coords }
    }

    pub fn zero() -> Self {
        CycloRational::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        CycloRational::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloRational {
            coords: [r, Rational::zero(), Rational::zero(), Rational::zero()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        CycloRational::from_rational(rational_int(n))
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.coords
    }

    /// `mu^j` for any integer `j` (taken mod 12).
    pub fn mu_pow(j: i64) -> Self {
        let mut poly = [0i64; 12];
        poly[j.rem_euclid(12) as usize] = 1;
        let reduced = reduce_int_poly(&poly);
        CycloRational {
            coords: reduced.map(rational_int),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then(|| &self.coords[0])
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloRational {
            coords: self.coords.clone().map(|c| c * r),
        }
    }

    /// Field automorphism `mu -> mu^k` for `k` coprime to 12.
    pub fn galois(&self, k: i64) -> Self {
        assert!(
            matches!(k.rem_euclid(12), 1 | 5 | 7 | 11),
            "mu -> mu^{k} is not an automorphism"
        );
        let mut acc = CycloRational::zero();
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + CycloRational::mu_pow(k * i as i64).scale(c);
            }
        }
        acc
    }

    /// Complex conjugation, `mu^j -> mu^(-j)`.
    pub fn conj(&self) -> Self {
        self.galois(11)
    }

    /// Field norm down to `Q`: the product of the four Galois conjugates.
    pub fn norm(&self) -> Rational {
        let prod = self.clone() * self.galois(5) * self.galois(7) * self.galois(11);
        debug_assert!(prod.is_rational());
        prod.coords[0].clone()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let cofactor = self.galois(5) * self.galois(7) * self.galois(11);
        let n = (self.clone() * cofactor.clone()).coords[0].clone();
        Some(cofactor.scale(&n.recip()))
    }

    /// Largest absolute value of a coordinate, as `f64`; used to size guard digits.
    pub fn magnitude_hint(&self) -> f64 {
        self.coords
            .iter()
            .map(rational_abs_f64)
            .fold(0.0, f64::max)
    }

    /// Complex embedding with `mu = cos(pi/6) + i sin(pi/6)`.
    pub fn embed(&self, ctx: &PrecisionContext) -> EvalResult {
        self.embed_bits(ctx.bits())
    }

    pub(crate) fn embed_bits(&self, bits: u32) -> EvalResult {
        let roots = crate::numerics::roots_of_unity(bits);
        let mut acc = Complex::zero(bits);
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = Real::from_rational(c, bits);
            acc = &acc + &roots[i].mul_real(&r);
        }
        let bound = 8.0 * (1.0 + self.magnitude_hint()) * 2f64.powi(-(bits as i32));
        EvalResult::new(acc, bound)
    }

    pub fn to_strings(&self) -> [String; 4] {
        self.coords.clone().map(|c| rational_to_string(&c))
    }
}

pub(crate) fn rational_abs_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    let n = r.numer().abs().to_f64().unwrap_or(f64::INFINITY);
    let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
    if d.is_infinite() {
        // Tiny or huge: fall back to bit lengths.
        let nb = r.numer().bits() as f64;
        let db = r.denom().bits() as f64;
        return (2f64).powf(nb - db);
    }
    n / d
}

/// Reduce an integer polynomial in `mu` of degree < 12 to the power basis.
fn reduce_int_poly(poly: &[i64; 12]) -> [i64; 4] {
    let mut p = *poly;
    for deg in (4..12).rev() {
        let c = p[deg];
        if c != 0 {
            // mu^deg = mu^(deg-2) - mu^(deg-4)
            p[deg] = 0;
            p[deg - 2] += c;
            p[deg - 4] -= c;
        }
    }
    [p[0], p[1], p[2], p[3]]
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let names = ["", "mu12", "mu12^2", "mu12^3"];
        let mut first = true;
        write!(f, "(")?;
        for (c, name) in self.coords.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            match (name.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{name}")?,
                (false, false) => write!(f, "{a}*{name}")?,
            }
            first = false;
        }
        write!(f, ")")
    }
}

impl Add for CycloRational {
    type Output = CycloRational;
    fn add(self, rhs: CycloRational) -> CycloRational {
        &self + &rhs
    }
}

impl<'a> Add<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn add(self, rhs: &CycloRational) -> CycloRational {
        let mut coords = self.coords.clone();
        for (c, r) in coords.iter_mut().zip(&rhs.coords) {
            *c += r;
        }
        CycloRational { coords }
    }
}

impl Sub for CycloRational {
    type Output = CycloRational;
    fn sub(self, rhs: CycloRational) -> CycloRational {
        self + (-rhs)
    }
}

impl Neg for CycloRational {
    type Output = CycloRational;
    fn neg(self) -> CycloRational {
        CycloRational {
            coords: self.coords.map(|c| -c),
        }
    }
}

impl Mul for CycloRational {
    type Output = CycloRational;
    fn mul(self, rhs: CycloRational) -> CycloRational {
        &self * &rhs
    }
}

impl<'a> Mul<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn mul(self, rhs: &CycloRational) -> CycloRational {
        let mut prod: [Rational; 7] = Default::default();
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        for deg in (4..7).rev() {
            let c = std::mem::take(&mut prod[deg]);
            if !c.is_zero() {
                prod[deg - 2] += &c;
                prod[deg - 4] -= c;
            }
        }
        let [c0, c1, c2, c3, ..] = prod;
        CycloRational {
            coords: [c0, c1, c2, c3],
        }
    }
}

impl Serialize for CycloRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strs = <[String; 4]>::deserialize(d)?;
        let mut coords: [Rational; 4] = Default::default();
        for (c, s) in coords.iter_mut().zip(&strs) {
            *c = parse_rational(s).map_err(D::Error::custom)?;
        }
        Ok(CycloRational { coords })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cr(c: [i64; 4]) -> CycloRational {
        CycloRational::new(c.map(rational_int))
    }

    #[test]
    fn addition_examples() {
        assert!((cr([1, 0, 0, 0]) + cr([-1, 0, 0, 0])).is_zero());
        let sum = CycloRational::from_rational(rational(1, 2))
            + CycloRational::from_rational(rational(1, 3));
        assert_eq!(sum, CycloRational::from_rational(rational(5, 6)));
    }

    #[test]
    fn mu_plus_conjugate_is_sqrt3() {
        let mu = CycloRational::mu_pow(1);
        let s = mu.clone() + mu.conj();
        // mu^11 = mu^3 - mu ... reduced: mu + mu^11 = 2 mu - mu^3
        assert_eq!(s, cr([0, 2, 0, -1]));
        assert!(!s.is_rational());
        let ctx = PrecisionContext::new(30);
        let z = s.embed(&ctx).value;
        assert!((z.re.to_f64() - 3f64.sqrt()).abs() < 1e-15);
        assert!(z.im.to_f64().abs() < 1e-15);
    }

    #[test]
    fn multiplication_examples() {
        let mu = CycloRational::mu_pow(1);
        let mu3 = CycloRational::mu_pow(3);
        assert_eq!(&mu * &mu3, cr([-1, 0, 1, 0]));
        assert_eq!(&mu3 * &mu3, cr([-1, 0, 0, 0]));
        let mut p = CycloRational::one();
        for _ in 0..12 {
            p = &p * &mu;
        }
        assert_eq!(p, CycloRational::one());
    }

    #[test]
    fn powers_of_mu() {
        assert_eq!(CycloRational::mu_pow(0), CycloRational::one());
        assert_eq!(CycloRational::mu_pow(4), cr([-1, 0, 1, 0]));
        assert_eq!(CycloRational::mu_pow(-1), CycloRational::mu_pow(11));
        assert_eq!(CycloRational::mu_pow(6), CycloRational::from_int(-1));
    }

    #[test]
    fn embedding_examples() {
        let ctx = PrecisionContext::new(40);
        let i = CycloRational::mu_pow(3).embed(&ctx).value;
        assert!(i.re.to_f64().abs() < 1e-30 && (i.im.to_f64() - 1.0).abs() < 1e-30);
        let nu = CycloRational::mu_pow(4).embed(&ctx).value;
        assert!((nu.re.to_f64() + 0.5).abs() < 1e-15);
        assert!((nu.im.to_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let third = CycloRational::from_rational(rational(1, 3)).embed(&ctx);
        let err = &third.value.re - &Real::from_rational(&rational(1, 3), ctx.bits());
        assert!(err.to_f64().abs() <= third.error_bound);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(-1, 0), BigInt::from(1));
        assert_eq!(binomial(3, -1), BigInt::from(0));
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn embedding_of_mu_powers() {
        let ctx = PrecisionContext::new(30);
        for j in -12..24i64 {
            let z = CycloRational::mu_pow(j).embed(&ctx).value;
            let t = std::f64::consts::PI * j as f64 / 6.0;
            assert!((z.re.to_f64() - t.cos()).abs() < 1e-14, "j={j}");
            assert!((z.im.to_f64() - t.sin()).abs() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn serde_strings() {
        let a = CycloRational::new([rational(1, 2), rational(-3, 1), rational(0, 1), rational(7, 9)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"["1/2","-3/1","0/1","7/9"]"#);
        let b: CycloRational = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    fn arb_cyclo() -> impl Strategy<Value = CycloRational> {
        prop::array::uniform4((-20i64..20, 1i64..8)).prop_map(|c| {
            CycloRational::new(c.map(|(n, d)| rational(n, d)))
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            if let Some(inv) = a.inverse() {
                prop_assert_eq!(&a * &inv, CycloRational::one());
            } else {
                prop_assert!(a.is_zero());
            }
        }

        #[test]
        fn conjugation_is_multiplicative_involution(a in arb_cyclo(), b in arb_cyclo()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(a.conj().conj(), a.clone());
        }

        #[test]
        fn real_iff_self_conjugate(a in arb_cyclo()) {
            let ctx = PrecisionContext::new(30);
            let im = a.embed(&ctx).value.im.to_f64();
            prop_assert_eq!(a == a.conj(), im.abs() < 1e-20);
        }
    }
}
