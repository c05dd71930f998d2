//! Closed expansions of the terminal double sums into multi-polylog terms.
//!
//! `B_{a,b}(r,s) = sum m^-r (am+bn)^-s`,
//! `A_{a,b}(s1,s2,s3) = sum m^-s1 ((a+1)m+bn)^-s2 (am+bn)^-s3`,
//! and `C_{a,b}`, `S_a` are the regularised pieces left over when `A` is
//! split along `((a+1)m+bn) - (am+bn) = m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclo::{binomial, CycloRational, Rational};
use crate::error::{Error, Result};
use crate::model::{FormalSum, MpvTerm};

/// Exponent of `mu12` for `mu_n^k`.
fn root(n: u32, k: i64) -> i64 {
    debug_assert!(12 % n == 0);
    (k * (12 / n as i64)).rem_euclid(12)
}

fn term(exps: &[u32], args: &[i64]) -> MpvTerm {
    MpvTerm::new(exps.to_vec(), args.to_vec()).expect("terminal expansions emit convergent terms")
}

fn add(fs: &mut FormalSum, t: MpvTerm, c: &Rational) {
    fs.add_term(t, CycloRational::from_rational(c.clone()));
}

fn pow(base: u32, e: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(e))
}

fn check_level(n: u32, what: &str) -> Result<()> {
    if n == 0 || 12 % n != 0 {
        return Err(Error::Precondition(format!("{what}: level {n} does not divide 12")));
    }
    Ok(())
}

/// `B_{a,b}(r,s) = a^(r-1)/b sum_{j<b} sum_{k<a} Li_{s,r}(mu_b^j, mu_a^k mu_b^-j)`.
pub fn expand_b(a: u32, b: u32, r: u32, s: u32) -> Result<FormalSum> {
    check_level(a.lcm(&b), "B")?;
    if r == 0 || s < 2 {
        return Err(Error::Precondition(format!("B_{{{a},{b}}}({r},{s}) needs r >= 1, s >= 2")));
    }
    let c = pow(a, r - 1) / Rational::from_integer(BigInt::from(b));
    let mut fs = FormalSum::new();
    for j in 0..b as i64 {
        for k in 0..a as i64 {
            add(&mut fs, term(&[s, r], &[root(b, j), root(a, k) - root(b, j)]), &c);
        }
    }
    Ok(fs)
}

/// `C_{a,b}(s)`; empty when `b = 1`.
pub fn expand_c(a: u32, b: u32, s: u32) -> Result<FormalSum> {
    check_level(a.lcm(&(a + 1)).lcm(&b), "C")?;
    if s < 2 {
        return Err(Error::Precondition(format!("C_{{{a},{b}}}({s}) needs s >= 2")));
    }
    let up = pow(a + 1, s - 1);
    let down = -pow(a, s - 1);
    let mut fs = FormalSum::new();
    for j in 1..b as i64 {
        let x = root(b, j);
        for k in 0..=a as i64 {
            add(&mut fs, term(&[1, s], &[x, root(a + 1, k) - x]), &up);
        }
        for k in 1..=a as i64 {
            add(&mut fs, term(&[1, s], &[x, root(a, k) - x]), &down);
        }
    }
    Ok(fs)
}

/// `S_a(s) = a^(s-1) sum_{k=1}^{a} [Li_{s,1}(mu_a^k,1) + Li_{s+1}(mu_a^k)] - (a+1)^(s-1) sum_{k=1}^{a+1} [...]`.
pub fn expand_s(a: u32, s: u32) -> Result<FormalSum> {
    check_level(a.lcm(&(a + 1)), "S")?;
    if s < 2 {
        return Err(Error::Precondition(format!("S_{a}({s}) needs s >= 2")));
    }
    let mut fs = FormalSum::new();
    for (n, c) in [(a, pow(a, s - 1)), (a + 1, -pow(a + 1, s - 1))] {
        for k in 1..=n as i64 {
            let x = root(n, k);
            add(&mut fs, term(&[s, 1], &[x, 0]), &c);
            add(&mut fs, term(&[s + 1], &[x]), &c);
        }
    }
    Ok(fs)
}

/// `A_{a,b}(s1,s2,s3)` via the regularised split of `1/(((a+1)m+bn)^s2 (am+bn)^s3)`.
pub fn expand_a(a: u32, b: u32, s1: u32, s2: u32, s3: u32) -> Result<FormalSum> {
    check_level(a.lcm(&(a + 1)).lcm(&b), "A")?;
    if s2 + s3 <= 1 || s1 + s2 + s3 <= 2 {
        return Err(Error::Precondition(format!(
            "A_{{{a},{b}}}({s1},{s2},{s3}) needs s2+s3 > 1 and s1+s2+s3 > 2"
        )));
    }
    if s3 == 0 {
        return expand_b(a + 1, b, s1, s2);
    }
    if s2 == 0 {
        return expand_b(a, b, s1, s3);
    }
    let sign3 = if s3.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let mut fs = FormalSum::new();
    for a3 in 0..s3.saturating_sub(1) {
        let mut c = Rational::from_integer(binomial((s2 + a3) as i64 - 1, a3 as i64));
        if a3 % 2 == 1 {
            c = -c;
        }
        fs.add_scaled_rational(&expand_b(a, b, s1 + s2 + a3, s3 - a3)?, &c);
    }
    for a2 in 0..s2.saturating_sub(1) {
        let c = Rational::from_integer(binomial((s3 + a2) as i64 - 1, a2 as i64)) * &sign3;
        fs.add_scaled_rational(&expand_b(a + 1, b, s1 + s3 + a2, s2 - a2)?, &c);
    }
    let w = s1 + s2 + s3;
    let c = Rational::from_integer(binomial((s2 + s3) as i64 - 2, s3 as i64 - 1)) * &sign3
        / Rational::from_integer(BigInt::from(b));
    fs.add_scaled_rational(&expand_c(a, b, w - 1)?, &c);
    fs.add_scaled_rational(&expand_s(a, w - 1)?, &c);
    Ok(fs)
}

/// Number of `(m, n) >= 1` with `a m + b n = k`.
fn representations(a: u64, b: u64, k: u64) -> u64 {
    (1..).map(|m| a * m).take_while(|&am| am < k).filter(|&am| (k - am).is_multiple_of(b)).count() as u64
}

/// `sum_{m,n >= 1} (a m + b n)^(-s)` for coprime `a, b`.
///
/// With `L = ab`, the representation count is `k/L + c(k mod L)`; the periodic
/// part is read off by counting and filtered through characters mod `L`.
pub fn expand_counting(a: u32, b: u32, s: u32) -> Result<FormalSum> {
    let l = a.lcm(&b);
    check_level(l, "counting")?;
    if a.gcd(&b) != 1 {
        return Err(Error::Precondition(format!("counting needs coprime coefficients, got ({a},{b})")));
    }
    if s <= 2 {
        return Err(Error::Precondition(format!("sum (am+bn)^-{s} diverges")));
    }
    let ab = Rational::from_integer(BigInt::from(a * b));
    let mut corr = Vec::with_capacity(l as usize);
    for res in 1..=l as u64 {
        let c_at = |k: u64| Rational::from_integer(BigInt::from(representations(a as u64, b as u64, k))) - Rational::from_integer(BigInt::from(k)) / &ab;
        let c = c_at(res);
        for rep in 1..=2u64 {
            if c_at(res + rep * l as u64) != c {
                return Err(Error::Internal(format!(
                    "representation count of {a}m+{b}n is not linear plus periodic at residue {res}"
                )));
            }
        }
        corr.push(c);
    }
    let mut fs = FormalSum::new();
    add(&mut fs, term(&[s - 1], &[0]), &ab.recip());
    let inv_l = Rational::new(BigInt::one(), BigInt::from(l));
    for j in 0..l as i64 {
        let mut coeff = CycloRational::zero();
        for (i, c) in corr.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let res = i as i64 + 1;
            coeff = &coeff + &CycloRational::mu_pow(root(l, -j * res)).scale(&(c * &inv_l));
        }
        fs.add_term(term(&[s], &[root(l, j)]), coeff);
    }
    Ok(fs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rational;

    fn t(e: &[u32], a: &[i64]) -> MpvTerm {
        term(e, a)
    }

    fn r(n: i64, d: i64) -> CycloRational {
        CycloRational::from_rational(rational(n, d))
    }

    #[test]
    fn b_examples() {
        assert_eq!(expand_b(1, 1, 2, 3).unwrap(), FormalSum::single(t(&[3, 2], &[0, 0]), r(1, 1)));
        let mut want = FormalSum::new();
        want.add_term(t(&[2, 1], &[0, 0]), r(1, 3));
        want.add_term(t(&[2, 1], &[4, 8]), r(1, 3));
        want.add_term(t(&[2, 1], &[8, 4]), r(1, 3));
        assert_eq!(expand_b(1, 3, 1, 2).unwrap(), want);
        let mut want = FormalSum::new();
        want.add_term(t(&[2, 1], &[0, 0]), r(1, 1));
        want.add_term(t(&[2, 1], &[0, 6]), r(1, 1));
        assert_eq!(expand_b(2, 1, 1, 2).unwrap(), want);
    }

    #[test]
    fn c_examples() {
        assert!(expand_c(3, 1, 4).unwrap().is_empty());
        let mut want = FormalSum::new();
        want.add_term(t(&[1, 3], &[6, 6]), r(3, 1));
        want.add_term(t(&[1, 3], &[6, 0]), r(4, 1));
        assert_eq!(expand_c(1, 2, 3).unwrap(), want);
        // 35 summands; mu_4^0 and mu_3^3 coincide, leaving 30 distinct terms
        assert_eq!(expand_c(3, 6, 2).unwrap().len(), 30);
    }

    #[test]
    fn s_examples() {
        let s = 3;
        let mut want = FormalSum::new();
        want.add_term(t(&[s, 1], &[0, 0]), r(1, 1));
        want.add_term(t(&[s + 1], &[0]), r(1, 1));
        for x in [6, 0] {
            want.add_term(t(&[s, 1], &[x, 0]), r(-4, 1));
            want.add_term(t(&[s + 1], &[x]), r(-4, 1));
        }
        assert_eq!(expand_s(1, s).unwrap(), want);
        assert_eq!(expand_s(3, 2).unwrap().len(), 12);
    }

    #[test]
    fn a_examples() {
        let mut want = FormalSum::new();
        want.add_scaled_rational(&expand_c(3, 6, 2).unwrap(), &rational(-1, 6));
        want.add_scaled_rational(&expand_s(3, 2).unwrap(), &rational(-1, 6));
        assert_eq!(expand_a(3, 6, 1, 1, 1).unwrap(), want);
        assert_eq!(expand_a(1, 1, 1, 2, 0).unwrap(), expand_b(2, 1, 1, 2).unwrap());
        let mut want = expand_b(1, 2, 2, 2).unwrap();
        want = want.add(&expand_b(2, 2, 2, 2).unwrap());
        want = want.add(&expand_c(1, 2, 3).unwrap());
        want = want.add(&expand_s(1, 3).unwrap());
        assert_eq!(expand_a(1, 2, 0, 2, 2).unwrap(), want);
    }

    #[test]
    fn counting_examples() {
        for s in 3..6 {
            let mut want = FormalSum::new();
            want.add_term(t(&[s - 1], &[0]), r(1, 1));
            want.add_term(t(&[s], &[0]), r(-1, 1));
            assert_eq!(expand_counting(1, 1, s).unwrap(), want);
        }
        // (1/2) z(s-1) - (1/2) z(s) - (1/2) sum_{k even} k^-s, with the even part (Li_s(1) + Li_s(-1))/2
        let s = 4;
        let fs = expand_counting(1, 2, s).unwrap();
        assert!(fs.all_rational());
        assert_eq!(fs.get(&t(&[3], &[0])), Some(&r(1, 2)));
        assert_eq!(fs.get(&t(&[4], &[0])), Some(&r(-3, 4)));
        assert_eq!(fs.get(&t(&[4], &[6])), Some(&r(-1, 4)));
        assert!(!expand_counting(1, 3, 3).unwrap().all_rational());
        assert!(expand_counting(1, 1, 2).is_err());
    }
}
