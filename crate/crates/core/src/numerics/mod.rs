//! High-precision evaluation of polylogarithm values at 12th roots of unity
//! and of formal sums of them.

mod kernel;
pub mod real;

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::model::{FormalSum, MpvTerm};

pub use kernel::Kernel;
pub use real::{Complex, Real};

/// Working precision in decimal digits. The last five digits are guard digits:
/// the absolute error target is `10^(5 - digits)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { digits: 40 }
    }
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Self {
        PrecisionContext { digits: digits.max(15) }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn target(&self) -> f64 {
        10f64.powi(5 - self.digits as i32)
    }

    /// Binary grid for `digits` decimal digits plus guard bits.
    pub fn bits(&self) -> u32 {
        bits_for_target(10f64.powi(-(self.digits as i32)))
    }

    pub fn ulp(&self) -> f64 {
        2f64.powi(-(self.bits() as i32))
    }
}

pub(crate) fn bits_for_target(target: f64) -> u32 {
    (-target.log2()).ceil().max(53.0) as u32 + 48
}

/// A complex value and a bound on its absolute error.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Complex,
    pub error_bound: f64,
}

impl EvalResult {
    pub fn new(value: Complex, error_bound: f64) -> Self {
        EvalResult { value, error_bound }
    }

    pub fn zero(bits: u32) -> Self {
        EvalResult { value: Complex::zero(bits), error_bound: 0.0 }
    }

    pub fn conj(&self) -> EvalResult {
        EvalResult { value: self.value.conj(), error_bound: self.error_bound }
    }

    /// `value ± bound` with the given number of fractional digits.
    pub fn display_real(&self, digits: usize) -> String {
        format!("{} ±{:.1e}", self.value.re.to_decimal(digits), self.error_bound)
    }

    /// True when `other` lies within the combined error bounds plus `slack`.
    pub fn agrees_with(&self, other: &EvalResult, slack: f64) -> bool {
        let d = &self.value - &other.value.with_bits(self.value.bits());
        d.abs_f64() <= self.error_bound + other.error_bound + slack
    }
}

/// The twelve powers of `mu = exp(2 pi i/12)` on a `bits` grid.
pub fn roots_of_unity(bits: u32) -> Vec<Complex> {
    let half = Real::one(bits).div_int(2);
    let s3 = Real::from_int(3, bits).sqrt().div_int(2);
    let zero = Real::zero(bits);
    let one = Real::one(bits);
    // cos(k pi/6), sin(k pi/6) for k = 0..3
    let first = [
        (one.clone(), zero.clone()),
        (s3.clone(), half.clone()),
        (half.clone(), s3.clone()),
        (zero.clone(), one.clone()),
    ];
    let mut out = Vec::with_capacity(12);
    for k in 0..12usize {
        let quarter = k / 3;
        let (c, s) = first[k % 3].clone();
        // rotate by i^quarter
        let (re, im) = match quarter {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        };
        out.push(Complex::new(re, im));
    }
    out
}

/// `pi^power`.
pub fn pi_times(power: u32, ctx: &PrecisionContext) -> EvalResult {
    let bits = ctx.bits() + 8 * power;
    let p = real::pi(bits);
    let mut acc = Real::one(bits);
    for _ in 0..power {
        acc = acc.mul(&p);
    }
    let out = acc.with_bits(ctx.bits());
    EvalResult::new(Complex::from_real(out), 4.0 * ctx.ulp())
}

/// Hurwitz zeta `zeta(s, q)` for integer `s >= 2` and rational `q = num/den` in `(0, 1]`.
pub fn hurwitz_zeta(s: u32, num: u64, den: u64, ctx: &PrecisionContext) -> Result<EvalResult> {
    if s < 2 {
        return Err(Error::Precondition(format!("hurwitz_zeta needs s >= 2, got {s}")));
    }
    if num == 0 || den == 0 || num > den {
        return Err(Error::Precondition(format!("hurwitz_zeta needs q in (0,1], got {num}/{den}")));
    }
    let k = Kernel::shared(ctx.bits());
    Ok(k.hurwitz(s, num, den, ctx.target()))
}

/// `Li_s(mu^j)`.
pub fn li_depth1(s: u32, j: i64, ctx: &PrecisionContext) -> Result<EvalResult> {
    let term = MpvTerm::new(vec![s], vec![j])?;
    let k = Kernel::shared(ctx.bits());
    Ok(k.eval_term(&term, ctx.target()))
}

/// `Li_{s1,s2}(mu^j1, mu^j2) = sum_{k > n > 0} mu^(j1 k + j2 n) / (k^s1 n^s2)`.
pub fn li_depth2(s1: u32, s2: u32, j1: i64, j2: i64, ctx: &PrecisionContext) -> Result<EvalResult> {
    let term = MpvTerm::new(vec![s1, s2], vec![j1, j2])?;
    let k = Kernel::shared(ctx.bits());
    Ok(k.eval_term(&term, ctx.target()))
}

/// Evaluates formal sums, caching term values across calls.
///
/// The cache is keyed by term and precision, and holds only finished values,
/// so sharing an evaluator between threads is safe.
pub struct Evaluator {
    ctx: PrecisionContext,
    cache: Mutex<HashMap<(MpvTerm, u32), EvalResult>>,
}

impl Evaluator {
    pub fn new(ctx: PrecisionContext) -> Self {
        Evaluator { ctx, cache: Mutex::new(HashMap::new()) }
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// `sum coeff * term` with cyclotomic coefficients embedded at working precision.
    pub fn evaluate(&self, fs: &FormalSum) -> Result<EvalResult> {
        let out_bits = self.ctx.bits();
        if fs.is_empty() {
            return Ok(EvalResult::zero(out_bits));
        }
        let target = self.ctx.target();
        let weight: f64 = fs.iter().map(|(_, c)| 1.0 + c.magnitude_hint() * 2.5).sum();
        // per-term target so the weighted sum of term errors stays within half the budget
        let term_target = target / (2.0 * weight);
        let bits = bits_for_target(term_target);
        // bucket precision so repeated calls reuse kernels and cache entries
        let bits = bits.div_ceil(32) * 32;
        let kernel = Kernel::shared(bits);
        let mut acc = Complex::zero(bits);
        let mut bound = 0.0;
        for (term, coeff) in fs.iter() {
            let v = self.term_value(&kernel, term, term_target)?;
            let c = coeff.embed_bits(bits);
            let prod = v.value.mul(&c.value);
            acc = &acc + &prod;
            bound += v.error_bound * c.value.abs_f64().max(1e-300)
                + c.error_bound * (v.value.abs_f64() + v.error_bound)
                + 4.0 * 2f64.powi(-(bits as i32));
        }
        Ok(EvalResult::new(acc.with_bits(out_bits), bound + 2.0 * self.ctx.ulp()))
    }

    fn term_value(&self, kernel: &Kernel, term: &MpvTerm, target: f64) -> Result<EvalResult> {
        let key = (term.clone(), kernel.bits());
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(&key) {
            if v.error_bound <= target {
                return Ok(v.clone());
            }
        }
        let v = kernel.eval_term(term, target);
        self.cache.lock().expect("cache poisoned").insert(key, v.clone());
        Ok(v)
    }
}

/// One-shot `evaluate` with a fresh evaluator.
pub fn evaluate(fs: &FormalSum, ctx: &PrecisionContext) -> Result<EvalResult> {
    Evaluator::new(*ctx).evaluate(fs)
}
