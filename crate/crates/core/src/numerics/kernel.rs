//! Series kernels on a fixed binary grid.
//!
//! Everything reduces to tails `T_z(p, N) = sum_{k >= N} z^k k^(-p)` with
//! `z` a 12th root of unity:
//!
//! * `z != 1`: `T = z^N sum_j g_j(z) (-1)^j (p)_j N^(-p-j)` where
//!   `1/(1 - z e^u) = sum_j g_j u^j`. The coefficients have radius of
//!   convergence `|arg z|`, which gives the truncation bound below.
//! * `z = 1`: Euler-Maclaurin.
//!
//! To keep fixed-point products well conditioned the kernel stores
//! `g_j 2^(-j)` and multiplies it by `(p)_j (2/N)^j`, both of moderate size.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::real::{self, Complex, Real};
use super::{roots_of_unity, EvalResult};
use crate::cyclo::{binomial, rational_abs_f64, Rational};
use crate::model::MpvTerm;

/// Euler-Maclaurin terms kept at most.
const EM_MAX: usize = 60;
/// Length of the stored `g_j` tables.
const G_MAX: usize = 160;
/// Cap on the asymptotic order of the inner-sum expansion in depth 2.
const R_ORDER_MAX: usize = 40;
const HEAD_START: u64 = 240;
const HEAD_MAX: u64 = 1 << 17;

static KERNELS: OnceLock<Mutex<HashMap<u32, Arc<Kernel>>>> = OnceLock::new();

pub struct Kernel {
    bits: u32,
    ulp: f64,
    roots: Vec<Complex>,
    pi: Real,
    /// `B_{2k}/(2k)! * 36^k` on the grid, and `|B_{2k}/(2k)!|` as f64.
    bern: Vec<(Real, f64)>,
    ln_fact: Vec<f64>,
    inv_pow: Mutex<HashMap<u32, Arc<Vec<Real>>>>,
    gtables: Mutex<HashMap<usize, Arc<GTable>>>,
}

/// Expansion data of `1/(1 - z e^u)` for one root `z != 1`.
struct GTable {
    /// `g_j 2^(-j)`.
    g: Vec<Complex>,
    g_abs: Vec<f64>,
    /// Cauchy radius and the max of `|1/(1 - z e^(-t))|` on `|t| = rho`.
    rho: f64,
    k_rho: f64,
    /// Split point of the remainder integral, `c < rho`.
    c: f64,
    /// `sup_{t >= 0} |1/(1 - z e^(-t))|`.
    sup_real: f64,
}

impl Kernel {
    /// Process-wide kernel for a grid, built on first use.
    pub fn shared(bits: u32) -> Arc<Kernel> {
        let map = KERNELS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock().expect("kernel registry poisoned");
        guard.entry(bits).or_insert_with(|| Arc::new(Kernel::new(bits))).clone()
    }

    pub fn new(bits: u32) -> Kernel {
        let mut ln_fact = vec![0.0f64; 2048];
        for i in 1..ln_fact.len() {
            ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
        }
        Kernel {
            bits,
            ulp: 2f64.powi(-(bits as i32)),
            roots: roots_of_unity(bits),
            pi: real::pi(bits),
            bern: bernoulli_table(EM_MAX + 2, bits),
            ln_fact,
            inv_pow: Mutex::new(HashMap::new()),
            gtables: Mutex::new(HashMap::new()),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn ln_gamma(&self, n: u32) -> f64 {
        self.ln_fact[n as usize - 1]
    }

    /// ln of the rising factorial `(p)_k`.
    fn ln_rising(&self, p: u32, k: usize) -> f64 {
        self.ln_gamma(p + k as u32) - self.ln_gamma(p)
    }

    fn inv_pows(&self, s: u32, upto: u64) -> Arc<Vec<Real>> {
        let mut map = self.inv_pow.lock().expect("inv_pow cache poisoned");
        if let Some(v) = map.get(&s) {
            if v.len() as u64 > upto {
                return v.clone();
            }
        }
        let v: Vec<Real> = std::iter::once(Real::zero(self.bits))
            .chain((1..=upto).map(|n| Real::recip_pow(n, s, self.bits)))
            .collect();
        let v = Arc::new(v);
        map.insert(s, v.clone());
        v
    }

    fn gtable(&self, z: usize) -> Arc<GTable> {
        debug_assert!(!z.is_multiple_of(12));
        if let Some(t) = self.gtables.lock().expect("gtable cache poisoned").get(&z) {
            return t.clone();
        }
        let t = Arc::new(self.build_gtable(z));
        self.gtables.lock().expect("gtable cache poisoned").insert(z, t.clone());
        t
    }

    fn build_gtable(&self, z: usize) -> GTable {
        let bits = self.bits;
        let one = Complex::from_real(Real::one(bits));
        let zc = &self.roots[z];
        let inv = (&one - zc).recip();
        let ratio = zc.mul(&inv);
        // w_m = 2^(-m)/m!
        let mut w = vec![Real::one(bits)];
        for m in 1..G_MAX {
            let prev = w[m - 1].clone();
            w.push(prev.div_int(2 * m as i64));
        }
        let mut g: Vec<Complex> = vec![inv];
        for i in 1..G_MAX {
            let mut acc = Complex::zero(bits);
            for m in 1..=i {
                acc = &acc + &g[i - m].mul_real(&w[m]);
            }
            g.push(ratio.mul(&acc));
        }
        let g_abs = g.iter().map(|c| c.abs_f64()).collect();

        let theta = {
            let t = 2.0 * PI * z as f64 / 12.0;
            if t > PI {
                t - 2.0 * PI
            } else {
                t
            }
        };
        let r = theta.abs();
        let rho = 0.9 * r;
        let c = 0.8 * rho;
        // sample |1/(1 - exp(i theta - t))| on |t| = rho
        let mut k_rho: f64 = 0.0;
        let samples = 2048;
        for s in 0..samples {
            let a = 2.0 * PI * s as f64 / samples as f64;
            let (tr, ti) = (rho * a.cos(), rho * a.sin());
            let mag = (-tr).exp();
            let ang = theta - ti;
            let (wr, wi) = (1.0 - mag * ang.cos(), -mag * ang.sin());
            k_rho = k_rho.max(1.0 / wr.hypot(wi));
        }
        let sup_real = if theta.cos() > 0.0 { 1.0 / theta.sin().abs() } else { 1.0 };
        GTable { g, g_abs, rho, k_rho: 1.25 * k_rho, c, sup_real }
    }

    /// Bound on `|T_z(p, n) - (first j_terms of the expansion)|`, split into the
    /// `n^(-p-J)` part (returned as the ln of its coefficient) and the
    /// exponentially small remainder.
    fn expansion_bound(&self, gt: &GTable, p: u32, n: f64, j_terms: usize) -> (f64, f64) {
        let lead = (gt.k_rho / (1.0 - gt.c / gt.rho)).ln() + self.ln_rising(p, j_terms)
            - j_terms as f64 * gt.rho.ln();
        let pm1 = p as f64 - 1.0;
        let d1 = n - pm1 / gt.c;
        let d2 = n - (pm1 + j_terms as f64) / gt.c;
        let e2 = if d1 <= 0.0 || d2 <= 0.0 {
            f64::INFINITY
        } else {
            let pre = (-n * gt.c + pm1 * gt.c.ln() - self.ln_gamma(p)).exp();
            pre * (gt.sup_real / d1 + gt.k_rho / (1.0 - gt.c / gt.rho) / d2)
        };
        (lead, e2)
    }

    /// `n^(q - base) * T_z(q, n)`; `None` when no admissible order meets `target`.
    fn tail_scaled(&self, z: usize, q: u32, base: u32, n: u64, target: f64) -> Option<(Complex, f64)> {
        debug_assert!(base >= 1 && base <= q);
        let nf = n as f64;
        let shift = (q - base) as f64 * nf.ln();
        if z.is_multiple_of(12) {
            return self.tail_em(q, base, n, target);
        }
        let gt = self.gtable(z % 12);
        let mut chosen = None;
        for j in 1..G_MAX {
            let (lead, e2) = self.expansion_bound(&gt, q, nf, j);
            let b = (lead - (q as f64 + j as f64) * nf.ln() + shift).exp() + e2 * shift.exp();
            if b <= target {
                chosen = Some((j, b));
                break;
            }
        }
        let (terms, trunc) = chosen?;
        let bits = self.bits;
        let mut e = Real::one(bits);
        let mut acc = Complex::zero(bits);
        for j in 0..terms {
            let t = gt.g[j].mul_real(&e);
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            e = e.mul_int(2 * (q as i64 + j as i64)).div_int(n as i64);
        }
        let phase = &self.roots[(z as u64 * n % 12) as usize];
        let scale = Real::recip_pow(n, base, bits);
        let out = phase.mul(&acc.mul_real(&scale));
        let gmax = gt.g_abs[..terms].iter().cloned().fold(1.0, f64::max);
        let rounding = 16.0 * (terms as f64 + 4.0) * gmax * self.ulp;
        Some((out, trunc + rounding))
    }

    /// Euler-Maclaurin version of `tail_scaled` for `z = 1`.
    fn tail_em(&self, q: u32, base: u32, n: u64, target: f64) -> Option<(Complex, f64)> {
        assert!(q >= 2, "divergent tail sum_(k>=N) k^-{q}");
        let nf = n as f64;
        let shift = (q - base) as f64 * nf.ln();
        // remainder after k terms: 2 |B_{2k+2}/(2k+2)!| (q)_{2k+1} n^(-q-2k-1)
        let mut chosen = None;
        for k in 0..EM_MAX {
            let ln_b = (2.0 * self.bern[k + 1].1).ln() + self.ln_rising(q, 2 * k + 1)
                - (q as f64 + 2.0 * k as f64 + 1.0) * nf.ln()
                + shift;
            if ln_b.exp() <= target {
                chosen = Some((k, ln_b.exp()));
                break;
            }
        }
        let (terms, trunc) = chosen?;
        let bits = self.bits;
        let n_big = BigInt::from(n);
        let inv_base = Real::recip_pow(n, base, bits);
        // n^(1-base)/(q-1) + n^(-base)/2
        let mut acc = inv_base.mul_int(n as i64).div_int(q as i64 - 1);
        acc = &acc + &inv_base.div_int(2);
        // sum_k beta_k (q)_{2k-1} n^(-2k+1), beta_k = B_2k/(2k)! split as (beta_k 36^k) * f_k
        let n2_36 = &n_big * &n_big * 36;
        let mut f = Real::one(bits).mul_int(q as i64).div_big(&(&n_big * 36));
        let mut s = Real::zero(bits);
        for k in 1..=terms {
            s = &s + &self.bern[k].0.mul(&f);
            let a = q as i64 + 2 * k as i64 - 1;
            f = f.mul_int(a).mul_int(a + 1).div_big(&n2_36);
        }
        acc = &acc + &s.mul(&inv_base);
        let rounding = 16.0 * (terms as f64 + 4.0) * self.ulp;
        Some((Complex::from_real(acc), trunc + rounding))
    }

    /// `sum_{k >= 0} (m k + r)^(-s)`, i.e. `m^(-s) zeta(s, r/m)`.
    pub fn hurwitz_scaled(&self, s: u32, r: u64, m: u64, target: f64) -> (Real, f64) {
        assert!(s >= 2 && r >= 1 && m >= 1);
        let bits = self.bits;
        let mut k_head = 8u64;
        loop {
            let y = m * k_head + r;
            let yf = y as f64;
            let mf = m as f64;
            // EM term j: beta_j (s)_{2j-1} m^(2j-1) y^(-s-2j+1)
            let mut chosen = None;
            for j in 0..EM_MAX {
                let ln_b = (2.0 * self.bern[j + 1].1).ln()
                    + self.ln_rising(s, 2 * j + 1)
                    + (2.0 * j as f64 + 1.0) * mf.ln()
                    - (s as f64 + 2.0 * j as f64 + 1.0) * yf.ln();
                if ln_b.exp() <= target {
                    chosen = Some((j, ln_b.exp()));
                    break;
                }
            }
            let Some((terms, trunc)) = chosen else {
                k_head *= 2;
                continue;
            };
            let mut acc = Real::zero(bits);
            for k in (0..k_head).rev() {
                acc = &acc + &Real::recip_pow(m * k + r, s, bits);
            }
            let y_s = Real::recip_pow(y, s, bits);
            // y^(1-s)/(m (s-1)) + y^(-s)/2
            acc = &acc + &y_s.mul_int(y as i64).div_int((m * (s as u64 - 1)) as i64);
            acc = &acc + &y_s.div_int(2);
            let yb = BigInt::from(y);
            let den = &yb * &yb * 36;
            let mut f = Real::one(bits).mul_int((s as u64 * m) as i64).div_big(&(&yb * 36));
            let mut em = Real::zero(bits);
            for j in 1..=terms {
                em = &em + &self.bern[j].0.mul(&f);
                let a = s as i64 + 2 * j as i64 - 1;
                f = f.mul_int(a).mul_int(a + 1).mul_int((m * m) as i64).div_big(&den);
            }
            acc = &acc + &em.mul(&y_s);
            let rounding = 8.0 * (k_head as f64 + terms as f64 + 8.0) * self.ulp;
            return (acc, trunc + rounding);
        }
    }

    pub fn hurwitz(&self, s: u32, num: u64, den: u64, target: f64) -> EvalResult {
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        let scale = BigInt::from(den).pow(s);
        let scale_f = (den as f64).powi(s as i32);
        let (z, b) = self.hurwitz_scaled(s, num, den, target / scale_f);
        EvalResult::new(Complex::from_real(z.mul_big(&scale)), b * scale_f)
    }

    pub fn eval_term(&self, term: &MpvTerm, target: f64) -> EvalResult {
        let e = term.exponents();
        let a = term.args();
        match e.len() {
            1 => self.li1(e[0], a[0] as usize, target),
            2 => self.li2(e[0], e[1], a[0] as usize, a[1] as usize, target),
            d => panic!("depth {d} terms are not supported"),
        }
    }

    /// `Li_s(mu^j)`.
    pub fn li1(&self, s: u32, j: usize, target: f64) -> EvalResult {
        let bits = self.bits;
        let j = j % 12;
        if s == 1 {
            assert!(j != 0, "Li_1(1) diverges");
            // -log(1 - mu^j) = -ln(2 sin(pi j/12)) + i pi (6 - j)/12
            let two = Real::from_int(2, bits);
            let arg = &two - &self.roots[j].re.mul_int(2);
            let re = -real::ln(&arg).div_int(2);
            let im = self.pi.mul_int(6 - j as i64).div_int(12);
            return EvalResult::new(Complex::new(re, im), 64.0 * self.ulp);
        }
        let order = 12 / (j as u64).gcd(&12);
        let mut acc = Complex::zero(bits);
        let mut bound = 0.0;
        for r in 1..=order {
            let (z, b) = self.hurwitz_scaled(s, r, order, target / (order as f64 + 1.0));
            let phase = &self.roots[(j as u64 * r % 12) as usize];
            acc = &acc + &phase.mul_real(&z);
            bound += b + 4.0 * self.ulp;
        }
        EvalResult::new(acc, bound)
    }

    /// `Li_{s1,s2}(mu^x, mu^y)`.
    pub fn li2(&self, s1: u32, s2: u32, x: usize, y: usize, target: f64) -> EvalResult {
        assert!(!(s1 == 1 && x.is_multiple_of(12)), "Li_(1,s)(1, .) diverges");
        let mut m = HEAD_START;
        while m <= HEAD_MAX {
            if let Some(r) = self.li2_at(s1, s2, x % 12, y % 12, m, target) {
                return r;
            }
            m *= 2;
        }
        panic!("depth-2 evaluation could not reach target {target:e} at {} bits", self.bits);
    }

    fn li2_at(&self, s1: u32, s2: u32, x: usize, y: usize, m: u64, target: f64) -> Option<EvalResult> {
        let bits = self.bits;
        let n = m + 1;
        let mf = m as f64;
        let z = (x + y) % 12;
        let budget = target / 4.0;

        // Coefficients c_i (normalised by n^-i) of the inner tail
        // R(n) = sum_{k > n} mu^(x k) k^-s1 expanded in powers of 1/n; the outer
        // tail becomes sum_i c_i n^i T_z(q0 + i, n).
        let (coeffs, q0, trunc) = if x != 0 {
            let gt = self.gtable(x);
            let mut chosen = None;
            for i in 1..=R_ORDER_MAX {
                let (lead, e2) = self.expansion_bound(&gt, s1, mf + 1.0, i);
                let q = (s1 + s2) as f64 + i as f64;
                let part1 = (lead + (1.0 - q) * mf.ln() - (q - 1.0).ln()).exp();
                let part2 = e2 / (1.0 - (-gt.c).exp());
                if part1 + part2 <= budget {
                    chosen = Some((i, part1 + part2));
                    break;
                }
            }
            let (order, trunc) = chosen?;
            let mut d = Real::one(bits);
            let mut coeffs = Vec::with_capacity(order);
            for i in 0..order {
                let mut c = gt.g[i].mul_real(&d);
                if i % 2 == 1 {
                    c = c.neg();
                }
                if i == 0 {
                    c = &c - &Complex::from_real(Real::one(bits));
                }
                coeffs.push(c);
                d = d.mul_int(2 * (s1 as i64 + i as i64)).div_int(n as i64);
            }
            (coeffs, s1 + s2, trunc)
        } else {
            // R(n) = n^(1-s1)/(s1-1) - n^(-s1)/2 + sum_k beta_k (s1)_{2k-1} n^(-s1-2k+1)
            let mut chosen = None;
            for k in 0..EM_MAX {
                let q = (s1 + s2) as f64 + 2.0 * k as f64;
                let ln_b = (2.0 * self.bern[k + 1].1).ln() + self.ln_rising(s1, 2 * k + 1)
                    - q * mf.ln()
                    - q.ln();
                if ln_b.exp() <= budget {
                    chosen = Some((k, ln_b.exp()));
                    break;
                }
            }
            let (terms, trunc) = chosen?;
            let mut coeffs = vec![Complex::zero(bits); 2 * terms + 2];
            coeffs[0] = Complex::from_real(Real::one(bits).div_int(s1 as i64 - 1));
            coeffs[1] = Complex::from_real(-Real::one(bits).div_int(2 * n as i64));
            let nb = BigInt::from(n);
            let n2_36 = &nb * &nb * 36;
            let mut f = Real::one(bits).mul_int(s1 as i64).div_big(&n2_36);
            for k in 1..=terms {
                coeffs[2 * k] = Complex::from_real(self.bern[k].0.mul(&f));
                let a = s1 as i64 + 2 * k as i64 - 1;
                f = f.mul_int(a).mul_int(a + 1).div_big(&n2_36);
            }
            (coeffs, s1 + s2 - 1, trunc)
        };

        let coeff_abs: Vec<f64> = coeffs.iter().map(Complex::abs_f64).collect();
        let coeff_sum: f64 = coeff_abs.iter().sum();
        let t_target = budget / (coeff_sum + 1.0);
        let mut tail = Complex::zero(bits);
        let mut tail_bound = trunc;
        for (i, c) in coeffs.iter().enumerate() {
            if coeff_abs[i] == 0.0 {
                continue;
            }
            let (t, b) = self.tail_scaled(z, q0 + i as u32, q0, n, t_target)?;
            tail = &tail + &c.mul(&t);
            tail_bound += coeff_abs[i] * b + 4.0 * self.ulp;
        }

        // head: R(m) from the kernel, then R(k-1) = R(k) + mu^(x k) k^-s1
        let harmonic = 1.0 + mf.ln();
        let (mut r, r_bound) = self.tail_scaled(x, s1, s1, n, budget / harmonic)?;
        let inv1 = self.inv_pows(s1, m);
        let inv2 = self.inv_pows(s2, m);
        let mut head = Complex::zero(bits);
        for k in (1..=m as usize).rev() {
            let w = r.mul_real(&inv2[k]);
            head = &head + &self.roots[(y * k) % 12].mul(&w);
            let step = self.roots[(x * k) % 12].mul_real(&inv1[k]);
            r = &r + &step;
        }
        let rounding = 32.0 * (mf + 8.0) * self.ulp * harmonic;
        let value = &head + &tail;
        Some(EvalResult::new(value, r_bound * harmonic + tail_bound + rounding))
    }
}

/// `(B_{2k}/(2k)! * 36^k, |B_{2k}/(2k)!|)` for `k = 0..len`.
fn bernoulli_table(len: usize, bits: u32) -> Vec<(Real, f64)> {
    let nmax = 2 * len;
    // B_n from sum_{k=0}^{n} C(n+1, k) B_k = 0
    let mut b: Vec<Rational> = vec![Rational::one()];
    for n in 1..=nmax {
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(n as i64 + 1, k as i64)) * bk;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(n + 1)));
    }
    let mut fact = BigInt::one();
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        if k > 0 {
            fact *= (2 * k - 1) * (2 * k);
        }
        let beta = &b[2 * k] / Rational::from_integer(fact.clone());
        let scaled = &beta * Rational::from_integer(BigInt::from(36).pow(k as u32));
        out.push((Real::from_rational(&scaled, bits), rational_abs_f64(&beta)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_tail(z: usize, p: u32, n: u64, upto: u64) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for k in (n..upto).rev() {
            let t = 2.0 * PI * ((z as u64 * k) % 12) as f64 / 12.0;
            let a = (k as f64).powi(-(p as i32));
            re += a * t.cos();
            im += a * t.sin();
        }
        (re, im)
    }

    #[test]
    fn tail_matches_direct_sum() {
        let k = Kernel::new(160);
        // for p large the direct sum converges fast enough to compare
        for z in [1usize, 3, 4, 6, 11] {
            let (v, b) = k.tail_scaled(z, 6, 6, 241, 1e-40).unwrap();
            let (re, im) = direct_tail(z, 6, 241, 200_000);
            assert!((v.re.to_f64() - re).abs() < 1e-20, "z={z}");
            assert!((v.im.to_f64() - im).abs() < 1e-20, "z={z}");
            assert!(b <= 1e-40);
        }
        let (v, _) = k.tail_em(5, 5, 241, 1e-40).unwrap();
        let (re, _) = direct_tail(0, 5, 241, 2_000_000);
        assert!((v.re.to_f64() - re).abs() < 1e-22);
    }

    #[test]
    fn g_table_matches_known_series() {
        // 1/(1 + e^u) = 1/2 - u/4 + u^3/48 - ...
        let k = Kernel::new(128);
        let gt = k.gtable(6);
        assert!((gt.g[0].re.to_f64() - 0.5).abs() < 1e-30);
        assert!((gt.g[1].re.to_f64() * 2.0 + 0.25).abs() < 1e-30);
        assert!(gt.g[2].re.to_f64().abs() < 1e-30);
        assert!((gt.g[3].re.to_f64() * 8.0 - 1.0 / 48.0).abs() < 1e-30);
    }

    #[test]
    fn bernoulli_values() {
        let t = bernoulli_table(4, 64);
        assert!((t[1].1 - 1.0 / 12.0).abs() < 1e-16);
        assert!((t[2].1 - 1.0 / 720.0).abs() < 1e-18);
        assert!((t[1].0.to_f64() - 3.0).abs() < 1e-15); // (1/12) * 36
    }
}
