//! Brute-force truncated double sums with Richardson-style extrapolation.
//!
//! Sums run in `f64` with compensated (Neumaier) accumulation; all terms are
//! positive, so the only loss is rounding, far below the extrapolation error.
//! The square `m, n <= 2^L M` is traversed once and the nested partial sums
//! `S_M, S_2M, ..., S_{2^L M}` are read off along the way.

use serde::Serialize;

use crate::model::{InputTuple, FORMS};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    #[serde(rename = "M")]
    pub m: u64,
    pub levels: u32,
    /// `S_M`.
    pub partial: f64,
    pub extrapolated: f64,
    /// Heuristic: change of the estimate when the last level is dropped.
    pub error_estimate: f64,
}

#[derive(Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `k^-s` for `k = 0..=max` (entry 0 unused).
fn inv_table(s: u32, max: usize) -> Vec<f64> {
    let mut v = vec![0.0; max + 1];
    for (k, x) in v.iter_mut().enumerate().skip(1) {
        *x = (k as f64).powi(-(s as i32));
    }
    v
}

/// `S_{cut}` for every cutoff in the increasing list `cuts`.
pub fn partial_sums(t: &InputTuple, cuts: &[u64]) -> Vec<f64> {
    assert!(!cuts.is_empty() && cuts.windows(2).all(|w| w[0] < w[1]) && cuts[0] >= 1);
    let s = t.s();
    let top = *cuts.last().expect("non-empty") as usize;
    let tables: Vec<Vec<f64>> = (0..6)
        .map(|i| {
            let f = FORMS[i];
            inv_table(s[i], (f.u as usize + f.v as usize) * top)
        })
        .collect();
    let [t1, t2, t3, t4, t5, t6] = [&tables[0], &tables[1], &tables[2], &tables[3], &tables[4], &tables[5]];
    let mut totals = vec![Neumaier::default(); cuts.len()];
    for m in 1..=top {
        let first = cuts.iter().position(|&c| c as usize >= m).expect("m <= top");
        let mut row = Neumaier::default();
        let mut ci = first;
        for n in 1..=top {
            let x = t2[n] * t3[m + n] * t4[m + 2 * n] * t5[m + 3 * n] * t6[2 * m + 3 * n];
            row.add(x);
            if n == cuts[ci] as usize {
                totals[ci].add(row.value() * t1[m]);
                ci += 1;
                if ci == cuts.len() {
                    break;
                }
            }
        }
    }
    totals.iter().map(Neumaier::value).collect()
}

/// `sum_{m,n=1}^{M}` of the defining series.
pub fn partial_sum(t: &InputTuple, m: u64) -> f64 {
    partial_sums(t, &[m])[0]
}

/// Decay model for the tail `S - S_M`: negative powers of `M` plus one
/// `log(M) M^(2-w)` term, ordered from slowest to fastest decay.
fn basis(weight: u32, count: usize) -> Vec<Box<dyn Fn(f64) -> f64>> {
    let lead = weight.saturating_sub(2).max(1) as i32;
    let mut out: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
    let mut k = 1i32;
    let mut log_done = false;
    while out.len() < count {
        if !log_done && k == lead {
            out.push(Box::new(move |m: f64| m.ln() * m.powi(-lead)));
            log_done = true;
            continue;
        }
        let p = k;
        out.push(Box::new(move |m: f64| m.powi(-p)));
        k += 1;
    }
    out
}

/// Fits `S_M = S + sum_i c_i phi_i(M)` through the given points and returns `S`.
fn fit(weight: u32, ms: &[f64], values: &[f64]) -> f64 {
    let n = ms.len();
    if n == 1 {
        return values[0];
    }
    let phis = basis(weight, n - 1);
    // Rows scaled by the largest cutoff keep the system well conditioned.
    let mut a: Vec<Vec<f64>> = ms
        .iter()
        .zip(values)
        .map(|(&m, &v)| {
            let mut row = vec![1.0];
            row.extend(phis.iter().map(|f| f(m)));
            row.push(v);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty");
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    a[0][n] / a[0][0]
}

/// Partial sum at `M` and the extrapolated limit from `S_M, ..., S_{2^levels M}`.
pub fn extrapolate(t: &InputTuple, m: u64, levels: u32) -> OracleResult {
    let w = t.weight();
    if levels == 0 {
        let half = (m / 2).max(1);
        let sums = if half < m { partial_sums(t, &[half, m]) } else { vec![partial_sum(t, m); 2] };
        return OracleResult { m, levels, partial: sums[1], extrapolated: sums[1], error_estimate: (sums[1] - sums[0]).abs() };
    }
    let cuts: Vec<u64> = (0..=levels).map(|k| m << k).collect();
    let sums = partial_sums(t, &cuts);
    let ms: Vec<f64> = cuts.iter().map(|&c| c as f64).collect();
    let full = fit(w, &ms, &sums);
    let reduced = fit(w, &ms[..ms.len() - 1], &sums[..sums.len() - 1]);
    OracleResult { m, levels, partial: sums[0], extrapolated: full, error_estimate: (full - reduced).abs() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term_and_monotone() {
        let t = InputTuple::new([1, 1, 1, 1, 1, 1]);
        assert!((partial_sum(&t, 1) - 1.0 / 120.0).abs() < 1e-18);
        let s = partial_sums(&t, &[10, 20, 40]);
        assert!(s[0] < s[1] && s[1] < s[2]);
        let direct: f64 = (1..=20u64)
            .flat_map(|m| (1..=20u64).map(move |n| (m, n)))
            .map(|(m, n)| 1.0 / FORMS.iter().map(|f| f.eval(m, n) as f64).product::<f64>())
            .sum();
        assert!((s[1] - direct).abs() < 1e-15);
    }

    #[test]
    fn levels_zero_is_partial() {
        let t = InputTuple::new([0, 0, 3, 0, 0, 0]);
        let r = extrapolate(&t, 50, 0);
        assert_eq!(r.partial, r.extrapolated);
    }

    #[test]
    fn extrapolation_of_a_counting_sum() {
        // sum (m+n)^-3 = zeta(2) - zeta(3)
        let t = InputTuple::new([0, 0, 3, 0, 0, 0]);
        let exact = std::f64::consts::PI.powi(2) / 6.0 - 1.202_056_903_159_594_3;
        let r = extrapolate(&t, 400, 3);
        assert!((r.extrapolated - exact).abs() < 1e-8, "{r:?}");
    }
}
