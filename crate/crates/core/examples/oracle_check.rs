//! Cross-checks evaluated certificates against brute-force double sums.

use g2zeta::{oracle, zeta_g2, Evaluator, InputTuple, PrecisionContext};

fn main() -> g2zeta::Result<()> {
    let ev = Evaluator::new(PrecisionContext::new(25));
    println!("{:<16} {:>22} {:>22} {:>10} {:>10}", "tuple", "certificate", "extrapolated", "delta", "estimate");
    for s in [[1, 0, 0, 1, 0, 1], [0, 0, 3, 0, 0, 0], [1, 0, 0, 0, 2, 0], [0, 1, 1, 1, 0, 1], [1, 1, 1, 1, 1, 1], [1, 1, 1, 1, 1, 2]] {
        let t = InputTuple::new(s);
        let v = zeta_g2(&t, &ev)?.1.value.re.to_f64();
        let o = oracle::extrapolate(&t, 800, 3);
        println!(
            "{:<16} {v:>22.17} {:>22.17} {:>10.1e} {:>10.1e}",
            t.to_string(),
            o.extrapolated,
            (v - o.extrapolated).abs(),
            o.error_estimate
        );
    }
    let p = oracle::partial_sum(&InputTuple::new([1; 6]), 300);
    println!("sum over m,n <= 300 of zeta_g2(1,1,1,1,1,1) terms: {p:.13}");
    Ok(())
}
