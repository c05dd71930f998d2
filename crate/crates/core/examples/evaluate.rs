//! High-precision values of a few convergent tuples.

use g2zeta::{zeta_g2, Evaluator, InputTuple, PrecisionContext};

fn main() -> g2zeta::Result<()> {
    let ev = Evaluator::new(PrecisionContext::new(50));
    for s in [[1, 0, 0, 1, 0, 1], [1, 1, 1, 1, 1, 1], [1, 2, 1, 1, 1, 1], [2, 2, 2, 2, 2, 2], [0, 0, 0, 0, 3, 0]] {
        let t = InputTuple::new(s);
        let start = std::time::Instant::now();
        let (cert, v) = zeta_g2(&t, &ev)?;
        println!(
            "{t:<16} {}  [{} terms, {:.2} s]",
            v.display_real(50),
            cert.result.len(),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
