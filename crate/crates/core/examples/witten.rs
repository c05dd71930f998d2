//! Witten's zeta function `zeta_W(s; g2) = 120^s zeta_g2(s,...,s)` and the pi^12 evaluation at s = 2.

use g2zeta::cli::witten_constant;
use g2zeta::numerics::pi_times;
use g2zeta::{zeta_g2, Evaluator, InputTuple, PrecisionContext, Rational};

fn main() -> g2zeta::Result<()> {
    let ctx = PrecisionContext::new(40);
    let ev = Evaluator::new(ctx);
    let c = witten_constant();
    for s in 1..=3u32 {
        let (_, v) = zeta_g2(&InputTuple::new([s; 6]), &ev)?;
        let w = v.value.re.mul_big(&num_bigint::BigInt::from(c).pow(s));
        println!("zeta_W({s}; g2) = {}", w.to_decimal(35));
    }

    let (_, v) = zeta_g2(&InputTuple::new([2; 6]), &ev)?;
    let r = Rational::new(23.into(), (80 * 3u64.pow(12) * 49 * 11 * 13).into());
    let closed = pi_times(12, &ctx).value.mul_rational(&r);
    println!("zeta_g2(2,...,2)             = {}", v.value.re.to_decimal(36));
    println!("23/(2^4 5 3^12 7^2 11 13) pi^12 = {}", closed.re.to_decimal(36));
    Ok(())
}
