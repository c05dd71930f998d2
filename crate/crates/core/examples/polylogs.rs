//! Hurwitz zeta values and multi-polylogs at 12th roots of unity, with a stuffle self-test.

use g2zeta::numerics::{hurwitz_zeta, li_depth1, li_depth2};
use g2zeta::verify::stuffle_defect;
use g2zeta::PrecisionContext;

fn main() -> g2zeta::Result<()> {
    let ctx = PrecisionContext::new(40);
    println!("zeta(3)           = {}", hurwitz_zeta(3, 1, 1, &ctx)?.display_real(40));
    println!("zeta(2, 1/3)      = {}", hurwitz_zeta(2, 1, 3, &ctx)?.display_real(40));
    println!("Li_1(-1)          = {}", li_depth1(1, 6, &ctx)?.display_real(40));
    let v = li_depth1(2, 1, &ctx)?;
    println!("Li_2(mu12)        = {} + {} i", v.value.re.to_decimal(30), v.value.im.to_decimal(30));
    println!("Li_{{2,1}}(1, 1)    = {}", li_depth2(2, 1, 0, 0, &ctx)?.display_real(40));
    let v = li_depth2(1, 2, 4, 8, &ctx)?;
    println!("Li_{{1,2}}(nu, nu^2) = {} + {} i", v.value.re.to_decimal(30), v.value.im.to_decimal(30));

    for (a, b, j, k) in [(1, 2, 3, 5), (2, 2, 0, 6), (3, 1, 7, 1)] {
        let (d, bound) = stuffle_defect(a, b, j, k, &ctx)?;
        println!("stuffle a={a} b={b} x=mu12^{j} y=mu12^{k}: defect {d:.1e} <= bound {bound:.1e}");
    }
    Ok(())
}
