//! Reduces `zeta_g2(1,0,0,1,0,1)` and prints the certificate and its trace.

use g2zeta::reduce::{reduce, replay};
use g2zeta::{Certificate, InputTuple};

fn main() -> g2zeta::Result<()> {
    let t = InputTuple::new([1, 0, 0, 1, 0, 1]);
    let cert = reduce(&t)?;
    println!("{t}: {} ({} terms, all_rational={})", cert.classification, cert.result.len(), cert.all_rational);
    for step in &cert.trace {
        let target = step.terminal.as_ref().map(|k| format!("{k:?}")).unwrap_or_else(|| format!("{} branches", step.branches.len()));
        println!("  {:<10} {:?} -> {target}", step.rule, step.expr);
    }
    println!("{}", g2zeta::cli::render_terms(&cert.result));

    assert_eq!(replay(&cert)?, cert.result);
    let back = Certificate::from_json(&cert.to_json())?;
    assert_eq!(back, cert);
    println!("trace replays and JSON round-trips");
    Ok(())
}
