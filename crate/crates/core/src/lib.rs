//! Exact reduction and high-precision evaluation of the Witten zeta function
//! of the exceptional Lie algebra `g2`,
//!
//! ```text
//! zeta_g2(s1..s6) = sum_{m,n >= 1} 1 / (m^s1 n^s2 (m+n)^s3 (m+2n)^s4 (m+3n)^s5 (2m+3n)^s6)
//! ```
//!
//! Convergent values are rewritten into formal linear combinations of
//! multi-polylogarithms of depth at most two at 12th roots of unity
//! ([`reduce::reduce`]), evaluated to a requested number of digits
//! ([`numerics::Evaluator`]) and checked against brute-force double sums
//! ([`oracle`]).

pub mod cli;
pub mod cyclo;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod reduce;
pub mod verify;

pub use cyclo::{CycloRational, Rational};
pub use error::{Error, Result};
pub use model::{classify, Certificate, Classification, FormalSum, InputTuple, LinearForm, MpvTerm, Shape};
pub use numerics::{EvalResult, Evaluator, PrecisionContext};

/// Reduces `t` and evaluates the resulting certificate.
pub fn zeta_g2(t: &InputTuple, ev: &Evaluator) -> Result<(Certificate, EvalResult)> {
    let cert = reduce::reduce(t)?;
    let v = ev.evaluate(&cert.result)?;
    Ok((cert, v))
}
