//! Command-line surface. The binary only forwards `std::env::args` to [`run`].
//!
//! Exit codes: 0 on success, 2 on divergent or invalid input (including
//! argument errors), 1 on internal failures and failed acceptance items.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::cyclo::CycloRational;
use crate::error::{Error, Result};
use crate::model::{classify, Certificate, Classification, FormalSum, InputTuple, FORMS};
use crate::numerics::{EvalResult, Evaluator, PrecisionContext};
use crate::oracle;
use crate::reduce::reduce;
use crate::verify;
use crate::zeta_g2;

#[derive(Parser, Debug)]
#[command(name = "g2zeta", version, about = "Witten zeta values of type G2: reduction, evaluation and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 40)]
    pub digits: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TupleArg {
    /// Exponents s1 .. s6 of m, n, m+n, m+2n, m+3n, 2m+3n.
    #[arg(num_args = 6, value_names = ["S1", "S2", "S3", "S4", "S5", "S6"], required = true)]
    pub s: Vec<u32>,
}

impl TupleArg {
    fn tuple(&self) -> Result<InputTuple> {
        InputTuple::from_slice(&self.s)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convergence test and shape.
    Classify(TupleArg),
    /// Exact certificate in multi-polylogs at 12th roots of unity.
    Reduce(TupleArg),
    /// Numerical value with an error bound.
    Eval(TupleArg),
    /// Brute-force partial sums with extrapolation.
    Oracle {
        #[command(flatten)]
        tuple: TupleArg,
        /// Smallest cutoff M.
        #[arg(long = "m", default_value_t = 400)]
        m: u64,
        /// Number of doublings of M used for extrapolation.
        #[arg(long, default_value_t = 3)]
        levels: u32,
    },
    /// Run the acceptance suite.
    Verify {
        /// Run a single item.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(verify::ITEMS))]
        item: Option<String>,
    },
    /// One row per convergent tuple up to a weight.
    Tabulate {
        #[arg(long)]
        max_weight: u32,
        /// Only tuples (s, s, s, s, s, s).
        #[arg(long)]
        uniform: bool,
        /// Oracle cutoff for the delta column; 0 leaves the column empty.
        #[arg(long, default_value_t = 200)]
        oracle_m: u64,
    },
    /// `zeta_W(s; g2) = 120^s zeta_g2(s, s, s, s, s, s)`.
    Witten {
        s: u32,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (code, body, mut stderr) = match execute(&cli) {
        Ok(r) => (r.code, r.body, r.warnings),
        Err(e) => (exit_code(&e), String::new(), format!("{e}\n")),
    };
    let stdout = match &cli.common.out {
        Some(path) if !body.is_empty() => match std::fs::write(path, &body) {
            Ok(()) => String::new(),
            Err(e) => {
                stderr.push_str(&format!("cannot write {}: {e}\n", path.display()));
                return Outcome { code: 1, stdout: String::new(), stderr };
            }
        },
        _ => body,
    };
    Outcome { code, stdout, stderr }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergent(_) | Error::InvalidInput(_) | Error::Precondition(_) => 2,
        Error::Internal(_) => 1,
    }
}

/// Text produced by a command before it is routed to stdout or a file.
pub struct Rendered {
    pub code: i32,
    pub body: String,
    pub warnings: String,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Rendered { code: 0, body, warnings: String::new() }
    }
}

pub fn execute(cli: &Cli) -> Result<Rendered> {
    let c = &cli.common;
    match &cli.command {
        Command::Classify(t) => cmd_classify(&t.tuple()?, c),
        Command::Reduce(t) => cmd_reduce(&t.tuple()?, c),
        Command::Eval(t) => cmd_eval(&t.tuple()?, c),
        Command::Oracle { tuple, m, levels } => cmd_oracle(&tuple.tuple()?, *m, *levels, c),
        Command::Verify { item } => cmd_verify(item.as_deref(), c),
        Command::Tabulate { max_weight, uniform, oracle_m } => cmd_tabulate(*max_weight, *uniform, *oracle_m, c),
        Command::Witten { s } => cmd_witten(*s, c),
    }
}

fn json_line(v: serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json value serialises"))
}

fn classification_json(t: &InputTuple, cl: &Classification) -> serde_json::Value {
    let condition = match cl {
        Classification::Divergent(c) => Some(c.clone()),
        Classification::Convergent(_) => None,
    };
    json!({ "input": t.s(), "weight": t.weight(), "classification": cl.label(), "failed_condition": condition })
}

pub fn cmd_classify(t: &InputTuple, c: &Common) -> Result<Rendered> {
    let cl = classify(t);
    let body = if c.json { json_line(classification_json(t, &cl)) } else { format!("{t}: {cl}\n") };
    let code = if cl.is_convergent() { 0 } else { 2 };
    Ok(Rendered { code, body, warnings: String::new() })
}

/// Coefficient as a plain rational, or as its coordinates on `1, mu, mu^2, mu^3`.
pub fn render_coeff(c: &CycloRational) -> String {
    match c.as_rational() {
        Some(r) => r.to_string(),
        None => {
            let coords: Vec<String> = c.coords().iter().map(|r| r.to_string()).collect();
            format!("[{}]", coords.join(", "))
        }
    }
}

pub fn render_terms(fs: &FormalSum) -> String {
    let mut out = String::new();
    for (t, c) in fs.iter() {
        writeln!(out, "{} * {t}", render_coeff(c)).expect("write to string");
    }
    out
}

fn irrational_warning(cert: &Certificate) -> String {
    if cert.all_rational {
        String::new()
    } else {
        format!(
            "warning: all_rational=false for {}; single-form sums over m+3n and 2m+3n are the two shapes \
             whose coefficients are not rational\n",
            cert.input
        )
    }
}

pub fn cmd_reduce(t: &InputTuple, c: &Common) -> Result<Rendered> {
    let cert = reduce(t)?;
    let warnings = irrational_warning(&cert);
    let body = if c.json {
        format!("{}\n", cert.to_json())
    } else {
        let mut s = format!(
            "{t}: {}, weight {}, {} terms, all_rational={}\n",
            cert.classification,
            t.weight(),
            cert.result.len(),
            cert.all_rational
        );
        s.push_str(&render_terms(&cert.result));
        s
    };
    Ok(Rendered { code: 0, body, warnings })
}

fn value_json(t: Option<&InputTuple>, v: &EvalResult, digits: u32) -> serde_json::Value {
    json!({
        "input": t.map(|t| t.s()),
        "value": v.value.re.to_decimal(digits as usize),
        "imag": v.value.im.to_f64(),
        "error_bound": v.error_bound,
        "digits": digits,
    })
}

pub fn cmd_eval(t: &InputTuple, c: &Common) -> Result<Rendered> {
    let ev = Evaluator::new(PrecisionContext::new(c.digits));
    let (_, v) = zeta_g2(t, &ev)?;
    let body = if c.json {
        json_line(value_json(Some(t), &v, c.digits))
    } else {
        format!("{}\n", v.display_real(c.digits as usize))
    };
    Ok(Rendered::ok(body))
}

pub fn cmd_oracle(t: &InputTuple, m: u64, levels: u32, c: &Common) -> Result<Rendered> {
    if m == 0 {
        return Err(Error::InvalidInput("--m must be positive".into()));
    }
    let mut warnings = String::new();
    if let Classification::Divergent(cond) = classify(t) {
        warnings = format!("warning: {t} is divergent ({cond}); partial sums do not converge\n");
    }
    let r = oracle::extrapolate(t, m, levels);
    let body = if c.json {
        json_line(serde_json::to_value(&r).expect("oracle result serialises"))
    } else {
        format!(
            "partial        {:.17}\nextrapolated   {:.17}\nerror_estimate {:.2e}\n",
            r.partial, r.extrapolated, r.error_estimate
        )
    };
    Ok(Rendered { code: 0, body, warnings })
}

pub fn cmd_verify(item: Option<&str>, c: &Common) -> Result<Rendered> {
    let reports = verify::run(item, c.digits)?;
    let all = reports.iter().all(|r| r.passed);
    let body = if c.json {
        let items: Vec<_> = reports
            .iter()
            .map(|r| json!({ "item": r.id, "passed": r.passed, "seconds": r.seconds, "detail": r.detail }))
            .collect();
        json_line(json!({ "passed": all, "items": items }))
    } else {
        let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
        let failed = reports.iter().filter(|r| !r.passed).count();
        writeln!(s, "{} of {} items passed", reports.len() - failed, reports.len()).expect("write to string");
        s
    };
    Ok(Rendered { code: if all { 0 } else { 1 }, body, warnings: String::new() })
}

/// Rows of the tabulation, in lexicographic order.
pub fn tabulate_tuples(max_weight: u32, uniform: bool) -> Vec<InputTuple> {
    if uniform {
        (1..=max_weight / 6).map(|s| InputTuple::new([s; 6])).filter(|t| classify(t).is_convergent()).collect()
    } else {
        let mut v = verify::convergent_up_to(max_weight);
        v.sort_by_key(|t| t.s());
        v
    }
}

pub const CSV_HEADER: &str = "s1,s2,s3,s4,s5,s6,classification,all_rational,value,err_bound,oracle_delta";

pub fn cmd_tabulate(max_weight: u32, uniform: bool, oracle_m: u64, c: &Common) -> Result<Rendered> {
    let ev = Evaluator::new(PrecisionContext::new(c.digits));
    let mut rows = Vec::new();
    for t in tabulate_tuples(max_weight, uniform) {
        let (cert, v) = zeta_g2(&t, &ev)?;
        let delta = (oracle_m > 0).then(|| (v.value.re.to_f64() - oracle::extrapolate(&t, oracle_m, 3).extrapolated).abs());
        rows.push((t, cert, v, delta));
    }
    let body = if c.json {
        let items: Vec<_> = rows
            .iter()
            .map(|(t, cert, v, delta)| {
                json!({
                    "input": t.s(),
                    "classification": cert.classification.label(),
                    "all_rational": cert.all_rational,
                    "value": v.value.re.to_decimal(c.digits as usize),
                    "err_bound": v.error_bound,
                    "oracle_delta": delta,
                })
            })
            .collect();
        json_line(serde_json::Value::Array(items))
    } else {
        let mut s = format!("{CSV_HEADER}\n");
        for (t, cert, v, delta) in &rows {
            let e = t.s();
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{:.2e},{}",
                e[0],
                e[1],
                e[2],
                e[3],
                e[4],
                e[5],
                cert.classification.label(),
                cert.all_rational,
                v.value.re.to_decimal(c.digits as usize),
                v.error_bound,
                delta.map(|d| format!("{d:.2e}")).unwrap_or_default()
            )
            .expect("write to string");
        }
        s
    };
    Ok(Rendered::ok(body))
}

/// Product of the six forms at `(m, n) = (1, 1)`.
pub fn witten_constant() -> u64 {
    FORMS.iter().map(|f| f.eval(1, 1)).product()
}

pub fn cmd_witten(s: u32, c: &Common) -> Result<Rendered> {
    if s == 0 {
        return Err(Error::InvalidInput("witten needs s >= 1".into()));
    }
    let ev = Evaluator::new(PrecisionContext::new(c.digits));
    let (_, v) = zeta_g2(&InputTuple::new([s; 6]), &ev)?;
    let scale = num_bigint::BigInt::from(witten_constant()).pow(s);
    let scaled = EvalResult::new(v.value.mul_big(&scale), v.error_bound * witten_constant().pow(s) as f64);
    let body = if c.json {
        let mut j = value_json(None, &scaled, c.digits);
        j["s"] = json!(s);
        json_line(j)
    } else {
        format!("{}\n", scaled.display_real(c.digits as usize))
    };
    Ok(Rendered::ok(body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_120() {
        let at_one: Vec<u64> = FORMS.iter().map(|f| f.eval(1, 1)).collect();
        assert_eq!(at_one, vec![1, 1, 2, 3, 4, 5]);
        assert_eq!(witten_constant(), 120);
    }

    #[test]
    fn divergent_exit_code() {
        let o = run(["g2zeta", "reduce", "2", "0", "0", "0", "0", "0"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("divergent: w>2 fails"), "{o:?}");
    }

    #[test]
    fn tabulate_ranges() {
        assert!(tabulate_tuples(2, false).is_empty());
        assert_eq!(tabulate_tuples(6, true), vec![InputTuple::new([1; 6])]);
        let w3 = tabulate_tuples(3, false);
        for s in [[1, 0, 0, 1, 0, 1], [0, 0, 3, 0, 0, 0], [1, 0, 0, 0, 2, 0]] {
            assert!(w3.contains(&InputTuple::new(s)));
        }
    }
}
