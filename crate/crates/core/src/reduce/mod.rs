//! Reduction of convergent values to formal sums of depth-2 multi-polylogs.
//!
//! A sum is rewritten by [`strategy`] until every branch is a terminal A, B or
//! counting sum. Identical sub-sums recur across branches, so the rewrite
//! graph is built once as a DAG keyed by exponent vector; coefficients are
//! then pushed from the root to the terminals and each terminal is expanded
//! a single time.

mod rules;
mod strategy;
mod terminals;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclo::Rational;
use crate::error::{Error, Result};
use crate::model::{classify, Certificate, Classification, FormalSum, InputTuple, Terminal, TraceStep, support_mask, FORMS};

pub use rules::{apply_rule, lemma_split, split_residual, RewriteRule, RuleId, Side, SplitTerm};
pub use strategy::{a_match, check_acyclic, is_reachable_support, strategy, successors, AMatch, Step, TerminalKind};
pub use terminals::{expand_a, expand_b, expand_c, expand_counting, expand_s};

/// Certificate for a convergent tuple.
pub fn reduce(t: &InputTuple) -> Result<Certificate> {
    let classification = classify(t);
    if let Classification::Divergent(c) = &classification {
        return Err(Error::Divergent(c.clone()));
    }
    let mut steps: HashMap<[u32; 6], TraceStep> = HashMap::new();
    let mut postorder = Vec::new();
    explore(t.s(), &mut steps, &mut postorder)?;
    let trace: Vec<TraceStep> = postorder.iter().rev().map(|e| steps.remove(e).expect("explored")).collect();
    let result = propagate(t.s(), &trace)?;
    let all_rational = result.all_rational();
    Ok(Certificate { input: *t, classification, result, trace, all_rational })
}

fn explore(exps: [u32; 6], steps: &mut HashMap<[u32; 6], TraceStep>, postorder: &mut Vec<[u32; 6]>) -> Result<()> {
    if steps.contains_key(&exps) {
        return Ok(());
    }
    let step = step_for(&exps)?;
    let branches = step.branches.clone();
    steps.insert(exps, step);
    for b in branches {
        explore(b, steps, postorder)?;
    }
    postorder.push(exps);
    Ok(())
}

fn step_for(exps: &[u32; 6]) -> Result<TraceStep> {
    let support = support_mask(exps);
    match strategy(support)? {
        Step::Rule(rule) => {
            let (x, y) = rule.pair();
            let branches = rule.branches(exps)?;
            Ok(TraceStep {
                rule: rule.id.to_string(),
                pair: vec![x, y],
                sum_form: Some(rule.sum_form()),
                scale: branches.iter().map(|(c, _)| c.clone()).collect(),
                expr: *exps,
                branches: branches.into_iter().map(|(_, e)| e).collect(),
                terminal: None,
            })
        }
        Step::Terminal(kind) => {
            let (rule, pair, scale, terminal) = match kind {
                TerminalKind::A { pure, m } => {
                    let s1 = pure.map_or(0, |p| exps[p]);
                    let (e_big, e_small) = (exps[m.big], exps[m.small]);
                    let scale = BigInt::from(m.c_big).pow(e_big) * BigInt::from(m.c_small).pow(e_small);
                    let t = Terminal::A { a: m.a, b: m.b, s: [s1, e_big, e_small], swap: m.swap };
                    ("A", vec![FORMS[m.big], FORMS[m.small]], scale, t)
                }
                TerminalKind::B { a, b, pure, mixed, swap } => {
                    let t = Terminal::B { a, b, r: exps[pure], s: exps[mixed], swap };
                    ("B", vec![FORMS[pure], FORMS[mixed]], BigInt::one(), t)
                }
                TerminalKind::Counting { a, b, slot } => {
                    let t = Terminal::Counting { a, b, s: exps[slot] };
                    ("counting", vec![FORMS[slot]], BigInt::one(), t)
                }
            };
            Ok(TraceStep {
                rule: rule.into(),
                pair,
                sum_form: None,
                scale: vec![Rational::from_integer(scale)],
                expr: *exps,
                branches: Vec::new(),
                terminal: Some(terminal),
            })
        }
    }
}

/// Formal expansion of a terminal sum, without its scale.
pub fn expand_terminal(t: &Terminal) -> Result<FormalSum> {
    match *t {
        Terminal::A { a, b, s, .. } => expand_a(a, b, s[0], s[1], s[2]),
        Terminal::B { a, b, r, s, .. } => expand_b(a, b, r, s),
        Terminal::Counting { a, b, s } => expand_counting(a, b, s),
    }
}

/// Pushes coefficients from `root` through a parents-first trace.
fn propagate(root: [u32; 6], trace: &[TraceStep]) -> Result<FormalSum> {
    let mut coeff: HashMap<[u32; 6], Rational> = HashMap::new();
    coeff.insert(root, Rational::one());
    let mut out = FormalSum::new();
    for step in trace {
        let Some(c) = coeff.remove(&step.expr) else {
            return Err(Error::InvalidInput(format!("trace step {:?} is not reached from the input", step.expr)));
        };
        if c.is_zero() {
            continue;
        }
        match &step.terminal {
            Some(t) => {
                let [scale] = step.scale.as_slice() else {
                    return Err(Error::InvalidInput("terminal step needs exactly one scale".into()));
                };
                out.add_scaled_rational(&expand_terminal(t)?, &(&c * scale));
            }
            None => {
                if step.scale.len() != step.branches.len() {
                    return Err(Error::InvalidInput("split step needs one scale per branch".into()));
                }
                for (k, b) in step.scale.iter().zip(&step.branches) {
                    *coeff.entry(*b).or_insert_with(Rational::zero) += &c * k;
                }
            }
        }
    }
    if let Some(e) = coeff.keys().next() {
        return Err(Error::InvalidInput(format!("trace never resolves the sum {e:?}")));
    }
    Ok(out)
}

/// Recomputes the formal sum of a certificate from its trace alone.
pub fn replay(cert: &Certificate) -> Result<FormalSum> {
    propagate(cert.input.s(), &cert.trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rational, CycloRational};
    use crate::model::MpvTerm;

    #[test]
    fn worked_example_is_minus_c_minus_s() {
        let cert = reduce(&InputTuple::new([1, 0, 0, 1, 0, 1])).unwrap();
        let mut want = FormalSum::new();
        want.add_scaled_rational(&expand_c(3, 6, 2).unwrap(), &rational(-1, 1));
        want.add_scaled_rational(&expand_s(3, 2).unwrap(), &rational(-1, 1));
        assert_eq!(cert.result, want);
        assert_eq!(cert.result.len(), 42);
        assert!(cert.all_rational);
        assert_eq!(replay(&cert).unwrap(), cert.result);
    }

    #[test]
    fn single_form_and_b_identities() {
        let cert = reduce(&InputTuple::new([0, 0, 3, 0, 0, 0])).unwrap();
        let mut want = FormalSum::new();
        want.add_term(MpvTerm::new(vec![2], vec![0]).unwrap(), CycloRational::one());
        want.add_term(MpvTerm::new(vec![3], vec![0]).unwrap(), CycloRational::from_int(-1));
        assert_eq!(cert.result, want);
        let cert = reduce(&InputTuple::new([1, 0, 0, 0, 2, 0])).unwrap();
        assert_eq!(cert.result, expand_b(1, 3, 1, 2).unwrap());
        assert!(!reduce(&InputTuple::new([0, 0, 0, 0, 3, 0])).unwrap().all_rational);
        assert_eq!(reduce(&InputTuple::new([2, 0, 0, 0, 0, 0])), Err(Error::Divergent("w>2 fails".into())));
    }

    #[test]
    fn traces_replay_and_round_trip() {
        for s in [[1, 1, 1, 1, 1, 1], [2, 1, 0, 1, 1, 1], [0, 2, 1, 0, 1, 1]] {
            let cert = reduce(&InputTuple::new(s)).unwrap();
            assert_eq!(replay(&cert).unwrap(), cert.result);
            let back = Certificate::from_json(&cert.to_json()).unwrap();
            assert_eq!(back, cert);
        }
    }
}
