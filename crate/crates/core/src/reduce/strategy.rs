//! Choice of the next rewrite for a given support.

use num_integer::Integer;

use super::rules::{RewriteRule, RuleId};
use crate::error::{Error, Result};
use crate::model::{LinearForm, FORMS};

/// `c_big * big = (a+1) p + b q` and `c_small * small = a p + b q`, where `p` is
/// the pure variable (`m` unless `swap`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AMatch {
    pub a: u32,
    pub b: u32,
    pub big: usize,
    pub small: usize,
    pub c_big: u32,
    pub c_small: u32,
    pub swap: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalKind {
    A { pure: Option<usize>, m: AMatch },
    /// `sum p^(-r) (a p + b q)^(-s)`.
    B { a: u32, b: u32, pure: usize, mixed: usize, swap: bool },
    Counting { a: u32, b: u32, slot: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Rule(RewriteRule),
    Terminal(TerminalKind),
}

/// Tries to write the forms in slots `i`, `j` as scaled A-forms with respect to
/// `m` (or `n` when `swap`).
pub fn a_match(i: usize, j: usize, swap: bool) -> Option<AMatch> {
    let coords = |f: LinearForm| if swap { f.swapped() } else { f };
    let (f1, f2) = (coords(FORMS[i]), coords(FORMS[j]));
    if f1.v == 0 || f2.v == 0 || f1.u == 0 || f2.u == 0 {
        return None;
    }
    let b = f1.v.lcm(&f2.v);
    let (c1, c2) = (b / f1.v, b / f2.v);
    let (u1, u2) = (c1 * f1.u, c2 * f2.u);
    let (big, small, c_big, c_small, a) = if u1 == u2 + 1 {
        (i, j, c1, c2, u2)
    } else if u2 == u1 + 1 {
        (j, i, c2, c1, u1)
    } else {
        return None;
    };
    debug_assert!(12 % a.lcm(&(a + 1)).lcm(&b) == 0);
    Some(AMatch { a, b, big, small, c_big, c_small, swap })
}

/// Next step for a sum whose positive exponents sit on the slots in `support`.
pub fn strategy(support: u8) -> Result<Step> {
    let has = |i: usize| support & (1 << i) != 0;
    if has(0) && has(1) {
        return Ok(Step::Rule(RewriteRule::new(RuleId::R1)));
    }
    if has(4) && has(5) {
        return Ok(Step::Rule(RewriteRule::new(RuleId::R2)));
    }
    let pure: Vec<usize> = (0..2).filter(|&i| has(i)).collect();
    let mixed: Vec<usize> = (2..6).filter(|&i| has(i)).collect();
    match (pure.as_slice(), mixed.as_slice()) {
        (&[p], &[q]) => {
            let swap = p == 1;
            let f = if swap { FORMS[q].swapped() } else { FORMS[q] };
            return Ok(Step::Terminal(TerminalKind::B { a: f.u, b: f.v, pure: p, mixed: q, swap }));
        }
        (&[p], &[i, j]) => {
            if let Some(m) = a_match(i, j, p == 1) {
                return Ok(Step::Terminal(TerminalKind::A { pure: Some(p), m }));
            }
        }
        (&[], &[i, j]) => {
            if let Some(m) = a_match(i, j, false).or_else(|| a_match(i, j, true)) {
                return Ok(Step::Terminal(TerminalKind::A { pure: None, m }));
            }
        }
        (&[], &[q]) => {
            let f = FORMS[q];
            return Ok(Step::Terminal(TerminalKind::Counting { a: f.u, b: f.v, slot: q }));
        }
        _ => {}
    }
    if has(2) && has(4) {
        return Ok(Step::Rule(RewriteRule::new(RuleId::R35)));
    }
    if has(2) && has(3) {
        return Ok(Step::Rule(RewriteRule::new(RuleId::R34)));
    }
    Err(Error::Internal(format!("no reduction step for support {support:#08b}")))
}

/// Supports reached from `support` in one step.
pub fn successors(support: u8) -> Result<Vec<u8>> {
    Ok(match strategy(support)? {
        Step::Terminal(_) => Vec::new(),
        Step::Rule(r) => {
            let z = 1u8 << r.z;
            vec![(support & !(1 << r.y)) | z, (support & !(1 << r.x)) | z]
        }
    })
}

/// Supports that can occur in a convergent sum: not empty and not a lone pure variable.
pub fn is_reachable_support(support: u8) -> bool {
    support != 0 && support != 0b01 && support != 0b10
}

/// Checks by exhaustive search that no support can recur along a rewrite path.
pub fn check_acyclic() -> Result<()> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = [0u8; 64];
    fn visit(s: u8, state: &mut [u8; 64]) -> Result<()> {
        match state[s as usize] {
            1 => return Err(Error::Internal(format!("support cycle through {s:#08b}"))),
            2 => return Ok(()),
            _ => {}
        }
        state[s as usize] = 1;
        for t in successors(s)? {
            visit(t, state)?;
        }
        state[s as usize] = 2;
        Ok(())
    }
    for s in 0u8..64 {
        if is_reachable_support(s) {
            visit(s, &mut state)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(slots: &[usize]) -> u8 {
        slots.iter().fold(0, |a, &i| a | (1 << i))
    }

    #[test]
    fn strategy_examples() {
        match strategy(mask(&[0, 3, 5])).unwrap() {
            Step::Terminal(TerminalKind::A { pure: Some(0), m }) => {
                assert_eq!((m.a, m.b, m.big, m.small, m.c_big, m.c_small), (3, 6, 5, 3, 2, 3));
            }
            s => panic!("unexpected {s:?}"),
        }
        assert_eq!(strategy(mask(&[0, 2, 4])).unwrap(), Step::Rule(RewriteRule::new(RuleId::R35)));
        assert_eq!(strategy(mask(&[4, 5])).unwrap(), Step::Rule(RewriteRule::new(RuleId::R2)));
        assert_eq!(
            strategy(mask(&[2])).unwrap(),
            Step::Terminal(TerminalKind::Counting { a: 1, b: 1, slot: 2 })
        );
        for s in successors(mask(&[4, 5])).unwrap() {
            assert!(matches!(strategy(s).unwrap(), Step::Terminal(TerminalKind::A { pure: None, .. })));
        }
    }

    #[test]
    fn every_reachable_support_has_a_step() {
        for s in 0u8..64 {
            if is_reachable_support(s) {
                strategy(s).unwrap();
            }
        }
        check_acyclic().unwrap();
    }

    #[test]
    fn matchable_pairs() {
        let ab = |i, j, swap| a_match(i, j, swap).map(|m| (m.a, m.b));
        assert_eq!(ab(2, 3, false), Some((1, 2)));
        assert_eq!(ab(2, 5, false), Some((2, 3)));
        assert_eq!(ab(3, 4, false), Some((2, 6)));
        assert_eq!(ab(3, 5, false), Some((3, 6)));
        assert_eq!(ab(4, 5, false), Some((1, 3)));
        assert_eq!(ab(2, 3, true), Some((1, 1)));
        assert_eq!(ab(2, 5, true), Some((2, 2)));
        assert_eq!(ab(3, 4, true), Some((2, 1)));
        assert_eq!(ab(3, 5, true), Some((3, 2)));
        assert_eq!(ab(2, 4, false), None);
        assert_eq!(ab(2, 4, true), None);
        assert_eq!(ab(4, 5, true), None);
    }
}
