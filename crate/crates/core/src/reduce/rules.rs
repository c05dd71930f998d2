//! The splitting lemma and the four rewrite rules built on it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclo::{binomial, Rational};
use crate::error::{Error, Result};
use crate::model::{LinearForm, SumExpr, FORMS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

/// One summand of `1/(x^s y^t)`: `coeff * kept_form^(-kept) * (x+y)^(-sum_exp)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTerm {
    pub side: Side,
    pub kept: u32,
    pub sum_exp: u32,
    pub coeff: BigInt,
}

/// `1/(x^s y^t) = sum_{a<s} C(t+a-1,a) / (x^(s-a) (x+y)^(t+a))
///              + sum_{b<t} C(s+b-1,b) / (y^(t-b) (x+y)^(s+b))`.
pub fn lemma_split(s: u32, t: u32) -> Result<Vec<SplitTerm>> {
    if s == 0 || t == 0 {
        return Err(Error::Precondition(format!("lemma_split needs s, t >= 1, got ({s}, {t})")));
    }
    let mut out = Vec::with_capacity((s + t) as usize);
    for a in 0..s {
        out.push(SplitTerm {
            side: Side::X,
            kept: s - a,
            sum_exp: t + a,
            coeff: binomial((t + a) as i64 - 1, a as i64),
        });
    }
    for b in 0..t {
        out.push(SplitTerm {
            side: Side::Y,
            kept: t - b,
            sum_exp: s + b,
            coeff: binomial((s + b) as i64 - 1, b as i64),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    R1,
    R2,
    R35,
    R34,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R35 => "R35",
            RuleId::R34 => "R34",
        };
        f.write_str(s)
    }
}

/// Split of the forms in slots `x`, `y` using `x + y = c * z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    pub id: RuleId,
    pub x: usize,
    pub y: usize,
    pub c: u32,
    pub z: usize,
}

impl RewriteRule {
    pub fn new(id: RuleId) -> Self {
        let (x, y, c, z) = match id {
            RuleId::R1 => (0, 1, 1, 2),
            RuleId::R2 => (4, 5, 3, 3),
            RuleId::R35 => (2, 4, 2, 3),
            RuleId::R34 => (2, 3, 1, 5),
        };
        assert_eq!(FORMS[x].add(&FORMS[y]), FORMS[z].scale(c), "rule {id} is not a valid split");
        RewriteRule { id, x, y, c, z }
    }

    pub fn pair(&self) -> (LinearForm, LinearForm) {
        (FORMS[self.x], FORMS[self.y])
    }

    pub fn sum_form(&self) -> LinearForm {
        FORMS[self.z]
    }

    /// Branches of a unit-coefficient sum: `(coefficient, exponents)`.
    pub fn branches(&self, exps: &[u32; 6]) -> Result<Vec<(Rational, [u32; 6])>> {
        let (s, t) = (exps[self.x], exps[self.y]);
        if s == 0 || t == 0 {
            return Err(Error::Precondition(format!(
                "rule {} needs both {} and {} present",
                self.id, FORMS[self.x], FORMS[self.y]
            )));
        }
        let c = BigInt::from(self.c);
        let mut out = Vec::new();
        for term in lemma_split(s, t)? {
            let mut e = *exps;
            match term.side {
                Side::X => {
                    e[self.x] = term.kept;
                    e[self.y] = 0;
                }
                Side::Y => {
                    e[self.x] = 0;
                    e[self.y] = term.kept;
                }
            }
            e[self.z] += term.sum_exp;
            let coeff = Rational::new(term.coeff, c.pow(term.sum_exp));
            out.push((coeff, e));
        }
        Ok(out)
    }
}

/// Applies `rule` to `e`; the branches sum to `e` as convergent double sums.
pub fn apply_rule(e: &SumExpr, rule: &RewriteRule) -> Result<Vec<SumExpr>> {
    Ok(rule
        .branches(&e.exps)?
        .into_iter()
        .map(|(c, exps)| SumExpr::new(e.coeff.scale(&c), exps))
        .collect())
}

/// Exact value of `1/(x^s y^t)` minus its split, for testing.
pub fn split_residual(s: u32, t: u32, x: &Rational, y: &Rational) -> Result<Rational> {
    let pow = |b: &Rational, e: u32| -> Rational {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc *= b;
        }
        acc
    };
    let lhs = (pow(x, s) * pow(y, t)).recip();
    let xy = x + y;
    let mut rhs = Rational::zero();
    for term in lemma_split(s, t)? {
        let kept = match term.side {
            Side::X => pow(x, term.kept),
            Side::Y => pow(y, term.kept),
        };
        rhs += Rational::from_integer(term.coeff) / (kept * pow(&xy, term.sum_exp));
    }
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rational, CycloRational};

    fn triples(v: Vec<SplitTerm>) -> Vec<(Side, u32, u32, i64)> {
        v.into_iter()
            .map(|t| (t.side, t.kept, t.sum_exp, i64::try_from(t.coeff).unwrap()))
            .collect()
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(triples(lemma_split(1, 1).unwrap()), vec![(Side::X, 1, 1, 1), (Side::Y, 1, 1, 1)]);
        assert_eq!(
            triples(lemma_split(2, 1).unwrap()),
            vec![(Side::X, 2, 1, 1), (Side::X, 1, 2, 1), (Side::Y, 1, 2, 1)]
        );
        let c: Vec<i64> = triples(lemma_split(2, 2).unwrap()).into_iter().map(|t| t.3).collect();
        assert_eq!(c, vec![1, 2, 1, 2]);
        assert!(lemma_split(0, 3).is_err());
        assert!(split_residual(2, 1, &rational(1, 1), &rational(1, 1)).unwrap().is_zero());
        assert!(split_residual(1, 1, &rational(2, 1), &rational(3, 1)).unwrap().is_zero());
    }

    #[test]
    fn rules_preserve_weight_and_scale() {
        let e = SumExpr::new(CycloRational::one(), [1, 0, 0, 0, 1, 1]);
        let out = apply_rule(&e, &RewriteRule::new(RuleId::R2)).unwrap();
        assert_eq!(out.len(), 2);
        for b in &out {
            assert_eq!(b.weight(), 3);
            assert_eq!(b.exps[3], 1);
            assert_eq!(b.coeff, CycloRational::from_rational(rational(1, 3)));
        }
        let e = SumExpr::new(CycloRational::one(), [2, 2, 1, 1, 0, 0]);
        for b in apply_rule(&e, &RewriteRule::new(RuleId::R1)).unwrap() {
            assert_eq!(b.weight(), 6);
        }
    }
}
