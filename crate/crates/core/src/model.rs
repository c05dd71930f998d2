//! Shared vocabulary: exponent tuples, the six linear forms, double-sum
//! expressions, multi-polylog terms, formal sums and certificates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::{rational_vec_serde, CycloRational, Rational};
use crate::error::{Error, Result};

/// Exponents `(s1, ..., s6)` attached to `m, n, m+n, m+2n, m+3n, 2m+3n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InputTuple {
    s: [u32; 6],
}

impl InputTuple {
    pub fn new(s: [u32; 6]) -> Self {
        InputTuple { s }
    }

    pub fn from_slice(s: &[u32]) -> Result<Self> {
        let s: [u32; 6] = s
            .try_into()
            .map_err(|_| Error::InvalidInput(format!("expected 6 exponents, got {}", s.len())))?;
        Ok(InputTuple { s })
    }

    pub fn s(&self) -> [u32; 6] {
        self.s
    }

    pub fn weight(&self) -> u32 {
        self.s.iter().sum()
    }

    /// All tuples of weight exactly `w`, in lexicographic order.
    pub fn all_of_weight(w: u32) -> Vec<InputTuple> {
        let mut out = Vec::new();
        let mut cur = [0u32; 6];
        fn rec(i: usize, left: u32, cur: &mut [u32; 6], out: &mut Vec<InputTuple>) {
            if i == 5 {
                cur[5] = left;
                out.push(InputTuple::new(*cur));
                return;
            }
            for v in 0..=left {
                cur[i] = v;
                rec(i + 1, left - v, cur, out);
            }
        }
        rec(0, w, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for InputTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.s;
        write!(f, "({},{},{},{},{},{})", s[0], s[1], s[2], s[3], s[4], s[5])
    }
}

/// `u*m + v*n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub u: u32,
    pub v: u32,
}

/// The six positive-root forms, in slot order.
pub const FORMS: [LinearForm; 6] = [
    LinearForm { u: 1, v: 0 },
    LinearForm { u: 0, v: 1 },
    LinearForm { u: 1, v: 1 },
    LinearForm { u: 1, v: 2 },
    LinearForm { u: 1, v: 3 },
    LinearForm { u: 2, v: 3 },
];

impl LinearForm {
    pub fn new(u: u32, v: u32) -> Result<Self> {
        if u == 0 && v == 0 {
            return Err(Error::InvalidInput("the zero form is not a linear form".into()));
        }
        Ok(LinearForm { u, v })
    }

    pub fn eval(&self, m: u64, n: u64) -> u64 {
        self.u as u64 * m + self.v as u64 * n
    }

    /// Slot of a canonical form.
    pub fn slot(&self) -> Option<usize> {
        FORMS.iter().position(|f| f == self)
    }

    pub fn is_pure(&self) -> bool {
        self.u == 0 || self.v == 0
    }

    pub fn add(&self, o: &LinearForm) -> LinearForm {
        LinearForm { u: self.u + o.u, v: self.v + o.v }
    }

    pub fn scale(&self, c: u32) -> LinearForm {
        LinearForm { u: self.u * c, v: self.v * c }
    }

    /// Coordinates swapped, i.e. the same form with `m` and `n` exchanged.
    pub fn swapped(&self) -> LinearForm {
        LinearForm { u: self.v, v: self.u }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*m+{}*n", self.u, self.v)
    }
}

impl FromStr for LinearForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse linear form {s:?}"));
        let (a, b) = s.split_once('+').ok_or_else(bad)?;
        let u = a.trim().strip_suffix("*m").ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let v = b.trim().strip_suffix("*n").ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        LinearForm::new(u, v)
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `coeff * sum_{m,n >= 1} prod_i FORMS[i]^(-exps[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumExpr {
    pub coeff: CycloRational,
    pub exps: [u32; 6],
}

impl SumExpr {
    pub fn new(coeff: CycloRational, exps: [u32; 6]) -> Self {
        SumExpr { coeff, exps }
    }

    pub fn weight(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Bit `i` set iff form `i` carries a positive exponent.
    pub fn support(&self) -> u8 {
        support_mask(&self.exps)
    }

    pub fn factors(&self) -> Vec<(LinearForm, u32)> {
        FORMS.iter().zip(self.exps).filter(|(_, e)| *e > 0).map(|(f, e)| (*f, e)).collect()
    }
}

pub fn support_mask(exps: &[u32; 6]) -> u8 {
    exps.iter().enumerate().filter(|(_, e)| **e > 0).fold(0, |acc, (i, _)| acc | (1 << i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Regular,
    /// Only the form `a*m + b*n` carries an exponent.
    SingleForm(u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Carries the failed convergence condition.
    Divergent(String),
    Convergent(Shape),
}

impl Classification {
    pub fn is_convergent(&self) -> bool {
        matches!(self, Classification::Convergent(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::Divergent(_) => "divergent",
            Classification::Convergent(Shape::Regular) => "regular",
            Classification::Convergent(Shape::SingleForm(..)) => "single_form",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Divergent(c) => write!(f, "divergent ({c})"),
            Classification::Convergent(Shape::Regular) => write!(f, "convergent, regular"),
            Classification::Convergent(Shape::SingleForm(a, b)) => {
                write!(f, "convergent, single form {a}*m+{b}*n")
            }
        }
    }
}

/// Convergence test and shape of a tuple.
pub fn classify(t: &InputTuple) -> Classification {
    let s = t.s();
    let w = t.weight();
    if w <= 2 {
        return Classification::Divergent("w>2 fails".into());
    }
    if w - s[0] <= 1 {
        return Classification::Divergent("w-s1>1 fails".into());
    }
    if w - s[1] <= 1 {
        return Classification::Divergent("w-s2>1 fails".into());
    }
    let nonzero: Vec<usize> = (0..6).filter(|&i| s[i] > 0).collect();
    if nonzero.len() == 1 && nonzero[0] >= 2 {
        let f = FORMS[nonzero[0]];
        return Classification::Convergent(Shape::SingleForm(f.u, f.v));
    }
    Classification::Convergent(Shape::Regular)
}

/// The double sum of a tuple, with unit coefficient.
///
/// This is structural and accepts divergent tuples too (they are useful as
/// algebraic shapes); only the all-zero tuple, which has no factors, is rejected.
pub fn tuple_to_sumexpr(t: &InputTuple) -> Result<SumExpr> {
    if t.weight() == 0 {
        return Err(Error::InvalidInput("the all-zero tuple has no factors".into()));
    }
    Ok(SumExpr::new(CycloRational::one(), t.s()))
}

/// `Li_{t1,...,td}(mu^j1, ..., mu^jd)`, outermost index first, with `mu = exp(2 pi i/12)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MpvTerm {
    exps: Vec<u32>,
    args: Vec<u8>,
}

impl MpvTerm {
    pub fn new(exps: Vec<u32>, args: Vec<i64>) -> Result<Self> {
        if exps.is_empty() || exps.len() > 2 || exps.len() != args.len() {
            return Err(Error::Precondition(format!(
                "terms need depth 1 or 2 with matching arguments, got {exps:?} / {args:?}"
            )));
        }
        if exps.contains(&0) {
            return Err(Error::Precondition(format!("exponents must be positive, got {exps:?}")));
        }
        let args: Vec<u8> = args.iter().map(|j| j.rem_euclid(12) as u8).collect();
        if exps[0] == 1 && args[0] == 0 {
            return Err(Error::Divergent(format!(
                "Li with leading exponent 1 at argument 1 ({exps:?}, {args:?})"
            )));
        }
        Ok(MpvTerm { exps, args })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn args(&self) -> &[u8] {
        &self.args
    }

    pub fn depth(&self) -> usize {
        self.exps.len()
    }

    pub fn weight(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Least `N` with every argument an `N`-th root of unity.
    pub fn level(&self) -> u32 {
        [1, 2, 3, 4, 6, 12]
            .into_iter()
            .find(|n| self.args.iter().all(|&j| (n * j as u32).is_multiple_of(12)))
            .unwrap_or(12)
    }

    /// The term with all arguments inverted; its value is the complex conjugate.
    pub fn conj(&self) -> MpvTerm {
        MpvTerm { exps: self.exps.clone(), args: self.args.iter().map(|&j| ((12 - j as u32) % 12) as u8).collect() }
    }
}

impl fmt::Display for MpvTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        let a: Vec<String> = self.args.iter().map(|j| format!("mu12^{j}")).collect();
        write!(f, "Li_{{{}}}({})", e.join(","), a.join(", "))
    }
}

/// Finite `Q(mu)`-linear combination of terms; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<MpvTerm, CycloRational>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(term: MpvTerm, coeff: CycloRational) -> Self {
        let mut fs = FormalSum::new();
        fs.add_term(term, coeff);
        fs
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MpvTerm, &CycloRational)> {
        self.terms.iter()
    }

    pub fn get(&self, term: &MpvTerm) -> Option<&CycloRational> {
        self.terms.get(term)
    }

    pub fn add_term(&mut self, term: MpvTerm, coeff: CycloRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(term) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &FormalSum, c: &CycloRational) {
        for (t, k) in other.iter() {
            self.add_term(t.clone(), c * k);
        }
    }

    /// `self += r * other` for a rational `r`.
    pub fn add_scaled_rational(&mut self, other: &FormalSum, r: &Rational) {
        for (t, k) in other.iter() {
            self.add_term(t.clone(), k.scale(r));
        }
    }

    pub fn add(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        out.add_scaled(other, &CycloRational::one());
        out
    }

    pub fn scaled(&self, c: &CycloRational) -> FormalSum {
        let mut out = FormalSum::new();
        out.add_scaled(self, c);
        out
    }

    pub fn all_rational(&self) -> bool {
        self.terms.values().all(CycloRational::is_rational)
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} * {t}")?;
        }
        Ok(())
    }
}

/// Parameters of a terminal sum in a trace record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Terminal {
    /// `scale * A_{a,b}(s1,s2,s3)`; `swap` means `n` plays the role of `m`.
    A { a: u32, b: u32, s: [u32; 3], swap: bool },
    /// `B_{a,b}(r, s)`.
    B { a: u32, b: u32, r: u32, s: u32, swap: bool },
    /// `sum (a m + b n)^(-s)`.
    Counting { a: u32, b: u32, s: u32 },
}

/// One rewrite of a unit-coefficient sum with exponent vector `expr`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub pair: Vec<LinearForm>,
    pub sum_form: Option<LinearForm>,
    /// Branch coefficients for a split, or the single scale factor of a terminal.
    #[serde(with = "rational_vec_serde")]
    pub scale: Vec<Rational>,
    pub expr: [u32; 6],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<[u32; 6]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<Terminal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub input: InputTuple,
    pub classification: Classification,
    pub result: FormalSum,
    pub trace: Vec<TraceStep>,
    pub all_rational: bool,
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    coeff: CycloRational,
    exponents: Vec<u32>,
    args: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct CertificateDto {
    input: [u32; 6],
    classification: String,
    weight: u32,
    terms: Vec<TermDto>,
    trace: Vec<TraceStep>,
    all_rational: bool,
}

impl Certificate {
    pub fn weight(&self) -> u32 {
        self.input.weight()
    }

    fn to_dto(&self) -> CertificateDto {
        CertificateDto {
            input: self.input.s(),
            classification: self.classification.label().to_string(),
            weight: self.weight(),
            terms: self
                .result
                .iter()
                .map(|(t, c)| TermDto { coeff: c.clone(), exponents: t.exps.clone(), args: t.args.clone() })
                .collect(),
            trace: self.trace.clone(),
            all_rational: self.all_rational,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("certificate serialises")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        let dto: CertificateDto =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("certificate JSON: {e}")))?;
        let input = InputTuple::new(dto.input);
        let classification = classify(&input);
        if classification.label() != dto.classification {
            return Err(Error::InvalidInput(format!(
                "classification {:?} does not match input {input}",
                dto.classification
            )));
        }
        let mut result = FormalSum::new();
        for t in dto.terms {
            let term = MpvTerm::new(t.exponents, t.args.iter().map(|&j| j as i64).collect())?;
            result.add_term(term, t.coeff);
        }
        Ok(Certificate { input, classification, result, trace: dto.trace, all_rational: dto.all_rational })
    }
}
