//! JSON descriptors for fields, algebras, orders and lattices, and the
//! machine-readable report shapes.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corestrict::CanonicalLattice;
use crate::error::{Error, Result};
use crate::k3fib::FibrationVerdict;
use crate::lattice::{DiscForm, IntLattice};
use crate::numfield::{FieldElement, NumberField, PrimeIdeal};
use crate::quat::{QuatElement, QuatOrder, QuaternionAlgebra};
use crate::ramification::RamificationReport;

/// A JSON number or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            Num::Text(s) => parse_rational(s),
        }
    }

    pub fn integer(&self) -> Result<BigInt> {
        let r = self.rational()?;
        if !r.is_integer() {
            return Err(Error::Invalid(format!("expected an integer, got {r}")));
        }
        Ok(r.to_integer())
    }
}

impl From<&BigRational> for Num {
    fn from(r: &BigRational) -> Self {
        Num::Text(format_rational(r))
    }
}

pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Accepts `"p"`, `"p/q"` and `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Integer value as a JSON number when it fits, else as a string.
pub fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(n.to_string()),
    }
}

fn rat_int_value(r: &BigRational) -> Value {
    if r.is_integer() {
        int_value(&r.to_integer())
    } else {
        Value::String(format_rational(r))
    }
}

/// Parses `"x^3-3x-1"`, `"x^2 + 1"`, `"2*x - 3"` into integer
/// coefficients, constant term first. Any single letter is the variable.
pub fn parse_poly(s: &str) -> Result<Vec<BigInt>> {
    let bad = |why: &str| Error::Invalid(format!("cannot parse polynomial {s:?}: {why}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty"));
    }
    let mut var: Option<char> = None;
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        if (c == '+' || c == '-') && i > start && !compact[..i].ends_with('^') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        if body.is_empty() {
            return Err(bad("dangling sign"));
        }
        let letter = body.chars().find(|c| c.is_alphabetic());
        let (coef, exp) = match letter {
            None => (body.parse::<BigInt>().map_err(|_| bad(body))?, 0usize),
            Some(v) => {
                if *var.get_or_insert(v) != v {
                    return Err(bad("more than one variable"));
                }
                let at = body.find(v).expect("letter present");
                let head = body[..at].trim_end_matches('*');
                let tail = &body[at + v.len_utf8()..];
                let coef = if head.is_empty() { BigInt::one() } else { head.parse().map_err(|_| bad(head))? };
                let exp = match tail.strip_prefix('^') {
                    Some(e) => e.parse().map_err(|_| bad(tail))?,
                    None if tail.is_empty() => 1,
                    None => return Err(bad(tail)),
                };
                (coef, exp)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += if neg { -coef } else { coef };
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDescriptor {
    pub min_poly: Vec<Num>,
}

impl FieldDescriptor {
    pub fn of(k: &NumberField) -> Self {
        FieldDescriptor { min_poly: k.min_poly().iter().map(|c| Num::Text(c.to_string())).collect() }
    }

    pub fn build(&self) -> Result<NumberField> {
        let c = self.min_poly.iter().map(Num::integer).collect::<Result<Vec<_>>>()?;
        NumberField::new(&c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuatDescriptor {
    pub field: FieldDescriptor,
    pub a: Vec<Num>,
    pub b: Vec<Num>,
}

fn element(k: &NumberField, c: &[Num]) -> Result<FieldElement> {
    if c.len() > k.degree() {
        return Err(Error::Invalid(format!("{} coefficients for a degree-{} field", c.len(), k.degree())));
    }
    Ok(k.element(c.iter().map(Num::rational).collect::<Result<_>>()?))
}

fn element_nums(k: &NumberField, x: &FieldElement) -> Vec<Num> {
    let mut c: Vec<Num> = x.coeffs().iter().map(Num::from).collect();
    c.resize(k.degree(), Num::Text("0".into()));
    c
}

impl QuatDescriptor {
    pub fn of(alg: &QuaternionAlgebra) -> Self {
        let k = alg.field();
        QuatDescriptor { field: FieldDescriptor::of(k), a: element_nums(k, alg.a()), b: element_nums(k, alg.b()) }
    }

    pub fn build(&self) -> Result<QuaternionAlgebra> {
        let k = Arc::new(self.field.build()?);
        let a = element(&k, &self.a)?;
        let b = element(&k, &self.b)?;
        QuaternionAlgebra::new(k, a, b)
    }
}

/// One generator: either `4·d` flat rationals or four lists of `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenRepr {
    Flat(Vec<Num>),
    Nested(Vec<Vec<Num>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderDescriptor {
    pub gens: Vec<GenRepr>,
}

impl OrderDescriptor {
    pub fn of(order: &QuatOrder) -> Self {
        let k = order.algebra().field();
        let gens = order
            .gens()
            .iter()
            .map(|g| GenRepr::Flat(g.coords().iter().flat_map(|x| element_nums(k, x)).collect()))
            .collect();
        OrderDescriptor { gens }
    }

    pub fn build(&self, alg: QuaternionAlgebra) -> Result<QuatOrder> {
        if self.gens.len() != 4 {
            return Err(Error::Invalid(format!("expected 4 generators, got {}", self.gens.len())));
        }
        let k = alg.field();
        let d = k.degree();
        let mut out = Vec::with_capacity(4);
        for g in &self.gens {
            let parts: Vec<Vec<Num>> = match g {
                GenRepr::Flat(c) if c.len() == 4 * d => c.chunks(d).map(<[Num]>::to_vec).collect(),
                GenRepr::Nested(c) if c.len() == 4 => c.clone(),
                _ => return Err(Error::Invalid(format!("generator must have 4×{d} coefficients"))),
            };
            let x: Vec<FieldElement> = parts.iter().map(|c| element(k, c)).collect::<Result<_>>()?;
            let [x0, x1, x2, x3]: [FieldElement; 4] = x.try_into().expect("four coordinates");
            out.push(QuatElement::new(x0, x1, x2, x3));
        }
        let gens: [QuatElement; 4] = out.try_into().expect("four generators");
        QuatOrder::new(alg, gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub gram: Vec<Vec<Num>>,
}

impl LatticeFile {
    pub fn of(l: &IntLattice) -> Self {
        LatticeFile { gram: l.gram().iter().map(|r| r.iter().map(|x| Num::Text(x.to_string())).collect()).collect() }
    }

    pub fn build(&self) -> Result<IntLattice> {
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(Num::integer).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        IntLattice::new(gram)
    }
}

pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("report serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeJson {
    pub p: u64,
    pub g: Vec<u64>,
    pub e: u32,
    pub f: u32,
}

impl From<&PrimeIdeal> for PrimeJson {
    fn from(q: &PrimeIdeal) -> Self {
        PrimeJson { p: q.p, g: q.g.clone(), e: q.e, f: q.f }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationJson {
    pub ramified_real: Vec<usize>,
    pub ramified_finite: Vec<PrimeJson>,
    pub disc_ideal: String,
    pub resolution: String,
}

impl From<&RamificationReport> for RamificationJson {
    fn from(r: &RamificationReport) -> Self {
        RamificationJson {
            ramified_real: r.ramified_real.clone(),
            ramified_finite: r.ramified_finite.iter().map(PrimeJson::from).collect(),
            disc_ideal: r.disc_ideal.display(),
            resolution: r.resolution.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalLatticeJson {
    pub gram: Vec<Vec<Value>>,
    pub labels: Vec<String>,
    pub signed_det: Value,
    pub predicted_disc: Option<Value>,
    pub signature: [usize; 2],
}

impl CanonicalLatticeJson {
    pub fn new(c: &CanonicalLattice, predicted: Option<&BigInt>) -> Self {
        CanonicalLatticeJson {
            gram: c.gram.iter().map(|r| r.iter().map(rat_int_value).collect()).collect(),
            labels: c.labels.clone(),
            signed_det: rat_int_value(&c.signed_det),
            predicted_disc: predicted.map(int_value),
            signature: [c.signature.0, c.signature.1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscFormJson {
    pub factors: Vec<u64>,
    pub q: Vec<String>,
    pub b: Vec<Vec<String>>,
}

impl From<&DiscForm> for DiscFormJson {
    fn from(f: &DiscForm) -> Self {
        DiscFormJson {
            factors: f.factors().to_vec(),
            q: f.gen_q().iter().map(|x| format!("{} mod 2", format_rational(x))).collect(),
            b: f.gen_b().iter().map(|r| r.iter().map(|x| format!("{} mod 1", format_rational(x))).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub fibration: bool,
    pub lambda: usize,
    pub torsion: Vec<String>,
    pub configs: Vec<String>,
    pub notes: Vec<String>,
}

impl From<&FibrationVerdict> for VerdictJson {
    fn from(v: &FibrationVerdict) -> Self {
        VerdictJson {
            fibration: v.exists,
            lambda: v.lambda,
            torsion: v.torsion_options.iter().map(ToString::to_string).collect(),
            configs: v.witnessing_configs.iter().map(ToString::to_string).collect(),
            notes: v.notes.clone(),
        }
    }
}

/// `-12/5` style, for tables.
pub fn signed(r: &BigRational) -> String {
    if r.is_negative() {
        format!("-{}", format_rational(&r.abs()))
    } else {
        format_rational(r)
    }
}
