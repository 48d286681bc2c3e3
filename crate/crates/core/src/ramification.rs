//! Hilbert symbols, ramification sets and the admissibility test for
//! quaternion algebras over totally real fields.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::numfield::{FieldElement, Ideal, NumberField, PrimeIdeal};
use crate::quat::QuaternionAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// Real place, 1-based in increasing root order.
    Real(usize),
    Finite(PrimeIdeal),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real(i) => write!(f, "∞{i}"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Short label: the rational prime when it has a single prime above it.
pub fn place_label(k: &NumberField, place: &Place) -> String {
    match place {
        Place::Real(i) => format!("∞{i}"),
        Place::Finite(p) if p.e * p.f == k.degree() as u32 => p.p.to_string(),
        Place::Finite(p) => p.to_string(),
    }
}

/// `(a, b)_v` at a real place: `-1` iff both are negative there.
pub fn hilbert_real(k: &NumberField, a: &FieldElement, b: &FieldElement, place: usize) -> Result<i8> {
    let sa = k.sign_at(a, place)?;
    let sb = k.sign_at(b, place)?;
    Ok(if sa < 0 && sb < 0 { -1 } else { 1 })
}

/// Tame symbol at an odd prime: with `a = π^α u`, `b = π^β v`, the residue
/// character of `(-1)^{αβ} u^β v^α`.
pub fn hilbert_odd(k: &NumberField, a: &FieldElement, b: &FieldElement, prime: &PrimeIdeal) -> Result<i8> {
    if prime.is_dyadic() {
        return Err(Error::DyadicPrime);
    }
    let va = k.valuation(a, prime)?;
    let vb = k.valuation(b, prime)?;
    if va == 0 && vb == 0 {
        return Ok(1);
    }
    let pi = k.uniformizer(prime);
    let u = k.div(a, &k.pow(&pi, va)?)?;
    let v = k.div(b, &k.pow(&pi, vb)?)?;
    let mut c = k.mul(&k.pow(&u, vb)?, &k.pow(&v, va)?);
    if (va * vb) % 2 != 0 {
        c = c.neg();
    }
    Ok(if k.is_square_in_residue_field(&c, prime)? { 1 } else { -1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolSource {
    Sign,
    Tame,
    /// `a = 1`, `b = 1`, `a = -b` or `a + b = 1`.
    Trivial,
    ProductFormula,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSymbol {
    pub place: Place,
    pub value: Option<i8>,
    pub source: SymbolSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Resolution {
    Determined,
    ByProductFormula,
    Ambiguous,
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resolution::Determined => "determined",
            Resolution::ByProductFormula => "by_product_formula",
            Resolution::Ambiguous => "ambiguous",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RamificationReport {
    pub symbols: Vec<LocalSymbol>,
    pub ramified_real: Vec<usize>,
    pub ramified_finite: Vec<PrimeIdeal>,
    pub disc_ideal: Ideal,
    pub resolution: Resolution,
}

impl RamificationReport {
    pub fn ramified(&self) -> Vec<Place> {
        self.ramified_real
            .iter()
            .map(|&i| Place::Real(i))
            .chain(self.ramified_finite.iter().cloned().map(Place::Finite))
            .collect()
    }

    /// Product of all determined local symbols.
    pub fn symbol_product(&self) -> i8 {
        self.symbols.iter().filter_map(|s| s.value).product()
    }

    pub fn undetermined(&self) -> usize {
        self.symbols.iter().filter(|s| s.value.is_none()).count()
    }
}

/// `𝔭` as an ideal, with a generator attached when `p` or a uniformizer
/// generates it.
pub fn prime_ideal(k: &NumberField, prime: &PrimeIdeal) -> Ideal {
    let id = Ideal::prime(k, prime);
    if id.generator().is_some() {
        return id;
    }
    let pi = k.uniformizer(prime);
    match Ideal::principal(k, &pi) {
        Ok(pid) if pid == id => id.with_generator(pi),
        _ => id,
    }
}

pub fn disc_ideal(k: &NumberField, finite: &[PrimeIdeal]) -> Ideal {
    finite.iter().fold(Ideal::unit(k), |acc, p| acc.mul(k, &prime_ideal(k, p)))
}

/// Rational primes at which `(a, b)` can be nontrivial: `2` and the primes
/// dividing norms or coordinate denominators of `a` and `b`.
pub fn bad_primes(k: &NumberField, a: &FieldElement, b: &FieldElement) -> Result<Vec<u64>> {
    let mut s = BTreeSet::from([2u64]);
    for x in [a, b] {
        let n = k.norm(x);
        for m in [n.numer().clone(), n.denom().clone(), x.denominator()] {
            s.extend(arith::prime_support(&m)?);
        }
    }
    Ok(s.into_iter().collect())
}

fn trivially_split(k: &NumberField, a: &FieldElement, b: &FieldElement) -> bool {
    let one = k.one();
    *a == one || *b == one || a.add(b).is_zero() || a.add(b) == one
}

/// All local symbols, with dyadic ones inferred when possible. An
/// ambiguous report is returned as such rather than as an error.
pub fn ramification_partial(alg: &QuaternionAlgebra) -> Result<RamificationReport> {
    let k = alg.field();
    let (a, b) = (alg.a(), alg.b());
    let mut symbols = Vec::new();
    for i in 1..=k.degree() {
        symbols.push(LocalSymbol {
            place: Place::Real(i),
            value: Some(hilbert_real(k, a, b, i)?),
            source: SymbolSource::Sign,
        });
    }
    let trivial = trivially_split(k, a, b);
    for p in bad_primes(k, a, b)? {
        for prime in k.factor_prime(p)? {
            let (value, source) = if trivial {
                (Some(1), SymbolSource::Trivial)
            } else if prime.is_dyadic() {
                (None, SymbolSource::Undetermined)
            } else {
                (Some(hilbert_odd(k, a, b, &prime)?), SymbolSource::Tame)
            };
            symbols.push(LocalSymbol { place: Place::Finite(prime), value, source });
        }
    }

    let open: Vec<usize> = symbols.iter().enumerate().filter(|(_, s)| s.value.is_none()).map(|(i, _)| i).collect();
    let known: i8 = symbols.iter().filter_map(|s| s.value).product();
    let resolution = match open.as_slice() {
        [] => {
            if known != 1 {
                return Err(Error::MismatchDetected { lhs: "product of local symbols".into(), rhs: known.to_string() });
            }
            Resolution::Determined
        }
        [i] => {
            symbols[*i].value = Some(known);
            symbols[*i].source = SymbolSource::ProductFormula;
            Resolution::ByProductFormula
        }
        _ => Resolution::Ambiguous,
    };

    let ramified_real = symbols
        .iter()
        .filter_map(|s| match (&s.place, s.value) {
            (Place::Real(i), Some(-1)) => Some(*i),
            _ => None,
        })
        .collect();
    let ramified_finite: Vec<PrimeIdeal> = symbols
        .iter()
        .filter_map(|s| match (&s.place, s.value) {
            (Place::Finite(p), Some(-1)) => Some(p.clone()),
            _ => None,
        })
        .collect();
    let disc_ideal = disc_ideal(k, &ramified_finite);
    Ok(RamificationReport { symbols, ramified_real, ramified_finite, disc_ideal, resolution })
}

/// `Ram(B)` and `𝔇`; fails when more than one dyadic symbol is open.
pub fn ramification_set(alg: &QuaternionAlgebra) -> Result<RamificationReport> {
    let r = ramification_partial(alg)?;
    if r.resolution == Resolution::Ambiguous {
        return Err(Error::DyadicAmbiguity { count: r.undetermined() });
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityCertificate {
    pub admissible: bool,
    pub cubic: bool,
    pub ramified_real: Vec<usize>,
    /// Number of ramified primes above each rational prime that has any.
    pub finite_counts: Vec<(u64, usize)>,
    pub reasons: Vec<String>,
}

/// Cubic, exactly two ramified real places, and an even number of
/// ramified primes above every rational prime.
pub fn is_mumford_admissible(alg: &QuaternionAlgebra) -> Result<AdmissibilityCertificate> {
    let k = alg.field();
    let report = ramification_set(alg)?;
    let mut reasons = Vec::new();
    let cubic = k.degree() == 3;
    if !cubic {
        reasons.push(format!("base field has degree {}, not 3", k.degree()));
    }
    if report.ramified_real.len() != 2 {
        reasons.push(format!("{} ramified real places, need 2", report.ramified_real.len()));
    }
    let mut finite_counts: Vec<(u64, usize)> = Vec::new();
    for p in &report.ramified_finite {
        match finite_counts.last_mut() {
            Some((q, c)) if *q == p.p => *c += 1,
            _ => finite_counts.push((p.p, 1)),
        }
    }
    for (p, c) in &finite_counts {
        if c % 2 == 1 {
            reasons.push(format!("{c} ramified primes above {p}: corestriction is nontrivial at {p}"));
        }
    }
    Ok(AdmissibilityCertificate {
        admissible: reasons.is_empty(),
        cubic,
        ramified_real: report.ramified_real,
        finite_counts,
        reasons,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deduction {
    /// Primes forced unramified: the only prime above its rational prime.
    pub forced_unramified: Vec<PrimeIdeal>,
    pub finite_ramification: Vec<PrimeIdeal>,
    pub ramified_real_count: usize,
    pub conclusion: String,
}

/// Finite ramification of an admissible quaternion over `k` whose
/// discriminant is supported on `allowed`.
pub fn quaternion_from_ram_deduction(k: &NumberField, allowed: &[u64]) -> Result<Deduction> {
    if k.degree() != 3 {
        return Err(Error::Invalid(format!("base field has degree {}, not 3", k.degree())));
    }
    let mut forced = Vec::new();
    let mut open = Vec::new();
    for &p in allowed {
        let primes = k.factor_prime(p)?;
        if let [only] = primes.as_slice() {
            forced.push(only.clone());
        } else {
            open.push(p);
        }
    }
    if !open.is_empty() {
        return Err(Error::Underdetermined { primes: open });
    }
    Ok(Deduction {
        forced_unramified: forced,
        finite_ramification: Vec::new(),
        ramified_real_count: 2,
        conclusion: "ramifies only at two infinite places".into(),
    })
}

/// Sign of `x` as `"+"`/`"-"` at every real place.
pub fn sign_vector(k: &NumberField, x: &FieldElement) -> Result<Vec<i8>> {
    (1..=k.degree()).map(|i| k.sign_at(x, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_bigint::BigInt;

    fn q() -> NumberField {
        NumberField::rationals()
    }

    #[test]
    fn real_symbols() {
        let (b, _) = catalog::example_3_1();
        let k = b.field();
        // θ ≈ (-1.53, -0.35, 1.88)
        let s: Vec<i8> = (1..=3).map(|i| hilbert_real(k, b.a(), b.b(), i).unwrap()).collect();
        assert_eq!(s, vec![-1, -1, 1]);
        assert_eq!(hilbert_real(k, &k.one(), &k.from_int(-5), 2).unwrap(), 1);
        assert_eq!(hilbert_real(k, &k.zero(), &k.one(), 1), Err(Error::ZeroElement));
    }

    #[test]
    fn odd_symbols_over_q() {
        let k = q();
        let p3 = k.factor_prime(3).unwrap().remove(0);
        let p5 = k.factor_prime(5).unwrap().remove(0);
        assert_eq!(hilbert_odd(&k, &k.from_int(-1), &k.from_int(-1), &p3).unwrap(), 1);
        assert_eq!(hilbert_odd(&k, &k.from_int(2), &k.from_int(5), &p5).unwrap(), -1);
        assert_eq!(hilbert_odd(&k, &k.from_int(2), &k.from_int(3), &p5).unwrap(), 1);
        assert_eq!(hilbert_odd(&k, &k.from_int(5), &k.from_int(5), &p5).unwrap(), 1);
        let p2 = k.factor_prime(2).unwrap().remove(0);
        assert_eq!(hilbert_odd(&k, &k.one(), &k.one(), &p2), Err(Error::DyadicPrime));
    }

    #[test]
    fn hamilton_ramification() {
        let r = ramification_set(&catalog::hamilton()).unwrap();
        assert_eq!(r.ramified_real, vec![1]);
        assert_eq!(r.ramified_finite.iter().map(|p| p.p).collect::<Vec<_>>(), vec![2]);
        assert_eq!(r.resolution, Resolution::ByProductFormula);
        assert_eq!(r.disc_ideal.norm(), BigInt::from(2));
    }

    #[test]
    fn split_and_example_ramification() {
        let r = ramification_set(&catalog::split_rational()).unwrap();
        assert!(r.ramified().is_empty());
        assert!(r.disc_ideal.is_unit_ideal());

        let b = catalog::example_3_1_algebra();
        let r = ramification_set(&b).unwrap();
        assert_eq!(r.ramified_real, vec![1, 2]);
        assert!(r.ramified_finite.is_empty());
        assert!(r.disc_ideal.is_unit_ideal());
        let cert = is_mumford_admissible(&b).unwrap();
        assert!(cert.admissible, "{:?}", cert.reasons);
        assert!(!is_mumford_admissible(&catalog::hamilton()).unwrap().admissible);
    }

    #[test]
    fn odd_count_above_five_is_not_admissible() {
        let k = catalog::cubic_field();
        let a = k.from_int(-5);
        let mut found = None;
        'search: for c0 in -3..=3 {
            for c1 in -3..=3 {
                for c2 in -1..=1 {
                    let b = k.from_ints(&[c0, c1, c2]);
                    if b.is_zero() || k.norm(&b).numer() % 5 == BigInt::from(0) {
                        continue;
                    }
                    let alg = QuaternionAlgebra::new(k.clone(), a.clone(), b).unwrap();
                    let Ok(r) = ramification_set(&alg) else { continue };
                    if r.ramified_finite.iter().filter(|p| p.p == 5).count() == 1 && r.ramified_real.len() == 2 {
                        found = Some(alg);
                        break 'search;
                    }
                }
            }
        }
        let alg = found.expect("a quaternion ramified above 5 and at two real places");
        let cert = is_mumford_admissible(&alg).unwrap();
        assert!(!cert.admissible);
        assert!(cert.finite_counts.contains(&(5, 1)));
    }

    #[test]
    fn deduction() {
        let k = catalog::cubic_field();
        let d = quaternion_from_ram_deduction(&k, &[2, 3]).unwrap();
        assert!(d.finite_ramification.is_empty());
        assert_eq!(d.forced_unramified.len(), 2);
        assert!(quaternion_from_ram_deduction(&k, &[]).unwrap().finite_ramification.is_empty());
        assert!(quaternion_from_ram_deduction(&k, &[5]).unwrap().finite_ramification.is_empty());
        // 17 splits completely in Q(ζ₉)⁺ (17 ≡ -1 mod 9)
        assert_eq!(quaternion_from_ram_deduction(&k, &[17]).unwrap_err(), Error::Underdetermined { primes: vec![17] });
    }
}
