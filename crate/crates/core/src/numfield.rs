//! Monogenic totally real number fields `K = Q[x]/(f)`.
//!
//! The ring of integers is taken to be `Z[θ]` (monogenicity is an input
//! contract), so integrality of an element is integrality of its power-basis
//! coordinates and every prime above `p` is `(p, g(θ))` for an irreducible
//! factor `g` of `f mod p`.
//!
//! Real places are numbered `1..=d` in increasing order of the root.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix, RatMatrix};
use crate::poly::{self, FpPoly, QPoly, RootInterval};

/// Element of `K` in power-basis coordinates (length `d`, reduced mod `f`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Integral in `Z[θ]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// The rational number this element equals, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn scale(&self, r: &BigRational) -> FieldElement {
        FieldElement { coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        FieldElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// Pretty form using `var` for the generator, e.g. `2θ^2 - 8`.
    pub fn display(&self, var: &str) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let body = if i == 0 {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else if mag.is_integer() {
                format!("{mag}{mono}")
            } else {
                format!("({mag}){mono}")
            };
            terms.push((c.is_negative(), body));
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (neg, body)) in terms.into_iter().enumerate() {
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&body);
        }
        s
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("θ"))
    }
}

/// A prime of `O_K` above the rational prime `p`, `𝔭 = (p, g(θ))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Monic irreducible factor of `f mod p`, constant term first.
    pub g: FpPoly,
    pub e: u32,
    pub f: u32,
}

impl PrimeIdeal {
    pub fn is_dyadic(&self) -> bool {
        self.p == 2
    }

    /// `p^f`, the size of the residue field.
    pub fn residue_size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.f)
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<BigInt> = self.g.iter().map(|&c| BigInt::from(c)).collect();
        let elt = FieldElement { coeffs: g.into_iter().map(BigRational::from_integer).collect() };
        write!(f, "({}, {})", self.p, elt.display("θ"))
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    degree: usize,
    disc: BigInt,
    roots: Vec<RootInterval>,
    /// `Tr(θ^i)` for `0 <= i < d`.
    power_traces: Vec<BigRational>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Builds `Q[x]/(f)` from integer coefficients, constant term first.
    pub fn new(coeffs: &[BigInt]) -> Result<Self> {
        let mut c = coeffs.to_vec();
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        if c.len() < 2 || !c.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        let degree = c.len() - 1;
        check_irreducible(&c)?;

        let f = poly::q_from_ints(&c);
        let roots = poly::isolate_real_roots(&f);
        if roots.len() != degree {
            return Err(Error::NotTotallyReal { real: roots.len(), degree });
        }

        let mut field = NumberField { min_poly: c, degree, disc: BigInt::zero(), roots, power_traces: Vec::new() };
        field.power_traces = (0..degree)
            .map(|i| {
                let m = field.mult_matrix(&field.theta_pow(i));
                (0..degree).map(|k| m[k][k].clone()).sum()
            })
            .collect();
        field.disc = field.compute_discriminant();
        Ok(field)
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(&coeffs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    /// As [`NumberField::new`], additionally checking a claimed field
    /// discriminant against `disc(f)`.
    pub fn with_discriminant(coeffs: &[BigInt], claimed: &BigInt) -> Result<Self> {
        let k = Self::new(coeffs)?;
        if &k.disc != claimed {
            return Err(Error::Invalid(format!("claimed discriminant {claimed} differs from disc(f) = {}", k.disc)));
        }
        Ok(k)
    }

    pub fn rationals() -> Self {
        Self::from_i64(&[-1, 1]).expect("x - 1 defines Q")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn real_roots(&self) -> &[RootInterval] {
        &self.roots
    }

    fn min_poly_q(&self) -> QPoly {
        poly::q_from_ints(&self.min_poly)
    }

    fn compute_discriminant(&self) -> BigInt {
        let d = self.degree;
        if d == 1 {
            return BigInt::one();
        }
        // disc(f) = (-1)^{d(d-1)/2} N(f'(θ))
        let fprime: Vec<BigRational> =
            (1..=d).map(|i| BigRational::from_integer(&self.min_poly[i] * BigInt::from(i))).collect();
        let n = self.norm(&FieldElement { coeffs: fprime });
        let sign = if (d * (d - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        (n * BigRational::from_integer(sign.into())).to_integer()
    }

    // --- constructors -----------------------------------------------------

    pub fn element(&self, coeffs: Vec<BigRational>) -> FieldElement {
        let d = self.degree;
        let mut c = coeffs;
        for i in (d..c.len()).rev() {
            let top = std::mem::replace(&mut c[i], BigRational::zero());
            if top.is_zero() {
                continue;
            }
            for (j, m) in self.min_poly[..d].iter().enumerate() {
                c[i - d + j] -= &top * m;
            }
        }
        c.resize(d, BigRational::zero());
        FieldElement { coeffs: c }
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> FieldElement {
        self.element(coeffs.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn from_rational(&self, r: BigRational) -> FieldElement {
        self.element(vec![r])
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn theta(&self) -> FieldElement {
        self.theta_pow(1)
    }

    pub fn theta_pow(&self, k: usize) -> FieldElement {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        self.element(c)
    }

    // --- arithmetic -------------------------------------------------------

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        self.element(prod)
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// Matrix of multiplication by `x`: row `i` holds the coordinates of `x θ^i`.
    pub fn mult_matrix(&self, x: &FieldElement) -> RatMatrix {
        (0..self.degree).map(|i| self.mul(x, &self.theta_pow(i)).coeffs).collect()
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut e0 = vec![BigRational::zero(); self.degree];
        e0[0] = BigRational::one();
        let y = matrix::rat_solve_left(&self.mult_matrix(x), &e0).ok_or(Error::ZeroElement)?;
        Ok(FieldElement { coeffs: y })
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut result = self.one();
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &b);
            }
            b = self.mul(&b, &b);
            n >>= 1;
        }
        Ok(result)
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        x.coeffs.iter().zip(&self.power_traces).map(|(a, t)| a * t).sum()
    }

    pub fn norm(&self, x: &FieldElement) -> BigRational {
        matrix::rat_det(&self.mult_matrix(x))
    }

    /// Determinant of a square matrix over `K`.
    pub fn det(&self, m: &[Vec<FieldElement>]) -> FieldElement {
        let n = m.len();
        let mut a: Vec<Vec<FieldElement>> = m.to_vec();
        let mut det = self.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return self.zero();
            };
            if p != k {
                a.swap(p, k);
                det = det.neg();
            }
            let inv = self.inv(&a[k][k]).expect("nonzero pivot");
            det = self.mul(&det, &a[k][k]);
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = self.mul(&a[i][k], &inv);
                for j in k..n {
                    let v = self.mul(&f, &a[k][j]);
                    a[i][j] = a[i][j].sub(&v);
                }
            }
        }
        det
    }

    /// `[Tr(θ^{i+j})]`, whose determinant is the discriminant.
    pub fn trace_gram(&self) -> IntMatrix {
        let d = self.degree;
        (0..d).map(|i| (0..d).map(|j| self.trace(&self.theta_pow(i + j)).to_integer()).collect()).collect()
    }

    /// `y / x ∈ O_K`.
    pub fn divides(&self, x: &FieldElement, y: &FieldElement) -> bool {
        match self.div(y, x) {
            Ok(q) => q.is_integral(),
            Err(_) => y.is_zero(),
        }
    }

    /// `x` is a unit of `O_K`.
    pub fn is_unit(&self, x: &FieldElement) -> bool {
        x.is_integral() && !x.is_zero() && self.norm(x).abs().is_one()
    }

    /// Same principal ideal: mutual divisibility in `O_K`.
    pub fn associated(&self, x: &FieldElement, y: &FieldElement) -> bool {
        self.divides(x, y) && self.divides(y, x)
    }

    // --- real embeddings --------------------------------------------------

    /// Exact sign of `σ_place(x)`, `place` in `1..=d`.
    pub fn sign_at(&self, x: &FieldElement, place: usize) -> Result<i8> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let idx = self.place_index(place)?;
        let f = self.min_poly_q();
        let mut iv = self.roots[idx].clone();
        loop {
            let (lo, hi) = poly::interval_eval(&x.coeffs, &iv.lo, &iv.hi);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            if iv.is_exact() {
                // exact rational root and x vanishes there: impossible for x != 0
                return Err(Error::ZeroElement);
            }
            iv.bisect(&f);
        }
    }

    /// Rational enclosure of `σ_place(x)` after `depth` bisections of the
    /// isolating interval.
    pub fn embedding_enclosure(
        &self,
        x: &FieldElement,
        place: usize,
        depth: usize,
    ) -> Result<(BigRational, BigRational)> {
        let idx = self.place_index(place)?;
        let f = self.min_poly_q();
        let mut iv = self.roots[idx].clone();
        for _ in 0..depth {
            iv.bisect(&f);
        }
        Ok(poly::interval_eval(&x.coeffs, &iv.lo, &iv.hi))
    }

    fn place_index(&self, place: usize) -> Result<usize> {
        if place == 0 || place > self.degree {
            return Err(Error::Invalid(format!("real place {place} out of range 1..={}", self.degree)));
        }
        Ok(place - 1)
    }

    // --- primes -----------------------------------------------------------

    /// Primes of `O_K` above `p` via Dedekind–Kummer.
    pub fn factor_prime(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if !poly::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let fp = poly::fp_from_int(&self.min_poly, p);
        Ok(poly::fp_factor(&fp, p)
            .into_iter()
            .map(|(g, e)| {
                let f = (g.len() - 1) as u32;
                PrimeIdeal { p, g, e, f }
            })
            .collect())
    }

    fn lift(&self, g: &FpPoly) -> FieldElement {
        self.element(g.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `𝔭`-adic valuation of a nonzero element.
    pub fn valuation(&self, x: &FieldElement, prime: &PrimeIdeal) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let den = x.denominator();
        let y = x.scale(&BigRational::from_integer(den.clone()));
        let vden = int_valuation(&den, prime.p) as i64 * prime.e as i64;
        Ok(self.integral_valuation(&y, prime) as i64 - vden)
    }

    fn integral_valuation(&self, y: &FieldElement, prime: &PrimeIdeal) -> u64 {
        let n = self.norm(y).to_integer();
        let bound = int_valuation(&n, prime.p) / prime.f as u64;
        let pid = Ideal::prime(self, prime);
        let mut power = pid.clone();
        let mut v = 0;
        while v < bound && power.contains(y) {
            v += 1;
            power = power.mul(self, &pid);
        }
        v
    }

    /// Element of valuation exactly 1 at `prime`: `p` when unramified,
    /// otherwise `g(θ)` or `g(θ) + p`.
    pub fn uniformizer(&self, prime: &PrimeIdeal) -> FieldElement {
        let p = self.from_int(prime.p as i64);
        if prime.e == 1 {
            return p;
        }
        let g = self.lift(&prime.g);
        for cand in [g.clone(), g.add(&p)] {
            if !cand.is_zero() && self.valuation(&cand, prime).ok() == Some(1) {
                return cand;
            }
        }
        unreachable!("one of g(θ), g(θ) + p has valuation 1 at a ramified prime")
    }

    /// Image of a `𝔭`-unit in `F_p[t]/(g)`.
    pub fn residue(&self, x: &FieldElement, prime: &PrimeIdeal) -> Result<FpPoly> {
        if x.is_zero() || self.valuation(x, prime)? != 0 {
            return Err(Error::NonUnit);
        }
        let p = prime.p;
        let pb = BigInt::from(p);
        let den = x.denominator();
        let y = x.scale(&BigRational::from_integer(den.clone()));
        let k = int_valuation(&den, p);
        let den_rest = &den / pb.pow(k as u32);
        if k == 0 {
            let r = self.reduce_integral(&y, prime);
            let dinv = poly::fp_inv(mod_u64(&den, p), p);
            return Ok(poly::fp_rem(&poly::fp_mul(&r, &vec![dinv], p), &prime.g, p));
        }
        // τ = ∏_{𝔮 ≠ 𝔭} g_𝔮(θ)^{e_𝔮} is a 𝔭-unit lying in every other prime
        // above p; τ^m y is then divisible by p^k in O_K.
        let others: Vec<PrimeIdeal> = self.factor_prime(p)?.into_iter().filter(|q| q.g != prime.g).collect();
        let emax = others.iter().map(|q| q.e).max().unwrap_or(1);
        let mut tau = self.one();
        for q in &others {
            tau = self.mul(&tau, &self.pow(&self.lift(&q.g), q.e as i64)?);
        }
        let m = emax as i64 * k as i64;
        let z = self.mul(&self.pow(&tau, m)?, &y);
        let z = z.scale(&BigRational::new(BigInt::one(), pb.pow(k as u32)));
        debug_assert!(z.is_integral());
        let num = self.reduce_integral(&z, prime);
        let tau_r = self.reduce_integral(&tau, prime);
        let tau_m = residue_pow(&tau_r, &BigUint::from(m as u64), prime);
        let denom = poly::fp_rem(&poly::fp_mul(&tau_m, &vec![mod_u64(&den_rest, p)], p), &prime.g, p);
        Ok(residue_mul(&num, &residue_inv(&denom, prime), prime))
    }

    fn reduce_integral(&self, y: &FieldElement, prime: &PrimeIdeal) -> FpPoly {
        let ints: Vec<BigInt> = y.coeffs.iter().map(|c| c.to_integer()).collect();
        poly::fp_rem(&poly::fp_from_int(&ints, prime.p), &prime.g, prime.p)
    }

    /// Whether a `𝔭`-unit is a square in the residue field `F_{p^f}`.
    pub fn is_square_in_residue_field(&self, x: &FieldElement, prime: &PrimeIdeal) -> Result<bool> {
        if prime.is_dyadic() {
            return Err(Error::DyadicPrime);
        }
        let r = self.residue(x, prime)?;
        let e = (prime.residue_size() - BigUint::one()) / BigUint::from(2u32);
        Ok(residue_pow(&r, &e, prime) == vec![1])
    }
}

fn mod_u64(n: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    (((n % &pb) + &pb) % &pb).to_u64().unwrap()
}

fn residue_mul(a: &FpPoly, b: &FpPoly, prime: &PrimeIdeal) -> FpPoly {
    poly::fp_mulmod(a, b, &prime.g, prime.p)
}

fn residue_pow(a: &FpPoly, e: &BigUint, prime: &PrimeIdeal) -> FpPoly {
    poly::fp_powmod(a, e, &prime.g, prime.p)
}

fn residue_inv(a: &FpPoly, prime: &PrimeIdeal) -> FpPoly {
    let q = prime.residue_size();
    residue_pow(a, &(q - BigUint::from(2u32)), prime)
}

/// `"inert"`, `"totally ramified"`, `"totally split"`, `"split"` or `"ramified"`.
pub fn splitting_type(primes: &[PrimeIdeal], degree: usize) -> &'static str {
    let d = degree as u32;
    match primes {
        [q] if q.f == d => "inert",
        [q] if q.e == d => "totally ramified",
        _ if primes.iter().any(|q| q.e > 1) => "ramified",
        _ if primes.len() == degree => "totally split",
        _ => "split",
    }
}

/// `v_p(n)` for a nonzero integer (0 for n = 0 by convention of callers).
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    if n.is_zero() {
        return 0;
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    while (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    v
}

fn check_irreducible(c: &[BigInt]) -> Result<()> {
    let d = c.len() - 1;
    if d == 1 {
        return Ok(());
    }
    if let Some(r) = integer_root(c) {
        return Err(Error::NotIrreducible(format!("rational root {r}")));
    }
    if d <= 3 {
        return Ok(());
    }
    // Degree sets of mod-p factorizations: a proper factor over Q would
    // give a proper subset sum at every good prime.
    let mut possible: Vec<bool> = (0..=d).map(|k| k > 0 && k < d).collect();
    let mut primes_used = 0;
    let mut p = 2u64;
    while primes_used < 40 && possible.iter().any(|&b| b) {
        p += 1;
        if !poly::is_prime_u64(p) {
            continue;
        }
        let fp = poly::fp_from_int(c, p);
        let fac = poly::fp_factor(&fp, p);
        if fac.iter().any(|(_, e)| *e > 1) {
            continue;
        }
        primes_used += 1;
        let mut sums = vec![false; d + 1];
        sums[0] = true;
        for (g, _) in &fac {
            let k = g.len() - 1;
            for s in (k..=d).rev() {
                if sums[s - k] {
                    sums[s] = true;
                }
            }
        }
        for k in 0..=d {
            possible[k] &= sums[k];
        }
    }
    if possible.iter().any(|&b| b) {
        return Err(Error::NotIrreducible("irreducibility could not be certified by mod-p degree sets".into()));
    }
    Ok(())
}

/// An integer root of a monic integer polynomial, if any.
fn integer_root(c: &[BigInt]) -> Option<BigInt> {
    let c0 = c[0].abs();
    if c0.is_zero() {
        return Some(BigInt::zero());
    }
    let f = poly::q_from_ints(c);
    let eval = |x: &BigInt| poly::q_eval(&f, &BigRational::from_integer(x.clone())).is_zero();
    // divisors of c0 by trial division up to sqrt
    let mut i = BigInt::one();
    while &i * &i <= c0 {
        if (&c0 % &i).is_zero() {
            for cand in [i.clone(), &c0 / &i] {
                for s in [cand.clone(), -cand] {
                    if eval(&s) {
                        return Some(s);
                    }
                }
            }
        }
        i += 1;
    }
    None
}

/// Integral ideal of `O_K = Z[θ]` as a full-rank ℤ-lattice in Hermite form.
#[derive(Clone, Debug)]
pub struct Ideal {
    basis: IntMatrix,
    generator: Option<FieldElement>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Ideal {}

impl Ideal {
    pub fn from_generators(k: &NumberField, gens: &[FieldElement]) -> Result<Ideal> {
        let mut rows = Vec::new();
        for g in gens {
            if !g.is_integral() {
                return Err(Error::Invalid(format!("{g} is not integral")));
            }
            for i in 0..k.degree() {
                let e = k.mul(g, &k.theta_pow(i));
                rows.push(e.coeffs.iter().map(|c| c.to_integer()).collect());
            }
        }
        let basis = matrix::hnf(&rows);
        if basis.len() != k.degree() {
            return Err(Error::ZeroElement);
        }
        Ok(Ideal { basis, generator: (gens.len() == 1).then(|| gens[0].clone()) })
    }

    pub fn principal(k: &NumberField, x: &FieldElement) -> Result<Ideal> {
        Self::from_generators(k, std::slice::from_ref(x))
    }

    pub fn unit(k: &NumberField) -> Ideal {
        Self::principal(k, &k.one()).expect("1 generates O_K")
    }

    pub fn prime(k: &NumberField, prime: &PrimeIdeal) -> Ideal {
        let p = k.from_int(prime.p as i64);
        let g = k.lift(&prime.g);
        let mut id = Self::from_generators(k, &[p.clone(), g]).expect("nonzero prime ideal");
        if prime.f as usize == k.degree() {
            id.generator = Some(p);
        }
        id
    }

    pub fn generator(&self) -> Option<&FieldElement> {
        self.generator.as_ref()
    }

    pub fn with_generator(mut self, g: FieldElement) -> Ideal {
        self.generator = Some(g);
        self
    }

    pub fn mul(&self, k: &NumberField, other: &Ideal) -> Ideal {
        let d = k.degree();
        let as_elt = |r: &Vec<BigInt>| k.element(r.iter().map(|x| BigRational::from_integer(x.clone())).collect());
        let mut rows = Vec::with_capacity(d * d);
        for a in &self.basis {
            for b in &other.basis {
                let e = k.mul(&as_elt(a), &as_elt(b));
                rows.push(e.coeffs.iter().map(|c| c.to_integer()).collect());
            }
        }
        let generator = match (&self.generator, &other.generator) {
            (Some(x), Some(y)) => Some(k.mul(x, y)),
            _ => None,
        };
        Ideal { basis: matrix::hnf(&rows), generator }
    }

    pub fn pow(&self, k: &NumberField, e: u32) -> Ideal {
        (0..e).fold(Ideal::unit(k), |acc, _| acc.mul(k, self))
    }

    /// Absolute norm `[O_K : I]`.
    pub fn norm(&self) -> BigInt {
        self.basis.iter().enumerate().map(|(i, r)| r[i].clone()).product()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.norm().is_one()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        if !x.is_integral() {
            return false;
        }
        let d = self.basis.len();
        let mut rem: Vec<BigInt> = x.coeffs.iter().map(|c| c.to_integer()).collect();
        for j in 0..d {
            let (q, r) = rem[j].div_rem(&self.basis[j][j]);
            if !r.is_zero() {
                return false;
            }
            for (t, b) in rem.iter_mut().zip(&self.basis[j]) {
                *t -= &q * b;
            }
        }
        true
    }

    pub fn display(&self) -> String {
        match &self.generator {
            Some(g) => format!("({g})"),
            None => format!("ideal of norm {}", self.norm()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> NumberField {
        NumberField::from_i64(&[-1, -3, 0, 1]).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn define_field_examples() {
        let k = cubic();
        assert_eq!(k.degree(), 3);
        assert_eq!(k.discriminant(), &BigInt::from(81));
        let r = NumberField::from_i64(&[-1, 1]).unwrap();
        assert_eq!(r.degree(), 1);
        assert_eq!(r.discriminant(), &BigInt::one());
        let s = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        assert_eq!(s.discriminant(), &BigInt::from(8));
    }

    #[test]
    fn splitting_types() {
        let k = cubic();
        let kind = |p| splitting_type(&k.factor_prime(p).unwrap(), 3);
        assert_eq!(kind(2), "inert");
        assert_eq!(kind(3), "totally ramified");
        assert_eq!(kind(5), "inert");
        assert_eq!(kind(17), "totally split");
        assert_eq!(kind(7), "inert");
    }

    #[test]
    fn define_field_errors() {
        assert_eq!(NumberField::from_i64(&[1, 0, 2]).unwrap_err(), Error::NotMonic);
        assert!(matches!(NumberField::from_i64(&[1, 0, 1]), Err(Error::NotTotallyReal { real: 0, degree: 2 })));
        assert!(matches!(NumberField::from_i64(&[-1, 0, 1]), Err(Error::NotIrreducible(_))));
        // (x^2 - 2)(x^2 - 3) has no rational root but is caught by degree sets
        assert!(matches!(NumberField::from_i64(&[6, 0, -5, 0, 1]), Err(Error::NotIrreducible(_))));
        assert!(NumberField::with_discriminant(&[-1, -3, 0, 1].map(BigInt::from), &BigInt::from(81)).is_ok());
        assert!(NumberField::with_discriminant(&[-1, -3, 0, 1].map(BigInt::from), &BigInt::from(49)).is_err());
    }

    #[test]
    fn quartic_totally_real_accepted() {
        // x^4 - 4x^2 + 2, the maximal real subfield of Q(ζ16)
        let k = NumberField::from_i64(&[2, 0, -4, 0, 1]).unwrap();
        assert_eq!(k.degree(), 4);
        assert_eq!(k.discriminant(), &BigInt::from(2048));
    }

    #[test]
    fn trace_and_norm_examples() {
        let k = cubic();
        let t = k.theta();
        assert_eq!(k.trace(&t), q(0));
        assert_eq!(k.norm(&t), q(1));
        assert_eq!(k.trace(&k.theta_pow(2)), q(6));
        let g = k.trace_gram();
        assert_eq!(g, matrix::from_i64(&[&[3, 0, 6], &[0, 6, 3], &[6, 3, 18]]));
        assert_eq!(matrix::int_det(&g), BigInt::from(81));
    }

    #[test]
    fn factor_prime_examples() {
        let k = cubic();
        let two = k.factor_prime(2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!((two[0].e, two[0].f), (1, 3));
        let three = k.factor_prime(3).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!((three[0].e, three[0].f), (3, 1));
        let five = k.factor_prime(5).unwrap();
        assert_eq!((five.len(), five[0].e, five[0].f), (1, 1, 3));
        assert_eq!(k.factor_prime(9).unwrap_err(), Error::NotPrime(9));
    }

    #[test]
    fn signs_at_places() {
        let k = cubic();
        let t = k.theta();
        let signs: Vec<i8> = (1..=3).map(|i| k.sign_at(&t, i).unwrap()).collect();
        assert_eq!(signs, vec![-1, -1, 1]);
        for i in 1..=3 {
            assert_eq!(k.sign_at(&k.one(), i).unwrap(), 1);
            assert_eq!(k.sign_at(&k.from_int(-3), i).unwrap(), -1);
        }
        assert_eq!(k.sign_at(&k.zero(), 1).unwrap_err(), Error::ZeroElement);
        // 2θ + 1 ≈ (-2.06, 0.31, 4.76)
        let x = k.from_ints(&[1, 2]);
        let signs: Vec<i8> = (1..=3).map(|i| k.sign_at(&x, i).unwrap()).collect();
        assert_eq!(signs, vec![-1, 1, 1]);
    }

    #[test]
    fn residue_squares() {
        let rq = NumberField::rationals();
        let p5 = &rq.factor_prime(5).unwrap()[0];
        assert!(!rq.is_square_in_residue_field(&rq.from_int(2), p5).unwrap());
        assert!(rq.is_square_in_residue_field(&rq.from_int(4), p5).unwrap());
        assert!(rq.is_square_in_residue_field(&rq.one(), p5).unwrap());
        let p2 = &rq.factor_prime(2).unwrap()[0];
        assert_eq!(rq.is_square_in_residue_field(&rq.one(), p2).unwrap_err(), Error::DyadicPrime);
        assert_eq!(rq.is_square_in_residue_field(&rq.from_int(10), p5).unwrap_err(), Error::NonUnit);
        // fractional units reduce through their denominators
        let half = rq.from_rational(BigRational::new(1.into(), 2.into()));
        assert!(!rq.is_square_in_residue_field(&half, p5).unwrap());
    }

    #[test]
    fn residue_square_in_f125_matches_brute_force() {
        let k = cubic();
        let p5 = &k.factor_prime(5).unwrap()[0];
        // brute force: the set of squares in F_5[t]/(t^3 - 3t - 1)
        let g = &p5.g;
        let mut squares = std::collections::BTreeSet::new();
        for a in 0..125u64 {
            let e: FpPoly = {
                let mut v = vec![a % 5, (a / 5) % 5, a / 25];
                poly::fp_trim(&mut v);
                v
            };
            if e.is_empty() {
                continue;
            }
            squares.insert(poly::fp_mulmod(&e, &e, g, 5));
        }
        assert_eq!(squares.len(), 62);
        for c in [[1, 1, 0], [0, 1, 0], [2, 0, 1], [3, 4, 1]] {
            let x = k.from_ints(&c);
            let r = k.residue(&x, p5).unwrap();
            assert_eq!(k.is_square_in_residue_field(&x, p5).unwrap(), squares.contains(&r), "{x}");
        }
    }

    #[test]
    fn valuations_at_ramified_prime() {
        let k = cubic();
        let p3 = &k.factor_prime(3).unwrap()[0];
        assert_eq!(k.valuation(&k.from_int(3), p3).unwrap(), 3);
        assert_eq!(k.valuation(&k.from_int(9), p3).unwrap(), 6);
        let pi = k.uniformizer(p3);
        assert_eq!(k.valuation(&pi, p3).unwrap(), 1);
        let third = k.from_rational(BigRational::new(1.into(), 3.into()));
        assert_eq!(k.valuation(&third, p3).unwrap(), -3);
        let u = k.div(&k.from_int(3), &k.pow(&pi, 3).unwrap()).unwrap();
        assert_eq!(k.valuation(&u, p3).unwrap(), 0);
        assert!(k.residue(&u, p3).is_ok());
    }

    #[test]
    fn ideal_arithmetic() {
        let k = cubic();
        let p3 = &k.factor_prime(3).unwrap()[0];
        let pid = Ideal::prime(&k, p3);
        assert_eq!(pid.norm(), BigInt::from(3));
        assert_eq!(pid.pow(&k, 3), Ideal::principal(&k, &k.from_int(3)).unwrap());
        assert!(Ideal::principal(&k, &k.theta()).unwrap().is_unit_ideal());
    }

    #[test]
    fn display_elements() {
        let k = cubic();
        assert_eq!(k.from_ints(&[-8, 0, 2]).to_string(), "2θ^2 - 8");
        assert_eq!(k.from_ints(&[1, 4]).display("b"), "4b + 1");
        assert_eq!(k.zero().to_string(), "0");
    }
}
