//! Discriminant forms `(Λ*/Λ, q)` of even lattices.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::IntLattice;
use crate::error::{Error, Result};
use crate::matrix;

/// Finite abelian group `⊕ ℤ/d_i` with `q` valued in `Q/2ℤ` and `b` in
/// `Q/ℤ`. Values are kept scaled by the exponent `m = d_last`: `q` as an
/// integer mod `2m`, `b` as an integer mod `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscForm {
    factors: Vec<u64>,
    exponent: u64,
    q: Vec<i128>,
    b: Vec<Vec<i128>>,
    /// Rational lifts of the generators in lattice coordinates, when known.
    lifts: Option<Vec<Vec<BigRational>>>,
}

impl DiscForm {
    /// Builds a form from invariant factors and `q`, `b` values on the
    /// generators (rationals, reduced mod 2 and mod 1).
    pub fn new(factors: Vec<u64>, q: &[BigRational], b: &[Vec<BigRational>]) -> Result<Self> {
        let n = factors.len();
        if q.len() != n || b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("discriminant form data has inconsistent sizes".into()));
        }
        if factors.iter().any(|&d| d < 2) || factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Invalid("invariant factors must satisfy 1 < d_1 | d_2 | ...".into()));
        }
        let exponent = factors.last().copied().unwrap_or(1);
        let m = BigInt::from(exponent);
        let scale = |x: &BigRational, modulus: i128| -> Result<i128> {
            let y = x * BigRational::from_integer(m.clone());
            if !y.is_integer() {
                return Err(Error::Invalid(format!("value {x} has denominator not dividing {m}")));
            }
            let v = y.to_integer().to_i128().ok_or(Error::CapExceeded { size: u128::MAX, cap: i128::MAX as u128 })?;
            Ok(v.rem_euclid(modulus))
        };
        let m_i = exponent as i128;
        let qs = q.iter().map(|x| scale(x, 2 * m_i)).collect::<Result<Vec<_>>>()?;
        let bs = b
            .iter()
            .map(|r| r.iter().map(|x| scale(x, m_i)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            if bs[i][i] != qs[i].rem_euclid(m_i) {
                return Err(Error::Invalid("b(x, x) must equal q(x) mod 1".into()));
            }
            for j in 0..n {
                if bs[i][j] != bs[j][i] {
                    return Err(Error::Invalid("b must be symmetric".into()));
                }
            }
        }
        Ok(DiscForm { factors, exponent, q: qs, b: bs, lifts: None })
    }

    pub(super) fn of_lattice(l: &IntLattice) -> Result<Self> {
        if !l.is_even() {
            return Err(Error::OddLattice);
        }
        if l.det().is_zero() {
            return Err(Error::Degenerate);
        }
        let s = l.snf();
        let n = l.rank();
        let g = matrix::to_rat(l.gram());
        let mut factors = Vec::new();
        let mut lifts = Vec::new();
        for i in 0..n {
            let d = &s.d[i][i];
            if d == &BigInt::from(1) {
                continue;
            }
            let du = d.to_u64().ok_or(Error::CapExceeded { size: u128::MAX, cap: u64::MAX as u128 })?;
            factors.push(du);
            let dr = BigRational::from_integer(d.clone());
            lifts.push((0..n).map(|r| BigRational::from_integer(s.v[r][i].clone()) / &dr).collect::<Vec<_>>());
        }
        let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let mut acc = BigRational::zero();
            for i in 0..n {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    acc += &x[i] * &g[i][j] * &y[j];
                }
            }
            acc
        };
        let q: Vec<BigRational> = lifts.iter().map(|x| pair(x, x)).collect();
        let b: Vec<Vec<BigRational>> = lifts.iter().map(|x| lifts.iter().map(|y| pair(x, y)).collect()).collect();
        let mut f = DiscForm::new(factors, &q, &b)?;
        f.lifts = Some(lifts);
        Ok(f)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn ngens(&self) -> usize {
        self.factors.len()
    }

    pub fn lifts(&self) -> Option<&[Vec<BigRational>]> {
        self.lifts.as_deref()
    }

    /// `q(Σ c_i x_i)` scaled by the exponent, in `[0, 2m)`.
    pub fn q_scaled(&self, c: &[u64]) -> i128 {
        let two_m = 2 * self.exponent as i128;
        let mut acc = 0i128;
        for i in 0..c.len() {
            if c[i] == 0 {
                continue;
            }
            let ci = c[i] as i128;
            acc = (acc + ci * ci % two_m * self.q[i]) % two_m;
            for j in i + 1..c.len() {
                if c[j] != 0 {
                    acc = (acc + 2 * (ci * c[j] as i128 % two_m) * self.b[i][j]) % two_m;
                }
            }
        }
        acc
    }

    /// `b(x, y)` scaled by the exponent, in `[0, m)`.
    pub fn b_scaled(&self, x: &[u64], y: &[u64]) -> i128 {
        let m = self.exponent as i128;
        let mut acc = 0i128;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] != 0 {
                    acc = (acc + (x[i] as i128 * y[j] as i128 % m) * self.b[i][j]) % m;
                }
            }
        }
        acc
    }

    /// `q(x) ∈ Q/2ℤ`, represented in `[0, 2)`.
    pub fn q(&self, c: &[u64]) -> BigRational {
        BigRational::new(self.q_scaled(c).into(), self.exponent.into())
    }

    /// `b(x, y) ∈ Q/ℤ`, represented in `[0, 1)`.
    pub fn b(&self, x: &[u64], y: &[u64]) -> BigRational {
        BigRational::new(self.b_scaled(x, y).into(), self.exponent.into())
    }

    pub fn gen_q(&self) -> Vec<BigRational> {
        (0..self.ngens()).map(|i| self.q(&self.unit(i))).collect()
    }

    pub fn gen_b(&self) -> Vec<Vec<BigRational>> {
        (0..self.ngens()).map(|i| (0..self.ngens()).map(|j| self.b(&self.unit(i), &self.unit(j))).collect()).collect()
    }

    pub fn unit(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.ngens()];
        v[i] = 1;
        v
    }

    /// `(F, -q)`.
    pub fn negate(&self) -> DiscForm {
        let m = self.exponent as i128;
        DiscForm {
            factors: self.factors.clone(),
            exponent: self.exponent,
            q: self.q.iter().map(|x| (-x).rem_euclid(2 * m)).collect(),
            b: self.b.iter().map(|r| r.iter().map(|x| (-x).rem_euclid(m)).collect()).collect(),
            lifts: self.lifts.clone(),
        }
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.factors).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn scale(&self, k: u64, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.factors).map(|(a, d)| ((*a as u128 * k as u128) % *d as u128) as u64).collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.factors).fold(1u64, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d))))
    }

    /// Mixed-radix index of an element.
    pub fn index(&self, x: &[u64]) -> u128 {
        x.iter().zip(&self.factors).fold(0u128, |acc, (&a, &d)| acc * d as u128 + a as u128)
    }

    pub fn element_at(&self, mut idx: u128) -> Vec<u64> {
        let mut out = vec![0; self.ngens()];
        for i in (0..self.ngens()).rev() {
            let d = self.factors[i] as u128;
            out[i] = (idx % d) as u64;
            idx /= d;
        }
        out
    }

    /// All elements in index order; fails above `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<Vec<u64>>> {
        let n = self.order();
        if n > cap {
            return Err(Error::CapExceeded { size: n, cap });
        }
        Ok((0..n).map(|i| self.element_at(i)).collect())
    }

    /// Size of the subgroup generated by `gens`.
    pub fn span_size(&self, gens: &[Vec<u64>]) -> u128 {
        self.span(gens).len() as u128
    }

    /// Elements of the subgroup generated by `gens`, sorted by index.
    pub fn span(&self, gens: &[Vec<u64>]) -> Vec<u128> {
        let zero = vec![0u64; self.ngens()];
        let mut seen = std::collections::BTreeSet::from([self.index(&zero)]);
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(self.index(&y)) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Isomorphism of finite quadratic forms by backtracking over
    /// generator images. `None` when `deadline` passes first.
    pub fn is_isomorphic(&self, other: &DiscForm, cap: u128, deadline: Option<Instant>) -> Result<Option<bool>> {
        if self.factors != other.factors {
            return Ok(Some(false));
        }
        let n = self.ngens();
        if n == 0 {
            return Ok(Some(true));
        }
        // candidates bucketed by (order, q)
        let mut buckets: BTreeMap<(u64, i128), Vec<Vec<u64>>> = BTreeMap::new();
        for x in other.elements(cap)? {
            buckets.entry((other.element_order(&x), other.q_scaled(&x))).or_default().push(x);
        }
        let mut images: Vec<Vec<u64>> = Vec::with_capacity(n);
        let mut timed_out = false;
        let found = self.extend_iso(other, &buckets, &mut images, deadline, &mut timed_out);
        if timed_out {
            return Ok(None);
        }
        Ok(Some(found))
    }

    fn extend_iso(
        &self,
        other: &DiscForm,
        buckets: &BTreeMap<(u64, i128), Vec<Vec<u64>>>,
        images: &mut Vec<Vec<u64>>,
        deadline: Option<Instant>,
        timed_out: &mut bool,
    ) -> bool {
        let i = images.len();
        if i == self.ngens() {
            return other.span_size(images) == other.order();
        }
        if deadline.is_some_and(|d| Instant::now() > d) {
            *timed_out = true;
            return false;
        }
        let key = (self.factors[i], self.q[i]);
        let Some(cands) = buckets.get(&key) else { return false };
        for y in cands {
            if (0..i).all(|j| other.b_scaled(y, &images[j]) == self.b[i][j]) {
                images.push(y.clone());
                if self.extend_iso(other, buckets, images, deadline, timed_out) {
                    return true;
                }
                images.pop();
                if *timed_out {
                    return false;
                }
            }
        }
        false
    }
}

impl fmt::Display for DiscForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let mut counts: Vec<(u64, usize)> = Vec::new();
        for &d in &self.factors {
            match counts.last_mut() {
                Some((e, c)) if *e == d => *c += 1,
                _ => counts.push((d, 1)),
            }
        }
        let parts: Vec<String> =
            counts.iter().map(|(d, c)| if *c == 1 { format!("ℤ/{d}") } else { format!("(ℤ/{d})^{c}") }).collect();
        f.write_str(&parts.join(" × "))
    }
}

/// Per-prime minimal generator counts and their maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Length {
    pub lambda: usize,
    pub per_prime: Vec<(u64, usize)>,
}

fn prime_powers(d: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut m = d;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut q = 1;
            while m.is_multiple_of(p) {
                q *= p;
                m /= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, m));
    }
    out
}

/// `ℓ_p` = number of invariant factors divisible by `p`; `λ = max ℓ_p`.
pub fn length(factors: &[u64]) -> Length {
    let primes: std::collections::BTreeSet<u64> =
        factors.iter().flat_map(|&d| prime_powers(d)).map(|(p, _)| p).collect();
    let per_prime: Vec<(u64, usize)> =
        primes.into_iter().map(|p| (p, factors.iter().filter(|&&d| d % p == 0).count())).collect();
    let lambda = per_prime.iter().map(|&(_, c)| c).max().unwrap_or(0);
    Length { lambda, per_prime }
}

/// Primary decomposition as `(prime power, multiplicity)`, ordered by
/// prime then power.
pub fn primary_parts(factors: &[u64]) -> Vec<(u64, usize)> {
    let mut m: std::collections::BTreeMap<(u64, u64), usize> = std::collections::BTreeMap::new();
    for &d in factors {
        for pq in prime_powers(d) {
            *m.entry(pq).or_default() += 1;
        }
    }
    m.into_iter().map(|((_, q), c)| (q, c)).collect()
}

/// `"(ℤ/2)^3 × (ℤ/3)^6 × (ℤ/9)^3"`.
pub fn format_primary(parts: &[(u64, usize)]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    parts
        .iter()
        .map(|(q, c)| if *c == 1 { format!("ℤ/{q}") } else { format!("(ℤ/{q})^{c}") })
        .collect::<Vec<_>>()
        .join(" × ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn a1_and_a2_negative() {
        let a1 = IntLattice::from_i64(&[&[-2]]).unwrap();
        let f = a1.disc_form().unwrap();
        assert_eq!(f.factors(), &[2]);
        assert_eq!(f.q(&[1]), r(3, 2)); // -1/2 mod 2
        let a2 = IntLattice::from_i64(&[&[-2, 1], &[1, -2]]).unwrap();
        let f = a2.disc_form().unwrap();
        assert_eq!(f.factors(), &[3]);
        assert_eq!(f.q(&[1]), r(4, 3)); // -2/3 mod 2
        assert_eq!(IntLattice::hyperbolic().disc_form().unwrap().order(), 1);
    }

    #[test]
    fn odd_lattice_rejected() {
        let l = IntLattice::from_i64(&[&[1]]).unwrap();
        assert_eq!(l.disc_form(), Err(Error::OddLattice));
    }

    #[test]
    fn polarization_identity() {
        let l = IntLattice::from_i64(&[&[-2, 1, 0], &[1, -2, 1], &[0, 1, -4]]).unwrap();
        let f = l.disc_form().unwrap();
        let els = f.elements(1000).unwrap();
        let m = f.exponent() as i128;
        for x in &els {
            for y in &els {
                let lhs = (f.q_scaled(&f.add(x, y)) - f.q_scaled(x) - f.q_scaled(y)).rem_euclid(2 * m);
                assert_eq!(lhs, (2 * f.b_scaled(x, y)).rem_euclid(2 * m));
            }
        }
    }

    #[test]
    fn lengths() {
        let l = length(&[3, 3, 3, 3, 3, 3, 18, 18, 18]);
        assert_eq!(l.lambda, 9);
        assert_eq!(l.per_prime, vec![(2, 3), (3, 9)]);
        assert_eq!(length(&[]).lambda, 0);
        assert_eq!(length(&[2, 4]).lambda, 2);
    }

    #[test]
    fn primary_decomposition() {
        let p = primary_parts(&[3, 3, 3, 3, 3, 3, 18, 18, 18]);
        assert_eq!(p, vec![(2, 3), (3, 6), (9, 3)]);
        assert_eq!(format_primary(&p), "(ℤ/2)^3 × (ℤ/3)^6 × (ℤ/9)^3");
        assert_eq!(format_primary(&primary_parts(&[12])), "ℤ/4 × ℤ/3");
    }

    #[test]
    fn isomorphism_of_forms() {
        let a = IntLattice::from_i64(&[&[-2, 1], &[1, -2]]).unwrap().disc_form().unwrap();
        let b = IntLattice::from_i64(&[&[-6]]).unwrap().disc_form().unwrap();
        // ℤ/3 with q = -2/3 vs ℤ/6 : different groups
        assert_eq!(a.is_isomorphic(&b, 100, None).unwrap(), Some(false));
        let c = IntLattice::from_i64(&[&[2, 1], &[1, -4]]).unwrap().disc_form().unwrap();
        assert_eq!(c.factors(), &[9]);
        assert_eq!(c.is_isomorphic(&c, 100, None).unwrap(), Some(true));
        // q = -2/3 is not isomorphic to q = 2/3 on ℤ/3
        let a_pos = IntLattice::from_i64(&[&[2, -1], &[-1, 2]]).unwrap().disc_form().unwrap();
        assert_eq!(a.is_isomorphic(&a_pos, 100, None).unwrap(), Some(false));
        assert_eq!(a.is_isomorphic(&a_pos.negate(), 100, None).unwrap(), Some(true));
    }
}
