//! Univariate polynomials: over ℚ (root isolation) and over F_p (factoring).
//!
//! Coefficient vectors are stored constant term first.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Polynomials over Q
// ---------------------------------------------------------------------------

pub type QPoly = Vec<BigRational>;

pub fn q_trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn q_from_ints(c: &[BigInt]) -> QPoly {
    let mut p: QPoly = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    q_trim(&mut p);
    p
}

pub fn q_degree(p: &QPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn q_eval(p: &QPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn q_derivative(p: &QPoly) -> QPoly {
    let mut d: QPoly =
        p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    q_trim(&mut d);
    d
}

/// Remainder of `a` modulo `b` (`b` nonzero).
pub fn q_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    q_trim(&mut r);
    let db = q_degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    while let Some(dr) = q_degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &lead;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate().take(db + 1) {
            let v = &f * c;
            r[i + shift] -= v;
        }
        q_trim(&mut r);
    }
    r
}

/// Sturm sequence `f, f', -rem(f, f'), ...`.
pub fn sturm_chain(f: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![f.clone(), q_derivative(f)];
    loop {
        let n = chain.len();
        if q_degree(&chain[n - 1]).is_none() {
            chain.pop();
            break;
        }
        let mut r = q_rem(&chain[n - 2], &chain[n - 1]);
        if q_degree(&r).is_none() && r.iter().all(Zero::is_zero) {
            break;
        }
        for c in r.iter_mut() {
            *c = -&*c;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(chain: &[QPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = q_eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub fn count_roots(chain: &[QPoly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes(chain, lo).saturating_sub(sign_changes(chain, hi))
}

/// Cauchy bound: every root lies strictly inside `(-B, B)`.
pub fn root_bound(f: &QPoly) -> BigRational {
    let d = q_degree(f).unwrap_or(0);
    let lead = f[d].abs();
    let m = f[..d].iter().map(|c| c.abs() / &lead).max().unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// An interval isolating one real root: either `lo == hi` is the root, or
/// the polynomial changes sign on `(lo, hi)` and has exactly one root there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Halves the interval around the root of the squarefree `f`.
    pub fn bisect(&mut self, f: &QPoly) {
        if self.is_exact() {
            return;
        }
        let mid = self.midpoint();
        let fm = q_eval(f, &mid);
        if fm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let flo = q_eval(f, &self.lo);
        if flo.is_positive() == fm.is_positive() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }
}

/// Isolates all real roots of a squarefree polynomial, ordered increasingly.
pub fn isolate_real_roots(f: &QPoly) -> Vec<RootInterval> {
    let chain = sturm_chain(f);
    let b = root_bound(f);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&chain, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(shrink_to_sign_change(f, lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Given exactly one root in `(lo, hi]`, returns an isolating interval whose
/// endpoints are non-roots (or an exact rational root).
fn shrink_to_sign_change(f: &QPoly, lo: BigRational, hi: BigRational) -> RootInterval {
    if q_eval(f, &hi).is_zero() {
        return RootInterval { lo: hi.clone(), hi };
    }
    // lo is not a root since the count is over (lo, hi]
    RootInterval { lo, hi }
}

/// Interval enclosure of `p` on `[lo, hi]` by Horner evaluation in interval
/// arithmetic.
pub fn interval_eval(p: &QPoly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut acc = (BigRational::zero(), BigRational::zero());
    for c in p.iter().rev() {
        let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}

// ---------------------------------------------------------------------------
// Polynomials over F_p
// ---------------------------------------------------------------------------

/// Dense polynomial over F_p, constant term first, no trailing zeros.
pub type FpPoly = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn fp_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub fn fp_inv(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    fp_pow(a, p - 2, p)
}

pub fn fp_trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn fp_degree(a: &FpPoly) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn fp_from_int(c: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = c
        .iter()
        .map(|x| {
            let r = ((x % &pb) + &pb) % &pb;
            u64::try_from(r).unwrap()
        })
        .collect();
    fp_trim(&mut out);
    out
}

pub fn fp_add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
    fp_trim(&mut out);
    out
}

pub fn fp_sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p) % p).collect();
    fp_trim(&mut out);
    out
}

pub fn fp_mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_trim(&mut out);
    out
}

/// `(quotient, remainder)` of `a / b`.
pub fn fp_divmod(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = fp_degree(b).expect("division by zero polynomial");
    let inv = fp_inv(b[db], p);
    let mut r = a.clone();
    fp_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = fp_degree(&r) {
        if dr < db {
            break;
        }
        let f = mulmod(r[dr], inv, p);
        let shift = dr - db;
        q[shift] = f;
        for (i, &c) in b.iter().enumerate() {
            let v = mulmod(f, c, p);
            r[i + shift] = (r[i + shift] + p - v) % p;
        }
        fp_trim(&mut r);
    }
    fp_trim(&mut q);
    (q, r)
}

pub fn fp_rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    fp_divmod(a, b, p).1
}

pub fn fp_monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

pub fn fp_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

pub fn fp_mulmod(a: &FpPoly, b: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    fp_rem(&fp_mul(a, b, p), m, p)
}

/// `base^e mod m` with an arbitrary-size exponent.
pub fn fp_powmod(base: &FpPoly, e: &BigUint, m: &FpPoly, p: u64) -> FpPoly {
    let mut result: FpPoly = fp_rem(&vec![1], m, p);
    let b = fp_rem(base, m, p);
    for i in (0..e.bits()).rev() {
        result = fp_mulmod(&result, &result, m, p);
        if e.bit(i) {
            result = fp_mulmod(&result, &b, m, p);
        }
    }
    result
}

/// Monic irreducible factors of `f` with multiplicities, sorted by
/// `(degree, coefficients)`.
///
/// Distinct-degree splitting uses `gcd(g, x^{p^k} - x)`, which stays valid
/// for non-squarefree `g` because lower-degree factors are stripped with
/// their full multiplicity before degree `k` is examined.
pub fn fp_factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut g = fp_monic(f, p);
    let mut out = Vec::new();
    let n = fp_degree(&g).unwrap_or(0);
    let x: FpPoly = vec![0, 1];
    let pb = BigUint::from(p);
    let mut frob = fp_rem(&x, &g, p); // x^{p^k} mod g, updated per k
    for k in 1..=n {
        if fp_degree(&g).unwrap_or(0) == 0 {
            break;
        }
        frob = fp_powmod(&frob, &pb, &g, p);
        let h = fp_gcd(&g, &fp_sub(&frob, &x, p), p);
        if fp_degree(&h).unwrap_or(0) == 0 {
            continue;
        }
        for q in equal_degree_split(&h, k, p) {
            let mut e = 0;
            loop {
                let (quot, rem) = fp_divmod(&g, &q, p);
                if !rem.is_empty() {
                    break;
                }
                g = quot;
                e += 1;
            }
            out.push((q, e));
        }
        frob = fp_rem(&frob, &g, p);
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Splits a squarefree product of irreducibles of degree `k` (Cantor–Zassenhaus,
/// with a fixed-seed generator so results are reproducible).
fn equal_degree_split(h: &FpPoly, k: usize, p: u64) -> Vec<FpPoly> {
    let n = fp_degree(h).unwrap_or(0);
    if n == k {
        return vec![fp_monic(h, p)];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6b33 ^ p ^ (n as u64) << 32);
    let exp = if p == 2 { None } else { Some((BigUint::from(p).pow(k as u32) - BigUint::one()) / BigUint::from(2u32)) };
    loop {
        let mut a: FpPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        fp_trim(&mut a);
        if fp_degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let w = match &exp {
            Some(e) => fp_sub(&fp_powmod(&a, e, h, p), &vec![1], p),
            None => {
                // absolute trace a + a^2 + ... + a^{2^{k-1}}
                let mut t = fp_rem(&a, h, p);
                let mut acc = t.clone();
                for _ in 1..k {
                    t = fp_mulmod(&t, &t, h, p);
                    acc = fp_add(&acc, &t, p);
                }
                acc
            }
        };
        let d = fp_gcd(h, &w, p);
        let dd = fp_degree(&d).unwrap_or(0);
        if dd > 0 && dd < n {
            let (other, _) = fp_divmod(h, &d, p);
            let mut v = equal_degree_split(&d, k, p);
            v.extend(equal_degree_split(&other, k, p));
            return v;
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = fp_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
