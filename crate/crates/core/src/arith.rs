//! Rational-integer factorization for the sizes that occur here: trial
//! division, then Pollard rho on a cofactor that fits in a `u64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::is_prime_u64;

const TRIAL_LIMIT: u64 = 1 << 16;

/// `|n| = ∏ p^k`, primes ascending. `n` must be nonzero.
pub fn factor_integer(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && !m.is_one() {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        if m.is_multiple_of(&pb) {
            let mut k = 0;
            while m.is_multiple_of(&pb) {
                m /= &pb;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    let rest = m.to_u64().ok_or_else(|| Error::FactorizationTooHard(m.to_string()))?;
    let mut stack = vec![rest];
    let mut big = Vec::new();
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime_u64(x) {
            big.push(x);
            continue;
        }
        let d = pollard_rho(x).ok_or_else(|| Error::FactorizationTooHard(x.to_string()))?;
        stack.push(d);
        stack.push(x / d);
    }
    big.sort_unstable();
    for q in big {
        match out.last_mut() {
            Some((r, k)) if *r == q => *k += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

/// Primes dividing a nonzero integer.
pub fn prime_support(n: &BigInt) -> Result<Vec<u64>> {
    Ok(factor_integer(n)?.into_iter().map(|(p, _)| p).collect())
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pollard_rho(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..64u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return Some(d);
        }
    }
    None
}
