//! Dense exact matrices over `BigInt` and `BigRational`.
//!
//! Matrices are plain `Vec<Vec<_>>` in row-major order. Everything here is
//! exact; nothing is ever rounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn rat_identity(n: usize) -> RatMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect()
}

pub fn to_rat(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Converts to an integer matrix when every entry is integral.
pub fn to_int(m: &[Vec<BigRational>]) -> Option<IntMatrix> {
    m.iter().map(|r| r.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()).collect()
}

pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn int_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

pub fn rat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> RatMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// `B · G · Bᵀ`, the Gram matrix of the rows of `B`.
pub fn rat_congruence(b: &[Vec<BigRational>], g: &[Vec<BigRational>]) -> RatMatrix {
    rat_mul(&rat_mul(b, g), &transpose(b))
}

pub fn int_congruence(b: &[Vec<BigInt>], g: &[Vec<BigInt>]) -> IntMatrix {
    int_mul(&int_mul(b, g), &transpose(b))
}

pub fn is_symmetric<T: PartialEq>(m: &[Vec<T>]) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Fraction-free (Bareiss) determinant.
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn rat_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    det
}

pub fn rat_inverse(m: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut inv = rat_identity(n);
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        inv.swap(p, k);
        let pivot = a[k][k].clone();
        for j in 0..n {
            a[k][j] = &a[k][j] / &pivot;
            inv[k][j] = &inv[k][j] / &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
                let w = &f * &inv[k][j];
                inv[i][j] -= w;
            }
        }
    }
    Some(inv)
}

/// Solves `x · m = v` for a square invertible `m`.
pub fn rat_solve_left(m: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let inv = rat_inverse(m)?;
    let n = v.len();
    Some((0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &v[k] * &inv[k][j])).collect())
}

pub fn rat_rank(m: &[Vec<BigRational>]) -> usize {
    let mut a: RatMatrix = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..cols {
                let v = &f * &a[r][j];
                a[i][j] -= v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Row echelon form over ℤ by unimodular row operations.
///
/// Returns `(H, U, rank)` with `U · m = H`. The first `rank` rows of `H`
/// are the Hermite normal form (positive pivots, entries above each pivot
/// reduced into `[0, pivot)`); the remaining rows are zero, and the matching
/// rows of `U` form a saturated basis of the left kernel of `m`.
pub fn echelon_with_transform(m: &[Vec<BigInt>]) -> (IntMatrix, IntMatrix, usize) {
    let rows = m.len();
    let mut a: IntMatrix = m.to_vec();
    let mut u = int_identity(rows);
    if rows == 0 {
        return (a, u, 0);
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pick = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = pick else { break };
            a.swap(p, r);
            u.swap(p, r);
            let mut done = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                row_sub(&mut a, i, r, &q);
                row_sub(&mut u, i, r, &q);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            negate_row(&mut a, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                row_sub(&mut a, i, r, &q);
                row_sub(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (a, u, r)
}

/// Hermite normal form of the row span; zero rows dropped.
pub fn hnf(m: &[Vec<BigInt>]) -> IntMatrix {
    let (h, _, rank) = echelon_with_transform(m);
    h.into_iter().take(rank).collect()
}

/// Saturated basis of `{x ∈ ℤ^rows : x · m = 0}`, in Hermite normal form.
pub fn left_kernel(m: &[Vec<BigInt>]) -> IntMatrix {
    let (_, u, rank) = echelon_with_transform(m);
    let ker: IntMatrix = u.into_iter().skip(rank).collect();
    if ker.is_empty() {
        ker
    } else {
        hnf(&ker)
    }
}

/// Common denominator of every entry.
pub fn common_denominator(m: &[Vec<BigRational>]) -> BigInt {
    m.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Hermite basis of the ℤ-span of rational row vectors.
pub fn rat_span_hnf(m: &[Vec<BigRational>]) -> RatMatrix {
    let den = common_denominator(m);
    let scaled: IntMatrix = m.iter().map(|r| r.iter().map(|x| (x * &den).to_integer()).collect()).collect();
    hnf(&scaled).into_iter().map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect()).collect()
}

fn row_sub(a: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn negate_row(a: &mut IntMatrix, r: usize) {
    for x in a[r].iter_mut() {
        *x = -&*x;
    }
}

fn col_sub(a: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let v = q * &row[src];
        row[target] -= v;
    }
}

fn swap_cols(a: &mut IntMatrix, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Smith normal form `U · A · V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n).map(|i| self.d[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn verify(&self, a: &[Vec<BigInt>]) -> bool {
        int_mul(&int_mul(&self.u, a), &self.v) == self.d
    }
}

pub fn smith(a: &[Vec<BigInt>]) -> Smith {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut d: IntMatrix = a.to_vec();
    let mut u = int_identity(rows);
    let mut v = int_identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap(pi, t);
            u.swap(pi, t);
            swap_cols(&mut d, pj, t);
            swap_cols(&mut v, pj, t);

            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                row_sub(&mut d, i, t, &q);
                row_sub(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                col_sub(&mut d, j, t, &q);
                col_sub(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility condition on the remaining block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    let one = BigInt::from(-1);
                    row_sub(&mut d, t, i, &one);
                    row_sub(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if t < rows && t < cols && d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    Smith { d, u, v }
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix by
/// congruence diagonalization.
pub fn rat_inertia(m: &[Vec<BigRational>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // a[i][i] = a[j][j] = 0 and a[i][j] != 0: replace e_i by e_i + e_j
                let Some((i, j)) = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
                else {
                    break;
                };
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                i
            }
        };
        a.swap(k, pivot);
        for r in a.iter_mut() {
            r.swap(k, pivot);
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for c in k..n {
                let t = &f * &a[k][c];
                a[i][c] -= t;
            }
            for r in k..n {
                let t = &f * &a[r][k];
                a[r][i] -= t;
            }
        }
    }
    (pos, neg, n - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_rational_elimination() {
        let m = from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(int_det(&m), BigInt::from(4));
        assert_eq!(rat_det(&to_rat(&m)), BigRational::from_integer(4.into()));
        let z = from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(int_det(&z), BigInt::from(-1));
    }

    #[test]
    fn kernel_is_saturated() {
        // x1 + x2 + 2*x3 = 0 over Z^3 (as a column)
        let m = from_i64(&[&[1], &[1], &[2]]);
        let k = left_kernel(&m);
        assert_eq!(k.len(), 2);
        for row in &k {
            let s: BigInt = row.iter().zip([1, 1, 2]).map(|(x, c)| x * BigInt::from(c)).sum();
            assert!(s.is_zero());
        }
        // saturated: gcd of the 2x2 minors is 1
        let minors = [
            &k[0][0] * &k[1][1] - &k[0][1] * &k[1][0],
            &k[0][0] * &k[1][2] - &k[0][2] * &k[1][0],
            &k[0][1] * &k[1][2] - &k[0][2] * &k[1][1],
        ];
        let g = minors.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        assert_eq!(g, BigInt::one());
    }

    #[test]
    fn smith_of_diagonal_and_cartan() {
        let s = smith(&from_i64(&[&[4, 0], &[0, 2]]));
        assert!(s.verify(&from_i64(&[&[4, 0], &[0, 2]])));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);

        let a2 = from_i64(&[&[2, -1], &[-1, 2]]);
        let s = smith(&a2);
        assert!(s.verify(&a2));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(3)]);

        let odd = from_i64(&[&[6, 4], &[4, 6]]);
        let s = smith(&odd);
        assert!(s.verify(&odd));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(10)]);
    }

    #[test]
    fn hnf_is_canonical() {
        let a = from_i64(&[&[2, 4], &[1, 3]]);
        let b = from_i64(&[&[1, 3], &[3, 7]]);
        assert_eq!(hnf(&a), hnf(&b));
    }

    #[test]
    fn inertia_examples() {
        let u = to_rat(&from_i64(&[&[0, 1], &[1, 0]]));
        assert_eq!(rat_inertia(&u), (1, 1, 0));
        let a2 = to_rat(&from_i64(&[&[2, -1], &[-1, 2]]));
        assert_eq!(rat_inertia(&a2), (2, 0, 0));
        let deg = to_rat(&from_i64(&[&[0, 0, 0], &[0, 1, 1], &[0, 1, 1]]));
        assert_eq!(rat_inertia(&deg), (1, 0, 2));
        let z = to_rat(&from_i64(&[&[0, 2, 0], &[2, 0, 0], &[0, 0, -3]]));
        assert_eq!(rat_inertia(&z), (1, 2, 0));
    }

    #[test]
    fn inverse_round_trip() {
        let m = to_rat(&from_i64(&[&[3, 0, 6], &[0, 6, 3], &[6, 3, 18]]));
        let inv = rat_inverse(&m).unwrap();
        assert_eq!(rat_mul(&m, &inv), rat_identity(3));
    }
}
