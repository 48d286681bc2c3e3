//! Integer lattices: determinants, inertia, Smith form, discriminant forms,
//! ADE root lattices, Nikulin overlattices and a bounded rank-3 search.

mod ade;
mod discform;
mod nikulin;
mod rank3;

pub use ade::{ade_lattice, AdeConfig, AdeSymbol, Sign};
pub use discform::{format_primary, length, primary_parts, DiscForm, Length};
pub use nikulin::{even_overlattice, isotropic_subgroups, Overlattice, Subgroup, DEFAULT_CAP};
pub use rank3::{rank3_realizable, Rank3Outcome};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix, Smith};

/// A free ℤ-module with a symmetric integer Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntLattice {
    gram: IntMatrix,
}

impl IntLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("Gram matrix is not square".into()));
        }
        if !matrix::is_symmetric(&gram) {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        Ok(IntLattice { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(matrix::from_i64(rows))
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        if self.gram.is_empty() {
            return BigInt::one();
        }
        matrix::int_det(&self.gram)
    }

    /// `(positive, negative, zero)` eigenvalue counts.
    pub fn inertia(&self) -> (usize, usize, usize) {
        matrix::rat_inertia(&matrix::to_rat(&self.gram))
    }

    pub fn signature(&self) -> (usize, usize) {
        let (p, q, _) = self.inertia();
        (p, q)
    }

    pub fn is_even(&self) -> bool {
        let two = BigInt::from(2);
        self.gram.iter().enumerate().all(|(i, r)| (&r[i] % &two).is_zero())
    }

    /// `U · G · V = D`, verified.
    pub fn snf(&self) -> Smith {
        let s = matrix::smith(&self.gram);
        assert!(s.verify(&self.gram), "Smith form failed verification");
        s
    }

    /// Nontrivial invariant factors of `Λ*/Λ`.
    pub fn disc_group(&self) -> Result<Vec<BigInt>> {
        if self.det().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(self.snf().diagonal().into_iter().filter(|d| !d.is_one()).collect())
    }

    pub fn disc_form(&self) -> Result<DiscForm> {
        DiscForm::of_lattice(self)
    }

    pub fn negate(&self) -> IntLattice {
        IntLattice { gram: self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    pub fn direct_sum(&self, other: &IntLattice) -> IntLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut g = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        IntLattice { gram: g }
    }

    /// Hyperbolic plane `U`.
    pub fn hyperbolic() -> IntLattice {
        IntLattice::from_i64(&[&[0, 1], &[1, 0]]).expect("symmetric")
    }

    /// `B G Bᵀ` for an integer change of basis `B`.
    pub fn transform(&self, b: &IntMatrix) -> IntLattice {
        IntLattice { gram: matrix::int_congruence(b, &self.gram) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_signature() {
        let u = IntLattice::hyperbolic();
        assert_eq!(u.det(), BigInt::from(-1));
        assert_eq!(u.signature(), (1, 1));
        let a2 = IntLattice::from_i64(&[&[2, -1], &[-1, 2]]).unwrap();
        assert_eq!(a2.det(), BigInt::from(3));
        assert_eq!(a2.signature(), (2, 0));
        let deg = IntLattice::from_i64(&[&[2, 2], &[2, 2]]).unwrap();
        assert_eq!(deg.inertia(), (1, 0, 1));
        assert_eq!(deg.disc_group(), Err(Error::Degenerate));
    }

    #[test]
    fn disc_groups() {
        let d = IntLattice::from_i64(&[&[2, 0], &[0, 4]]).unwrap();
        assert_eq!(d.disc_group().unwrap(), vec![BigInt::from(2), BigInt::from(4)]);
        let a2 = IntLattice::from_i64(&[&[2, -1], &[-1, 2]]).unwrap();
        assert_eq!(a2.disc_group().unwrap(), vec![BigInt::from(3)]);
        assert!(IntLattice::hyperbolic().disc_group().unwrap().is_empty());
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(IntLattice::from_i64(&[&[2, 1], &[0, 2]]).is_err());
    }
}
