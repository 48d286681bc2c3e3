//! Isotropic subgroups of discriminant forms and the even overlattices
//! they correspond to.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{DiscForm, IntLattice};
use crate::error::{Error, Result};
use crate::matrix;

/// Default bound on group elements considered during enumeration.
pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    /// At most two generators, as coefficient vectors.
    pub gens: Vec<Vec<u64>>,
    pub order: u128,
    /// Element indices, ascending.
    pub elements: Vec<u128>,
}

impl Subgroup {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Cyclic of order `n`.
    pub fn is_cyclic_of_order(&self, f: &DiscForm, n: u128) -> bool {
        self.order == n && self.elements.iter().any(|&i| f.element_order(&f.element_at(i)) as u128 == n)
    }
}

/// All subgroups with at most two generators, of order at most
/// `max_order`, on which `q` vanishes. The trivial subgroup comes first.
pub fn isotropic_subgroups(f: &DiscForm, max_order: u128, cap: u128) -> Result<Vec<Subgroup>> {
    let elements = f.elements(cap)?;
    let mut considered = f.order();
    let isotropic: Vec<&Vec<u64>> =
        elements.iter().filter(|x| x.iter().any(|&c| c != 0) && f.q_scaled(x) == 0).collect();

    let mut found: BTreeMap<(u128, Vec<u128>), Vec<Vec<u64>>> = BTreeMap::new();
    found.insert((1, vec![0]), Vec::new());
    let mut cyclic: Vec<BTreeSet<u128>> = Vec::with_capacity(isotropic.len());
    for x in &isotropic {
        let span = f.span(&[(*x).clone()]);
        considered += span.len() as u128;
        cyclic.push(span.iter().copied().collect());
        if span.len() as u128 <= max_order {
            found.entry((span.len() as u128, span)).or_insert_with(|| vec![(*x).clone()]);
        }
    }
    for (i, x) in isotropic.iter().enumerate() {
        for (j, y) in isotropic.iter().enumerate().skip(i + 1) {
            if f.b_scaled(x, y) != 0 || cyclic[i].contains(&f.index(y)) || cyclic[j].contains(&f.index(x)) {
                continue;
            }
            if cyclic[i].len().max(cyclic[j].len()) as u128 > max_order {
                continue;
            }
            let span = f.span(&[(*x).clone(), (*y).clone()]);
            considered += span.len() as u128;
            if considered > cap {
                return Err(Error::CapExceeded { size: considered, cap });
            }
            if span.len() as u128 <= max_order {
                found.entry((span.len() as u128, span)).or_insert_with(|| vec![(*x).clone(), (*y).clone()]);
            }
        }
    }
    Ok(found.into_iter().map(|((order, elements), gens)| Subgroup { gens, order, elements }).collect())
}

#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: IntLattice,
    /// Rows: the new ℤ-basis in coordinates of the old one.
    pub basis: Vec<Vec<BigRational>>,
    pub index: u128,
    /// `|A_L| = |H|² · |A_L′|`.
    pub index_law: bool,
}

/// Lattice generated by `L` and lifts of the generators of `h`.
pub fn even_overlattice(l: &IntLattice, h: &Subgroup) -> Result<Overlattice> {
    let f = l.disc_form()?;
    for (i, g) in h.gens.iter().enumerate() {
        if f.q_scaled(g) != 0 || h.gens[..i].iter().any(|x| f.b_scaled(x, g) != 0) {
            return Err(Error::NotIsotropic);
        }
    }
    let n = l.rank();
    let lifts = f.lifts().ok_or_else(|| Error::Invalid("discriminant form has no lattice lifts".into()))?;
    let mut rows: Vec<Vec<BigRational>> = matrix::rat_identity(n);
    for g in &h.gens {
        let mut v = vec![BigRational::zero(); n];
        for (c, lift) in g.iter().zip(lifts) {
            let c = BigRational::from_integer(BigInt::from(*c));
            for (t, x) in v.iter_mut().zip(lift) {
                *t += &c * x;
            }
        }
        rows.push(v);
    }
    let basis = matrix::rat_span_hnf(&rows);
    let gram = matrix::rat_congruence(&basis, &matrix::to_rat(l.gram()));
    let gram = matrix::to_int(&gram).ok_or(Error::NotIsotropic)?;
    let lattice = IntLattice::new(gram)?;
    if !lattice.is_even() {
        return Err(Error::NotIsotropic);
    }
    let index = h.order;
    let lhs = l.det().abs();
    let rhs = BigInt::from(index) * BigInt::from(index) * lattice.det().abs();
    Ok(Overlattice { lattice, basis, index, index_law: lhs == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ade_lattice, Sign};

    fn neg(s: &str) -> IntLattice {
        ade_lattice(&s.parse().unwrap(), Sign::Negative)
    }

    #[test]
    fn four_a1_glues_to_d4() {
        let l = neg("4A1");
        let f = l.disc_form().unwrap();
        let subs = isotropic_subgroups(&f, 16, DEFAULT_CAP).unwrap();
        assert!(subs[0].is_trivial());
        let nontrivial: Vec<_> = subs.iter().filter(|s| !s.is_trivial()).collect();
        assert_eq!(nontrivial.len(), 1);
        let o = even_overlattice(&l, nontrivial[0]).unwrap();
        assert_eq!(o.lattice.det().abs(), BigInt::from(4));
        assert!(o.index_law);
        assert_eq!(o.lattice.signature(), (0, 4));
        assert_eq!(o.lattice.disc_group().unwrap(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn two_a1_has_no_isotropic_class() {
        let f = neg("2A1").disc_form().unwrap();
        let subs = isotropic_subgroups(&f, 4, DEFAULT_CAP).unwrap();
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_trivial());
    }

    #[test]
    fn trivial_subgroup_leaves_lattice_unchanged() {
        let l = neg("A2");
        let f = l.disc_form().unwrap();
        let subs = isotropic_subgroups(&f, 3, DEFAULT_CAP).unwrap();
        let o = even_overlattice(&l, &subs[0]).unwrap();
        assert_eq!(o.lattice, l);
        assert!(o.index_law);
    }

    #[test]
    fn a3_six_a1_index_law() {
        let l = neg("A3+6A1");
        let f = l.disc_form().unwrap();
        let subs = isotropic_subgroups(&f, 2, DEFAULT_CAP).unwrap();
        let order_two: Vec<_> = subs.iter().filter(|s| s.order == 2).collect();
        assert!(!order_two.is_empty());
        for h in order_two {
            let o = even_overlattice(&l, h).unwrap();
            assert!(o.index_law);
            assert_eq!(o.lattice.det().abs(), BigInt::from(64));
        }
    }

    #[test]
    fn non_isotropic_rejected() {
        let l = neg("A1");
        let h = Subgroup { gens: vec![vec![1]], order: 2, elements: vec![0, 1] };
        assert_eq!(even_overlattice(&l, &h).unwrap_err(), Error::NotIsotropic);
    }

    #[test]
    fn cap_is_enforced() {
        let f = neg("8A1").disc_form().unwrap();
        assert!(matches!(isotropic_subgroups(&f, 4, 100), Err(Error::CapExceeded { .. })));
    }
}
