//! Corestriction of quadratic `O_K`-lattices to ℤ, the canonical lattice
//! `Λ_can = Cor(O ∩ B⁰)`, and the CM discriminant pipeline.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix, RatMatrix};
use crate::numfield::{FieldElement, Ideal, NumberField, PrimeIdeal};
use crate::quat::{self, Form, QuatElement, QuatOrder};
use crate::ramification::{self, AdmissibilityCertificate, Deduction};

/// A free `O_K`-lattice with a `K`-valued Gram matrix.
#[derive(Clone, Debug)]
pub struct KQuadLattice {
    field: Arc<NumberField>,
    labels: Vec<String>,
    gram: Vec<Vec<FieldElement>>,
}

impl KQuadLattice {
    pub fn new(field: Arc<NumberField>, labels: Vec<String>, gram: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = gram.len();
        if labels.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("Gram matrix and labels disagree in size".into()));
        }
        if !matrix::is_symmetric(&gram) {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        Ok(KQuadLattice { field, labels, gram })
    }

    /// Labels `γ1, γ2, ...`.
    pub fn unlabeled(field: Arc<NumberField>, gram: Vec<Vec<FieldElement>>) -> Result<Self> {
        let labels = (1..=gram.len()).map(|i| format!("γ{i}")).collect();
        Self::new(field, labels, gram)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<FieldElement>] {
        &self.gram
    }

    pub fn det(&self) -> FieldElement {
        self.field.det(&self.gram)
    }

    pub fn is_integral(&self) -> bool {
        self.gram.iter().flatten().all(FieldElement::is_integral)
    }
}

/// A ℤ-lattice with exact rational Gram, as produced by corestriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalLattice {
    pub gram: RatMatrix,
    pub labels: Vec<String>,
    pub integral: bool,
    pub signed_det: BigRational,
    pub signature: (usize, usize),
}

impl CanonicalLattice {
    pub fn from_gram(gram: RatMatrix, labels: Vec<String>) -> Self {
        let integral = gram.iter().flatten().all(BigRational::is_integer);
        let signed_det = matrix::rat_det(&gram);
        let (p, q, _) = matrix::rat_inertia(&gram);
        CanonicalLattice { gram, labels, integral, signed_det, signature: (p, q) }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn int_gram(&self) -> Option<IntMatrix> {
        matrix::to_int(&self.gram)
    }

    /// `|det|`.
    pub fn abs_det(&self) -> BigRational {
        self.signed_det.abs()
    }

    pub fn relabel(mut self, names: &[&str]) -> Self {
        let d = self.rank() / names.len().max(1);
        self.labels = power_labels(names.iter().map(|s| s.to_string()), d);
        self
    }
}

fn power_labels(names: impl Iterator<Item = String>, d: usize) -> Vec<String> {
    names
        .flat_map(|n| {
            (0..d).map(move |j| match j {
                0 => format!("φ({n})"),
                1 => format!("φ(θ{n})"),
                _ => format!("φ(θ^{j}{n})"),
            })
        })
        .collect()
}

/// `Q₀(θ^j γ_i, θ^l γ_k) = Tr_{K/Q}(θ^{j+l} Q(γ_i, γ_k))`, generator-major,
/// power-minor.
pub fn corestrict(l: &KQuadLattice) -> CanonicalLattice {
    let k = l.field();
    let d = k.degree();
    let n = l.rank();
    let mut gram = vec![vec![BigRational::zero(); n * d]; n * d];
    for i in 0..n {
        for kk in 0..n {
            for j in 0..d {
                for ll in 0..d {
                    let v = k.trace(&k.mul(&k.theta_pow(j + ll), &l.gram[i][kk]));
                    gram[i * d + j][kk * d + ll] = v;
                }
            }
        }
    }
    CanonicalLattice::from_gram(gram, power_labels(l.labels.iter().cloned(), d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetIdentity {
    /// `det Q₀`.
    pub lhs: BigRational,
    /// `disc(K)^n · Nm(det Q)`.
    pub rhs: BigRational,
}

/// `det Q₀ = disc(K)^n · Nm_{K/Q}(det Q)`.
pub fn det_identity_check(l: &KQuadLattice, c: &CanonicalLattice) -> Result<DetIdentity> {
    let k = l.field();
    let disc = BigRational::from_integer(k.discriminant().clone());
    let rhs = num_traits::pow(disc, l.rank()) * k.norm(&l.det());
    let lhs = c.signed_det.clone();
    if lhs != rhs {
        return Err(Error::MismatchDetected { lhs: lhs.to_string(), rhs: rhs.to_string() });
    }
    Ok(DetIdentity { lhs, rhs })
}

/// Everything computed on the way to `Λ_can`.
#[derive(Clone, Debug)]
pub struct LambdaCan {
    pub form: Form,
    pub lattice: CanonicalLattice,
    /// `O_K`-basis of `O ∩ B⁰` and its Gram, when one was found.
    pub ok_basis: Option<[QuatElement; 3]>,
    pub k_lattice: Option<KQuadLattice>,
    pub identity: Option<DetIdentity>,
    pub disc_ideal: Option<Ideal>,
    /// `2^d · disc(K)³ · Nm(𝔇)²` (Killing form only).
    pub predicted_disc: Option<BigInt>,
    pub admissibility: Option<AdmissibilityCertificate>,
    pub maximal: Option<bool>,
    pub warnings: Vec<String>,
}

impl LambdaCan {
    /// `|det| = predicted` when a prediction exists.
    pub fn matches_prediction(&self) -> Option<bool> {
        self.predicted_disc.as_ref().map(|p| self.lattice.abs_det() == BigRational::from_integer(p.clone()))
    }
}

/// `2^d · disc(K)³ · Nm(𝔇)²`.
pub fn predicted_disc(k: &NumberField, big_d: &Ideal) -> BigInt {
    let d = k.degree() as u32;
    BigInt::from(2).pow(d) * k.discriminant().pow(3) * big_d.norm().pow(2)
}

/// `O ∩ B⁰ → K`-Gram (or ℤ-level Gram) `→` corestriction, with the
/// discriminant prediction and admissibility reported alongside.
pub fn lambda_can(order: &QuatOrder, form: Form) -> Result<LambdaCan> {
    let alg = order.algebra();
    let k = alg.field();
    let mut warnings = Vec::new();
    let tz = quat::trace_zero_sublattice(order)?;

    let (lattice, k_lattice, identity) = match quat::k_gram_on(&tz, form) {
        Ok(g) => {
            let kl = KQuadLattice::unlabeled(alg.field_arc().clone(), g)?;
            let c = corestrict(&kl);
            let id = det_identity_check(&kl, &c)?;
            (c, Some(kl), Some(id))
        }
        Err(Error::NoFreeBasis) => {
            warnings.push("no visible O_K-basis of O ∩ B⁰; using the ℤ-level Gram".into());
            let n = tz.rank();
            let labels = (1..=n).map(|i| format!("g{i}")).collect();
            (CanonicalLattice::from_gram(tz.z_gram(form), labels), None, None)
        }
        Err(e) => return Err(e),
    };
    if !lattice.integral {
        warnings.push("corestricted Gram is not integral".into());
    }

    let (disc_ideal, maximal, admissibility) = match ramification::ramification_set(alg) {
        Ok(r) => {
            let max = order.is_maximal(&r.disc_ideal)?;
            if !max {
                warnings.push("order is not maximal: disc(O) ≠ 𝔇²".into());
            }
            let adm = ramification::is_mumford_admissible(alg)?;
            if !adm.admissible {
                warnings.push(format!("algebra is not Mumford-admissible: {}", adm.reasons.join("; ")));
            }
            (Some(r.disc_ideal), Some(max), Some(adm))
        }
        Err(e @ Error::DyadicAmbiguity { .. }) => {
            warnings.push(format!("ramification unresolved: {e}"));
            (None, None, None)
        }
        Err(e) => return Err(e),
    };
    let predicted = match (form, &disc_ideal) {
        (Form::Killing, Some(dd)) => Some(predicted_disc(k, dd)),
        _ => None,
    };
    Ok(LambdaCan {
        form,
        lattice,
        ok_basis: tz.ok_basis().cloned(),
        k_lattice,
        identity,
        disc_ideal,
        predicted_disc: predicted,
        admissibility,
        maximal,
        warnings,
    })
}

/// Relative data of `L = K[ζ]/(x² + c₁x + c₀)` on the basis `{1, ζ}`.
#[derive(Clone, Debug)]
pub struct CmReport {
    /// `[Tr_{L/K}(x_i x_j)]`.
    pub relative_gram: Vec<Vec<FieldElement>>,
    pub delta: FieldElement,
    pub norm_delta: BigRational,
    /// `2δ³`.
    pub killing_disc: FieldElement,
    /// `disc(K)³ · Nm(2δ³)`.
    pub computed_disc: BigInt,
    pub claimed_disc: BigInt,
    pub discrepancy: bool,
    pub prime_support: Vec<u64>,
    pub splitting: Vec<(u64, Vec<PrimeIdeal>)>,
    pub deduction: Deduction,
}

pub fn cm_pipeline(k: &NumberField, c1: &FieldElement, c0: &FieldElement, claimed: &BigInt) -> Result<CmReport> {
    if !c1.is_integral() || !c0.is_integral() {
        return Err(Error::NotQuadraticOverK("relative polynomial is not over O_K".into()));
    }
    let two = k.from_int(2);
    let t1 = c1.neg();
    let t2 = k.square(c1).sub(&k.mul(&two, c0));
    let relative_gram = vec![vec![two, t1.clone()], vec![t1, t2]];
    let delta = k.det(&relative_gram);
    if delta.is_zero() {
        return Err(Error::NotQuadraticOverK("relative discriminant vanishes".into()));
    }
    for i in 1..=k.degree() {
        if k.sign_at(&delta, i)? > 0 {
            return Err(Error::NotQuadraticOverK(format!("relative discriminant is positive at real place {i}")));
        }
    }
    let norm_delta = k.norm(&delta);
    let killing_disc = k.mul(&k.pow(&delta, 3)?, &k.from_int(2));
    let nk = k.norm(&killing_disc);
    if !nk.is_integer() {
        return Err(Error::NotQuadraticOverK("non-integral discriminant".into()));
    }
    let computed_disc = k.discriminant().pow(3) * nk.to_integer();
    let prime_support = arith::prime_support(&computed_disc)?;
    let splitting = prime_support.iter().map(|&p| Ok((p, k.factor_prime(p)?))).collect::<Result<Vec<_>>>()?;
    let deduction = ramification::quaternion_from_ram_deduction(k, &prime_support)?;
    Ok(CmReport {
        relative_gram,
        delta,
        norm_delta,
        killing_disc,
        discrepancy: computed_disc.abs() != claimed.abs(),
        computed_disc,
        claimed_disc: claimed.clone(),
        prime_support,
        splitting,
        deduction,
    })
}

/// Diagonal `K`-form `diag(x_1, ..., x_n)`.
pub fn diagonal_form(field: Arc<NumberField>, entries: &[FieldElement]) -> Result<KQuadLattice> {
    let n = entries.len();
    let gram =
        (0..n).map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { field.zero() }).collect()).collect();
    KQuadLattice::unlabeled(field, gram)
}

/// `det` of the corestriction of the unit form `(1)`: the trace form.
pub fn trace_form_det(k: &NumberField) -> BigInt {
    matrix::int_det(&k.trace_gram())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_traits::One;

    #[test]
    fn rank_one_unit_form() {
        let k = catalog::cubic_field();
        let l = diagonal_form(k.clone(), &[k.one()]).unwrap();
        let c = corestrict(&l);
        assert_eq!(c.int_gram().unwrap(), matrix::from_i64(&[&[3, 0, 6], &[0, 6, 3], &[6, 3, 18]]));
        let id = det_identity_check(&l, &c).unwrap();
        assert_eq!(id.lhs, BigRational::from_integer(81.into()));
        assert_eq!(trace_form_det(&k), BigInt::from(81));
    }

    #[test]
    fn rational_field_is_identity() {
        let k = catalog::rational_field();
        let g = vec![vec![k.from_int(2), k.from_int(1)], vec![k.from_int(1), k.from_int(-4)]];
        let l = KQuadLattice::unlabeled(k.clone(), g).unwrap();
        let c = corestrict(&l);
        assert_eq!(c.int_gram().unwrap(), matrix::from_i64(&[&[2, 1], &[1, -4]]));
        assert_eq!(c.labels, vec!["φ(γ1)", "φ(γ2)"]);
    }

    #[test]
    fn example_corestriction_matches_printed_matrix() {
        let k = catalog::cubic_field();
        let labels = ["ζ′", "η", "ω′"].map(String::from).to_vec();
        let l = KQuadLattice::new(k.clone(), labels, catalog::example_3_1_printed_k_gram(&k)).unwrap();
        let c = corestrict(&l);
        assert_eq!(c.int_gram().unwrap(), catalog::example_3_1_printed_gram());
        assert_eq!(c.labels[..3], ["φ(ζ′)", "φ(θζ′)", "φ(θ^2ζ′)"]);
        assert_eq!(c.signed_det, BigRational::from_integer((-4251528).into()));
        assert_eq!(c.signature, (2, 7));
        det_identity_check(&l, &c).unwrap();
    }

    #[test]
    fn theorem_battery() {
        for (order, expect) in
            [(catalog::hurwitz_order(), 8), (catalog::matrix_order(), 2), (catalog::example_3_1().1, 4251528)]
        {
            let r = lambda_can(&order, Form::Killing).unwrap();
            assert_eq!(r.predicted_disc, Some(BigInt::from(expect)));
            assert_eq!(r.lattice.abs_det(), BigRational::from_integer(expect.into()));
            assert_eq!(r.maximal, Some(true));
        }
    }

    #[test]
    fn lipschitz_is_flagged_non_maximal() {
        let r = lambda_can(&catalog::lipschitz_order(), Form::Killing).unwrap();
        assert_eq!(r.maximal, Some(false));
        assert!(r.warnings.iter().any(|w| w.contains("not maximal")));
    }

    #[test]
    fn cm_example() {
        let k = catalog::cubic_field();
        let r = cm_pipeline(&k, &k.theta(), &k.one(), &catalog::cm_claimed_disc()).unwrap();
        assert_eq!(r.relative_gram[0][1], k.theta().neg());
        assert_eq!(r.relative_gram[1][1], k.from_ints(&[-2, 0, 1]));
        assert_eq!(r.delta, k.from_ints(&[-4, 0, 1]));
        assert_eq!(r.norm_delta, BigRational::from_integer((-3).into()));
        assert_eq!(r.prime_support, vec![2, 3]);
        assert!(r.deduction.finite_ramification.is_empty());
        assert!(r.discrepancy);
        assert_eq!(r.computed_disc, -BigInt::from(8) * BigInt::from(3).pow(15));
        // real quadratic over K is rejected
        assert!(matches!(
            cm_pipeline(&k, &k.zero(), &k.from_int(-2), &BigInt::one()),
            Err(Error::NotQuadraticOverK(_))
        ));
    }
}
