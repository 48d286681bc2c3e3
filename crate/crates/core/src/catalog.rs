//! Built-in algebras, orders and printed reference matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::matrix::{self, IntMatrix};
use crate::numfield::{FieldElement, NumberField};
use crate::quat::{QuatElement, QuatOrder, QuaternionAlgebra};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Q(ζ₉ + ζ̄₉) = Q[x]/(x³ - 3x - 1)`, with `θ = -(ζ₉ + ζ̄₉)`.
pub fn cubic_field() -> Arc<NumberField> {
    Arc::new(NumberField::from_i64(&[-1, -3, 0, 1]).expect("x^3 - 3x - 1 is totally real"))
}

pub fn rational_field() -> Arc<NumberField> {
    Arc::new(NumberField::rationals())
}

/// `(-1, -1 / Q)`.
pub fn hamilton() -> QuaternionAlgebra {
    let k = rational_field();
    let m1 = k.from_int(-1);
    QuaternionAlgebra::new(k, m1.clone(), m1).expect("nonzero")
}

/// `(1, 1 / Q) ≅ M₂(Q)`.
pub fn split_rational() -> QuaternionAlgebra {
    let k = rational_field();
    let one = k.one();
    QuaternionAlgebra::new(k, one.clone(), one).expect("nonzero")
}

/// `{1, α, β, (1 + α + β + αβ)/2}`.
pub fn hurwitz_order() -> QuatOrder {
    let b = hamilton();
    let w = b.one().add(&b.alpha()).add(&b.beta()).add(&b.alpha_beta()).scale_rational(&q(1, 2));
    QuatOrder::new(b.clone(), [b.one(), b.alpha(), b.beta(), w]).expect("Hurwitz order")
}

/// `ℤ⟨1, α, β, αβ⟩` in `(-1, -1 / Q)`.
pub fn lipschitz_order() -> QuatOrder {
    let b = hamilton();
    QuatOrder::new(b.clone(), [b.one(), b.alpha(), b.beta(), b.alpha_beta()]).expect("Lipschitz order")
}

/// Matrix units `e11, e12, e21, e22` of `M₂(ℤ) ⊂ (1, 1 / Q)`.
pub fn matrix_units(b: &QuaternionAlgebra) -> [QuatElement; 4] {
    let h = q(1, 2);
    let e11 = b.one().add(&b.alpha()).scale_rational(&h);
    let e22 = b.one().sub(&b.alpha()).scale_rational(&h);
    let e12 = b.beta().add(&b.alpha_beta()).scale_rational(&h);
    let e21 = b.beta().sub(&b.alpha_beta()).scale_rational(&h);
    [e11, e12, e21, e22]
}

pub fn matrix_order() -> QuatOrder {
    let b = split_rational();
    let units = matrix_units(&b);
    QuatOrder::new(b, units).expect("M2(Z)")
}

/// `(-3, θ / K)` over the cubic field.
pub fn example_3_1_algebra() -> QuaternionAlgebra {
    let k = cubic_field();
    let a = k.from_int(-3);
    let b = k.theta();
    QuaternionAlgebra::new(k, a, b).expect("nonzero")
}

/// The printed generators `ζ, η, ω` with `1` prepended.
pub fn example_3_1_generators(b: &QuaternionAlgebra) -> [QuatElement; 4] {
    let k = b.field();
    let t = k.theta();
    let zero = k.zero();
    // 2b² - b - 4 and b² - 1
    let p = k.from_ints(&[-4, -1, 2]);
    let r = k.from_ints(&[-1, 0, 1]);
    let zeta = b.element([t.scale(&q(-1, 2)), p.scale(&q(1, 6)), zero.clone(), zero.clone()]);
    let eta = b.element([zero.clone(), zero.clone(), t.scale(&q(-1, 2)), p.scale(&q(1, 6))]);
    let omega = b.element([t.neg(), r.scale(&q(1, 3)), t.neg(), r.scale(&q(1, 3))]);
    [b.one(), zeta, eta, omega]
}

pub fn example_3_1() -> (QuaternionAlgebra, QuatOrder) {
    let b = example_3_1_algebra();
    let gens = example_3_1_generators(&b);
    let o = QuatOrder::new(b.clone(), gens).expect("printed order");
    (b, o)
}

/// The printed `ζ′, η, ω′`.
pub fn example_3_1_pure_generators(b: &QuaternionAlgebra) -> (QuatElement, QuatElement, QuatElement) {
    let k = b.field();
    let t = k.theta();
    let zero = k.zero();
    let p = k.from_ints(&[-4, -1, 2]);
    let r = k.from_ints(&[-1, 0, 1]);
    let zeta = b.element([zero.clone(), p.scale(&q(1, 3)), zero.clone(), zero.clone()]);
    let eta = b.element([zero.clone(), zero.clone(), t.scale(&q(-1, 2)), p.scale(&q(1, 6))]);
    let omega = b.element([zero, r.scale(&q(1, 3)), t.neg(), r.scale(&q(1, 3))]);
    (zeta, eta, omega)
}

/// The printed Killing Gram on `{ζ′, η, ω′}`.
pub fn example_3_1_printed_k_gram(k: &NumberField) -> Vec<Vec<FieldElement>> {
    let e = |c: &[i64]| k.from_ints(c);
    vec![
        vec![e(&[-8, 0, 2]), e(&[0]), e(&[-2])],
        vec![e(&[0]), e(&[0, 2]), e(&[1, 4])],
        vec![e(&[-2]), e(&[1, 4]), e(&[2, 8])],
    ]
}

/// The printed 9×9 Gram of the corestricted lattice.
pub fn example_3_1_printed_gram() -> IntMatrix {
    matrix::from_i64(&[
        &[-12, 6, -12, 0, 0, 0, -6, 0, -12],
        &[6, -12, 6, 0, 0, 0, 0, -12, -6],
        &[-12, 6, -30, 0, 0, 0, -12, -6, -36],
        &[0, 0, 0, 0, 12, 6, 3, 24, 18],
        &[0, 0, 0, 12, 6, 36, 24, 18, 75],
        &[0, 0, 0, 6, 36, 30, 18, 75, 78],
        &[-6, 0, -12, 3, 24, 18, 6, 48, 36],
        &[0, -12, -6, 24, 18, 75, 48, 36, 150],
        &[-12, -6, -36, 18, 75, 78, 36, 150, 156],
    ])
}

/// Printed invariant factors of the discriminant group: `(ℤ/2)³ × (ℤ/3)⁶ × (ℤ/9)³`.
pub fn example_3_1_printed_disc_group() -> Vec<(u64, usize)> {
    vec![(2, 3), (3, 6), (9, 3)]
}

/// The discriminant claimed for the CM lattice, `2³·3⁹·3¹²`.
pub fn cm_claimed_disc() -> BigInt {
    BigInt::from(8) * BigInt::from(3).pow(21)
}
