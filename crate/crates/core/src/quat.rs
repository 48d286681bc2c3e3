//! Quaternion algebras `(a, b / K)`, their orders, and the trace-zero
//! sublattice `O ∩ B⁰`.
//!
//! Elements are coordinate 4-vectors over `{1, α, β, αβ}` with
//! `α² = a`, `β² = b`, `αβ = -βα`. A ℤ-basis of an order with `O_K`-basis
//! `e_1..e_4` is `{θ^j e_i}`, listed generator-major, power-minor.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, RatMatrix};
use crate::numfield::{FieldElement, Ideal, NumberField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatElement {
    coords: [FieldElement; 4],
}

impl QuatElement {
    pub fn new(x0: FieldElement, x1: FieldElement, x2: FieldElement, x3: FieldElement) -> Self {
        QuatElement { coords: [x0, x1, x2, x3] }
    }

    pub fn coords(&self) -> &[FieldElement; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    pub fn add(&self, o: &QuatElement) -> QuatElement {
        QuatElement { coords: std::array::from_fn(|i| self.coords[i].add(&o.coords[i])) }
    }

    pub fn sub(&self, o: &QuatElement) -> QuatElement {
        QuatElement { coords: std::array::from_fn(|i| self.coords[i].sub(&o.coords[i])) }
    }

    pub fn scale_rational(&self, r: &BigRational) -> QuatElement {
        QuatElement { coords: std::array::from_fn(|i| self.coords[i].scale(r)) }
    }

    /// Coordinates in `Q^{4d}`: component-major, power-minor.
    pub fn flatten(&self) -> Vec<BigRational> {
        self.coords.iter().flat_map(|c| c.coeffs().iter().cloned()).collect()
    }

    pub fn display(&self, var: &str) -> String {
        let names = ["", "α", "β", "αβ"];
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| {
                let s = c.display(var);
                match (n.is_empty(), s.contains(' ')) {
                    (true, _) => s,
                    (false, true) => format!("({s}){n}"),
                    (false, false) if s == "1" => n.to_string(),
                    (false, false) if s == "-1" => format!("-{n}"),
                    (false, false) => format!("{s}{n}"),
                }
            })
            .collect();
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            match (i, p.strip_prefix('-')) {
                (0, _) => out.push_str(p),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("θ"))
    }
}

/// Which `K`-valued bilinear form to put on `B⁰`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// `(γ, γ') ↦ trd(γγ')`, equal to the Killing form on `B⁰`.
    Killing,
    /// `diag(2b, 2a, -2)` in `{α, β, αβ}`-coordinates.
    Twisted,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Killing => "killing",
            Form::Twisted => "twisted",
        })
    }
}

impl std::str::FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "killing" => Ok(Form::Killing),
            "twisted" => Ok(Form::Twisted),
            other => Err(Error::Invalid(format!("unknown form {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    field: Arc<NumberField>,
    a: FieldElement,
    b: FieldElement,
}

impl QuaternionAlgebra {
    pub fn new(field: Arc<NumberField>, a: FieldElement, b: FieldElement) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroElement);
        }
        let d = field.degree();
        if a.coeffs().len() != d || b.coeffs().len() != d {
            return Err(Error::AlgebraMismatch);
        }
        Ok(QuaternionAlgebra { field, a, b })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn element(&self, coords: [FieldElement; 4]) -> QuatElement {
        QuatElement { coords }
    }

    pub fn scalar(&self, x: FieldElement) -> QuatElement {
        let z = self.field.zero();
        QuatElement::new(x, z.clone(), z.clone(), z)
    }

    pub fn one(&self) -> QuatElement {
        self.scalar(self.field.one())
    }

    fn unit_vector(&self, i: usize) -> QuatElement {
        let k = &self.field;
        QuatElement { coords: std::array::from_fn(|j| if i == j { k.one() } else { k.zero() }) }
    }

    pub fn alpha(&self) -> QuatElement {
        self.unit_vector(1)
    }

    pub fn beta(&self) -> QuatElement {
        self.unit_vector(2)
    }

    pub fn alpha_beta(&self) -> QuatElement {
        self.unit_vector(3)
    }

    /// Rejects elements whose coordinates do not live in this algebra's field.
    pub fn check(&self, g: &QuatElement) -> Result<()> {
        let d = self.field.degree();
        if g.coords.iter().all(|c| c.coeffs().len() == d) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// `x · γ` for `x ∈ K`.
    pub fn scale(&self, x: &FieldElement, g: &QuatElement) -> QuatElement {
        QuatElement { coords: std::array::from_fn(|i| self.field.mul(x, &g.coords[i])) }
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let k = &self.field;
        let [x0, x1, x2, x3] = &x.coords;
        let [y0, y1, y2, y3] = &y.coords;
        let m = |p: &FieldElement, q: &FieldElement| k.mul(p, q);
        let a = &self.a;
        let b = &self.b;
        let ab = k.mul(a, b);
        let c0 = m(x0, y0).add(&m(a, &m(x1, y1))).add(&m(b, &m(x2, y2))).sub(&m(&ab, &m(x3, y3)));
        let c1 = m(x0, y1).add(&m(x1, y0)).sub(&m(b, &m(x2, y3))).add(&m(b, &m(x3, y2)));
        let c2 = m(x0, y2).add(&m(x2, y0)).add(&m(a, &m(x1, y3))).sub(&m(a, &m(x3, y1)));
        let c3 = m(x0, y3).add(&m(x3, y0)).add(&m(x1, y2)).sub(&m(x2, y1));
        QuatElement::new(c0, c1, c2, c3)
    }

    /// Checked product for elements of unknown provenance.
    pub fn try_mul(&self, x: &QuatElement, y: &QuatElement) -> Result<QuatElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn conj(&self, g: &QuatElement) -> QuatElement {
        let [x0, x1, x2, x3] = &g.coords;
        QuatElement::new(x0.clone(), x1.neg(), x2.neg(), x3.neg())
    }

    pub fn trd(&self, g: &QuatElement) -> FieldElement {
        g.coords[0].scale(&BigRational::from_integer(2.into()))
    }

    pub fn nrd(&self, g: &QuatElement) -> FieldElement {
        let k = &self.field;
        let [x0, x1, x2, x3] = &g.coords;
        let ab = k.mul(&self.a, &self.b);
        k.square(x0)
            .sub(&k.mul(&self.a, &k.square(x1)))
            .sub(&k.mul(&self.b, &k.square(x2)))
            .add(&k.mul(&ab, &k.square(x3)))
    }

    pub fn inverse(&self, g: &QuatElement) -> Result<QuatElement> {
        let n = self.nrd(g);
        let ninv = self.field.inv(&n)?;
        Ok(self.scale(&ninv, &self.conj(g)))
    }

    /// Trace-zero part `γ - trd(γ)/2`.
    pub fn pure_part(&self, g: &QuatElement) -> QuatElement {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        g.sub(&self.scalar(self.trd(g).scale(&half)))
    }

    /// `diag(2a, 2b, -2ab)` on `{α, β, αβ}`.
    pub fn killing_gram(&self) -> Vec<Vec<FieldElement>> {
        let k = &self.field;
        let two = BigRational::from_integer(2.into());
        let ab = k.mul(&self.a, &self.b);
        diag3(k, [self.a.scale(&two), self.b.scale(&two), ab.scale(&-two)])
    }

    /// `diag(2b, 2a, -2)` on `{α, β, αβ}`.
    pub fn twisted_gram(&self) -> Vec<Vec<FieldElement>> {
        let k = &self.field;
        let two = BigRational::from_integer(2.into());
        diag3(k, [self.b.scale(&two), self.a.scale(&two), k.from_int(-2)])
    }

    pub fn form_gram(&self, form: Form) -> Vec<Vec<FieldElement>> {
        match form {
            Form::Killing => self.killing_gram(),
            Form::Twisted => self.twisted_gram(),
        }
    }

    /// Value of the chosen form on two elements of `B⁰`.
    pub fn pair(&self, form: Form, x: &QuatElement, y: &QuatElement) -> FieldElement {
        match form {
            Form::Killing => self.trd(&self.mul(x, y)),
            Form::Twisted => {
                let k = &self.field;
                let g = self.twisted_gram();
                (1..4).fold(k.zero(), |acc, i| acc.add(&k.mul(&g[i - 1][i - 1], &k.mul(&x.coords[i], &y.coords[i]))))
            }
        }
    }
}

fn diag3(k: &NumberField, d: [FieldElement; 3]) -> Vec<Vec<FieldElement>> {
    (0..3).map(|i| (0..3).map(|j| if i == j { d[i].clone() } else { k.zero() }).collect()).collect()
}

/// Yes/no/unknown flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderFlags {
    pub contains_one: bool,
    pub is_ring: bool,
    pub is_maximal: Tri,
}

/// An `O_K`-order given by four generators forming an `O_K`-basis.
#[derive(Clone, Debug)]
pub struct QuatOrder {
    algebra: QuaternionAlgebra,
    gens: [QuatElement; 4],
    z_basis: Vec<QuatElement>,
    /// Inverse of the `4d × 4d` matrix of flattened ℤ-basis vectors.
    z_inverse: RatMatrix,
    flags: OrderFlags,
}

impl QuatOrder {
    /// Verifies rank, `1 ∈ O`, closure under multiplication and integrality
    /// of `trd`, `nrd` on every generator.
    pub fn new(algebra: QuaternionAlgebra, gens: [QuatElement; 4]) -> Result<Self> {
        for g in &gens {
            algebra.check(g)?;
        }
        let k = algebra.field();
        let d = k.degree();
        let z_basis: Vec<QuatElement> = gens
            .iter()
            .flat_map(|e| (0..d).map(move |j| (e, j)))
            .map(|(e, j)| algebra.scale(&k.theta_pow(j), e))
            .collect();
        let rows: RatMatrix = z_basis.iter().map(QuatElement::flatten).collect();
        let z_inverse = matrix::rat_inverse(&rows)
            .ok_or_else(|| Error::NotAnOrder("generators are K-linearly dependent".into()))?;
        let mut order = QuatOrder {
            algebra,
            gens,
            z_basis,
            z_inverse,
            flags: OrderFlags { contains_one: false, is_ring: false, is_maximal: Tri::Unknown },
        };

        for (i, e) in order.gens.iter().enumerate() {
            let t = order.algebra.trd(e);
            let n = order.algebra.nrd(e);
            if !t.is_integral() || !n.is_integral() {
                return Err(Error::NotAnOrder(format!("generator {} has trd = {t}, nrd = {n} outside O_K", i + 1)));
            }
        }
        if !order.contains(&order.algebra.one()) {
            return Err(Error::NotAnOrder("1 is not in the span".into()));
        }
        order.flags.contains_one = true;
        for (i, x) in order.gens.iter().enumerate() {
            for (j, y) in order.gens.iter().enumerate() {
                let p = order.algebra.mul(x, y);
                if !order.contains(&p) {
                    return Err(Error::NotAnOrder(format!("product e{}·e{} = {p} leaves the lattice", i + 1, j + 1)));
                }
            }
        }
        order.flags.is_ring = true;
        Ok(order)
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn gens(&self) -> &[QuatElement; 4] {
        &self.gens
    }

    pub fn flags(&self) -> &OrderFlags {
        &self.flags
    }

    /// `{θ^j e_i}`, generator-major.
    pub fn z_basis(&self) -> &[QuatElement] {
        &self.z_basis
    }

    /// Coordinates of `γ` in the ℤ-basis (rational in general).
    pub fn z_coords(&self, g: &QuatElement) -> Vec<BigRational> {
        let v = g.flatten();
        let n = v.len();
        (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, i| acc + &v[i] * &self.z_inverse[i][j])).collect()
    }

    pub fn contains(&self, g: &QuatElement) -> bool {
        self.z_coords(g).iter().all(BigRational::is_integer)
    }

    /// `[trd(e_i e_j)]`.
    pub fn trace_gram(&self) -> Vec<Vec<FieldElement>> {
        self.gens
            .iter()
            .map(|x| self.gens.iter().map(|y| self.algebra.trd(&self.algebra.mul(x, y))).collect())
            .collect()
    }

    /// Generator of `disc(O)`: the determinant of the trace Gram.
    pub fn disc(&self) -> FieldElement {
        self.algebra.field().det(&self.trace_gram())
    }

    pub fn disc_ideal(&self) -> Result<Ideal> {
        let d = self.disc();
        Ok(Ideal::principal(self.algebra.field(), &d)?.with_generator(d))
    }

    /// `O` is maximal iff `disc(O) = 𝔇²`.
    pub fn is_maximal(&self, big_d: &Ideal) -> Result<bool> {
        let k = self.algebra.field();
        let disc = self.disc();
        let target = big_d.pow(k, 2);
        Ok(match target.generator() {
            Some(g) => k.associated(&disc, g),
            None => self.disc_ideal()? == target,
        })
    }

    /// Records the outcome of [`QuatOrder::is_maximal`] in the flags.
    pub fn certify(mut self, big_d: &Ideal) -> Result<Self> {
        self.flags.is_maximal = if self.is_maximal(big_d)? { Tri::Yes } else { Tri::No };
        Ok(self)
    }
}

/// `O ∩ B⁰` as a ℤ-lattice of rank `3d`, with an `O_K`-basis when one is
/// visible.
#[derive(Clone, Debug)]
pub struct TraceZeroLattice {
    algebra: QuaternionAlgebra,
    z_gens: Vec<QuatElement>,
    /// Hermite basis of the order-coordinates of `z_gens`, for span tests.
    span: Vec<Vec<BigInt>>,
    ok_basis: Option<[QuatElement; 3]>,
}

impl TraceZeroLattice {
    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn z_gens(&self) -> &[QuatElement] {
        &self.z_gens
    }

    pub fn ok_basis(&self) -> Option<&[QuatElement; 3]> {
        self.ok_basis.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.z_gens.len()
    }

    pub fn contains(&self, order: &QuatOrder, g: &QuatElement) -> bool {
        if !self.algebra.trd(g).is_zero() {
            return false;
        }
        let c = order.z_coords(g);
        if !c.iter().all(BigRational::is_integer) {
            return false;
        }
        let ints: Vec<BigInt> = c.iter().map(BigRational::to_integer).collect();
        let mut rows = self.span.clone();
        rows.push(ints);
        matrix::hnf(&rows) == self.span
    }

    /// Replaces the `O_K`-basis by `basis`, which must span the same lattice.
    pub fn with_basis(mut self, order: &QuatOrder, basis: [QuatElement; 3]) -> Result<Self> {
        if order.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        if ok_span(order, &basis)? != self.span {
            return Err(Error::Invalid("basis does not span O ∩ B⁰ over O_K".into()));
        }
        self.ok_basis = Some(basis);
        Ok(self)
    }

    /// ℤ-level Gram `[Tr_{K/Q} Q(g_r, g_s)]` on the ℤ-generators.
    pub fn z_gram(&self, form: Form) -> RatMatrix {
        let k = self.algebra.field();
        self.z_gens
            .iter()
            .map(|x| self.z_gens.iter().map(|y| k.trace(&self.algebra.pair(form, x, y))).collect())
            .collect()
    }
}

fn order_coords_int(order: &QuatOrder, g: &QuatElement) -> Result<Vec<BigInt>> {
    let c = order.z_coords(g);
    if !c.iter().all(BigRational::is_integer) {
        return Err(Error::Invalid(format!("{g} is not in the order")));
    }
    Ok(c.iter().map(BigRational::to_integer).collect())
}

/// Hermite basis (order coordinates) of the ℤ-span of `{θ^j f_i}`.
fn ok_span(order: &QuatOrder, basis: &[QuatElement]) -> Result<Vec<Vec<BigInt>>> {
    let alg = order.algebra();
    let k = alg.field();
    let mut rows = Vec::new();
    for f in basis {
        if !alg.trd(f).is_zero() {
            return Err(Error::Invalid(format!("{f} has nonzero reduced trace")));
        }
        for j in 0..k.degree() {
            rows.push(order_coords_int(order, &alg.scale(&k.theta_pow(j), f))?);
        }
    }
    Ok(matrix::hnf(&rows))
}

/// Saturated kernel of `trd` on the ℤ-basis of `O`.
pub fn trace_zero_sublattice(order: &QuatOrder) -> Result<TraceZeroLattice> {
    let alg = order.algebra();
    let k = alg.field();
    let d = k.degree();
    // rows: coefficient vector of trd(θ^j e_i)
    let traces: RatMatrix = order.z_basis().iter().map(|g| alg.trd(g).coeffs().to_vec()).collect();
    let den = matrix::common_denominator(&traces);
    let scaled: Vec<Vec<BigInt>> = traces.iter().map(|r| r.iter().map(|x| (x * &den).to_integer()).collect()).collect();
    let kernel = matrix::left_kernel(&scaled);
    if kernel.len() != 3 * d {
        return Err(Error::NotAnOrder(format!("trace-zero kernel has rank {} != {}", kernel.len(), 3 * d)));
    }
    let z_gens: Vec<QuatElement> = kernel
        .iter()
        .map(|x| {
            x.iter()
                .zip(order.z_basis())
                .fold(QuatElement { coords: std::array::from_fn(|_| k.zero()) }, |acc, (c, g)| {
                    acc.add(&g.scale_rational(&BigRational::from_integer(c.clone())))
                })
        })
        .collect();
    let mut lattice = TraceZeroLattice { algebra: alg.clone(), z_gens, span: kernel, ok_basis: None };
    if let Some(basis) = visible_free_basis(order) {
        if ok_span(order, &basis)? == lattice.span {
            lattice.ok_basis = Some(basis);
        }
    }
    Ok(lattice)
}

/// An `O_K`-basis of `ker trd` read off the generators, when one is
/// apparent. With `1` among the generators, the pure parts `e_i - trd(e_i)/2`
/// span a lattice containing `O ∩ B⁰`, cut out by `Σ x_i trd(e_i) ≡ 0 mod 2`;
/// otherwise a generator whose trace divides all others is eliminated.
fn visible_free_basis(order: &QuatOrder) -> Option<[QuatElement; 3]> {
    let alg = order.algebra();
    let k = alg.field();
    let gens = order.gens();
    let traces: Vec<FieldElement> = gens.iter().map(|e| alg.trd(e)).collect();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let two = BigRational::from_integer(BigInt::from(2));

    if let Some(one_idx) = gens.iter().position(|e| *e == alg.one()) {
        let others: Vec<usize> = (0..4).filter(|&i| i != one_idx).collect();
        let pure: Vec<QuatElement> = others.iter().map(|&i| alg.pure_part(&gens[i])).collect();
        let t: Vec<&FieldElement> = others.iter().map(|&i| &traces[i]).collect();
        if t.iter().all(|x| x.scale(&half).is_integral()) {
            return Some([pure[0].clone(), pure[1].clone(), pure[2].clone()]);
        }
        let pivot = (0..3).find(|&i| {
            let n = k.norm(t[i]);
            !t[i].is_zero() && n.is_integer() && n.to_integer().bit(0)
        });
        if let Some(p) = pivot {
            // t_p^{-1} ≡ N(t_p)/t_p (mod 2) since N(t_p) is odd
            let adj = k.div(&k.from_rational(k.norm(t[p])), t[p]).ok()?;
            let out: Vec<QuatElement> = (0..3)
                .map(|i| {
                    if i == p {
                        pure[p].scale_rational(&two)
                    } else {
                        let c = reduce_mod2(k, &k.mul(t[i], &adj));
                        pure[i].sub(&alg.scale(&c, &pure[p]))
                    }
                })
                .collect();
            return Some([out[0].clone(), out[1].clone(), out[2].clone()]);
        }
    }

    let pivot = (0..4).find(|&p| !traces[p].is_zero() && traces.iter().all(|t| k.divides(&traces[p], t)))?;
    let out: Vec<QuatElement> = (0..4)
        .filter(|&i| i != pivot)
        .map(|i| {
            let q = k.div(&traces[i], &traces[pivot]).expect("nonzero pivot");
            gens[i].sub(&alg.scale(&q, &gens[pivot]))
        })
        .collect();
    Some([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn reduce_mod2(k: &NumberField, x: &FieldElement) -> FieldElement {
    let two = BigInt::from(2);
    k.element(
        x.coeffs()
            .iter()
            .map(|c| {
                let r = ((c.to_integer() % &two) + &two) % &two;
                BigRational::from_integer(r)
            })
            .collect(),
    )
}

/// Gram matrix of `form` on the `O_K`-basis of `O ∩ B⁰`.
pub fn k_gram_on(lattice: &TraceZeroLattice, form: Form) -> Result<Vec<Vec<FieldElement>>> {
    let basis = lattice.ok_basis().ok_or(Error::NoFreeBasis)?;
    let alg = lattice.algebra();
    Ok(basis.iter().map(|x| basis.iter().map(|y| alg.pair(form, x, y)).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn display_signs() {
        let b = catalog::example_3_1_algebra();
        let (_, _, w) = catalog::example_3_1_pure_generators(&b);
        assert_eq!(w.to_string(), "((1/3)θ^2 - 1/3)α - θβ + ((1/3)θ^2 - 1/3)αβ");
        assert_eq!(b.one().to_string(), "1");
        assert_eq!(b.alpha().scale_rational(&BigRational::from_integer((-1).into())).to_string(), "-α");
    }

    #[test]
    fn reduced_trace_and_norm_examples() {
        let b = catalog::hamilton();
        let k = b.field();
        let alpha = b.alpha();
        assert!(b.trd(&alpha).is_zero());
        assert_eq!(b.nrd(&alpha), b.a().neg());
        let g = b.one().add(&b.alpha()).add(&b.beta()).add(&b.alpha_beta());
        assert_eq!(b.nrd(&g), k.from_int(4));
        let ab = b.alpha_beta();
        let ba = b.mul(&b.beta(), &b.alpha());
        let ab_scalar = k.mul(b.a(), b.b());
        let sq = b.mul(&ab, &ab);
        assert_eq!(sq, b.scalar(ab_scalar.neg()));
        assert_eq!(b.trd(&sq), ab_scalar.scale(&rat(-2, 1)));
        assert_eq!(b.mul(&ab, &ba), b.scalar(ab_scalar));
    }

    #[test]
    fn killing_matches_trace_form_on_pure_part() {
        for b in [catalog::hamilton(), catalog::split_rational(), catalog::example_3_1().0] {
            let basis = [b.alpha(), b.beta(), b.alpha_beta()];
            let g = b.killing_gram();
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(b.trd(&b.mul(&basis[i], &basis[j])), g[i][j]);
                }
            }
        }
    }

    #[test]
    fn gram_substitutions() {
        let h = catalog::hamilton();
        let k = h.field();
        let g = h.killing_gram();
        for i in 0..3 {
            assert_eq!(g[i][i], k.from_int(-2));
        }
        let s = catalog::split_rational();
        let g = s.killing_gram();
        assert_eq!([&g[0][0], &g[1][1], &g[2][2]], [&k.from_int(2), &k.from_int(2), &k.from_int(-2)]);

        let (b, _) = catalog::example_3_1();
        let k = b.field();
        let theta = k.theta();
        let g = b.killing_gram();
        assert_eq!(g[0][0], k.from_int(-6));
        assert_eq!(g[1][1], theta.scale(&rat(2, 1)));
        assert_eq!(g[2][2], theta.scale(&rat(6, 1)));
        let t = b.twisted_gram();
        assert_eq!(t[0][0], theta.scale(&rat(2, 1)));
        assert_eq!(t[1][1], k.from_int(-6));
        assert_eq!(t[2][2], k.from_int(-2));
        let ab = k.mul(b.a(), b.b());
        assert_eq!(k.det(&t), ab.scale(&rat(-8, 1)));
        assert_eq!(k.det(&g), k.square(&ab).scale(&rat(-8, 1)));
    }

    #[test]
    fn hurwitz_order_is_maximal() {
        let o = catalog::hurwitz_order();
        let k = o.algebra().field();
        assert_eq!(o.disc(), k.from_int(-4));
        let two = Ideal::principal(k, &k.from_int(2)).unwrap().with_generator(k.from_int(2));
        assert!(o.is_maximal(&two).unwrap());
        let lip = catalog::lipschitz_order();
        assert_eq!(lip.disc(), k.from_int(-16));
        assert!(!lip.is_maximal(&two).unwrap());
    }

    #[test]
    fn matrix_order_has_unit_discriminant() {
        let o = catalog::matrix_order();
        let k = o.algebra().field();
        assert_eq!(o.disc(), k.from_int(-1));
        assert!(o.is_maximal(&Ideal::unit(k)).unwrap());
    }

    #[test]
    fn example_order_discriminant_is_unit() {
        let (_, o) = catalog::example_3_1();
        let k = o.algebra().field();
        assert!(k.is_unit(&o.disc()));
        assert!(o.is_maximal(&Ideal::unit(k)).unwrap());
    }

    #[test]
    fn rejects_non_orders() {
        let b = catalog::hamilton();
        let k = b.field();
        let half = b.alpha().scale_rational(&rat(1, 2));
        let err = QuatOrder::new(b.clone(), [b.one(), half, b.beta(), b.alpha_beta()]).unwrap_err();
        assert!(matches!(err, Error::NotAnOrder(_)));
        // 2Z<1, α, β, αβ> misses 1
        let two = k.from_int(2);
        let gens = [b.one(), b.alpha(), b.beta(), b.alpha_beta()].map(|g| b.scale(&two, &g));
        assert!(matches!(QuatOrder::new(b.clone(), gens), Err(Error::NotAnOrder(_))));
        // Z + Zα + Zβ + Z(αβ/1) with (1 + α)/2 : not closed
        let bad = b.one().add(&b.alpha()).scale_rational(&rat(1, 2));
        assert!(matches!(
            QuatOrder::new(b.clone(), [b.one(), bad, b.beta(), b.alpha_beta()]),
            Err(Error::NotAnOrder(_))
        ));
    }

    #[test]
    fn trace_zero_sublattice_examples() {
        let o = catalog::hurwitz_order();
        let b = o.algebra().clone();
        let l = trace_zero_sublattice(&o).unwrap();
        assert_eq!(l.rank(), 3);
        for g in [b.alpha(), b.beta(), b.alpha_beta()] {
            assert!(l.contains(&o, &g));
        }
        let l = l.with_basis(&o, [b.alpha(), b.beta(), b.alpha_beta()]).unwrap();
        let g = k_gram_on(&l, Form::Killing).unwrap();
        let k = b.field();
        assert_eq!(k.det(&g), k.from_int(-8));
        assert_eq!(g[0][0], k.from_int(-2));
        assert!(g[0][1].is_zero());

        let m = catalog::matrix_order();
        let s = m.algebra().clone();
        let k = s.field();
        let [e11, e12, e21, e22] = m.gens().clone();
        let l = trace_zero_sublattice(&m).unwrap();
        let l = l.with_basis(&m, [e11.sub(&e22), e12, e21]).unwrap();
        let g = k_gram_on(&l, Form::Killing).unwrap();
        let expect = [[2, 0, 0], [0, 0, 1], [0, 1, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[i][j], k.from_int(expect[i][j]));
            }
        }
    }

    #[test]
    fn example_trace_zero_basis_matches_printed_generators() {
        let (b, o) = catalog::example_3_1();
        let k = b.field();
        let l = trace_zero_sublattice(&o).unwrap();
        assert_eq!(l.rank(), 9);
        let basis = l.ok_basis().expect("visible O_K basis");
        let (zeta_p, eta, omega_p) = catalog::example_3_1_pure_generators(&b);
        assert_eq!(basis, &[zeta_p, eta, omega_p]);
        let g = k_gram_on(&l, Form::Killing).unwrap();
        let printed = catalog::example_3_1_printed_k_gram(k);
        assert_eq!(g, printed);
        // disc(O ∩ B⁰) = 2𝔇² with 𝔇 = (1)
        let det = k.det(&g);
        assert!(k.associated(&det, &k.from_int(2)));
    }

    #[test]
    fn with_basis_rejects_wrong_span() {
        let o = catalog::hurwitz_order();
        let b = o.algebra().clone();
        let l = trace_zero_sublattice(&o).unwrap();
        let two_alpha = b.alpha().scale_rational(&rat(2, 1));
        assert!(l.with_basis(&o, [two_alpha, b.beta(), b.alpha_beta()]).is_err());
    }

    #[test]
    fn mismatched_field_rejected() {
        let h = catalog::hamilton();
        let (b, _) = catalog::example_3_1();
        assert_eq!(h.try_mul(&h.alpha(), &b.alpha()).unwrap_err(), Error::AlgebraMismatch);
    }
}
