//! One-call reproductions of the worked cubic example and the CM deduction.

use std::fmt::Write as _;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::catalog;
use crate::corestrict::{self, CanonicalLattice, CmReport};
use crate::error::{Error, Result};
use crate::io::{self, CanonicalLatticeJson, RamificationJson, VerdictJson};
use crate::k3fib::{self, FibrationCertificate, FibrationVerdict, K3Context};
use crate::lattice::{format_primary, primary_parts, IntLattice};
use crate::matrix::IntMatrix;
use crate::numfield::{splitting_type, FieldElement, NumberField};
use crate::quat::{Form, QuatElement, QuaternionAlgebra};
use crate::ramification::{self, RamificationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramDiff {
    pub row: usize,
    pub col: usize,
    pub computed: BigInt,
    pub printed: BigInt,
}

#[derive(Clone, Debug)]
pub struct Example31Report {
    pub algebra: QuaternionAlgebra,
    pub basis: [QuatElement; 3],
    pub basis_matches_printed: bool,
    pub k_gram: Vec<Vec<FieldElement>>,
    pub k_gram_matches_printed: bool,
    pub lattice: CanonicalLattice,
    pub printed_gram: IntMatrix,
    pub diffs: Vec<GramDiff>,
    pub disc_factors: Vec<u64>,
    pub disc_primary: Vec<(u64, usize)>,
    pub disc_matches_printed: bool,
    pub predicted_disc: BigInt,
    pub ramification: RamificationReport,
    pub maximal: bool,
    pub certificate: FibrationCertificate,
    pub verdict: FibrationVerdict,
}

impl Example31Report {
    /// `|det|` equals the prediction, signature `(2, 7)`, and the
    /// discriminant group equals the printed one.
    pub fn identities_hold(&self) -> bool {
        self.lattice.abs_det() == BigRational::from_integer(self.predicted_disc.clone())
            && self.lattice.signature == (2, 7)
            && self.disc_matches_printed
    }

    pub fn render(&self) -> String {
        let k = self.algebra.field();
        let mut s = String::new();
        let _ = writeln!(s, "field        x^3 - 3x - 1   disc {}", k.discriminant());
        let _ = writeln!(s, "algebra      ({}, {})", self.algebra.a(), self.algebra.b());
        let _ = writeln!(s, "ramification {}", describe_ram(k, &self.ramification));
        let _ = writeln!(s, "maximal      {}", self.maximal);
        for (name, g) in ["ζ′", "η", "ω′"].iter().zip(&self.basis) {
            let _ = writeln!(s, "basis {name:<6} {}", g.display("θ"));
        }
        let _ = writeln!(s, "basis matches printed: {}", self.basis_matches_printed);
        s.push_str("K-Gram (Killing form)\n");
        for row in &self.k_gram {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "  [{}]", cells.join(", "));
        }
        let _ = writeln!(s, "K-Gram matches printed: {}", self.k_gram_matches_printed);
        s.push_str("corestricted Gram\n");
        s.push_str(&render_gram(&self.lattice));
        if self.diffs.is_empty() {
            s.push_str("printed 9×9 matrix: all 81 entries agree\n");
        } else {
            let _ = writeln!(s, "printed 9×9 matrix: {} entries differ", self.diffs.len());
            for d in &self.diffs {
                let _ = writeln!(s, "  ({}, {}) computed {} printed {}", d.row + 1, d.col + 1, d.computed, d.printed);
            }
        }
        let _ = writeln!(s, "det          {}", self.lattice.signed_det);
        let _ = writeln!(s, "predicted    {}", self.predicted_disc);
        let _ = writeln!(s, "signature    ({}, {})", self.lattice.signature.0, self.lattice.signature.1);
        let _ = writeln!(s, "disc group   {}", format_primary(&self.disc_primary));
        let _ = writeln!(s, "printed      {}", format_primary(&catalog::example_3_1_printed_disc_group()));
        let _ = writeln!(s, "identities   {}", if self.identities_hold() { "hold" } else { "FAIL" });
        let _ = writeln!(s, "fibration    {} ({})", self.certificate.exists, self.certificate.inequality);
        let _ = writeln!(s, "λ            {}", self.verdict.lambda);
        let _ = writeln!(s, "torsion      {}", torsion_set(&self.verdict));
        s
    }

    pub fn to_json(&self) -> Value {
        let diffs: Vec<Value> = self
            .diffs
            .iter()
            .map(|d| json!({"row": d.row + 1, "col": d.col + 1, "computed": io::int_value(&d.computed), "printed": io::int_value(&d.printed)}))
            .collect();
        json!({
            "k_gram": self.k_gram.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "k_gram_matches_printed": self.k_gram_matches_printed,
            "basis_matches_printed": self.basis_matches_printed,
            "lattice": CanonicalLatticeJson::new(&self.lattice, Some(&self.predicted_disc)),
            "printed_gram_diffs": diffs,
            "disc_group": {
                "factors": self.disc_factors,
                "primary": format_primary(&self.disc_primary),
                "matches_printed": self.disc_matches_printed,
            },
            "ramification": RamificationJson::from(&self.ramification),
            "maximal": self.maximal,
            "identities_hold": self.identities_hold(),
            "verdict": VerdictJson::from(&self.verdict),
        })
    }
}

/// Labelled rows, right-aligned columns.
pub fn render_gram(c: &CanonicalLattice) -> String {
    let cells: Vec<Vec<String>> = c.gram.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let w = cells.iter().flatten().map(|x| x.chars().count()).max().unwrap_or(1);
    let lw = c.labels.iter().map(|x| x.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (label, row) in c.labels.iter().zip(&cells) {
        let pad = lw - label.chars().count();
        let body: Vec<String> = row.iter().map(|x| format!("{x:>w$}")).collect();
        let _ = writeln!(s, "  {label}{} {}", " ".repeat(pad), body.join(" "));
    }
    s
}

fn torsion_set(v: &FibrationVerdict) -> String {
    let t: Vec<String> = v.torsion_options.iter().map(ToString::to_string).collect();
    format!("{{{}}}", t.join(", "))
}

fn describe_ram(k: &NumberField, r: &RamificationReport) -> String {
    let places: Vec<String> = r.ramified().iter().map(|p| ramification::place_label(k, p)).collect();
    format!("{{{}}}  𝔇 = {}", places.join(", "), r.disc_ideal.display())
}

/// Recomputes the worked cubic example from the printed order.
pub fn reproduce_example31(bound: i64, limit: Duration) -> Result<Example31Report> {
    let (alg, order) = catalog::example_3_1();
    let k = alg.field();
    let lc = corestrict::lambda_can(&order, Form::Killing)?;
    let basis = lc.ok_basis.clone().ok_or(Error::NoFreeBasis)?;
    let (z, e, w) = catalog::example_3_1_pure_generators(&alg);
    let basis_matches_printed = basis == [z, e, w];
    let k_gram = lc.k_lattice.as_ref().ok_or(Error::NoFreeBasis)?.gram().to_vec();
    let k_gram_matches_printed = k_gram == catalog::example_3_1_printed_k_gram(k);
    let lattice = lc.lattice.clone().relabel(&["ζ′", "η", "ω′"]);
    let computed = lattice.int_gram().ok_or_else(|| Error::Invalid("corestricted Gram is not integral".into()))?;
    let printed_gram = catalog::example_3_1_printed_gram();
    let diffs = gram_diffs(&computed, &printed_gram);
    let int_lattice = IntLattice::new(computed)?;
    let disc_factors: Vec<u64> = int_lattice
        .disc_group()?
        .iter()
        .map(|d| u64::try_from(d).map_err(|_| Error::Invalid(format!("invariant factor {d} too large"))))
        .collect::<Result<_>>()?;
    let disc_primary = primary_parts(&disc_factors);
    let disc_matches_printed = disc_primary == catalog::example_3_1_printed_disc_group();
    let ramification = ramification::ramification_set(&alg)?;
    let predicted_disc =
        lc.predicted_disc.clone().unwrap_or_else(|| corestrict::predicted_disc(k, &ramification.disc_ideal));
    let ctx = K3Context::new(int_lattice)?;
    let certificate = k3fib::fibration_exists(&ctx);
    let verdict = k3fib::mw_torsion_verdict(&ctx, bound, limit)?;
    Ok(Example31Report {
        algebra: alg,
        basis,
        basis_matches_printed,
        k_gram,
        k_gram_matches_printed,
        lattice,
        printed_gram,
        diffs,
        disc_factors,
        disc_primary,
        disc_matches_printed,
        predicted_disc,
        ramification,
        maximal: lc.maximal.unwrap_or(false),
        certificate,
        verdict,
    })
}

/// Entries where `computed` and `printed` differ, row-major.
pub fn gram_diffs(computed: &IntMatrix, printed: &IntMatrix) -> Vec<GramDiff> {
    let mut out = Vec::new();
    for (i, (a, b)) in computed.iter().zip(printed).enumerate() {
        for (j, (x, y)) in a.iter().zip(b).enumerate() {
            if x != y {
                out.push(GramDiff { row: i, col: j, computed: x.clone(), printed: y.clone() });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CmFourfoldReport {
    pub field: std::sync::Arc<NumberField>,
    pub c1: FieldElement,
    pub c0: FieldElement,
    pub cm: CmReport,
    pub delta_signs: Vec<i8>,
}

impl CmFourfoldReport {
    pub fn splitting_facts(&self) -> Vec<(u64, &'static str)> {
        let d = self.field.degree();
        self.cm.splitting.iter().map(|(p, ps)| (*p, splitting_type(ps, d))).collect()
    }

    pub fn render(&self) -> String {
        let k = &self.field;
        let cm = &self.cm;
        let mut s = String::new();
        let _ = writeln!(s, "field          x^3 - 3x - 1   disc {}", k.discriminant());
        let _ = writeln!(s, "extension      x^2 + ({})x + ({})", self.c1, self.c0);
        s.push_str("relative Gram\n");
        for row in &cm.relative_gram {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "  [{}]", cells.join(", "));
        }
        let signs: Vec<&str> = self.delta_signs.iter().map(|&x| if x > 0 { "+" } else { "-" }).collect();
        let _ = writeln!(s, "δ              {}   signs ({})", cm.delta, signs.join(", "));
        let _ = writeln!(s, "Nm(δ)          {}", cm.norm_delta);
        let _ = writeln!(s, "Killing disc   {}", cm.killing_disc);
        let _ = writeln!(s, "computed disc  {} = {}", cm.computed_disc, factored(&cm.computed_disc));
        let _ = writeln!(s, "claimed disc   {} = {}", cm.claimed_disc, factored(&cm.claimed_disc));
        let _ = writeln!(s, "discrepancy    {}", cm.discrepancy);
        let support: Vec<String> = cm.prime_support.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "prime support  {{{}}}", support.join(", "));
        for ((p, kind), (_, primes)) in self.splitting_facts().iter().zip(&cm.splitting) {
            let ps: Vec<String> = primes.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "  {p}: {kind}   {}", ps.join(" "));
        }
        let fin: Vec<String> = cm.deduction.finite_ramification.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "finite ram     {{{}}}", fin.join(", "));
        let _ = writeln!(s, "real ram       {} places", cm.deduction.ramified_real_count);
        let _ = writeln!(s, "conclusion     {}", cm.deduction.conclusion);
        s
    }

    pub fn to_json(&self) -> Value {
        let cm = &self.cm;
        let splitting: Vec<Value> = self
            .splitting_facts()
            .iter()
            .zip(&cm.splitting)
            .map(|((p, kind), (_, primes))| {
                json!({"p": p, "type": kind, "primes": primes.iter().map(io::PrimeJson::from).collect::<Vec<_>>()})
            })
            .collect();
        json!({
            "relative_gram": cm.relative_gram.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "delta": cm.delta.to_string(),
            "norm_delta": io::format_rational(&cm.norm_delta),
            "killing_disc": cm.killing_disc.to_string(),
            "computed_disc": io::int_value(&cm.computed_disc),
            "claimed_disc": io::int_value(&cm.claimed_disc),
            "discrepancy": cm.discrepancy,
            "prime_support": cm.prime_support,
            "splitting": splitting,
            "finite_ramification": cm.deduction.finite_ramification.iter().map(io::PrimeJson::from).collect::<Vec<_>>(),
            "ramified_real_count": cm.deduction.ramified_real_count,
            "conclusion": cm.deduction.conclusion,
        })
    }
}

fn factored(n: &BigInt) -> String {
    match crate::arith::factor_integer(n) {
        Ok(f) => {
            let sign = if n < &BigInt::from(0) { "-" } else { "" };
            let parts: Vec<String> =
                f.iter().map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
            format!("{sign}{}", parts.join("·"))
        }
        Err(_) => n.to_string(),
    }
}

/// `L = K[x]/(x² + θx + 1)` over the cubic field, against the claimed
/// discriminant.
pub fn reproduce_cm() -> Result<CmFourfoldReport> {
    let field = catalog::cubic_field();
    let c1 = field.theta();
    let c0 = field.one();
    let cm = corestrict::cm_pipeline(&field, &c1, &c0, &catalog::cm_claimed_disc())?;
    let delta_signs = ramification::sign_vector(&field, &cm.delta)?;
    Ok(CmFourfoldReport { field, c1, c0, cm, delta_signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k3fib::TorsionGroup;

    #[test]
    fn example_report() {
        let r = reproduce_example31(4, Duration::from_secs(5)).unwrap();
        assert!(r.basis_matches_printed);
        assert!(r.k_gram_matches_printed);
        assert!(r.diffs.is_empty());
        assert!(r.identities_hold());
        assert_eq!(r.disc_factors, vec![3, 3, 3, 3, 3, 3, 18, 18, 18]);
        assert_eq!(r.predicted_disc, BigInt::from(4251528));
        assert_eq!(r.verdict.torsion_options, vec![TorsionGroup::Trivial]);
        assert!(r.render().contains("(ℤ/2)^3 × (ℤ/3)^6 × (ℤ/9)^3"));
        assert_eq!(r.to_json()["lattice"]["signed_det"], json!(-4251528));
    }

    #[test]
    fn diffs_are_reported_individually() {
        let a = crate::matrix::from_i64(&[&[1, 2], &[2, 3]]);
        let b = crate::matrix::from_i64(&[&[1, 2], &[5, 3]]);
        assert_eq!(gram_diffs(&a, &b), vec![GramDiff { row: 1, col: 0, computed: 2.into(), printed: 5.into() }]);
    }

    #[test]
    fn cm_report() {
        let r = reproduce_cm().unwrap();
        assert_eq!(r.splitting_facts(), vec![(2, "inert"), (3, "totally ramified")]);
        assert_eq!(r.cm.prime_support, vec![2, 3]);
        assert!(r.cm.deduction.finite_ramification.is_empty());
        assert!(r.cm.discrepancy);
        assert_eq!(r.delta_signs, vec![-1, -1, -1]);
        let text = r.render();
        assert!(text.contains("2^3·3^21"));
        assert!(text.contains("ramifies only at two infinite places"));
    }
}
