//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mk3_core::catalog;
use mk3_core::corestrict::{corestrict, det_identity_check, diagonal_form, lambda_can};
use mk3_core::k3fib::{
    fibration_exists, mw_torsion_verdict, torsion_overlattice_check, two_torsion_candidates, K3Context,
};
use mk3_core::lattice::{
    ade_lattice, even_overlattice, isotropic_subgroups, rank3_realizable, IntLattice, Rank3Outcome, Sign, DEFAULT_CAP,
};
use mk3_core::quat::{Form, QuaternionAlgebra};
use mk3_core::ramification::{ramification_set, Place, Resolution};
use mk3_core::reproduce::{reproduce_cm, reproduce_example31};
use mk3_core::{BigInt, BigRational, FieldElement, NumberField};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn example_reproduction() -> Check {
    let t = Instant::now();
    let r = reproduce_example31(4, Duration::from_secs(5)).map_err(err)?;
    let elapsed = t.elapsed();
    ensure(r.disc_primary == vec![(2, 3), (3, 6), (9, 3)], format!("disc group {:?}", r.disc_primary))?;
    ensure(r.lattice.abs_det() == BigRational::from_integer(4251528.into()), format!("det {}", r.lattice.signed_det))?;
    ensure(BigInt::from(4251528) == BigInt::from(8) * BigInt::from(3).pow(12), "2³·3¹²")?;
    ensure(r.lattice.signature == (2, 7), format!("signature {:?}", r.lattice.signature))?;
    ensure(r.identities_hold(), "identities")?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("{} printed entries differ, {:.2?}", r.diffs.len(), elapsed))
}

fn discriminant_battery() -> Check {
    let mut seen = Vec::new();
    for (name, order, expect) in [
        ("Hurwitz", catalog::hurwitz_order(), 8),
        ("M2(Z)", catalog::matrix_order(), 2),
        ("cubic example", catalog::example_3_1().1, 4251528),
    ] {
        let r = lambda_can(&order, Form::Killing).map_err(err)?;
        let expect = BigInt::from(expect);
        ensure(r.predicted_disc.as_ref() == Some(&expect), format!("{name}: predicted {:?}", r.predicted_disc))?;
        ensure(
            r.lattice.abs_det() == BigRational::from_integer(expect.clone()),
            format!("{name}: det {}", r.lattice.signed_det),
        )?;
        seen.push(expect.to_string());
    }
    Ok(seen.join(", "))
}

fn test_fields() -> Vec<Arc<NumberField>> {
    vec![catalog::rational_field(), Arc::new(NumberField::from_i64(&[-2, 0, 1]).unwrap()), catalog::cubic_field()]
}

fn random_element(rng: &mut ChaCha8Rng, k: &NumberField, r: i64) -> FieldElement {
    loop {
        let c: Vec<BigRational> =
            (0..k.degree()).map(|_| BigRational::from_integer(rng.gen_range(-r..=r).into())).collect();
        let x = k.element(c);
        if !x.is_zero() {
            return x;
        }
    }
}

fn determinant_identity_suite() -> Check {
    let t = Instant::now();
    let fields = test_fields();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a);
    for i in 0..200 {
        let k = fields[i % 3].clone();
        let n = rng.gen_range(1..=3);
        let diag: Vec<FieldElement> = (0..n).map(|_| random_element(&mut rng, &k, 12)).collect();
        let l = diagonal_form(k.clone(), &diag).map_err(err)?;
        let c = corestrict(&l);
        det_identity_check(&l, &c).map_err(|e| format!("form {i}: {e}"))?;
        // independent oracle: det Q₀ = disc(K)ⁿ ∏ Nm(x_i)
        let mut rhs = BigRational::from_integer(k.discriminant().pow(n as u32));
        for x in &diag {
            rhs *= k.norm(x);
        }
        ensure(c.signed_det == rhs, format!("form {i}: {} != {}", c.signed_det, rhs))?;
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!("200 forms, {elapsed:.2?}"))
}

/// Classical 2-adic symbol over ℚ for nonzero integers.
fn hilbert_2_q(a: i64, b: i64) -> i8 {
    fn split(x: i64) -> (u32, i64) {
        let v = x.trailing_zeros();
        (v, x >> v)
    }
    let eps = |u: i64| (u.rem_euclid(4) == 3) as u32;
    let omega = |u: i64| matches!(u.rem_euclid(8), 3 | 5) as u32;
    let (al, u) = split(a);
    let (be, v) = split(b);
    let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn product_formula() -> Check {
    let q = catalog::rational_field();
    let k = catalog::cubic_field();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4b1);
    let mut dyadic_checked = 0;
    for i in 0..200 {
        let (field, a, b) = if i % 2 == 0 {
            let mut pick = || loop {
                let x: i64 = rng.gen_range(-60..=60);
                if x != 0 {
                    return x;
                }
            };
            let (a, b) = (pick(), pick());
            (q.clone(), a, b)
        } else {
            (k.clone(), 0, 0)
        };
        let alg = if field.degree() == 1 {
            QuaternionAlgebra::new(field.clone(), field.from_int(a), field.from_int(b))
        } else {
            let x = random_element(&mut rng, &field, 6);
            let y = random_element(&mut rng, &field, 6);
            QuaternionAlgebra::new(field.clone(), x, y)
        }
        .map_err(err)?;
        let r = ramification_set(&alg).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(r.resolution != Resolution::Ambiguous, format!("pair {i}: ambiguous"))?;
        ensure(r.undetermined() == 0 && r.symbol_product() == 1, format!("pair {i}: product {}", r.symbol_product()))?;
        ensure(r.ramified().len() % 2 == 0, format!("pair {i}: odd ramification"))?;
        if field.degree() == 1 {
            let at2 = r.symbols.iter().find_map(|s| match &s.place {
                Place::Finite(p) if p.p == 2 => s.value,
                _ => None,
            });
            if let Some(v) = at2 {
                ensure(v == hilbert_2_q(a, b), format!("pair {i}: ({a},{b})_2 = {v}"))?;
                dyadic_checked += 1;
            } else {
                ensure(hilbert_2_q(a, b) == 1, format!("pair {i}: ({a},{b})_2 missing"))?;
            }
        }
    }
    // named algebras
    let h = ramification_set(&catalog::hamilton()).map_err(err)?;
    ensure(
        h.ramified_real == vec![1] && h.ramified_finite.iter().map(|p| p.p).collect::<Vec<_>>() == vec![2],
        "Hamilton",
    )?;
    let e = ramification_set(&catalog::example_3_1_algebra()).map_err(err)?;
    ensure(e.ramified_real.len() == 2 && e.ramified_finite.is_empty(), "cubic example ramification")?;
    ensure(e.disc_ideal.is_unit_ideal(), "𝔇 = (1)")?;
    Ok(format!(
        "200 pairs, {dyadic_checked} dyadic symbols cross-checked; Ram(−1,−1) = {{2, ∞}}; (−3, θ) ramified at ∞{:?}",
        e.ramified_real
    ))
}

fn maximality() -> Check {
    let h = catalog::hurwitz_order();
    let dd = ramification_set(h.algebra()).map_err(err)?.disc_ideal;
    ensure(h.is_maximal(&dd).map_err(err)?, "Hurwitz not certified")?;
    let l = catalog::lipschitz_order();
    let dd = ramification_set(l.algebra()).map_err(err)?.disc_ideal;
    ensure(!l.is_maximal(&dd).map_err(err)?, "Lipschitz certified maximal")?;
    Ok(format!("disc(Hurwitz) = {}, disc(Lipschitz) = {}", h.disc(), l.disc()))
}

fn nikulin() -> Check {
    let l = ade_lattice(&"4A1".parse().map_err(err)?, Sign::Negative);
    let f = l.disc_form().map_err(err)?;
    let subs = isotropic_subgroups(&f, 16, DEFAULT_CAP).map_err(err)?;
    let mut det4 = false;
    for h in &subs {
        let o = even_overlattice(&l, h).map_err(err)?;
        ensure(o.index_law, "index law")?;
        det4 |= !h.is_trivial() && o.lattice.det().abs() == BigInt::from(4);
    }
    ensure(det4, "no |det| = 4 gluing")?;
    let f2 = ade_lattice(&"2A1".parse().map_err(err)?, Sign::Negative).disc_form().map_err(err)?;
    let s2 = isotropic_subgroups(&f2, 4, DEFAULT_CAP).map_err(err)?;
    ensure(s2.iter().all(|h| h.is_trivial()), "2A1 has a nontrivial isotropic subgroup")?;
    Ok(format!("{} gluings of 4A1 checked", subs.len()))
}

fn k3_verdicts() -> Check {
    let ctx = K3Context::new(IntLattice::new(catalog::example_3_1_printed_gram()).map_err(err)?).map_err(err)?;
    let c = fibration_exists(&ctx);
    ensure(c.exists && c.lambda == 9, format!("{c:?}"))?;
    let v = mw_torsion_verdict(&ctx, 4, Duration::from_secs(5)).map_err(err)?;
    ensure(v.torsion_options.len() == 1 && v.torsion_options[0].to_string() == "trivial", "torsion")?;
    let cands = two_torsion_candidates();
    let names: Vec<String> = cands.iter().map(|(c, _)| c.to_string()).collect();
    ensure(names == ["8A1", "9A1", "A3+6A1"], format!("{names:?}"))?;
    for (cfg, g) in &cands {
        ensure(torsion_overlattice_check(cfg, *g).map_err(err)?, format!("{cfg} fails"))?;
    }
    Ok(format!("λ = 9, {}, candidates {}", c.inequality, names.join(", ")))
}

fn cm_pipeline() -> Check {
    let r = reproduce_cm().map_err(err)?;
    ensure(r.cm.prime_support == vec![2, 3], format!("support {:?}", r.cm.prime_support))?;
    ensure(r.splitting_facts() == vec![(2, "inert"), (3, "totally ramified")], "splitting")?;
    ensure(r.cm.deduction.finite_ramification.is_empty(), "finite ramification")?;
    ensure(r.cm.norm_delta == BigRational::from_integer((-3).into()), "Nm(δ)")?;
    ensure(r.cm.claimed_disc == catalog::cm_claimed_disc(), "claim")?;
    Ok(format!("computed {} vs claimed {}, discrepancy {}", r.cm.computed_disc, r.cm.claimed_disc, r.cm.discrepancy))
}

fn bounded_search() -> Check {
    let f = ade_lattice(&"A2".parse().map_err(err)?, Sign::Negative).disc_form().map_err(err)?;
    let cap = Duration::from_millis(300);
    let t = Instant::now();
    let r = rank3_realizable(&f, (2, 1), 400, cap).map_err(err)?;
    let elapsed = t.elapsed();
    ensure(elapsed < cap + Duration::from_secs(2), format!("overran: {elapsed:?}"))?;
    ensure(!matches!(r, Rank3Outcome::No { .. }), "A2 form wrongly rejected")?;
    let f9 = IntLattice::new(catalog::example_3_1_printed_gram()).map_err(err)?.disc_form().map_err(err)?;
    let r9 = rank3_realizable(&f9, (0, 3), 1000, cap).map_err(err)?;
    ensure(matches!(r9, Rank3Outcome::No { .. }), "λ = 9 not rejected")?;
    let kind = match r {
        Rank3Outcome::Yes { .. } => "yes",
        Rank3Outcome::No { .. } => "no",
        Rank3Outcome::Unknown { .. } => "unknown",
    };
    Ok(format!("bound 400 answered {kind} in {elapsed:.2?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("worked cubic example reproduction", example_reproduction),
        ("discriminant formula battery", discriminant_battery),
        ("corestriction determinant identity, 200 forms", determinant_identity_suite),
        ("Hilbert product formula and ramification", product_formula),
        ("maximality certification", maximality),
        ("Nikulin overlattices", nikulin),
        ("K3 fibration and torsion verdicts", k3_verdicts),
        ("CM pipeline", cm_pipeline),
        ("bounded rank-3 search", bounded_search),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
