//! Elliptic fibrations and Mordell–Weil torsion for K3 surfaces with a
//! given rank-9 transcendental lattice.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::lattice::{
    ade_lattice, isotropic_subgroups, length, rank3_realizable, AdeConfig, DiscForm, IntLattice, Rank3Outcome, Sign,
    DEFAULT_CAP,
};

/// Rank of `H²(S, ℤ)` for a K3 surface.
pub const K3_RANK: usize = 22;

#[derive(Clone, Debug)]
pub struct K3Context {
    transcendental: IntLattice,
    disc_form: DiscForm,
    lambda: usize,
}

impl K3Context {
    /// Requires an even lattice of rank 9 and signature `(2, 7)`.
    pub fn new(transcendental: IntLattice) -> Result<Self> {
        let (pos, neg) = transcendental.signature();
        let rank = transcendental.rank();
        if rank != 9 || (pos, neg) != (2, 7) {
            return Err(Error::BadSignature { rank, pos, neg });
        }
        if !transcendental.is_even() {
            return Err(Error::OddLattice);
        }
        let disc_form = transcendental.disc_form()?;
        let lambda = length(disc_form.factors()).lambda;
        Ok(K3Context { transcendental, disc_form, lambda })
    }

    pub fn transcendental(&self) -> &IntLattice {
        &self.transcendental
    }

    pub fn picard_rank(&self) -> usize {
        K3_RANK - self.transcendental.rank()
    }

    /// Shared with `NS(S)` up to sign.
    pub fn disc_form(&self) -> &DiscForm {
        &self.disc_form
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationCertificate {
    pub exists: bool,
    pub lambda: usize,
    pub picard_rank: usize,
    pub inequality: String,
}

/// `NS(S) = U ⊕ N` with `N` negative definite even as soon as
/// `ρ ≥ λ + 3`.
pub fn fibration_exists(ctx: &K3Context) -> FibrationCertificate {
    let rho = ctx.picard_rank();
    let lambda = ctx.lambda();
    let exists = rho >= lambda + 3;
    let op = if exists { "≥" } else { "<" };
    FibrationCertificate {
        exists,
        lambda,
        picard_rank: rho,
        inequality: format!("{rho} {op} {lambda} + 3 = {}", lambda + 3),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionGroup {
    Trivial,
    Z2,
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorsionGroup::Trivial => "trivial",
            TorsionGroup::Z2 => "Z/2Z",
        })
    }
}

impl FromStr for TorsionGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" | "0" | "1" => Ok(TorsionGroup::Trivial),
            "Z/2" | "Z/2Z" | "ℤ/2" | "ℤ/2ℤ" => Ok(TorsionGroup::Z2),
            other => Err(Error::UnsupportedGroup(other.into())),
        }
    }
}

/// The reducible-fiber configurations compatible with 2-torsion.
pub fn two_torsion_candidates() -> Vec<(AdeConfig, TorsionGroup)> {
    ["8A1", "9A1", "A3+6A1"].iter().map(|s| (s.parse().expect("valid configuration"), TorsionGroup::Z2)).collect()
}

/// Whether the negative ADE lattice has an even overlattice with quotient `g`.
pub fn torsion_overlattice_check(config: &AdeConfig, g: TorsionGroup) -> Result<bool> {
    match g {
        TorsionGroup::Trivial => Ok(true),
        TorsionGroup::Z2 => {
            let f = ade_lattice(config, Sign::Negative).disc_form()?;
            if f.order() % 2 != 0 {
                return Ok(false);
            }
            Ok(isotropic_subgroups(&f, 2, DEFAULT_CAP)?.iter().any(|h| h.order == 2))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationVerdict {
    pub exists: bool,
    pub lambda: usize,
    pub torsion_options: Vec<TorsionGroup>,
    pub witnessing_configs: Vec<AdeConfig>,
    pub rank3: Option<Rank3Outcome>,
    pub notes: Vec<String>,
}

/// Torsion is trivial unless the discriminant form (with either sign) is
/// realized by a rank-3 lattice, in which case `8A₁` with `ℤ/2` is possible.
pub fn mw_torsion_verdict(ctx: &K3Context, bound: i64, limit: Duration) -> Result<FibrationVerdict> {
    let fib = fibration_exists(ctx);
    let mut notes = vec![format!("fibration criterion: {}", fib.inequality)];
    let lambda = ctx.lambda();
    if lambda > 3 {
        notes.push(format!("λ = {lambda} > 3: no rank-3 lattice carries this discriminant form"));
        return Ok(FibrationVerdict {
            exists: fib.exists,
            lambda,
            torsion_options: vec![TorsionGroup::Trivial],
            witnessing_configs: Vec::new(),
            rank3: Some(Rank3Outcome::No { reason: format!("length λ = {lambda} > 3") }),
            notes,
        });
    }
    let f = ctx.disc_form();
    let mut outcomes = Vec::new();
    for (label, form) in [("q", f.clone()), ("-q", f.negate())] {
        let r = rank3_realizable(&form, (0, 3), bound, limit)?;
        notes.push(format!("rank-3 search for {label}: {}", describe(&r)));
        let yes = r.is_yes();
        outcomes.push(r);
        if yes {
            break;
        }
    }
    let pick = |p: fn(&Rank3Outcome) -> bool| outcomes.iter().find(|r| p(r)).cloned();
    let outcome = pick(Rank3Outcome::is_yes)
        .or_else(|| pick(|r| matches!(r, Rank3Outcome::Unknown { .. })))
        .unwrap_or_else(|| outcomes[0].clone());
    let (torsion_options, witnessing_configs) = match &outcome {
        Rank3Outcome::Yes { .. } => (vec![TorsionGroup::Trivial, TorsionGroup::Z2], vec!["8A1".parse()?]),
        Rank3Outcome::No { .. } => (vec![TorsionGroup::Trivial], Vec::new()),
        Rank3Outcome::Unknown { bound, .. } => {
            notes.push(format!("ℤ/2 torsion undecided: unknown at bound {bound}"));
            (vec![TorsionGroup::Trivial], Vec::new())
        }
    };
    Ok(FibrationVerdict {
        exists: fib.exists,
        lambda,
        torsion_options,
        witnessing_configs,
        rank3: Some(outcome),
        notes,
    })
}

fn describe(r: &Rank3Outcome) -> String {
    match r {
        Rank3Outcome::Yes { witness } => format!("realized by {witness:?}"),
        Rank3Outcome::No { reason } => format!("no ({reason})"),
        Rank3Outcome::Unknown { reason, .. } => format!("unknown ({reason})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn example() -> K3Context {
        K3Context::new(IntLattice::new(catalog::example_3_1_printed_gram()).unwrap()).unwrap()
    }

    fn u2_d4_a1() -> IntLattice {
        let u = IntLattice::hyperbolic();
        u.direct_sum(&u).direct_sum(&ade_lattice(&"D4+A1".parse().unwrap(), Sign::Negative))
    }

    #[test]
    fn example_lattice_fibres_with_trivial_torsion() {
        let ctx = example();
        assert_eq!(ctx.picard_rank(), 13);
        let c = fibration_exists(&ctx);
        assert!(c.exists);
        assert_eq!(c.lambda, 9);
        assert_eq!(c.inequality, "13 ≥ 9 + 3 = 12");
        let v = mw_torsion_verdict(&ctx, 4, Duration::from_secs(5)).unwrap();
        assert_eq!(v.torsion_options, vec![TorsionGroup::Trivial]);
    }

    #[test]
    fn small_length_example() {
        let ctx = K3Context::new(u2_d4_a1()).unwrap();
        let c = fibration_exists(&ctx);
        assert!(c.exists);
        assert_eq!(c.lambda, 3);
        let v = mw_torsion_verdict(&ctx, 4, Duration::from_secs(10)).unwrap();
        assert!(v.torsion_options.contains(&TorsionGroup::Trivial));
        assert!(v.rank3.is_some());
    }

    #[test]
    fn bad_signature() {
        let l = ade_lattice(&"8A1".parse().unwrap(), Sign::Negative);
        assert_eq!(K3Context::new(l).unwrap_err(), Error::BadSignature { rank: 8, pos: 0, neg: 8 });
    }

    #[test]
    fn candidates_pass_two_torsion_check() {
        let c = two_torsion_candidates();
        assert_eq!(c.len(), 3);
        for (cfg, g) in &c {
            assert!(cfg.rank() <= 10);
            assert!(torsion_overlattice_check(cfg, *g).unwrap(), "{cfg}");
        }
        assert!(!torsion_overlattice_check(&"A2".parse().unwrap(), TorsionGroup::Z2).unwrap());
        assert!(!torsion_overlattice_check(&"2A1".parse().unwrap(), TorsionGroup::Z2).unwrap());
        assert!(matches!("Z/3".parse::<TorsionGroup>(), Err(Error::UnsupportedGroup(_))));
    }
}
