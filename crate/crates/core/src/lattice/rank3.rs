//! Bounded search for a rank-3 even lattice with a given discriminant form.

use std::time::{Duration, Instant};

use super::{length, DiscForm, IntLattice};
use crate::error::Result;
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rank3Outcome {
    Yes { witness: IntMatrix },
    No { reason: String },
    Unknown { bound: i64, reason: String },
}

impl Rank3Outcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, Rank3Outcome::Yes { .. })
    }
}

fn det3(g: &[[i64; 3]; 3]) -> i128 {
    let g = |i: usize, j: usize| g[i][j] as i128;
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}

/// Inertia of a nondegenerate symmetric 3×3 from leading minors when they
/// are nonzero, otherwise by exact reduction.
fn signature3(g: &[[i64; 3]; 3]) -> (usize, usize) {
    let m1 = g[0][0] as i128;
    let m2 = g[0][0] as i128 * g[1][1] as i128 - g[0][1] as i128 * g[1][0] as i128;
    let m3 = det3(g);
    if m1 != 0 && m2 != 0 {
        // sign changes in 1, m1, m2, m3 count negative eigenvalues
        let seq = [1i128, m1, m2, m3];
        let neg = seq.windows(2).filter(|w| (w[0] > 0) != (w[1] > 0)).count();
        return (3 - neg, neg);
    }
    let l = IntLattice::from_i64(&[&g[0], &g[1], &g[2]]).expect("symmetric");
    l.signature()
}

/// Searches even symmetric 3×3 Grams with entries in `[-bound, bound]`,
/// signature `sig`, and discriminant form isomorphic to `f`.
///
/// Returns `No` only from the length obstruction `λ(f) > 3`; an exhausted
/// search or an expired `limit` gives `Unknown`.
pub fn rank3_realizable(f: &DiscForm, sig: (usize, usize), bound: i64, limit: Duration) -> Result<Rank3Outcome> {
    let start = Instant::now();
    let deadline = start + limit;
    let lambda = length(f.factors()).lambda;
    if lambda > 3 {
        return Ok(Rank3Outcome::No { reason: format!("length λ = {lambda} > 3") });
    }
    if sig.0 + sig.1 != 3 {
        return Ok(Rank3Outcome::No { reason: format!("signature {sig:?} does not have rank 3") });
    }
    let order = f.order() as i128;
    let target = if sig.1.is_multiple_of(2) { order } else { -order };
    let evens: Vec<i64> = (-bound..=bound).filter(|x| x % 2 == 0).collect();
    let all: Vec<i64> = (-bound..=bound).collect();
    let mut checked = 0u64;
    // permuting the basis permutes the diagonal, so a ≤ b ≤ c suffices
    for (ia, &a) in evens.iter().enumerate() {
        for (ib, &b) in evens.iter().enumerate().skip(ia) {
            for &c in &evens[ib..] {
                for &d in &all {
                    for &e in &all {
                        if Instant::now() > deadline {
                            return Ok(Rank3Outcome::Unknown {
                                bound,
                                reason: format!("wall-clock limit {limit:?} reached after {checked} candidates"),
                            });
                        }
                        for &h in &all {
                            let g = [[a, d, e], [d, b, h], [e, h, c]];
                            if det3(&g) != target {
                                continue;
                            }
                            if signature3(&g) != sig {
                                continue;
                            }
                            checked += 1;
                            let l = IntLattice::from_i64(&[&g[0], &g[1], &g[2]])?;
                            let fl = l.disc_form()?;
                            match f.is_isomorphic(&fl, super::DEFAULT_CAP, Some(deadline))? {
                                Some(true) => return Ok(Rank3Outcome::Yes { witness: l.gram().clone() }),
                                Some(false) => {}
                                None => {
                                    return Ok(Rank3Outcome::Unknown {
                                        bound,
                                        reason: format!("wall-clock limit {limit:?} reached during comparison"),
                                    })
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Rank3Outcome::Unknown {
        bound, reason: format!("no witness with entries ≤ {bound} among {checked} candidates")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ade_lattice, Sign};

    const LIMIT: Duration = Duration::from_secs(20);

    #[test]
    fn self_witness() {
        let l = IntLattice::from_i64(&[&[-2, 0, 0], &[0, -2, 0], &[0, 0, -2]]).unwrap();
        let f = l.disc_form().unwrap();
        let r = rank3_realizable(&f, (0, 3), 2, LIMIT).unwrap();
        let Rank3Outcome::Yes { witness } = r else { panic!("{r:?}") };
        let w = IntLattice::new(witness).unwrap();
        assert_eq!(w.disc_form().unwrap().is_isomorphic(&f, 1000, None).unwrap(), Some(true));
    }

    #[test]
    fn a3_negative_is_realized() {
        let f = ade_lattice(&"A3".parse().unwrap(), Sign::Negative).disc_form().unwrap();
        assert_eq!(f.factors(), &[4]);
        assert!(rank3_realizable(&f, (0, 3), 4, LIMIT).unwrap().is_yes());
    }

    #[test]
    fn length_obstruction() {
        let f = ade_lattice(&"4A1".parse().unwrap(), Sign::Negative).disc_form().unwrap();
        assert!(matches!(rank3_realizable(&f, (0, 3), 4, LIMIT).unwrap(), Rank3Outcome::No { .. }));
    }

    #[test]
    fn deadline_gives_unknown() {
        let f = ade_lattice(&"A2".parse().unwrap(), Sign::Negative).disc_form().unwrap();
        let t = Instant::now();
        let r = rank3_realizable(&f, (2, 1), 60, Duration::from_millis(50)).unwrap();
        assert!(t.elapsed() < Duration::from_secs(2));
        assert!(matches!(r, Rank3Outcome::Unknown { .. } | Rank3Outcome::Yes { .. }));
    }
}
