//! Simply-laced root lattices and their direct sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::IntLattice;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeSymbol {
    A(usize),
    D(usize),
    E(usize),
}

impl AdeSymbol {
    pub fn rank(&self) -> usize {
        match *self {
            AdeSymbol::A(n) | AdeSymbol::D(n) | AdeSymbol::E(n) => n,
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        match *self {
            AdeSymbol::A(n) => (1..n).map(|i| (i - 1, i)).collect(),
            // chain 0..n-2, node n-1 attached to n-3
            AdeSymbol::D(n) => (1..n - 1).map(|i| (i - 1, i)).chain([(n - 3, n - 1)]).collect(),
            // chain 0..n-2, node n-1 attached to 2
            AdeSymbol::E(n) => (1..n - 1).map(|i| (i - 1, i)).chain([(2, n - 1)]).collect(),
        }
    }

    /// Positive-definite Cartan matrix.
    pub fn cartan(&self) -> Vec<Vec<BigInt>> {
        let n = self.rank();
        let mut g = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = BigInt::from(2);
        }
        for (i, j) in self.edges() {
            g[i][j] = BigInt::from(-1);
            g[j][i] = BigInt::from(-1);
        }
        g
    }
}

impl fmt::Display for AdeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeSymbol::A(n) => write!(f, "A{n}"),
            AdeSymbol::D(n) => write!(f, "D{n}"),
            AdeSymbol::E(n) => write!(f, "E{n}"),
        }
    }
}

impl FromStr for AdeSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownSymbol(s.to_string());
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        match (kind, n) {
            ('A', n) if n >= 1 => Ok(AdeSymbol::A(n)),
            ('D', n) if n >= 4 => Ok(AdeSymbol::D(n)),
            ('E', 6..=8) => Ok(AdeSymbol::E(n)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

/// Multiset of root lattice types, kept sorted by symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdeConfig {
    parts: Vec<(AdeSymbol, usize)>,
}

impl AdeConfig {
    pub fn new(parts: Vec<(AdeSymbol, usize)>) -> Self {
        let mut merged: Vec<(AdeSymbol, usize)> = Vec::new();
        let mut parts: Vec<_> = parts.into_iter().filter(|&(_, m)| m > 0).collect();
        parts.sort();
        for (s, m) in parts {
            match merged.last_mut() {
                Some((t, c)) if *t == s => *c += m,
                _ => merged.push((s, m)),
            }
        }
        AdeConfig { parts: merged }
    }

    pub fn parts(&self) -> &[(AdeSymbol, usize)] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().map(|(s, m)| s.rank() * m).sum()
    }
}

impl fmt::Display for AdeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // larger types first, as in "A3+6A1"
        let parts: Vec<String> =
            self.parts.iter().rev().map(|(s, m)| if *m == 1 { s.to_string() } else { format!("{m}{s}") }).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for AdeConfig {
    type Err = Error;

    /// Parses `"A3+6A1"`, `"8A1"`, `"D4 + A1"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for term in s.split('+').map(str::trim) {
            let split = term.find(|c: char| !c.is_ascii_digit()).ok_or_else(|| Error::UnknownSymbol(term.into()))?;
            let (mult, sym) = term.split_at(split);
            let m = if mult.is_empty() { 1 } else { mult.parse().map_err(|_| Error::UnknownSymbol(term.into()))? };
            parts.push((sym.trim().parse()?, m));
        }
        Ok(AdeConfig::new(parts))
    }
}

/// Block-diagonal Cartan Gram, negated for [`Sign::Negative`].
pub fn ade_lattice(config: &AdeConfig, sign: Sign) -> IntLattice {
    let mut l = IntLattice { gram: Vec::new() };
    for (s, m) in config.parts().iter().rev() {
        let block = IntLattice { gram: s.cartan() };
        for _ in 0..*m {
            l = l.direct_sum(&block);
        }
    }
    match sign {
        Sign::Positive => l,
        Sign::Negative => l.negate(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(s: &str) -> BigInt {
        ade_lattice(&s.parse().unwrap(), Sign::Positive).det()
    }

    #[test]
    fn root_lattice_determinants() {
        for n in 1..8 {
            assert_eq!(det(&format!("A{n}")), BigInt::from(n + 1));
        }
        for n in 4..9 {
            assert_eq!(det(&format!("D{n}")), BigInt::from(4));
        }
        assert_eq!(det("E6"), BigInt::from(3));
        assert_eq!(det("E7"), BigInt::from(2));
        assert_eq!(det("E8"), BigInt::from(1));
        assert_eq!(det("8A1"), BigInt::from(256));
    }

    #[test]
    fn negative_convention() {
        let l = ade_lattice(&"A1".parse().unwrap(), Sign::Negative);
        assert_eq!(l.gram(), &vec![vec![BigInt::from(-2)]]);
        let d4 = ade_lattice(&"D4".parse().unwrap(), Sign::Negative);
        assert_eq!(d4.signature(), (0, 4));
    }

    #[test]
    fn parsing_and_display() {
        let c: AdeConfig = "A3 + 6A1".parse().unwrap();
        assert_eq!(c.to_string(), "A3+6A1");
        assert_eq!(c.rank(), 9);
        let c: AdeConfig = "A1+A1+A2".parse().unwrap();
        assert_eq!(c.to_string(), "A2+2A1");
        assert!(matches!("B3".parse::<AdeConfig>(), Err(Error::UnknownSymbol(_))));
        assert!(matches!("D3".parse::<AdeConfig>(), Err(Error::UnknownSymbol(_))));
        assert!(matches!("E9".parse::<AdeConfig>(), Err(Error::UnknownSymbol(_))));
    }
}
