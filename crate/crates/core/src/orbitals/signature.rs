use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::pmaut::PMAut;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Pos,
    Neg,
    FixPt,
    FixBlock { lo_closed: bool, hi_closed: bool },
}

impl Symbol {
    pub fn is_signed(self) -> bool {
        matches!(self, Symbol::Pos | Symbol::Neg)
    }

    pub fn parity(self) -> i8 {
        match self {
            Symbol::Pos => 1,
            Symbol::Neg => -1,
            _ => 0,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Symbol::Pos => "+",
            Symbol::Neg => "-",
            Symbol::FixPt => "0",
            Symbol::FixBlock { lo_closed: true, hi_closed: true } => "[0]",
            Symbol::FixBlock { lo_closed: false, hi_closed: true } => "(0]",
            Symbol::FixBlock { lo_closed: true, hi_closed: false } => "[0)",
            Symbol::FixBlock { lo_closed: false, hi_closed: false } => "(0)",
        }
    }
}

/// The ordered word of orbital symbols. Two adjacent moved orbitals are
/// always separated by an irrational cut, written `.`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature(Vec<Symbol>);

impl Signature {
    pub fn new(word: Vec<Symbol>) -> Self {
        Signature(word)
    }

    pub fn word(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                if self.0[i - 1].is_signed() && s.is_signed() {
                    write!(f, " . ")?;
                } else {
                    write!(f, " ")?;
                }
            }
            write!(f, "{}", s.token())?;
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut word = Vec::new();
        for tok in s.split_whitespace() {
            let sym = match tok {
                "." => continue,
                "+" => Symbol::Pos,
                "-" => Symbol::Neg,
                "0" => Symbol::FixPt,
                "[0]" => Symbol::FixBlock { lo_closed: true, hi_closed: true },
                "(0]" => Symbol::FixBlock { lo_closed: false, hi_closed: true },
                "[0)" => Symbol::FixBlock { lo_closed: true, hi_closed: false },
                "(0)" => Symbol::FixBlock { lo_closed: false, hi_closed: false },
                other => return Err(format!("unknown signature token {other:?}")),
            };
            word.push(sym);
        }
        if word.is_empty() {
            return Err("empty signature".into());
        }
        Ok(Signature(word))
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoodVerdict {
    Good,
    /// Index of a block of fixed points: infinitely many fixed points.
    FixBlock(usize),
    /// Indices of two adjacent moved orbitals of equal parity.
    SameParityPair(usize, usize),
}

impl GoodVerdict {
    pub fn is_good(self) -> bool {
        self == GoodVerdict::Good
    }
}

impl fmt::Display for GoodVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoodVerdict::Good => write!(f, "GOOD"),
            GoodVerdict::FixBlock(i) => write!(f, "NOT_GOOD FIXBLOCK {i}"),
            GoodVerdict::SameParityPair(i, j) => write!(f, "NOT_GOOD PAIR {i} {j}"),
        }
    }
}

impl Signature {
    pub fn goodness(&self) -> GoodVerdict {
        if let Some(i) = self.0.iter().position(|s| matches!(s, Symbol::FixBlock { .. })) {
            return GoodVerdict::FixBlock(i);
        }
        for i in 1..self.0.len() {
            let (a, b) = (self.0[i - 1], self.0[i]);
            if a.is_signed() && a == b {
                return GoodVerdict::SameParityPair(i - 1, i);
            }
        }
        GoodVerdict::Good
    }
}

/// Goodness of an automorphism: finitely many fixed points, and no two
/// adjacent moved orbitals with the same parity.
pub fn is_good(f: &PMAut) -> GoodVerdict {
    super::signature(f).goodness()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmaut::gold;

    #[test]
    fn goodness_examples() {
        assert_eq!(is_good(&PMAut::identity()), GoodVerdict::FixBlock(0));
        let pp: Signature = "+ . +".parse().unwrap();
        assert_eq!(pp.goodness(), GoodVerdict::SameParityPair(0, 1));
        assert!(is_good(&gold()).is_good());
        let fixed_between: Signature = "+ 0 +".parse().unwrap();
        assert!(fixed_between.goodness().is_good());
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["+", "- 0 +", "+ . -", "(0)", "[0) + . - 0 (0]", "- [0] +"] {
            let sig: Signature = s.parse().unwrap();
            assert_eq!(sig.to_string(), s);
        }
        assert!("x".parse::<Signature>().is_err());
        assert!("".parse::<Signature>().is_err());
    }
}
