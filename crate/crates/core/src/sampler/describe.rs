use std::fmt;

use serde::Serialize;

use crate::orbitals::{in_b, is_good, signature};
use crate::pmaut::PMAut;

/// Summary statistics of one automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Description {
    /// Number of rational fixed points; `None` when there are infinitely many.
    pub fixed_count: Option<usize>,
    pub identity_interval_count: usize,
    pub orbital_word: String,
    pub good: bool,
    pub in_b: bool,
}

pub fn describe(f: &PMAut) -> Description {
    let fx = f.fixed_point_set();
    let fixed_count = if fx.identity_intervals.is_empty() {
        Some(fx.isolated.iter().filter(|z| z.is_rational()).count())
    } else {
        None
    };
    Description {
        fixed_count,
        identity_interval_count: fx.identity_intervals.len(),
        orbital_word: signature(f).to_string(),
        good: is_good(f).is_good(),
        in_b: in_b(f),
    }
}

impl Description {
    pub fn fixed_count_str(&self) -> String {
        self.fixed_count.map_or_else(|| "inf".to_string(), |n| n.to_string())
    }
}

impl fmt::Display for Description {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fixed_count={} identity_intervals={} word=\"{}\" good={} in_B={}",
            self.fixed_count_str(),
            self.identity_interval_count,
            self.orbital_word,
            self.good,
            self.in_b
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;

    #[test]
    fn examples() {
        let d = describe(&PMAut::translation(Rational::one()));
        assert_eq!((d.fixed_count, d.identity_interval_count, d.orbital_word.as_str(), d.good, d.in_b), (Some(0), 0, "+", true, true));
        let d = describe(&PMAut::affine(Rational::from(2), Rational::zero()));
        assert_eq!((d.fixed_count, d.identity_interval_count, d.orbital_word.as_str(), d.good, d.in_b), (Some(1), 0, "- 0 +", true, false));
        let d = describe(&PMAut::identity());
        assert_eq!((d.fixed_count, d.identity_interval_count, d.good, d.in_b), (None, 1, false, false));
        assert_eq!(d.to_string(), "fixed_count=inf identity_intervals=1 word=\"(0)\" good=false in_B=false");
    }
}
