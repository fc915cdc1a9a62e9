use std::fmt;

use super::{LazyAut, SamplerError};
use crate::exactnum::{enumerate_rationals, QuadPoint, Rational};

/// Evidence that `f⁻¹g` is not in B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `(f⁻¹g)(r_prime) = image < r_prime`.
    Descent { r_prime: Rational, image: Rational },
    /// Both maps preserve the cut and `f⁻¹g` moves a point on each side of
    /// it, so the gap around the cut holds at least two orbitals.
    SplitCut { below: Rational, above: Rational },
    /// Same seed, so `f⁻¹g` is the identity.
    IdentityCase,
    Exhausted,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Descent { .. } => "DESCENT",
            Certificate::SplitCut { .. } => "SPLIT_CUT",
            Certificate::IdentityCase => "IDENTITY_CASE",
            Certificate::Exhausted => "EXHAUSTED",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Descent { r_prime, image } => write!(f, "DESCENT r'={r_prime} image={image}"),
            Certificate::SplitCut { below, above } => write!(f, "SPLIT_CUT below={below} above={above}"),
            other => f.write_str(other.kind()),
        }
    }
}

fn f_inv_g(f: &mut LazyAut, g: &mut LazyAut, x: &Rational) -> Rational {
    let y = g.eval(x);
    f.eval_inv(&y)
}

/// Searches for a point where `f⁻¹g` goes down, first through the probes
/// `r' = g⁻¹(f(r))` for enumerated `r ≥ p` (these work whenever
/// `f(r) > g(r)`), then through the plain enumeration; falls back to the
/// cut-splitting certificate.
pub fn not_in_b_witness(f: &mut LazyAut, g: &mut LazyAut, budget: usize) -> Result<Certificate, SamplerError> {
    if f.cut() != g.cut() || f.window() != g.window() {
        return Err(SamplerError::Mismatch);
    }
    if f.seed() == g.seed() {
        return Ok(Certificate::IdentityCase);
    }
    let p = f.window().0.clone();
    let probes: Vec<Rational> = (1..)
        .map(enumerate_rationals)
        .filter(|r| *r >= p)
        .take(budget)
        .collect();
    for r in &probes {
        let (a, b) = (f.eval(r), g.eval(r));
        if a > b {
            let r_prime = g.eval_inv(&a);
            let image = f_inv_g(f, g, &r_prime);
            if image < r_prime {
                return Ok(Certificate::Descent { r_prime, image });
            }
        }
    }
    let mut below = None;
    let mut above = None;
    for i in 1..=budget as u64 {
        let r = enumerate_rationals(i);
        let image = f_inv_g(f, g, &r);
        if image < r {
            return Ok(Certificate::Descent { r_prime: r, image });
        }
        if image != r {
            if QuadPoint::from(&r) < *f.cut() {
                below.get_or_insert(r);
            } else {
                above.get_or_insert(r);
            }
        }
    }
    Ok(match (below, above) {
        (Some(below), Some(above)) => Certificate::SplitCut { below, above },
        _ => Certificate::Exhausted,
    })
}
