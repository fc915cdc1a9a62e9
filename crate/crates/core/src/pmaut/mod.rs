//! Piecewise fractional-linear automorphisms of (ℚ, <) and their group algebra.

mod io;
mod mobius;
mod piecewise;

use std::fmt;

use thiserror::Error;

use crate::exactnum::{quad_cmp, Ext, QuadPoint, Rational};

pub use io::{PieceDoc, PmDocument};
pub use mobius::Mobius;
pub use piecewise::PiecewiseMobius;

/// Piece-count ceiling used by `pow` unless the caller supplies another.
pub const DEFAULT_PIECE_BOUND: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PmError {
    #[error("GAP_IN_DOMAIN: {0}")]
    GapInDomain(String),
    #[error("DISCONTINUOUS_AT {0}")]
    DiscontinuousAt(Rational),
    #[error("NON_INCREASING_PIECE {0}")]
    NonIncreasingPiece(usize),
    #[error("POLE_IN_DOMAIN {0}")]
    PoleInDomain(usize),
    #[error("NON_AFFINE_TAIL {0}")]
    NonAffineTail(usize),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("piece bound {0} exceeded")]
    TooManyPieces(usize),
}

impl PmError {
    /// The short validation code, e.g. `DISCONTINUOUS_AT`.
    pub fn code(&self) -> &'static str {
        match self {
            PmError::GapInDomain(_) => "GAP_IN_DOMAIN",
            PmError::DiscontinuousAt(_) => "DISCONTINUOUS_AT",
            PmError::NonIncreasingPiece(_) => "NON_INCREASING_PIECE",
            PmError::PoleInDomain(_) => "POLE_IN_DOMAIN",
            PmError::NonAffineTail(_) => "NON_AFFINE_TAIL",
            PmError::Malformed(_) => "MALFORMED",
            PmError::TooManyPieces(_) => "TOO_MANY_PIECES",
        }
    }
}

/// An order-automorphism of ℚ given by finitely many increasing Möbius pieces
/// with affine tails.
#[derive(Clone, PartialEq, Eq)]
pub struct PMAut(PiecewiseMobius);

/// Fixed points of the real extension of an automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointSet {
    pub isolated: Vec<QuadPoint>,
    /// Maximal intervals on which the map is the identity, as `(lo, hi)`.
    pub identity_intervals: Vec<(Ext<Rational>, Ext<Rational>)>,
}

impl PMAut {
    /// Builds an automorphism from breakpoints and maps, validating every
    /// invariant. Piece `i` owns `[breaks[i-1], breaks[i])`.
    pub fn from_pieces(breaks: Vec<Rational>, maps: Vec<Mobius>) -> Result<Self, PmError> {
        if maps.len() != breaks.len() + 1 {
            return Err(PmError::Malformed("piece count mismatch".into()));
        }
        let mut bounds = Vec::with_capacity(maps.len());
        for i in 0..maps.len() {
            let lo = if i == 0 { Ext::NegInf } else { Ext::Finite(breaks[i - 1].clone()) };
            let hi = if i == breaks.len() { Ext::PosInf } else { Ext::Finite(breaks[i].clone()) };
            bounds.push((lo, hi));
        }
        io::validate(&bounds, &maps)?;
        Ok(PMAut(PiecewiseMobius::from_parts(Ext::NegInf, Ext::PosInf, breaks, maps)))
    }

    /// Checks a piecewise map on all of ℝ and wraps it.
    pub fn from_piecewise(p: PiecewiseMobius) -> Result<Self, PmError> {
        if p.lo() != &Ext::NegInf || p.hi() != &Ext::PosInf {
            return Err(PmError::GapInDomain("domain is not the whole line".into()));
        }
        PMAut::from_pieces(p.breaks().to_vec(), p.maps().to_vec())
    }

    pub fn identity() -> Self {
        PMAut::from_map(Mobius::identity())
    }

    /// A single affine map on all of ℚ.
    pub fn affine(slope: Rational, shift: Rational) -> Self {
        assert!(slope.signum() > 0, "slope must be positive");
        PMAut::from_map(Mobius::affine(&slope, &shift))
    }

    pub fn translation(shift: Rational) -> Self {
        PMAut::affine(Rational::one(), shift)
    }

    fn from_map(m: Mobius) -> Self {
        PMAut(PiecewiseMobius::single(Ext::NegInf, Ext::PosInf, m))
    }

    pub fn as_piecewise(&self) -> &PiecewiseMobius {
        &self.0
    }

    pub fn breaks(&self) -> &[Rational] {
        self.0.breaks()
    }

    pub fn maps(&self) -> &[Mobius] {
        self.0.maps()
    }

    pub fn piece_count(&self) -> usize {
        self.0.piece_count()
    }

    pub fn piece_bounds(&self, i: usize) -> (Ext<Rational>, Ext<Rational>) {
        self.0.piece_bounds(i)
    }

    pub fn is_identity(&self) -> bool {
        self.piece_count() == 1 && self.maps()[0].is_identity()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.eval(x)
    }

    pub fn eval_inv(&self, y: &Rational) -> Rational {
        self.0.eval_inv(y)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PMAut) -> PMAut {
        PMAut(self.0.compose(&inner.0))
    }

    pub fn invert(&self) -> PMAut {
        PMAut(self.0.invert())
    }

    /// `h⁻¹ ∘ self ∘ h`.
    pub fn conjugate_by(&self, h: &PMAut) -> PMAut {
        h.invert().compose(&self.compose(h))
    }

    /// `x ↦ −self(−x)`.
    pub fn reflect(&self) -> PMAut {
        PMAut(self.0.reflect())
    }

    /// `self^n` under the default piece bound.
    pub fn pow(&self, n: i64) -> Result<PMAut, PmError> {
        self.pow_bounded(n, DEFAULT_PIECE_BOUND)
    }

    /// `self^n`, computed by repeated squaring while every intermediate stays
    /// within `bound` pieces, else by iterated composition.
    pub fn pow_bounded(&self, n: i64, bound: usize) -> Result<PMAut, PmError> {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let e = n.unsigned_abs();
        if let Some(p) = pow_by_squaring(&base, e, bound) {
            return Ok(p);
        }
        let mut acc = PMAut::identity();
        for _ in 0..e {
            acc = base.compose(&acc);
            if acc.piece_count() > bound {
                return Err(PmError::TooManyPieces(bound));
            }
        }
        Ok(acc)
    }

    /// `f^k(p)` for `k = −n, …, n`.
    pub fn orbit_segment(&self, p: &Rational, n: usize) -> Vec<Rational> {
        let mut back = Vec::with_capacity(n);
        let mut x = p.clone();
        for _ in 0..n {
            x = self.eval_inv(&x);
            back.push(x.clone());
        }
        back.reverse();
        back.push(p.clone());
        let mut x = p.clone();
        for _ in 0..n {
            x = self.eval(&x);
            back.push(x.clone());
        }
        back
    }

    /// Sign of `f(x) − x`.
    pub fn displacement_sign(&self, x: &Rational) -> i8 {
        (self.eval(x) - x).signum()
    }

    pub fn fixed_point_set(&self) -> FixedPointSet {
        let mut isolated: Vec<QuadPoint> = Vec::new();
        let mut identity_intervals = Vec::new();
        for (i, m) in self.maps().iter().enumerate() {
            let (lo, hi) = self.piece_bounds(i);
            if m.is_identity() {
                identity_intervals.push((lo, hi));
                continue;
            }
            for z in m.fixed_points() {
                let above_lo = match &lo {
                    Ext::Finite(l) => quad_cmp(&z, &QuadPoint::from(l)).is_ge(),
                    _ => true,
                };
                let below_hi = match &hi {
                    Ext::Finite(h) => quad_cmp(&z, &QuadPoint::from(h)).is_lt(),
                    _ => true,
                };
                if above_lo && below_hi {
                    isolated.push(z);
                }
            }
        }
        // A block's closed end is not an isolated fixed point.
        isolated.retain(|z| {
            !identity_intervals.iter().any(|(lo, hi)| {
                let z = Ext::Finite(z.clone());
                lo.to_point() <= z && z <= hi.to_point()
            })
        });
        isolated.sort();
        isolated.dedup();
        FixedPointSet { isolated, identity_intervals }
    }

    pub fn to_document(&self) -> PmDocument {
        io::to_document(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serialisable document")
    }

    pub fn from_document(doc: &PmDocument) -> Result<Self, PmError> {
        io::from_document(doc)
    }

    pub fn from_json(text: &str) -> Result<Self, PmError> {
        let doc: PmDocument =
            serde_json::from_str(text).map_err(|e| PmError::Malformed(e.to_string()))?;
        PMAut::from_document(&doc)
    }
}

fn pow_by_squaring(base: &PMAut, mut e: u64, bound: usize) -> Option<PMAut> {
    let mut acc = PMAut::identity();
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = sq.compose(&acc);
            if acc.piece_count() > bound {
                return None;
            }
        }
        e >>= 1;
        if e > 0 {
            sq = sq.compose(&sq);
            if sq.piece_count() > bound {
                return None;
            }
        }
    }
    Some(acc)
}

impl fmt::Display for PMAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.piece_count() {
            let (lo, hi) = self.piece_bounds(i);
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} on [{lo}, {hi})", self.maps()[i])?;
        }
        Ok(())
    }
}

impl fmt::Debug for PMAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PMAut({self})")
    }
}

/// The "gold" automorphism: `x+1` on `(−∞,−1)`, `(x+1)/(x+2)` on `[−1,1)`,
/// `x − 1/3` on `[1,∞)`. Its only fixed point is `(−1+√5)/2`.
pub fn gold() -> PMAut {
    PMAut::from_pieces(
        vec![Rational::from(-1), Rational::one()],
        vec![
            Mobius::translation(&Rational::one()),
            Mobius::from_rationals(&Rational::one(), &Rational::one(), &Rational::one(), &Rational::from(2))
                .unwrap(),
            Mobius::translation(&Rational::ratio(-1, 3)),
        ],
    )
    .expect("gold is a valid automorphism")
}
