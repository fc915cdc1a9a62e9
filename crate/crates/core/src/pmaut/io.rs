use serde::{Deserialize, Serialize};

use crate::exactnum::{Ext, Rational};

use super::{Mobius, PMAut, PmError};

/// The JSON automorphism document: `{"pieces": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmDocument {
    pub pieces: Vec<PieceDoc>,
}

/// One piece `x ↦ (ax + b)/(cx + d)` on `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub lo: Ext<Rational>,
    pub hi: Ext<Rational>,
}

pub(super) fn to_document(f: &PMAut) -> PmDocument {
    let pieces = (0..f.piece_count())
        .map(|i| {
            let [a, b, c, d] = f.maps()[i].coefficients().map(|v| Rational::from_integer(v.clone()));
            let (lo, hi) = f.piece_bounds(i);
            PieceDoc { a, b, c, d, lo, hi }
        })
        .collect();
    PmDocument { pieces }
}

pub(super) fn from_document(doc: &PmDocument) -> Result<PMAut, PmError> {
    if doc.pieces.is_empty() {
        return Err(PmError::GapInDomain("no pieces".into()));
    }
    let bounds: Vec<_> = doc.pieces.iter().map(|p| (p.lo.clone(), p.hi.clone())).collect();
    let maps: Vec<_> = doc
        .pieces
        .iter()
        .map(|p| Mobius::from_rationals(&p.a, &p.b, &p.c, &p.d))
        .collect();
    check(&bounds, &maps)?;
    let breaks = doc.pieces[1..]
        .iter()
        .map(|p| p.lo.finite().cloned().expect("checked finite"))
        .collect();
    PMAut::from_pieces(breaks, maps.into_iter().map(Option::unwrap).collect())
}

pub(super) fn validate(
    bounds: &[(Ext<Rational>, Ext<Rational>)],
    maps: &[Mobius],
) -> Result<(), PmError> {
    let maps: Vec<_> = maps.iter().cloned().map(Some).collect();
    check(bounds, &maps)
}

/// Reports the first violated invariant, scanning pieces left to right.
fn check(bounds: &[(Ext<Rational>, Ext<Rational>)], maps: &[Option<Mobius>]) -> Result<(), PmError> {
    let mut prev: Option<(&Ext<Rational>, &Mobius)> = None;
    for (i, ((lo, hi), m)) in bounds.iter().zip(maps).enumerate() {
        match prev {
            None if lo != &Ext::NegInf => {
                return Err(PmError::GapInDomain(format!("first piece starts at {lo}")))
            }
            Some((prev_hi, _)) if prev_hi != lo => {
                return Err(PmError::GapInDomain(format!("piece {i} starts at {lo}, previous ends at {prev_hi}")))
            }
            _ => {}
        }
        if lo >= hi {
            return Err(PmError::GapInDomain(format!("piece {i} is empty")));
        }
        let m = match m {
            Some(m) if m.is_increasing() => m,
            _ => return Err(PmError::NonIncreasingPiece(i)),
        };
        if (!lo.is_finite() || !hi.is_finite()) && !m.is_affine() {
            return Err(PmError::NonAffineTail(i));
        }
        if let Some(pole) = m.pole() {
            let pole = Ext::Finite(pole);
            if lo <= &pole && &pole <= hi {
                return Err(PmError::PoleInDomain(i));
            }
        }
        if let (Some((_, pm)), Ext::Finite(x)) = (prev, lo) {
            if pm.eval(x) != m.eval(x) {
                return Err(PmError::DiscontinuousAt(x.clone()));
            }
        }
        prev = Some((hi, m));
    }
    match prev {
        Some((hi, _)) if hi == &Ext::PosInf => Ok(()),
        Some((hi, _)) => Err(PmError::GapInDomain(format!("last piece ends at {hi}"))),
        None => Err(PmError::GapInDomain("no pieces".into())),
    }
}
