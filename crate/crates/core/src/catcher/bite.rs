//! Reduction of a good target with rational fixed points to fixed-point-free
//! targets on the intervals between them.

use serde::Serialize;

use crate::exactnum::{Ext, Rational};
use crate::orbitals::{hull_signature, is_good, Signature};
use crate::pmaut::{PMAut, PiecewiseMobius};

use super::chart::interval_chart;
use super::{run_catch, CatchError, CatchReport};

#[derive(Clone, Debug, Serialize)]
pub struct BiteInterval {
    pub lo: Ext<Rational>,
    pub hi: Ext<Rational>,
    pub image_lo: Ext<Rational>,
    pub image_hi: Ext<Rational>,
    /// The run on the charted interval.
    pub catch: CatchReport,
    /// Signature of `g⁻¹h` on the pulled-back hull, one per member of `K`,
    /// computed from the glued `g`.
    pub reconstructed: Vec<Signature>,
    /// Every member's signature agrees with the charted target and with the
    /// reconstruction.
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BiteReport {
    pub fixed_points: Vec<Rational>,
    pub images: Vec<Rational>,
    /// Indices into the input family of the members that agree with the
    /// first one at every fixed point.
    pub kept: Vec<usize>,
    pub intervals: Vec<BiteInterval>,
}

fn ext(r: Option<&Rational>, neg: bool) -> Ext<Rational> {
    match r {
        Some(x) => Ext::Finite(x.clone()),
        None if neg => Ext::NegInf,
        None => Ext::PosInf,
    }
}

/// Chooses `q_i = h₀(p_i)` at the fixed points `p_i` of `f`, keeps the
/// members of `family` through all `(p_i, q_i)`, runs the catcher on each
/// charted interval and glues the pieces into one `g`.
pub fn bite(f: &PMAut, family: &[PMAut], stages: u64) -> Result<(PMAut, BiteReport), CatchError> {
    if !is_good(f).is_good() {
        return Err(CatchError::NotGood);
    }
    let fx = f.fixed_point_set();
    if !fx.identity_intervals.is_empty() {
        return Err(CatchError::Unsupported("identity interval".into()));
    }
    let h0 = family.first().ok_or(CatchError::EmptyFamily)?;
    // Irrational fixed points are cuts, not points of ℚ, and stay inside
    // an interval.
    let ps: Vec<Rational> = fx.isolated.iter().filter_map(|z| z.as_rational().cloned()).collect();
    let qs: Vec<Rational> = ps.iter().map(|p| h0.eval(p)).collect();
    let kept: Vec<usize> = (0..family.len())
        .filter(|&i| ps.iter().zip(&qs).all(|(p, q)| family[i].eval(p) == *q))
        .collect();
    let ks: Vec<&PMAut> = kept.iter().map(|&i| &family[i]).collect();

    let mut pieces: Vec<(PiecewiseMobius, Ext<Rational>, Ext<Rational>, Ext<Rational>, Ext<Rational>)> =
        Vec::new();
    let mut runs = Vec::new();
    for i in 0..=ps.len() {
        let lo = ext(i.checked_sub(1).map(|j| &ps[j]), true);
        let hi = ext(ps.get(i), false);
        let qlo = ext(i.checked_sub(1).map(|j| &qs[j]), true);
        let qhi = ext(qs.get(i), false);
        let pi = interval_chart(&lo, &hi);
        let rho = interval_chart(&qlo, &qhi);
        let local = |h: &PMAut, out: &PiecewiseMobius| {
            let r = h.as_piecewise().restrict(&lo, &hi);
            PMAut::from_piecewise(out.compose(&r.compose(&pi.inverse)))
        };
        let fi = local(f, &pi.forward)?;
        let ki: Vec<PMAut> = ks.iter().map(|h| local(h, &rho.forward)).collect::<Result<_, _>>()?;
        let (gi, rep) = run_catch(&fi, &ki, stages)?;
        let glued = rho.inverse.compose(&gi.as_piecewise().compose(&pi.forward));
        let hull = (pi.eval_inv(&rep.hull.0), pi.eval_inv(&rep.hull.1));
        pieces.push((glued, lo, hi, qlo, qhi));
        runs.push((rep, hull));
    }

    let mut breaks = Vec::new();
    let mut maps = Vec::new();
    for (i, (piece, ..)) in pieces.iter().enumerate() {
        if i > 0 {
            breaks.push(ps[i - 1].clone());
        }
        breaks.extend(piece.breaks().iter().cloned());
        maps.extend(piece.maps().iter().cloned());
    }
    let g = PMAut::from_pieces(breaks, maps)?;
    let g_inv = g.invert();

    let intervals = pieces
        .into_iter()
        .zip(runs)
        .map(|((_, lo, hi, image_lo, image_hi), (catch, (a, b)))| {
            let reconstructed: Vec<Signature> =
                ks.iter().map(|h| hull_signature(&g_inv.compose(h), &a, &b)).collect();
            let consistent = catch
                .members
                .iter()
                .zip(&reconstructed)
                .all(|(m, s)| m.hull_signature == catch.target_signature && *s == m.hull_signature);
            BiteInterval { lo, hi, image_lo, image_hi, catch, reconstructed, consistent }
        })
        .collect();
    Ok((g, BiteReport { fixed_points: ps, images: qs, kept, intervals }))
}
