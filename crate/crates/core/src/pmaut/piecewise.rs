use crate::exactnum::{Ext, Rational};

use super::Mobius;

/// An increasing piecewise fractional-linear map on an interval `(lo, hi)`
/// with rational or infinite ends.
///
/// Piece `i` owns `[breaks[i-1], breaks[i])`, the first piece starting at `lo`
/// and the last ending at `hi`. A pole may sit on an open end of the domain,
/// which is how charts onto all of ℚ are written.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiecewiseMobius {
    lo: Ext<Rational>,
    hi: Ext<Rational>,
    breaks: Vec<Rational>,
    maps: Vec<Mobius>,
}

impl PiecewiseMobius {
    /// Callers guarantee `breaks` is strictly increasing inside `(lo, hi)`,
    /// `maps.len() == breaks.len() + 1`, and that the pieces glue into an
    /// increasing function. Adjacent equal maps are merged.
    pub fn from_parts(
        lo: Ext<Rational>,
        hi: Ext<Rational>,
        breaks: Vec<Rational>,
        maps: Vec<Mobius>,
    ) -> Self {
        assert_eq!(maps.len(), breaks.len() + 1, "piece count mismatch");
        let mut out = PiecewiseMobius {
            lo,
            hi,
            breaks: Vec::with_capacity(breaks.len()),
            maps: Vec::with_capacity(maps.len()),
        };
        let mut maps = maps.into_iter();
        out.maps.push(maps.next().unwrap());
        for (b, m) in breaks.into_iter().zip(maps) {
            if out.maps.last() == Some(&m) {
                continue;
            }
            out.breaks.push(b);
            out.maps.push(m);
        }
        out
    }

    pub fn single(lo: Ext<Rational>, hi: Ext<Rational>, map: Mobius) -> Self {
        PiecewiseMobius::from_parts(lo, hi, Vec::new(), vec![map])
    }

    pub fn lo(&self) -> &Ext<Rational> {
        &self.lo
    }

    pub fn hi(&self) -> &Ext<Rational> {
        &self.hi
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn maps(&self) -> &[Mobius] {
        &self.maps
    }

    pub fn piece_count(&self) -> usize {
        self.maps.len()
    }

    /// Bounds of piece `i`.
    pub fn piece_bounds(&self, i: usize) -> (Ext<Rational>, Ext<Rational>) {
        let lo = if i == 0 { self.lo.clone() } else { Ext::Finite(self.breaks[i - 1].clone()) };
        let hi = if i == self.breaks.len() {
            self.hi.clone()
        } else {
            Ext::Finite(self.breaks[i].clone())
        };
        (lo, hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = Ext::Finite(x.clone());
        self.lo < x && x < self.hi
    }

    /// Index of the piece owning `x`.
    pub fn piece_index(&self, x: &Rational) -> usize {
        self.breaks.partition_point(|b| b <= x)
    }

    /// Value at `x`. Panics if `x` lies outside the domain.
    pub fn eval(&self, x: &Rational) -> Rational {
        assert!(self.contains(x) || self.lo == Ext::Finite(x.clone()), "{x} outside domain");
        self.maps[self.piece_index(x)]
            .eval(x)
            .expect("pole inside piece domain")
    }

    /// Images of the breakpoints, in increasing order.
    pub fn break_images(&self) -> Vec<Rational> {
        self.breaks
            .iter()
            .enumerate()
            .map(|(i, b)| self.maps[i + 1].eval(b).expect("pole at breakpoint"))
            .collect()
    }

    pub fn range(&self) -> (Ext<Rational>, Ext<Rational>) {
        (
            self.maps[0].eval_ext(&self.lo, false),
            self.maps.last().unwrap().eval_ext(&self.hi, true),
        )
    }

    /// Preimage of `y`. Panics if `y` lies outside the range.
    pub fn eval_inv(&self, y: &Rational) -> Rational {
        let images = self.break_images();
        let i = images.partition_point(|b| b <= y);
        self.maps[i].inverse().eval(y).expect("pole inside image of piece")
    }

    pub fn invert(&self) -> PiecewiseMobius {
        let (lo, hi) = self.range();
        PiecewiseMobius::from_parts(
            lo,
            hi,
            self.break_images(),
            self.maps.iter().map(Mobius::inverse).collect(),
        )
    }

    /// `self ∘ inner` on the domain of `inner`. The range of `inner` must lie
    /// inside the domain of `self`.
    pub fn compose(&self, inner: &PiecewiseMobius) -> PiecewiseMobius {
        let mut cuts: Vec<Rational> = inner.breaks.clone();
        let (rlo, rhi) = inner.range();
        for b in &self.breaks {
            let e = Ext::Finite(b.clone());
            if rlo < e && e < rhi {
                cuts.push(inner.eval_inv(b));
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut maps = Vec::with_capacity(cuts.len() + 1);
        for j in 0..=cuts.len() {
            let start = if j == 0 { None } else { Some(&cuts[j - 1]) };
            let sample = match start {
                Some(s) => s.clone(),
                None => sample_left_of(&inner.lo, cuts.first().map(|c| Ext::Finite(c.clone())).unwrap_or(inner.hi.clone())),
            };
            let i = inner.piece_index(&sample);
            let o = self.piece_index(&inner.maps[i].eval(&sample).expect("pole inside piece"));
            maps.push(self.maps[o].compose(&inner.maps[i]));
        }
        PiecewiseMobius::from_parts(inner.lo.clone(), inner.hi.clone(), cuts, maps)
    }

    /// The restriction to `(lo, hi)`, which must lie inside the domain.
    pub fn restrict(&self, lo: &Ext<Rational>, hi: &Ext<Rational>) -> PiecewiseMobius {
        let first = match lo {
            Ext::Finite(x) => self.piece_index(x),
            _ => 0,
        };
        let last = match hi {
            Ext::Finite(x) => self.breaks.partition_point(|b| b < x),
            _ => self.breaks.len(),
        };
        PiecewiseMobius::from_parts(
            lo.clone(),
            hi.clone(),
            self.breaks[first..last].to_vec(),
            self.maps[first..=last].to_vec(),
        )
    }

    /// Conjugate by `x ↦ −x`.
    pub fn reflect(&self) -> PiecewiseMobius {
        let neg = |e: &Ext<Rational>| match e {
            Ext::NegInf => Ext::PosInf,
            Ext::PosInf => Ext::NegInf,
            Ext::Finite(r) => Ext::Finite(-r),
        };
        PiecewiseMobius::from_parts(
            neg(&self.hi),
            neg(&self.lo),
            self.breaks.iter().rev().map(|b| -b).collect(),
            self.maps.iter().rev().map(Mobius::reflect).collect(),
        )
    }
}

/// A rational inside `(lo, hi)` for a non-empty interval; used to pick a
/// representative of the first piece when its left end is open.
fn sample_left_of(lo: &Ext<Rational>, hi: Ext<Rational>) -> Rational {
    match (lo, hi) {
        (Ext::Finite(a), Ext::Finite(b)) => a.midpoint(&b),
        (Ext::Finite(a), _) => a + Rational::one(),
        (_, Ext::Finite(b)) => b - Rational::one(),
        _ => Rational::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mobius {
        Mobius::new(a.into(), b.into(), c.into(), d.into()).unwrap()
    }

    #[test]
    fn chart_with_pole_on_domain_end() {
        // (x - 0)/(1 - x) on (0, 1).
        let chart = PiecewiseMobius::single(
            Ext::Finite(Rational::zero()),
            Ext::Finite(Rational::one()),
            m(1, 0, -1, 1),
        );
        assert_eq!(chart.range(), (Ext::Finite(Rational::zero()), Ext::PosInf));
        assert_eq!(chart.eval(&Rational::ratio(2, 3)), Rational::from(2));
        let inv = chart.invert();
        assert_eq!(inv.eval(&Rational::from(2)), Rational::ratio(2, 3));
        let id = inv.compose(&chart);
        assert_eq!(id.maps(), &[Mobius::identity()]);
    }

    #[test]
    fn restrict_keeps_inner_breaks() {
        let f = PiecewiseMobius::from_parts(
            Ext::NegInf,
            Ext::PosInf,
            vec![Rational::from(-1), Rational::one()],
            vec![m(1, 1, 0, 1), m(1, 1, 1, 2), m(3, -1, 0, 3)],
        );
        let r = f.restrict(&Ext::Finite(Rational::zero()), &Ext::PosInf);
        assert_eq!(r.breaks(), &[Rational::one()]);
        let r = f.restrict(&Ext::Finite(Rational::from(-1)), &Ext::Finite(Rational::one()));
        assert_eq!(r.piece_count(), 1);
        assert_eq!(r.eval(&Rational::zero()), Rational::ratio(1, 2));
    }
}
