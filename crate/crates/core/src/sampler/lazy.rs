use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SamplerError;
use crate::exactnum::{dyadic_between, Ext, ExtendedPoint, QuadPoint, Rational};

/// An automorphism built on demand around an irrational cut.
///
/// A point `r` below the cut goes into `(r, cut)`, a point above into
/// `(r, r + 1)`. So the map is above the identity everywhere, never moves a
/// point across the cut, and the two sides of the cut are in different
/// orbitals.
#[derive(Clone, Debug)]
pub struct LazyAut {
    seed: u64,
    cut: QuadPoint,
    window: (Rational, Rational),
    map: BTreeMap<Rational, Rational>,
    inv: BTreeMap<Rational, Rational>,
    rng: ChaCha8Rng,
}

/// A lazy automorphism preserving `cut`, with `p < cut < q`.
pub fn cut_random_aut(seed: u64, cut: QuadPoint, p: Rational, q: Rational) -> Result<LazyAut, SamplerError> {
    if cut.is_rational() {
        return Err(SamplerError::RationalCut(cut.to_string()));
    }
    if !(QuadPoint::from(&p) < cut && cut < QuadPoint::from(&q)) {
        return Err(SamplerError::CutOutsideWindow);
    }
    Ok(LazyAut {
        seed,
        cut,
        window: (p, q),
        map: BTreeMap::new(),
        inv: BTreeMap::new(),
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}

fn fin(r: &Rational) -> ExtendedPoint {
    Ext::Finite(QuadPoint::from(r))
}

impl LazyAut {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cut(&self) -> &QuadPoint {
        &self.cut
    }

    pub fn window(&self) -> (&Rational, &Rational) {
        (&self.window.0, &self.window.1)
    }

    pub fn committed(&self) -> &BTreeMap<Rational, Rational> {
        &self.map
    }

    fn below_cut(&self, r: &Rational) -> bool {
        QuadPoint::from(r) < self.cut
    }

    /// A seeded rational strictly inside `(lo, hi)`.
    fn pick(&mut self, mut lo: ExtendedPoint, mut hi: ExtendedPoint) -> Rational {
        for _ in 0..self.rng.random_range(0..=3) {
            let m = Ext::Finite(QuadPoint::from(dyadic_between(&lo, &hi).unwrap()));
            if self.rng.random_bool(0.5) {
                lo = m;
            } else {
                hi = m;
            }
        }
        dyadic_between(&lo, &hi).expect("lazy constraints stay consistent")
    }

    fn commit(&mut self, x: Rational, y: Rational) {
        self.map.insert(x.clone(), y.clone());
        self.inv.insert(y, x);
    }

    pub fn eval(&mut self, x: &Rational) -> Rational {
        if let Some(y) = self.map.get(x) {
            return y.clone();
        }
        let mut lo = fin(x);
        let mut hi = if self.below_cut(x) { Ext::Finite(self.cut.clone()) } else { fin(&(x + Rational::one())) };
        if let Some((_, y)) = self.map.range(..x).next_back() {
            lo = lo.max(fin(y));
        }
        if let Some((_, y)) = self.map.range(x..).next() {
            hi = hi.min(fin(y));
        }
        let y = self.pick(lo, hi);
        self.commit(x.clone(), y.clone());
        y
    }

    pub fn eval_inv(&mut self, y: &Rational) -> Rational {
        if let Some(x) = self.inv.get(y) {
            return x.clone();
        }
        let (mut lo, mut hi) = if self.below_cut(y) {
            (Ext::NegInf, fin(y))
        } else {
            (fin(&(y - Rational::one())).max(Ext::Finite(self.cut.clone())), fin(y))
        };
        if let Some((_, x)) = self.inv.range(..y).next_back() {
            lo = lo.max(fin(x));
        }
        if let Some((_, x)) = self.inv.range(y..).next() {
            hi = hi.min(fin(x));
        }
        let x = self.pick(lo, hi);
        self.commit(x.clone(), y.clone());
        x
    }

    /// Checks the committed pairs: strictly increasing, above the identity,
    /// on the same side of the cut, and within one of the argument above it.
    pub fn is_consistent(&self) -> bool {
        let increasing = self.map.values().zip(self.map.values().skip(1)).all(|(a, b)| a < b);
        increasing
            && self.map.iter().all(|(x, y)| {
                let below = self.below_cut(x);
                y > x && below == self.below_cut(y) && (below || *y < x + Rational::one())
            })
    }
}
