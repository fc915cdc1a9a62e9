use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound::{Excluded, Unbounded};

use crate::exactnum::{dyadic_between, enumerate_rationals, Ext, ExtendedPoint, QuadPoint, Rational};
use crate::pmaut::PMAut;

use super::{orbital_decomposition, region_index, signature, Orbital, OrbitalKind};

/// Whether `f` and `g` are conjugate in Aut(ℚ,<): equal signatures.
pub fn are_conjugate(f: &PMAut, g: &PMAut) -> bool {
    signature(f) == signature(g)
}

/// A finite strictly increasing map `k` with `k(f(x)) = g(k(x))` wherever
/// both `x` and `f(x)` lie in its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialConjugator {
    pub pairs: BTreeMap<Rational, Rational>,
}

impl PartialConjugator {
    pub fn get(&self, x: &Rational) -> Option<&Rational> {
        self.pairs.get(x)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Re-checks monotonicity and the commutation identity on the domain.
    pub fn verify(&self, f: &PMAut, g: &PMAut) -> Result<(), String> {
        let mut prev: Option<&Rational> = None;
        for (x, y) in &self.pairs {
            if let Some(p) = prev {
                if p >= y {
                    return Err(format!("not increasing at {x}"));
                }
            }
            prev = Some(y);
            if let Some(kfx) = self.pairs.get(&f.eval(x)) {
                if *kfx != g.eval(y) {
                    return Err(format!("k(f({x})) = {kfx} but g(k({x})) = {}", g.eval(y)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugatorOutcome {
    Found(PartialConjugator),
    /// The bounded search gave up; no conclusion about conjugacy.
    Failure(String),
}

impl ConjugatorOutcome {
    pub fn found(&self) -> Option<&PartialConjugator> {
        match self {
            ConjugatorOutcome::Found(k) => Some(k),
            ConjugatorOutcome::Failure(_) => None,
        }
    }
}

impl fmt::Display for ConjugatorOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjugatorOutcome::Found(k) => {
                write!(f, "FOUND")?;
                for (x, y) in &k.pairs {
                    write!(f, " {x}->{y}")?;
                }
                Ok(())
            }
            ConjugatorOutcome::Failure(why) => write!(f, "FAILURE {why}"),
        }
    }
}

/// Back-and-forth search for a partial conjugator, with orbit exponents
/// bounded by `depth`.
///
/// Index 0 of each pair below is the `f` side, index 1 the `g` side; `maps[0]`
/// is `k` and `maps[1]` is `k⁻¹`. Regions are matched greedily left to right,
/// which yields an order-preserving bijection whenever one exists.
pub fn conjugator_bounded(f: &PMAut, g: &PMAut, depth: usize) -> ConjugatorOutcome {
    let mut search = Search::new(f, g, depth.max(1));
    match search.run() {
        Ok(()) => {
            let k = PartialConjugator { pairs: search.maps[0].clone() };
            match k.verify(f, g) {
                Ok(()) => ConjugatorOutcome::Found(k),
                Err(e) => ConjugatorOutcome::Failure(format!("verification: {e}")),
            }
        }
        Err(e) => ConjugatorOutcome::Failure(e),
    }
}

struct Search<'a> {
    auts: [&'a PMAut; 2],
    regions: [Vec<Orbital>; 2],
    psi: [Vec<Option<usize>>; 2],
    maps: [BTreeMap<Rational, Rational>; 2],
    depth: usize,
}

impl<'a> Search<'a> {
    fn new(f: &'a PMAut, g: &'a PMAut, depth: usize) -> Self {
        let regions = [orbital_decomposition(f), orbital_decomposition(g)];
        let psi = [vec![None; regions[0].len()], vec![None; regions[1].len()]];
        Search {
            auts: [f, g],
            regions,
            psi,
            maps: [BTreeMap::new(), BTreeMap::new()],
            depth,
        }
    }

    fn run(&mut self) -> Result<(), String> {
        for side in 0..2 {
            for i in 0..self.regions[side].len() {
                let x = self.regions[side][i].representative();
                self.place(x, side)?;
            }
        }
        let budget = 8 * self.depth as u64;
        let mut seeds = 0;
        for n in 1..=budget {
            if seeds >= self.depth && self.maps[0].len() >= self.depth {
                break;
            }
            let r = enumerate_rationals(n);
            for side in 0..2 {
                if self.place(r.clone(), side)? {
                    seeds += 1;
                }
            }
        }
        Ok(())
    }

    /// Matches the region of `x` on `side` to a region on the other side.
    fn matched_region(&mut self, side: usize, i: usize) -> Result<usize, String> {
        if let Some(j) = self.psi[side][i] {
            return Ok(j);
        }
        let other = 1 - side;
        let below = self.psi[side][..i].iter().flatten().max().map(|&j| j as isize).unwrap_or(-1);
        let above = self.psi[side][i + 1..].iter().flatten().min().copied().unwrap_or(self.regions[other].len());
        let want = self.regions[side][i].symbol();
        let j = ((below + 1) as usize..above)
            .find(|&j| self.psi[other][j].is_none() && self.regions[other][j].symbol() == want)
            .ok_or_else(|| {
                format!("no region of type {} available for region {i} of {}", super::Signature::new(vec![want]), ["f", "g"][side])
            })?;
        self.psi[side][i] = Some(j);
        self.psi[other][j] = Some(i);
        Ok(j)
    }

    /// Open bounds on the image of `x` from its committed neighbours.
    fn neighbour_bounds(&self, side: usize, x: &Rational) -> (Option<Rational>, Option<Rational>) {
        let m = &self.maps[side];
        let lo = m.range((Unbounded, Excluded(x))).next_back().map(|(_, v)| v.clone());
        let hi = m.range((Excluded(x), Unbounded)).next().map(|(_, v)| v.clone());
        (lo, hi)
    }

    fn fits(&self, side: usize, x: &Rational, y: &Rational) -> bool {
        let (lo, hi) = self.neighbour_bounds(side, x);
        lo.is_none_or(|l| l < *y) && hi.is_none_or(|h| *y < h)
    }

    fn commit(&mut self, side: usize, x: Rational, y: Rational) {
        self.maps[1 - side].insert(y.clone(), x.clone());
        self.maps[side].insert(x, y);
    }

    /// Adds `x` (and, for a moved point, its orbit segment) on `side`.
    /// Returns whether anything was committed.
    fn place(&mut self, x: Rational, side: usize) -> Result<bool, String> {
        if self.maps[side].contains_key(&x) {
            return Ok(false);
        }
        let i = region_index(&self.regions[side], &x);
        let j = self.matched_region(side, i)?;
        let target = self.regions[1 - side][j].clone();
        match target.kind {
            OrbitalKind::FixPt => {
                let y = target.representative();
                if !self.fits(side, &x, &y) {
                    return Err(format!("fixed point {y} out of order"));
                }
                self.commit(side, x, y);
                Ok(true)
            }
            OrbitalKind::FixBlock { .. } => {
                let (lo, hi) = self.neighbour_bounds(side, &x);
                let lo = lo.map_or(target.lo.clone(), |l| max_ext(&target.lo, &l));
                let hi = hi.map_or(target.hi.clone(), |h| min_ext(&target.hi, &h));
                let mut candidates = vec![x.clone()];
                candidates.extend(dyadic_between(&lo, &hi).ok());
                candidates.extend(target.lo.finite().and_then(|p| p.as_rational()).cloned());
                candidates.extend(target.hi.finite().and_then(|p| p.as_rational()).cloned());
                let y = candidates
                    .into_iter()
                    .find(|y| target.contains(y) && self.fits(side, &x, y))
                    .ok_or_else(|| format!("empty feasible set in fixed block at {x}"))?;
                self.commit(side, x, y);
                Ok(true)
            }
            OrbitalKind::Signed => self.place_moved(x, side, &target),
        }
    }

    fn place_moved(&mut self, x: Rational, side: usize, target: &Orbital) -> Result<bool, String> {
        let (src, dst) = (self.auts[side], self.auts[1 - side]);
        let reach = 2 * self.depth as i64 + 1;
        let fwd = iterate(src, &x, reach, false);
        let back = iterate(src, &x, reach, true);
        let orbit_at = |n: i64| -> &Rational {
            if n == 0 {
                &x
            } else if n > 0 {
                &fwd[(n - 1) as usize]
            } else {
                &back[(-n - 1) as usize]
            }
        };

        // An orbit point already placed forces the image of x.
        let mut forced = None;
        for n in (1..=reach).flat_map(|n| [n, -n]) {
            if let Some(kz) = self.maps[side].get(orbit_at(n)) {
                forced = Some(pow_eval(dst, kz, -n));
                break;
            }
        }

        let d = self.depth as i64;
        let y = match forced {
            Some(y) => y,
            None => {
                let mut lo = target.lo.clone();
                let mut hi = target.hi.clone();
                for n in -d..=d {
                    let (a, b) = self.neighbour_bounds(side, orbit_at(n));
                    if let Some(a) = a {
                        lo = max_ext(&lo, &pow_eval(dst, &a, -n));
                    }
                    if let Some(b) = b {
                        hi = min_ext(&hi, &pow_eval(dst, &b, -n));
                    }
                }
                let xe = Ext::Finite(QuadPoint::from(&x));
                if lo < xe && xe < hi {
                    x.clone()
                } else {
                    dyadic_between(&lo, &hi).map_err(|_| format!("empty feasible set at {x}"))?
                }
            }
        };
        if !target.contains(&y) {
            return Ok(false);
        }

        // Commit the orbit segment, rolling back on any conflict.
        let mut added = Vec::new();
        let mut image = pow_eval(dst, &y, -d);
        for n in -d..=d {
            let pt = orbit_at(n).clone();
            let ok = match self.maps[side].get(&pt) {
                Some(existing) => *existing == image,
                None => {
                    if self.fits(side, &pt, &image) && !self.maps[1 - side].contains_key(&image) {
                        self.commit(side, pt.clone(), image.clone());
                        added.push(pt);
                        true
                    } else {
                        false
                    }
                }
            };
            if !ok {
                for p in added {
                    let v = self.maps[side].remove(&p).unwrap();
                    self.maps[1 - side].remove(&v);
                }
                return Ok(false);
            }
            image = dst.eval(&image);
        }
        Ok(!added.is_empty())
    }
}

fn iterate(f: &PMAut, x: &Rational, n: i64, inverse: bool) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize);
    let mut cur = x.clone();
    for _ in 0..n {
        cur = if inverse { f.eval_inv(&cur) } else { f.eval(&cur) };
        out.push(cur.clone());
    }
    out
}

/// `f^n(x)` by repeated evaluation.
fn pow_eval(f: &PMAut, x: &Rational, n: i64) -> Rational {
    let mut cur = x.clone();
    for _ in 0..n.unsigned_abs() {
        cur = if n > 0 { f.eval(&cur) } else { f.eval_inv(&cur) };
    }
    cur
}

fn max_ext(a: &ExtendedPoint, b: &Rational) -> ExtendedPoint {
    let b = Ext::Finite(QuadPoint::from(b));
    if *a >= b { a.clone() } else { b }
}

fn min_ext(a: &ExtendedPoint, b: &Rational) -> ExtendedPoint {
    let b = Ext::Finite(QuadPoint::from(b));
    if *a <= b { a.clone() } else { b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmaut::gold;

    fn affine(a: i64, b: i64) -> PMAut {
        PMAut::affine(Rational::from(a), Rational::from(b))
    }

    #[test]
    fn translations_are_conjugate() {
        let (f, g) = (affine(1, 1), affine(1, 2));
        assert!(are_conjugate(&f, &g));
        let out = conjugator_bounded(&f, &g, 8);
        let k = out.found().expect("conjugator");
        assert_eq!(k.get(&Rational::zero()), Some(&Rational::zero()));
        assert_eq!(k.get(&Rational::one()), Some(&Rational::from(2)));
        assert!(k.len() >= 8);
        assert!(k.verify(&f, &g).is_ok());
    }

    #[test]
    fn opposite_parities_fail() {
        let out = conjugator_bounded(&affine(1, 1), &affine(1, -1), 4);
        assert!(matches!(out, ConjugatorOutcome::Failure(_)));
        assert!(!are_conjugate(&affine(1, 1), &affine(2, 0)));
    }

    #[test]
    fn self_conjugacy_is_identity() {
        let out = conjugator_bounded(&gold(), &gold(), 4);
        let k = out.found().unwrap();
        assert!(k.pairs.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn scalings_are_conjugate() {
        let out = conjugator_bounded(&affine(2, 0), &affine(3, 0), 12);
        let k = out.found().unwrap();
        assert_eq!(k.get(&Rational::zero()), Some(&Rational::zero()));
    }
}
