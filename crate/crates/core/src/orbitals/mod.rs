//! Orbital decomposition, parities, signatures, goodness, conjugacy and the
//! predicate B.

mod conjugacy;
mod signature;

use std::fmt;

use crate::exactnum::{dyadic_between, quad_cmp, Ext, ExtendedPoint, QuadPoint, Rational};
use crate::pmaut::PMAut;

pub use conjugacy::{are_conjugate, conjugator_bounded, ConjugatorOutcome, PartialConjugator};
pub use signature::{is_good, GoodVerdict, Signature, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitalKind {
    Signed,
    FixPt,
    /// A maximal interval of fixed points. A finite end is always closed.
    FixBlock { lo_closed: bool, hi_closed: bool },
}

/// A region of the orbital decomposition: a moved orbital, a single fixed
/// point, or a block of fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbital {
    pub lo: ExtendedPoint,
    pub hi: ExtendedPoint,
    pub parity: i8,
    pub kind: OrbitalKind,
}

impl Orbital {
    pub fn symbol(&self) -> Symbol {
        match self.kind {
            OrbitalKind::Signed if self.parity > 0 => Symbol::Pos,
            OrbitalKind::Signed => Symbol::Neg,
            OrbitalKind::FixPt => Symbol::FixPt,
            OrbitalKind::FixBlock { lo_closed, hi_closed } => Symbol::FixBlock { lo_closed, hi_closed },
        }
    }

    /// Whether the rational `x` lies in this region.
    pub fn contains(&self, x: &Rational) -> bool {
        let x = Ext::Finite(QuadPoint::from(x));
        match self.kind {
            OrbitalKind::Signed => self.lo < x && x < self.hi,
            OrbitalKind::FixPt => self.lo == x,
            OrbitalKind::FixBlock { .. } => self.lo <= x && x <= self.hi,
        }
    }

    /// A rational in the region, chosen by `dyadic_between` for intervals.
    pub fn representative(&self) -> Rational {
        match self.kind {
            OrbitalKind::FixPt => self.lo.finite().and_then(|p| p.as_rational()).unwrap().clone(),
            _ => dyadic_between(&self.lo, &self.hi).expect("non-empty region"),
        }
    }
}

impl fmt::Display for Orbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OrbitalKind::Signed => {
                let s = if self.parity > 0 { "+1" } else { "-1" };
                write!(f, "SIGNED({}, {}, {s})", self.lo, self.hi)
            }
            OrbitalKind::FixPt => write!(f, "FIXPT({})", self.lo),
            OrbitalKind::FixBlock { lo_closed, hi_closed } => {
                let l = if lo_closed { '[' } else { '(' };
                let r = if hi_closed { ']' } else { ')' };
                write!(f, "FIXBLOCK{l}{}, {}{r}", self.lo, self.hi)
            }
        }
    }
}

enum FixedItem {
    Point(QuadPoint),
    Block(Ext<Rational>, Ext<Rational>),
}

/// The regions of `f` in increasing order, covering ℝ. Irrational fixed
/// points separate adjacent moved orbitals and are not regions themselves.
pub fn orbital_decomposition(f: &PMAut) -> Vec<Orbital> {
    let fx = f.fixed_point_set();
    let mut items: Vec<(ExtendedPoint, FixedItem)> = fx
        .isolated
        .into_iter()
        .map(|p| (Ext::Finite(p.clone()), FixedItem::Point(p)))
        .chain(
            fx.identity_intervals
                .into_iter()
                .map(|(lo, hi)| (lo.to_point(), FixedItem::Block(lo, hi))),
        )
        .collect();
    items.sort_by(|a, b| a.0.cmp(&b.0));

    let mut out = Vec::new();
    let mut cursor: ExtendedPoint = Ext::NegInf;
    let push_signed = |out: &mut Vec<Orbital>, lo: &ExtendedPoint, hi: &ExtendedPoint| {
        if lo < hi {
            let x = dyadic_between(lo, hi).unwrap();
            out.push(Orbital {
                lo: lo.clone(),
                hi: hi.clone(),
                parity: f.displacement_sign(&x),
                kind: OrbitalKind::Signed,
            });
        }
    };
    for (start, item) in items {
        push_signed(&mut out, &cursor, &start);
        match item {
            FixedItem::Point(p) => {
                if p.is_rational() {
                    out.push(Orbital {
                        lo: Ext::Finite(p.clone()),
                        hi: Ext::Finite(p.clone()),
                        parity: 0,
                        kind: OrbitalKind::FixPt,
                    });
                }
                cursor = Ext::Finite(p);
            }
            FixedItem::Block(lo, hi) => {
                let kind = OrbitalKind::FixBlock {
                    lo_closed: lo.is_finite(),
                    hi_closed: hi.is_finite(),
                };
                cursor = hi.to_point();
                out.push(Orbital { lo: lo.to_point(), hi: cursor.clone(), parity: 0, kind });
            }
        }
    }
    push_signed(&mut out, &cursor, &Ext::PosInf);
    out
}

/// Index of the region containing `x`.
pub fn region_index(regions: &[Orbital], x: &Rational) -> usize {
    regions
        .iter()
        .position(|o| o.contains(x))
        .expect("regions cover every rational")
}

/// Sign of `f(q) − q`.
pub fn parity(f: &PMAut, q: &Rational) -> i8 {
    f.displacement_sign(q)
}

/// Whether `p` and `q` lie in the same orbital of `f`.
pub fn same_orbital(f: &PMAut, p: &Rational, q: &Rational) -> bool {
    if p == q {
        return true;
    }
    if f.eval(p) == *p || f.eval(q) == *q {
        return false;
    }
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    let lo = Ext::Finite(QuadPoint::from(lo));
    let hi = Ext::Finite(QuadPoint::from(hi));
    let fx = f.fixed_point_set();
    let point_between = fx.isolated.iter().any(|z| {
        let z = Ext::Finite(z.clone());
        lo <= z && z <= hi
    });
    let block_between = fx
        .identity_intervals
        .iter()
        .any(|(a, b)| a.to_point() <= hi && lo <= b.to_point());
    !(point_between || block_between)
}

/// The signature of `f`: its regions collapsed to symbols.
pub fn signature(f: &PMAut) -> Signature {
    Signature::new(orbital_decomposition(f).iter().map(Orbital::symbol).collect())
}

/// The signature of `f` restricted to the open interval `(lo, hi)`.
///
/// A rational fixed point at which `f(x) − x` changes sign is written as a
/// cut between the two moved orbitals, like an irrational one; fixed points
/// where the sign does not change stay `0`. This is the form in which a
/// finite-stage interpolation can agree with the signature of a map whose
/// cuts are irrational.
pub fn hull_signature(f: &PMAut, lo: &Rational, hi: &Rational) -> Signature {
    let lo_e = Ext::Finite(QuadPoint::from(lo));
    let hi_e = Ext::Finite(QuadPoint::from(hi));
    let mut word: Vec<Symbol> = Vec::new();
    for o in orbital_decomposition(f) {
        if o.hi <= lo_e || o.lo >= hi_e {
            continue;
        }
        let sym = match o.kind {
            OrbitalKind::FixBlock { .. } => Symbol::FixBlock {
                lo_closed: o.lo > lo_e,
                hi_closed: o.hi < hi_e,
            },
            _ => o.symbol(),
        };
        word.push(sym);
    }
    let mut out: Vec<Symbol> = Vec::with_capacity(word.len());
    for (i, s) in word.iter().enumerate() {
        let crossing = *s == Symbol::FixPt
            && i > 0
            && i + 1 < word.len()
            && word[i - 1].is_signed()
            && word[i + 1].is_signed()
            && word[i - 1] != word[i + 1];
        if !crossing {
            out.push(*s);
        }
    }
    Signature::new(out)
}

/// Membership in B: finitely many fixed points, all rational, and
/// `f(r) ≥ r` for every rational `r`.
pub fn in_b(f: &PMAut) -> bool {
    let fx = f.fixed_point_set();
    if !fx.identity_intervals.is_empty() || fx.isolated.iter().any(|z| !z.is_rational()) {
        return false;
    }
    (0..f.piece_count()).all(|i| piece_min_nonnegative(f, i))
}

/// Whether `h(x) = m(x) − x` is `≥ 0` on the closure of piece `i`.
///
/// `h` has at most one critical point on a piece, where `(cx + d)² = ad − bc`,
/// so its minimum is at an end or there.
fn piece_min_nonnegative(f: &PMAut, i: usize) -> bool {
    let m = &f.maps()[i];
    let (lo, hi) = f.piece_bounds(i);
    let [a, _, c, d] = m.coefficients();
    if m.is_affine() {
        // h(x) = (a − d)/d·x + b/d.
        let drift = (a - d).sign();
        use num_bigint::Sign;
        if (drift == Sign::Minus && !hi.is_finite()) || (drift == Sign::Plus && !lo.is_finite()) {
            return false;
        }
    }
    let h = |x: &Rational| m.eval(x).unwrap() - x;
    for end in [&lo, &hi] {
        if let Ext::Finite(x) = end {
            if h(x).signum() < 0 {
                return false;
            }
        }
    }
    if m.is_affine() {
        return true;
    }
    let det = m.det();
    let c_r = Rational::from_integer(c.clone());
    let d_r = Rational::from_integer(d.clone());
    // Sign of cx + d on the piece, read at any interior point.
    let sample = dyadic_between(&lo.to_point(), &hi.to_point()).unwrap();
    let s = Rational::from((&c_r * &sample + &d_r).signum() as i64);
    let xstar = QuadPoint::new(-&d_r / &c_r, &s / &c_r, det.clone());
    let inside = lo.to_point() < Ext::Finite(xstar.clone()) && Ext::Finite(xstar) < hi.to_point();
    if !inside {
        return true;
    }
    let a_r = Rational::from_integer(a.clone());
    let hstar = QuadPoint::new((&a_r + &d_r) / &c_r, Rational::from(-2) * &s / &c_r, det);
    quad_cmp(&hstar, &QuadPoint::rational(Rational::zero())).is_ge()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmaut::{gold, Mobius};

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn affine(a: i64, b: i64) -> PMAut {
        PMAut::affine(Rational::from(a), Rational::from(b))
    }

    fn phi() -> ExtendedPoint {
        Ext::Finite(QuadPoint::new(r(-1, 2), r(1, 2), 5))
    }

    #[test]
    fn decomposition_examples() {
        let d = orbital_decomposition(&affine(1, 1));
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].lo.clone(), d[0].hi.clone(), d[0].parity), (Ext::NegInf, Ext::PosInf, 1));

        let d = orbital_decomposition(&affine(2, 0));
        let zero = Ext::Finite(QuadPoint::rational(Rational::zero()));
        assert_eq!(d.len(), 3);
        assert_eq!((d[0].hi.clone(), d[0].parity), (zero.clone(), -1));
        assert_eq!((d[1].kind, d[1].lo.clone()), (OrbitalKind::FixPt, zero.clone()));
        assert_eq!((d[2].lo.clone(), d[2].parity), (zero, 1));

        let d = orbital_decomposition(&gold());
        assert_eq!(d.len(), 2);
        assert_eq!((d[0].hi.clone(), d[0].parity), (phi(), 1));
        assert_eq!((d[1].lo.clone(), d[1].parity), (phi(), -1));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&affine(1, 1), &Rational::from(5)), 1);
        assert_eq!(parity(&affine(2, 0), &Rational::zero()), 0);
        assert_eq!(parity(&gold(), &Rational::one()), -1);
    }

    #[test]
    fn same_orbital_examples() {
        assert!(same_orbital(&affine(1, 1), &Rational::zero(), &Rational::from(1000)));
        assert!(!same_orbital(&affine(2, 0), &Rational::from(-1), &Rational::one()));
        assert!(!same_orbital(&gold(), &Rational::zero(), &Rational::one()));
        assert!(same_orbital(&gold(), &Rational::zero(), &r(3, 5)));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&affine(1, 1)).to_string(), "+");
        assert_eq!(signature(&affine(2, 0)).to_string(), "- 0 +");
        assert_eq!(signature(&gold()).to_string(), "+ . -");
        assert_eq!(signature(&PMAut::identity()).to_string(), "(0)");
    }

    #[test]
    fn fixed_ray_and_segment_signatures() {
        // Identity on (−∞, 0], 2x after: a fixed ray closed at 0.
        let ray = PMAut::from_pieces(
            vec![Rational::zero()],
            vec![Mobius::identity(), Mobius::affine(&Rational::from(2), &Rational::zero())],
        )
        .unwrap();
        assert_eq!(signature(&ray).to_string(), "(0] +");
        // 2x below 0, identity on [0, 1], 2x − 1 above.
        let seg = PMAut::from_pieces(
            vec![Rational::zero(), Rational::one()],
            vec![
                Mobius::affine(&Rational::from(2), &Rational::zero()),
                Mobius::identity(),
                Mobius::affine(&Rational::from(2), &Rational::from(-1)),
            ],
        )
        .unwrap();
        assert_eq!(signature(&seg).to_string(), "- [0] +");
    }

    #[test]
    fn hull_signature_examples() {
        let f = affine(2, 0);
        assert_eq!(hull_signature(&f, &Rational::from(-3), &Rational::from(5)).to_string(), "- . +");
        assert_eq!(hull_signature(&f, &Rational::one(), &Rational::from(5)).to_string(), "+");
        assert_eq!(hull_signature(&gold(), &Rational::zero(), &Rational::one()).to_string(), "+ . -");
        // Moves up on both sides of 0.
        let touch = PMAut::from_pieces(
            vec![Rational::zero()],
            vec![
                Mobius::affine(&r(1, 2), &Rational::zero()),
                Mobius::affine(&Rational::from(2), &Rational::zero()),
            ],
        )
        .unwrap();
        assert_eq!(hull_signature(&touch, &Rational::from(-1), &Rational::one()).to_string(), "+ 0 +");
    }

    #[test]
    fn b_examples() {
        assert!(in_b(&affine(1, 1)));
        assert!(!in_b(&affine(2, 0)));
        assert!(!in_b(&PMAut::identity()));
        assert!(!in_b(&gold()));
    }

    #[test]
    fn b_detects_interior_dip() {
        // x + 1 outside [0, 2]; inside, s ↦ s/(λ + (1−λ)s) rescaled so the
        // piece runs from (0, 1) to (2, 3). Larger λ bends further down.
        let bent = |lambda: i64| {
            let to_unit = Mobius::affine(&r(1, 2), &Rational::zero());
            let from_unit = Mobius::affine(&Rational::from(2), &Rational::one());
            let bend = Mobius::new(1.into(), 0.into(), (1 - lambda).into(), lambda.into()).unwrap();
            PMAut::from_pieces(
                vec![Rational::zero(), Rational::from(2)],
                vec![
                    Mobius::translation(&Rational::one()),
                    from_unit.compose(&bend.compose(&to_unit)),
                    Mobius::translation(&Rational::one()),
                ],
            )
            .unwrap()
        };
        let mild = bent(2);
        assert!((0..=20).all(|k| mild.displacement_sign(&r(k, 10)) > 0));
        assert!(in_b(&mild));
        let strong = bent(50);
        assert!((1..20).any(|k| strong.displacement_sign(&r(k, 10)) < 0));
        assert!(!in_b(&strong));
    }
}
