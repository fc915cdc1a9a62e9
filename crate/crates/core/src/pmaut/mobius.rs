use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{Ext, QuadPoint, Rational};

/// A fractional-linear map `x ↦ (ax + b)/(cx + d)` with integer coefficients.
///
/// Coefficients are kept primitive (gcd 1) and the first non-zero entry of
/// `(c, d)` is positive, so equal maps have equal coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Mobius {
    /// Returns `None` when the matrix is singular.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Option<Self> {
        if &a * &d - &b * &c == BigInt::zero() {
            return None;
        }
        let mut g = a.gcd(&b).gcd(&c).gcd(&d);
        let lead_negative = if c.is_zero() { d.is_negative() } else { c.is_negative() };
        if lead_negative {
            g = -g;
        }
        Some(Mobius {
            a: a / &g,
            b: b / &g,
            c: c / &g,
            d: d / &g,
        })
    }

    /// Builds the map from rational coefficients by clearing denominators.
    pub fn from_rationals(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Option<Self> {
        let l = Rational::common_denominator([a, b, c, d]);
        let scale = Rational::from_integer(l);
        let int = |r: &Rational| (r * &scale).numer().clone();
        Mobius::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        Mobius::affine(&Rational::one(), &Rational::zero())
    }

    /// `x ↦ slope·x + shift`. Panics on a zero slope.
    pub fn affine(slope: &Rational, shift: &Rational) -> Self {
        Mobius::from_rationals(slope, shift, &Rational::zero(), &Rational::one())
            .expect("affine map with zero slope")
    }

    pub fn translation(shift: &Rational) -> Self {
        Mobius::affine(&Rational::one(), shift)
    }

    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_increasing(&self) -> bool {
        self.det().is_positive()
    }

    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// The pole `-d/c`, if any.
    pub fn pole(&self) -> Option<Rational> {
        if self.c.is_zero() {
            None
        } else {
            Some(Rational::new(-&self.d, self.c.clone()).unwrap())
        }
    }

    /// Value at `x`, or `None` at the pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let xn = x.numer();
        let xd = x.denom();
        let num = &self.a * xn + &self.b * xd;
        let den = &self.c * xn + &self.d * xd;
        if den.is_zero() {
            None
        } else {
            Some(Rational::new(num, den).unwrap())
        }
    }

    /// Value at an extended point approached from inside an interval.
    /// `from_below` says the point is the upper end of that interval; at the
    /// pole an increasing map then tends to `+∞`.
    pub fn eval_ext(&self, x: &Ext<Rational>, from_below: bool) -> Ext<Rational> {
        match x {
            Ext::Finite(r) => match self.eval(r) {
                Some(v) => Ext::Finite(v),
                None if from_below => Ext::PosInf,
                None => Ext::NegInf,
            },
            inf => {
                if self.c.is_zero() {
                    // Increasing affine map: sign of a/d is positive.
                    inf.clone()
                } else {
                    Ext::Finite(Rational::new(self.a.clone(), self.c.clone()).unwrap())
                }
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        Mobius::new(
            &self.a * &inner.a + &self.b * &inner.c,
            &self.a * &inner.b + &self.b * &inner.d,
            &self.c * &inner.a + &self.d * &inner.c,
            &self.c * &inner.b + &self.d * &inner.d,
        )
        .expect("product of invertible matrices")
    }

    /// `y ↦ (dy − b)/(−cy + a)`.
    pub fn inverse(&self) -> Mobius {
        Mobius::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
            .expect("inverse of invertible matrix")
    }

    /// Conjugate by `x ↦ −x`: the map `x ↦ −m(−x)`.
    pub fn reflect(&self) -> Mobius {
        Mobius::new(self.a.clone(), -&self.b, -&self.c, self.d.clone()).unwrap()
    }

    /// Real solutions of `m(x) = x`, i.e. of `cx² + (d − a)x − b = 0`, in
    /// increasing order. The identity yields an empty list; use
    /// `is_identity` first.
    pub fn fixed_points(&self) -> Vec<QuadPoint> {
        let lin = &self.d - &self.a;
        if self.c.is_zero() {
            if lin.is_zero() {
                return Vec::new();
            }
            let x = Rational::new(self.b.clone(), lin).unwrap();
            return vec![QuadPoint::rational(x)];
        }
        let disc = &lin * &lin + BigInt::from(4) * &self.b * &self.c;
        if disc.is_negative() {
            return Vec::new();
        }
        let two_c = BigInt::from(2) * &self.c;
        let centre = Rational::new(-&lin, two_c.clone()).unwrap();
        if disc.is_zero() {
            return vec![QuadPoint::rational(centre)];
        }
        let half_width = Rational::new(BigInt::one(), two_c.abs()).unwrap();
        let lo = QuadPoint::new(centre.clone(), -&half_width, disc.clone());
        let hi = QuadPoint::new(centre, half_width, disc);
        vec![lo, hi]
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}x + {})/({}x + {})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
