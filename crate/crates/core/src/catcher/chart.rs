//! Increasing Möbius bijections from an open interval onto ℚ.

use crate::exactnum::{Ext, Rational};
use crate::pmaut::{Mobius, PiecewiseMobius};

/// A chart `(lo, hi) → ℚ` and its inverse.
#[derive(Clone, Debug)]
pub struct Chart {
    pub forward: PiecewiseMobius,
    pub inverse: PiecewiseMobius,
}

impl Chart {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.forward.eval(x)
    }

    pub fn eval_inv(&self, y: &Rational) -> Rational {
        self.inverse.eval(y)
    }
}

/// `y ↦ 1 − 1/y` on `(0, 1)` and `y ↦ y − 1` on `[1, ∞)`.
fn half_line_to_line() -> PiecewiseMobius {
    let one = Rational::one();
    PiecewiseMobius::from_parts(
        Ext::Finite(Rational::zero()),
        Ext::PosInf,
        vec![one.clone()],
        vec![
            Mobius::from_rationals(&one, &-&one, &one, &Rational::zero()).unwrap(),
            Mobius::translation(&-&one),
        ],
    )
}

/// The chart of `(lo, hi)`: first onto `(0, ∞)` by `(x−p)/(q−x)`, `1/(q−x)`
/// or `x−p`, then onto ℚ by the two-piece map above.
pub fn interval_chart(lo: &Ext<Rational>, hi: &Ext<Rational>) -> Chart {
    assert!(lo < hi, "empty chart interval");
    let one = Rational::one();
    let zero = Rational::zero();
    let to_half = match (lo, hi) {
        (Ext::Finite(p), Ext::Finite(q)) => Mobius::from_rationals(&one, &-p, &-&one, q),
        (Ext::NegInf, Ext::Finite(q)) => Mobius::from_rationals(&zero, &one, &-&one, q),
        (Ext::Finite(p), Ext::PosInf) => Some(Mobius::translation(&-p)),
        _ => {
            let id = PiecewiseMobius::single(Ext::NegInf, Ext::PosInf, Mobius::identity());
            return Chart { forward: id.clone(), inverse: id };
        }
    }
    .unwrap();
    let first = PiecewiseMobius::single(lo.clone(), hi.clone(), to_half);
    let forward = half_line_to_line().compose(&first);
    let inverse = forward.invert();
    Chart { forward, inverse }
}
