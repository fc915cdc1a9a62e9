use crate::exactnum::{enumerate_rationals, Rational};
use crate::pmaut::PMAut;

/// Anything that can be evaluated, and inverted, at a rational.
pub trait PointMap {
    fn apply(&self, x: &Rational) -> Rational;
    fn apply_inv(&self, y: &Rational) -> Rational;
}

impl PointMap for PMAut {
    fn apply(&self, x: &Rational) -> Rational {
        self.eval(x)
    }

    fn apply_inv(&self, y: &Rational) -> Rational {
        self.eval_inv(y)
    }
}

/// The product `f_1 ∘ f_2 ∘ … ∘ f_n`, evaluated factor by factor instead of
/// being composed into one piecewise map.
#[derive(Clone, Debug, Default)]
pub struct Word<'a>(pub Vec<&'a PMAut>);

impl PointMap for Word<'_> {
    fn apply(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(x.clone(), |v, f| f.eval(&v))
    }

    fn apply_inv(&self, y: &Rational) -> Rational {
        self.0.iter().fold(y.clone(), |v, f| f.eval_inv(&v))
    }
}

/// `Σ_{i ≤ precision} 2^{−i}([f(r_i) ≠ g(r_i)] + [f⁻¹(r_i) ≠ g⁻¹(r_i)])`
/// over the fixed enumeration `r_1, r_2, …`.
pub fn group_metric_dist(f: &impl PointMap, g: &impl PointMap, precision: u32) -> Rational {
    let mut total = Rational::zero();
    for i in 1..=precision {
        let r = enumerate_rationals(i as u64);
        let terms = (f.apply(&r) != g.apply(&r)) as i64 + (f.apply_inv(&r) != g.apply_inv(&r)) as i64;
        if terms > 0 {
            total = total + Rational::dyadic(terms.into(), i);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_examples() {
        let id = PMAut::identity();
        assert!(group_metric_dist(&id, &id, 30).is_zero());
        let t = PMAut::translation(Rational::one());
        let want = Rational::from(2) * (Rational::one() - Rational::dyadic(1.into(), 20));
        assert_eq!(group_metric_dist(&t, &id, 20), want);
        assert!(group_metric_dist(&t, &id, 21) > group_metric_dist(&t, &id, 20));
    }

    #[test]
    fn word_matches_composition() {
        let a = PMAut::affine(Rational::from(2), Rational::one());
        let b = PMAut::translation(Rational::ratio(-1, 3));
        let w = Word(vec![&a, &b]);
        let ab = a.compose(&b);
        for i in 1..30 {
            let r = enumerate_rationals(i);
            assert_eq!(w.apply(&r), ab.eval(&r));
            assert_eq!(w.apply_inv(&r), ab.eval_inv(&r));
        }
        assert!(group_metric_dist(&w, &ab, 40).is_zero());
    }
}
