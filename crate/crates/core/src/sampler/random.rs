use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::Rational;
use crate::pmaut::{Mobius, PMAut};

/// Shape parameters for `random_pm`.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub max_pieces: usize,
    /// Bound on numerators and denominators of breakpoints, values and slopes.
    pub coeff_bound: i64,
    /// Probability that an inner piece is a genuine Möbius map.
    pub mobius_fraction: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_pieces: 6,
            coeff_bound: 8,
            mobius_fraction: 0.5,
        }
    }
}

fn small_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::ratio(rng.random_range(-bound..=bound), rng.random_range(1..=bound))
}

fn positive_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::ratio(rng.random_range(1..=bound), rng.random_range(1..=bound))
}

fn distinct_sorted(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Rational> {
    let mut set = BTreeSet::new();
    while set.len() < n {
        set.insert(small_rational(rng, bound));
    }
    set.into_iter().collect()
}

/// The affine map sending `[x0, x1]` onto `[y0, y1]`.
pub(super) fn affine_between(x0: &Rational, x1: &Rational, y0: &Rational, y1: &Rational) -> Mobius {
    let slope = (y1 - y0) / (x1 - x0);
    let shift = y0 - &slope * x0;
    Mobius::affine(&slope, &shift)
}

/// A random automorphism, deterministic in `seed`.
///
/// Breakpoints and their images are sorted random rationals. Inner pieces are
/// affine, or with probability `mobius_fraction` the bent map
/// `s ↦ s/(λ + (1−λ)s)` rescaled onto the same box. Tails are affine.
pub fn random_pm(seed: u64, params: &RandomParams) -> PMAut {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = params.coeff_bound.max(2);
    let pieces = rng.random_range(1..=params.max_pieces.max(1));
    if pieces == 1 {
        return PMAut::affine(positive_rational(&mut rng, bound), small_rational(&mut rng, bound));
    }
    let xs = distinct_sorted(&mut rng, pieces - 1, bound);
    let ys = distinct_sorted(&mut rng, pieces - 1, bound);
    let mut maps = Vec::with_capacity(pieces);
    let left = positive_rational(&mut rng, bound);
    maps.push(Mobius::affine(&left, &(&ys[0] - &left * &xs[0])));
    for i in 0..pieces - 2 {
        let (x0, x1, y0, y1) = (&xs[i], &xs[i + 1], &ys[i], &ys[i + 1]);
        let to_unit = affine_between(x0, x1, &Rational::zero(), &Rational::one());
        let from_unit = affine_between(&Rational::zero(), &Rational::one(), y0, y1);
        let bend = if rng.random_bool(params.mobius_fraction) {
            let mut lambda = positive_rational(&mut rng, bound);
            if lambda == Rational::one() {
                lambda = Rational::from(2);
            }
            Mobius::from_rationals(&Rational::one(), &Rational::zero(), &(Rational::one() - &lambda), &lambda)
                .unwrap()
        } else {
            Mobius::identity()
        };
        maps.push(from_unit.compose(&bend.compose(&to_unit)));
    }
    let right = positive_rational(&mut rng, bound);
    let last = pieces - 2;
    maps.push(Mobius::affine(&right, &(&ys[last] - &right * &xs[last])));
    PMAut::from_pieces(xs, maps).expect("random pieces glue into an automorphism")
}
