use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::metric::{PointMap, Word};
use super::random::affine_between;
use crate::exactnum::{enumerate_rationals, Rational};
use crate::pmaut::{Mobius, PMAut};

/// A sequence `g_1, …, g_n` of members of B converging to the identity fast
/// enough that every infinite product `g_1^{ε_1} g_2^{ε_2} …` converges.
#[derive(Clone, Debug)]
pub struct BumpSequence {
    pub members: Vec<PMAut>,
    /// The exact fixed-point set of each member.
    pub fixed: Vec<Vec<Rational>>,
    /// `k(i)`: member `i` fixes `r_1, …, r_{k(i)}`.
    pub prefix: Vec<u64>,
}

/// Enumeration prefix fixed by the `i`-th member (1-based). With `k(i) =
/// i + 2` the two-sided metric moves by less than `2^{1−k(i)} = 2^{−i−1}`.
pub fn fixed_prefix(i: usize) -> u64 {
    i as u64 + 2
}

fn choice(rng: &mut ChaCha8Rng) -> Rational {
    Rational::ratio(rng.random_range(1..=3), 4)
}

/// An automorphism fixing exactly `fixed` (sorted, non-empty) and moving
/// every other point up: one bump per gap, slope `< 1` below and `> 1` above.
fn bump_through(fixed: &[Rational], rng: &mut ChaCha8Rng) -> PMAut {
    let first = &fixed[0];
    let last = &fixed[fixed.len() - 1];
    let mut breaks = Vec::with_capacity(2 * fixed.len());
    let mut maps = Vec::with_capacity(2 * fixed.len() + 1);
    let low = Rational::ratio(rng.random_range(1..=3), 4);
    maps.push(Mobius::affine(&low, &(first - &low * first)));
    for w in fixed.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let c = a + choice(rng) * (b - a);
        let v = &c + choice(rng) * (b - &c);
        breaks.push(a.clone());
        breaks.push(c.clone());
        maps.push(affine_between(a, &c, a, &v));
        maps.push(affine_between(&c, b, &v, b));
    }
    breaks.push(last.clone());
    let high = Rational::ratio(rng.random_range(5..=8), 4);
    maps.push(Mobius::affine(&high, &(last - &high * last)));
    PMAut::from_pieces(breaks, maps).expect("bumps form an automorphism")
}

/// Every product `g_1^{ε_1} ∘ … ∘ g_m^{ε_m}` for `ε ∈ {0,1}^m`.
pub fn prefix_words(members: &[PMAut]) -> Vec<Word<'_>> {
    let m = members.len();
    (0..1u64 << m)
        .map(|mask| Word((0..m).filter(|j| mask >> j & 1 == 1).map(|j| &members[j]).collect()))
        .collect()
}

/// Builds `g_1, …, g_n`. Member `i` fixes `r_1, …, r_{k(i)}` and their
/// preimages under every earlier prefix product, so that right-multiplying
/// any such product by `g_i` changes neither its values nor its inverse's
/// values at the first `k(i)` rationals.
pub fn christensen_sequence(n: usize, seed: u64) -> BumpSequence {
    assert!(n >= 1, "at least one member");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: Vec<PMAut> = Vec::with_capacity(n);
    let mut fixed = Vec::with_capacity(n);
    let mut prefix = Vec::with_capacity(n);
    for i in 1..=n {
        let k = fixed_prefix(i);
        let targets: Vec<Rational> = (1..=k).map(enumerate_rationals).collect();
        let mut set: BTreeSet<Rational> = targets.iter().cloned().collect();
        for w in prefix_words(&members) {
            set.extend(targets.iter().map(|r| w.apply_inv(r)));
        }
        let pts: Vec<Rational> = set.into_iter().collect();
        members.push(bump_through(&pts, &mut rng));
        fixed.push(pts);
        prefix.push(k);
    }
    BumpSequence { members, fixed, prefix }
}

impl BumpSequence {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The word `g_1^{ε_1} ∘ … ∘ g_m^{ε_m}` for `bits = (ε_1, …, ε_m)`.
    pub fn word(&self, bits: &[bool]) -> Word<'_> {
        assert!(bits.len() <= self.members.len(), "more bits than members");
        Word(bits.iter().zip(&self.members).filter(|(b, _)| **b).map(|(_, g)| g).collect())
    }

    /// Shortest prefix length after which the value at `r_i` no longer
    /// changes, whatever factors follow.
    pub fn stable_from(&self, i: u64) -> usize {
        (0..=self.members.len())
            .find(|&m| self.prefix[m..].iter().all(|&k| k >= i))
            .unwrap()
    }
}

/// The finite product `g_1^{ε_1} ∘ … ∘ g_m^{ε_m}` as one automorphism.
pub fn phi_sample(seq: &BumpSequence, bits: &[bool]) -> PMAut {
    seq.word(bits)
        .0
        .into_iter()
        .fold(PMAut::identity(), |acc, g| acc.compose(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitals::in_b;
    use crate::sampler::group_metric_dist;

    #[test]
    fn members_lie_in_b_and_fix_their_sets() {
        let seq = christensen_sequence(4, 11);
        for (g, fx) in seq.members.iter().zip(&seq.fixed) {
            assert!(in_b(g));
            let found: Vec<Rational> = g
                .fixed_point_set()
                .isolated
                .iter()
                .map(|z| z.as_rational().unwrap().clone())
                .collect();
            assert_eq!(&found, fx);
            assert_eq!(g.eval(&Rational::zero()), Rational::zero());
        }
    }

    #[test]
    fn prefix_bound() {
        let seq = christensen_sequence(5, 3);
        for i in 0..seq.len() {
            let bound = Rational::dyadic(1.into(), i as u32 + 1);
            for w in prefix_words(&seq.members[..i]) {
                let mut longer = w.clone();
                longer.0.push(&seq.members[i]);
                assert!(group_metric_dist(&longer, &w, 40) < bound);
            }
        }
    }

    #[test]
    fn samples() {
        let seq = christensen_sequence(3, 5);
        assert!(phi_sample(&seq, &[false, false, false]).is_identity());
        assert_eq!(phi_sample(&seq, &[true]), seq.members[0]);
        let p = phi_sample(&seq, &[true, false, true]);
        for i in 1..100 {
            let r = enumerate_rationals(i);
            assert!(p.eval(&r) >= r);
            assert_eq!(p.eval(&r), seq.word(&[true, false, true]).apply(&r));
        }
    }
}
