//! Random automorphisms: seeded piecewise-Möbius maps, bump sequences and
//! their products, lazily built maps around an irrational cut, and
//! certificates that a quotient of two such maps is not in B.

mod christensen;
mod describe;
mod lazy;
mod metric;
mod random;
mod witness;

use thiserror::Error;

pub use christensen::{christensen_sequence, fixed_prefix, phi_sample, prefix_words, BumpSequence};
pub use describe::{describe, Description};
pub use lazy::{cut_random_aut, LazyAut};
pub use metric::{group_metric_dist, PointMap, Word};
pub use random::{random_pm, RandomParams};
pub use witness::{not_in_b_witness, Certificate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplerError {
    #[error("cut {0} is rational")]
    RationalCut(String),
    #[error("cut is not inside the window")]
    CutOutsideWindow,
    #[error("maps do not share a cut and window")]
    Mismatch,
}
