//! Order-automorphisms of the rationals: exact orbital analysis, conjugacy,
//! the back-and-forth catcher construction and random-automorphism samplers.

pub mod exactnum;
pub mod pmaut;
pub mod sampler;
pub mod orbitals;
pub mod catcher;
pub mod cli;
