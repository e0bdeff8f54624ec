//! Lattice public-key encryption built on Latin-square low-density lattice
//! codes, with a GGH baseline and the classical attacks against it.

pub mod matrix_core;
pub mod ldlc;
pub mod decoder;
pub mod pkc;
pub mod cca2;
pub mod attacks;
pub mod bench;
