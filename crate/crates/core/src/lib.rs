//! Exact workbench for the affine vertex algebra of `psl(n|n)` at level one:
//! structure constants, mode calculus, Zhu C2 reduction, type-A orbit and
//! sheet geometry, free-field levels and lattice bookkeeping.

pub mod affine;
pub mod error;
pub mod freefield;
pub mod geometry;
pub mod lattice;
pub mod liesuper;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod suite;
pub mod zhu;

pub use error::{Error, Result};
