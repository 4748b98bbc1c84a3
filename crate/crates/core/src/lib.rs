//! Scrambled van der Corput, Halton and Hammersley point sets together with
//! exact and heuristic star-discrepancy computation, p-adic equidistribution
//! checks, closed-form discrepancy bounds and a greedy search over shifts and
//! digit permutations.
//!
//! The crate is organised bottom-up:
//!
//! * [`sequence`] builds point sets from a [`ScrambleConfig`].
//! * [`padic`] checks the residue-counting invariants behind the bounds.
//! * [`discrepancy`] evaluates star and extreme discrepancy.
//! * [`bounds`] evaluates closed-form upper bounds and derived constants.
//! * [`search`] runs the shift/permutation searches.
//! * [`harness`] binds checked-in parameter tables to expected values.

pub mod bounds;
pub mod discrepancy;
mod error;
pub mod harness;
pub mod padic;
pub mod rng;
pub mod search;
pub mod sequence;

pub use error::{Error, Result};
pub use sequence::{HammersleyConvention, PermPolynomial, Permutation, PointSet, ScrambleConfig};

/// Exact rational type used wherever results must compare equal, not just close.
pub type Rational = num_rational::Ratio<i128>;
