//! Point-set construction: radical inverses, digit scrambling, index
//! polynomials, Halton subsequences, Hammersley lifts and the Kronecker and
//! Kritzinger comparison sequences.

mod comparison;
mod config;
mod generate;
mod perm;
mod point_set;
mod radical;

pub use comparison::{
    kritzinger_sequence, kritzinger_sequence_exact, kronecker_sequence, KritzingerObjective, GOLDEN_RATIO,
};
pub use config::{HammersleyConvention, ScrambleConfig};
pub use generate::{generate_point_set, hammersley_lift, hammersley_lift_exact_first_coords};
pub use perm::{is_prime, validate_perm_polynomial, PermPolynomial, Permutation, ENUMERATION_GUARD};
pub use point_set::{PointSet, Provenance};
pub use radical::{
    radical_inverse, radical_inverse_exact, scrambled_radical_inverse, scrambled_radical_inverse_exact, ScrambledValue,
};
