//! Exact integer-lattice algebra.
//!
//! Sublattices are always taken saturated, so every quotient `M / ⟨σ⟩` is
//! again a lattice. All arithmetic is arbitrary precision.

mod hnf;
mod matrix;
mod quotient;

pub use hnf::{
    canonical_basis, hermite_normal_form, integer_kernel, is_surjective, primitive, right_inverse, saturate,
};
pub use matrix::{
    content, dot, int_vector, integral, is_zero_vector, rational_inverse, solve_in_span, IntMatrix, IntVector,
    RatMatrix,
};
pub use quotient::{perp_lattice, quotient_map, PerpLattice, QuotientDefect, QuotientMap};
