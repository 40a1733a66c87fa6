//! Words, presentations and the invariants used to compare them.

mod abelian;
mod homs;
mod minimal;
mod presentation;
mod word;

pub use abelian::{abelianization, relation_matrix, smith_diagonal, AbelianInvariants};
#[cfg(feature = "parallel")]
pub use homs::count_homs_parallel;
pub use homs::{count_homs, count_homs_sequential, FiniteGroupTable};
pub use minimal::{
    minimal_presentation, minimal_presentation_with, Certificate, EliminationLevel, LeftoverLevel, MinimalOptions,
    MinimalPresentation,
};
pub use presentation::{is_valid_name, parse_presentation, Presentation};
pub use word::{
    canonical_cyclic, cyclic_reduce, exponent_sums, free_reduce, inverse, occurrences, solve_for, substitute, Letter,
    Word,
};

use crate::polytope::Polytope;

/// First mod-2 Betti number of any small cover over `p`.
pub fn mod2_betti1(p: &Polytope) -> usize {
    p.facet_count() - 3
}
