//! `(p, inf, d_p)`-atoms: validation, seeded generation, finite synthesis,
//! and the Taylor machinery that controls `I_alpha a` away from the atom.

mod atom;
mod moments;
mod tail;
mod taylor;

pub use atom::{
    generate_atom, moment_tolerance, synthesize, validate_atom, Atom, Synthesis, ValidationReport,
    Violation, MOMENT_TOLERANCE, SIZE_TOLERANCE,
};
pub use moments::{
    centered_moment, degree, dp_degree, factorial, moment, monomial, multi_indices,
    multi_indices_of_degree, taylor_order, vanishing_order, MultiIndex,
};
pub use tail::{
    atom_tail_lq_bound, best_tail_lq_bound, multipole_tail_lq_bound, remainder_tail_lq_bound,
    tail_threshold, MULTIPOLE_POINT_BUDGET,
};
pub use taylor::{
    coefficient_sum, derivative_terms, domination_constant, eval_terms, remainder_constant,
    TaylorExpansion, Term,
};
