//! Discrete Riesz potentials, maximal operators and Hardy-space atoms on `Z^n`,
//! with a harness that checks the associated inequalities numerically.
//!
//! Signals are finitely supported and stored sparsely; operator outputs are
//! materialized on an [`EvaluationBox`] as a [`DenseGrid`].

pub mod atoms;
pub mod error;
pub mod exponents;
pub mod lattice;
pub mod norms;
pub mod operators;
pub mod series;
pub mod verify;

pub use atoms::{
    generate_atom, synthesize, validate_atom, Atom, TaylorExpansion, ValidationReport,
};
pub use error::{Error, Result};
pub use exponents::{Exponent, Exponents};
pub use lattice::{DenseGrid, DiscreteCube, LatticeBox, LatticePoint, LatticeSignal};
pub use norms::{iterated_sum, lp_norm, partial_sum, partial_sums, PartialSumMode};
pub use operators::{
    hp_norm_estimate, j_gamma, maximal, poisson_maximal, riesz_direct, riesz_fft, EvaluationBox,
    TGrid,
};
pub use series::{elementary_inequalities, lattice_tail_bound, series_tail_bound};
pub use verify::{ExperimentRow, SweepConfig, Verdict};
