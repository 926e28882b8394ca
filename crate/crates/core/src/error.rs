use thiserror::Error;

use crate::atoms::ValidationReport;

/// Errors raised by the lattice operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exponent {name} = {value} is outside its admissible range {range}")]
    ExponentOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("exponents violate the Sobolev relation 1/q = 1/p - alpha/n (residual {residual:e})")]
    SobolevMismatch { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("signal value at {point:?} is not finite")]
    NonFiniteValue { point: Vec<i64> },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("padded FFT volume {volume} exceeds the budget of {budget} points")]
    FftBudgetExceeded { volume: usize, budget: usize },

    #[error("the t-grid is empty")]
    EmptyGrid,

    #[error("target point lies inside the dilated cube (|j - k0|_inf = {distance}, threshold {threshold})")]
    TargetInsideDilatedCube { distance: u64, threshold: u64 },

    #[error("tail radius {radius} is below the dilation threshold {threshold}")]
    TailRadiusTooSmall { radius: u64, threshold: u64 },

    #[error("moment space of degree {degree} has dimension {rank} >= #Q = {cardinality}; no nonzero atom exists")]
    MomentSpaceTooLarge {
        degree: u32,
        rank: usize,
        cardinality: usize,
    },

    #[error("atom generation failed after {attempts} attempts")]
    GenerationFailed { attempts: u32 },

    #[error("candidate is not an atom: {0}")]
    InvalidAtom(Box<ValidationReport>),

    #[error("length mismatch: {atoms} atoms but {lambdas} coefficients")]
    LengthMismatch { atoms: usize, lambdas: usize },

    #[error("q(n + N - alpha) = {value} must exceed n = {n} for the tail series to converge")]
    DivergentTail { value: f64, n: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
