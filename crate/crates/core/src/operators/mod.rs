//! Lattice operators: the Riesz potential and `J_gamma`, exact centered
//! (fractional) maximal functions, and the Poisson maximal function.

mod convolve;
mod kernel;
mod maximal;
mod poisson;
mod riesz;

pub use convolve::{convolve_direct, convolve_fft, FftConvolver, FftPlan, DEFAULT_FFT_BUDGET};
pub use kernel::{EvaluationBox, JGammaKernel, LatticeKernel, PowerKernel, RieszKernel};
pub use maximal::{holder_pointwise_pair, maximal, maximal_detail, maximal_on_box, MaximalValue};
pub use poisson::{
    hp_norm_estimate, poisson_constant, poisson_maximal, PoissonKernel, TGrid, DEFAULT_T_RESOLUTION,
};
pub use riesz::{
    j_gamma, kernel_lp_bound, riesz_direct, riesz_fft, riesz_fft_with_budget, separable_majorant,
};
