//! The discrete Riesz potential
//! `(I_alpha b)(j) = sum_{i != j} b(i) |i - j|^{alpha - n}` and its relatives.

use super::convolve::{convolve_direct, convolve_fft, DEFAULT_FFT_BUDGET};
use super::kernel::{EvaluationBox, JGammaKernel, RieszKernel};
use crate::error::{Error, Result};
use crate::exponents::{check_alpha, Exponent};
use crate::lattice::{check_dim, DenseGrid, LatticePoint, LatticeSignal};
use crate::series::series_tail_bound;

/// `I_alpha b` on `out` by direct summation, `O(#out * #supp b)`.
pub fn riesz_direct(b: &LatticeSignal, alpha: f64, out: &EvaluationBox) -> Result<DenseGrid> {
    let kernel = RieszKernel::new(b.dim(), alpha)?;
    convolve_direct(b, &kernel, out)
}

/// `I_alpha b` on `out` through a zero-padded FFT convolution.
pub fn riesz_fft(b: &LatticeSignal, alpha: f64, out: &EvaluationBox) -> Result<DenseGrid> {
    riesz_fft_with_budget(b, alpha, out, DEFAULT_FFT_BUDGET)
}

pub fn riesz_fft_with_budget(
    b: &LatticeSignal,
    alpha: f64,
    out: &EvaluationBox,
    budget: usize,
) -> Result<DenseGrid> {
    let kernel = RieszKernel::new(b.dim(), alpha)?;
    convolve_fft(b, &kernel, out, budget)
}

/// Upper bound for `|| {|i|^{alpha-n}}_{i != 0} ||_{l^{p'}}`, `1 < p < n/alpha`.
///
/// With `eps = (n - alpha) p' - n > 0` the `p'`-th power of the norm is a
/// sum of `|i|^{-(n+eps)}`, bounded by [`series_tail_bound`]. Combined with
/// Hoelder, `|I_alpha b(j)| <= ||b||_p * kernel_lp_bound(n, alpha, p)`.
pub fn kernel_lp_bound(n: usize, alpha: f64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    check_alpha(n, alpha)?;
    let nf = n as f64;
    if !(p > 1.0 && p < nf / alpha) {
        return Err(Error::ExponentOutOfRange {
            name: "p",
            value: p,
            range: "(1, n/alpha)",
        });
    }
    let p_conj = match Exponent::Finite(p).conjugate()? {
        Exponent::Finite(x) => x,
        Exponent::Infinity => unreachable!("p > 1"),
    };
    let eps = (nf - alpha) * p_conj - nf;
    if eps <= 0.0 {
        return Err(Error::ExponentOutOfRange {
            name: "p",
            value: p,
            range: "(1, n/alpha)",
        });
    }
    Ok(series_tail_bound(n, eps)?.powf(1.0 / p_conj))
}

/// Tensor-product majorant
/// `sum_i |b(i)| / prod_l max(1, |i_l - j_l|^{1 - alpha/n})` of `|I_alpha b(j)|`.
pub fn separable_majorant(b: &LatticeSignal, alpha: f64, j: &LatticePoint) -> Result<f64> {
    check_dim(b.dim(), j.dim())?;
    check_alpha(b.dim(), alpha)?;
    let exponent = 1.0 - alpha / b.dim() as f64;
    Ok(b.iter()
        .map(|(i, v)| {
            let denom: f64 = i
                .coords()
                .iter()
                .zip(j.coords())
                .map(|(a, c)| ((a - c).unsigned_abs() as f64).powf(exponent).max(1.0))
                .product();
            v.abs() / denom
        })
        .sum())
}

/// `(J_gamma b)(j) = sum_i b(i) / max(1, |i - j|^{1-gamma})` on `Z`.
///
/// Unlike `I_gamma` the diagonal term is kept, so `J_gamma b = b + I_gamma b`.
pub fn j_gamma(b: &LatticeSignal, gamma: f64, out: &EvaluationBox) -> Result<DenseGrid> {
    if b.dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "J_gamma is defined on Z only, got dimension {}",
            b.dim()
        )));
    }
    let kernel = JGammaKernel::new(gamma)?;
    convolve_direct(b, &kernel, out)
}
