//! Discrete Poisson kernel, its radial maximal function on a geometric
//! `t`-grid, and the resulting `H^p` quasi-norm estimate.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::convolve::{convolve_direct, FftPlan, DEFAULT_FFT_BUDGET};
use super::kernel::{EvaluationBox, LatticeKernel};
use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::lattice::{check_dim, norm_sq, DenseGrid, LatticeSignal};
use crate::norms::lp_norm_values;

/// `Gamma(k/2)` for a positive integer `k`.
fn gamma_half(k: u32) -> f64 {
    debug_assert!(k > 0);
    let (mut x, mut acc) = if k % 2 == 0 {
        (1.0, 1.0)
    } else {
        (0.5, PI.sqrt())
    };
    while x < k as f64 / 2.0 {
        acc *= x;
        x += 1.0;
    }
    acc
}

/// `C_n = Gamma((n+1)/2) / pi^{(n+1)/2}`.
pub fn poisson_constant(n: usize) -> f64 {
    let k = n as u32 + 1;
    gamma_half(k) / PI.powf(k as f64 / 2.0)
}

/// `P_t(j) = C_n t / (t^2 + |j|^2)^{(n+1)/2}` for `j != 0`, `P_t(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonKernel {
    t: f64,
    n: usize,
    c_n: f64,
}

impl PoissonKernel {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Poisson scale t = {t} must be positive"
            )));
        }
        Ok(Self {
            t,
            n,
            c_n: poisson_constant(n),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

impl LatticeKernel for PoissonKernel {
    fn value(&self, v: &[i64]) -> f64 {
        let r2 = norm_sq(v);
        if r2 == 0.0 {
            0.0
        } else {
            self.c_n * self.t * (self.t * self.t + r2).powf(-(self.n as f64 + 1.0) / 2.0)
        }
    }
}

/// Geometric grid `t_k = 2^{k/sigma}`, `k_min <= k <= k_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TGrid {
    resolution: u32,
    k_min: i64,
    k_max: i64,
}

/// Points per octave used by default.
pub const DEFAULT_T_RESOLUTION: u32 = 8;

impl TGrid {
    pub fn new(resolution: u32, k_min: i64, k_max: i64) -> Result<Self> {
        if resolution == 0 || k_min > k_max {
            return Err(Error::EmptyGrid);
        }
        Ok(Self {
            resolution,
            k_min,
            k_max,
        })
    }

    /// Whole octaves covering `[1/(4R), 4R]`. The octave endpoints do not
    /// depend on `resolution`, so doubling it refines the same grid.
    pub fn covering(box_radius: u64, resolution: u32) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::EmptyGrid);
        }
        let top = (4.0 * box_radius.max(1) as f64).log2().ceil() as i64;
        let sigma = resolution as i64;
        Self::new(resolution, -top * sigma, top * sigma)
    }

    /// The same range with twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            resolution: self.resolution * 2,
            k_min: self.k_min * 2,
            k_max: self.k_max * 2,
        }
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn values(&self) -> Vec<f64> {
        let sigma = self.resolution as f64;
        (self.k_min..=self.k_max)
            .map(|k| (k as f64 / sigma).exp2())
            .collect()
    }
}

/// `max_{t in grid} |(P_t * b)(j)|` on `out`: a lower approximation of the
/// radial maximal function that can only grow as the grid is refined.
pub fn poisson_maximal(b: &LatticeSignal, grid: &TGrid, out: &EvaluationBox) -> Result<DenseGrid> {
    check_dim(b.dim(), out.dim())?;
    let n = b.dim();
    let ts = grid.values();
    if ts.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let Some(support) = b.support_box() else {
        return Ok(DenseGrid::zeros(out.bounds().clone()));
    };
    let work = support.volume().saturating_mul(out.bounds().volume());
    let mut best = vec![0.0f64; out.bounds().volume()];
    if work <= 1 << 20 {
        for &t in &ts {
            let conv = convolve_direct(b, &PoissonKernel::new(n, t)?, out)?;
            merge_abs_max(&mut best, conv.values());
        }
    } else {
        let plan = FftPlan::new(&support, out, DEFAULT_FFT_BUDGET)?;
        let spectrum = plan.signal_spectrum(b)?;
        for &t in &ts {
            let kernel = plan.kernel_spectrum(&PoissonKernel::new(n, t)?);
            let conv = plan.convolve_spectra(&spectrum, &kernel);
            merge_abs_max(&mut best, conv.values());
        }
    }
    DenseGrid::from_data(out.bounds().clone(), best)
}

fn merge_abs_max(best: &mut [f64], values: &[f64]) {
    best.par_iter_mut()
        .zip(values.par_iter())
        .for_each(|(b, v)| *b = b.max(v.abs()));
}

/// `||b||_p + ||poisson_maximal(b)||_{l^p(out)}` for `0 < p <= 1`.
///
/// Both the box and the grid truncate the true quasi-norm, so this is an
/// estimate from below.
pub fn hp_norm_estimate(
    b: &LatticeSignal,
    p: f64,
    grid: &TGrid,
    out: &EvaluationBox,
) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::ExponentOutOfRange {
            name: "p",
            value: p,
            range: "(0, 1]",
        });
    }
    let exp = Exponent::Finite(p);
    let values: Vec<f64> = b.iter().map(|(_, v)| v).collect();
    let maximal = poisson_maximal(b, grid, out)?;
    Ok(lp_norm_values(&values, exp) + lp_norm_values(maximal.values(), exp))
}
