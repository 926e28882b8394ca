//! Lattice convolution `(K * b)(j) = sum_i K(j - i) b(i)`, by direct
//! summation and by zero-padded FFT.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::kernel::{EvaluationBox, LatticeKernel};
use crate::error::{Error, Result};
use crate::lattice::{check_dim, DenseGrid, LatticeBox, LatticeSignal};

/// Default cap on the padded FFT volume (points, not bytes).
pub const DEFAULT_FFT_BUDGET: usize = 1 << 25;

const CHUNK: usize = 256;

/// Largest difference box for which kernel values are tabulated up front.
const KERNEL_TABLE_LIMIT: usize = 1 << 24;

/// Exact finite sum over the support for every point of `out`.
pub fn convolve_direct<K: LatticeKernel>(
    b: &LatticeSignal,
    kernel: &K,
    out: &EvaluationBox,
) -> Result<DenseGrid> {
    check_dim(b.dim(), out.dim())?;
    let n = b.dim();
    let bounds = out.bounds();
    let (coords, vals) = b.flat_support();
    let mut data = vec![0.0; bounds.volume()];
    let Some(support) = b.support_box() else {
        return DenseGrid::from_data(bounds.clone(), data);
    };
    let diff_box = difference_box(&support, bounds);
    let table = (diff_box.volume() <= KERNEL_TABLE_LIMIT).then(|| {
        let mut t = Vec::with_capacity(diff_box.volume());
        diff_box.for_each_point(|v| t.push(kernel.value(v)));
        t
    });
    data.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(chunk_idx, chunk)| {
            let mut j = vec![0i64; n];
            let mut diff = vec![0i64; n];
            for (k, slot) in chunk.iter_mut().enumerate() {
                bounds.point_at(chunk_idx * CHUNK + k, &mut j);
                let mut acc = 0.0;
                for (s, &v) in vals.iter().enumerate() {
                    let i = &coords[s * n..(s + 1) * n];
                    for l in 0..n {
                        diff[l] = j[l] - i[l];
                    }
                    let kv = match &table {
                        Some(t) => t[diff_box.offset(&diff)],
                        None => kernel.value(&diff),
                    };
                    acc += v * kv;
                }
                *slot = acc;
            }
        });
    DenseGrid::from_data(bounds.clone(), data)
}

/// `[out_lo - support_hi, out_hi - support_lo]`, every `j - i` that occurs.
fn difference_box(support: &LatticeBox, out: &LatticeBox) -> LatticeBox {
    let lo = out
        .lo()
        .iter()
        .zip(support.hi())
        .map(|(a, b)| a - b)
        .collect();
    let hi = out
        .hi()
        .iter()
        .zip(support.lo())
        .map(|(a, b)| a - b)
        .collect();
    LatticeBox::new(lo, hi).expect("difference box is well formed")
}

/// Padded FFT geometry for convolving signals supported in a fixed box with
/// a kernel, sampled on an output box.
///
/// Axis `l` is padded to the next power of two at or above
/// `support_len + out_len - 1`, which keeps every wrapped-around term out of
/// the extracted output window.
pub struct FftPlan {
    support: LatticeBox,
    out: LatticeBox,
    padded: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl FftPlan {
    pub fn new(support: &LatticeBox, out: &EvaluationBox, budget: usize) -> Result<Self> {
        check_dim(support.dim(), out.dim())?;
        let ls = support.shape();
        let lo = out.bounds().shape();
        let padded: Vec<usize> = ls
            .iter()
            .zip(&lo)
            .map(|(a, b)| (a + b - 1).next_power_of_two())
            .collect();
        let volume = padded
            .iter()
            .try_fold(1usize, |acc, &p| acc.checked_mul(p))
            .ok_or(Error::Overflow("sizing an FFT buffer"))?;
        if volume > budget {
            return Err(Error::FftBudgetExceeded { volume, budget });
        }
        let mut planner = FftPlanner::new();
        let forward = padded
            .iter()
            .map(|&p| planner.plan_fft_forward(p))
            .collect();
        let inverse = padded
            .iter()
            .map(|&p| planner.plan_fft_inverse(p))
            .collect();
        Ok(Self {
            support: support.clone(),
            out: out.bounds().clone(),
            padded,
            forward,
            inverse,
        })
    }

    pub fn padded_shape(&self) -> &[usize] {
        &self.padded
    }

    fn volume(&self) -> usize {
        self.padded.iter().product()
    }

    fn padded_offset(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.padded)
            .fold(0, |acc, (&i, &p)| acc * p + i)
    }

    /// Spectrum of the kernel sampled on the difference box
    /// `[out_lo - support_hi, out_hi - support_lo]`.
    pub fn kernel_spectrum<K: LatticeKernel>(&self, kernel: &K) -> Vec<Complex<f64>> {
        let n = self.padded.len();
        let diff_box = difference_box(&self.support, &self.out);
        let vmin = diff_box.lo().to_vec();
        let mut buf = vec![Complex::new(0.0, 0.0); self.volume()];
        let mut idx = vec![0usize; n];
        diff_box.for_each_point(|v| {
            for l in 0..n {
                idx[l] = (v[l] - vmin[l]) as usize;
            }
            let off = self.padded_offset(&idx);
            buf[off] = Complex::new(kernel.value(v), 0.0);
        });
        self.transform(&mut buf, &self.forward);
        buf
    }

    /// Spectrum of `b`, whose support must lie in the plan's support box.
    pub fn signal_spectrum(&self, b: &LatticeSignal) -> Result<Vec<Complex<f64>>> {
        check_dim(self.support.dim(), b.dim())?;
        let n = self.padded.len();
        let mut buf = vec![Complex::new(0.0, 0.0); self.volume()];
        let mut idx = vec![0usize; n];
        for (p, v) in b.iter() {
            if !self.support.contains(p.coords()) {
                return Err(Error::InvalidArgument(format!(
                    "signal point {p:?} lies outside the planned support box"
                )));
            }
            for l in 0..n {
                idx[l] = (p.coords()[l] - self.support.lo()[l]) as usize;
            }
            let off = self.padded_offset(&idx);
            buf[off] = Complex::new(v, 0.0);
        }
        self.transform(&mut buf, &self.forward);
        Ok(buf)
    }

    /// Inverse transform of the pointwise product, restricted to the output box.
    pub fn convolve_spectra(&self, signal: &[Complex<f64>], kernel: &[Complex<f64>]) -> DenseGrid {
        let mut buf: Vec<Complex<f64>> = signal
            .par_iter()
            .zip(kernel.par_iter())
            .map(|(a, b)| a * b)
            .collect();
        self.transform(&mut buf, &self.inverse);
        let scale = 1.0 / self.volume() as f64;
        let n = self.padded.len();
        let ls = self.support.shape();
        let mut data = Vec::with_capacity(self.out.volume());
        let mut idx = vec![0usize; n];
        let out_lo = self.out.lo().to_vec();
        self.out.for_each_point(|j| {
            for l in 0..n {
                idx[l] = (j[l] - out_lo[l]) as usize + ls[l] - 1;
            }
            data.push(buf[self.padded_offset(&idx)].re * scale);
        });
        DenseGrid::from_data(self.out.clone(), data).expect("output volume matches")
    }

    /// In-place n-dimensional transform, one axis at a time.
    fn transform(&self, buf: &mut [Complex<f64>], plans: &[Arc<dyn Fft<f64>>]) {
        let n = self.padded.len();
        for axis in 0..n {
            let len = self.padded[axis];
            let inner: usize = self.padded[axis + 1..].iter().product();
            let fft = &plans[axis];
            if inner == 1 {
                buf.par_chunks_mut(len).for_each_init(
                    || vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()],
                    |scratch, row| fft.process_with_scratch(row, scratch),
                );
                continue;
            }
            let block = len * inner;
            let mut lines = vec![Complex::new(0.0, 0.0); block];
            for chunk in buf.chunks_mut(block) {
                // chunk is len x inner; transpose so each line is contiguous
                for r in 0..len {
                    for c in 0..inner {
                        lines[c * len + r] = chunk[r * inner + c];
                    }
                }
                lines.par_chunks_mut(len).for_each_init(
                    || vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()],
                    |scratch, row| fft.process_with_scratch(row, scratch),
                );
                for r in 0..len {
                    for c in 0..inner {
                        chunk[r * inner + c] = lines[c * len + r];
                    }
                }
            }
        }
    }
}

/// An [`FftPlan`] with a cached kernel spectrum, reusable across signals
/// sharing the same support box.
pub struct FftConvolver {
    plan: FftPlan,
    kernel: Vec<Complex<f64>>,
}

impl FftConvolver {
    pub fn new<K: LatticeKernel>(
        support: &LatticeBox,
        out: &EvaluationBox,
        kernel: &K,
        budget: usize,
    ) -> Result<Self> {
        let plan = FftPlan::new(support, out, budget)?;
        let kernel = plan.kernel_spectrum(kernel);
        Ok(Self { plan, kernel })
    }

    pub fn apply(&self, b: &LatticeSignal) -> Result<DenseGrid> {
        let spectrum = self.plan.signal_spectrum(b)?;
        Ok(self.plan.convolve_spectra(&spectrum, &self.kernel))
    }

    pub fn plan(&self) -> &FftPlan {
        &self.plan
    }
}

/// FFT convolution of a single signal; the zero signal gives a zero grid.
pub fn convolve_fft<K: LatticeKernel>(
    b: &LatticeSignal,
    kernel: &K,
    out: &EvaluationBox,
    budget: usize,
) -> Result<DenseGrid> {
    check_dim(b.dim(), out.dim())?;
    match b.support_box() {
        None => Ok(DenseGrid::zeros(out.bounds().clone())),
        Some(support) => FftConvolver::new(&support, out, kernel, budget)?.apply(b),
    }
}
