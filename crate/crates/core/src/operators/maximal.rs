//! Centered fractional maximal operator
//! `(M_alpha b)(j) = sup_m (2m+1)^{-(n - alpha)} sum_{|i - j|_inf <= m} |b(i)|`.
//!
//! For a finitely supported `b` the numerator stops growing once the cube
//! covers the support while the denominator keeps increasing, so the
//! supremum is a maximum over `m <= m_cover(j)` and is computed exactly.

use rayon::prelude::*;

use super::kernel::EvaluationBox;
use crate::error::{Error, Result};
use crate::exponents::Exponents;
use crate::lattice::{check_dim, DenseGrid, LatticePoint, LatticeSignal};

/// The maximal value at a point and the smallest radius attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaximalValue {
    pub value: f64,
    pub radius: u64,
}

fn check_fractional_alpha(n: usize, alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha < n as f64 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, n)",
        })
    }
}

/// Support of `|b|` in flat form.
struct AbsSupport {
    n: usize,
    coords: Vec<i64>,
    vals: Vec<f64>,
}

impl AbsSupport {
    fn new(b: &LatticeSignal) -> Self {
        let (coords, vals) = b.flat_support();
        Self {
            n: b.dim(),
            coords,
            vals: vals.into_iter().map(f64::abs).collect(),
        }
    }

    fn evaluate(&self, alpha: f64, j: &[i64], shells: &mut Vec<f64>) -> MaximalValue {
        let n = self.n;
        if self.vals.is_empty() {
            return MaximalValue {
                value: 0.0,
                radius: 0,
            };
        }
        let dist = |s: usize| -> u64 {
            self.coords[s * n..(s + 1) * n]
                .iter()
                .zip(j)
                .map(|(a, b)| (a - b).unsigned_abs())
                .max()
                .unwrap_or(0)
        };
        let mut dmin = u64::MAX;
        let mut dmax = 0;
        for s in 0..self.vals.len() {
            let d = dist(s);
            dmin = dmin.min(d);
            dmax = dmax.max(d);
        }
        shells.clear();
        shells.resize((dmax - dmin + 1) as usize, 0.0);
        for (s, &v) in self.vals.iter().enumerate() {
            shells[(dist(s) - dmin) as usize] += v;
        }
        let power = n as f64 - alpha;
        let mut best = MaximalValue {
            value: 0.0,
            radius: dmin,
        };
        let mut acc = 0.0;
        for (k, &shell) in shells.iter().enumerate() {
            acc += shell;
            let m = dmin + k as u64;
            let avg = acc / ((2 * m + 1) as f64).powf(power);
            if avg > best.value {
                best = MaximalValue {
                    value: avg,
                    radius: m,
                };
            }
        }
        best
    }
}

/// `(M_alpha b)(j)` for `0 <= alpha < n`; `M_0` is the centered maximal operator.
pub fn maximal(b: &LatticeSignal, alpha: f64, j: &LatticePoint) -> Result<f64> {
    Ok(maximal_detail(b, alpha, j)?.value)
}

/// Like [`maximal`], also reporting the smallest maximizing radius.
pub fn maximal_detail(b: &LatticeSignal, alpha: f64, j: &LatticePoint) -> Result<MaximalValue> {
    check_dim(b.dim(), j.dim())?;
    check_fractional_alpha(b.dim(), alpha)?;
    Ok(AbsSupport::new(b).evaluate(alpha, j.coords(), &mut Vec::new()))
}

/// `M_alpha b` on every point of `out`.
pub fn maximal_on_box(b: &LatticeSignal, alpha: f64, out: &EvaluationBox) -> Result<DenseGrid> {
    check_dim(b.dim(), out.dim())?;
    check_fractional_alpha(b.dim(), alpha)?;
    let support = AbsSupport::new(b);
    let bounds = out.bounds();
    let n = b.dim();
    let mut data = vec![0.0; bounds.volume()];
    data.par_chunks_mut(256).enumerate().for_each(|(c, chunk)| {
        let mut j = vec![0i64; n];
        let mut shells = Vec::new();
        for (k, slot) in chunk.iter_mut().enumerate() {
            bounds.point_at(c * 256 + k, &mut j);
            *slot = support.evaluate(alpha, &j, &mut shells).value;
        }
    });
    DenseGrid::from_data(bounds.clone(), data)
}

/// Both sides of the pointwise Hoelder estimate
/// `M_alpha b(j) <= [M(|b|^{(p/q) n/(n-alpha)})(j)]^{(n-alpha)/n} ||b||_p^{p alpha/n}`.
///
/// Requires `1 < p < n/alpha` with `q` from the Sobolev relation.
pub fn holder_pointwise_pair(
    b: &LatticeSignal,
    exps: &Exponents,
    j: &LatticePoint,
) -> Result<(f64, f64)> {
    check_dim(b.dim(), exps.n())?;
    let n = exps.n() as f64;
    let (p, q, alpha) = (exps.p(), exps.q(), exps.alpha());
    if !(p > 1.0 && p < n / alpha) {
        return Err(Error::ExponentOutOfRange {
            name: "p",
            value: p,
            range: "(1, n/alpha)",
        });
    }
    let lhs = maximal(b, alpha, j)?;
    let r = (p / q) * (n / (n - alpha));
    let powered = b.map(|v| v.abs().powf(r));
    let mass: f64 = b.iter().map(|(_, v)| v.abs().powf(p)).sum();
    let rhs = maximal(&powered, 0.0, j)?.powf((n - alpha) / n) * mass.powf(alpha / n);
    Ok((lhs, rhs))
}
