//! `l^p` quasi-norms and partial sums of multiple series.

use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::lattice::{LatticeBox, LatticeSignal};

/// `||b||_p = (sum |b(i)|^p)^{1/p}`, or `sup |b(i)|` for `p = inf`.
///
/// The sum is exact over the finite support; values are rescaled by the
/// maximum first so large exponents neither overflow nor underflow early.
pub fn lp_norm(b: &LatticeSignal, p: Exponent) -> f64 {
    let values: Vec<f64> = b.iter().map(|(_, v)| v).collect();
    lp_norm_values(&values, p)
}

/// [`lp_norm`] on a bare slice of values.
pub fn lp_norm_values(values: &[f64], p: Exponent) -> f64 {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    match p {
        Exponent::Infinity => max,
        Exponent::Finite(_) if max == 0.0 || !max.is_finite() => max,
        Exponent::Finite(p) => {
            let sum: f64 = values.iter().map(|v| (v.abs() / max).powf(p)).sum();
            max * sum.powf(1.0 / p)
        }
    }
}

/// `sum |b(i)|^p` for finite `p`, the `p`-th power of the quasi-norm.
pub fn lp_power_sum(values: &[f64], p: f64) -> f64 {
    values.iter().map(|v| v.abs().powf(p)).sum()
}

/// Which exhaustion of `Z^n` a partial sum uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartialSumMode {
    /// `S_N`: points with `|k|_inf <= N`.
    Quadratic,
    /// `S~_N`: points with `|k| <= N`.
    Circular,
}

fn check_box_volume(n: usize, radius: u64) -> Result<LatticeBox> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let side = radius
        .checked_mul(2)
        .and_then(|s| s.checked_add(1))
        .ok_or(Error::Overflow("sizing a partial-sum box"))?;
    (0..n)
        .try_fold(1u64, |acc, _| acc.checked_mul(side))
        .filter(|&v| v <= usize::MAX as u64)
        .ok_or(Error::Overflow("sizing a partial-sum box"))?;
    let r = i64::try_from(radius).map_err(|_| Error::Overflow("sizing a partial-sum box"))?;
    LatticeBox::new(vec![-r; n], vec![r; n])
}

/// Smallest integer `r` with `s <= r^2`.
fn ceil_sqrt(s: u64) -> u64 {
    let mut r = (s as f64).sqrt().ceil() as u64;
    while r.saturating_mul(r) < s {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= s {
        r -= 1;
    }
    r
}

/// The `N`-th quadratic or circular partial sum of `sum_k term(k)`.
pub fn partial_sum<F>(n: usize, big_n: u64, mode: PartialSumMode, term: F) -> Result<f64>
where
    F: Fn(&[i64]) -> f64,
{
    if big_n == 0 {
        return Err(Error::InvalidArgument(
            "partial sum index N must be positive".into(),
        ));
    }
    let sums = partial_sums(n, big_n, mode, term)?;
    Ok(sums[big_n as usize])
}

/// All partial sums `S_0, ..., S_max` in one pass over the box `|k|_inf <= max`.
///
/// For circular mode, index `r` holds the sum over `|k| <= r` restricted to
/// that box, which is the full circular sum because `|k|_inf <= |k|`.
pub fn partial_sums<F>(n: usize, max: u64, mode: PartialSumMode, term: F) -> Result<Vec<f64>>
where
    F: Fn(&[i64]) -> f64,
{
    let bounds = check_box_volume(n, max)?;
    let mut shells = vec![0.0; max as usize + 1];
    bounds.for_each_point(|k| {
        let r = match mode {
            PartialSumMode::Quadratic => crate::lattice::norm_inf(k),
            PartialSumMode::Circular => {
                let s: u64 = k.iter().map(|&c| (c * c) as u64).sum();
                ceil_sqrt(s)
            }
        };
        if r <= max {
            shells[r as usize] += term(k);
        }
    });
    let mut acc = 0.0;
    Ok(shells
        .into_iter()
        .map(|s| {
            acc += s;
            acc
        })
        .collect())
}

/// Iterated sum `sum_{|k_n| <= N} ... sum_{|k_1| <= N} term(k)`, innermost axis first.
pub fn iterated_sum<F>(n: usize, big_n: u64, term: F) -> Result<f64>
where
    F: Fn(&[i64]) -> f64,
{
    check_box_volume(n, big_n)?;
    let r = big_n as i64;
    let mut k = vec![0i64; n];
    fn level<F: Fn(&[i64]) -> f64>(axis: usize, r: i64, k: &mut [i64], term: &F) -> f64 {
        let mut s = 0.0;
        for c in -r..=r {
            k[axis] = c;
            s += if axis == 0 {
                term(k)
            } else {
                level(axis - 1, r, k, term)
            };
        }
        s
    }
    Ok(level(n - 1, r, &mut k, &term))
}
