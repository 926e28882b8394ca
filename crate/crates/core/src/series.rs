//! Convergence bounds for `sum_{k != 0} |k|^{-(n+eps)}` and the elementary
//! lattice inequalities behind them.

use crate::error::{Error, Result};
use crate::lattice::{norm_sq, LatticePoint};

/// Truncation index for the one-dimensional zeta-type series.
pub const DEFAULT_ZETA_CUTOFF: u64 = 1_000_000;

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange {
            name: "epsilon",
            value: eps,
            range: "(0, inf)",
        })
    }
}

/// Upper bound for `sum_{k >= 1} k^{-s}`, `s > 1`: partial sum to `cutoff`
/// plus the integral tail `cutoff^{1-s}/(s-1)`.
///
/// The partial sum is accumulated from the small terms up and inflated by
/// `cutoff * EPSILON` so rounding cannot push the result below the true sum.
pub fn zeta_upper_bound(s: f64, cutoff: u64) -> Result<f64> {
    check_eps(s - 1.0)?;
    if cutoff == 0 {
        return Err(Error::InvalidArgument(
            "zeta cutoff must be positive".into(),
        ));
    }
    let partial: f64 = (1..=cutoff).rev().map(|k| (k as f64).powf(-s)).sum();
    let tail = (cutoff as f64).powf(1.0 - s) / (s - 1.0);
    Ok(partial * (1.0 + cutoff as f64 * f64::EPSILON) + tail)
}

/// `B(n, eps) = 2^n n^{n+eps} (1 + sum_{k>=1} k^{-1-eps/n})^n`.
///
/// Every quadratic partial sum of `sum_{k != 0} |k|^{-(n+eps)}` is at most
/// `B(n, eps)`, uniformly in the partial-sum index.
pub fn series_tail_bound(n: usize, eps: f64) -> Result<f64> {
    series_tail_bound_with_cutoff(n, eps, DEFAULT_ZETA_CUTOFF)
}

pub fn series_tail_bound_with_cutoff(n: usize, eps: f64, cutoff: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    check_eps(eps)?;
    let nf = n as f64;
    let zeta = zeta_upper_bound(1.0 + eps / nf, cutoff)?;
    Ok(2f64.powi(n as i32) * nf.powf(nf + eps) * (1.0 + zeta).powi(n as i32))
}

/// Upper bound for the far tail `sum_{|k|_inf > R} |k|^{-(n+eps)}`.
///
/// Shell `|k|_inf = r` holds at most `2n (2r+1)^{n-1}` points, each with
/// `|k| >= r`; comparing `sum_{r > R} r^{-1-eps}` with its integral gives
/// `2n (2 + 1/(R+1))^{n-1} R^{-eps} / eps`.
pub fn lattice_tail_bound(n: usize, eps: f64, radius: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    check_eps(eps)?;
    if radius == 0 {
        return Err(Error::InvalidArgument(
            "tail radius must be positive".into(),
        ));
    }
    let r = radius as f64;
    let growth = (2.0 + 1.0 / (r + 1.0)).powi(n as i32 - 1);
    Ok(2.0 * n as f64 * growth * r.powf(-eps) / eps)
}

/// The summand `k -> |k|^{-(n+eps)}`, zero at the origin.
pub fn inverse_power_term(n: usize, eps: f64) -> impl Fn(&[i64]) -> f64 + Copy {
    let half = -(n as f64 + eps) / 2.0;
    move |k: &[i64]| {
        let r2 = norm_sq(k);
        if r2 == 0.0 {
            0.0
        } else {
            r2.powf(half)
        }
    }
}

/// Truth values of the norm comparison `|k|_1 <= n |k|` and the multinomial
/// lower bound `|k|_1^{n+eps} >= prod_l max(1, |k_l|^{1+eps/n})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityCheck {
    pub norm_comparison: bool,
    pub multinomial: bool,
    /// `n |k| - |k|_1`, nonnegative when the first inequality holds.
    pub norm_margin: f64,
    /// `log(lhs) - log(rhs)` of the second inequality.
    pub multinomial_log_margin: f64,
}

/// Evaluates both inequalities at `k`, which must be nonzero.
///
/// Comparisons allow a relative slack of `1e-9`.
pub fn elementary_inequalities(k: &LatticePoint, eps: f64) -> Result<InequalityCheck> {
    if k.dim() == 0 {
        return Err(Error::ZeroDimension);
    }
    if k.is_origin() {
        return Err(Error::InvalidArgument(
            "the multinomial inequality needs k != 0".into(),
        ));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::ExponentOutOfRange {
            name: "epsilon",
            value: eps,
            range: "[0, inf)",
        });
    }
    let n = k.dim() as f64;
    let l1 = k.norm_l1() as f64;
    let l2 = k.norm();
    let norm_margin = n * l2 - l1;

    let lhs = (n + eps) * l1.ln();
    let rhs: f64 = k
        .coords()
        .iter()
        .map(|&c| {
            let a = c.unsigned_abs() as f64;
            if a > 1.0 {
                (1.0 + eps / n) * a.ln()
            } else {
                0.0
            }
        })
        .sum();
    let log_margin = lhs - rhs;

    Ok(InequalityCheck {
        norm_comparison: norm_margin >= -1e-9 * l1,
        multinomial: log_margin >= -1e-9 * lhs.abs().max(1.0),
        norm_margin,
        multinomial_log_margin: log_margin,
    })
}
