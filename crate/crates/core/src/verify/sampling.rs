use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::lattice::{DiscreteCube, LatticePoint, LatticeSignal};

/// Value distribution of a random test signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalKind {
    /// Uniform in `[-1, 1]`.
    Signed,
    /// Uniform in `[0, 1]`.
    NonNegative,
    /// Uniform in `[-1, 1]`, then shifted to sum to zero.
    MeanZero,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random signal on every point of `Q(0, radius)` in dimension `n`.
pub fn random_signal(n: usize, radius: u64, seed: u64, kind: SignalKind) -> Result<LatticeSignal> {
    let cube = DiscreteCube::centered(n, radius)?;
    let mut rng = rng(seed);
    let points = cube.points();
    let mut values: Vec<f64> = points
        .iter()
        .map(|_| match kind {
            SignalKind::NonNegative => rng.gen_range(0.0..=1.0),
            _ => rng.gen_range(-1.0..=1.0),
        })
        .collect();
    if kind == SignalKind::MeanZero {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        values.iter_mut().for_each(|v| *v -= mean);
    }
    LatticeSignal::from_values(n, points.into_iter().zip(values))
}

/// Support radius used for random signals: keeps `#supp` moderate as `n` grows.
pub fn default_support_radius(n: usize) -> u64 {
    match n {
        1 => 8,
        2 => 4,
        _ => 2,
    }
}

/// Uniform point with `lo < |j - center|_inf <= hi`.
pub fn point_in_shell(
    rng: &mut ChaCha8Rng,
    center: &LatticePoint,
    lo: u64,
    hi: u64,
) -> LatticePoint {
    debug_assert!(lo < hi);
    let h = hi as i64;
    loop {
        let v: Vec<i64> = (0..center.dim()).map(|_| rng.gen_range(-h..=h)).collect();
        let d = v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
        if d > lo {
            return &LatticePoint::new(v) + center;
        }
    }
}

/// Least-squares slope of `ln value` against `ln m`.
///
/// Any `+inf` value makes the slope `+inf`; other non-positive or
/// non-finite values give `NaN`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    if points.iter().any(|&(_, v)| v == f64::INFINITY) {
        return f64::INFINITY;
    }
    if points.len() < 2
        || points
            .iter()
            .any(|&(m, v)| !(m > 0.0 && v > 0.0 && v.is_finite()))
    {
        return f64::NAN;
    }
    let xs: Vec<f64> = points.iter().map(|(m, _)| m.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

/// `max / min` of the values; `+inf` if any value is infinite or zero.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 0.0 && max.is_finite() {
        max / min
    } else {
        f64::INFINITY
    }
}
