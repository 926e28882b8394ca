//! Rigorous bounds for `(sum_{|j-k0|_inf > R} |I_alpha a(j)|^q)^{1/q}`.
//!
//! Both bounds assume that the centered moments of degree `< N` vanish, which
//! is the defining property of the inputs; moments that are zero only up to
//! rounding are treated as zero.

use rayon::prelude::*;

use super::atom::Atom;
use super::moments::{centered_moment, degree, factorial, multi_indices_of_degree};
use super::taylor::{coefficient_sum, derivative_terms, eval_terms, remainder_constant, Term};
use crate::error::{Error, Result};
use crate::exponents::check_alpha;
use crate::lattice::{check_dim, DiscreteCube, LatticeBox, LatticeSignal};
use crate::series::lattice_tail_bound;

/// Cap on the number of points enumerated exactly by the multipole bound.
pub const MULTIPOLE_POINT_BUDGET: usize = 1 << 22;

const CHUNK: usize = 4096;

/// Smallest admissible tail radius, `4 floor(sqrt n) m + 1`.
pub fn tail_threshold(cube: &DiscreteCube) -> u64 {
    cube.far_field_dilation().radius() + 1
}

fn check_inputs(
    signal: &LatticeSignal,
    cube: &DiscreteCube,
    alpha: f64,
    q: f64,
    radius: u64,
    order: u32,
) -> Result<f64> {
    let n = cube.dim();
    check_dim(n, signal.dim())?;
    check_alpha(n, alpha)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::ExponentOutOfRange {
            name: "q",
            value: q,
            range: "(0, inf)",
        });
    }
    let threshold = tail_threshold(cube);
    if radius < threshold {
        return Err(Error::TailRadiusTooSmall { radius, threshold });
    }
    let value = q * (n as f64 + order as f64 - alpha);
    if value <= n as f64 {
        return Err(Error::DivergentTail { value, n });
    }
    Ok(value - n as f64)
}

/// `||a||_1 K (sqrt(n) m)^N (sum_{|v|_inf > R} |v|^{-q(n+N-alpha)})^{1/q}`
/// for a signal supported in `cube` whose moments of degree `< order` vanish.
pub fn remainder_tail_lq_bound(
    signal: &LatticeSignal,
    cube: &DiscreteCube,
    alpha: f64,
    q: f64,
    radius: u64,
    order: u32,
) -> Result<f64> {
    let eps = check_inputs(signal, cube, alpha, q, radius, order)?;
    if signal.is_zero() {
        return Ok(0.0);
    }
    let n = cube.dim();
    let l1: f64 = signal.iter().map(|(_, v)| v.abs()).sum();
    let amplitude = l1
        * remainder_constant(n, alpha, order)
        * ((n as f64).sqrt() * cube.radius() as f64).powi(order as i32);
    Ok(amplitude * lattice_tail_bound(n, eps, radius)?.powf(1.0 / q))
}

/// [`remainder_tail_lq_bound`] for an atom, with `N = d_p + 1`.
pub fn atom_tail_lq_bound(atom: &Atom, alpha: f64, q: f64, radius: u64) -> Result<f64> {
    remainder_tail_lq_bound(atom.signal(), atom.cube(), alpha, q, radius, atom.order())
}

/// Sharper tail bound keeping the exact moment terms of degree `N` and `N+1`.
///
/// For `|j - k0|_inf > R` write `I_alpha a(j) = P(j) + E(j)` with
/// `P(j) = sum_{N <= |beta| <= N+1} D^beta f(k0) mu_beta / beta!` and
/// `|E(j)| <= A_{N+2}/(N+2)! 2^{N+2+n-alpha} sum_i |a(i)| |i-k0|_1^{N+2} |j-k0|^{alpha-n-N-2}`.
/// `(|P| + |E|)^q` is summed exactly on `R < |j-k0|_inf <= R2` and bounded
/// by a power of `|j - k0|` beyond `R2`.
pub fn multipole_tail_lq_bound(
    signal: &LatticeSignal,
    cube: &DiscreteCube,
    alpha: f64,
    q: f64,
    radius: u64,
    order: u32,
) -> Result<f64> {
    let eps = check_inputs(signal, cube, alpha, q, radius, order)?;
    if signal.is_zero() {
        return Ok(0.0);
    }
    let n = cube.dim();
    let nf = n as f64;
    let s = alpha - nf;
    let outer = outer_radius(n, radius);

    // (coefficient mu_beta / beta!, terms of D^beta f) for N <= |beta| <= N+1
    let mut multipoles: Vec<(f64, Vec<Term>)> = Vec::new();
    let mut far_amplitude = 0.0;
    for k in order..=order + 1 {
        let a_k = coefficient_sum(n, s, k);
        for beta in multi_indices_of_degree(n, k) {
            let c = centered_moment(signal, &beta, cube.center())? / factorial(&beta);
            far_amplitude += a_k * c.abs() / (outer as f64).powi((degree(&beta) - order) as i32);
            multipoles.push((c, derivative_terms(s, &beta)));
        }
    }
    let high = order + 2;
    let center = cube.center().coords();
    let weight: f64 = signal
        .iter()
        .map(|(i, v)| {
            let h: i64 = i
                .coords()
                .iter()
                .zip(center)
                .map(|(a, b)| (a - b).abs())
                .sum();
            v.abs() * (h as f64).powi(high as i32)
        })
        .sum();
    let fact: f64 = (1..=high).map(f64::from).product();
    let error_amplitude =
        coefficient_sum(n, s, high) / fact * 2f64.powf(high as f64 + nf - alpha) * weight;
    far_amplitude += error_amplitude / (outer as f64).powi(2);

    let r = outer as i64;
    let bounds = LatticeBox::new(vec![-r; n], vec![r; n])?;
    let volume = bounds.volume();
    let chunks = volume.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut v = vec![0i64; n];
            let mut x = vec![0.0f64; n];
            let mut acc = 0.0;
            for idx in c * CHUNK..((c + 1) * CHUNK).min(volume) {
                bounds.point_at(idx, &mut v);
                if crate::lattice::norm_inf(&v) <= radius {
                    continue;
                }
                // derivatives of |x - j|^s are taken at x = k0, i.e. at k0 - j = -v
                let mut r2 = 0.0;
                for l in 0..n {
                    x[l] = -(v[l] as f64);
                    r2 += x[l] * x[l];
                }
                let p: f64 = multipoles.iter().map(|(c, t)| c * eval_terms(t, &x)).sum();
                let e = error_amplitude * r2.powf((s - high as f64) / 2.0);
                acc += (p.abs() + e).powf(q);
            }
            acc
        })
        .collect();
    let near: f64 = partial.iter().sum();
    let far = far_amplitude.powf(q) * lattice_tail_bound(n, eps, outer)?;
    Ok((near + far).powf(1.0 / q))
}

/// `4R`, reduced so that the enumerated box stays within the point budget.
fn outer_radius(n: usize, radius: u64) -> u64 {
    let mut outer = radius.saturating_mul(4);
    while outer > radius {
        let side = (2 * outer + 1) as f64;
        if side.powi(n as i32) <= MULTIPOLE_POINT_BUDGET as f64 {
            break;
        }
        outer = radius.max(outer * 3 / 4);
    }
    outer
}

/// The smaller of [`remainder_tail_lq_bound`] and [`multipole_tail_lq_bound`].
pub fn best_tail_lq_bound(
    signal: &LatticeSignal,
    cube: &DiscreteCube,
    alpha: f64,
    q: f64,
    radius: u64,
    order: u32,
) -> Result<f64> {
    let simple = remainder_tail_lq_bound(signal, cube, alpha, q, radius, order)?;
    let refined = multipole_tail_lq_bound(signal, cube, alpha, q, radius, order)?;
    Ok(simple.min(refined))
}
