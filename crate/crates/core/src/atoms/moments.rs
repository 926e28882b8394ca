use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticeSignal};

/// A multi-index `beta = (beta_1, ..., beta_n)`.
pub type MultiIndex = Vec<u32>;

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange {
            name: "p",
            value: p,
            range: "(0, 1]",
        })
    }
}

/// `d_p = floor(n (1/p - 1))`, the highest vanishing moment degree.
///
/// Values within `1e-9` of an integer are snapped to it, so `p = 0.6, n = 3`
/// gives 2 regardless of how `1/0.6` rounds.
pub fn dp_degree(p: f64, n: usize) -> Result<u32> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let x = n as f64 * (1.0 / p - 1.0);
    let nearest = x.round();
    let d = if (x - nearest).abs() <= 1e-9 {
        nearest
    } else {
        x.floor()
    };
    if d > u32::MAX as f64 {
        return Err(Error::Overflow("computing d_p"));
    }
    Ok(d as u32)
}

/// `N = d_p + 1`, the order of the Taylor remainder used for atoms.
pub fn taylor_order(p: f64, n: usize) -> Result<u32> {
    Ok(dp_degree(p, n)? + 1)
}

/// `|beta| = beta_1 + ... + beta_n`.
pub fn degree(beta: &[u32]) -> u32 {
    beta.iter().sum()
}

/// `beta! = beta_1! ... beta_n!`.
pub fn factorial(beta: &[u32]) -> f64 {
    beta.iter()
        .map(|&b| (1..=b).map(f64::from).product::<f64>())
        .product()
}

/// `x^beta` for a real vector.
pub fn monomial(x: &[f64], beta: &[u32]) -> f64 {
    x.iter().zip(beta).map(|(v, &b)| v.powi(b as i32)).product()
}

/// All multi-indices of degree exactly `k` in `n` variables, in
/// lexicographically decreasing order.
pub fn multi_indices_of_degree(n: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(n, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// All multi-indices with `|beta| <= max_degree`, graded by degree.
pub fn multi_indices(n: usize, max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|k| multi_indices_of_degree(n, k))
        .collect()
}

/// `sum_j j^beta b(j)` over the support of `b`.
pub fn moment(b: &LatticeSignal, beta: &[u32]) -> Result<f64> {
    let origin = LatticePoint::origin(b.dim());
    centered_moment(b, beta, &origin)
}

/// `sum_j (j - center)^beta b(j)`.
pub fn centered_moment(b: &LatticeSignal, beta: &[u32], center: &LatticePoint) -> Result<f64> {
    crate::lattice::check_dim(b.dim(), beta.len())?;
    crate::lattice::check_dim(b.dim(), center.dim())?;
    let mut x = vec![0.0; b.dim()];
    Ok(b.iter()
        .map(|(j, v)| {
            for (l, slot) in x.iter_mut().enumerate() {
                *slot = (j.coords()[l] - center.coords()[l]) as f64;
            }
            monomial(&x, beta) * v
        })
        .sum())
}

/// The largest `N` such that every centered moment of degree `< N` vanishes
/// to within `tol * scale^{|beta|}`, searched up to `max_order`.
pub fn vanishing_order(
    b: &LatticeSignal,
    center: &LatticePoint,
    tol: f64,
    scale: f64,
    max_order: u32,
) -> Result<u32> {
    for k in 0..max_order {
        for beta in multi_indices_of_degree(b.dim(), k) {
            let mu = centered_moment(b, &beta, center)?;
            if mu.abs() > tol * scale.max(1.0).powi(k as i32) {
                return Ok(k);
            }
        }
    }
    Ok(max_order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp_examples() {
        assert_eq!(dp_degree(1.0, 3).unwrap(), 0);
        assert_eq!(dp_degree(0.5, 2).unwrap(), 2);
        assert_eq!(dp_degree(0.6, 3).unwrap(), 2);
        assert_eq!(dp_degree(0.8, 2).unwrap(), 0);
        assert_eq!(taylor_order(0.6, 1).unwrap(), 1);
        assert!(dp_degree(1.5, 1).is_err());
        assert!(dp_degree(0.0, 1).is_err());
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(1, 3).len(), 4);
        // binomial(n + d, d)
        assert_eq!(multi_indices(2, 2).len(), 6);
        assert_eq!(multi_indices(3, 2).len(), 10);
        assert_eq!(multi_indices_of_degree(2, 1), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(factorial(&[3, 2]), 12.0);
    }

    #[test]
    fn moment_examples() {
        let delta = LatticeSignal::delta(LatticePoint::from([0])).unwrap();
        assert_eq!(moment(&delta, &[0]).unwrap(), 1.0);
        assert_eq!(moment(&delta, &[2]).unwrap(), 0.0);
        let b = LatticeSignal::from_values(
            1,
            [
                (LatticePoint::from([-1]), 1.0 / 3.0),
                (LatticePoint::from([1]), -1.0 / 3.0),
            ],
        )
        .unwrap();
        assert_eq!(moment(&b, &[0]).unwrap(), 0.0);
        assert!((moment(&b, &[1]).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        let origin = LatticePoint::origin(1);
        assert_eq!(vanishing_order(&b, &origin, 1e-12, 1.0, 4).unwrap(), 1);
    }
}
