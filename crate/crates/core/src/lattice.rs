//! Lattice points, discrete cubes and finite-support signals on `Z^n`.
//!
//! Signals are stored sparsely as an ordered point-to-value map. Dense views
//! ([`DenseGrid`]) over rectangular boxes are used wherever an operator needs
//! array access, e.g. for FFT convolution or for materialized operator output.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// A point `k = (k_1, ..., k_n)` of the integer lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Self(coords.into())
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The unit vector `e_axis` in dimension `n`.
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut coords = vec![0; n];
        coords[axis] = 1;
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `|k|_inf = max |k_l|`.
    pub fn norm_inf(&self) -> u64 {
        norm_inf(&self.0)
    }

    /// `|k|_1 = sum |k_l|`.
    pub fn norm_l1(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// Euclidean norm `|k|`.
    pub fn norm(&self) -> f64 {
        norm_sq(&self.0).sqrt()
    }

    pub fn scaled(&self, factor: i64) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(coords: [i64; N]) -> Self {
        Self(coords.to_vec())
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        Self(coords)
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;

    fn add(self, rhs: Self) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;

    fn sub(self, rhs: Self) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

pub(crate) fn norm_inf(v: &[i64]) -> u64 {
    v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
}

pub(crate) fn norm_sq(v: &[i64]) -> f64 {
    v.iter().map(|&c| (c as f64) * (c as f64)).sum()
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Rectangular box `prod_l [lo_l, hi_l]` of lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl LatticeBox {
    /// Builds a box from inclusive per-axis bounds. Empty axes are rejected.
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_dim(lo.len(), hi.len())?;
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidArgument(format!(
                "box bounds {lo:?}..{hi:?} are reversed"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Side lengths `hi_l - lo_l + 1`.
    pub fn shape(&self) -> Vec<usize> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a + 1) as usize)
            .collect()
    }

    pub fn volume(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (a, b))| a <= x && x <= b)
    }

    /// Visits every point in row-major order (last axis fastest).
    pub fn for_each_point(&self, mut f: impl FnMut(&[i64])) {
        let mut p = self.lo.clone();
        loop {
            f(&p);
            let mut axis = self.dim();
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                if p[axis] < self.hi[axis] {
                    p[axis] += 1;
                    break;
                }
                p[axis] = self.lo[axis];
            }
        }
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.volume());
        self.for_each_point(|p| out.push(LatticePoint::new(p)));
        out
    }

    /// Linear row-major offset of `p`, which must lie in the box.
    pub(crate) fn offset(&self, p: &[i64]) -> usize {
        let mut idx = 0usize;
        for l in 0..self.dim() {
            let len = (self.hi[l] - self.lo[l] + 1) as usize;
            idx = idx * len + (p[l] - self.lo[l]) as usize;
        }
        idx
    }

    /// Inverse of [`offset`](Self::offset).
    pub(crate) fn point_at(&self, mut idx: usize, out: &mut [i64]) {
        for l in (0..self.dim()).rev() {
            let len = (self.hi[l] - self.lo[l] + 1) as usize;
            out[l] = self.lo[l] + (idx % len) as i64;
            idx /= len;
        }
    }

    /// Smallest radius `m` with the box inside `Q(p, m)`.
    pub(crate) fn covering_radius(&self, p: &[i64]) -> u64 {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&x, (&a, &b))| (x - a).unsigned_abs().max((b - x).unsigned_abs()))
            .max()
            .unwrap_or(0)
    }
}

/// Centered discrete cube `Q(k0, m) = prod_l [k0_l - m, k0_l + m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteCube {
    center: LatticePoint,
    radius: u64,
}

impl DiscreteCube {
    pub fn new(center: LatticePoint, radius: u64) -> Result<Self> {
        if center.dim() == 0 {
            return Err(Error::ZeroDimension);
        }
        if radius > i64::MAX as u64 / 4 {
            return Err(Error::Overflow("building a cube"));
        }
        Ok(Self { center, radius })
    }

    /// `Q(0, m)` in dimension `n`.
    pub fn centered(n: usize, radius: u64) -> Result<Self> {
        Self::new(LatticePoint::origin(n), radius)
    }

    pub fn center(&self) -> &LatticePoint {
        &self.center
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// `#Q = (2m+1)^n`, checked for overflow.
    pub fn cardinality(&self) -> Result<u64> {
        let side = 2 * self.radius + 1;
        (0..self.dim()).try_fold(1u64, |acc, _| {
            acc.checked_mul(side)
                .ok_or(Error::Overflow("computing a cube cardinality"))
        })
    }

    /// `#Q` as a float, for normalizations.
    pub fn cardinality_f64(&self) -> f64 {
        ((2 * self.radius + 1) as f64).powi(self.dim() as i32)
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim() && (p - &self.center).norm_inf() <= self.radius
    }

    /// Same center, radius multiplied by `factor`.
    pub fn dilate(&self, factor: i64) -> Result<Self> {
        if factor < 0 {
            return Err(Error::InvalidArgument(format!(
                "dilation factor {factor} is negative"
            )));
        }
        let radius = self
            .radius
            .checked_mul(factor as u64)
            .ok_or(Error::Overflow("dilating a cube"))?;
        Self::new(self.center.clone(), radius)
    }

    /// The dilation factor `4 floor(sqrt(n))` separating near and far field.
    pub fn far_field_factor(n: usize) -> u64 {
        4 * (n as f64).sqrt().floor() as u64
    }

    /// `4 floor(sqrt(n)) Q`.
    pub fn far_field_dilation(&self) -> Self {
        let factor = Self::far_field_factor(self.dim());
        Self {
            center: self.center.clone(),
            radius: self.radius * factor,
        }
    }

    pub fn as_box(&self) -> LatticeBox {
        let m = self.radius as i64;
        LatticeBox {
            lo: self.center.coords().iter().map(|c| c - m).collect(),
            hi: self.center.coords().iter().map(|c| c + m).collect(),
        }
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        self.as_box().points()
    }
}

/// Real-valued function on `Z^n` with finite support.
///
/// Zero values are never stored, so `support_len` counts the true support.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSignal {
    dim: usize,
    values: BTreeMap<LatticePoint, f64>,
}

impl LatticeSignal {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            dim,
            values: BTreeMap::new(),
        })
    }

    /// Builds a signal from `(point, value)` pairs; repeated points are summed.
    pub fn from_values<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, f64)>,
    {
        let mut signal = Self::zero(dim)?;
        for (point, value) in entries {
            check_dim(dim, point.dim())?;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    point: point.coords().to_vec(),
                });
            }
            *signal.values.entry(point).or_insert(0.0) += value;
        }
        signal.values.retain(|_, v| *v != 0.0);
        Ok(signal)
    }

    /// `delta_k`: value 1 at `point`.
    pub fn delta(point: LatticePoint) -> Result<Self> {
        let dim = point.dim();
        Self::from_values(dim, [(point, 1.0)])
    }

    /// Characteristic sequence of a cube.
    pub fn indicator(cube: &DiscreteCube) -> Self {
        let mut values = BTreeMap::new();
        cube.as_box().for_each_point(|p| {
            values.insert(LatticePoint::new(p), 1.0);
        });
        Self {
            dim: cube.dim(),
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, point: &LatticePoint) -> f64 {
        self.values.get(point).copied().unwrap_or(0.0)
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Nonzero entries in lattice order.
    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, f64)> + '_ {
        self.values.iter().map(|(p, v)| (p, *v))
    }

    /// Tight rectangular bounding box of the support, `None` for the zero signal.
    pub fn support_box(&self) -> Option<LatticeBox> {
        let mut iter = self.values.keys();
        let first = iter.next()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for p in iter {
            for (l, &c) in p.coords().iter().enumerate() {
                lo[l] = lo[l].min(c);
                hi[l] = hi[l].max(c);
            }
        }
        Some(LatticeBox { lo, hi })
    }

    /// Smallest centered cube containing the support (the origin cube of
    /// radius 0 for the zero signal).
    pub fn support_cube(&self) -> DiscreteCube {
        match self.support_box() {
            None => DiscreteCube {
                center: LatticePoint::origin(self.dim),
                radius: 0,
            },
            Some(b) => {
                let center: Vec<i64> =
                    b.lo.iter()
                        .zip(&b.hi)
                        .map(|(a, c)| a + (c - a) / 2)
                        .collect();
                let radius = b.covering_radius(&center);
                DiscreteCube {
                    center: LatticePoint::new(center),
                    radius,
                }
            }
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        if c == 0.0 {
            out.values.clear();
        } else {
            out.values.values_mut().for_each(|v| *v *= c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (p, v) in &other.values {
            *out.values.entry(p.clone()).or_insert(0.0) += v;
        }
        out.values.retain(|_, v| *v != 0.0);
        Ok(out)
    }

    /// Pointwise `|b|`.
    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    /// Applies `f` to every stored value; `f` must send 0 to 0.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        out.values.values_mut().for_each(|v| *v = f(*v));
        out.values.retain(|_, v| *v != 0.0);
        out
    }

    /// `b(. - shift)`.
    pub fn translate(&self, shift: &LatticePoint) -> Result<Self> {
        check_dim(self.dim, shift.dim())?;
        Ok(Self {
            dim: self.dim,
            values: self.values.iter().map(|(p, v)| (p + shift, *v)).collect(),
        })
    }

    /// Dense copy over `bounds`; values outside the box are dropped.
    pub fn to_dense(&self, bounds: &LatticeBox) -> Result<DenseGrid> {
        check_dim(self.dim, bounds.dim())?;
        let mut grid = DenseGrid::zeros(bounds.clone());
        for (p, v) in &self.values {
            if bounds.contains(p.coords()) {
                let idx = bounds.offset(p.coords());
                grid.data[idx] = *v;
            }
        }
        Ok(grid)
    }

    /// Flat `(coords, value)` arrays used by the direct summation kernels.
    pub(crate) fn flat_support(&self) -> (Vec<i64>, Vec<f64>) {
        let mut coords = Vec::with_capacity(self.values.len() * self.dim);
        let mut vals = Vec::with_capacity(self.values.len());
        for (p, v) in &self.values {
            coords.extend_from_slice(p.coords());
            vals.push(*v);
        }
        (coords, vals)
    }
}

/// Values of a function on a rectangular box, row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseGrid {
    bounds: LatticeBox,
    data: Vec<f64>,
}

impl DenseGrid {
    pub fn zeros(bounds: LatticeBox) -> Self {
        let data = vec![0.0; bounds.volume()];
        Self { bounds, data }
    }

    pub fn from_data(bounds: LatticeBox, data: Vec<f64>) -> Result<Self> {
        if data.len() != bounds.volume() {
            return Err(Error::InvalidArgument(format!(
                "grid data has {} values for a box of volume {}",
                data.len(),
                bounds.volume()
            )));
        }
        Ok(Self { bounds, data })
    }

    pub fn bounds(&self) -> &LatticeBox {
        &self.bounds
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// Value at `p`, or `None` when `p` lies outside the box.
    pub fn get(&self, p: &LatticePoint) -> Option<f64> {
        self.bounds
            .contains(p.coords())
            .then(|| self.data[self.bounds.offset(p.coords())])
    }

    /// Visits `(point, value)` in row-major order.
    pub fn for_each(&self, mut f: impl FnMut(&[i64], f64)) {
        let mut i = 0;
        let data = &self.data;
        self.bounds.for_each_point(|p| {
            f(p, data[i]);
            i += 1;
        });
    }

    /// Sparse signal holding the nonzero grid values.
    pub fn to_signal(&self) -> LatticeSignal {
        let mut values = BTreeMap::new();
        self.for_each(|p, v| {
            if v != 0.0 {
                values.insert(LatticePoint::new(p), v);
            }
        });
        LatticeSignal {
            dim: self.dim(),
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_cardinality_and_dilation() {
        let q = DiscreteCube::centered(2, 1).unwrap();
        assert_eq!(q.cardinality().unwrap(), 9);
        assert_eq!(q.points().len(), 9);

        let q = DiscreteCube::centered(1, 3).unwrap();
        let d = q.dilate(DiscreteCube::far_field_factor(1) as i64).unwrap();
        assert_eq!(d.radius(), 12);
        assert_eq!(d.cardinality().unwrap(), 25);
        assert_eq!(d.center(), q.center());

        let q = DiscreteCube::new(LatticePoint::from([4, -2, 7]), 0).unwrap();
        assert_eq!(q.cardinality().unwrap(), 1);
        assert_eq!(q.dilate(9).unwrap(), q);
        assert!(q.dilate(-1).is_err());
    }

    #[test]
    fn cube_membership_is_linf_ball() {
        let q = DiscreteCube::new(LatticePoint::from([1, 1]), 2).unwrap();
        assert!(q.contains(&LatticePoint::from([3, -1])));
        assert!(!q.contains(&LatticePoint::from([4, 1])));
        assert!(!q.contains(&LatticePoint::from([1])));
    }

    #[test]
    fn cardinality_overflow_is_reported() {
        let q = DiscreteCube::centered(8, 1 << 40).unwrap();
        assert!(matches!(q.cardinality(), Err(Error::Overflow(_))));
    }

    #[test]
    fn point_norms_are_ordered() {
        for p in [[3, -4, 0], [1, 1, 1], [0, 0, -7]] {
            let p = LatticePoint::from(p);
            let inf = p.norm_inf() as f64;
            assert!(inf <= p.norm() && p.norm() <= p.norm_l1() as f64);
        }
    }

    #[test]
    fn signal_drops_zeros_and_sums_repeats() {
        let s = LatticeSignal::from_values(
            1,
            [
                (LatticePoint::from([0]), 1.0),
                (LatticePoint::from([0]), -1.0),
                (LatticePoint::from([2]), 0.5),
                (LatticePoint::from([3]), 0.0),
            ],
        )
        .unwrap();
        assert_eq!(s.support_len(), 1);
        assert_eq!(s.value(&LatticePoint::from([2])), 0.5);
        assert!(LatticeSignal::from_values(1, [(LatticePoint::from([0]), f64::NAN)]).is_err());
        assert!(LatticeSignal::from_values(2, [(LatticePoint::from([0]), 1.0)]).is_err());
    }

    #[test]
    fn support_cube_contains_support() {
        let s = LatticeSignal::from_values(
            2,
            [
                (LatticePoint::from([-3, 1]), 1.0),
                (LatticePoint::from([4, 2]), 2.0),
            ],
        )
        .unwrap();
        let q = s.support_cube();
        assert!(s.iter().all(|(p, _)| q.contains(p)));
        assert_eq!(q.radius(), 4);
    }

    #[test]
    fn dense_roundtrip() {
        let q = DiscreteCube::new(LatticePoint::from([2, -1]), 1).unwrap();
        let s = LatticeSignal::indicator(&q).scale(0.25);
        let grid = s.to_dense(&q.as_box()).unwrap();
        assert_eq!(grid.values().len(), 9);
        assert_eq!(grid.to_signal(), s);
        let mut pt = vec![0; 2];
        for idx in 0..9 {
            q.as_box().point_at(idx, &mut pt);
            assert_eq!(q.as_box().offset(&pt), idx);
        }
    }

    #[test]
    fn box_covering_radius() {
        let b = LatticeBox::new(vec![-1, -1], vec![1, 2]).unwrap();
        assert_eq!(b.covering_radius(&[0, 0]), 2);
        assert_eq!(b.covering_radius(&[-3, 0]), 4);
    }
}
