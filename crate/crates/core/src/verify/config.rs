use crate::error::{Error, Result};
use crate::lattice::DiscreteCube;
use crate::operators::DEFAULT_T_RESOLUTION;

/// Grids and seeds shared by every sweep.
///
/// `alpha_grid` holds ratios `alpha / n` in `(0, 1)`, so one grid serves
/// every dimension. Each sweep skips grid points outside the range its
/// operations accept (for instance `p > 1` for operator norms, `p <= 1` for
/// atoms).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub dimensions: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub m_grid: Vec<u64>,
    pub trials: u32,
    pub seed: u64,
    /// Evaluation box radius; `None` means `4 (4 floor(sqrt n) max(m_grid) + 1)`.
    pub box_radius: Option<u64>,
    pub t_resolution: u32,
    pub negative_controls: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            dimensions: vec![1, 2],
            p_grid: vec![1.0, 0.8, 1.5],
            alpha_grid: vec![0.25, 0.5],
            m_grid: vec![1, 2, 4, 8, 16],
            trials: 8,
            seed: 20_240_601,
            box_radius: None,
            t_resolution: DEFAULT_T_RESOLUTION,
            negative_controls: false,
        }
    }
}

impl SweepConfig {
    /// Rejects grid values that no operation accepts.
    pub fn validate(&self) -> Result<()> {
        if let Some(&n) = self.dimensions.iter().find(|&&n| n == 0 || n > 8) {
            return Err(Error::InvalidArgument(format!(
                "dimension {n} is outside 1..=8"
            )));
        }
        if let Some(&p) = self.p_grid.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::ExponentOutOfRange {
                name: "p",
                value: p,
                range: "(0, inf)",
            });
        }
        if let Some(&a) = self.alpha_grid.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::ExponentOutOfRange {
                name: "alpha/n",
                value: a,
                range: "(0, 1)",
            });
        }
        if self.m_grid.contains(&0) {
            return Err(Error::InvalidArgument(
                "m_grid entries must be at least 1".into(),
            ));
        }
        if self.t_resolution == 0 {
            return Err(Error::EmptyGrid);
        }
        if self.box_radius == Some(0) {
            return Err(Error::InvalidArgument("box_radius must be positive".into()));
        }
        Ok(())
    }

    /// The evaluation box radius for dimension `n`.
    pub fn box_radius_for(&self, n: usize) -> u64 {
        self.box_radius.unwrap_or_else(|| {
            let m_max = self.m_grid.iter().copied().max().unwrap_or(1);
            4 * (DiscreteCube::far_field_factor(n) * m_max + 1)
        })
    }

    /// `p` values in `(0, 1]`.
    pub fn atom_exponents(&self) -> Vec<f64> {
        self.p_grid.iter().copied().filter(|&p| p <= 1.0).collect()
    }

    /// `p` values above 1.
    pub fn norm_exponents(&self) -> Vec<f64> {
        self.p_grid.iter().copied().filter(|&p| p > 1.0).collect()
    }
}

/// `root XOR index`, the per-row seed derived from the root seed.
pub fn split_seed(root: u64, index: u64) -> u64 {
    root ^ index
}
