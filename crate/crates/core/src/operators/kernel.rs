use crate::error::{Error, Result};
use crate::exponents::check_alpha;
use crate::lattice::{norm_sq, DiscreteCube, LatticeBox};

/// A convolution kernel on `Z^n`, evaluated at the difference `v = j - i`.
pub trait LatticeKernel: Sync {
    fn value(&self, v: &[i64]) -> f64;
}

/// `v -> |v|^{alpha - n}` off the origin, `0` at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RieszKernel {
    n: usize,
    alpha: f64,
    half_exponent: f64,
}

impl RieszKernel {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        check_alpha(n, alpha)?;
        Ok(Self {
            n,
            alpha,
            half_exponent: (alpha - n as f64) / 2.0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `alpha - n`.
    pub fn exponent(&self) -> f64 {
        2.0 * self.half_exponent
    }
}

impl LatticeKernel for RieszKernel {
    fn value(&self, v: &[i64]) -> f64 {
        let r2 = norm_sq(v);
        if r2 == 0.0 {
            0.0
        } else {
            r2.powf(self.half_exponent)
        }
    }
}

/// `v -> |v|^s` off the origin with an arbitrary exponent `s`; used for
/// deliberately wrong kernels in negative controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerKernel {
    half_exponent: f64,
}

impl PowerKernel {
    pub fn new(exponent: f64) -> Self {
        Self {
            half_exponent: exponent / 2.0,
        }
    }
}

impl LatticeKernel for PowerKernel {
    fn value(&self, v: &[i64]) -> f64 {
        let r2 = norm_sq(v);
        if r2 == 0.0 {
            0.0
        } else {
            r2.powf(self.half_exponent)
        }
    }
}

/// `v -> 1 / max(1, |v|^{1-gamma})` on `Z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JGammaKernel {
    gamma: f64,
}

impl JGammaKernel {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma < 1.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::ExponentOutOfRange {
                name: "gamma",
                value: gamma,
                range: "(0, 1)",
            })
        }
    }
}

impl LatticeKernel for JGammaKernel {
    fn value(&self, v: &[i64]) -> f64 {
        let r = norm_sq(v).sqrt();
        1.0 / r.powf(1.0 - self.gamma).max(1.0)
    }
}

/// The region on which an operator's output is materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationBox(LatticeBox);

impl EvaluationBox {
    pub fn new(bounds: LatticeBox) -> Self {
        Self(bounds)
    }

    pub fn cube(cube: &DiscreteCube) -> Self {
        Self(cube.as_box())
    }

    /// `Q(0, radius)` in dimension `n`.
    pub fn centered(n: usize, radius: u64) -> Result<Self> {
        Ok(Self::cube(&DiscreteCube::centered(n, radius)?))
    }

    pub fn bounds(&self) -> &LatticeBox {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}
