//! Lebesgue exponents and the Sobolev pairing `1/q = 1/p - alpha/n`.

use std::fmt;

use crate::error::{Error, Result};

/// An exponent in `(0, inf]`. Infinity is its own variant, never a large float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Validates `p > 0`; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p.is_finite() && p > 0.0 {
            Ok(Self::Finite(p))
        } else {
            Err(Error::ExponentOutOfRange {
                name: "p",
                value: p,
                range: "(0, inf]",
            })
        }
    }

    /// `1/p`, with `1/inf = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }

    /// The value as a float (`f64::INFINITY` for infinity).
    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// Hoelder conjugate `p'` with `1/p + 1/p' = 1`; requires `p >= 1`.
    pub fn conjugate(self) -> Result<Self> {
        match self {
            Self::Infinity => Ok(Self::Finite(1.0)),
            Self::Finite(1.0) => Ok(Self::Infinity),
            Self::Finite(p) if p > 1.0 => Ok(Self::Finite(p / (p - 1.0))),
            Self::Finite(p) => Err(Error::ExponentOutOfRange {
                name: "p",
                value: p,
                range: "[1, inf]",
            }),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// `(n, p, q, alpha)` tied by the Sobolev relation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponents {
    n: usize,
    p: f64,
    q: f64,
    alpha: f64,
}

impl Exponents {
    /// Derives `q` from `1/q = 1/p - alpha/n`. Requires `0 < alpha < n` and
    /// `alpha/n < 1/p` so that `q` is a finite positive exponent.
    pub fn sobolev(n: usize, p: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        check_alpha(n, alpha)?;
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::ExponentOutOfRange {
                name: "p",
                value: p,
                range: "(0, inf)",
            });
        }
        let inv_q = 1.0 / p - alpha / n as f64;
        if inv_q <= 0.0 {
            return Err(Error::ExponentOutOfRange {
                name: "p",
                value: p,
                range: "(0, n/alpha)",
            });
        }
        Ok(Self {
            n,
            p,
            q: 1.0 / inv_q,
            alpha,
        })
    }

    /// Accepts an explicit `q`, checking the Sobolev relation to a few ulps.
    pub fn new(n: usize, p: f64, q: f64, alpha: f64) -> Result<Self> {
        let derived = Self::sobolev(n, p, alpha)?;
        let residual = 1.0 / q - 1.0 / derived.q;
        let scale = (1.0 / p).max(alpha / n as f64);
        if !q.is_finite() || residual.abs() > 8.0 * f64::EPSILON * scale {
            return Err(Error::SobolevMismatch { residual });
        }
        Ok(Self { q, ..derived })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `gamma = alpha / n`.
    pub fn gamma(&self) -> f64 {
        self.alpha / self.n as f64
    }

    /// `1/q - (1/p - alpha/n)`, zero up to rounding.
    pub fn sobolev_residual(&self) -> f64 {
        1.0 / self.q - (1.0 / self.p - self.gamma())
    }
}

pub(crate) fn check_alpha(n: usize, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < n as f64 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange {
            name: "alpha",
            value: alpha,
            range: "(0, n)",
        })
    }
}
