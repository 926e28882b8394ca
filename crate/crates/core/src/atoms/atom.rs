use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::moments::{centered_moment, degree, dp_degree, monomial, multi_indices, MultiIndex};
use crate::error::{Error, Result};
use crate::lattice::{check_dim, DiscreteCube, LatticePoint, LatticeSignal};

/// Slack allowed on the size condition.
pub const SIZE_TOLERANCE: f64 = 1e-12;

/// Relative moment tolerance; scaled by `#Q^{1-1/p} max(m,1)^{|beta|}`.
pub const MOMENT_TOLERANCE: f64 = 1e-12;

const MAX_ATTEMPTS: u32 = 16;

/// One failed atom condition.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// A nonzero value outside the cube.
    OutsideCube { point: Vec<i64>, value: f64 },
    /// `||a||_inf` above `#Q^{-1/p}`.
    SizeExceeded { max_abs: f64, bound: f64 },
    /// A centered moment of degree `<= d_p` that does not vanish.
    MomentNonzero {
        beta: MultiIndex,
        value: f64,
        tolerance: f64,
    },
}

/// Outcome of [`validate_atom`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub d_p: u32,
    pub max_abs: f64,
    pub size_bound: f64,
    /// Largest `|moment| / tolerance` over the checked multi-indices.
    pub worst_moment_ratio: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid atom");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::OutsideCube { point, value } => {
                    format!("(a1) value {value:e} at {point:?} outside the cube")
                }
                Violation::SizeExceeded { max_abs, bound } => {
                    format!("(a2) sup {max_abs:e} exceeds {bound:e}")
                }
                Violation::MomentNonzero {
                    beta,
                    value,
                    tolerance,
                } => format!("(a3) moment {beta:?} = {value:e}, tolerance {tolerance:e}"),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn check_p(p: f64) -> Result<()> {
    dp_degree(p, 1).map(|_| ())
}

/// Moment tolerance for degree `k` on `cube` at exponent `p`.
pub fn moment_tolerance(cube: &DiscreteCube, p: f64, k: u32) -> f64 {
    let card = cube.cardinality_f64();
    MOMENT_TOLERANCE * card.powf(1.0 - 1.0 / p) * (cube.radius().max(1) as f64).powi(k as i32)
}

/// Checks support containment, the size bound and the vanishing moments.
///
/// Moments are taken about the cube's center; for degrees up to `d_p` this
/// is equivalent to the uncentered condition by the binomial theorem and is
/// far better conditioned.
pub fn validate_atom(
    candidate: &LatticeSignal,
    cube: &DiscreteCube,
    p: f64,
) -> Result<ValidationReport> {
    check_dim(cube.dim(), candidate.dim())?;
    let d_p = dp_degree(p, cube.dim())?;
    let mut violations = Vec::new();
    let mut max_abs: f64 = 0.0;
    for (point, v) in candidate.iter() {
        max_abs = max_abs.max(v.abs());
        if !cube.contains(point) {
            violations.push(Violation::OutsideCube {
                point: point.coords().to_vec(),
                value: v,
            });
        }
    }
    let size_bound = cube.cardinality_f64().powf(-1.0 / p);
    if max_abs > size_bound + SIZE_TOLERANCE {
        violations.push(Violation::SizeExceeded {
            max_abs,
            bound: size_bound,
        });
    }
    let mut worst: f64 = 0.0;
    for beta in multi_indices(cube.dim(), d_p) {
        let value = centered_moment(candidate, &beta, cube.center())?;
        let tolerance = moment_tolerance(cube, p, degree(&beta));
        worst = worst.max(value.abs() / tolerance);
        if value.abs() > tolerance {
            violations.push(Violation::MomentNonzero {
                beta,
                value,
                tolerance,
            });
        }
    }
    Ok(ValidationReport {
        d_p,
        max_abs,
        size_bound,
        worst_moment_ratio: worst,
        violations,
    })
}

/// A validated `(p, inf, d_p)`-atom.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    signal: LatticeSignal,
    cube: DiscreteCube,
    p: f64,
    d_p: u32,
}

impl Atom {
    /// Wraps `signal` after checking it against [`validate_atom`].
    pub fn new(signal: LatticeSignal, cube: DiscreteCube, p: f64) -> Result<Self> {
        let report = validate_atom(&signal, &cube, p)?;
        if !report.is_valid() {
            return Err(Error::InvalidAtom(Box::new(report)));
        }
        Ok(Self {
            signal,
            cube,
            p,
            d_p: report.d_p,
        })
    }

    pub fn signal(&self) -> &LatticeSignal {
        &self.signal
    }

    pub fn cube(&self) -> &DiscreteCube {
        &self.cube
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn d_p(&self) -> u32 {
        self.d_p
    }

    /// `N = d_p + 1`.
    pub fn order(&self) -> u32 {
        self.d_p + 1
    }

    pub fn dim(&self) -> usize {
        self.cube.dim()
    }

    /// The same atom moved to a new center.
    pub fn translate(&self, shift: &LatticePoint) -> Result<Self> {
        let center = self.cube.center() + shift;
        Ok(Self {
            signal: self.signal.translate(shift)?,
            cube: DiscreteCube::new(center, self.cube.radius())?,
            p: self.p,
            d_p: self.d_p,
        })
    }
}

/// Orthonormal basis of the centered, scaled monomials `((i-k0)/m)^beta`,
/// `|beta| <= degree`, sampled on the points of the cube.
fn monomial_basis(points: &[LatticePoint], cube: &DiscreteCube, degree: u32) -> Vec<Vec<f64>> {
    let n = cube.dim();
    let scale = cube.radius().max(1) as f64;
    let center = cube.center().coords();
    let scaled: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .zip(center)
                .map(|(a, c)| (a - c) as f64 / scale)
                .collect()
        })
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for beta in multi_indices(n, degree) {
        let mut v: Vec<f64> = scaled.iter().map(|x| monomial(x, &beta)).collect();
        let original = dot(&v, &v).sqrt();
        for _ in 0..2 {
            project_out(&mut v, &basis);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-9 * original {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(v, q);
        v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
    }
}

/// Draws uniform values on `cube`, projects out every monomial of degree
/// `<= d_p` and rescales so that `||a||_inf = #Q^{-1/p}`.
///
/// Attempt `k` uses seed `seed + k`; generation fails after 16 attempts.
pub fn generate_atom(cube: &DiscreteCube, p: f64, seed: u64) -> Result<Atom> {
    check_p(p)?;
    if cube.radius() == 0 {
        return Err(Error::InvalidArgument(
            "atoms need a cube of radius m >= 1".into(),
        ));
    }
    let d_p = dp_degree(p, cube.dim())?;
    let card = cube.cardinality()? as usize;
    let points = cube.points();
    let basis = monomial_basis(&points, cube, d_p);
    if basis.len() >= card {
        return Err(Error::MomentSpaceTooLarge {
            degree: d_p,
            rank: basis.len(),
            cardinality: card,
        });
    }
    let size = cube.cardinality_f64().powf(-1.0 / p);
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut x: Vec<f64> = (0..card).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let before = dot(&x, &x).sqrt();
        for _ in 0..2 {
            project_out(&mut x, &basis);
        }
        let (argmax, max) =
            x.iter().enumerate().fold(
                (0, 0.0f64),
                |(k, m), (i, v)| if v.abs() > m { (i, v.abs()) } else { (k, m) },
            );
        if max.is_nan() || max <= 1e-8 * before / (card as f64).sqrt() {
            continue;
        }
        let factor = size / max;
        let mut values: Vec<f64> = x.iter().map(|v| v * factor).collect();
        values[argmax] = size.copysign(values[argmax]);
        let signal = LatticeSignal::from_values(cube.dim(), points.iter().cloned().zip(values))?;
        if let Ok(atom) = Atom::new(signal, cube.clone(), p) {
            return Ok(atom);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// A finite atomic sum with its coefficient `p`-sum.
#[derive(Clone, Debug, PartialEq)]
pub struct Synthesis {
    pub signal: LatticeSignal,
    /// `sum_k |lambda_k|^p`.
    pub p_sum: f64,
}

/// `b = sum_k lambda_k a_k`. All atoms must share `n` and `p`.
pub fn synthesize(atoms: &[Atom], lambdas: &[f64]) -> Result<Synthesis> {
    if atoms.len() != lambdas.len() {
        return Err(Error::LengthMismatch {
            atoms: atoms.len(),
            lambdas: lambdas.len(),
        });
    }
    let Some(first) = atoms.first() else {
        return Err(Error::InvalidArgument(
            "cannot synthesize from an empty atom list".into(),
        ));
    };
    let (n, p) = (first.dim(), first.p());
    let mut signal = LatticeSignal::zero(n)?;
    let mut p_sum = 0.0;
    for (atom, &lambda) in atoms.iter().zip(lambdas) {
        check_dim(n, atom.dim())?;
        if atom.p() != p {
            return Err(Error::InvalidArgument(format!(
                "atoms mix exponents p = {p} and p = {}",
                atom.p()
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coefficient {lambda} is not finite"
            )));
        }
        signal = signal.add(&atom.signal().scale(lambda))?;
        p_sum += lambda.abs().powf(p);
    }
    Ok(Synthesis { signal, p_sum })
}
