//! Symbolic derivatives of `x -> |x - j|^s` and the Taylor polynomial of the
//! Riesz kernel about an atom's center.
//!
//! Every derivative is a finite sum of terms `c (x-j)^gamma |x-j|^t`, and
//! `d/dx_l [(x-j)^gamma r^t] = gamma_l (x-j)^{gamma-e_l} r^t + t (x-j)^{gamma+e_l} r^{t-2}`,
//! so the family is closed under differentiation. A derivative of order `k`
//! has `|gamma| + t = s - k` in every term.

use std::collections::BTreeMap;

use super::atom::Atom;
use super::moments::{
    degree, factorial, monomial, multi_indices, multi_indices_of_degree, MultiIndex,
};
use crate::error::{Error, Result};
use crate::exponents::check_alpha;
use crate::lattice::{check_dim, DiscreteCube, LatticePoint};

/// One term `coeff (x-j)^gamma |x-j|^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub gamma: MultiIndex,
    pub power: f64,
}

impl Term {
    /// Value at the displacement `v = x - j`, `v != 0`.
    pub fn eval(&self, v: &[f64]) -> f64 {
        let r2: f64 = v.iter().map(|x| x * x).sum();
        self.coeff * monomial(v, &self.gamma) * r2.powf(self.power / 2.0)
    }
}

/// The terms of `D^beta |x - j|^s`.
pub fn derivative_terms(s: f64, beta: &[u32]) -> Vec<Term> {
    let n = beta.len();
    let mut terms: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    terms.insert(vec![0; n], 1.0);
    let mut order = 0u32;
    for (axis, &times) in beta.iter().enumerate() {
        for _ in 0..times {
            let mut next: BTreeMap<MultiIndex, f64> = BTreeMap::new();
            for (gamma, c) in &terms {
                let t = s - order as f64 - degree(gamma) as f64;
                if gamma[axis] > 0 {
                    let mut g = gamma.clone();
                    g[axis] -= 1;
                    *next.entry(g).or_insert(0.0) += c * gamma[axis] as f64;
                }
                let mut g = gamma.clone();
                g[axis] += 1;
                *next.entry(g).or_insert(0.0) += c * t;
            }
            next.retain(|_, c| *c != 0.0);
            terms = next;
            order += 1;
        }
    }
    terms
        .into_iter()
        .map(|(gamma, coeff)| {
            let power = s - order as f64 - degree(&gamma) as f64;
            Term {
                coeff,
                gamma,
                power,
            }
        })
        .collect()
}

/// `sum_terms c (x-j)^gamma r^t` at `v = x - j`.
pub fn eval_terms(terms: &[Term], v: &[f64]) -> f64 {
    terms.iter().map(|t| t.eval(v)).sum()
}

/// `A_k = max_{|beta| = k} sum |c|`, so that `|D^beta f(x)| <= A_k |x-j|^{s-k}`.
pub fn coefficient_sum(n: usize, s: f64, k: u32) -> f64 {
    multi_indices_of_degree(n, k)
        .iter()
        .map(|beta| {
            derivative_terms(s, beta)
                .iter()
                .map(|t| t.coeff.abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// `K = A_N n^N / N! 2^{N+n-alpha}`.
///
/// For `i` in `Q(k0, m)` and `|j - k0|_inf > 4 floor(sqrt n) m` the remainder of
/// the degree `N-1` expansion satisfies
/// `|f(i) - q_N(i)| <= K (sqrt(n) m)^N |j - k0|^{alpha-n-N}`.
pub fn remainder_constant(n: usize, alpha: f64, order: u32) -> f64 {
    let nf = n as f64;
    let s = alpha - nf;
    let a = coefficient_sum(n, s, order);
    let fact: f64 = (1..=order).map(f64::from).product();
    a * nf.powi(order as i32) / fact * 2f64.powf(order as f64 + nf - alpha)
}

/// Expansion of `x -> |x - j|^{alpha-n}` around the center of `cube`.
#[derive(Clone, Debug)]
pub struct TaylorExpansion {
    cube: DiscreteCube,
    target: LatticePoint,
    alpha: f64,
    order: u32,
    /// `(beta, D^beta f(k0) / beta!)` for `|beta| <= N - 1`.
    coefficients: Vec<(MultiIndex, f64)>,
    remainder_constant: f64,
}

impl TaylorExpansion {
    /// Requires `target` outside `4 floor(sqrt n) cube` and `order >= 1`.
    pub fn new(cube: &DiscreteCube, target: &LatticePoint, alpha: f64, order: u32) -> Result<Self> {
        let n = cube.dim();
        check_dim(n, target.dim())?;
        check_alpha(n, alpha)?;
        if order == 0 {
            return Err(Error::InvalidArgument(
                "Taylor order N must be at least 1".into(),
            ));
        }
        let distance = (target - cube.center()).norm_inf();
        let threshold = cube.far_field_dilation().radius();
        if distance <= threshold {
            return Err(Error::TargetInsideDilatedCube {
                distance,
                threshold,
            });
        }
        let s = alpha - n as f64;
        let v = displacement(cube.center(), target);
        let coefficients = multi_indices(n, order - 1)
            .into_iter()
            .map(|beta| {
                let d = eval_terms(&derivative_terms(s, &beta), &v) / factorial(&beta);
                (beta, d)
            })
            .collect();
        Ok(Self {
            cube: cube.clone(),
            target: target.clone(),
            alpha,
            order,
            coefficients,
            remainder_constant: remainder_constant(n, alpha, order),
        })
    }

    /// Expansion of order `N = d_p + 1` for the atom's cube.
    pub fn for_atom(atom: &Atom, target: &LatticePoint, alpha: f64) -> Result<Self> {
        Self::new(atom.cube(), target, alpha, atom.order())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self) -> f64 {
        self.alpha - self.cube.dim() as f64
    }

    /// The symbolic form of `D^beta f`.
    pub fn derivative(&self, beta: &[u32]) -> Vec<Term> {
        derivative_terms(self.exponent(), beta)
    }

    /// `D^beta f(x)` at a real point `x`.
    pub fn derivative_at(&self, beta: &[u32], x: &[f64]) -> f64 {
        let v: Vec<f64> = x
            .iter()
            .zip(self.target.coords())
            .map(|(a, b)| a - *b as f64)
            .collect();
        eval_terms(&self.derivative(beta), &v)
    }

    /// `f(i) = |i - j|^{alpha-n}`, taken as 0 at `i = j`.
    pub fn kernel(&self, i: &LatticePoint) -> f64 {
        let r2: f64 = (i - &self.target)
            .coords()
            .iter()
            .map(|&c| (c * c) as f64)
            .sum();
        if r2 == 0.0 {
            0.0
        } else {
            r2.powf(self.exponent() / 2.0)
        }
    }

    /// `q_N(i, j) = sum_{|beta| <= N-1} D^beta f(k0) / beta! (i - k0)^beta`.
    pub fn polynomial(&self, i: &LatticePoint) -> f64 {
        let h: Vec<f64> = displacement(i, self.cube.center());
        self.coefficients
            .iter()
            .map(|(beta, c)| c * monomial(&h, beta))
            .sum()
    }

    /// `D^{e_l} f(k0)`.
    pub fn first_order_coefficient(&self, axis: usize) -> f64 {
        let mut beta = vec![0; self.cube.dim()];
        beta[axis] = 1;
        let v = displacement(self.cube.center(), &self.target);
        eval_terms(&self.derivative(&beta), &v)
    }

    /// `A_k` for this expansion's exponent.
    pub fn coefficient_sum(&self, k: u32) -> f64 {
        coefficient_sum(self.cube.dim(), self.exponent(), k)
    }

    /// `K = A_N n^N / N! 2^{N+n-alpha}`.
    pub fn remainder_constant(&self) -> f64 {
        self.remainder_constant
    }

    /// `K (sqrt(n) m)^N |j - k0|^{alpha-n-N}`, bounding `|f(i) - q_N(i)|` on the cube.
    pub fn remainder_envelope(&self) -> f64 {
        let n = self.cube.dim() as f64;
        let m = self.cube.radius() as f64;
        let dist = (&self.target - self.cube.center()).norm();
        self.remainder_constant
            * (n.sqrt() * m).powi(self.order as i32)
            * dist.powf(self.exponent() - self.order as f64)
    }

    /// Constant `C` with
    /// `|I_alpha a(j)| <= C #Q^{-1/p} [M_{alpha n/(n+N)} chi_Q (j)]^{(n+N)/n}`
    /// for every atom on this cube with `N - 1` vanishing moment degrees.
    ///
    /// The centered cube at `j` of radius `|j-k0|_inf + m` covers `Q`, and
    /// `(2(d+m)+1)/d <= 2 + (2m+1)/(4 floor(sqrt n) m + 1)` for `d` beyond the dilation.
    pub fn domination_constant(&self) -> f64 {
        domination_constant(&self.cube, self.alpha, self.order)
    }
}

/// See [`TaylorExpansion::domination_constant`].
pub fn domination_constant(cube: &DiscreteCube, alpha: f64, order: u32) -> f64 {
    let n = cube.dim();
    let nf = n as f64;
    let m = cube.radius() as f64;
    let reach = 2.0 + (2.0 * m + 1.0) / (DiscreteCube::far_field_factor(n) as f64 * m + 1.0);
    remainder_constant(n, alpha, order)
        * (nf.sqrt() / 2.0).powi(order as i32)
        * reach.powf(nf + order as f64 - alpha)
}

fn displacement(x: &LatticePoint, y: &LatticePoint) -> Vec<f64> {
    x.coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| (a - b) as f64)
        .collect()
}
