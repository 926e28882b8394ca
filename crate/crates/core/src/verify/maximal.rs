use rayon::prelude::*;

use super::config::{split_seed, SweepConfig};
use super::row::ExperimentRow;
use super::sampling::{default_support_radius, random_signal, SignalKind};
use crate::atoms::generate_atom;
use crate::error::Result;
use crate::exponents::Exponent;
use crate::lattice::{DenseGrid, DiscreteCube, LatticeBox, LatticePoint, LatticeSignal};
use crate::norms::{lp_norm, lp_norm_values};
use crate::operators::{hp_norm_estimate, maximal_detail, maximal_on_box, EvaluationBox, TGrid};

/// Number of levels `lambda_k = ||b||_inf 2^{-k/2}` per weak-type row.
pub const WEAK_TYPE_LEVELS: u32 = 24;
/// Exponents of the strong-type rows.
pub const MAXIMAL_LP_EXPONENTS: [Exponent; 3] = [
    Exponent::Finite(2.0),
    Exponent::Finite(4.0),
    Exponent::Infinity,
];
/// Largest `|j|_inf` in the delta exactness check.
pub const DELTA_RADIUS: u64 = 100;
/// Largest relative change allowed when the t-grid resolution doubles.
pub const REFINEMENT_TOLERANCE: f64 = 5e-3;
/// Largest cube radius used for the refinement check.
pub const REFINEMENT_MAX_M: u64 = 4;

/// `3^n`, the weak-type constant of the centered maximal operator.
pub fn weak_type_constant(n: usize) -> f64 {
    3f64.powi(n as i32)
}

/// `max_lambda lambda #{M b > lambda} / ||b||_1` over the given levels.
fn weak_type_ratio(image: &DenseGrid, l1: f64, levels: &[f64]) -> f64 {
    levels
        .iter()
        .map(|&lambda| {
            let count = image.values().iter().filter(|&&v| v > lambda).count();
            lambda * count as f64 / l1
        })
        .fold(0.0, f64::max)
}

/// `max_v v #{M b >= v} / ||b||_1` over every attained value `v`: the
/// supremum of the weak-type quotient on the box.
fn weak_type_sup(image: &DenseGrid, l1: f64) -> f64 {
    let mut values: Vec<f64> = image
        .values()
        .iter()
        .copied()
        .filter(|v| *v > 0.0)
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
        .iter()
        .enumerate()
        .map(|(k, v)| v * (k + 1) as f64 / l1)
        .fold(0.0, f64::max)
}

/// Weak-type (1,1) and strong-type records of the centered maximal operator
/// on nonnegative random signals, plus the closed form for `delta_0`.
///
/// With `negative_controls`, `M_{n/2}` replaces `M` on `delta_0`; its weak-type
/// quotient grows with the box and must exceed `3^n`.
pub fn weak_type_record(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &n in &config.dimensions {
        for _ in 0..config.trials {
            jobs.push(n);
        }
    }
    let per_job: Vec<Vec<ExperimentRow>> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &n)| random_weak_type_rows(n, split_seed(config.seed, idx as u64)))
        .collect::<Result<_>>()?;
    let mut rows: Vec<ExperimentRow> = per_job.into_iter().flatten().collect();
    for &n in &config.dimensions {
        rows.push(delta_weak_type_row(n, 0.0, "weak_type_delta")?);
        if config.negative_controls {
            rows.push(delta_weak_type_row(n, n as f64 / 2.0, "control_weak_type")?);
        }
    }
    Ok(rows)
}

fn weak_box_radius(n: usize) -> u64 {
    8 * default_support_radius(n)
}

fn random_weak_type_rows(n: usize, seed: u64) -> Result<Vec<ExperimentRow>> {
    let radius = weak_box_radius(n);
    let b = random_signal(n, default_support_radius(n), seed, SignalKind::NonNegative)?;
    let out = EvaluationBox::centered(n, radius)?;
    let image = maximal_on_box(&b, 0.0, &out)?;
    let l1 = lp_norm(&b, Exponent::Finite(1.0));
    let sup = lp_norm(&b, Exponent::Infinity);
    let levels: Vec<f64> = (0..WEAK_TYPE_LEVELS)
        .map(|k| sup * (-(k as f64) / 2.0).exp2())
        .collect();
    let c = weak_type_constant(n);
    let ratio = weak_type_ratio(&image, l1, &levels);
    let mut rows = vec![ExperimentRow::new("weak_type", n)
        .m(radius)
        .seed(seed)
        .value(ratio)
        .tail(c)
        .check(ratio <= c)];
    for p in MAXIMAL_LP_EXPONENTS {
        let r = lp_norm_values(image.values(), p) / lp_norm(&b, p);
        let (cap, pv) = match p {
            Exponent::Finite(pv) => (10.0 * c, pv),
            Exponent::Infinity => (1.0, f64::INFINITY),
        };
        rows.push(
            ExperimentRow::new("maximal_lp", n)
                .p(pv)
                .m(radius)
                .seed(seed)
                .value(r)
                .tail(cap)
                .check(r <= cap * (1.0 + 1e-12)),
        );
    }
    Ok(rows)
}

fn delta_weak_type_row(n: usize, alpha: f64, name: &str) -> Result<ExperimentRow> {
    let radius = weak_box_radius(n);
    let delta = LatticeSignal::delta(LatticePoint::origin(n))?;
    let image = maximal_on_box(&delta, alpha, &EvaluationBox::centered(n, radius)?)?;
    let ratio = weak_type_sup(&image, 1.0);
    let c = weak_type_constant(n);
    Ok(ExperimentRow::new(name, n)
        .alpha(alpha)
        .m(radius)
        .value(ratio)
        .tail(c)
        .check(ratio <= c))
}

/// Largest radius for the exhaustive delta check in dimension `n`.
fn delta_radius(n: usize) -> u64 {
    match n {
        1 | 2 => DELTA_RADIUS,
        3 => 20,
        _ => 4,
    }
}

/// Exactness of `M_alpha delta_0(j) = (2|j|_inf + 1)^{-(n - alpha)}` with
/// maximizing radius `|j|_inf`, and stability of the `H^p` estimate of
/// generated atoms under doubling of the t-grid resolution.
pub fn maximal_suite(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.dimensions {
        for alpha in [0.0, 0.5] {
            if alpha >= n as f64 {
                continue;
            }
            rows.push(delta_exactness_row(n, alpha)?);
        }
    }
    let mut jobs = Vec::new();
    for &n in &config.dimensions {
        for &p in &config.atom_exponents() {
            for &m in config.m_grid.iter().filter(|&&m| m <= REFINEMENT_MAX_M) {
                jobs.push((n, p, m));
            }
        }
    }
    let refinement: Vec<ExperimentRow> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(n, p, m))| {
            refinement_row(
                n,
                p,
                m,
                split_seed(config.seed, idx as u64),
                config.t_resolution,
            )
        })
        .collect::<Result<_>>()?;
    rows.extend(refinement);
    Ok(rows)
}

fn delta_exactness_row(n: usize, alpha: f64) -> Result<ExperimentRow> {
    let r = delta_radius(n) as i64;
    let delta = LatticeSignal::delta(LatticePoint::origin(n))?;
    let power = n as f64 - alpha;
    let mut mismatches = 0u64;
    let mut worst: f64 = 0.0;
    for j in LatticeBox::new(vec![-r; n], vec![r; n])?.points() {
        let d = j.norm_inf();
        let got = maximal_detail(&delta, alpha, &j)?;
        let expected = 1.0 / ((2 * d + 1) as f64).powf(power);
        if got.value != expected || got.radius != d {
            mismatches += 1;
        }
        worst = worst.max((got.value - expected).abs() / expected);
    }
    Ok(ExperimentRow::new("maximal_delta", n)
        .alpha(alpha)
        .m(r as u64)
        .value(worst)
        .tail(mismatches as f64)
        .check(mismatches == 0))
}

fn refinement_row(n: usize, p: f64, m: u64, seed: u64, resolution: u32) -> Result<ExperimentRow> {
    let cube = DiscreteCube::centered(n, m)?;
    let atom = generate_atom(&cube, p, seed)?;
    let radius = 4 * (cube.far_field_dilation().radius() + 1);
    let out = EvaluationBox::centered(n, radius)?;
    let grid = TGrid::covering(radius, resolution)?;
    let coarse = hp_norm_estimate(atom.signal(), p, &grid, &out)?;
    let fine = hp_norm_estimate(atom.signal(), p, &grid.refined(), &out)?;
    let change = (fine - coarse).abs() / fine;
    Ok(ExperimentRow::new("hp_refinement", n)
        .p(p)
        .m(m)
        .seed(seed)
        .value(change)
        .tail(fine)
        .check(change < REFINEMENT_TOLERANCE))
}
