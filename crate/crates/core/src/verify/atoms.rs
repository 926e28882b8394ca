use rayon::prelude::*;

use super::config::{split_seed, SweepConfig};
use super::opnorm::SLOPE_THRESHOLD;
use super::row::{ExperimentRow, Verdict};
use super::sampling::{loglog_slope, point_in_shell, rng, spread};
use crate::atoms::{
    best_tail_lq_bound, domination_constant, generate_atom, moment_tolerance, taylor_order,
    validate_atom, vanishing_order, TaylorExpansion,
};
use crate::error::{Error, Result};
use crate::exponents::Exponents;
use crate::lattice::{DenseGrid, DiscreteCube, LatticeBox, LatticePoint, LatticeSignal};
use crate::norms::lp_power_sum;
use crate::operators::{maximal, riesz_fft, EvaluationBox};

/// Largest admissible `max / min` of the per-`m` totals.
pub const SPREAD_CAP: f64 = 4.0;
/// Number of sampled far-field points per atom for the domination check.
pub const DOMINATION_SAMPLES: usize = 32;
/// Number of sampled targets per cube in the Taylor checks.
pub const TAYLOR_SAMPLES: usize = 50;
/// Taylor orders exercised by [`taylor_suite`].
pub const TAYLOR_ORDERS: [u32; 3] = [1, 2, 3];
/// Step of the central finite differences.
pub const FD_STEP: f64 = 1e-3;
/// Tolerance for first-order coefficients against finite differences.
pub const FD_TOLERANCE: f64 = 1e-6;

/// Generates `trials` atoms per `(n, p, m)` and validates each.
pub fn atom_validity_suite(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &n in &config.dimensions {
        for &p in &config.atom_exponents() {
            for &m in &config.m_grid {
                for _ in 0..config.trials {
                    jobs.push((n, p, m));
                }
            }
        }
    }
    jobs.par_iter()
        .enumerate()
        .map(|(idx, &(n, p, m))| {
            let seed = split_seed(config.seed, idx as u64);
            let cube = DiscreteCube::centered(n, m)?;
            let atom = generate_atom(&cube, p, seed)?;
            let report = validate_atom(atom.signal(), &cube, p)?;
            Ok(ExperimentRow::new("atom_validity", n)
                .p(p)
                .m(m)
                .seed(seed)
                .value(report.worst_moment_ratio)
                .tail(report.max_abs / report.size_bound)
                .check(report.is_valid()))
        })
        .collect()
}

/// Exhaustive Taylor remainder checks and first-order finite differences.
///
/// For each `n`, `alpha = ratio n`, `m` in the grid and `N` in 1..=3, samples
/// targets `j` outside `4 floor(sqrt n) Q` and checks
/// `|f(i) - q_N(i, j)| <= K (sqrt(n) m)^N |j - k0|^{alpha-n-N}` for every `i` in `Q`.
pub fn taylor_suite(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &n in &config.dimensions {
        for &ratio in &config.alpha_grid {
            for &m in &config.m_grid {
                jobs.push((n, ratio * n as f64, m));
            }
        }
    }
    let rows: Vec<Vec<ExperimentRow>> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(n, alpha, m))| taylor_rows(n, alpha, m, split_seed(config.seed, idx as u64)))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn taylor_rows(n: usize, alpha: f64, m: u64, seed: u64) -> Result<Vec<ExperimentRow>> {
    let cube = DiscreteCube::centered(n, m)?;
    let points = cube.points();
    let inner = cube.far_field_dilation().radius();
    let mut r = rng(seed);
    let targets: Vec<LatticePoint> = (0..TAYLOR_SAMPLES)
        .map(|_| point_in_shell(&mut r, cube.center(), inner, 4 * inner + 16))
        .collect();
    let mut rows = Vec::new();
    for &order in &TAYLOR_ORDERS {
        let mut worst: f64 = 0.0;
        for j in &targets {
            let e = TaylorExpansion::new(&cube, j, alpha, order)?;
            let envelope = e.remainder_envelope();
            for i in &points {
                worst = worst.max((e.kernel(i) - e.polynomial(i)).abs() / envelope);
            }
        }
        rows.push(
            ExperimentRow::new(format!("taylor_remainder_order{order}"), n)
                .alpha(alpha)
                .m(m)
                .seed(seed)
                .value(worst)
                .check(worst <= 1.0),
        );
    }
    let mut worst_fd: f64 = 0.0;
    let center: Vec<f64> = cube.center().coords().iter().map(|&c| c as f64).collect();
    for j in &targets {
        let e = TaylorExpansion::new(&cube, j, alpha, 2)?;
        let jf: Vec<f64> = j.coords().iter().map(|&c| c as f64).collect();
        let f = |x: &[f64]| -> f64 {
            let r2: f64 = x.iter().zip(&jf).map(|(a, b)| (a - b) * (a - b)).sum();
            r2.powf(e.exponent() / 2.0)
        };
        let grad: Vec<f64> = (0..n).map(|l| e.first_order_coefficient(l)).collect();
        let scale = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        for (l, g) in grad.iter().enumerate() {
            let mut xp = center.clone();
            let mut xm = center.clone();
            xp[l] += FD_STEP;
            xm[l] -= FD_STEP;
            let fd = (f(&xp) - f(&xm)) / (2.0 * FD_STEP);
            worst_fd = worst_fd.max((fd - g).abs() / scale);
        }
    }
    rows.push(
        ExperimentRow::new("taylor_first_order", n)
            .alpha(alpha)
            .m(m)
            .seed(seed)
            .value(worst_fd)
            .check(worst_fd <= FD_TOLERANCE),
    );
    Ok(rows)
}

/// Norms of `I_alpha a` for one atom (or control signal).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomNorms {
    /// `l^q` norm over `4 floor(sqrt n) Q`.
    pub inside: f64,
    /// `l^q` norm over the rest of the evaluation box.
    pub outside: f64,
    /// Upper bound for the `l^q` norm beyond the box.
    pub tail: f64,
    /// `(inside^q + outside^q + tail^q)^{1/q}`.
    pub total: f64,
}

/// Splits `||I_alpha b||_q` into inside, box and tail parts for a signal on
/// `cube` whose moments of degree `< order` vanish. A divergent tail is
/// reported as `+inf`.
pub fn atom_norms(
    signal: &LatticeSignal,
    cube: &DiscreteCube,
    exps: &Exponents,
    order: u32,
    box_radius: u64,
) -> Result<(AtomNorms, DenseGrid)> {
    let center = cube.center();
    let lo: Vec<i64> = center
        .coords()
        .iter()
        .map(|c| c - box_radius as i64)
        .collect();
    let hi: Vec<i64> = center
        .coords()
        .iter()
        .map(|c| c + box_radius as i64)
        .collect();
    let out = EvaluationBox::new(LatticeBox::new(lo, hi)?);
    let image = riesz_fft(signal, exps.alpha(), &out)?;
    let q = exps.q();
    let inner = cube.far_field_dilation().radius();
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    image.for_each(|j, v| {
        let d = j
            .iter()
            .zip(center.coords())
            .map(|(a, b)| (a - b).unsigned_abs())
            .max()
            .unwrap_or(0);
        if d <= inner {
            inside.push(v);
        } else {
            outside.push(v);
        }
    });
    let tail = match best_tail_lq_bound(signal, cube, exps.alpha(), q, box_radius, order) {
        Ok(t) => t,
        Err(Error::DivergentTail { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    let (si, so) = (lp_power_sum(&inside, q), lp_power_sum(&outside, q));
    let norms = AtomNorms {
        inside: si.powf(1.0 / q),
        outside: so.powf(1.0 / q),
        tail,
        total: (si + so + tail.powf(q)).powf(1.0 / q),
    };
    Ok((norms, image))
}

/// Largest `|I_alpha a(j)| / (C #Q^{-1/p} [M_{alpha n/(n+N)} chi_Q(j)]^{(n+N)/n})`
/// over sampled `j` in the box outside `4 floor(sqrt n) Q`.
fn domination_ratio(
    image: &DenseGrid,
    cube: &DiscreteCube,
    exps: &Exponents,
    order: u32,
    box_radius: u64,
    seed: u64,
) -> Result<f64> {
    let n = cube.dim() as f64;
    let nn = n + order as f64;
    let beta = exps.alpha() * n / nn;
    let chi = LatticeSignal::indicator(cube);
    let c10 = domination_constant(cube, exps.alpha(), order);
    let size = cube.cardinality_f64().powf(-1.0 / exps.p());
    let inner = cube.far_field_dilation().radius();
    let mut r = rng(seed ^ 0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..DOMINATION_SAMPLES {
        let j = point_in_shell(&mut r, cube.center(), inner, box_radius);
        let lhs = image.get(&j).expect("sample inside the box").abs();
        let rhs = c10 * size * maximal(&chi, beta, &j)?.powf(nn / n);
        worst = worst.max(lhs / rhs);
    }
    Ok(worst)
}

struct AtomResult {
    rows: Vec<ExperimentRow>,
    total: f64,
    control: Option<f64>,
}

struct AtomPoint {
    n: usize,
    exps: Exponents,
    order: u32,
}

/// The uniform-bound sweep over generated atoms.
///
/// Per `(n, p <= 1, alpha)` and `m`, `trials` atoms are generated; rows
/// record the inside, box and tail parts of `||I_alpha a||_q` and a sampled
/// check of the fractional-maximal domination. A final row per
/// `(n, p, alpha)` carries the log-log slope across `m` of the per-`m`
/// maximum total and passes iff `|slope| <= 0.05` and `max / min <= 4`.
///
/// With `negative_controls`, `|a|` replaces `a`; its moments no longer
/// vanish and its slope row must fail.
pub fn atom_uniform_sweep(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut points = Vec::new();
    for &n in &config.dimensions {
        for &p in &config.atom_exponents() {
            for &ratio in &config.alpha_grid {
                let exps = Exponents::sobolev(n, p, ratio * n as f64)?;
                let order = taylor_order(p, n)?;
                let value = exps.q() * (n as f64 + order as f64 - exps.alpha());
                if value <= n as f64 {
                    return Err(Error::DivergentTail { value, n });
                }
                points.push(AtomPoint { n, exps, order });
            }
        }
    }
    let mut jobs = Vec::new();
    for (k, _) in points.iter().enumerate() {
        for &m in &config.m_grid {
            for _ in 0..config.trials {
                jobs.push((k, m));
            }
        }
    }
    let results: Vec<AtomResult> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(k, m))| {
            let pt = &points[k];
            let seed = split_seed(config.seed, idx as u64);
            atom_rows(pt, m, seed, config)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (k, pt) in points.iter().enumerate() {
        let mine: Vec<(u64, &AtomResult)> = jobs
            .iter()
            .zip(&results)
            .filter(|((kk, _), _)| *kk == k)
            .map(|((_, m), r)| (*m, r))
            .collect();
        let per_m = |pick: &dyn Fn(&AtomResult) -> Option<f64>| {
            config
                .m_grid
                .iter()
                .filter_map(|&m| {
                    let vals: Vec<f64> = mine
                        .iter()
                        .filter(|(mm, _)| *mm == m)
                        .filter_map(|(_, r)| pick(r))
                        .collect();
                    (!vals.is_empty()).then(|| {
                        (
                            m as f64,
                            vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                        )
                    })
                })
                .collect::<Vec<(f64, f64)>>()
        };
        let slope_row = |name: &str, curve: &[(f64, f64)]| {
            let slope = loglog_slope(curve);
            let values: Vec<f64> = curve.iter().map(|c| c.1).collect();
            let ratio = spread(&values);
            ExperimentRow::new(name, pt.n)
                .exponents(pt.exps.p(), pt.exps.q(), pt.exps.alpha())
                .seed(config.seed)
                .value(slope)
                .tail(ratio)
                .check(slope.abs() <= SLOPE_THRESHOLD && ratio <= SPREAD_CAP)
        };
        rows.push(slope_row("atom_uniform_slope", &per_m(&|r| Some(r.total))));
        for part in ["atom_inside", "atom_outside"] {
            let curve = per_m(&|r| {
                r.rows
                    .iter()
                    .find(|row| row.experiment == part)
                    .map(|row| row.value)
            });
            let slope = loglog_slope(&curve);
            rows.push(
                ExperimentRow::new(format!("{part}_slope"), pt.n)
                    .exponents(pt.exps.p(), pt.exps.q(), pt.exps.alpha())
                    .seed(config.seed)
                    .value(slope)
                    .tail(spread(&curve.iter().map(|c| c.1).collect::<Vec<_>>()))
                    .verdict(Verdict::Recorded),
            );
        }
        if config.negative_controls {
            rows.push(slope_row("control_atom_abs_slope", &per_m(&|r| r.control)));
        }
    }
    for r in results {
        rows.extend(r.rows);
    }
    Ok(rows)
}

fn atom_rows(pt: &AtomPoint, m: u64, seed: u64, config: &SweepConfig) -> Result<AtomResult> {
    let n = pt.n;
    let exps = &pt.exps;
    let cube = DiscreteCube::centered(n, m)?;
    let atom = generate_atom(&cube, exps.p(), seed)?;
    let radius = config.box_radius_for(n);
    let (norms, image) = atom_norms(atom.signal(), &cube, exps, pt.order, radius)?;
    let domination = domination_ratio(&image, &cube, exps, pt.order, radius, seed)?;
    let row = |name: &str| {
        ExperimentRow::new(name, n)
            .exponents(exps.p(), exps.q(), exps.alpha())
            .m(m)
            .seed(seed)
    };
    let mut rows = vec![
        row("atom_inside").value(norms.inside),
        row("atom_outside").value(norms.outside),
        row("atom_total").value(norms.total).tail(norms.tail),
        row("atom_domination")
            .value(domination)
            .check(domination <= 1.0 + 1e-9),
    ];
    let control = if config.negative_controls {
        let broken = atom.signal().abs();
        let tol = moment_tolerance(&cube, exps.p(), 0);
        let order = vanishing_order(&broken, cube.center(), tol, m as f64, pt.order)?;
        let (c, _) = atom_norms(&broken, &cube, exps, order, radius)?;
        rows.push(row("control_atom_abs_total").value(c.total).tail(c.tail));
        Some(c.total)
    } else {
        None
    };
    Ok(AtomResult {
        rows,
        total: norms.total,
        control,
    })
}
