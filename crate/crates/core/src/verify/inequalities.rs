use rayon::prelude::*;

use super::config::{split_seed, SweepConfig};
use super::row::ExperimentRow;
use super::sampling::{default_support_radius, random_signal, SignalKind};
use crate::error::Result;
use crate::exponents::{Exponent, Exponents};
use crate::lattice::{LatticeBox, LatticePoint, LatticeSignal};
use crate::norms::{iterated_sum, lp_norm, partial_sums, PartialSumMode};
use crate::operators::{
    convolve_direct, holder_pointwise_pair, kernel_lp_bound, riesz_direct, separable_majorant,
    EvaluationBox, PowerKernel,
};
use crate::series::{elementary_inequalities, inverse_power_term, series_tail_bound};

/// Exponents `eps` of the multinomial inequality sweep.
pub const MULTINOMIAL_EPS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
/// Exponents `eps` of the series bound.
pub const SERIES_EPS: [f64; 3] = [0.5, 1.0, 2.0];
/// `|k|_inf` range of the exhaustive sweeps.
pub const EXHAUSTIVE_RADIUS: u64 = 20;
/// Largest partial-sum index checked against the series bound.
pub const SERIES_MAX_N: u64 = 64;
/// Radius of the box of evaluation points for the pointwise estimates.
pub const POINTWISE_RADIUS: u64 = 10;

/// Slack for pointwise inequalities.
const SLACK: f64 = 1e-9;

/// Exhaustive lattice sweeps, series-bound checks and randomized pointwise
/// estimates. With `negative_controls`, a kernel with the wrong exponent is
/// tested against the separable majorant and must fail.
pub fn inequality_suite(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &n in &config.dimensions {
        rows.extend(elementary_rows(n)?);
        rows.extend(series_rows(n)?);
    }
    let mut jobs = Vec::new();
    for &n in &config.dimensions {
        for &p in &config.norm_exponents() {
            for &ratio in &config.alpha_grid {
                let alpha = ratio * n as f64;
                if p * ratio >= 1.0 {
                    continue;
                }
                for trial in 0..config.trials as u64 {
                    jobs.push((n, p, alpha, trial));
                }
            }
        }
    }
    let per_job: Vec<Vec<ExperimentRow>> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(n, p, alpha, _))| {
            let seed = split_seed(config.seed, idx as u64);
            pointwise_rows(n, p, alpha, seed, config.negative_controls)
        })
        .collect::<Result<_>>()?;
    rows.extend(per_job.into_iter().flatten());
    Ok(rows)
}

fn elementary_rows(n: usize) -> Result<Vec<ExperimentRow>> {
    let r = EXHAUSTIVE_RADIUS as i64;
    let bounds = LatticeBox::new(vec![-r; n], vec![r; n])?;
    let mut points = Vec::with_capacity(bounds.volume());
    bounds.for_each_point(|k| {
        if k.iter().any(|&c| c != 0) {
            points.push(LatticePoint::new(k));
        }
    });
    let mut rows = Vec::new();
    let mut all_norm = true;
    let mut min_norm_margin = f64::INFINITY;
    for &eps in &MULTINOMIAL_EPS {
        let mut all = true;
        let mut min_margin = f64::INFINITY;
        for k in &points {
            let c = elementary_inequalities(k, eps)?;
            all &= c.multinomial;
            all_norm &= c.norm_comparison;
            min_margin = min_margin.min(c.multinomial_log_margin);
            min_norm_margin = min_norm_margin.min(c.norm_margin);
        }
        rows.push(
            ExperimentRow::new("ineq_multinomial", n)
                .alpha(eps)
                .m(EXHAUSTIVE_RADIUS)
                .value(min_margin)
                .check(all),
        );
    }
    rows.push(
        ExperimentRow::new("ineq_norm_comparison", n)
            .m(EXHAUSTIVE_RADIUS)
            .value(min_norm_margin)
            .check(all_norm),
    );

    // quadratic sum versus the iterated sum over the same box
    let term = inverse_power_term(n, 1.0);
    let quadratic = partial_sums(n, EXHAUSTIVE_RADIUS, PartialSumMode::Quadratic, term)?;
    let mut worst: f64 = 0.0;
    for big_n in 1..=EXHAUSTIVE_RADIUS {
        let it = iterated_sum(n, big_n, term)?;
        worst = worst.max((quadratic[big_n as usize] - it) / it);
    }
    rows.push(
        ExperimentRow::new("remark_iterated_sum", n)
            .alpha(1.0)
            .m(EXHAUSTIVE_RADIUS)
            .value(worst)
            .check(worst <= SLACK),
    );
    Ok(rows)
}

fn series_rows(n: usize) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for &eps in &SERIES_EPS {
        let sums = partial_sums(
            n,
            SERIES_MAX_N,
            PartialSumMode::Quadratic,
            inverse_power_term(n, eps),
        )?;
        let bound = series_tail_bound(n, eps)?;
        let monotone = sums.windows(2).all(|w| w[1] >= w[0]);
        let last = sums[SERIES_MAX_N as usize];
        rows.push(
            ExperimentRow::new("lemma_series_bound", n)
                .alpha(eps)
                .m(SERIES_MAX_N)
                .value(last)
                .tail(bound)
                .check(monotone && last <= bound),
        );
        if n == 1 && eps == 1.0 {
            // 2 sum_{k > N} k^{-2} lies in [2/(N+1), 2/N]
            let big_n = SERIES_MAX_N as f64;
            let lower = last + 2.0 / (big_n + 1.0);
            let upper = last + 2.0 / big_n;
            let estimate = 0.5 * (lower + upper);
            let exact = std::f64::consts::PI.powi(2) / 3.0;
            let rel = (estimate - exact).abs() / exact;
            rows.push(
                ExperimentRow::new("lemma_full_sum", n)
                    .alpha(eps)
                    .m(SERIES_MAX_N)
                    .value(estimate)
                    .tail(rel)
                    .check(rel <= 0.01 && lower <= exact && exact <= upper),
            );
        }
    }
    Ok(rows)
}

fn pointwise_rows(
    n: usize,
    p: f64,
    alpha: f64,
    seed: u64,
    negative_controls: bool,
) -> Result<Vec<ExperimentRow>> {
    let exps = Exponents::sobolev(n, p, alpha)?;
    let q = exps.q();
    let b = random_signal(n, default_support_radius(n), seed, SignalKind::Signed)?;
    let out = EvaluationBox::centered(n, POINTWISE_RADIUS)?;
    let riesz = riesz_direct(&b, alpha, &out)?;
    let bound = lp_norm(&b, Exponent::Finite(p)) * kernel_lp_bound(n, alpha, p)?;

    let mut holder: f64 = 0.0;
    let mut majorant: f64 = 0.0;
    let mut holder_all = true;
    let mut majorant_all = true;
    let mut kernel_all = true;
    let mut kernel_ratio: f64 = 0.0;
    for j in out.bounds().points() {
        let (lhs, rhs) = holder_pointwise_pair(&b, &exps, &j)?;
        holder_all &= lhs <= rhs * (1.0 + SLACK);
        if rhs > 0.0 {
            holder = holder.max(lhs / rhs);
        }
        let i_val = riesz.get(&j).expect("point in box").abs();
        let maj = separable_majorant(&b, alpha, &j)?;
        majorant_all &= i_val <= maj * (1.0 + SLACK);
        if maj > 0.0 {
            majorant = majorant.max(i_val / maj);
        }
        kernel_all &= i_val <= bound * (1.0 + SLACK);
        kernel_ratio = kernel_ratio.max(i_val / bound);
    }
    let row = |name: &str| {
        ExperimentRow::new(name, n)
            .exponents(p, q, alpha)
            .m(POINTWISE_RADIUS)
            .seed(seed)
    };
    let mut rows = vec![
        row("holder_pointwise").value(holder).check(holder_all),
        row("separable_majorant")
            .value(majorant)
            .check(majorant_all),
        row("kernel_holder_bound")
            .value(kernel_ratio)
            .tail(bound)
            .check(kernel_all),
    ];
    if negative_controls {
        rows.push(
            corrupted_majorant_row(&b, alpha, &out)?
                .exponents(p, q, alpha)
                .seed(seed),
        );
    }
    Ok(rows)
}

/// Kernel `|v|^alpha` in place of `|v|^{alpha-n}` against the majorant.
fn corrupted_majorant_row(
    b: &LatticeSignal,
    alpha: f64,
    out: &EvaluationBox,
) -> Result<ExperimentRow> {
    let n = b.dim();
    let wrong = convolve_direct(b, &PowerKernel::new(alpha), out)?;
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for j in out.bounds().points() {
        let v = wrong.get(&j).expect("point in box").abs();
        let maj = separable_majorant(b, alpha, &j)?;
        ok &= v <= maj * (1.0 + SLACK);
        if maj > 0.0 {
            worst = worst.max(v / maj);
        }
    }
    Ok(ExperimentRow::new("control_corrupted_kernel", n)
        .m(POINTWISE_RADIUS)
        .value(worst)
        .check(ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;

    #[test]
    fn small_suite_passes_and_control_fails() {
        let config = SweepConfig {
            dimensions: vec![1],
            p_grid: vec![1.5],
            alpha_grid: vec![0.5],
            trials: 2,
            negative_controls: true,
            ..SweepConfig::default()
        };
        let rows = inequality_suite(&config).unwrap();
        for r in &rows {
            if r.experiment.starts_with("control_") {
                assert_eq!(r.verdict, Verdict::Fail, "{r:?}");
            } else {
                assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            }
        }
        assert!(rows.iter().any(|r| r.experiment == "lemma_full_sum"));
    }

    #[test]
    fn empty_grids_give_no_pointwise_rows() {
        let config = SweepConfig {
            dimensions: vec![],
            ..SweepConfig::default()
        };
        assert!(inequality_suite(&config).unwrap().is_empty());
    }
}
