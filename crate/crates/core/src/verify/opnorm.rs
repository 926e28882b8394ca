use std::fmt;

use rayon::prelude::*;

use super::config::{split_seed, SweepConfig};
use super::row::ExperimentRow;
use super::sampling::{default_support_radius, loglog_slope, random_signal, SignalKind};
use crate::error::Result;
use crate::exponents::{Exponent, Exponents};
use crate::lattice::{DenseGrid, DiscreteCube, LatticePoint, LatticeSignal};
use crate::norms::{lp_norm, lp_norm_values};
use crate::operators::{j_gamma, maximal_on_box, riesz_fft, EvaluationBox};

/// Slope threshold of the boundedness signature.
pub const SLOPE_THRESHOLD: f64 = 0.05;

/// The operator whose `l^p -> l^q` ratio is swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Riesz,
    JGamma,
    FractionalMaximal,
}

impl Operator {
    pub const ALL: [Operator; 3] = [
        Operator::Riesz,
        Operator::JGamma,
        Operator::FractionalMaximal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Riesz => "riesz",
            Operator::JGamma => "j_gamma",
            Operator::FractionalMaximal => "fractional_maximal",
        }
    }

    fn apply(self, b: &LatticeSignal, alpha: f64, out: &EvaluationBox) -> Result<DenseGrid> {
        match self {
            Operator::Riesz => riesz_fft(b, alpha, out),
            Operator::JGamma => j_gamma(b, alpha, out),
            Operator::FractionalMaximal => maximal_on_box(b, alpha, out),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `||T b||_{l^q(box)} / ||b||_{l^p}`.
pub fn norm_ratio(
    op: Operator,
    b: &LatticeSignal,
    exps: &Exponents,
    out: &EvaluationBox,
) -> Result<f64> {
    let image = op.apply(b, exps.alpha(), out)?;
    Ok(lp_norm_values(image.values(), Exponent::Finite(exps.q()))
        / lp_norm(b, Exponent::Finite(exps.p())))
}

#[derive(Clone, Copy)]
enum Input {
    Delta,
    Indicator(u64),
    Random(u64),
}

/// Ratios over `delta_0`, the indicators `chi_{Q(0,m)}` and random signals,
/// plus one slope row per `(n, p, alpha)` whose verdict requires the
/// log-log slope of the indicator ratios in `m` to be at most 0.05.
///
/// `J_gamma` is only swept for `n = 1`.
pub fn opnorm_sweep(op: Operator, config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut points = Vec::new();
    for &n in &config.dimensions {
        if op == Operator::JGamma && n != 1 {
            continue;
        }
        for &p in &config.norm_exponents() {
            for &ratio in &config.alpha_grid {
                if p * ratio < 1.0 {
                    points.push(Exponents::sobolev(n, p, ratio * n as f64)?);
                }
            }
        }
    }
    let mut jobs = Vec::new();
    for (k, exps) in points.iter().enumerate() {
        jobs.push((k, Input::Delta));
        for &m in &config.m_grid {
            jobs.push((k, Input::Indicator(m)));
        }
        for _ in 0..config.trials {
            jobs.push((k, Input::Random(default_support_radius(exps.n()))));
        }
    }
    let ratios: Vec<(ExperimentRow, f64)> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(k, input))| {
            let exps = &points[k];
            let n = exps.n();
            let out = EvaluationBox::centered(n, config.box_radius_for(n))?;
            let seed = split_seed(config.seed, idx as u64);
            let (suffix, b, m, seed) = match input {
                Input::Delta => (
                    "delta",
                    LatticeSignal::delta(LatticePoint::origin(n))?,
                    0,
                    0,
                ),
                Input::Indicator(m) => (
                    "indicator",
                    LatticeSignal::indicator(&DiscreteCube::centered(n, m)?),
                    m,
                    0,
                ),
                Input::Random(r) => (
                    "random",
                    random_signal(n, r, seed, SignalKind::Signed)?,
                    r,
                    seed,
                ),
            };
            let value = norm_ratio(op, &b, exps, &out)?;
            let row = ExperimentRow::new(format!("opnorm_{op}_{suffix}"), n)
                .exponents(exps.p(), exps.q(), exps.alpha())
                .m(m)
                .seed(seed)
                .value(value);
            Ok((row, value))
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<ExperimentRow> = Vec::new();
    for exps in &points {
        let mine: Vec<&(ExperimentRow, f64)> = ratios
            .iter()
            .filter(|(r, _)| r.n == exps.n() && r.p == exps.p() && r.alpha == exps.alpha())
            .collect();
        let curve: Vec<(f64, f64)> = mine
            .iter()
            .filter(|(r, _)| r.experiment.ends_with("_indicator"))
            .map(|(r, v)| (r.m as f64, *v))
            .collect();
        let max_ratio = mine.iter().map(|(_, v)| *v).fold(0.0, f64::max);
        let slope = loglog_slope(&curve);
        rows.push(
            ExperimentRow::new(format!("opnorm_{op}_slope"), exps.n())
                .exponents(exps.p(), exps.q(), exps.alpha())
                .seed(config.seed)
                .value(slope)
                .tail(max_ratio)
                .check(slope <= SLOPE_THRESHOLD),
        );
        if config.negative_controls && op == Operator::Riesz {
            rows.push(wrong_exponent_control(exps, config)?);
        }
    }
    rows.extend(ratios.into_iter().map(|(r, _)| r));
    Ok(rows)
}

/// Measures `I_alpha chi_Q` in `l^p` instead of `l^q`; the ratio then grows
/// like `m^alpha` and the slope rule must fail.
fn wrong_exponent_control(exps: &Exponents, config: &SweepConfig) -> Result<ExperimentRow> {
    let n = exps.n();
    let out = EvaluationBox::centered(n, config.box_radius_for(n))?;
    let mut curve = Vec::new();
    for &m in &config.m_grid {
        let b = LatticeSignal::indicator(&DiscreteCube::centered(n, m)?);
        let image = riesz_fft(&b, exps.alpha(), &out)?;
        let p = Exponent::Finite(exps.p());
        curve.push((m as f64, lp_norm_values(image.values(), p) / lp_norm(&b, p)));
    }
    let slope = loglog_slope(&curve);
    Ok(ExperimentRow::new("control_opnorm_wrong_exponent", n)
        .exponents(exps.p(), exps.q(), exps.alpha())
        .seed(config.seed)
        .value(slope)
        .check(slope <= SLOPE_THRESHOLD))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_leaves_ratio_unchanged() {
        let exps = Exponents::sobolev(1, 1.5, 0.5).unwrap();
        let out = EvaluationBox::centered(1, 40).unwrap();
        let b = random_signal(1, 4, 3, SignalKind::Signed).unwrap();
        for op in Operator::ALL {
            let r1 = norm_ratio(op, &b, &exps, &out).unwrap();
            let r2 = norm_ratio(op, &b.scale(2.0), &exps, &out).unwrap();
            assert!((r1 - r2).abs() <= 1e-12 * r1, "{op}");
        }
    }

    #[test]
    fn delta_ratio_is_kernel_norm() {
        let exps = Exponents::sobolev(1, 1.5, 0.5).unwrap();
        let out = EvaluationBox::centered(1, 30).unwrap();
        let delta = LatticeSignal::delta(LatticePoint::origin(1)).unwrap();
        let r = norm_ratio(Operator::Riesz, &delta, &exps, &out).unwrap();
        let expected: f64 = (1..=30)
            .map(|k| 2.0 * (k as f64).powf(-0.5 * 6.0))
            .sum::<f64>()
            .powf(1.0 / 6.0);
        assert!((r - expected).abs() < 1e-12);
    }

    #[test]
    fn sweep_emits_slope_rows() {
        let config = SweepConfig {
            dimensions: vec![1],
            p_grid: vec![1.5],
            alpha_grid: vec![0.5],
            m_grid: vec![1, 2, 4],
            trials: 1,
            box_radius: Some(40),
            negative_controls: true,
            ..SweepConfig::default()
        };
        let rows = opnorm_sweep(Operator::Riesz, &config).unwrap();
        assert!(rows.iter().any(|r| r.experiment == "opnorm_riesz_slope"));
        let control = rows
            .iter()
            .find(|r| r.experiment == "control_opnorm_wrong_exponent")
            .unwrap();
        assert_eq!(control.verdict, crate::verify::Verdict::Fail);
        assert_eq!(rows.len(), 1 + 1 + 1 + 3 + 1);
    }
}
