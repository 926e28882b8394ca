use rayon::prelude::*;

use super::config::{split_seed, SweepConfig};
use super::row::ExperimentRow;
use super::sampling::{random_signal, SignalKind};
use crate::error::Result;
use crate::lattice::DenseGrid;
use crate::operators::{
    convolve_fft, j_gamma, riesz_direct, riesz_fft, EvaluationBox, PowerKernel, DEFAULT_FFT_BUDGET,
};

/// Support radius of the random signals in the FFT comparison.
pub const FFT_SUPPORT_RADIUS: u64 = 8;
/// Output radius of the FFT comparison.
pub const FFT_OUTPUT_RADIUS: u64 = 16;
/// Exponents `gamma` of the `J_gamma = id + I_gamma` identity check.
pub const GAMMA_GRID: [f64; 3] = [0.25, 0.5, 0.75];

/// Tolerance of the FFT comparison.
pub const FFT_TOLERANCE: f64 = 1e-9;
/// Tolerance of the `J_gamma` identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// `max |x - y| / max |y|`.
pub fn relative_deviation(x: &DenseGrid, y: &DenseGrid) -> f64 {
    let scale = y.max_abs();
    let diff = x
        .values()
        .iter()
        .zip(y.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[derive(Clone, Copy)]
enum Job {
    Fft { n: usize, alpha: f64 },
    Identity { gamma: f64 },
}

/// FFT-versus-direct agreement for `I_alpha` and the identity
/// `J_gamma b - I_gamma b = b` on `Z`.
pub fn riesz_consistency(config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &n in &config.dimensions {
        for &ratio in &config.alpha_grid {
            for _ in 0..config.trials {
                jobs.push(Job::Fft {
                    n,
                    alpha: ratio * n as f64,
                });
            }
        }
    }
    if config.dimensions.contains(&1) {
        for &gamma in &GAMMA_GRID {
            for _ in 0..config.trials {
                jobs.push(Job::Identity { gamma });
            }
        }
    }
    let rows: Vec<Vec<ExperimentRow>> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, job)| {
            let seed = split_seed(config.seed, idx as u64);
            match *job {
                Job::Fft { n, alpha } => fft_rows(n, alpha, seed, config.negative_controls),
                Job::Identity { gamma } => identity_row(gamma, seed).map(|r| vec![r]),
            }
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn fft_rows(n: usize, alpha: f64, seed: u64, control: bool) -> Result<Vec<ExperimentRow>> {
    let b = random_signal(n, FFT_SUPPORT_RADIUS, seed, SignalKind::Signed)?;
    let out = EvaluationBox::centered(n, FFT_OUTPUT_RADIUS)?;
    let direct = riesz_direct(&b, alpha, &out)?;
    let fast = riesz_fft(&b, alpha, &out)?;
    let dev = relative_deviation(&fast, &direct);
    let row = |name: &str| {
        ExperimentRow::new(name, n)
            .alpha(alpha)
            .m(FFT_OUTPUT_RADIUS)
            .seed(seed)
    };
    let mut rows = vec![row("riesz_fft_agreement")
        .value(dev)
        .tail(direct.max_abs())
        .check(dev <= FFT_TOLERANCE)];
    if control {
        // a kernel with a slightly wrong exponent must be caught
        let wrong = convolve_fft(
            &b,
            &PowerKernel::new(alpha - n as f64 + 0.05),
            &out,
            DEFAULT_FFT_BUDGET,
        )?;
        let dev = relative_deviation(&wrong, &direct);
        rows.push(
            row("control_fft_wrong_kernel")
                .value(dev)
                .check(dev <= FFT_TOLERANCE),
        );
    }
    Ok(rows)
}

fn identity_row(gamma: f64, seed: u64) -> Result<ExperimentRow> {
    let b = random_signal(1, FFT_SUPPORT_RADIUS, seed, SignalKind::Signed)?;
    let out = EvaluationBox::centered(1, FFT_OUTPUT_RADIUS)?;
    let j = j_gamma(&b, gamma, &out)?;
    let i = riesz_direct(&b, gamma, &out)?;
    let dense_b = b.to_dense(out.bounds())?;
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for ((jv, iv), bv) in j.values().iter().zip(i.values()).zip(dense_b.values()) {
        diff = diff.max((jv - iv - bv).abs());
        scale = scale.max(jv.abs()).max(bv.abs());
    }
    let rel = if scale > 0.0 { diff / scale } else { diff };
    Ok(ExperimentRow::new("j_gamma_identity", 1)
        .alpha(gamma)
        .m(FFT_OUTPUT_RADIUS)
        .seed(seed)
        .value(rel)
        .check(rel <= IDENTITY_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;

    #[test]
    fn consistency_passes_in_one_dimension() {
        let config = SweepConfig {
            dimensions: vec![1],
            alpha_grid: vec![0.5],
            trials: 2,
            negative_controls: true,
            ..SweepConfig::default()
        };
        let rows = riesz_consistency(&config).unwrap();
        assert_eq!(rows.len(), 2 * 2 + 3 * 2);
        for r in rows {
            let expected = if r.experiment.starts_with("control_") {
                Verdict::Fail
            } else {
                Verdict::Pass
            };
            assert_eq!(r.verdict, expected, "{r:?}");
        }
    }
}
