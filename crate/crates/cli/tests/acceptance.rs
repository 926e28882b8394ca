//! Acceptance criteria 1-12, one PASS/FAIL line each.
//!
//! Every criterion is evaluated even when an earlier one fails; the test
//! fails at the end if any criterion did.

use std::time::{Duration, Instant};

use lattice_riesz::verify::{
    atom_uniform_sweep, atom_validity_suite, inequality_suite, maximal_suite, riesz_consistency,
    run_suite, taylor_suite, weak_type_record, ExperimentRow, Suite, SweepConfig, Verdict,
};
use lattice_riesz_cli::rows_to_csv;

const IDENTITY_TOL: f64 = 1e-12;
const FFT_TOL: f64 = 1e-9;
const FULL_SUM_TOL: f64 = 0.01;
const MOMENT_RATIO_MAX: f64 = 1.0;
const SLOPE_BAND: f64 = 0.05;
const SPREAD_MAX: f64 = 4.0;
const CONTROL_SLOPE_MIN: f64 = 0.3;
const FD_TOL: f64 = 1e-6;
const ATOM_BUDGET: Duration = Duration::from_secs(15 * 60);

fn config(dimensions: &[usize], p: &[f64], ratios: &[f64], m: &[u64], trials: u32) -> SweepConfig {
    SweepConfig {
        dimensions: dimensions.to_vec(),
        p_grid: p.to_vec(),
        alpha_grid: ratios.to_vec(),
        m_grid: m.to_vec(),
        trials,
        ..SweepConfig::default()
    }
}

fn named<'a>(rows: &'a [ExperimentRow], name: &str) -> Vec<&'a ExperimentRow> {
    rows.iter().filter(|r| r.experiment == name).collect()
}

fn passes(rows: &[&ExperimentRow]) -> bool {
    !rows.is_empty() && rows.iter().all(|r| r.verdict == Verdict::Pass)
}

fn max_value(rows: &[&ExperimentRow]) -> f64 {
    rows.iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max)
}

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn record(&mut self, id: u32, ok: bool, what: &str, detail: String) {
        println!(
            "{} criterion {id:>2}: {what} [{detail}]",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            self.failed.push(id);
        }
    }
}

fn criterion_1(report: &mut Report) {
    let rows = riesz_consistency(&config(&[1], &[1.5], &[0.5], &[1], 100)).unwrap();
    let id = named(&rows, "j_gamma_identity");
    let worst = max_value(&id);
    let ok = id.len() == 300 && passes(&id) && worst <= IDENTITY_TOL;
    report.record(
        1,
        ok,
        "J_gamma b - I_gamma b = b",
        format!("{} signals, max rel {worst:.3e}", id.len()),
    );
}

fn criterion_2(report: &mut Report) {
    let rows = riesz_consistency(&config(&[1, 2, 3], &[1.5], &[0.5], &[1], 20)).unwrap();
    let fft = named(&rows, "riesz_fft_agreement");
    let worst = max_value(&fft);
    let ok = fft.len() == 60 && passes(&fft) && worst <= FFT_TOL;
    report.record(
        2,
        ok,
        "riesz_fft vs riesz_direct",
        format!("{} signals, max rel {worst:.3e}", fft.len()),
    );
}

fn criteria_3_4(report: &mut Report) {
    let rows = inequality_suite(&config(&[1, 2, 3], &[], &[0.5], &[1], 1)).unwrap();
    let series = named(&rows, "lemma_series_bound");
    let full = named(&rows, "lemma_full_sum");
    let full_rel = full.first().map_or(f64::NAN, |r| r.tail);
    let ok = series.len() == 9 && passes(&series) && passes(&full) && full_rel <= FULL_SUM_TOL;
    report.record(
        3,
        ok,
        "partial sums monotone and bounded; full sum near pi^2/3",
        format!("{} bound rows, full-sum rel {full_rel:.3e}", series.len()),
    );

    let multinomial = named(&rows, "ineq_multinomial");
    let norm = named(&rows, "ineq_norm_comparison");
    let iterated = named(&rows, "remark_iterated_sum");
    let ok = multinomial.len() == 12
        && norm.len() == 3
        && iterated.len() == 3
        && passes(&multinomial)
        && passes(&norm)
        && passes(&iterated);
    report.record(
        4,
        ok,
        "exhaustive elementary inequalities and iterated sums, |k| <= 20",
        format!(
            "{} + {} + {} rows",
            multinomial.len(),
            norm.len(),
            iterated.len()
        ),
    );
}

fn criteria_5_6(report: &mut Report) {
    let rows = inequality_suite(&config(&[1, 2], &[1.5], &[0.5], &[1], 50)).unwrap();
    let holder = named(&rows, "holder_pointwise");
    report.record(
        5,
        holder.len() == 100 && passes(&holder),
        "pointwise Hoelder estimate of the fractional maximal",
        format!(
            "{} signals, max lhs/rhs {:.6}",
            holder.len(),
            max_value(&holder)
        ),
    );
    let majorant = named(&rows, "separable_majorant");
    let kernel = named(&rows, "kernel_holder_bound");
    report.record(
        6,
        majorant.len() == 100 && kernel.len() == 100 && passes(&majorant) && passes(&kernel),
        "separable majorant and kernel Hoelder bound",
        format!(
            "max ratios {:.6} / {:.6}",
            max_value(&majorant),
            max_value(&kernel)
        ),
    );
}

fn criterion_7(report: &mut Report) {
    let rows = atom_validity_suite(&config(
        &[1, 2],
        &[1.0, 0.8, 0.6],
        &[0.5],
        &[1, 2, 4, 8, 16],
        7,
    ))
    .unwrap();
    let atoms = named(&rows, "atom_validity");
    let worst = max_value(&atoms);
    let ok = atoms.len() >= 200 && passes(&atoms) && worst <= MOMENT_RATIO_MAX;
    report.record(
        7,
        ok,
        "generated atoms are valid",
        format!("{} atoms, worst moment/tol {worst:.3e}", atoms.len()),
    );
}

fn criteria_8_9(report: &mut Report) {
    let mut cfg = config(&[1, 2], &[1.0, 0.8], &[0.25, 0.5], &[1, 2, 4, 8, 16], 8);
    cfg.negative_controls = true;
    let start = Instant::now();
    let rows = atom_uniform_sweep(&cfg).unwrap();
    let elapsed = start.elapsed();

    let slopes = named(&rows, "atom_uniform_slope");
    let in_band = slopes
        .iter()
        .all(|r| r.value.abs() <= SLOPE_BAND && r.tail <= SPREAD_MAX);
    let worst = slopes.iter().map(|r| r.value.abs()).fold(0.0, f64::max);
    let spread = slopes.iter().map(|r| r.tail).fold(0.0, f64::max);
    let ok = slopes.len() == 8 && in_band && passes(&slopes) && elapsed <= ATOM_BUDGET;
    report.record(
        8,
        ok,
        "atom norms uniform in m",
        format!(
            "max |slope| {worst:.3}, max spread {spread:.3}, {:.0?}",
            elapsed
        ),
    );

    let controls: Vec<&ExperimentRow> = named(&rows, "control_atom_abs_slope")
        .into_iter()
        .filter(|r| r.p == 1.0)
        .collect();
    let caught = !controls.is_empty()
        && controls
            .iter()
            .all(|r| r.value >= CONTROL_SLOPE_MIN && r.verdict == Verdict::Fail);
    let slopes: Vec<String> = controls.iter().map(|r| format!("{}", r.value)).collect();
    report.record(
        9,
        caught,
        "broken-moment control is detected at p = 1",
        format!("slopes {}", slopes.join(", ")),
    );
}

fn criterion_10(report: &mut Report) {
    let rows = taylor_suite(&config(&[1], &[1.0], &[0.25, 0.5], &[1, 2, 4], 1)).unwrap();
    let remainder: Vec<&ExperimentRow> = rows
        .iter()
        .filter(|r| r.experiment.starts_with("taylor_remainder_order"))
        .collect();
    let first = named(&rows, "taylor_first_order");
    let fd = max_value(&first);
    let ok = remainder.len() == 18
        && first.len() == 6
        && passes(&remainder)
        && passes(&first)
        && fd <= FD_TOL;
    report.record(
        10,
        ok,
        "Taylor remainder envelope and first-order coefficients",
        format!(
            "max remainder/envelope {:.3e}, max fd rel {fd:.3e}",
            max_value(&remainder)
        ),
    );
}

fn criterion_11(report: &mut Report) {
    let delta = maximal_suite(&config(&[1], &[1.5], &[0.5], &[1], 1)).unwrap();
    let exact = named(&delta, "maximal_delta");
    let weak = weak_type_record(&config(&[1, 2], &[1.5], &[0.5], &[1], 100)).unwrap();
    let weak_rows = named(&weak, "weak_type");
    let ok = exact.len() == 2 && passes(&exact) && weak_rows.len() == 200 && passes(&weak_rows);
    report.record(
        11,
        ok,
        "maximal of a delta is exact; weak type (1,1) with 3^n",
        format!(
            "{} weak rows, max ratio/3^n {:.4}",
            weak_rows.len(),
            weak_rows
                .iter()
                .map(|r| r.value / r.tail)
                .fold(0.0, f64::max)
        ),
    );
}

fn criterion_12(report: &mut Report) {
    let mut cfg = config(&[1, 2], &[1.0, 1.5], &[0.5], &[1, 2, 4], 2);
    cfg.negative_controls = true;
    let mut all_same = true;
    let mut sizes = Vec::new();
    for suite in Suite::ALL.into_iter().filter(|s| *s != Suite::All) {
        let a = rows_to_csv(&run_suite(suite, &cfg).unwrap()).unwrap();
        let b = rows_to_csv(&run_suite(suite, &cfg).unwrap()).unwrap();
        all_same &= a == b;
        sizes.push(format!("{suite}:{}", a.len()));
    }
    report.record(
        12,
        all_same,
        "reruns give byte-identical CSV",
        sizes.join(" "),
    );
}

#[test]
fn acceptance_criteria() {
    let mut report = Report { failed: Vec::new() };
    criterion_1(&mut report);
    criterion_2(&mut report);
    criteria_3_4(&mut report);
    criteria_5_6(&mut report);
    criterion_7(&mut report);
    criteria_8_9(&mut report);
    criterion_10(&mut report);
    criterion_11(&mut report);
    criterion_12(&mut report);
    assert!(
        report.failed.is_empty(),
        "failed criteria: {:?}",
        report.failed
    );
}
