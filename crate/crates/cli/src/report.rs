//! CSV and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lattice_riesz::verify::{ExperimentRow, Verdict};
use thiserror::Error;

pub const CSV_HEADER: [&str; 10] = [
    "experiment",
    "n",
    "p",
    "q",
    "alpha",
    "m",
    "seed",
    "value",
    "tail",
    "verdict",
];

/// Name of the results table inside the output directory.
pub const CSV_NAME: &str = "rows.csv";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv record {record}: bad field `{field}`")]
    Field { record: usize, field: String },
    #[error("no rows to report")]
    Empty,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// 17 significant digits: parsing the text gives back the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows as CSV text with LF line endings.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> Result<String, ReportError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(CSV_HEADER)?;
    for r in rows {
        writer.write_record([
            r.experiment.clone(),
            r.n.to_string(),
            format_float(r.p),
            format_float(r.q),
            format_float(r.alpha),
            r.m.to_string(),
            r.seed.to_string(),
            format_float(r.value),
            format_float(r.tail),
            r.verdict.to_string(),
        ])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| ReportError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Inverse of [`rows_to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRow>, ReportError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let field = |k: usize| record.get(k).unwrap_or("");
        let bad = |k: usize| ReportError::Field {
            record: idx + 1,
            field: field(k).to_string(),
        };
        let real = |k: usize| field(k).parse::<f64>().map_err(|_| bad(k));
        let int = |k: usize| field(k).parse::<u64>().map_err(|_| bad(k));
        let mut row = ExperimentRow::new(field(0), int(1)? as usize);
        row.p = real(2)?;
        row.q = real(3)?;
        row.alpha = real(4)?;
        row.m = int(5)?;
        row.seed = int(6)?;
        row.value = real(7)?;
        row.tail = real(8)?;
        row.verdict = field(9).parse::<Verdict>().map_err(|_| bad(9))?;
        rows.push(row);
    }
    Ok(rows)
}

/// What an experiment's plot puts on the horizontal axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Abscissa {
    /// Cube radius, log-log axes.
    M,
    /// Exponent `p`, linear axes.
    P,
    /// Row position, linear axes.
    Index,
}

fn distinct(values: impl Iterator<Item = f64>) -> usize {
    let mut v: Vec<u64> = values.filter(|x| x.is_finite()).map(f64::to_bits).collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

pub fn abscissa(rows: &[&ExperimentRow]) -> Abscissa {
    if distinct(rows.iter().filter(|r| r.m > 0).map(|r| r.m as f64)) > 1 {
        Abscissa::M
    } else if distinct(rows.iter().map(|r| r.p)) > 1 {
        Abscissa::P
    } else {
        Abscissa::Index
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: &[f64], log: bool) -> Self {
        let t: Vec<f64> = values
            .iter()
            .map(|&v| if log { v.log10() } else { v })
            .collect();
        let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        };
        Self { lo, hi, log }
    }

    fn unit(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        (t - self.lo) / (self.hi - self.lo)
    }

    fn label(&self, u: f64) -> String {
        let t = self.lo + u * (self.hi - self.lo);
        format!("{:.3e}", if self.log { 10f64.powf(t) } else { t })
    }
}

fn series_key(r: &ExperimentRow) -> String {
    let mut key = format!("n={}", r.n);
    for (name, v) in [("p", r.p), ("alpha", r.alpha)] {
        if v.is_finite() {
            let _ = write!(key, " {name}={v}");
        }
    }
    key
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// A self-contained SVG scatter of `value` for one experiment; series are
/// grouped by `(n, p, alpha)`. Non-finite values (and non-positive ones on
/// log axes) are left out.
pub fn render_svg(experiment: &str, rows: &[&ExperimentRow]) -> String {
    let mode = abscissa(rows);
    let x_of = |idx: usize, r: &ExperimentRow| match mode {
        Abscissa::M => r.m as f64,
        Abscissa::P => r.p,
        Abscissa::Index => idx as f64,
    };
    let log = mode == Abscissa::M;
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for (idx, r) in rows.iter().enumerate() {
        let (x, y) = (x_of(idx, r), r.value);
        let ok = x.is_finite() && y.is_finite() && (!log || (x > 0.0 && y > 0.0));
        if ok {
            series.entry(series_key(r)).or_default().push((x, y));
        }
    }
    let xs: Vec<f64> = series.values().flatten().map(|p| p.0).collect();
    let ys: Vec<f64> = series.values().flatten().map(|p| p.1).collect();
    let (ax, ay) = (Axis::fit(&xs, log), Axis::fit(&ys, log));
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let px = |x: f64| MARGIN + ax.unit(x) * pw;
    let py = |y: f64| HEIGHT - MARGIN - ay.unit(y) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(experiment)
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
    );
    for k in 0..=4 {
        let u = k as f64 / 4.0;
        let (gx, gy) = (MARGIN + u * pw, HEIGHT - MARGIN - u * ph);
        let _ = writeln!(
            svg,
            r#"<text x="{gx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN + 16.0,
            ax.label(u)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            MARGIN - 4.0,
            gy + 4.0,
            ay.label(u)
        );
    }
    let x_name = match mode {
        Abscissa::M => "m (log)",
        Abscissa::P => "p",
        Abscissa::Index => "row",
    };
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_name}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        if log { "value (log)" } else { "value" }
    );
    for (s, (key, points)) in series.iter().enumerate() {
        let color = COLORS[s % COLORS.len()];
        for &(x, y) in points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(x),
                py(y)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            MARGIN + 6.0,
            MARGIN + 14.0 + 13.0 * s as f64,
            escape(key)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Rows grouped by experiment, in first-appearance order of the sorted rows.
pub fn group_by_experiment(rows: &[ExperimentRow]) -> BTreeMap<&str, Vec<&ExperimentRow>> {
    let mut groups: BTreeMap<&str, Vec<&ExperimentRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(r.experiment.as_str()).or_default().push(r);
    }
    groups
}

/// Appends `.partial` to a file name.
pub fn partial_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".partial");
    PathBuf::from(s)
}

/// Writes `contents` under a `.partial` name; returns the temporary path.
fn write_partial(path: &Path, contents: &str) -> Result<PathBuf, ReportError> {
    let tmp = partial_path(path);
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    Ok(tmp)
}

/// Writes `rows.csv` and one `<experiment>.svg` per experiment into
/// `out_dir`. Files carry a `.partial` suffix until every one is written.
/// Returns the final paths, CSV first.
pub fn emit_report(rows: &[ExperimentRow], out_dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut staged = Vec::new();
    let csv_path = out_dir.join(CSV_NAME);
    staged.push((write_partial(&csv_path, &rows_to_csv(rows)?)?, csv_path));
    for (experiment, group) in group_by_experiment(rows) {
        let path = out_dir.join(format!("{experiment}.svg"));
        staged.push((write_partial(&path, &render_svg(experiment, &group))?, path));
    }
    let mut finals = Vec::with_capacity(staged.len());
    for (tmp, path) in staged {
        fs::rename(&tmp, &path).map_err(io_err(&path))?;
        finals.push(path);
    }
    Ok(finals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ExperimentRow> {
        vec![
            ExperimentRow::new("a", 1)
                .exponents(1.0, 2.0, 0.5)
                .m(1)
                .seed(3)
                .value(0.1)
                .check(true),
            ExperimentRow::new("a", 1)
                .exponents(1.0, 2.0, 0.5)
                .m(2)
                .seed(4)
                .value(0.2)
                .tail(f64::INFINITY),
            ExperimentRow::new("b", 2).value(-0.0).check(false),
        ]
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = sample();
        let text = rows_to_csv(&rows).unwrap();
        assert!(text.starts_with("experiment,n,p,q,alpha,m,seed,value,tail,verdict\n"));
        assert!(!text.contains('\r'));
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            assert!(a.same_bits(b), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn abscissa_choice() {
        let rows = sample();
        let refs: Vec<&ExperimentRow> = rows.iter().take(2).collect();
        assert_eq!(abscissa(&refs), Abscissa::M);
        let p_rows = [
            ExperimentRow::new("c", 1).p(1.0),
            ExperimentRow::new("c", 1).p(0.8),
        ];
        let refs: Vec<&ExperimentRow> = p_rows.iter().collect();
        assert_eq!(abscissa(&refs), Abscissa::P);
        let svg = render_svg("c", &refs);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
