use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Outcome of one experiment row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// A measured value with no pass/fail rule attached.
    Recorded,
}

impl Verdict {
    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Recorded => "recorded",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "recorded" => Ok(Verdict::Recorded),
            other => Err(format!("unknown verdict `{other}`")),
        }
    }
}

/// One record of a sweep.
///
/// Fields that do not apply to an experiment are `NaN` (reals) or 0
/// (integers). Inequality rows that sweep an exponent `eps` store it in
/// `alpha`.
#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub experiment: String,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub m: u64,
    pub seed: u64,
    pub value: f64,
    pub tail: f64,
    pub verdict: Verdict,
}

impl ExperimentRow {
    pub fn new(experiment: impl Into<String>, n: usize) -> Self {
        Self {
            experiment: experiment.into(),
            n,
            p: f64::NAN,
            q: f64::NAN,
            alpha: f64::NAN,
            m: 0,
            seed: 0,
            value: f64::NAN,
            tail: f64::NAN,
            verdict: Verdict::Recorded,
        }
    }

    pub fn exponents(mut self, p: f64, q: f64, alpha: f64) -> Self {
        self.p = p;
        self.q = q;
        self.alpha = alpha;
        self
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn m(mut self, m: u64) -> Self {
        self.m = m;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn value(mut self, value: f64) -> Self {
        self.value = value;
        self
    }

    pub fn tail(mut self, tail: f64) -> Self {
        self.tail = tail;
        self
    }

    pub fn verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn check(self, ok: bool) -> Self {
        self.verdict(Verdict::from_check(ok))
    }

    /// Field-wise equality with reals compared bit for bit.
    pub fn same_bits(&self, other: &Self) -> bool {
        self.experiment == other.experiment
            && self.n == other.n
            && self.p.to_bits() == other.p.to_bits()
            && self.q.to_bits() == other.q.to_bits()
            && self.alpha.to_bits() == other.alpha.to_bits()
            && self.m == other.m
            && self.seed == other.seed
            && self.value.to_bits() == other.value.to_bits()
            && self.tail.to_bits() == other.tail.to_bits()
            && self.verdict == other.verdict
    }

    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.experiment
            .cmp(&other.experiment)
            .then(self.n.cmp(&other.n))
            .then(self.p.total_cmp(&other.p))
            .then(self.alpha.total_cmp(&other.alpha))
            .then(self.m.cmp(&other.m))
            .then(self.seed.cmp(&other.seed))
    }
}

/// Deterministic order by `(experiment, n, p, alpha, m, seed)`; the sort is
/// stable, so rows with equal keys keep their generation order.
pub fn sort_rows(rows: &mut [ExperimentRow]) {
    rows.sort_by(|a, b| a.sort_key_cmp(b));
}

/// `true` when no row failed.
pub fn all_pass(rows: &[ExperimentRow]) -> bool {
    rows.iter().all(|r| r.verdict != Verdict::Fail)
}
