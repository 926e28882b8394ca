//! Reproducible numerical experiments.
//!
//! Every sweep takes a [`SweepConfig`] and returns [`ExperimentRow`]s whose
//! seeds are derived from the root seed, so a run is a pure function of its
//! configuration. [`run_suite`] sorts the rows canonically.

mod atoms;
mod config;
mod inequalities;
mod maximal;
mod opnorm;
mod riesz;
mod row;
mod sampling;

use std::fmt;
use std::str::FromStr;

pub use atoms::{
    atom_norms, atom_uniform_sweep, atom_validity_suite, taylor_suite, AtomNorms,
    DOMINATION_SAMPLES, FD_STEP, FD_TOLERANCE, SPREAD_CAP, TAYLOR_ORDERS, TAYLOR_SAMPLES,
};
pub use config::{split_seed, SweepConfig};
pub use inequalities::{
    inequality_suite, EXHAUSTIVE_RADIUS, MULTINOMIAL_EPS, POINTWISE_RADIUS, SERIES_EPS,
    SERIES_MAX_N,
};
pub use maximal::{
    maximal_suite, weak_type_constant, weak_type_record, DELTA_RADIUS, MAXIMAL_LP_EXPONENTS,
    REFINEMENT_MAX_M, REFINEMENT_TOLERANCE, WEAK_TYPE_LEVELS,
};
pub use opnorm::{norm_ratio, opnorm_sweep, Operator, SLOPE_THRESHOLD};
pub use riesz::{
    relative_deviation, riesz_consistency, FFT_OUTPUT_RADIUS, FFT_SUPPORT_RADIUS, FFT_TOLERANCE,
    GAMMA_GRID, IDENTITY_TOLERANCE,
};
pub use row::{all_pass, sort_rows, ExperimentRow, Verdict};
pub use sampling::{
    default_support_radius, loglog_slope, point_in_shell, random_signal, rng, spread, SignalKind,
};

use crate::error::{Error, Result};

/// A named group of sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Riesz,
    Maximal,
    Atoms,
    Opnorm,
    Inequalities,
    WeakType,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Riesz,
        Suite::Maximal,
        Suite::Atoms,
        Suite::Opnorm,
        Suite::Inequalities,
        Suite::WeakType,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Riesz => "riesz",
            Suite::Maximal => "maximal",
            Suite::Atoms => "atoms",
            Suite::Opnorm => "opnorm",
            Suite::Inequalities => "inequalities",
            Suite::WeakType => "weaktype",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// Runs one suite and returns its rows in canonical order.
pub fn run_suite(suite: Suite, config: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    match suite {
        Suite::Riesz => rows.extend(riesz_consistency(config)?),
        Suite::Maximal => rows.extend(maximal_suite(config)?),
        Suite::Atoms => {
            rows.extend(atom_validity_suite(config)?);
            rows.extend(taylor_suite(config)?);
            rows.extend(atom_uniform_sweep(config)?);
        }
        Suite::Opnorm => {
            for op in Operator::ALL {
                rows.extend(opnorm_sweep(op, config)?);
            }
        }
        Suite::Inequalities => rows.extend(inequality_suite(config)?),
        Suite::WeakType => rows.extend(weak_type_record(config)?),
        Suite::All => {
            for s in Suite::ALL.into_iter().filter(|s| *s != Suite::All) {
                rows.extend(run_suite(s, config)?);
            }
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}
