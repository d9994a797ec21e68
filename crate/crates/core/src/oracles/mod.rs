//! Numeric checks of the inequality lemmas, independent of the time stepper.
//!
//! Each check returns an [`OracleReport`]. Only the symbol Taylor bounds and
//! the Riccati comparison are unconditional statements; a failure of either
//! is flagged `build_breaking`. The commutator and elementary inequalities
//! carry unknown constants, so their reports carry ratios and a pass flag
//! against a caller-chosen ceiling.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

mod commutator;
mod elementary;
mod riccati;
mod taylor;

pub use commutator::{check_kato_ponce, check_sqrt_commutator, sqrt_commutator_ladder, LadderReport};
pub use elementary::{check_elementary_inequality, elementary_ratio, ElementarySpec};
pub use riccati::{check_riccati_bound, riccati_sweep, RiccatiProblem};
pub use taylor::{check_taylor_symbol_bounds, radius_grid};

/// Result of one oracle evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub lemma: String,
    pub samples: u64,
    /// Samples dropped as degenerate.
    pub skipped: u64,
    /// Largest `LHS / RHS` with the unknown constant removed.
    pub worst_ratio: f64,
    /// Smallest constant consistent with the samples.
    pub empirical_constant: f64,
    pub ceiling: Option<f64>,
    pub pass: bool,
    pub build_breaking: bool,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl OracleReport {
    pub(crate) fn new(lemma: &str, seed: u64) -> Self {
        OracleReport {
            lemma: lemma.to_owned(),
            samples: 0,
            skipped: 0,
            worst_ratio: 0.0,
            empirical_constant: 0.0,
            ceiling: None,
            pass: true,
            build_breaking: false,
            seed,
            extras: BTreeMap::new(),
        }
    }

    pub(crate) fn extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_owned(), value);
        self
    }

    pub(crate) fn judge_ceiling(mut self, ceiling: Option<f64>) -> Self {
        self.ceiling = ceiling;
        self.pass = self.worst_ratio.is_finite() && ceiling.is_none_or(|c| self.worst_ratio <= c);
        self
    }
}

/// Lemma identifiers accepted by [`run_default`].
pub const LEMMAS: [&str; 5] = ["2.1", "2.2", "2.3", "2.4", "2.5"];

/// Runs the default battery for one lemma id, as used by the `verify` command.
pub fn run_default(lemma: &str, samples: u64, seed: u64) -> crate::Result<Vec<OracleReport>> {
    use crate::error::Error;
    match lemma {
        "2.1" => [3.0, 4.0, 5.0]
            .iter()
            .map(|&s| check_elementary_inequality(&ElementarySpec { s, samples, seed, ceiling: None }))
            .collect(),
        "2.2" => {
            let mut out = Vec::new();
            for n in [64, 128] {
                let (f, g) = commutator::cosine_pair(n)?;
                out.push(check_kato_ponce(&f, &g, 2.0, 0.5, Some(10.0))?.extra("n", n as f64));
            }
            Ok(out)
        }
        "2.3" => [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&d| check_taylor_symbol_bounds(d, &radius_grid(1e4, 4001), 10.0))
            .collect(),
        "2.4" => {
            let (f, g) = commutator::cosine_pair(64)?;
            Ok(sqrt_commutator_ladder(&f, &g, 2.0, 0.5, &[0.4, 0.2, 0.1, 0.05], 10.0)?.reports)
        }
        "2.5" => {
            let closed = check_riccati_bound(&RiccatiProblem::constant(0.1, 1.0, 1.0, 1.0), 20_000)?;
            Ok(vec![closed, riccati_sweep(100, seed)?])
        }
        other => Err(Error::param("lemma", format!("unknown lemma '{other}', expected one of {LEMMAS:?} or 'all'"))),
    }
}
