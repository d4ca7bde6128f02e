//! Seeded, reproducible studies comparing realized and mean-field
//! centralities, and sweeping the comparative-statics results.
//!
//! Replication `r` at population `n` draws everything from
//! `replication_seed(seed, n, r)`, so a study gives bit-identical statistics
//! whether replications run in parallel or in sequence. Only the wall-clock
//! field differs between runs.

mod convergence;
mod counterexamples;
mod dominance;
mod kronecker;
mod spatial;
mod statics_study;

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::spectral::{PhiRule, SolverOptions};

pub use convergence::{run_convergence_study, run_rate_study, Band, ConvergenceParams, RateParams};
pub use counterexamples::{run_counterexample_studies, CounterexampleParams};
pub use dominance::{run_dominance_sweep, DominanceParams, TwoGroupPoint};
pub use kronecker::{run_kronecker_study, KroneckerParams};
pub use spatial::{run_spatial_ranking_study, SpatialParams};
pub use statics_study::{crossing_model, run_statics_regime_study, CrossingParams, StaticsParams};

/// Identifier of a study, as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyId {
    Convergence,
    Rate,
    Counterexamples,
    Spatial,
    Kronecker,
    Dominance,
    Statics,
}

impl StudyId {
    pub const ALL: [StudyId; 7] = [
        StudyId::Convergence,
        StudyId::Rate,
        StudyId::Counterexamples,
        StudyId::Spatial,
        StudyId::Kronecker,
        StudyId::Dominance,
        StudyId::Statics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StudyId::Convergence => "convergence",
            StudyId::Rate => "rate",
            StudyId::Counterexamples => "counterexamples",
            StudyId::Spatial => "spatial",
            StudyId::Kronecker => "kronecker",
            StudyId::Dominance => "dominance",
            StudyId::Statics => "statics",
        }
    }
}

impl fmt::Display for StudyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StudyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StudyId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let valid: Vec<_> = StudyId::ALL.iter().map(|id| id.name()).collect();
            Error::invalid("study", format!("unknown study `{s}`; valid ids: {}", valid.join(", ")))
        })
    }
}

/// Study-specific parameters; the `kind` key selects the study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StudyParams {
    Convergence(ConvergenceParams),
    Rate(RateParams),
    Counterexamples(CounterexampleParams),
    Spatial(SpatialParams),
    Kronecker(KroneckerParams),
    Dominance(DominanceParams),
    Statics(StaticsParams),
}

fn default_parallel() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub seed: u64,
    /// Run replications on the rayon pool; results do not depend on it.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
    #[serde(default)]
    pub solver: SolverOptions,
    pub study: StudyParams,
}

/// Command-line overrides applied on top of a config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub reps: Option<usize>,
    pub phi: Option<f64>,
    pub k: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 20_240_917;

impl StudyConfig {
    pub fn default_for(id: StudyId) -> Self {
        let study = match id {
            StudyId::Convergence => StudyParams::Convergence(ConvergenceParams::default()),
            StudyId::Rate => StudyParams::Rate(RateParams::default()),
            StudyId::Counterexamples => StudyParams::Counterexamples(CounterexampleParams::default()),
            StudyId::Spatial => StudyParams::Spatial(SpatialParams::default()),
            StudyId::Kronecker => StudyParams::Kronecker(KroneckerParams::default()),
            StudyId::Dominance => StudyParams::Dominance(DominanceParams::default()),
            StudyId::Statics => StudyParams::Statics(StaticsParams::default()),
        };
        StudyConfig {
            seed: DEFAULT_SEED,
            parallel: true,
            solver: SolverOptions::default(),
            study,
        }
    }

    pub fn id(&self) -> StudyId {
        match self.study {
            StudyParams::Convergence(_) => StudyId::Convergence,
            StudyParams::Rate(_) => StudyId::Rate,
            StudyParams::Counterexamples(_) => StudyId::Counterexamples,
            StudyParams::Spatial(_) => StudyId::Spatial,
            StudyParams::Kronecker(_) => StudyId::Kronecker,
            StudyParams::Dominance(_) => StudyId::Dominance,
            StudyParams::Statics(_) => StudyId::Statics,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: StudyConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("study configs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let check_reps = |reps: usize| {
            if reps == 0 {
                Err(Error::invalid("reps", "at least one replication is needed"))
            } else {
                Ok(())
            }
        };
        let check_ns = |ns: &[usize]| {
            if ns.is_empty() || ns.iter().any(|&n| n < 2) {
                Err(Error::invalid("n_values", "need at least one population, each >= 2"))
            } else {
                Ok(())
            }
        };
        match &self.study {
            StudyParams::Convergence(p) => {
                p.model.resolve()?;
                check_reps(p.reps)?;
                check_ns(&p.n_values)
            }
            StudyParams::Rate(p) => {
                p.model.resolve()?;
                check_reps(p.reps)?;
                check_ns(&p.n_values)
            }
            StudyParams::Counterexamples(p) => {
                check_reps(p.split_reps)?;
                check_reps(p.star_reps)?;
                check_ns(&p.star_n_values)
            }
            StudyParams::Spatial(p) => {
                if p.k < 6 {
                    return Err(Error::invalid("k", "the ranking study needs k >= 6"));
                }
                Ok(())
            }
            StudyParams::Kronecker(p) => check_reps(p.reps),
            StudyParams::Dominance(p) => check_ns(&[p.n]),
            StudyParams::Statics(p) => check_ns(&[p.n]),
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        match &mut self.study {
            StudyParams::Convergence(p) => {
                if let Some(n) = o.n {
                    p.n_values = vec![n];
                }
                if let Some(r) = o.reps {
                    p.reps = r;
                }
                if let Some(phi) = o.phi {
                    p.phi = PhiRule::Fixed(phi);
                }
            }
            StudyParams::Rate(p) => {
                if let Some(n) = o.n {
                    p.n_values = vec![n];
                }
                if let Some(r) = o.reps {
                    p.reps = r;
                }
            }
            StudyParams::Counterexamples(p) => {
                if let Some(r) = o.reps {
                    p.split_reps = r;
                    p.star_reps = r;
                }
            }
            StudyParams::Spatial(p) => {
                if let Some(k) = o.k {
                    p.k = k;
                }
            }
            StudyParams::Kronecker(p) => {
                if let Some(r) = o.reps {
                    p.reps = r;
                }
            }
            StudyParams::Dominance(p) => {
                if let Some(n) = o.n {
                    p.n = n;
                }
                if let Some(phi) = o.phi {
                    p.phi = Some(phi);
                }
            }
            StudyParams::Statics(p) => {
                if let Some(n) = o.n {
                    p.n = n;
                }
            }
        }
    }
}

/// One acceptance assertion of a study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Statistics of one quantity over the replications at one population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub quantity: String,
    pub count: usize,
    pub mean: f64,
    pub std_err: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

/// One per-replication value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub rep: usize,
    pub quantity: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub study: StudyId,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub summaries: Vec<Summary>,
    /// Replications dropped because power iteration did not converge.
    pub nonconverged: usize,
    #[serde(skip)]
    pub rows: Vec<Row>,
    pub wall_clock_secs: f64,
}

impl StudyResult {
    fn new(study: StudyId, seed: u64) -> Self {
        StudyResult {
            study,
            seed,
            checks: Vec::new(),
            summaries: Vec::new(),
            nonconverged: 0,
            rows: Vec::new(),
            wall_clock_secs: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self, n: usize, quantity: &str) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.n == n && s.quantity == quantity)
    }

    /// Copy with the timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        StudyResult {
            wall_clock_secs: 0.0,
            ..self.clone()
        }
    }

    pub(crate) fn push_check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub(crate) fn push_rows(&mut self, n: usize, quantity: &str, values: &[f64]) {
        for (rep, &value) in values.iter().enumerate() {
            self.rows.push(Row {
                n,
                rep,
                quantity: quantity.to_string(),
                value,
            });
        }
    }

    /// Record per-replication values and their summary.
    pub(crate) fn record(&mut self, n: usize, quantity: &str, values: &[f64]) -> Summary {
        self.push_rows(n, quantity, values);
        let s = summarize(n, quantity, values);
        self.summaries.push(s.clone());
        s
    }

    /// CSV rows `study,n,rep,quantity,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "study,n,rep,quantity,value")?;
        for r in &self.rows {
            writeln!(w, "{},{},{},{},{}", self.study, r.n, r.rep, r.quantity, fmt_f64(r.value))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub(crate) fn summarize(n: usize, quantity: &str, values: &[f64]) -> Summary {
    let count = values.len();
    let k = count as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = if count > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if count == 0 {
        f64::NAN
    } else if count % 2 == 1 {
        sorted[count / 2]
    } else {
        0.5 * (sorted[count / 2 - 1] + sorted[count / 2])
    };
    Summary {
        n,
        quantity: quantity.to_string(),
        count,
        mean,
        std_err: (var / k).sqrt(),
        median,
        min: sorted.first().copied().unwrap_or(f64::NAN),
        max: sorted.last().copied().unwrap_or(f64::NAN),
    }
}

/// Evaluate `f` for every replication, in parallel or in sequence, and
/// return results in replication order.
pub(crate) fn replicate<T, F>(reps: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if parallel {
        (0..reps).into_par_iter().map(f).collect()
    } else {
        (0..reps).map(f).collect()
    }
}

/// Split replication outcomes into successes and a non-convergence count;
/// any other error aborts the study.
pub(crate) fn converged<T>(outcomes: Vec<Result<T>>) -> Result<(Vec<T>, usize)> {
    let mut ok = Vec::with_capacity(outcomes.len());
    let mut dropped = 0;
    for o in outcomes {
        match o {
            Ok(v) => ok.push(v),
            Err(Error::NonConvergence { .. }) => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((ok, dropped))
}

/// Largest tolerated share of non-converged replications.
pub(crate) const NONCONVERGENCE_LIMIT: f64 = 0.01;

pub(crate) fn check_nonconvergence(result: &mut StudyResult, label: &str, dropped: usize, reps: usize) {
    result.nonconverged += dropped;
    let share = dropped as f64 / reps as f64;
    result.push_check(
        format!("{label}_nonconvergence"),
        share < NONCONVERGENCE_LIMIT,
        format!("{dropped} of {reps} replications did not converge"),
    );
}

/// Run the study a config describes.
pub fn run_study(config: &StudyConfig) -> Result<StudyResult> {
    config.validate()?;
    let start = Instant::now();
    let mut result = match &config.study {
        StudyParams::Convergence(p) => run_convergence_study(p, config)?,
        StudyParams::Rate(p) => run_rate_study(p, config)?,
        StudyParams::Counterexamples(p) => run_counterexample_studies(p, config)?,
        StudyParams::Spatial(p) => run_spatial_ranking_study(p, config)?,
        StudyParams::Kronecker(p) => run_kronecker_study(p, config)?,
        StudyParams::Dominance(p) => run_dominance_sweep(p, config)?,
        StudyParams::Statics(p) => run_statics_regime_study(p, config)?,
    };
    result.wall_clock_secs = start.elapsed().as_secs_f64();
    Ok(result)
}
