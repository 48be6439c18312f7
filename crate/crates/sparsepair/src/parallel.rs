//! Rayon versions of the batch operations. Each returns exactly what the
//! sequential core routine returns, whatever the number of threads.

use itertools::Itertools;
use rayon::prelude::*;

use sparsepair_core::combinatorics::{binomial, guard};
use sparsepair_core::probabilistic::{
    self, CoefficientModel, ExperimentSummary, RandomSupportSpec, TailEstimate,
};
use sparsepair_core::spark::{self, SparkLowerBounds, SparkOutcome};
use sparsepair_core::uncertainty::{self, UncertaintyScan};
use sparsepair_core::{ConcatDictionary, Dictionary, Error};

use crate::error::Result;

/// A pool capped at `threads` workers; `None` uses the available parallelism.
pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(crate::Error::Usage("--threads must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| crate::Error::Usage(format!("cannot start thread pool: {e}")))
}

/// Size classes are scanned concurrently; rows stay in canonical order.
pub fn uncertainty_scan(c: &ConcatDictionary, max_na: usize, max_nb: usize) -> Result<UncertaintyScan> {
    guard(uncertainty::scan_cost(c, max_na, max_nb))?;
    let rows = uncertainty::scan_classes(c, max_na, max_nb)
        .into_par_iter()
        .map(|(na, nb)| uncertainty::scan_size_class(c, na, nb))
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    Ok(UncertaintyScan { rows })
}

/// First dependent `k`-subset in lexicographic order, searching the
/// branches for each leading index in parallel.
fn first_dependent_subset(d: &Dictionary, k: usize) -> Option<Vec<usize>> {
    let n = d.atoms();
    (0..n).into_par_iter().find_map_first(|first| {
        (first + 1..n).combinations(k - 1).map(|rest| [vec![first], rest].concat()).find(|s| spark::is_dependent(d, s))
    })
}

fn spark_with(d: &Dictionary, max_check: usize, bounds: SparkLowerBounds) -> Result<SparkOutcome> {
    if d.atoms() < 2 {
        return Err(Error::CoherenceUndefined.into());
    }
    let top = spark::effective_max_check(d, max_check);
    guard(binomial(d.atoms(), top))?;
    let witness = (1..=top).find_map(|k| first_dependent_subset(d, k));
    Ok(spark::outcome_from_witness(d, max_check, bounds, witness))
}

pub fn spark_bruteforce(d: &Dictionary, max_check: usize) -> Result<SparkOutcome> {
    let bounds = spark::spark_lower_bounds_mu(d.coherence()?)?;
    spark_with(d, max_check, bounds)
}

pub fn spark_bruteforce_concat(c: &ConcatDictionary, max_check: usize) -> Result<SparkOutcome> {
    let bounds = spark::spark_lower_bounds(&c.triple())?;
    spark_with(c.joint(), max_check, bounds)
}

pub fn sigma_min_tail_estimate(c: &ConcatDictionary, spec: &RandomSupportSpec, trials: usize) -> Result<TailEstimate> {
    spec.validate(c)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()).into());
    }
    let samples: Vec<f64> = (0..trials).into_par_iter().map(|i| probabilistic::sigma_min_trial(c, spec, i)).collect();
    Ok(TailEstimate::from_samples(samples, spec.na() + spec.nb > c.dim()))
}

pub fn randomized_recovery_experiment(
    c: &ConcatDictionary,
    spec: &RandomSupportSpec,
    trials: usize,
    model: CoefficientModel,
) -> Result<ExperimentSummary> {
    spec.validate(c)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()).into());
    }
    let with_p0 = probabilistic::p0_feasible(c, spec);
    let records = (0..trials)
        .into_par_iter()
        .map(|i| probabilistic::run_trial(c, spec, model, i, with_p0))
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    Ok(ExperimentSummary::from_records(model, records))
}
