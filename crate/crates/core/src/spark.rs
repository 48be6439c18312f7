//! Exact spark by subset enumeration, next to the coherence lower bounds.

use alloc::vec::Vec;

use itertools::Itertools;

use crate::combinatorics::{binomial, guard};
use crate::dictionaries::{ConcatDictionary, Dictionary};
use crate::error::{Error, Result};
use crate::linalg;
use crate::thresholds::{self, CoherenceTriple};

/// A subset is dependent when its smallest singular value is at most this
/// fraction of its largest.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Lower bounds on the spark implied by coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparkLowerBounds {
    /// `1 + 1/μ`.
    pub general: f64,
    /// `2/μ`, present only for two orthonormal bases.
    pub two_onb: Option<f64>,
    /// Twice the pair (P0) threshold; present when the triple is known.
    pub pair: Option<f64>,
}

impl SparkLowerBounds {
    /// The largest applicable bound.
    pub fn best(&self) -> f64 {
        let mut b = self.general;
        if let Some(v) = self.two_onb {
            b = b.max(v);
        }
        if let Some(v) = self.pair {
            b = b.max(v);
        }
        b
    }

    /// `spark ≥ bound` for every applicable bound, with a small slack for
    /// bounds that land on integers.
    pub fn admits(&self, spark: usize) -> bool {
        spark as f64 >= self.best() - 1e-9
    }
}

/// Bounds from the coherence alone. Orthonormal columns (`μ = 0`) give an
/// infinite bound: no subset of them is dependent.
pub fn spark_lower_bounds_mu(mu: f64) -> Result<SparkLowerBounds> {
    if mu == 0.0 {
        return Ok(SparkLowerBounds { general: f64::INFINITY, two_onb: None, pair: None });
    }
    let general = 2.0 * thresholds::threshold_general_p0(mu)?;
    Ok(SparkLowerBounds { general, two_onb: None, pair: None })
}

/// Bounds from the full triple `(μa, μb, μ)`.
pub fn spark_lower_bounds(t: &CoherenceTriple) -> Result<SparkLowerBounds> {
    let general = 2.0 * thresholds::threshold_general_p0(t.mu())?;
    let two_onb = if t.is_two_onb() { Some(2.0 * thresholds::threshold_two_onb(t.mu())?.p0) } else { None };
    let pair = Some(2.0 * thresholds::threshold_pair_p0(t)?.value);
    Ok(SparkLowerBounds { general, two_onb, pair })
}

/// A dependent subset of minimal size.
#[derive(Debug, Clone, PartialEq)]
pub struct SparkCertificate {
    pub spark: usize,
    /// Lexicographically first dependent subset of size `spark`.
    pub witness: Vec<usize>,
    pub bounds: SparkLowerBounds,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SparkOutcome {
    Exact(SparkCertificate),
    /// Every subset of size up to `checked` is independent, but larger ones
    /// could still be dependent.
    ExceedsMaxCheck { checked: usize, bounds: SparkLowerBounds },
    /// `N ≤ d` and all columns are independent, so no dependent subset
    /// exists at all (conventionally the spark is then `d + 1`).
    NoDependentSubset { checked: usize, bounds: SparkLowerBounds },
}

impl SparkOutcome {
    pub fn spark(&self) -> Option<usize> {
        match self {
            SparkOutcome::Exact(c) => Some(c.spark),
            _ => None,
        }
    }

    pub fn bounds(&self) -> &SparkLowerBounds {
        match self {
            SparkOutcome::Exact(c) => &c.bounds,
            SparkOutcome::ExceedsMaxCheck { bounds, .. } | SparkOutcome::NoDependentSubset { bounds, .. } => bounds,
        }
    }
}

pub fn is_dependent(d: &Dictionary, subset: &[usize]) -> bool {
    let m = d.select(subset);
    if subset.len() > d.dim() {
        return true;
    }
    let sv = linalg::singular_values(&m);
    match (sv.first(), sv.last()) {
        (Some(&top), Some(&low)) => low <= RANK_TOLERANCE * top,
        _ => false,
    }
}

/// Largest subset size the enumeration will reach.
pub fn effective_max_check(d: &Dictionary, max_check: usize) -> usize {
    max_check.min(d.dim() + 1).min(d.atoms())
}

/// Subsets visited in the worst case.
pub fn spark_cost(d: &Dictionary, max_check: usize) -> u128 {
    let n = d.atoms();
    (1..=effective_max_check(d, max_check)).map(|k| binomial(n, k)).fold(0u128, u128::saturating_add)
}

/// First dependent subset of exactly `k` columns, in lexicographic order.
pub fn first_dependent_subset(d: &Dictionary, k: usize) -> Option<Vec<usize>> {
    (0..d.atoms()).combinations(k).find(|s| is_dependent(d, s))
}

fn enumerate(d: &Dictionary, max_check: usize, bounds: SparkLowerBounds) -> Result<SparkOutcome> {
    if d.atoms() < 2 {
        return Err(Error::CoherenceUndefined);
    }
    guard(binomial(d.atoms(), effective_max_check(d, max_check)))?;
    let top = effective_max_check(d, max_check);
    for k in 1..=top {
        if let Some(witness) = first_dependent_subset(d, k) {
            return Ok(SparkOutcome::Exact(SparkCertificate { spark: k, witness, bounds }));
        }
    }
    if top == d.atoms() && d.atoms() <= d.dim() {
        Ok(SparkOutcome::NoDependentSubset { checked: top, bounds })
    } else {
        Ok(SparkOutcome::ExceedsMaxCheck { checked: top, bounds })
    }
}

/// Exact spark of `d` when it is at most `max_check`; general bound only.
pub fn spark_bruteforce(d: &Dictionary, max_check: usize) -> Result<SparkOutcome> {
    let bounds = spark_lower_bounds_mu(d.coherence()?)?;
    enumerate(d, max_check, bounds)
}

/// Exact spark of `[A B]` with all three bounds filled in.
pub fn spark_bruteforce_concat(c: &ConcatDictionary, max_check: usize) -> Result<SparkOutcome> {
    let bounds = spark_lower_bounds(&c.triple())?;
    enumerate(c.joint(), max_check, bounds)
}

/// Builds the outcome from an already known minimal size, as produced by a
/// parallel search over size classes.
pub fn outcome_from_witness(d: &Dictionary, max_check: usize, bounds: SparkLowerBounds, witness: Option<Vec<usize>>) -> SparkOutcome {
    let top = effective_max_check(d, max_check);
    match witness {
        Some(w) => SparkOutcome::Exact(SparkCertificate { spark: w.len(), witness: w, bounds }),
        None if top == d.atoms() && d.atoms() <= d.dim() => SparkOutcome::NoDependentSubset { checked: top, bounds },
        None => SparkOutcome::ExceedsMaxCheck { checked: top, bounds },
    }
}
