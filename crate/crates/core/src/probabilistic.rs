//! Conditions for recovery with random supports, the singular-value tail
//! constants behind them, the two-ONB thresholds with random supports,
//! scaling ratios, and seeded Monte Carlo experiments.
//!
//! `log` is the natural logarithm throughout.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use rand::seq::SliceRandom;

use crate::combinatorics::binomial;
use crate::dictionaries::ConcatDictionary;
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};
use crate::rng::{self, SeededRng};
use crate::solvers::{self, BpOptions, Support, OMP_DEFAULT_TOL};
use crate::thresholds::bp_omp_condition;

/// Constant in the two-ONB thresholds for random supports.
pub const TROPP_C: f64 = 0.004212;

/// Slack on `≤` comparisons of the conditions below. Strict inequalities get
/// none.
pub const COMPARISON_SLACK: f64 = 1e-12;

/// `σ_min(D_S)` at or below this level counts as a tail event.
pub const SIGMA_TAIL_LEVEL: f64 = FRAC_1_SQRT_2;

pub const HISTOGRAM_BINS: usize = 20;

/// Trials run (P0) enumeration only while the number of candidate supports
/// stays below this.
pub const P0_TRIAL_LIMIT: u128 = 20_000;

/// Normal quantile for the 95% Wilson interval.
pub const WILSON_Z: f64 = 1.96;

fn e_quarter() -> f64 {
    libm::exp(0.25)
}

/// Measured quantities of `[A B]` that the conditions depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DictionaryParams {
    pub d: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mu: f64,
    /// `‖A‖`, spectral norm.
    pub norm_a: f64,
    /// `‖B‖`, spectral norm.
    pub norm_b: f64,
}

impl DictionaryParams {
    pub fn measure(c: &ConcatDictionary) -> Self {
        Self {
            d: c.dim(),
            n_a: c.n_a(),
            n_b: c.n_b(),
            mu_a: c.mu_a(),
            mu_b: c.mu_b(),
            mu: c.mu(),
            norm_a: c.part_a().spectral_norm(),
            norm_b: c.part_b().spectral_norm(),
        }
    }

    /// `N = N_a + N_b`.
    pub fn atoms(&self) -> usize {
        self.n_a + self.n_b
    }

    pub fn log_n(&self) -> f64 {
        libm::log(self.atoms() as f64)
    }
}

fn check_common(n: usize, s: f64) -> Result<()> {
    if n <= 2 {
        return Err(Error::InvalidArgument(format!("N must exceed 2, got {n}")));
    }
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::Domain { what: "s (must be ≥ 1)", value: s });
    }
    Ok(())
}

fn check_sizes(na: usize, nb: usize) -> Result<()> {
    if na == 0 || nb == 0 {
        return Err(Error::InvalidArgument(format!("na and nb must both be at least 1, got ({na}, {nb})")));
    }
    Ok(())
}

/// One inequality `lhs ≤ rhs` (or `<`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    fn le(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: lhs <= rhs + COMPARISON_SLACK * rhs.abs().max(1.0) }
    }

    fn lt(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: lhs < rhs }
    }
}

/// The four hypotheses for recovery with an arbitrary `A`-support and a
/// random `B`-support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// `6√2 √(na μ² s log N) + 2(na − 1)μa ≤ (1 − γ) e^{−1/4}`.
    pub cond_a: Inequality,
    /// `24 √(nb μb² s log N) + 4 nb ‖B‖²/N_b + 2 √(nb/N_b) ‖A‖‖B‖ ≤ γ e^{−1/4}`.
    pub cond_b: Inequality,
    /// `na + nb ≤ μ⁻²/2`.
    pub cond_l0: Inequality,
    /// `na + nb < min(μ⁻²/2, μ⁻²/(8(s + 1) log N))`.
    pub cond_l1: Inequality,
    pub s: f64,
    pub gamma: f64,
}

impl ConditionReport {
    /// Hypotheses for the (P0) statement.
    pub fn p0_in_force(&self) -> bool {
        self.cond_a.holds && self.cond_b.holds && self.cond_l0.holds
    }

    /// Hypotheses for the BP statement.
    pub fn bp_in_force(&self) -> bool {
        self.cond_a.holds && self.cond_b.holds && self.cond_l1.holds
    }
}

/// Left-hand sides of the `A` and `B` conditions.
pub fn condition_lhs(p: &DictionaryParams, na: usize, nb: usize, s: f64) -> (f64, f64) {
    let (na_f, nb_f) = (na as f64, nb as f64);
    let sl = s * p.log_n();
    let lhs_a = 6.0 * SQRT_2 * libm::sqrt(na_f * p.mu * p.mu * sl) + 2.0 * (na_f - 1.0) * p.mu_a;
    let lhs_b = 24.0 * libm::sqrt(nb_f * p.mu_b * p.mu_b * sl)
        + 4.0 * nb_f / p.n_b as f64 * p.norm_b * p.norm_b
        + 2.0 * libm::sqrt(nb_f / p.n_b as f64) * p.norm_a * p.norm_b;
    (lhs_a, lhs_b)
}

/// Evaluates the conditions on measured parameters.
pub fn theorem4_conditions(p: &DictionaryParams, na: usize, nb: usize, s: f64, gamma: f64) -> Result<ConditionReport> {
    check_common(p.atoms(), s)?;
    check_sizes(na, nb)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain { what: "gamma (must lie in [0, 1])", value: gamma });
    }
    let (lhs_a, lhs_b) = condition_lhs(p, na, nb, s);
    let inv = 1.0 / (p.mu * p.mu);
    let total = (na + nb) as f64;
    let l1_rhs = (inv / 2.0).min(inv / (8.0 * (s + 1.0) * p.log_n()));
    Ok(ConditionReport {
        cond_a: Inequality::le(lhs_a, (1.0 - gamma) / e_quarter()),
        cond_b: Inequality::le(lhs_b, gamma / e_quarter()),
        cond_l0: Inequality::le(total, inv / 2.0),
        cond_l1: Inequality::lt(total, l1_rhs),
        s,
        gamma,
    })
}

/// The conditions for a concrete dictionary.
pub fn check_theorem4_conditions(c: &ConcatDictionary, na: usize, nb: usize, s: f64, gamma: f64) -> Result<ConditionReport> {
    theorem4_conditions(&DictionaryParams::measure(c), na, nb, s, gamma)
}

/// Two-ONB sparsity thresholds for random supports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TroppThresholds {
    /// `min(c μ⁻²/(s log N), μ⁻²/2)`.
    pub p0: f64,
    /// `p0` further capped by `μ⁻²/(8(s + 1) log N)`.
    pub bp: f64,
}

pub fn tropp_two_onb_thresholds(mu: f64, n: usize, s: f64) -> Result<TroppThresholds> {
    check_common(n, s)?;
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Domain { what: "mu (must lie in (0, 1])", value: mu });
    }
    let inv = 1.0 / (mu * mu);
    let log_n = libm::log(n as f64);
    let p0 = (TROPP_C * inv / (s * log_n)).min(inv / 2.0);
    let bp = p0.min(inv / (8.0 * (s + 1.0) * log_n));
    Ok(TroppThresholds { p0, bp })
}

/// Moment constants of the singular-value tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBoundParams {
    /// `6 √(μb² nb) + (3/√2) √(μ² na)`.
    pub alpha: f64,
    /// `(na − 1)μa + 2 nb ‖B‖²/N_b + √(nb/N_b) ‖A‖‖B‖`.
    pub beta: f64,
    /// `√(4 s log N)`.
    pub u: f64,
    /// `e^{−u²/4} = N^{−s}`.
    pub bound: f64,
    /// `e^{1/4}(α u + β)`.
    pub threshold: f64,
}

impl TailBoundParams {
    /// The threshold is at most 1/2, which is what the two conditions
    /// guarantee.
    pub fn threshold_ok(&self) -> bool {
        self.threshold <= 0.5 + COMPARISON_SLACK
    }
}

pub fn tail_bound_params(p: &DictionaryParams, na: usize, nb: usize, s: f64) -> Result<TailBoundParams> {
    check_common(p.atoms(), s)?;
    check_sizes(na, nb)?;
    let (na_f, nb_f) = (na as f64, nb as f64);
    let alpha = 6.0 * libm::sqrt(p.mu_b * p.mu_b * nb_f) + 3.0 / SQRT_2 * libm::sqrt(p.mu * p.mu * na_f);
    let beta = (na_f - 1.0) * p.mu_a
        + 2.0 * nb_f / p.n_b as f64 * p.norm_b * p.norm_b
        + libm::sqrt(nb_f / p.n_b as f64) * p.norm_a * p.norm_b;
    let u = libm::sqrt(4.0 * s * p.log_n());
    let bound = libm::exp(-u * u / 4.0);
    let threshold = e_quarter() * (alpha * u + beta);
    Ok(TailBoundParams { alpha, beta, u, bound, threshold })
}

pub fn appendix_g_params(c: &ConcatDictionary, na: usize, nb: usize, s: f64) -> Result<TailBoundParams> {
    tail_bound_params(&DictionaryParams::measure(c), na, nb, s)
}

/// The split `γ` that makes the `B` condition tight: `e^{1/4}` times its
/// left-hand side, clipped to `[0, 1]`. With this `γ`, both conditions hold
/// exactly when the tail threshold is at most 1/2.
pub fn matched_gamma(p: &DictionaryParams, na: usize, nb: usize, s: f64) -> f64 {
    let (_, lhs_b) = condition_lhs(p, na, nb, s);
    (e_quarter() * lhs_b).clamp(0.0, 1.0)
}

/// The six dimensionless ratios tracking the scaling conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    /// `μ √d`.
    pub r1: f64,
    /// `μa d / log N`.
    pub r2: f64,
    /// `d / (N_a log N)`.
    pub r3: f64,
    /// `μb √d`.
    pub r4: f64,
    /// `‖B‖² d / (N_b log N)`.
    pub r5: f64,
    /// `‖A‖² ‖B‖² d / (N_b log N)`.
    pub r6: f64,
}

impl ScalingReport {
    pub fn rows(&self) -> [(&'static str, &'static str, f64); 6] {
        [
            ("r1", "mu*sqrt(d)", self.r1),
            ("r2", "muA*d/log(N)", self.r2),
            ("r3", "d/(Na*log(N))", self.r3),
            ("r4", "muB*sqrt(d)", self.r4),
            ("r5", "|B|^2*d/(Nb*log(N))", self.r5),
            ("r6", "|A|^2*|B|^2*d/(Nb*log(N))", self.r6),
        ]
    }
}

pub fn scaling_ratios(p: &DictionaryParams) -> ScalingReport {
    let d = p.d as f64;
    let log_n = p.log_n();
    let (na, nb) = (p.n_a as f64, p.n_b as f64);
    let (a2, b2) = (p.norm_a * p.norm_a, p.norm_b * p.norm_b);
    ScalingReport {
        r1: p.mu * libm::sqrt(d),
        r2: p.mu_a * d / log_n,
        r3: d / (na * log_n),
        r4: p.mu_b * libm::sqrt(d),
        r5: b2 * d / (nb * log_n),
        r6: a2 * b2 * d / (nb * log_n),
    }
}

pub fn scaling_condition_report(c: &ConcatDictionary) -> ScalingReport {
    scaling_ratios(&DictionaryParams::measure(c))
}

/// A fixed `A`-support together with a random `B`-support of size `nb`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSupportSpec {
    pub fixed_a: Vec<usize>,
    pub nb: usize,
    pub seed: u64,
}

impl RandomSupportSpec {
    /// Sorts and deduplicates `fixed_a`.
    pub fn new(mut fixed_a: Vec<usize>, nb: usize, seed: u64) -> Self {
        fixed_a.sort_unstable();
        fixed_a.dedup();
        Self { fixed_a, nb, seed }
    }

    pub fn validate(&self, c: &ConcatDictionary) -> Result<()> {
        if let Some(&bad) = self.fixed_a.iter().find(|&&i| i >= c.n_a()) {
            return Err(Error::InvalidArgument(format!("fixed A index {bad} out of range (N_a = {})", c.n_a())));
        }
        if self.nb > c.n_b() {
            return Err(Error::InvalidArgument(format!("nb = {} exceeds N_b = {}", self.nb, c.n_b())));
        }
        Ok(())
    }

    pub fn na(&self) -> usize {
        self.fixed_a.len()
    }
}

/// `fixed_a` plus `nb` indices of `B` drawn uniformly without replacement
/// by a partial Fisher–Yates shuffle.
pub fn sample_support_with(spec: &RandomSupportSpec, n_b: usize, rng: &mut SeededRng) -> Support {
    let mut pool: Vec<usize> = (0..n_b).collect();
    let take = spec.nb.min(n_b);
    let (chosen, _) = pool.partial_shuffle(rng, take);
    let mut b = chosen.to_vec();
    b.sort_unstable();
    Support { a: spec.fixed_a.clone(), b }
}

/// Support drawn from a generator seeded with `spec.seed`.
pub fn sample_support(spec: &RandomSupportSpec, n_b: usize) -> Support {
    sample_support_with(spec, n_b, &mut rng::seeded(spec.seed))
}

/// Counts per equal-width bin on `[0, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub upper: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn build(samples: &[f64], bins: usize) -> Self {
        let upper = samples.iter().copied().fold(0.0, f64::max);
        let mut counts = alloc::vec![0usize; bins];
        for &v in samples {
            let idx = if upper > 0.0 { ((v / upper) * bins as f64) as usize } else { 0 };
            counts[idx.min(bins - 1)] += 1;
        }
        Self { upper, counts }
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.upper / self.counts.len() as f64;
        (w * i as f64, w * (i + 1) as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    /// Fraction of trials with `σ_min ≤ 1/√2`.
    pub empirical_prob: f64,
    pub histogram: Histogram,
    pub sigma_mins: Vec<f64>,
    /// `na + nb > d`, so every `σ_min` is zero.
    pub degenerate: bool,
}

impl TailEstimate {
    pub fn from_samples(sigma_mins: Vec<f64>, degenerate: bool) -> Self {
        let hits = sigma_mins.iter().filter(|&&s| s <= SIGMA_TAIL_LEVEL).count();
        let empirical_prob = hits as f64 / sigma_mins.len().max(1) as f64;
        let histogram = Histogram::build(&sigma_mins, HISTOGRAM_BINS);
        Self { empirical_prob, histogram, sigma_mins, degenerate }
    }

    /// One-sided binomial standard error of the estimate.
    pub fn standard_error(&self) -> f64 {
        let n = self.sigma_mins.len().max(1) as f64;
        libm::sqrt(self.empirical_prob * (1.0 - self.empirical_prob) / n)
    }
}

fn trial_spec(spec: &RandomSupportSpec, index: usize) -> (u64, SeededRng) {
    let seed = rng::trial_seed(spec.seed, index as u64);
    (seed, rng::seeded(seed))
}

/// `σ_min(D_S)` for trial `index` of `spec`.
pub fn sigma_min_trial(c: &ConcatDictionary, spec: &RandomSupportSpec, index: usize) -> f64 {
    let (_, mut rng) = trial_spec(spec, index);
    let support = sample_support_with(spec, c.n_b(), &mut rng);
    linalg::sigma_min(&c.joint().select(&support.joint(c.n_a())))
}

pub fn sigma_min_tail_estimate(c: &ConcatDictionary, spec: &RandomSupportSpec, trials: usize) -> Result<TailEstimate> {
    spec.validate(c)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let samples = (0..trials).map(|i| sigma_min_trial(c, spec, i)).collect();
    Ok(TailEstimate::from_samples(samples, spec.na() + spec.nb > c.dim()))
}

/// Distribution of the nonzero coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientModel {
    /// i.i.d. circularly-symmetric complex Gaussian.
    ComplexGaussian,
    /// Unit magnitude, i.i.d. uniform phases.
    UniformPhase,
    /// All coefficients equal to one.
    ConstantPhase,
}

impl CoefficientModel {
    pub fn name(self) -> &'static str {
        match self {
            CoefficientModel::ComplexGaussian => "gaussian",
            CoefficientModel::UniformPhase => "uniform-phase",
            CoefficientModel::ConstantPhase => "constant-phase",
        }
    }

    fn draw(self, rng: &mut SeededRng) -> num_complex::Complex64 {
        match self {
            CoefficientModel::ComplexGaussian => rng::complex_gaussian(rng),
            CoefficientModel::UniformPhase => rng::uniform_phase(rng),
            CoefficientModel::ConstantPhase => num_complex::Complex64::new(1.0, 0.0),
        }
    }
}

impl core::str::FromStr for CoefficientModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(CoefficientModel::ComplexGaussian),
            "uniform-phase" | "phase" => Ok(CoefficientModel::UniformPhase),
            "constant-phase" | "constant" => Ok(CoefficientModel::ConstantPhase),
            _ => Err(Error::InvalidArgument(format!(
                "unknown coefficient model `{s}` (expected gaussian, uniform-phase or constant-phase)"
            ))),
        }
    }
}

/// A planted instance: random support, random coefficients, `y = D x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub seed: u64,
    pub support: Support,
    pub x: CVector,
    pub y: CVector,
}

/// Draws the instance of trial `index`. Support and coefficients come from
/// one generator seeded by `(spec.seed, index)`.
pub fn planted_instance(c: &ConcatDictionary, spec: &RandomSupportSpec, model: CoefficientModel, index: usize) -> PlantedInstance {
    let (seed, mut rng) = trial_spec(spec, index);
    let support = sample_support_with(spec, c.n_b(), &mut rng);
    let mut x = CVector::zeros(c.atoms());
    for i in support.joint(c.n_a()) {
        let mut v = model.draw(&mut rng);
        while v.norm() == 0.0 {
            v = model.draw(&mut rng);
        }
        x[i] = v;
    }
    let y = c.joint().entries() * &x;
    PlantedInstance { seed, support, x, y }
}

/// Result of one recovery trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub na: usize,
    pub nb: usize,
    pub sigma_min: f64,
    pub bp_success: bool,
    pub omp_success: bool,
    /// `None` when enumeration was too large to run.
    pub p0_success: Option<bool>,
    /// The support satisfies the deterministic BP/OMP size condition.
    pub below_deterministic: bool,
}

/// Whether trials with this spec run (P0) enumeration.
pub fn p0_feasible(c: &ConcatDictionary, spec: &RandomSupportSpec) -> bool {
    let k = spec.na() + spec.nb;
    let cost = (1..=k).map(|j| binomial(c.atoms(), j)).fold(0u128, u128::saturating_add);
    k <= c.dim() && cost <= P0_TRIAL_LIMIT
}

pub fn run_trial(c: &ConcatDictionary, spec: &RandomSupportSpec, model: CoefficientModel, index: usize, with_p0: bool) -> Result<TrialRecord> {
    let inst = planted_instance(c, spec, model, index);
    let joint = inst.support.joint(c.n_a());
    let sigma_min = linalg::sigma_min(&c.joint().select(&joint));
    let d = c.joint();

    let bp = solvers::basis_pursuit(d, &inst.y, BpOptions::default())?;
    let bp_success = solvers::recovery_success(&bp.recovered, &inst.x);
    let omp = solvers::omp(d, &inst.y, c.dim(), OMP_DEFAULT_TOL)?;
    let omp_success = solvers::recovery_success(&omp.recovered, &inst.x);
    let p0_success = if with_p0 {
        Some(match solvers::p0_bruteforce(d, &inst.y, joint.len()) {
            Ok(sol) => !sol.non_unique && solvers::recovery_success(&sol.signal.coefficients, &inst.x),
            Err(Error::NoSparseRepresentation(_)) => false,
            Err(e) => return Err(e),
        })
    } else {
        None
    };
    let (na, nb) = (inst.support.na(), inst.support.nb());
    Ok(TrialRecord {
        trial: index,
        seed: inst.seed,
        na,
        nb,
        sigma_min,
        bp_success,
        omp_success,
        p0_success,
        below_deterministic: na + nb > 0 && bp_omp_condition(na, nb, c.mu_b(), c.mu()),
    })
}

/// A success proportion with its 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl RateEstimate {
    pub fn wilson(successes: usize, trials: usize) -> Self {
        if trials == 0 {
            return Self { successes, trials, rate: 0.0, lower: 0.0, upper: 1.0 };
        }
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = WILSON_Z * WILSON_Z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = WILSON_Z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
        Self { successes, trials, rate: p, lower: (center - half).max(0.0), upper: (center + half).min(1.0) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub model: CoefficientModel,
    pub bp: RateEstimate,
    pub omp: RateEstimate,
    /// Present when enumeration ran.
    pub p0: Option<RateEstimate>,
    /// Trials whose support met the deterministic condition.
    pub below_deterministic: usize,
    /// Of those, trials where BP or OMP failed (should stay zero).
    pub below_deterministic_failures: usize,
    pub records: Vec<TrialRecord>,
}

impl ExperimentSummary {
    /// Aggregates records given in trial order.
    pub fn from_records(model: CoefficientModel, records: Vec<TrialRecord>) -> Self {
        let n = records.len();
        let count = |f: &dyn Fn(&TrialRecord) -> bool| records.iter().filter(|r| f(r)).count();
        let bp = RateEstimate::wilson(count(&|r| r.bp_success), n);
        let omp = RateEstimate::wilson(count(&|r| r.omp_success), n);
        let p0_runs = count(&|r| r.p0_success.is_some());
        let p0 = (p0_runs > 0).then(|| RateEstimate::wilson(count(&|r| r.p0_success == Some(true)), p0_runs));
        let below_deterministic = count(&|r| r.below_deterministic);
        let below_deterministic_failures = count(&|r| r.below_deterministic && !(r.bp_success && r.omp_success));
        Self { model, bp, omp, p0, below_deterministic, below_deterministic_failures, records }
    }
}

pub fn randomized_recovery_experiment(
    c: &ConcatDictionary,
    spec: &RandomSupportSpec,
    trials: usize,
    model: CoefficientModel,
) -> Result<ExperimentSummary> {
    spec.validate(c)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let with_p0 = p0_feasible(c, spec);
    let records = (0..trials).map(|i| run_trial(c, spec, model, i, with_p0)).collect::<Result<Vec<_>>>()?;
    Ok(ExperimentSummary::from_records(model, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionaries::{build_dirac_fourier, build_mub_concat};

    #[test]
    fn mub_condition_a_fails_at_desk_scale() {
        let c = build_mub_concat(5, 1).unwrap();
        let r = check_theorem4_conditions(&c, 1, 1, 1.0, 0.5).unwrap();
        let expected = 6.0 * SQRT_2 * libm::sqrt(0.2 * libm::log(30.0));
        assert!((r.cond_a.lhs - expected).abs() < 1e-9);
        assert!((r.cond_a.lhs - 7.0).abs() < 0.1);
        assert!((r.cond_a.rhs - 0.5 * libm::exp(-0.25)).abs() < 1e-15);
        assert!(!r.cond_a.holds);
        assert!(check_theorem4_conditions(&c, 0, 1, 1.0, 0.5).is_err());
    }

    #[test]
    fn l0_condition_boundary() {
        let p = DictionaryParams { d: 100, n_a: 100, n_b: 100, mu_a: 0.0, mu_b: 0.0, mu: 0.1, norm_a: 1.0, norm_b: 1.0 };
        assert!(theorem4_conditions(&p, 25, 25, 1.0, 0.5).unwrap().cond_l0.holds);
        assert!(!theorem4_conditions(&p, 25, 26, 1.0, 0.5).unwrap().cond_l0.holds);
    }

    #[test]
    fn tropp_values() {
        let t = tropp_two_onb_thresholds(0.125, 128, 1.0).unwrap();
        assert!((t.p0 - 0.004212 * 64.0 / libm::log(128.0)).abs() < 1e-12);
        assert!((t.p0 - 0.0556).abs() < 1e-4);
        assert!(t.bp <= t.p0);
        assert!(tropp_two_onb_thresholds(0.5, 2, 1.0).is_err());
    }

    #[test]
    fn tail_constants() {
        let c = build_mub_concat(5, 1).unwrap();
        let g = appendix_g_params(&c, 1, 1, 1.0).unwrap();
        assert!((g.u - 3.688).abs() < 1e-3);
        assert!((g.bound - 1.0 / 30.0).abs() < 1e-12);
        // na = 1 removes μa from β
        let mut p = DictionaryParams::measure(&c);
        p.mu_a = 0.9;
        assert_eq!(tail_bound_params(&p, 1, 2, 1.0).unwrap().beta, tail_bound_params(&DictionaryParams::measure(&c), 1, 2, 1.0).unwrap().beta);
    }

    #[test]
    fn matched_gamma_links_threshold_and_conditions() {
        let p = DictionaryParams { d: 4096, n_a: 4096, n_b: 1 << 20, mu_a: 0.0, mu_b: 1e-4, mu: 1.0 / 64.0, norm_a: 1.0, norm_b: 16.0 };
        for (na, nb) in [(1usize, 1usize), (2, 3), (1, 40), (5, 5)] {
            let g = tail_bound_params(&p, na, nb, 1.0).unwrap();
            let gamma = matched_gamma(&p, na, nb, 1.0);
            let r = theorem4_conditions(&p, na, nb, 1.0, gamma).unwrap();
            assert_eq!(r.cond_a.holds && r.cond_b.holds, g.threshold_ok(), "({na}, {nb})");
        }
    }

    #[test]
    fn mub_scaling_ratios() {
        let r = scaling_condition_report(&build_mub_concat(5, 1).unwrap());
        let l = libm::log(30.0);
        assert!((r.r1 - 1.0).abs() < 1e-9 && (r.r4 - 1.0).abs() < 1e-9);
        assert!(r.r2.abs() < 1e-9);
        assert!((r.r3 - 1.0 / l).abs() < 1e-9);
        assert!((r.r5 - 1.0 / l).abs() < 1e-9);
        assert!((r.r6 - 1.0 / l).abs() < 1e-9);
    }

    #[test]
    fn support_sampling() {
        let spec = RandomSupportSpec::new(alloc::vec![2, 0], 25, 9);
        let s = sample_support(&spec, 25);
        assert_eq!(s.a, alloc::vec![0, 2]);
        assert_eq!(s.b, (0..25).collect::<Vec<_>>());
        let spec = RandomSupportSpec::new(alloc::vec![], 3, 4);
        assert_eq!(sample_support(&spec, 25), sample_support(&spec, 25));
    }

    #[test]
    fn sampling_is_uniform() {
        let mut counts = [0usize; 25];
        let mut rng = rng::seeded(77);
        let spec = RandomSupportSpec::new(alloc::vec![], 1, 0);
        let draws = 10_000;
        for _ in 0..draws {
            counts[sample_support_with(&spec, 25, &mut rng).b[0]] += 1;
        }
        let (mean, p) = (draws as f64 / 25.0, 1.0 / 25.0);
        let sd = libm::sqrt(draws as f64 * p * (1.0 - p));
        for c in counts {
            assert!((c as f64 - mean).abs() <= 4.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn orthonormal_fixed_part_has_unit_sigma() {
        let c = build_dirac_fourier(8).unwrap();
        let est = sigma_min_tail_estimate(&c, &RandomSupportSpec::new(alloc::vec![0, 3, 5], 0, 1), 50).unwrap();
        assert_eq!(est.empirical_prob, 0.0);
        assert!(est.sigma_mins.iter().all(|&s| (s - 1.0).abs() < 1e-12));
        assert_eq!(est.histogram.counts.iter().sum::<usize>(), 50);
    }

    #[test]
    fn wilson_interval() {
        let r = RateEstimate::wilson(50, 100);
        assert!((r.lower - 0.4038).abs() < 1e-3 && (r.upper - 0.5962).abs() < 1e-3);
        let all = RateEstimate::wilson(20, 20);
        assert_eq!(all.rate, 1.0);
        assert!(all.lower > 0.8 && all.upper == 1.0);
    }

    #[test]
    fn single_atom_experiment_always_succeeds() {
        let c = build_dirac_fourier(8).unwrap();
        let spec = RandomSupportSpec::new(alloc::vec![], 1, 3);
        let s = randomized_recovery_experiment(&c, &spec, 10, CoefficientModel::ComplexGaussian).unwrap();
        assert_eq!(s.bp.successes, 10);
        assert_eq!(s.omp.successes, 10);
        assert_eq!(s.p0.unwrap().successes, 10);
        let again = randomized_recovery_experiment(&c, &spec, 10, CoefficientModel::ComplexGaussian).unwrap();
        assert_eq!(s, again);
    }
}
