//! Closed-form sparsity thresholds expressed through dictionary coherences.
//!
//! Every threshold is returned as a real number `T`; a signal with `‖x‖₀ < T`
//! (strict) is covered by the corresponding guarantee. Nothing is floored.
//!
//! The families implemented here:
//!
//! * general dictionaries with coherence `μ`: `(1 + 1/μ)/2`;
//! * two orthonormal bases: `1/μ` for (P0) and `(√2 − 0.5)/μ` for BP/OMP;
//! * pairs of general sub-dictionaries with coherences `μa ≤ μb ≤ μ`: the
//!   uncertainty-based (P0) threshold, its symmetric special case `μa = μb`,
//!   the BP/OMP support-size condition and its sparsity-only corollary.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// Slack allowed on the ordering `μa ≤ μb ≤ μ` and on coherence ties.
pub const ORDER_TOLERANCE: f64 = 1e-12;

/// Coherence parameters `(μa, μb, μ)` of a concatenated dictionary `[A B]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceTriple {
    mu_a: f64,
    mu_b: f64,
    mu: f64,
}

impl CoherenceTriple {
    /// Validates `0 ≤ μa ≤ μb ≤ μ ≤ 1` and `μ > 0`. Violations of the ordering
    /// up to [`ORDER_TOLERANCE`] are clamped away.
    pub fn new(mu_a: f64, mu_b: f64, mu: f64) -> Result<Self> {
        check_mu(mu)?;
        for (what, value) in [("muA", mu_a), ("muB", mu_b)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Domain { what, value });
            }
        }
        if mu_a > mu_b + ORDER_TOLERANCE {
            return Err(Error::PartsOutOfOrder { mu_a, mu_b });
        }
        if mu_b > mu + ORDER_TOLERANCE {
            return Err(Error::Domain { what: "muB (must not exceed mu)", value: mu_b });
        }
        let mu_b = mu_b.min(mu);
        let mu_a = mu_a.min(mu_b);
        Ok(Self { mu_a, mu_b, mu })
    }

    /// The case `μa = μb`.
    pub fn symmetric(mu_b: f64, mu: f64) -> Result<Self> {
        Self::new(mu_b, mu_b, mu)
    }

    pub fn mu_a(&self) -> f64 {
        self.mu_a
    }

    pub fn mu_b(&self) -> f64 {
        self.mu_b
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Both parts have orthonormal columns.
    pub fn is_two_onb(&self) -> bool {
        self.mu_b <= ORDER_TOLERANCE
    }

    pub fn is_symmetric(&self) -> bool {
        (self.mu_b - self.mu_a).abs() <= ORDER_TOLERANCE
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "mu", value: mu })
    }
}

fn check_mu_b(mu_b: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    if !(mu_b >= 0.0 && mu_b <= mu + ORDER_TOLERANCE) {
        return Err(Error::Domain { what: "muB", value: mu_b });
    }
    Ok(mu_b.min(mu))
}

/// `(1 + 1/μ)/2`, valid for every dictionary with coherence `μ`.
pub fn threshold_general_p0(mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(0.5 * (1.0 + 1.0 / mu))
}

/// Thresholds for the concatenation of two orthonormal bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoOnbThresholds {
    pub p0: f64,
    pub bp: f64,
}

pub fn threshold_two_onb(mu: f64) -> Result<TwoOnbThresholds> {
    check_mu(mu)?;
    Ok(TwoOnbThresholds { p0: 1.0 / mu, bp: (SQRT_2 - 0.5) / mu })
}

/// The (P0)-uniqueness threshold for a pair together with the quantities
/// of its one-dimensional minimization: the border point where the
/// uncertainty curve crosses one, the stationary point of the objective,
/// and the minimizer actually used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairP0Threshold {
    pub value: f64,
    pub x_bord: f64,
    pub x_stat: f64,
    pub x_sol: f64,
}

pub fn threshold_pair_p0(t: &CoherenceTriple) -> Result<PairP0Threshold> {
    let (mu_a, mu_b, mu) = (t.mu_a, t.mu_b, t.mu);
    let denom = mu * mu - mu_a * mu_b;
    let x_bord = (1.0 + mu_b) / (mu_b + mu * mu);
    // μa = μb = μ collapses the objective to a constant
    if denom <= 1e-14 * mu * mu {
        if (mu - mu_a).abs() > 1e-6 || (mu - mu_b).abs() > 1e-6 {
            return Err(Error::Internal("vanishing denominator outside the μa = μb = μ branch"));
        }
        let x_stat = 1.0 / mu;
        let x_sol = x_bord.min(x_stat);
        return Ok(PairP0Threshold { value: 0.5 * (1.0 + 1.0 / mu), x_bord, x_stat, x_sol });
    }
    let x_stat = (mu * libm::sqrt((1.0 + mu_a) * (1.0 + mu_b)) - mu_a - mu_a * mu_b) / denom;
    let x_sol = x_bord.min(x_stat);
    let f = |x: f64| {
        ((1.0 + mu_a) * (1.0 + mu_b) - x * mu_b * (1.0 + mu_a)) / (x * denom + mu_a * (1.0 + mu_b))
    };
    Ok(PairP0Threshold { value: 0.5 * (f(x_sol) + x_sol), x_bord, x_stat, x_sol })
}

/// `(1 + μb)/(μ + μb)`: the pair threshold when `μa = μb`.
pub fn threshold_pair_symmetric(mu_b: f64, mu: f64) -> Result<f64> {
    let mu_b = check_mu_b(mu_b, mu)?;
    Ok((1.0 + mu_b) / (mu + mu_b))
}

/// `RHS − LHS` of the BP/OMP support-size condition; the condition holds iff
/// this is strictly positive. Swaps `na`, `nb` so that `na ≤ nb`.
pub fn bp_omp_condition_margin(na: usize, nb: usize, mu_b: f64, mu: f64) -> f64 {
    let (na, nb) = if na <= nb { (na as f64, nb as f64) } else { (nb as f64, na as f64) };
    let lhs = 2.0 * na * (1.0 + mu_b) * mu_b
        + nb * (1.0 + mu_b) * (mu + mu_b)
        + 2.0 * na * nb * (mu * mu - mu_b * mu_b);
    (1.0 + mu_b) * (1.0 + mu_b) - lhs
}

/// Sufficient condition on `(na, nb)` for both BP and OMP to recover a
/// signal with `na` atoms from `A` and `nb` atoms from `B`.
pub fn bp_omp_condition(na: usize, nb: usize, mu_b: f64, mu: f64) -> bool {
    bp_omp_condition_margin(na, nb, mu_b, mu) > 0.0
}

/// The BP/OMP sparsity threshold depending on `(μb, μ)` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpOmpThreshold {
    pub value: f64,
    /// Case selector; `+∞` when `μb = μ`, where it is undefined.
    pub kappa: f64,
    pub first_case: bool,
}

pub fn threshold_pair_bp_omp(mu_b: f64, mu: f64) -> Result<BpOmpThreshold> {
    let mu_b = check_mu_b(mu_b, mu)?;
    let second = (1.0 + 2.0 * mu * mu + 3.0 * mu_b - mu * (1.0 + mu_b)) / (2.0 * (mu * mu + mu_b));
    if mu - mu_b <= ORDER_TOLERANCE {
        return Ok(BpOmpThreshold { value: second, kappa: f64::INFINITY, first_case: false });
    }
    let c1 = 2.0 * SQRT_2 * libm::sqrt(mu * (mu_b + mu));
    let diff = mu * mu - mu_b * mu_b;
    let kappa = (1.0 + mu_b) * (c1 - 4.0 * mu_b) / (4.0 * diff);
    if kappa > 1.0 {
        let value = (1.0 + mu_b) * (c1 - (mu + 3.0 * mu_b)) / (2.0 * diff);
        Ok(BpOmpThreshold { value, kappa, first_case: true })
    } else {
        Ok(BpOmpThreshold { value: second, kappa, first_case: false })
    }
}

/// Two-ONB BP/OMP threshold refined so that it never drops below the
/// general-dictionary threshold: `(√2 − 0.5)/μ` for `μ < 1/√2`,
/// `1 + (1 − μ)/(2μ²)` otherwise.
pub fn threshold_two_onb_refined(mu: f64) -> Result<f64> {
    Ok(threshold_pair_bp_omp(0.0, mu)?.value)
}

/// Every threshold for one coherence triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub triple: CoherenceTriple,
    pub general_p0: f64,
    pub two_onb_p0: f64,
    pub two_onb_bp: f64,
    pub pair_p0: f64,
    /// Only defined when `μa = μb`.
    pub pair_symmetric_p0: Option<f64>,
    pub pair_bp_omp: f64,
    pub two_onb_refined: f64,
    pub x_bord: f64,
    pub x_stat: f64,
    pub x_sol: f64,
    pub kappa: f64,
}

impl ThresholdReport {
    pub fn compute(t: &CoherenceTriple) -> Result<Self> {
        let mu = t.mu();
        let two = threshold_two_onb(mu)?;
        let pair = threshold_pair_p0(t)?;
        let bp = threshold_pair_bp_omp(t.mu_b(), mu)?;
        let pair_symmetric_p0 =
            if t.is_symmetric() { Some(threshold_pair_symmetric(t.mu_b(), mu)?) } else { None };
        Ok(Self {
            triple: *t,
            general_p0: threshold_general_p0(mu)?,
            two_onb_p0: two.p0,
            two_onb_bp: two.bp,
            pair_p0: pair.value,
            pair_symmetric_p0,
            pair_bp_omp: bp.value,
            two_onb_refined: threshold_two_onb_refined(mu)?,
            x_bord: pair.x_bord,
            x_stat: pair.x_stat,
            x_sol: pair.x_sol,
            kappa: bp.kappa,
        })
    }
}

/// One row of the threshold-versus-`μb` sweep with `μa = μb`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Row {
    pub mu_b: f64,
    pub general_p0: f64,
    pub pair_symmetric_p0: f64,
    pub pair_bp_omp: f64,
    pub two_onb_p0: f64,
    pub two_onb_bp: f64,
}

/// Sweeps `μb` uniformly over `[0, μ]` (endpoints included).
pub fn figure1_table(mu: f64, grid_size: usize) -> Result<Vec<Figure1Row>> {
    check_mu(mu)?;
    if grid_size < 2 {
        return Err(Error::InvalidArgument(alloc::format!("grid size must be ≥ 2, got {grid_size}")));
    }
    let general = threshold_general_p0(mu)?;
    let two = threshold_two_onb(mu)?;
    (0..grid_size)
        .map(|i| {
            let mu_b = if i + 1 == grid_size { mu } else { mu * i as f64 / (grid_size - 1) as f64 };
            Ok(Figure1Row {
                mu_b,
                general_p0: general,
                pair_symmetric_p0: threshold_pair_symmetric(mu_b, mu)?,
                pair_bp_omp: threshold_pair_bp_omp(mu_b, mu)?.value,
                two_onb_p0: two.p0,
                two_onb_bp: two.bp,
            })
        })
        .collect()
}
