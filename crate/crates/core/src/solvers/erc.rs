use alloc::format;
use alloc::vec::Vec;

use super::Support;
use crate::dictionaries::{ConcatDictionary, Dictionary};
use crate::error::{Error, Result};
use crate::linalg;

/// Support columns with smallest singular value at or below this are
/// considered dependent.
pub const ERC_RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ErcReport {
    /// `max ‖D_S† d_i‖₁` over atoms outside `S`.
    pub max_l1: f64,
    /// The coherence bound on `max_l1`; `None` when its Neumann condition fails.
    pub analytic_bound: Option<f64>,
    /// `max_l1 < 1`.
    pub satisfied: bool,
    pub support: Support,
}

/// `max ‖D_S† d_i‖₁` over the columns of `d` not in `support`.
pub fn erc_statistic(d: &Dictionary, support: &[usize]) -> Result<f64> {
    if let Some(&bad) = support.iter().find(|&&i| i >= d.atoms()) {
        return Err(Error::Dimension(format!("support index {bad} out of range for {} atoms", d.atoms())));
    }
    if support.is_empty() {
        return Ok(0.0);
    }
    let sub = d.select(support);
    if linalg::sigma_min(&sub) <= ERC_RANK_TOLERANCE {
        return Err(Error::DependentSupport);
    }
    let pinv = linalg::pinv(&sub);
    let outside: Vec<usize> = (0..d.atoms()).filter(|i| !support.contains(i)).collect();
    if outside.is_empty() {
        return Ok(0.0);
    }
    let proj = pinv * d.select(&outside);
    Ok(proj.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max))
}

/// Exact recovery condition for `S` (joint indices into `[A B]`), with the
/// coherence-based bound for its part sizes.
pub fn erc_check(c: &ConcatDictionary, support: &[usize]) -> Result<ErcReport> {
    let max_l1 = erc_statistic(c.joint(), support)?;
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    let split = Support::split(&sorted, c.n_a());
    let analytic_bound = erc_analytic_bound(split.na(), split.nb(), c.mu_b(), c.mu()).ok();
    Ok(ErcReport { max_l1, analytic_bound, satisfied: max_l1 < 1.0, support: split })
}

fn ordered(na: usize, nb: usize) -> (f64, f64) {
    (na.min(nb) as f64, na.max(nb) as f64)
}

/// `1 − (μ nb + μb (na − 1))` with `na ≤ nb`; positive when the bound below
/// is defined.
pub fn neumann_margin(na: usize, nb: usize, mu_b: f64, mu: f64) -> f64 {
    let (na, nb) = ordered(na, nb);
    1.0 - (mu * nb + mu_b * (na - 1.0))
}

/// `(μb c_a na + μ c_b nb) / (1 − μ(c_a na + c_b nb))` with
/// `c_x = 1/((μ − μb) n_x + 1 + μb)`, the sizes ordered so that `na ≤ nb`.
/// Below one exactly when the support-size condition for BP/OMP holds.
pub fn erc_analytic_bound(na: usize, nb: usize, mu_b: f64, mu: f64) -> Result<f64> {
    let margin = neumann_margin(na, nb, mu_b, mu);
    if !(margin > 0.0) {
        return Err(Error::NeumannConditionFails { value: 1.0 - margin });
    }
    let (na, nb) = ordered(na, nb);
    let ca = 1.0 / ((mu - mu_b) * na + 1.0 + mu_b);
    let cb = 1.0 / ((mu - mu_b) * nb + 1.0 + mu_b);
    Ok((mu_b * ca * na + mu * cb * nb) / (1.0 - mu * (ca * na + cb * nb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionaries::{build_dirac_fourier, build_random_pair};
    use crate::thresholds::bp_omp_condition;

    #[test]
    fn orthonormal_single_atom() {
        let id = Dictionary::identity(5).unwrap();
        assert!(erc_statistic(&id, &[2]).unwrap() < 1e-14);
    }

    #[test]
    fn dirac_fourier_single_spike() {
        let df = build_dirac_fourier(4).unwrap();
        let r = erc_check(&df, &[0]).unwrap();
        assert!((r.max_l1 - 0.5).abs() < 1e-12);
        assert!(r.satisfied);
        assert!(r.max_l1 <= r.analytic_bound.unwrap() + 1e-9);
    }

    #[test]
    fn hand_evaluated_bound() {
        let b = erc_analytic_bound(1, 1, 0.0, 0.2).unwrap();
        assert!((b - 0.25).abs() < 1e-15);
    }

    #[test]
    fn neumann_failure_is_reported() {
        assert!(matches!(erc_analytic_bound(1, 10, 0.0, 0.2), Err(Error::NeumannConditionFails { .. })));
    }

    #[test]
    fn dependent_support_is_rejected() {
        let df = build_dirac_fourier(4).unwrap();
        assert_eq!(erc_check(&df, &[0, 2, 4, 6]), Err(Error::DependentSupport));
    }

    #[test]
    fn bound_below_one_matches_condition() {
        for i in 0..50 {
            let mu = 0.02 + 0.96 * i as f64 / 49.0;
            for j in 0..50 {
                let mu_b = mu * j as f64 / 49.0;
                for na in 0..6 {
                    for nb in na..8 {
                        if na + nb == 0 {
                            continue;
                        }
                        let cond = bp_omp_condition(na, nb, mu_b, mu);
                        match erc_analytic_bound(na, nb, mu_b, mu) {
                            Ok(b) => assert_eq!(b < 1.0, cond, "na={na} nb={nb} mub={mu_b} mu={mu} b={b}"),
                            Err(_) => assert!(!cond, "na={na} nb={nb} mub={mu_b} mu={mu}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn statistic_never_exceeds_bound() {
        for seed in 0..10 {
            let c = build_random_pair(8, 8, 8, seed).unwrap();
            for support in [alloc::vec![0], alloc::vec![1, 9], alloc::vec![3, 12, 15]] {
                let r = erc_check(&c, &support).unwrap();
                if let Some(b) = r.analytic_bound {
                    assert!(r.max_l1 <= b + 1e-9);
                }
            }
        }
    }
}
