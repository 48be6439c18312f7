use alloc::format;
use alloc::vec::Vec;

use itertools::Itertools;

use super::{RecoveryOutcome, Solver, SparseSignal};
use crate::combinatorics::{binomial, guard};
use crate::dictionaries::Dictionary;
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};

/// A support fits `y` when the least-squares residual is at most this
/// fraction of `‖y‖₂`.
pub const P0_FIT_TOLERANCE: f64 = 1e-8;

/// Sparsest representation found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct P0Solution {
    /// Minimizer on the lexicographically first fitting support.
    pub signal: SparseSignal,
    /// Another support of the same size also fits.
    pub non_unique: bool,
    /// The second fitting support, when there is one.
    pub alternative: Option<Vec<usize>>,
    /// Supports tried.
    pub supports_checked: usize,
    pub residual_norm: f64,
}

impl P0Solution {
    pub fn into_outcome(self) -> RecoveryOutcome {
        RecoveryOutcome {
            solver: Solver::P0,
            recovered: self.signal.coefficients,
            iterations: self.supports_checked,
            residual_norm: self.residual_norm,
            converged: true,
            success: None,
        }
    }
}

fn fit(d: &Dictionary, y: &CVector, support: &[usize], tol: f64) -> Option<(CVector, f64)> {
    let sub = d.select(support);
    let x = linalg::lstsq(&sub, y)?;
    let r = linalg::norm_l2(&(&sub * &x - y));
    (r <= tol).then_some((x, r))
}

/// Minimizes `‖x‖₀` subject to `y = D x` over supports of size at most
/// `max_k`, smallest sizes first.
pub fn p0_bruteforce(d: &Dictionary, y: &CVector, max_k: usize) -> Result<P0Solution> {
    let n = d.atoms();
    if y.len() != d.dim() {
        return Err(Error::Dimension(format!("signal has length {}, dictionary has {} rows", y.len(), d.dim())));
    }
    let max_k = max_k.min(n);
    guard(binomial(n, max_k))?;
    let y_norm = linalg::norm_l2(y);
    if y_norm == 0.0 {
        return Ok(P0Solution {
            signal: SparseSignal::new(CVector::zeros(n)),
            non_unique: false,
            alternative: None,
            supports_checked: 0,
            residual_norm: 0.0,
        });
    }
    let tol = P0_FIT_TOLERANCE * y_norm;
    let mut checked = 0usize;
    for k in 1..=max_k.min(d.dim()) {
        let mut found: Option<(Vec<usize>, CVector, f64)> = None;
        for support in (0..n).combinations(k) {
            checked += 1;
            let Some((x, r)) = fit(d, y, &support, tol) else { continue };
            match &found {
                None => found = Some((support, x, r)),
                Some((first, x_first, r_first)) => {
                    let mut coefficients = CVector::zeros(n);
                    for (&i, &v) in first.iter().zip(x_first.iter()) {
                        coefficients[i] = v;
                    }
                    return Ok(P0Solution {
                        signal: SparseSignal { coefficients, support: first.clone() },
                        non_unique: true,
                        alternative: Some(support),
                        supports_checked: checked,
                        residual_norm: *r_first,
                    });
                }
            }
        }
        if let Some((support, x, r)) = found {
            let mut coefficients = CVector::zeros(n);
            for (&i, &v) in support.iter().zip(x.iter()) {
                coefficients[i] = v;
            }
            return Ok(P0Solution {
                signal: SparseSignal { coefficients, support },
                non_unique: false,
                alternative: None,
                supports_checked: checked,
                residual_norm: r,
            });
        }
    }
    Err(Error::NoSparseRepresentation(max_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionaries::{build_dirac_fourier, build_random_pair};
    use crate::uncertainty::dirac_fourier_comb;
    use num_complex::Complex64;

    #[test]
    fn single_atom() {
        let df = build_dirac_fourier(4).unwrap();
        let y = df.joint().entries().column(3).into_owned();
        let sol = p0_bruteforce(df.joint(), &y, 3).unwrap();
        assert_eq!(sol.signal.support, alloc::vec![3]);
        assert!((sol.signal.coefficients[3] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(!sol.non_unique);
    }

    #[test]
    fn comb_is_flagged_non_unique() {
        let df = build_dirac_fourier(4).unwrap();
        let comb = dirac_fourier_comb(&df).unwrap();
        let sol = p0_bruteforce(df.joint(), comb.common(), 3).unwrap();
        assert_eq!(sol.signal.sparsity(), 2);
        assert!(sol.non_unique);
        assert_eq!(sol.signal.support, alloc::vec![0, 2]);
        assert_eq!(sol.alternative, Some(alloc::vec![4, 6]));
    }

    #[test]
    fn planted_two_sparse_on_random_pair_is_unique() {
        let c = build_random_pair(6, 6, 6, 5).unwrap();
        let mut x = CVector::zeros(12);
        x[1] = Complex64::new(0.7, -0.2);
        x[8] = Complex64::new(-1.1, 0.4);
        let y = c.joint().entries() * &x;
        let sol = p0_bruteforce(c.joint(), &y, 3).unwrap();
        assert!(!sol.non_unique);
        assert!(super::super::recovery_success(&sol.signal.coefficients, &x));
    }

    #[test]
    fn zero_signal_and_missing_representation() {
        let df = build_dirac_fourier(4).unwrap();
        let sol = p0_bruteforce(df.joint(), &CVector::zeros(4), 2).unwrap();
        assert!(sol.signal.support.is_empty());
        let y = CVector::from_fn(4, |i, _| Complex64::new(1.0 + i as f64, (i * i) as f64));
        assert_eq!(p0_bruteforce(df.joint(), &y, 1), Err(Error::NoSparseRepresentation(1)));
    }
}
