//! Sparse recovery: exhaustive (P0), orthogonal matching pursuit, basis
//! pursuit, and the exact recovery condition.

use alloc::vec::Vec;
use core::fmt;

use crate::dictionaries::ConcatDictionary;
use crate::linalg::{self, CVector};

mod bp;
mod erc;
mod omp;
mod p0;

pub use bp::{basis_pursuit, BpOptions};
pub use erc::{erc_analytic_bound, erc_check, erc_statistic, neumann_margin, ErcReport};
pub use omp::{omp, OMP_DEFAULT_TOL};
pub use p0::{p0_bruteforce, P0Solution, P0_FIT_TOLERANCE};

/// Coefficients at or below this fraction of the largest magnitude are zero.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// Relative ℓ2 error below which a recovery counts as exact.
pub const SUCCESS_TOLERANCE: f64 = 1e-6;

/// Support indices of a coefficient vector over `[A B]`, split by part.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Support {
    /// Indices into `A`.
    pub a: Vec<usize>,
    /// Indices into `B` (local, not offset by `N_a`).
    pub b: Vec<usize>,
}

impl Support {
    /// Splits sorted joint indices at `n_a`.
    pub fn split(joint: &[usize], n_a: usize) -> Self {
        let a = joint.iter().copied().filter(|&i| i < n_a).collect();
        let b = joint.iter().copied().filter(|&i| i >= n_a).map(|i| i - n_a).collect();
        Self { a, b }
    }

    pub fn joint(&self, n_a: usize) -> Vec<usize> {
        self.a.iter().copied().chain(self.b.iter().map(|&i| i + n_a)).collect()
    }

    pub fn na(&self) -> usize {
        self.a.len()
    }

    pub fn nb(&self) -> usize {
        self.b.len()
    }

    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A coefficient vector together with its support.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    pub coefficients: CVector,
    /// Joint indices with `|x_i| > SUPPORT_THRESHOLD · max|x|`.
    pub support: Vec<usize>,
}

impl SparseSignal {
    pub fn new(coefficients: CVector) -> Self {
        let support = linalg::support_of(&coefficients, SUPPORT_THRESHOLD);
        Self { coefficients, support }
    }

    pub fn split_support(&self, c: &ConcatDictionary) -> Support {
        Support::split(&self.support, c.n_a())
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    P0,
    Bp,
    Omp,
}

impl Solver {
    pub const ALL: [Solver; 3] = [Solver::P0, Solver::Bp, Solver::Omp];

    pub fn name(self) -> &'static str {
        match self {
            Solver::P0 => "p0",
            Solver::Bp => "bp",
            Solver::Omp => "omp",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Solver {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p0" => Ok(Solver::P0),
            "bp" => Ok(Solver::Bp),
            "omp" => Ok(Solver::Omp),
            _ => Err(crate::Error::InvalidArgument(alloc::format!("unknown solver `{s}` (expected p0, bp or omp)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOutcome {
    pub solver: Solver,
    pub recovered: CVector,
    pub iterations: usize,
    /// `‖D x̂ − y‖₂`.
    pub residual_norm: f64,
    /// The solver's own stopping criterion was met.
    pub converged: bool,
    /// Exact recovery against a known ground truth; `None` until assessed.
    pub success: Option<bool>,
}

impl RecoveryOutcome {
    /// Compares against the planted coefficients and records the verdict.
    pub fn assess(&mut self, truth: &CVector) -> bool {
        let ok = recovery_success(&self.recovered, truth);
        self.success = Some(ok);
        ok
    }

    pub fn support(&self) -> Vec<usize> {
        linalg::support_of(&self.recovered, SUCCESS_TOLERANCE)
    }
}

/// `‖x̂ − x‖₂ / ‖x‖₂`; the absolute error when `x = 0`.
pub fn relative_error(recovered: &CVector, truth: &CVector) -> f64 {
    let err = linalg::norm_l2(&(recovered - truth));
    let scale = linalg::norm_l2(truth);
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}

/// Relative error within [`SUCCESS_TOLERANCE`] and matching supports, both
/// thresholded at [`SUCCESS_TOLERANCE`] relative to their largest entry.
pub fn recovery_success(recovered: &CVector, truth: &CVector) -> bool {
    recovered.len() == truth.len()
        && relative_error(recovered, truth) <= SUCCESS_TOLERANCE
        && linalg::support_of(recovered, SUCCESS_TOLERANCE) == linalg::support_of(truth, SUCCESS_TOLERANCE)
}
