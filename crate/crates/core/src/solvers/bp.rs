use alloc::format;

use num_complex::Complex64;

use super::{RecoveryOutcome, Solver};
use crate::dictionaries::Dictionary;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Parameters of the alternating-direction iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpOptions {
    /// Penalty parameter; the shrinkage step uses `1/rho`.
    pub rho: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BpOptions {
    fn default() -> Self {
        Self { rho: 1.0, tol: 1e-9, max_iter: 50_000 }
    }
}

/// `z · max(0, 1 − τ/|z|)`, entrywise.
fn shrink(v: &CVector, tau: f64) -> CVector {
    v.map(|z| {
        let m = z.norm();
        if m <= tau {
            Complex64::new(0.0, 0.0)
        } else {
            z * (1.0 - tau / m)
        }
    })
}

/// Minimizes `‖x‖₁` subject to `D x = y` over complex `x`.
///
/// Each iteration projects onto the affine set `{x : D x = y}`, soft-thresholds
/// the magnitudes and updates the scaled dual variable. The returned vector is
/// the shrunk iterate. Convergence requires successive iterates to move by at
/// most `tol` and `‖D x − y‖₂ ≤ tol · ‖y‖₂`.
pub fn basis_pursuit(d: &Dictionary, y: &CVector, opts: BpOptions) -> Result<RecoveryOutcome> {
    let (rows, n) = (d.dim(), d.atoms());
    if y.len() != rows {
        return Err(Error::Dimension(format!("signal has length {}, dictionary has {rows} rows", y.len())));
    }
    if !(opts.rho > 0.0) || !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("rho and tol must be positive, got {} and {}", opts.rho, opts.tol)));
    }
    let rank = d.rank();
    if rank < rows {
        return Err(Error::RankDeficient { rank, dim: rows });
    }
    let m = d.entries();
    let gram_rows: CMatrix = m * m.adjoint();
    let chol = gram_rows.cholesky().ok_or(Error::Internal("D Dᴴ is not positive definite"))?;
    // x ↦ x + Dᴴ (D Dᴴ)⁻¹ (y − D x)
    let lift: CMatrix = m.adjoint() * chol.inverse();
    let y_norm = linalg::norm_l2(y);
    let base = &lift * y;

    let tau = 1.0 / opts.rho;
    let mut z = CVector::zeros(n);
    let mut u = CVector::zeros(n);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let v = &z - &u;
        let x = &v - &lift * (m * &v) + &base;
        let z_next = shrink(&(&x + &u), tau);
        u += &x - &z_next;
        let step = linalg::norm_l2(&(&z_next - &z));
        z = z_next;
        if step <= opts.tol {
            let r = linalg::norm_l2(&(m * &z - y));
            if r <= opts.tol * y_norm {
                converged = true;
                break;
            }
        }
    }
    let residual_norm = linalg::norm_l2(&(m * &z - y));
    Ok(RecoveryOutcome { solver: Solver::Bp, recovered: z, iterations, residual_norm, converged, success: None })
}
