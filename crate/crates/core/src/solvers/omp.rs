use alloc::format;
use alloc::vec::Vec;

use super::{RecoveryOutcome, Solver};
use crate::dictionaries::Dictionary;
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};

/// Default stopping threshold on `‖r‖₂ / ‖y‖₂`.
pub const OMP_DEFAULT_TOL: f64 = 1e-10;

/// Orthogonal matching pursuit. Each step adds the atom most correlated with
/// the residual (lowest index on ties) and refits all selected atoms by least
/// squares. Stops when `‖r‖₂ ≤ residual_tol · ‖y‖₂` or after `max_iter`
/// atoms.
pub fn omp(d: &Dictionary, y: &CVector, max_iter: usize, residual_tol: f64) -> Result<RecoveryOutcome> {
    let (rows, n) = (d.dim(), d.atoms());
    if y.len() != rows {
        return Err(Error::Dimension(format!("signal has length {}, dictionary has {rows} rows", y.len())));
    }
    if max_iter > rows {
        return Err(Error::InvalidArgument(format!("maxIter {max_iter} exceeds d = {rows}")));
    }
    let stop = residual_tol * linalg::norm_l2(y);
    let mut support: Vec<usize> = Vec::with_capacity(max_iter);
    let mut coeffs = CVector::zeros(0);
    let mut residual = y.clone();
    let mut iterations = 0;
    while iterations < max_iter && linalg::norm_l2(&residual) > stop {
        let corr = d.entries().adjoint() * &residual;
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|i| !support.contains(i)) {
            let v = corr[i].norm();
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        let Some((pick, _)) = best else { break };
        support.push(pick);
        let sub = d.select(&support);
        let Some(x) = linalg::lstsq(&sub, y) else {
            support.pop();
            break;
        };
        residual = y - &sub * &x;
        coeffs = x;
        iterations += 1;
    }
    let mut recovered = CVector::zeros(n);
    for (&i, &v) in support.iter().zip(coeffs.iter()) {
        recovered[i] = v;
    }
    let residual_norm = linalg::norm_l2(&residual);
    Ok(RecoveryOutcome {
        solver: Solver::Omp,
        recovered,
        iterations,
        residual_norm,
        converged: residual_norm <= stop,
        success: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionaries::build_dirac_fourier;
    use crate::linalg::CMatrix;
    use num_complex::Complex64;

    #[test]
    fn single_atom_in_one_step() {
        let df = build_dirac_fourier(8).unwrap();
        let y = df.joint().entries().column(5).into_owned();
        let out = omp(df.joint(), &y, 8, OMP_DEFAULT_TOL).unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.support(), alloc::vec![5]);
        assert!(out.converged);
    }

    #[test]
    fn ties_go_to_the_lowest_index() {
        // y is equally correlated with e0 and e1
        let d = Dictionary::new(CMatrix::identity(2, 2), "dirac2").unwrap();
        let y = CVector::from_vec(alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        let out = omp(&d, &y, 1, OMP_DEFAULT_TOL).unwrap();
        assert_eq!(out.support(), alloc::vec![0]);
        assert!(!out.converged);
        let again = omp(&d, &y, 1, OMP_DEFAULT_TOL).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn rejects_too_many_iterations() {
        let df = build_dirac_fourier(4).unwrap();
        assert!(omp(df.joint(), &CVector::zeros(4), 5, 1e-9).is_err());
        let out = omp(df.joint(), &CVector::zeros(4), 4, 1e-9).unwrap();
        assert_eq!(out.iterations, 0);
    }
}
