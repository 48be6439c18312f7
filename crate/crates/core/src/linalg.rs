//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative cutoff on the diagonal of `R` below which a least-squares system
/// is treated as rank deficient.
pub const LSTSQ_RCOND: f64 = 1e-10;

/// Relative singular-value cutoff used by [`pinv`].
pub const PINV_RCOND: f64 = 1e-10;

/// Singular values in descending order (thin decomposition).
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    svd.singular_values.iter().copied().collect()
}

/// Smallest singular value of a `d × k` block, counting the `k − d` structural
/// zeros of a wide matrix.
pub fn sigma_min(m: &CMatrix) -> f64 {
    if m.ncols() == 0 {
        return 0.0;
    }
    if m.ncols() > m.nrows() {
        return 0.0;
    }
    singular_values(m).last().copied().unwrap_or(0.0)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Numerical rank with a cutoff relative to the largest singular value.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let Some(&top) = sv.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Right singular vectors whose singular value is at most `tol`, as the
/// columns of a `k × r` matrix. Wide inputs are zero-padded to square so the
/// full right factor is available.
pub fn kernel_basis(m: &CMatrix, tol: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol)
        .collect();
    let mut basis = CMatrix::zeros(cols, keep.len());
    for (out, &i) in keep.iter().enumerate() {
        for j in 0..cols {
            basis[(j, out)] = v_t[(i, j)].conj();
        }
    }
    basis
}

pub fn select_columns(m: &CMatrix, idx: &[usize]) -> CMatrix {
    m.select_columns(idx.iter())
}

/// Least-squares solution of `m x ≈ y` for a tall or square `m` through a
/// column-pivoted QR factorization. Returns `None` when `m` is (numerically)
/// rank deficient or wider than tall.
pub fn lstsq(m: &CMatrix, y: &CVector) -> Option<CVector> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Some(CVector::zeros(0));
    }
    if cols > rows {
        return None;
    }
    let (q, r, p) = m.clone().col_piv_qr().unpack();
    let diag: Vec<f64> = (0..cols).map(|i| r[(i, i)].norm()).collect();
    let top = diag.iter().copied().fold(0.0, f64::max);
    if top == 0.0 || diag.iter().any(|&v| v <= LSTSQ_RCOND * top) {
        return None;
    }
    let rhs = q.adjoint() * y;
    let mut x = r.solve_upper_triangular(&rhs)?;
    p.inv_permute_rows(&mut x);
    Some(x)
}

/// Moore–Penrose pseudo-inverse with relative cutoff [`PINV_RCOND`].
pub fn pinv(m: &CMatrix) -> CMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(cols, rows);
    }
    let svd = m.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = PINV_RCOND * top;
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut out = CMatrix::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            continue;
        }
        let vk = v_t.row(k).adjoint();
        let uk = u.column(k).adjoint();
        out += (vk * uk).unscale(s);
    }
    out
}

pub fn norm_l1(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

pub fn norm_l2(v: &CVector) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

pub fn max_abs(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Indices whose magnitude exceeds `rel · max|v|`.
pub fn support_of(v: &CVector, rel: f64) -> Vec<usize> {
    let top = max_abs(v);
    if top == 0.0 {
        return Vec::new();
    }
    (0..v.len()).filter(|&i| v[i].norm() > rel * top).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lstsq_residual_is_orthogonal_to_columns() {
        let m = CMatrix::from_row_slice(
            4,
            2,
            &[c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0), c(1.0, 1.0), c(0.5, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(3.0, 2.0)],
        );
        let y = CVector::from_vec(alloc::vec![c(1.0, 2.0), c(0.0, -1.0), c(4.0, 0.0), c(1.0, 1.0)]);
        let x = lstsq(&m, &y).unwrap();
        let r = &y - &m * &x;
        let proj = m.adjoint() * r;
        assert!(norm_l2(&proj) < 1e-12, "{proj}");
    }

    #[test]
    fn lstsq_rejects_dependent_columns() {
        let m = CMatrix::from_row_slice(3, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0), c(2.0, 2.0)]);
        let y = CVector::from_element(3, c(1.0, 0.0));
        assert!(lstsq(&m, &y).is_none());
    }

    #[test]
    fn pinv_of_full_column_rank_is_left_inverse() {
        let m = CMatrix::from_fn(5, 3, |i, j| c((i * 3 + j) as f64 % 7.0 - 3.0, (i + 2 * j) as f64 * 0.25));
        let p = pinv(&m);
        let eye = &p * &m;
        assert!((eye - CMatrix::identity(3, 3)).norm() < 1e-10);
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let m = CMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(1.0, 0.0)]);
        let k = kernel_basis(&m, 1e-8);
        assert_eq!(k.ncols(), 1);
        assert!((&m * &k).norm() < 1e-12);
    }
}
