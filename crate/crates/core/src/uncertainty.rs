//! The two-sided uncertainty relation for signals represented in both parts
//! of a concatenated dictionary, and an exhaustive check of it on small
//! instances.
//!
//! For `s = A p = B q` with `na = ‖p‖₀`, `nb = ‖q‖₀`:
//!
//! ```text
//! na · nb ≥ [1 − μa(na − 1)]⁺ [1 − μb(nb − 1)]⁺ / μ²
//! ```

use alloc::format;
use alloc::vec::Vec;

use itertools::Itertools;
use num_complex::Complex64;

use crate::combinatorics::{binomial, guard};
use crate::dictionaries::ConcatDictionary;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::thresholds::CoherenceTriple;

/// Coefficients below this fraction of the array's largest magnitude count as
/// zero when measuring `‖·‖₀`.
pub const ZERO_THRESHOLD: f64 = 1e-10;

/// Allowed mismatch between `A p`, `B q` and the shared signal.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-8;

/// Singular values at or below this are treated as zero in the intersection
/// test.
pub const KERNEL_TOLERANCE: f64 = 1e-8;

/// A kernel vector of `[A_SA, −B_SB]` counts as a common signal only when
/// the signal it produces has at least this norm.
pub const MIN_HALF_NORM: f64 = 1e-6;

/// Slack on `na·nb ≥ rhs`.
pub const BOUND_SLACK: f64 = 1e-9;

/// One signal written in both parts: `common = A p = B q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRepresentation {
    p: CVector,
    q: CVector,
    common: CVector,
    na: usize,
    nb: usize,
}

impl DualRepresentation {
    /// Stores the triple and measures `na`, `nb`. Both being zero is the
    /// trivial case and rejected. Consistency with a dictionary is checked by
    /// [`verify_representation`].
    pub fn new(p: CVector, q: CVector, common: CVector) -> Result<Self> {
        let na = linalg::support_of(&p, ZERO_THRESHOLD).len();
        let nb = linalg::support_of(&q, ZERO_THRESHOLD).len();
        if na == 0 && nb == 0 {
            return Err(Error::TrivialCase);
        }
        Ok(Self { p, q, common, na, nb })
    }

    /// Builds the representation with `common = A p`.
    pub fn from_parts(c: &ConcatDictionary, p: CVector, q: CVector) -> Result<Self> {
        if p.len() != c.n_a() || q.len() != c.n_b() {
            return Err(Error::Dimension(format!(
                "coefficient lengths ({}, {}) do not match parts ({}, {})",
                p.len(),
                q.len(),
                c.n_a(),
                c.n_b()
            )));
        }
        let common = c.part_a().entries() * &p;
        Self::new(p, q, common)
    }

    pub fn p(&self) -> &CVector {
        &self.p
    }

    pub fn q(&self) -> &CVector {
        &self.q
    }

    pub fn common(&self) -> &CVector {
        &self.common
    }

    pub fn na(&self) -> usize {
        self.na
    }

    pub fn nb(&self) -> usize {
        self.nb
    }
}

fn positive_part(u: f64) -> f64 {
    u.max(0.0)
}

/// Right-hand side of the uncertainty relation for sizes `(na, nb)`.
pub fn uncertainty_lower_bound(na: usize, nb: usize, t: &CoherenceTriple) -> Result<f64> {
    if na == 0 && nb == 0 {
        return Err(Error::TrivialCase);
    }
    let fa = positive_part(1.0 - t.mu_a() * (na as f64 - 1.0));
    let fb = positive_part(1.0 - t.mu_b() * (nb as f64 - 1.0));
    Ok(fa * fb / (t.mu() * t.mu()))
}

/// Whether `na·nb` reaches the bound (with [`BOUND_SLACK`]).
pub fn bound_holds(na: usize, nb: usize, t: &CoherenceTriple) -> Result<bool> {
    let rhs = uncertainty_lower_bound(na, nb, t)?;
    Ok((na * nb) as f64 >= rhs - BOUND_SLACK)
}

/// Checks that `rep` is consistent with `c` and reports whether the relation
/// holds for its `(na, nb)`.
pub fn verify_representation(c: &ConcatDictionary, rep: &DualRepresentation) -> Result<bool> {
    if rep.p.len() != c.n_a() || rep.q.len() != c.n_b() || rep.common.len() != c.dim() {
        return Err(Error::Dimension(format!(
            "representation lengths ({}, {}, {}) do not match dictionary ({}, {}, {})",
            rep.p.len(),
            rep.q.len(),
            rep.common.len(),
            c.n_a(),
            c.n_b(),
            c.dim()
        )));
    }
    let tol = CONSISTENCY_TOLERANCE * linalg::norm_l2(&rep.common).max(1.0);
    let ra = linalg::norm_l2(&(c.part_a().entries() * &rep.p - &rep.common));
    let rb = linalg::norm_l2(&(c.part_b().entries() * &rep.q - &rep.common));
    let residual = ra.max(rb);
    if residual > tol {
        return Err(Error::InconsistentRepresentation { residual });
    }
    bound_holds(rep.na, rep.nb, &c.triple())
}

/// The comb signal in Dirac–Fourier with `d = m²`: spikes every `m` samples.
/// Its Fourier coefficients form the same comb, so `na = nb = m` and the
/// relation holds with equality.
pub fn dirac_fourier_comb(c: &ConcatDictionary) -> Result<DualRepresentation> {
    let d = c.dim();
    let m = libm::round(libm::sqrt(d as f64)) as usize;
    if m * m != d || c.n_a() != d || c.n_b() != d {
        return Err(Error::InvalidArgument(format!("comb needs a square d with two bases, got d={d}")));
    }
    let comb = CVector::from_fn(d, |t, _| if t % m == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    let q = c.part_b().entries().adjoint() * &comb;
    DualRepresentation::new(comb.clone(), q, comb)
}

/// Outcome of testing one support pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairWitness {
    pub support_a: Vec<usize>,
    pub support_b: Vec<usize>,
}

/// One size class `(na, nb)` of the exhaustive scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub na: usize,
    pub nb: usize,
    /// Some support pair of these sizes carries a nonzero common signal (or,
    /// with one side empty, the other block is dependent).
    pub achieved: bool,
    /// Right-hand side of the relation at `(na, nb)`.
    pub bound_rhs: f64,
    /// Lexicographically first support pair that achieves the class.
    pub witness: Option<PairWitness>,
}

impl ScanRow {
    /// An achieved class whose product falls below the bound.
    pub fn is_violation(&self) -> bool {
        self.achieved && ((self.na * self.nb) as f64) < self.bound_rhs - BOUND_SLACK
    }

    pub fn meets_with_equality(&self) -> bool {
        self.achieved && (((self.na * self.nb) as f64) - self.bound_rhs).abs() <= BOUND_SLACK
    }
}

/// Exhaustive scan result in canonical `(na, nb)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyScan {
    pub rows: Vec<ScanRow>,
}

impl UncertaintyScan {
    pub fn violations(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.is_violation()).collect()
    }

    pub fn row(&self, na: usize, nb: usize) -> Option<&ScanRow> {
        self.rows.iter().find(|r| r.na == na && r.nb == nb)
    }
}

/// Whether `span(A_SA) ∩ span(B_SB)` contains a nonzero vector. With one
/// side empty the question becomes whether the other block is dependent.
pub fn supports_intersect(c: &ConcatDictionary, support_a: &[usize], support_b: &[usize]) -> bool {
    let a = c.part_a().select(support_a);
    let b = c.part_b().select(support_b);
    match (support_a.is_empty(), support_b.is_empty()) {
        (true, true) => false,
        (true, false) => linalg::kernel_basis(&b, KERNEL_TOLERANCE).ncols() > 0,
        (false, true) => linalg::kernel_basis(&a, KERNEL_TOLERANCE).ncols() > 0,
        (false, false) => {
            let (na, nb) = (a.ncols(), b.ncols());
            let mut m = CMatrix::zeros(c.dim(), na + nb);
            m.columns_mut(0, na).copy_from(&a);
            m.columns_mut(na, nb).copy_from(&(-b));
            let kernel = linalg::kernel_basis(&m, KERNEL_TOLERANCE);
            if kernel.ncols() == 0 {
                return false;
            }
            // the signals A p reachable from kernel vectors
            let signals = &a * kernel.rows(0, na);
            linalg::spectral_norm(&signals) >= MIN_HALF_NORM
        }
    }
}

/// Number of support pairs visited in the worst case, as checked by the guard.
pub fn scan_cost(c: &ConcatDictionary, max_na: usize, max_nb: usize) -> u128 {
    let max_na = max_na.min(c.n_a());
    let max_nb = max_nb.min(c.n_b());
    binomial(c.n_a(), max_na).saturating_mul(binomial(c.n_b(), max_nb))
}

/// Tests every support pair of sizes `(na, nb)` in lexicographic order and
/// stops at the first one that achieves the class.
pub fn scan_size_class(c: &ConcatDictionary, na: usize, nb: usize) -> Result<ScanRow> {
    let bound_rhs = uncertainty_lower_bound(na, nb, &c.triple())?;
    let mut witness = None;
    'outer: for sa in (0..c.n_a()).combinations(na) {
        for sb in (0..c.n_b()).combinations(nb) {
            if supports_intersect(c, &sa, &sb) {
                witness = Some(PairWitness { support_a: sa, support_b: sb });
                break 'outer;
            }
        }
    }
    Ok(ScanRow { na, nb, achieved: witness.is_some(), bound_rhs, witness })
}

/// The size classes of a scan in canonical order, `(0, 0)` excluded.
pub fn scan_classes(c: &ConcatDictionary, max_na: usize, max_nb: usize) -> Vec<(usize, usize)> {
    let max_na = max_na.min(c.n_a());
    let max_nb = max_nb.min(c.n_b());
    (0..=max_na)
        .cartesian_product(0..=max_nb)
        .filter(|&(na, nb)| na + nb > 0)
        .collect()
}

/// Every size class up to `(max_na, max_nb)`, sequentially.
pub fn exhaustive_uncertainty_scan(c: &ConcatDictionary, max_na: usize, max_nb: usize) -> Result<UncertaintyScan> {
    guard(scan_cost(c, max_na, max_nb))?;
    let rows = scan_classes(c, max_na, max_nb)
        .into_iter()
        .map(|(na, nb)| scan_size_class(c, na, nb))
        .collect::<Result<Vec<_>>>()?;
    Ok(UncertaintyScan { rows })
}
