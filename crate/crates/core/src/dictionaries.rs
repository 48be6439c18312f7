//! Dictionaries with unit-norm columns, their concatenations, and the
//! standard constructions (Dirac–Fourier, mutually unbiased bases, seeded
//! random pairs).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::rng;
use crate::thresholds::{CoherenceTriple, ORDER_TOLERANCE};

/// Column norms must equal one up to this tolerance.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Relative singular-value cutoff for the span check.
pub const SPAN_RCOND: f64 = 1e-8;

/// A `d × N` complex matrix whose columns (atoms) have unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    entries: CMatrix,
    label: String,
}

impl Dictionary {
    /// Validates dimensions and unit column norms.
    pub fn new(entries: CMatrix, label: impl Into<String>) -> Result<Self> {
        let (d, n) = entries.shape();
        if d == 0 || n == 0 {
            return Err(Error::Dimension(format!("dictionary must be at least 1×1, got {d}×{n}")));
        }
        for (j, col) in entries.column_iter().enumerate() {
            let norm = col.norm();
            if !((norm - 1.0).abs() <= NORM_TOLERANCE) {
                return Err(Error::NotUnitNorm { column: j, norm });
            }
        }
        Ok(Self { entries, label: label.into() })
    }

    /// Rescales every column to unit norm. Zero columns are rejected.
    pub fn normalized(mut entries: CMatrix, label: impl Into<String>) -> Result<Self> {
        for (j, mut col) in entries.column_iter_mut().enumerate() {
            let norm = col.norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::NotUnitNorm { column: j, norm });
            }
            col.unscale_mut(norm);
        }
        Self::new(entries, label)
    }

    /// Builds from `d·n` entries in row-major order.
    pub fn from_row_major(d: usize, n: usize, data: &[Complex64], label: impl Into<String>) -> Result<Self> {
        if data.len() != d * n {
            return Err(Error::Dimension(format!("expected {} entries, got {}", d * n, data.len())));
        }
        Self::new(CMatrix::from_row_slice(d, n, data), label)
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(CMatrix::identity(d, d), format!("dirac{d}"))
    }

    /// Unitary DFT, `F[t, k] = exp(−2πi·tk/d)/√d`.
    pub fn fourier(d: usize) -> Result<Self> {
        let scale = 1.0 / libm::sqrt(d as f64);
        let m = CMatrix::from_fn(d, d, |t, k| {
            let phase = -2.0 * PI * ((t * k) % d.max(1)) as f64 / d as f64;
            Complex64::from_polar(scale, phase)
        });
        Self::new(m, format!("fourier{d}"))
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Number of atoms `N`.
    pub fn atoms(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn gram(&self) -> CMatrix {
        self.entries.adjoint() * &self.entries
    }

    pub fn coherence(&self) -> Result<f64> {
        coherence(self)
    }

    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(self)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.entries, SPAN_RCOND)
    }

    /// Columns at `idx`, in that order.
    pub fn select(&self, idx: &[usize]) -> CMatrix {
        linalg::select_columns(&self.entries, idx)
    }

    pub fn summary(&self) -> Result<GramSummary> {
        let coherence = self.coherence()?;
        let (d, n) = (self.dim(), self.atoms());
        let welch = if n > d { welch_bound(d, n)? } else { 0.0 };
        let sv = linalg::singular_values(&self.entries);
        let min_singular = if n > d { sv.last().copied().unwrap_or(0.0) } else { linalg::sigma_min(&self.entries) };
        Ok(GramSummary {
            coherence,
            welch_bound: welch,
            spectral_norm: sv.first().copied().unwrap_or(0.0),
            min_singular,
        })
    }
}

/// Second-order statistics of a dictionary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramSummary {
    pub coherence: f64,
    /// Zero when `N ≤ d`.
    pub welch_bound: f64,
    pub spectral_norm: f64,
    /// Smallest of the `min(d, N)` singular values.
    pub min_singular: f64,
}

fn max_off_diagonal(gram: &CMatrix, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> f64 {
    let mut best = 0.0f64;
    for i in rows {
        for j in cols.clone() {
            if i != j {
                best = best.max(gram[(i, j)].norm());
            }
        }
    }
    best.min(1.0)
}

/// Largest `|d_iᴴ d_j|` over distinct atoms, clipped to `[0, 1]`.
pub fn coherence(d: &Dictionary) -> Result<f64> {
    let n = d.atoms();
    if n < 2 {
        return Err(Error::CoherenceUndefined);
    }
    Ok(max_off_diagonal(&d.gram(), 0..n, 0..n))
}

/// `√((N − d)/(d(N − 1)))`, the smallest coherence any `N` unit vectors in
/// dimension `d` can have.
pub fn welch_bound(d: usize, n: usize) -> Result<f64> {
    if d == 0 || n <= d {
        return Err(Error::NotOvercomplete { d, n });
    }
    Ok(libm::sqrt((n - d) as f64 / (d as f64 * (n - 1) as f64)))
}

/// Largest singular value.
pub fn spectral_norm(d: &Dictionary) -> f64 {
    linalg::spectral_norm(d.entries())
}

/// Which half of a concatenated dictionary an atom belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    A(usize),
    B(usize),
}

/// `D = [A B]` with measured coherences `μa ≤ μb ≤ μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcatDictionary {
    part_a: Dictionary,
    part_b: Dictionary,
    joint: Dictionary,
    triple: CoherenceTriple,
}

/// Measures `(μa, μb, μ)` from one Gram matrix of `[A B]`. Sub-dictionaries
/// with a single atom have coherence 0.
fn measure(a: &Dictionary, b: &Dictionary) -> Result<(Dictionary, f64, f64, f64)> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("parts have {} and {} rows", a.dim(), b.dim())));
    }
    let (na, nb) = (a.atoms(), b.atoms());
    let mut m = CMatrix::zeros(a.dim(), na + nb);
    m.columns_mut(0, na).copy_from(a.entries());
    m.columns_mut(na, nb).copy_from(b.entries());
    let joint = Dictionary::new(m, format!("[{} {}]", a.label(), b.label()))?;
    let gram = joint.gram();
    let n = na + nb;
    let mu_a = max_off_diagonal(&gram, 0..na, 0..na);
    let mu_b = max_off_diagonal(&gram, na..n, na..n);
    let mu = max_off_diagonal(&gram, 0..n, 0..n);
    Ok((joint, mu_a, mu_b, mu))
}

impl ConcatDictionary {
    /// Requires `μa ≤ μb` (ties within [`ORDER_TOLERANCE`] accepted) and that
    /// the columns of `[A B]` span the ambient space.
    pub fn new(a: Dictionary, b: Dictionary) -> Result<Self> {
        let (joint, mu_a, mu_b, mu) = measure(&a, &b)?;
        if mu_a > mu_b + ORDER_TOLERANCE {
            return Err(Error::PartsOutOfOrder { mu_a, mu_b });
        }
        let rank = joint.rank();
        if rank < joint.dim() {
            return Err(Error::RankDeficient { rank, dim: joint.dim() });
        }
        let triple = CoherenceTriple::new(mu_a, mu_b, mu)?;
        Ok(Self { part_a: a, part_b: b, joint, triple })
    }

    /// Like [`ConcatDictionary::new`] but swaps the parts when `μa > μb`.
    /// Returns whether a swap happened.
    pub fn ordered(a: Dictionary, b: Dictionary) -> Result<(Self, bool)> {
        let (_, mu_a, mu_b, _) = measure(&a, &b)?;
        if mu_a > mu_b + ORDER_TOLERANCE {
            Ok((Self::new(b, a)?, true))
        } else {
            Ok((Self::new(a, b)?, false))
        }
    }

    pub fn part_a(&self) -> &Dictionary {
        &self.part_a
    }

    pub fn part_b(&self) -> &Dictionary {
        &self.part_b
    }

    /// The concatenation `[A B]` as a single dictionary.
    pub fn joint(&self) -> &Dictionary {
        &self.joint
    }

    pub fn dim(&self) -> usize {
        self.joint.dim()
    }

    pub fn n_a(&self) -> usize {
        self.part_a.atoms()
    }

    pub fn n_b(&self) -> usize {
        self.part_b.atoms()
    }

    pub fn atoms(&self) -> usize {
        self.joint.atoms()
    }

    pub fn triple(&self) -> CoherenceTriple {
        self.triple
    }

    pub fn mu_a(&self) -> f64 {
        self.triple.mu_a()
    }

    pub fn mu_b(&self) -> f64 {
        self.triple.mu_b()
    }

    pub fn mu(&self) -> f64 {
        self.triple.mu()
    }

    /// Maps a joint column index to its part and local index.
    pub fn locate(&self, joint_index: usize) -> Part {
        if joint_index < self.n_a() {
            Part::A(joint_index)
        } else {
            Part::B(joint_index - self.n_a())
        }
    }
}

/// `(μa, μb, μ)` of the concatenation, re-measured from the entries.
pub fn concat_coherences(c: &ConcatDictionary) -> Result<(f64, f64, f64)> {
    let (_, mu_a, mu_b, mu) = measure(c.part_a(), c.part_b())?;
    if mu_a > mu_b + ORDER_TOLERANCE {
        return Err(Error::PartsOutOfOrder { mu_a, mu_b });
    }
    Ok((mu_a, mu_b, mu))
}

/// Identity paired with the unitary DFT: `μa = μb = 0`, `μ = 1/√d`.
pub fn build_dirac_fourier(d: usize) -> Result<ConcatDictionary> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("Dirac–Fourier pair needs d ≥ 2, got {d}")));
    }
    ConcatDictionary::new(Dictionary::identity(d)?, Dictionary::fourier(d)?)
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The `p + 1` mutually unbiased bases of `ℂ^p` for prime `p`: the standard
/// basis followed by the chirp bases `exp(2πi(b t² + k t)/p)/√p`, `b = 0..p`.
/// For `p = 2` the chirps use fourth roots of unity, `i^(b t² + 2kt)/√2`.
pub fn mub_bases(p: usize) -> Result<Vec<CMatrix>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let scale = 1.0 / libm::sqrt(p as f64);
    let mut bases = Vec::with_capacity(p + 1);
    bases.push(CMatrix::identity(p, p));
    for b in 0..p {
        let basis = CMatrix::from_fn(p, p, |t, k| {
            let phase = if p == 2 {
                PI * ((b * t * t + 2 * k * t) % 4) as f64 / 2.0
            } else {
                2.0 * PI * ((b * t * t + k * t) % p) as f64 / p as f64
            };
            Complex64::from_polar(scale, phase)
        });
        bases.push(basis);
    }
    Ok(bases)
}

fn hconcat(blocks: &[CMatrix]) -> CMatrix {
    let rows = blocks[0].nrows();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        m.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    m
}

/// `A` = the first `split_after` mutually unbiased bases, `B` = the rest.
pub fn build_mub_concat(p: usize, split_after: usize) -> Result<ConcatDictionary> {
    let bases = mub_bases(p)?;
    if split_after < 1 || split_after > p {
        return Err(Error::InvalidArgument(format!("split must lie in [1, {p}], got {split_after}")));
    }
    let a = Dictionary::new(hconcat(&bases[..split_after]), format!("mub{p}[..{split_after}]"))?;
    let b = Dictionary::new(hconcat(&bases[split_after..]), format!("mub{p}[{split_after}..]"))?;
    ConcatDictionary::new(a, b)
}

/// Unit-normalized complex Gaussian columns, reproducible from `seed`. The
/// parts are swapped when needed so that `μa ≤ μb`.
pub fn build_random_pair(d: usize, n_a: usize, n_b: usize, seed: u64) -> Result<ConcatDictionary> {
    if d == 0 || n_a == 0 || n_b == 0 {
        return Err(Error::Dimension(format!("random pair needs positive sizes, got d={d}, Na={n_a}, Nb={n_b}")));
    }
    if n_a + n_b < d {
        let rank = n_a + n_b;
        return Err(Error::RankDeficient { rank, dim: d });
    }
    let mut rng = rng::seeded(seed);
    let mut draw = |n: usize| CMatrix::from_fn(d, n, |_, _| rng::complex_gaussian(&mut rng));
    let a = draw(n_a);
    let b = draw(n_b);
    let a = Dictionary::normalized(a, format!("gauss{d}x{n_a}#{seed}"))?;
    let b = Dictionary::normalized(b, format!("gauss{d}x{n_b}#{seed}"))?;
    Ok(ConcatDictionary::ordered(a, b)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_coherence(m: &CMatrix) -> f64 {
        let mut best = 0.0f64;
        for i in 0..m.ncols() {
            for j in 0..m.ncols() {
                if i == j {
                    continue;
                }
                let mut ip = Complex64::new(0.0, 0.0);
                for t in 0..m.nrows() {
                    ip += m[(t, i)].conj() * m[(t, j)];
                }
                best = best.max(ip.norm());
            }
        }
        best
    }

    #[test]
    fn coherence_of_identity_and_dirac_fourier() {
        assert_eq!(coherence(&Dictionary::identity(2).unwrap()).unwrap(), 0.0);
        let df = build_dirac_fourier(4).unwrap();
        assert!((df.mu() - 0.5).abs() < 1e-12);
        assert!(df.mu_a() < 1e-12 && df.mu_b() < 1e-12);
        let df9 = build_dirac_fourier(9).unwrap();
        assert!((df9.mu() - 1.0 / 3.0).abs() < 1e-12);
        let df2 = build_dirac_fourier(2).unwrap();
        assert!((df2.mu() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn coherence_matches_pairwise_scan() {
        let c = build_random_pair(4, 4, 4, 11).unwrap();
        let brute = brute_coherence(c.joint().entries());
        assert!((c.joint().coherence().unwrap() - brute).abs() < 1e-14);
        assert!((c.mu() - brute).abs() < 1e-14);
    }

    #[test]
    fn single_column_coherence_is_undefined() {
        let d = Dictionary::new(CMatrix::identity(3, 1), "e0").unwrap();
        assert_eq!(coherence(&d), Err(Error::CoherenceUndefined));
    }

    #[test]
    fn welch_values() {
        assert!((welch_bound(4, 8).unwrap() - libm::sqrt(4.0 / 28.0)).abs() < 1e-15);
        assert!((welch_bound(4, 8).unwrap() - 0.377_964_473_009_227_2).abs() < 1e-12);
        assert!((welch_bound(4, 5).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(welch_bound(4, 4), Err(Error::NotOvercomplete { .. })));
    }

    #[test]
    fn rejects_non_unit_columns() {
        let m = CMatrix::identity(3, 3) * Complex64::new(2.0, 0.0);
        assert!(matches!(Dictionary::new(m.clone(), "x"), Err(Error::NotUnitNorm { column: 0, .. })));
        assert!(Dictionary::normalized(m, "x").is_ok());
        assert!(Dictionary::normalized(CMatrix::zeros(2, 2), "z").is_err());
    }

    #[test]
    fn concat_requires_order_and_span() {
        let (a, b) = (Dictionary::identity(4).unwrap(), Dictionary::fourier(4).unwrap());
        let c = ConcatDictionary::new(a, b).unwrap();
        let (ma, mb, m) = concat_coherences(&c).unwrap();
        assert!(ma < 1e-12 && mb < 1e-12 && (m - 0.5).abs() < 1e-12);

        let frame = Dictionary::normalized(
            CMatrix::from_row_slice(2, 2, &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.1, 0.0)]),
            "skewed",
        )
        .unwrap();
        let e1 = Dictionary::new(CMatrix::identity(2, 1), "e1").unwrap();
        assert!(matches!(ConcatDictionary::new(frame.clone(), e1.clone()), Err(Error::PartsOutOfOrder { .. })));
        let (c, swapped) = ConcatDictionary::ordered(frame, e1).unwrap();
        assert!(swapped);
        assert_eq!(c.n_a(), 1);

        let x = Dictionary::new(CMatrix::identity(3, 1), "e0").unwrap();
        assert!(matches!(ConcatDictionary::new(x.clone(), x), Err(Error::RankDeficient { rank: 1, dim: 3 })));
    }

    #[test]
    fn mub_p5_split1() {
        let c = build_mub_concat(5, 1).unwrap();
        assert_eq!((c.n_a(), c.n_b()), (5, 25));
        let s = 1.0 / libm::sqrt(5.0);
        assert!(c.mu_a().abs() < 1e-12);
        assert!((c.mu_b() - s).abs() < 1e-9);
        assert!((c.mu() - s).abs() < 1e-9);
        let nb = c.part_b().spectral_norm();
        assert!((nb * nb - 5.0).abs() < 1e-8);
        assert!((nb - libm::sqrt(5.0)).abs() < 1e-8);
    }

    #[test]
    fn mub_inner_products_are_zero_or_unbiased() {
        for p in [2usize, 3, 5, 7] {
            let c = build_mub_concat(p, 1).unwrap();
            let g = c.joint().gram();
            let s = 1.0 / libm::sqrt(p as f64);
            for i in 0..g.nrows() {
                for j in 0..i {
                    let v = g[(i, j)].norm();
                    assert!(v < 1e-9 || (v - s).abs() < 1e-9, "p={p} ({i},{j}) -> {v}");
                }
            }
        }
        let c = build_mub_concat(3, 2).unwrap();
        let s = 1.0 / libm::sqrt(3.0);
        let g = c.joint().gram();
        for i in 0..3 {
            for j in 3..12 {
                assert!((g[(i, j)].norm() - s).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn mub_rejects_composite_and_bad_split() {
        assert_eq!(build_mub_concat(4, 1), Err(Error::NotPrime(4)));
        assert!(build_mub_concat(5, 0).is_err());
        assert!(build_mub_concat(5, 6).is_err());
        // five bases in A, one in B: μa > μb
        assert!(matches!(build_mub_concat(5, 5), Err(Error::PartsOutOfOrder { .. })));
        assert!(build_mub_concat(5, 3).is_ok());
    }

    #[test]
    fn random_pair_is_deterministic_and_ordered() {
        let a = build_random_pair(4, 4, 8, 7).unwrap();
        let b = build_random_pair(4, 4, 8, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.mu_a() <= a.mu_b());
        assert!(matches!(build_random_pair(4, 2, 1, 1), Err(Error::RankDeficient { .. })));
        let c = build_random_pair(6, 6, 12, 3).unwrap();
        assert!(c.mu() >= welch_bound(6, 18).unwrap());
        assert!(c.mu() >= c.mu_a().max(c.mu_b()));
    }

    #[test]
    fn spectral_norm_cases() {
        assert!((spectral_norm(&Dictionary::identity(4).unwrap()) - 1.0).abs() < 1e-12);
        // [I F] is a tight frame of 8 unit vectors in d = 4: D Dᴴ = 2 I
        let df = build_dirac_fourier(4).unwrap();
        let s = df.joint().spectral_norm();
        assert!((s - core::f64::consts::SQRT_2).abs() < 1e-12);
        let gram_top = df.joint().gram().symmetric_eigenvalues().iter().copied().fold(f64::MIN, f64::max);
        assert!((s * s - gram_top).abs() < 1e-10);
    }

    #[test]
    fn summary_respects_welch_and_trace_bounds() {
        for seed in 0..5 {
            let c = build_random_pair(5, 5, 9, seed).unwrap();
            let s = c.joint().summary().unwrap();
            assert!(s.coherence >= s.welch_bound - 1e-12);
            assert!(s.spectral_norm >= 1.0);
            let (d, n) = (c.dim() as f64, c.atoms() as f64);
            assert!(s.spectral_norm * s.spectral_norm >= n / d - 1e-9);
        }
    }
}
