#![no_std]
// `!(x >= lo)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Sparse signals in dictionaries built by concatenating two parts `A` and
//! `B` with coherences `μa ≤ μb ≤ μ`.
//!
//! The crate covers coherence measurement and standard constructions,
//! closed-form sparsity thresholds, the two-sided uncertainty relation,
//! exact spark on small dictionaries, sparse solvers ((P0) enumeration, OMP,
//! basis pursuit, the exact recovery condition) and seeded Monte Carlo
//! experiments with random supports.
//!
//! It needs only `alloc`. File formats, parallel batch runners and the
//! command-line tool live in the `sparsepair` crate.
//!
//! ```
//! use sparsepair_core::dictionaries::build_dirac_fourier;
//! use sparsepair_core::thresholds::{threshold_pair_p0, threshold_general_p0};
//!
//! let df = build_dirac_fourier(16).unwrap();
//! let pair = threshold_pair_p0(&df.triple()).unwrap();
//! assert!((pair.value - 4.0).abs() < 1e-12);
//! assert!(pair.value > threshold_general_p0(df.mu()).unwrap());
//! ```

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod dictionaries;
pub mod error;
pub mod linalg;
pub mod probabilistic;
pub mod rng;
pub mod solvers;
pub mod spark;
pub mod thresholds;
pub mod uncertainty;

pub use dictionaries::{ConcatDictionary, Dictionary};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use num_complex::Complex64;
pub use thresholds::CoherenceTriple;
