use alloc::string::String;

/// Errors produced by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("coherence undefined for N<2")]
    CoherenceUndefined,
    #[error("Welch bound applies to overcomplete case only (d={d}, N={n})")]
    NotOvercomplete { d: usize, n: usize },
    #[error("order parts so that muA ≤ muB (muA={mu_a}, muB={mu_b})")]
    PartsOutOfOrder { mu_a: f64, mu_b: f64 },
    #[error("prime dimension required (got {0})")]
    NotPrime(usize),
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("column {column} has norm {norm}, expected 1")]
    NotUnitNorm { column: usize, norm: f64 },
    #[error("columns do not span the {dim}-dimensional space (rank {rank})")]
    RankDeficient { rank: usize, dim: usize },
    #[error("trivial case excluded: na = nb = 0")]
    TrivialCase,
    #[error("inconsistent representation: ‖Ap − Bq‖ = {residual}")]
    InconsistentRepresentation { residual: f64 },
    #[error("combinatorial guard exceeded: {count} combinations > {limit}")]
    GuardExceeded { count: u128, limit: u128 },
    #[error("no sparse representation within maxK = {0}")]
    NoSparseRepresentation(usize),
    #[error("ERC undefined: dependent support")]
    DependentSupport,
    #[error("Neumann condition fails: μ·nb + μb·(na−1) = {value} ≥ 1")]
    NeumannConditionFails { value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal error: {0}")]
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
