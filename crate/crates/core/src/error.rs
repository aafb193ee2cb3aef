use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision must be at least 15 decimal digits, got {0}")]
    InvalidPrecision(u32),

    #[error("value {value} is not an integer within tolerance {tolerance} (nearest {nearest}, distance {distance:e})")]
    NotAnInteger {
        value: f64,
        nearest: i64,
        distance: f64,
        tolerance: f64,
    },

    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("not a nonnegative sum of permutation matrices: {0}")]
    NotDecomposable(String),

    #[error("not a permutation matrix")]
    NotAPermutation,

    #[error("{count} labels exceeds the cap of {cap}")]
    SizeCap { count: usize, cap: usize },

    #[error("modular data validation failed:\n{0}")]
    ValidationFailed(String),

    #[error("degenerate braiding: |sum d^2 omega| = {z_abs:e} is numerically zero")]
    DegenerateBraiding { z_abs: f64 },

    #[error("no invariant named {name} at level {level}")]
    IncompatibleLevel { name: String, level: u32 },

    #[error("branching table corrupt: {0}")]
    BranchingTableCorrupt(String),

    #[error("branching data disagrees with the stored invariant: {0}")]
    DataMismatch(String),

    #[error("sandwich fails extended S/T invariance:\n{0}")]
    ExtendedInvarianceFailed(String),

    #[error("enumeration found {found} invariants where the classification expects {expected}")]
    ClassificationMismatch { found: usize, expected: usize },

    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),

    #[error("label {index} does not generate a simple-current group of order {order}")]
    NotSimpleCurrent { index: usize, order: usize },

    #[error("graph has Coxeter number {got}, level {level} needs {expected}")]
    CoxeterMismatch { got: u32, expected: u32, level: u32 },

    #[error("nimrep recursion produced a negative entry at {0}")]
    NegativeEntry(String),

    #[error("graph spectrum disagrees with the invariant diagonal: {0}")]
    SpectrumMismatch(String),

    #[error("trace identity fails at sector {sector}: graph trace {graph}, fusion sum {fusion}, spectral sum {spectral}")]
    IdentityViolated {
        sector: String,
        graph: i64,
        fusion: i64,
        spectral: f64,
    },

    #[error("parent inequality violated: (ZZ* - Z+)[{row},{col}] = {value} < 0")]
    InequalityViolated {
        row: usize,
        col: usize,
        value: i64,
    },

    #[error("{0}")]
    BadInput(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
