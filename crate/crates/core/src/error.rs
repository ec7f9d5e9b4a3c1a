use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field degree {0} (expected 1..=16)")]
    FieldDegree(u32),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("size cap exceeded: {what} is {actual}, limit {limit}")]
    Cap {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("iteration cap exceeded in {what}: {diagnostics}")]
    IterationCap {
        what: &'static str,
        diagnostics: String,
    },
    #[error("structural assertion failed: {0}")]
    Structural(String),
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("subgroup is not central")]
    NotCentral,
    #[error("kernel acts nontrivially on the module")]
    KernelActsNontrivially,
    #[error("no isomorphism found: {0}")]
    NoIsomorphism(String),
    #[error("malformed data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn cap(what: &'static str, actual: usize, limit: usize) -> Self {
        Error::Cap {
            what,
            actual,
            limit,
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::Cap { .. } | Error::IterationCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `Err(Cap)` when `actual > limit`.
pub fn check_cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::cap(what, actual, limit))
    } else {
        Ok(())
    }
}
