use thiserror::Error;

/// Errors raised by the solver, its linear-algebra kernels and the problem generators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is rank deficient: |R[{index},{index}]| = {value:e} below tolerance {tol:e}")]
    RankDeficient { index: usize, value: f64, tol: f64 },

    #[error("triangular system is singular at diagonal entry {index}")]
    Singular { index: usize },

    #[error("equality constraints violate full row rank: {0}")]
    Preconditioning(Box<Error>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("iterates became non-finite at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("reference solver failed: {0}")]
    OracleFailure(String),

    #[error("malformed problem data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
