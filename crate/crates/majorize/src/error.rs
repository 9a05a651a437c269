/// Errors surfaced by the library. Infeasibility of a transformation is
/// never an error; it is a negative verdict. Errors mean the question could
/// not be answered as posed.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A size cap would be exceeded (tensor length, LP variables, exact cells).
    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),

    /// A solver failed to converge. Reported distinctly from infeasibility.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// An operation requiring pairwise-distinct columns was given equal ones.
    #[error("columns not distinct: {0}")]
    ColumnsNotDistinct(String),

    /// An input violates a documented invariant.
    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// Two formulations of the same criterion disagreed decisively.
    #[error("internal cross-check failed: {0}")]
    CrossCheckFailed(String),
}
