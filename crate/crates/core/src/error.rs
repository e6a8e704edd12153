use std::fmt;

use thiserror::Error;

/// Byte and line/column location of a diagnostic inside parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    /// Builds a span for `start..end` of `text`, computing the 1-based line and column of `start`.
    pub fn locate(text: &str, start: usize, end: usize) -> Self {
        let start = start.min(text.len());
        let end = end.clamp(start, text.len());
        let before = &text[..start];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(start, |nl| start - nl - 1) + 1;
        SourceSpan { start, end, line, column }
    }

    /// Shifts a span computed on a substring so that it indexes the enclosing text.
    pub fn offset(self, text: &str, base: usize) -> Self {
        SourceSpan::locate(text, self.start + base, self.end + base)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} (bytes {}..{})", self.line, self.column, self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("denominator vanishes after substitution")]
    DenominatorVanishes,
    #[error("jet order {needed} exceeds the context maximum {max}")]
    OrderOverflow { needed: usize, max: usize },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("generator {index} is not polynomial in the base variables")]
    NonPolynomialGenerator { index: usize },
    #[error("unknown algebra id `{0}`")]
    UnknownAlgebraId(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("unsupported dimension m = {m} (bound {max})")]
    UnsupportedDimension { m: usize, max: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} dependent variable(s), got {got}")]
    WrongArity { expected: String, got: usize },
    #[error("not in normal form: {0}")]
    NotNormalForm(String),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("factor {index} has a zero base")]
    ZeroBase { index: usize },
    #[error("field {index} is not a point symmetry of the equation")]
    NotASymmetry { index: usize },
    #[error("denominator determinant vanishes identically")]
    DegenerateDenominator,
    #[error("not a point vector field: {0}")]
    NotPointField(String),
    #[error("invalid atom `{name}`: {reason}")]
    InvalidAtom { name: String, reason: String },
    #[error("syntax error at {span}: {message}")]
    Syntax { message: String, span: SourceSpan },
    #[error("unknown variable `{name}` at {span}")]
    UnknownVariable { name: String, span: SourceSpan },
}

impl Error {
    /// Span of a parse diagnostic, if the error carries one.
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            Error::Syntax { span, .. } | Error::UnknownVariable { span, .. } => Some(*span),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
