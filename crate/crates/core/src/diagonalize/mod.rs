//! Reduction of invertible and regular matrices by elementary operations.

mod pivot;
mod reduce;
mod regular;
mod rows;

use thiserror::Error;

use crate::exchange::ExchangeError;
use crate::matrix::MatrixError;
use crate::ring::{Element, RingError};

pub use pivot::{prepare_pivot, unit_regular_factorization, PivotCertificate, UnitRegularFactorization};
pub use reduce::{clear_with_idempotent, ge_diagonalize};
pub use regular::{diagonalize_regular, elementary_group, matrix_inner_inverse, RegularDiagonalization, SearchBudget};
pub use rows::{
    fullify_leading_entry, orthogonalize_row, regularize_second_entry, LeadingFull, RowOrthogonalization,
    SecondEntry,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagError {
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not square")]
    NotSquare,
    #[error("expected a single row")]
    NotARow,
    #[error("row needs at least two entries")]
    RowTooShort,
    #[error("row is not right unimodular")]
    NotUnimodular,
    #[error("entry is not idempotent")]
    NotIdempotentEntry,
    #[error("no unit u with u^-1 d idempotent for d = {0:?}")]
    NoUnit(Element),
    #[error("matrix is not von Neumann regular")]
    NotRegularMatrix,
    #[error("internal certificate check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Exchange(#[from] ExchangeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl From<RingError> for DiagError {
    fn from(err: RingError) -> Self {
        DiagError::Matrix(err.into())
    }
}
