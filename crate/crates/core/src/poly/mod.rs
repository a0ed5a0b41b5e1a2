//! Exact integer polynomial, rational-function, power-series and matrix
//! arithmetic.

mod matrix;
mod polynomial;
mod rational;
pub mod roots;
mod series;

pub use matrix::IntMatrix;
pub use polynomial::IntPolynomial;
pub use rational::RationalFunction;
pub use roots::{least_positive_root, least_root_in_unit_interval, SturmChain, DEFAULT_ROOT_TOL};
pub use series::TruncatedSeries;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("denominator vanishes at t = 0")]
    DenominatorVanishesAtZero,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
}
