//! Complexes computing the E₂ groups: the Koszul complex for Hochschild
//! cohomology of even polynomial algebras, the two-term cotangent complex of
//! a complete intersection, and the brute-force cotriple complex that serves
//! as an independent oracle for both.

mod cotangent;
mod cotriple;
mod koszul;
mod regularity;

pub use cotangent::{cotangent_complex_ci, CotangentData};
pub use cotriple::{cotriple_moore_complex, CotripleData, CotripleOracle, OracleComplex};
pub use koszul::{koszul_hochschild_complex, KoszulData};
pub use regularity::{regularity_check, Regularity, RegularityClass};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::exactlin::LinAlgError;
use crate::graded::GradedError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("NotPolynomial: {0}")]
    NotPolynomial(String),
    #[error("NotRegular: {0}")]
    NotRegular(String),
    #[error("OracleTooLarge: {what} has {size} basis elements (budget {budget})")]
    OracleTooLarge {
        what: String,
        size: usize,
        budget: usize,
    },
    #[error("coefficient module is over a different algebra")]
    CoefficientMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}
