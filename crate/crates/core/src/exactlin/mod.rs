//! Exact linear algebra over ℚ and ℤ.
//!
//! Everything here is generic over a scalar type through [`Scalar`], with
//! [`Field`] for elimination over a field and [`EuclideanRing`] for Smith
//! normal form. The crate root fixes the concrete instantiations
//! ([`crate::RatMatrix`], [`crate::IntMatrix`]).

mod elim;
mod group;
mod matrix;
mod snf;

pub use elim::{rank, rank_fraction_free, rank_kernel_image, row_reduce, solve, RankKernelImage};
pub use group::{subquotient, AbelianGroupDescriptor, GroupSubquotient};
pub use matrix::{SparseMatrix, SparseVec};
pub use snf::{determinant, integer_kernel, smith_normal_form, SmithForm};

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};
use thiserror::Error;

/// Exact scalar usable as a matrix entry.
pub trait Scalar: Num + Signed + Clone + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Num + Signed + Clone + Debug + Display + Send + Sync + 'static {}

/// A scalar in which every nonzero element is invertible.
pub trait Field: Scalar {}

impl<T> Field for Ratio<T> where
    T: Integer + Signed + Clone + Debug + Display + Send + Sync + 'static
{
}

/// A scalar ring with division with remainder (ℤ and machine integers).
pub trait EuclideanRing: Scalar + Integer {}

impl<T> EuclideanRing for T where T: Scalar + Integer {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("CompositionNotZero: d_out * d_in has {nonzero} nonzero entries")]
    CompositionNotZero { nonzero: usize },
    #[error("map is not well defined on the quotient: {0}")]
    NotWellDefined(String),
}

/// Homology of `d_in` followed by `d_out`, with the output kind fixed by the
/// scalar: a dimension over ℚ, an invariant-factor descriptor over ℤ.
pub trait HomologyScalar: Scalar + Sized {
    type Homology;
    fn homology_at(
        d_in: &SparseMatrix<Self>,
        d_out: &SparseMatrix<Self>,
    ) -> Result<Self::Homology, LinAlgError>;
}

fn check_composable<S: Scalar>(
    d_in: &SparseMatrix<S>,
    d_out: &SparseMatrix<S>,
) -> Result<(), LinAlgError> {
    if d_in.rows() != d_out.cols() {
        return Err(LinAlgError::ShapeMismatch(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let comp = d_out.mul(d_in)?;
    if !comp.is_zero() {
        return Err(LinAlgError::CompositionNotZero { nonzero: comp.nnz() });
    }
    Ok(())
}

impl HomologyScalar for BigRational {
    type Homology = usize;

    fn homology_at(
        d_in: &SparseMatrix<Self>,
        d_out: &SparseMatrix<Self>,
    ) -> Result<usize, LinAlgError> {
        check_composable(d_in, d_out)?;
        Ok(d_out.cols() - rank(d_out) - rank(d_in))
    }
}

impl HomologyScalar for BigInt {
    type Homology = AbelianGroupDescriptor;

    fn homology_at(
        d_in: &SparseMatrix<Self>,
        d_out: &SparseMatrix<Self>,
    ) -> Result<AbelianGroupDescriptor, LinAlgError> {
        check_composable(d_in, d_out)?;
        // ker(d_out) is saturated in ℤ^n, so the torsion of coker(d_in) lies inside it.
        let out = smith_normal_form(d_out);
        let inn = smith_normal_form(d_in);
        let free_rank = d_out.cols() - out.rank() - inn.rank();
        Ok(AbelianGroupDescriptor::from_orders(
            free_rank,
            inn.invariant_factors.iter().cloned(),
        ))
    }
}

/// ker(d_out) / im(d_in): a dimension over ℚ, a group over ℤ.
pub fn homology_at<S: HomologyScalar>(
    d_in: &SparseMatrix<S>,
    d_out: &SparseMatrix<S>,
) -> Result<S::Homology, LinAlgError> {
    S::homology_at(d_in, d_out)
}
