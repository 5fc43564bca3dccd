use super::CohomologyError;
use crate::exactlin::{HomologyScalar, SparseMatrix};

/// A lattice `ℤ^r` (or `ℚ^r`) with an action of the cyclic group of order
/// `n`, given by the matrix of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicModule<S: HomologyScalar> {
    order: u32,
    action: SparseMatrix<S>,
}

impl<S: HomologyScalar> CyclicModule<S> {
    pub fn new(order: u32, action: SparseMatrix<S>) -> Result<Self, CohomologyError> {
        if action.rows() != action.cols() {
            return Err(CohomologyError::NotSquare {
                rows: action.rows(),
                cols: action.cols(),
            });
        }
        let id = SparseMatrix::identity(action.rows());
        let mut power = id.clone();
        for _ in 0..order {
            power = action.mul(&power)?;
        }
        if order == 0 || power != id {
            return Err(CohomologyError::ActionOrderMismatch { order });
        }
        Ok(Self { order, action })
    }

    /// Trivial action on a rank-`r` lattice.
    pub fn trivial(order: u32, rank: usize) -> Self {
        Self {
            order,
            action: SparseMatrix::identity(rank),
        }
    }

    /// `g` acting by `−1` on a rank-`r` lattice (order 2).
    pub fn sign(rank: usize) -> Self {
        Self {
            order: 2,
            action: SparseMatrix::identity(rank).scale(&(-S::one())),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &SparseMatrix<S> {
        &self.action
    }

    /// `g − 1`
    pub fn difference(&self) -> SparseMatrix<S> {
        let id = SparseMatrix::identity(self.rank()).scale(&(-S::one()));
        self.action.add(&id).expect("square")
    }

    /// `1 + g + ⋯ + g^{n−1}`
    pub fn norm(&self) -> SparseMatrix<S> {
        let id = SparseMatrix::<S>::identity(self.rank());
        let mut power = id.clone();
        let mut sum = SparseMatrix::zeros(self.rank(), self.rank());
        for _ in 0..self.order {
            sum = sum.add(&power).expect("square");
            power = self.action.mul(&power).expect("square");
        }
        sum
    }
}

/// `H^s(C_n; M)` for `s = 0..=s_max` from the 2-periodic resolution:
/// fixed points, then alternately `ker N / im(g−1)` and `ker(g−1) / im N`.
pub fn cyclic_group_cohomology<S: HomologyScalar>(
    m: &CyclicModule<S>,
    s_max: usize,
) -> Result<Vec<S::Homology>, CohomologyError> {
    let r = m.rank();
    let diff = m.difference();
    let norm = m.norm();
    let mut out = Vec::with_capacity(s_max + 1);
    for s in 0..=s_max {
        let h = if s == 0 {
            S::homology_at(&SparseMatrix::zeros(r, 0), &diff)?
        } else if s % 2 == 1 {
            S::homology_at(&diff, &norm)?
        } else {
            S::homology_at(&norm, &diff)?
        };
        out.push(h);
    }
    Ok(out)
}
