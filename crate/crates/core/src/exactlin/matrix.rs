use std::collections::BTreeMap;

use super::{LinAlgError, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<S> = Vec<(usize, S)>;

/// `y += a * x` on sparse vectors, keeping the canonical form.
pub(crate) fn axpy<S: Scalar>(y: &SparseVec<S>, a: &S, x: &SparseVec<S>) -> SparseVec<S> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            let v = a.clone() * x[j].1.clone();
            if !v.is_zero() {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = y[i].1.clone() + a.clone() * x[j].1.clone();
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sparse matrix in canonical triplet form: entries sorted by `(row, col)`,
/// no duplicates, no stored zeros, all indices inside `rows x cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, S)>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, S::one())).collect(),
        }
    }

    /// Builds a matrix from triplets; repeated positions are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinAlgError>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        let mut acc: BTreeMap<(usize, usize), S> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinAlgError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            let slot = acc.entry((r, c)).or_insert_with(S::zero);
            *slot = slot.clone() + v;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_dense(rows: &[Vec<S>]) -> Result<Self, LinAlgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LinAlgError::ShapeMismatch("ragged dense input".into()));
        }
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    }

    /// Builds a matrix from sparse rows; each row must already be canonical.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<SparseVec<S>>) -> Result<Self, LinAlgError> {
        if data.len() != rows {
            return Err(LinAlgError::ShapeMismatch(format!(
                "{} rows supplied for a {}-row matrix",
                data.len(),
                rows
            )));
        }
        Self::from_triplets(
            rows,
            cols,
            data.into_iter()
                .enumerate()
                .flat_map(|(i, r)| r.into_iter().map(move |(j, v)| (i, j, v))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize, S)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        match self
            .entries
            .binary_search_by(|(r, c, _)| (*r, *c).cmp(&(row, col)))
        {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    pub fn row_vectors(&self) -> Vec<SparseVec<S>> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by_key(|e| (e.0, e.1));
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rhs = other.row_vectors();
        let mut acc: Vec<SparseVec<S>> = vec![Vec::new(); self.rows];
        for (r, k, v) in &self.entries {
            acc[*r] = axpy(&acc[*r], v, &rhs[*k]);
        }
        Self::from_rows(self.rows, other.cols, acc)
    }

    pub fn mul_vec(&self, x: &[S]) -> Result<Vec<S>, LinAlgError> {
        if x.len() != self.cols {
            return Err(LinAlgError::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = vec![S::zero(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r] = out[*r].clone() + v.clone() * x[*c].clone();
        }
        Ok(out)
    }

    pub fn scale(&self, a: &S) -> Self {
        if a.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| (*r, *c, v.clone() * a.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::ShapeMismatch("sum of differently shaped matrices".into()));
        }
        Self::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().chain(other.entries.iter()).cloned(),
        )
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.rows != other.rows {
            return Err(LinAlgError::ShapeMismatch("hstack row counts differ".into()));
        }
        let shift = self.cols;
        Self::from_triplets(
            self.rows,
            self.cols + other.cols,
            self.entries
                .iter()
                .cloned()
                .chain(other.entries.iter().map(|(r, c, v)| (*r, c + shift, v.clone()))),
        )
    }

    pub fn column(&self, col: usize) -> Vec<S> {
        let mut out = vec![S::zero(); self.rows];
        for (r, c, v) in &self.entries {
            if *c == col {
                out[*r] = v.clone();
            }
        }
        out
    }

    /// Matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Result<Self, LinAlgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinAlgError::ShapeMismatch("column length mismatch".into()));
        }
        Self::from_triplets(
            rows,
            columns.len(),
            columns.iter().enumerate().flat_map(|(j, col)| {
                col.iter().enumerate().map(move |(i, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseMatrix<T> {
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().map(|(r, c, v)| (*r, *c, f(v))),
        )
        .expect("indices unchanged")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn canonicalizes_duplicates_and_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![(0, 1, z(3)), (0, 1, z(-3)), (1, 0, z(2)), (1, 0, z(1))],
        )
        .unwrap();
        assert_eq!(m.entries(), &[(1, 0, z(3))]);
    }

    #[test]
    fn rejects_out_of_range() {
        let err = SparseMatrix::from_triplets(2, 2, vec![(2, 0, z(1))]).unwrap_err();
        assert!(matches!(err, LinAlgError::IndexOutOfRange { row: 2, .. }));
    }

    #[test]
    fn multiply_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![z(1), z(2)], vec![z(0), z(1)]]).unwrap();
        let b = SparseMatrix::from_dense(&[vec![z(1), z(-2)], vec![z(0), z(1)]]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2));
        assert_eq!(a.transpose().get(1, 0), z(2));
    }
}
