use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{axpy, SparseMatrix, SparseVec};
use super::Field;

/// Row echelon form built by inserting rows one at a time; every stored row
/// has leading coefficient 1 at its pivot column.
struct Echelon<F> {
    pivots: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Echelon<F> {
    fn new() -> Self {
        Self {
            pivots: BTreeMap::new(),
        }
    }

    /// Reduces `v` against the stored pivots; stores it if it stays nonzero.
    fn insert(&mut self, mut v: SparseVec<F>) -> bool {
        while let Some((lead, coeff)) = v.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, &(-coeff), p),
                None => {
                    let inv = F::one() / coeff;
                    for (_, x) in v.iter_mut() {
                        *x = x.clone() * inv.clone();
                    }
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }

    fn from_matrix(m: &SparseMatrix<F>) -> Self {
        let mut rows = m.row_vectors();
        // sparse rows first keeps fill-in down
        rows.sort_by_key(|r| r.len());
        let mut e = Self::new();
        for r in rows {
            e.insert(r);
        }
        e
    }

    /// Clears every entry above a pivot, giving reduced row echelon form.
    fn reduce(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for (k, &c) in cols.iter().enumerate() {
            let mut row = self.pivots[&c].clone();
            // pivots with larger columns are already reduced
            for &other in cols[..k].iter().rev() {
                let coeff = row
                    .iter()
                    .find(|(j, _)| *j == other)
                    .map(|(_, x)| x.clone());
                if let Some(a) = coeff {
                    row = axpy(&row, &(-a), &self.pivots[&other]);
                }
            }
            self.pivots.insert(c, row);
        }
    }
}

/// Reduced row echelon form of `m`, keyed by pivot column. Every row has a
/// 1 at its pivot and zeros in all other pivot columns.
pub fn row_reduce<F: Field>(m: &SparseMatrix<F>) -> BTreeMap<usize, SparseVec<F>> {
    let mut e = Echelon::from_matrix(m);
    e.reduce();
    e.pivots
}

/// Rank over a field.
pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    Echelon::from_matrix(m).pivots.len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankKernelImage<F> {
    pub rank: usize,
    /// Exact column vectors spanning the null space.
    pub kernel_basis: Vec<Vec<F>>,
    /// Columns of the input forming a basis of its column space.
    pub image_basis: Vec<Vec<F>>,
}

pub fn rank_kernel_image<F: Field>(m: &SparseMatrix<F>) -> RankKernelImage<F> {
    let mut e = Echelon::from_matrix(m);
    e.reduce();
    let pivot_cols: Vec<usize> = e.pivots.keys().copied().collect();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !e.pivots.contains_key(c)).collect();
    let kernel_basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); m.cols()];
            v[f] = F::one();
            for (&pc, row) in &e.pivots {
                if let Some((_, a)) = row.iter().find(|(j, _)| *j == f) {
                    v[pc] = -a.clone();
                }
            }
            v
        })
        .collect();
    let image_basis = pivot_cols.iter().map(|&c| m.column(c)).collect();
    RankKernelImage {
        rank: pivot_cols.len(),
        kernel_basis,
        image_basis,
    }
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
pub fn solve<F: Field>(m: &SparseMatrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let n = m.cols();
    let mut rows = m.row_vectors();
    for (row, bi) in rows.iter_mut().zip(b) {
        if !bi.is_zero() {
            row.push((n, bi.clone()));
        }
    }
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    if e.pivots.contains_key(&n) {
        return None;
    }
    e.reduce();
    let mut x = vec![F::zero(); n];
    for (&pc, row) in &e.pivots {
        if let Some((_, v)) = row.iter().find(|(j, _)| *j == n) {
            x[pc] = v.clone();
        }
    }
    Some(x)
}

/// Rank by fraction-free (Bareiss) elimination after clearing row
/// denominators. Independent of the field route used by [`rank`].
pub fn rank_fraction_free(m: &SparseMatrix<BigRational>) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();
    let (nr, nc) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nr {
            for j in c + 1..nc {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::SparseMatrix;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn mat(rows: &[&[i64]]) -> SparseMatrix<BigRational> {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn identity_has_full_rank_and_trivial_kernel() {
        let r = rank_kernel_image(&mat(&[&[1, 0], &[0, 1]]));
        assert_eq!(r.rank, 2);
        assert!(r.kernel_basis.is_empty());
        assert_eq!(r.image_basis, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let r = rank_kernel_image(&SparseMatrix::<BigRational>::zeros(2, 2));
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_basis, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert!(r.image_basis.is_empty());
    }

    #[test]
    fn rank_one_kernel_direction() {
        // hand reduction: row2 - 2 row1 = 0, x + 2y = 0
        let r = rank_kernel_image(&mat(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel_basis, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn empty_matrix() {
        let r = rank_kernel_image(&SparseMatrix::<BigRational>::zeros(0, 3));
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_basis.len(), 3);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[1, 2], &[2, 4]]);
        let x = solve(&m, &[q(3), q(6)]).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![q(3), q(6)]);
        assert!(solve(&m, &[q(3), q(5)]).is_none());
    }

    #[test]
    fn bareiss_agrees_on_small_case() {
        let m = mat(&[&[2, 4, 1], &[1, 2, 0], &[3, 6, 1]]);
        assert_eq!(rank_fraction_free(&m), 2);
        assert_eq!(rank(&m), 2);
    }
}
