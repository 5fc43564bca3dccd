use super::matrix::SparseMatrix;
use super::EuclideanRing;

/// `left * m * right` is diagonal with the invariant factors on the leading
/// diagonal; the inverses are tracked alongside so reconstruction is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm<T> {
    pub invariant_factors: Vec<T>,
    pub left: SparseMatrix<T>,
    pub right: SparseMatrix<T>,
    pub left_inverse: SparseMatrix<T>,
    pub right_inverse: SparseMatrix<T>,
    pub diagonal: SparseMatrix<T>,
}

impl<T: EuclideanRing> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

struct Reducer<T> {
    a: Vec<Vec<T>>,
    l: Vec<Vec<T>>,
    l_inv: Vec<Vec<T>>,
    r: Vec<Vec<T>>,
    r_inv: Vec<Vec<T>>,
}

fn identity<T: EuclideanRing>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

impl<T: EuclideanRing> Reducer<T> {
    fn nrows(&self) -> usize {
        self.a.len()
    }

    fn ncols(&self) -> usize {
        self.r.len()
    }

    // row_i += q * row_k
    fn row_add(&mut self, i: usize, k: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.ncols() {
            let v = self.a[k][j].clone() * q.clone();
            self.a[i][j] = self.a[i][j].clone() + v;
        }
        for j in 0..self.nrows() {
            let v = self.l[k][j].clone() * q.clone();
            self.l[i][j] = self.l[i][j].clone() + v;
            let w = self.l_inv[j][i].clone() * q.clone();
            self.l_inv[j][k] = self.l_inv[j][k].clone() - w;
        }
    }

    // col_j += q * col_k
    fn col_add(&mut self, j: usize, k: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.nrows() {
            let v = self.a[i][k].clone() * q.clone();
            self.a[i][j] = self.a[i][j].clone() + v;
        }
        for i in 0..self.ncols() {
            let v = self.r[i][k].clone() * q.clone();
            self.r[i][j] = self.r[i][j].clone() + v;
            let w = self.r_inv[j][i].clone() * q.clone();
            self.r_inv[k][i] = self.r_inv[k][i].clone() - w;
        }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        self.l.swap(i, k);
        for row in self.l_inv.iter_mut() {
            row.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, k);
        }
        for row in self.r.iter_mut() {
            row.swap(j, k);
        }
        self.r_inv.swap(j, k);
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -x.clone();
        }
        for x in self.l[i].iter_mut() {
            *x = -x.clone();
        }
        for row in self.l_inv.iter_mut() {
            row[i] = -row[i].clone();
        }
    }

    fn min_abs_in<I: Iterator<Item = (usize, usize)>>(&self, cells: I) -> Option<(usize, usize)> {
        cells
            .filter(|&(i, j)| !self.a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| self.a[i][j].abs().cmp(&self.a[k][l].abs()))
    }

    fn move_to(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    fn run(&mut self) -> usize {
        let (m, n) = (self.nrows(), self.ncols());
        let mut t = 0;
        while t < m.min(n) {
            let Some(p) = self.min_abs_in((t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
                break;
            };
            self.move_to(t, p);
            loop {
                let mut residue = false;
                for i in t + 1..m {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].clone() / self.a[t][t].clone();
                        self.row_add(i, t, &-q);
                        residue |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].clone() / self.a[t][t].clone();
                        self.col_add(j, t, &-q);
                        residue |= !self.a[t][j].is_zero();
                    }
                }
                if residue {
                    let cells = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                    let p = self.min_abs_in(cells).expect("pivot row or column nonzero");
                    self.move_to(t, p);
                    continue;
                }
                let pivot = self.a[t][t].clone();
                let bad = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.a[i][j].is_multiple_of(&pivot))
                });
                match bad {
                    Some(i) => self.row_add(t, i, &T::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

pub fn smith_normal_form<T: EuclideanRing>(m: &SparseMatrix<T>) -> SmithForm<T> {
    let mut red = Reducer {
        a: m.to_dense(),
        l: identity(m.rows()),
        l_inv: identity(m.rows()),
        r: identity(m.cols()),
        r_inv: identity(m.cols()),
    };
    if m.rows() == 0 {
        red.a = Vec::new();
    }
    let rank = red.run();
    let invariant_factors: Vec<T> = (0..rank).map(|i| red.a[i][i].clone()).collect();
    let dense = |v: &Vec<Vec<T>>, rows: usize, cols: usize| {
        if rows == 0 {
            SparseMatrix::zeros(0, cols)
        } else {
            SparseMatrix::from_dense(v).expect("square dense matrix")
        }
    };
    let diagonal = SparseMatrix::from_triplets(
        m.rows(),
        m.cols(),
        invariant_factors
            .iter()
            .enumerate()
            .map(|(i, d)| (i, i, d.clone())),
    )
    .expect("diagonal within shape");
    SmithForm {
        invariant_factors,
        left: dense(&red.l, m.rows(), m.rows()),
        right: dense(&red.r, m.cols(), m.cols()),
        left_inverse: dense(&red.l_inv, m.rows(), m.rows()),
        right_inverse: dense(&red.r_inv, m.cols(), m.cols()),
        diagonal,
    }
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn determinant<T: EuclideanRing>(m: &SparseMatrix<T>) -> T {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.to_dense();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return T::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        T::one()
    } else {
        sign * a[n - 1][n - 1].clone()
    }
}

/// Lattice basis (as columns) of `{x ∈ ℤ^n : m x = 0}`.
pub fn integer_kernel<T: EuclideanRing>(m: &SparseMatrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(m);
    (snf.rank()..m.cols()).map(|j| snf.right.column(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn mat(rows: &[&[i64]]) -> SparseMatrix<BigInt> {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn factors(m: &SparseMatrix<BigInt>) -> Vec<i64> {
        smith_normal_form(m)
            .invariant_factors
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn already_diagonal() {
        assert_eq!(factors(&mat(&[&[2]])), vec![2]);
    }

    #[test]
    fn two_by_two_hand_reduction() {
        // gcd of entries is 2, |det| = 8, so factors (2, 4)
        assert_eq!(factors(&mat(&[&[2, 4], &[6, 8]])), vec![2, 4]);
    }

    #[test]
    fn zero_matrix_has_no_factors() {
        assert!(factors(&SparseMatrix::zeros(3, 2)).is_empty());
    }

    #[test]
    fn transforms_are_unimodular_and_reconstruct() {
        let m = mat(&[&[4, 6, 2], &[2, 8, -4], &[0, 3, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.left.mul(&m).unwrap().mul(&s.right).unwrap(), s.diagonal);
        assert_eq!(determinant(&s.left).abs(), BigInt::from(1));
        assert_eq!(determinant(&s.right).abs(), BigInt::from(1));
        let back = s
            .left_inverse
            .mul(&s.diagonal)
            .unwrap()
            .mul(&s.right_inverse)
            .unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn kernel_of_norm_map() {
        let k = integer_kernel(&mat(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] + &k[0][1], BigInt::from(0));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[7, 4]])), BigInt::from(1));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }

    #[test]
    fn works_for_machine_integers() {
        let m = SparseMatrix::<i64>::from_dense(&[vec![2, 4], vec![6, 8]]).unwrap();
        assert_eq!(smith_normal_form(&m).invariant_factors, vec![2, 4]);
    }
}
