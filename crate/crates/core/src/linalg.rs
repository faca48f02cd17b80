//! Dense matrices over the Gaussian rationals and exact rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::gauss::{GaussInt, GaussRational};

/// Row-major dense matrix. A linear map `V -> W` is stored with `rows = dim W`, `cols = dim V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussRational::one());
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<GaussRational>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Self {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| GaussRational::from_int(v)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &GaussRational) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[GaussRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Matrix product `self · rhs`. Panics on incompatible shapes.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Matrix) -> Matrix {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Matrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `right` next to `self`.
    pub fn hstack(&self, right: &Matrix) -> Matrix {
        assert_eq!(self.rows, right.rows);
        let cols = self.cols + right.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend(self.row(r).iter().cloned());
            data.extend(right.row(r).iter().cloned());
        }
        Matrix {
            rows: self.rows,
            cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }
}

/// Exact rank by Bareiss fraction-free elimination over the Gaussian integers.
///
/// Each row is first scaled by the lcm of its denominators, which does not change the
/// rank. Every intermediate entry is then a minor of the scaled matrix, so the division
/// by the previous pivot is exact.
pub fn exact_rank(m: &Matrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<GaussInt>> = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let scale = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(&q.denom_lcm()));
            row.iter().map(|q| GaussInt::scaled(q, &scale)).collect()
        })
        .filter(|row: &Vec<GaussInt>| row.iter().any(|g| !g.is_zero()))
        .collect();

    let nrows = a.len();
    let ncols = m.cols;
    let mut prev = GaussInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = &pivot_row[col];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..ncols {
                let v = p.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = v.div_exact(&prev);
            }
            row[col] = GaussInt {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
        }
        prev = p.clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(exact_rank(&Matrix::zeros(4, 7)), 0);
        assert_eq!(exact_rank(&Matrix::identity(5)), 5);
        assert_eq!(exact_rank(&Matrix::zeros(0, 3)), 0);
        assert_eq!(exact_rank(&Matrix::zeros(3, 0)), 0);
    }

    #[test]
    fn duplicate_rows() {
        let m = Matrix::from_i64(&[&[1, 2, 3, 4], &[1, 2, 3, 4], &[0, 1, 0, 1], &[2, 0, 1, 1]]);
        assert_eq!(exact_rank(&m), 3);
    }

    #[test]
    fn complex_dependency() {
        // second row is i times the first
        let i = GaussRational::i();
        let r1 = vec![
            GaussRational::from_int(1),
            GaussRational::from_fractions((1, 2), (1, 3)),
        ];
        let r2: Vec<_> = r1.iter().map(|x| x * &i).collect();
        let m = Matrix::from_rows(vec![r1, r2], 2);
        assert_eq!(exact_rank(&m), 1);
    }

    #[test]
    fn skipped_columns_keep_divisions_exact() {
        let m = Matrix::from_i64(&[
            &[0, 2, 4, 1, 3],
            &[0, 3, 6, 5, 2],
            &[0, 5, 10, 6, 5],
            &[0, 7, 1, 2, 9],
        ]);
        assert_eq!(exact_rank(&m), 3);
    }

    #[test]
    fn stacking_and_products() {
        let a = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.vstack(&b).rows(), 4);
        assert_eq!(a.hstack(&b).cols(), 4);
        assert_eq!(a.transpose().get(0, 1), &GaussRational::from_int(3));
    }
}
