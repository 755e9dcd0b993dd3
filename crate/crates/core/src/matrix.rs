//! Dense integer matrices sized for desk-scale graphs (ell up to ~2000).
//! Products accumulate in i128 and are checked back into i64, so every
//! stored entry is exact or the operation panics.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// All-one column vector as an ell x 1 matrix.
    pub fn ones_column(n: usize) -> Self {
        Self {
            rows: n,
            cols: 1,
            data: vec![1; n],
        }
    }

    pub fn all_ones(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: vec![1; n * n],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                let a = a as i128;
                for j in 0..rhs.cols {
                    let acc = out[(i, j)] as i128 + a * rhs[(k, j)] as i128;
                    out[(i, j)] = i64::try_from(acc).expect("matrix product overflow");
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: i64) -> Self {
        let data = self
            .data
            .iter()
            .map(|&x| x.checked_mul(factor).expect("matrix scale overflow"))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product in the standard block layout (a_ij * B).
    pub fn kronecker(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] =
                            a.checked_mul(rhs[(k, l)]).expect("kronecker overflow");
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&Self]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)];
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&Self]) -> Self {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..cols {
                    out[(off + i, j)] = b[(i, j)];
                }
            }
            off += b.rows;
        }
        out
    }

    pub fn column_slice(&self, start: usize, width: usize) -> Self {
        assert!(start + width <= self.cols);
        Self::from_fn(self.rows, width, |i, j| self[(i, start + j)])
    }

    /// Matrix-vector product with i128 accumulation.
    pub fn mul_vec(&self, v: &[i64]) -> Vec<i128> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum()
            })
            .collect()
    }

    /// CSV rows of integers, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination
/// with full pivoting. Intermediate entries are minors of the input, so
/// every division is exact.
pub fn bareiss_rank(m: &IntMatrix) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut prev = BigInt::from(1);
    let dim = rows.min(cols);
    for k in 0..dim {
        // Full pivoting: any nonzero entry in the trailing submatrix works
        // for rank purposes. Prefer the smallest magnitude to slow growth.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !a[i][j].is_zero() {
                    match pivot {
                        Some((pi, pj)) if a[pi][pj].abs() <= a[i][j].abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            return k;
        };
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
        }
        for i in (k + 1)..rows {
            for j in (k + 1)..cols {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    dim
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_all_ones() {
        let j2 = IntMatrix::all_ones(2);
        let j3 = IntMatrix::all_ones(3);
        assert_eq!(j2.kronecker(&j3), IntMatrix::all_ones(6));
    }

    #[test]
    fn kronecker_identity_absorbs() {
        let m = IntMatrix::from_fn(2, 3, |i, j| (3 * i + j) as i64);
        let one = IntMatrix::identity(1);
        assert_eq!(one.kronecker(&m), m);
        assert_eq!(m.kronecker(&one), m);
    }

    #[test]
    fn rank_of_identity_and_singular() {
        assert_eq!(bareiss_rank(&IntMatrix::identity(5)), 5);
        assert_eq!(bareiss_rank(&IntMatrix::all_ones(4)), 1);
        assert_eq!(bareiss_rank(&IntMatrix::zeros(3, 3)), 0);
    }

    #[test]
    fn rank_of_rectangular() {
        // Two independent rows, one dependent.
        let m = IntMatrix::from_fn(3, 4, |i, j| match i {
            0 => j as i64,
            1 => 1,
            _ => j as i64 + 2,
        });
        assert_eq!(bareiss_rank(&m), 2);
    }

    #[test]
    fn rank_detects_shifted_spectrum_of_all_ones() {
        // J_4 has eigenvalues 4 (once) and 0 (three times).
        let j = IntMatrix::all_ones(4);
        let shifted = j.sub(&IntMatrix::identity(4).scale(4));
        assert_eq!(bareiss_rank(&shifted), 3);
        assert_eq!(bareiss_rank(&j), 1);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
            proptest::collection::vec(-4i64..=4, rows * cols).prop_map(move |data| {
                let mut m = IntMatrix::zeros(rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        m[(i, j)] = data[i * cols + j];
                    }
                }
                m
            })
        }

        proptest! {
            // The identity every eigenblock argument leans on:
            // (A (x) B)(C (x) D) = AC (x) BD.
            #[test]
            fn kronecker_mixed_product(
                a in arb_matrix(3, 2),
                b in arb_matrix(2, 3),
                c in arb_matrix(2, 3),
                d in arb_matrix(3, 2),
            ) {
                let left = a.kronecker(&b).mul(&c.kronecker(&d));
                let right = a.mul(&c).kronecker(&b.mul(&d));
                prop_assert_eq!(left, right);
            }

            #[test]
            fn transpose_distributes_over_kronecker(
                a in arb_matrix(2, 3),
                b in arb_matrix(3, 2),
            ) {
                prop_assert_eq!(
                    a.kronecker(&b).transpose(),
                    a.transpose().kronecker(&b.transpose())
                );
            }

            #[test]
            fn rank_is_invariant_under_transpose(a in arb_matrix(4, 3)) {
                prop_assert_eq!(bareiss_rank(&a), bareiss_rank(&a.transpose()));
            }
        }
    }
}
