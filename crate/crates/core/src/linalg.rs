//! Dense exact matrices and fraction-free elimination.
//!
//! Rows are first scaled to integer rows by their denominators' lcm, then
//! eliminated with Bareiss' one-step division, so every intermediate value is
//! an integer minor of the scaled matrix. Pivots are searched in increasing
//! row order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::divisor::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        let data = rows
            .iter()
            .flatten()
            .map(|&x| Rational::from_integer(BigInt::from(x)))
            .collect();
        Self { rows: r, cols: c, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Matrix {
        let rows = (0..k).map(|i| self.row(i)[..k].to_vec()).collect();
        Matrix::new(rows).expect("square block")
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T M w`.
    pub fn bilinear(&self, v: &[Rational], w: &[Rational]) -> Rational {
        v.iter().zip(self.mul_vec(w)).map(|(a, b)| a * b).sum()
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let (mut ints, scale) = integer_rows(self);
        let det = bareiss_determinant(&mut ints, self.rows);
        Rational::new(det, scale)
    }

    /// Leading principal minors of orders `1..=n`.
    pub fn leading_principal_minors(&self) -> Vec<Rational> {
        assert!(self.is_square());
        let n = self.rows;
        let (mut a, _) = integer_rows(self);
        let scales: Vec<BigInt> = (0..n).map(|i| row_scale(self.row(i))).collect();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        let mut prefix = BigInt::one();
        for k in 0..n {
            prefix *= &scales[k];
            let pivot = a[k][k].clone();
            if pivot.is_zero() {
                // Bareiss without pivoting breaks down; finish block by block.
                minors.extend((k + 1..=n).map(|m| self.leading(m).determinant()));
                return minors;
            }
            minors.push(Rational::new(pivot.clone(), prefix.clone()));
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&pivot * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = pivot;
        }
        minors
    }

    /// True iff every leading principal minor of order `k` has sign `(-1)^k`.
    pub fn is_negative_definite(&self) -> bool {
        self.is_symmetric()
            && self.leading_principal_minors().iter().enumerate().all(|(k, m)| {
                if k % 2 == 0 {
                    m.is_negative()
                } else {
                    m.is_positive()
                }
            })
    }

    /// Solves `M x = rhs` for square non-singular `M`.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        assert!(self.is_square());
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut aug: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = self.row(i).to_vec();
                row.push(rhs[i].clone());
                let s = row_scale(&row);
                row.iter().map(|x| (x * Rational::from_integer(s.clone())).to_integer()).collect()
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&i| !aug[i][k].is_zero()).ok_or(Error::SingularSystem)?;
            aug.swap(k, p);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = (&aug[k][k] * &aug[i][j] - &aug[i][k] * &aug[k][j]) / &prev;
                    aug[i][j] = v;
                }
                aug[i][k] = BigInt::zero();
            }
            prev = aug[k][k].clone();
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(aug[i][n].clone());
            for j in i + 1..n {
                acc -= Rational::from_integer(aug[i][j].clone()) * &x[j];
            }
            x[i] = acc / Rational::from_integer(aug[i][i].clone());
        }
        Ok(x)
    }

    pub fn rank(&self) -> usize {
        let (mut a, _) = integer_rows(self);
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(rank, p);
            for i in rank + 1..m {
                for j in col + 1..n {
                    let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }
}

fn row_scale(row: &[Rational]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Integer rows of `m` and the product of the per-row scale factors.
fn integer_rows(m: &Matrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let rows = (0..m.rows)
        .map(|i| {
            let s = row_scale(m.row(i));
            total *= &s;
            let sq = Rational::from_integer(s);
            m.row(i).iter().map(|x| (x * &sq).to_integer()).collect()
        })
        .collect();
    (rows, total)
}

fn bareiss_determinant(a: &mut [Vec<BigInt>], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
