//! Dense matrices over the rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Convenience for tests and samples: integer entries.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
        .expect("ragged rows")
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Exact determinant.
    ///
    /// Each column is scaled to integers by the lcm of its denominators,
    /// the integer matrix is reduced with Bareiss' fraction-free elimination,
    /// and the column scales are divided back out at the end.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut work = vec![BigInt::zero(); n * n];
        for j in 0..n {
            let lcm = (0..n).fold(BigInt::one(), |acc, i| acc.lcm(self[(i, j)].denom()));
            for i in 0..n {
                let v = &self[(i, j)];
                work[i * n + j] = v.numer() * (&lcm / v.denom());
            }
            scale *= lcm;
        }
        let det = bareiss_det(&mut work, n);
        Ok(Rational::new(det, scale))
    }

    /// Exact inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        self.solve(&Self::identity(self.rows))
    }

    /// The solution `X` of `self · X = rhs` for a nonsingular square `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let (y, d) = self.solve_integral(rhs)?;
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            data: y.into_iter().map(|v| Rational::new(v, d.clone())).collect(),
        })
    }

    /// `(Y, d)` with `self · (Y/d) = rhs`, `Y` an integer matrix (row-major).
    ///
    /// Rows of the augmented system are scaled to integers, reduced by
    /// fraction-free (Bareiss) elimination and back-substituted on `d·X`,
    /// which is integral because `d` is the determinant of the scaled system.
    pub fn solve_integral(&self, rhs: &Self) -> Result<(Vec<BigInt>, BigInt)> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::Shape(format!(
                "cannot solve a {}x{} system with a {}x{} right-hand side",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, r) = (self.rows, rhs.cols);
        let w = n + r;
        let mut a = vec![BigInt::zero(); n * w];
        for i in 0..n {
            let row = (0..n).map(|j| &self[(i, j)]).chain((0..r).map(|j| &rhs[(i, j)]));
            let lcm = row.clone().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            for (j, v) in row.enumerate() {
                a[i * w + j] = v.numer() * (&lcm / v.denom());
            }
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * w + k].is_zero() {
                let p = (k + 1..n)
                    .find(|&i| !a[i * w + k].is_zero())
                    .ok_or_else(|| Error::Singular(format!("no pivot in column {k}")))?;
                for j in 0..w {
                    a.swap(k * w + j, p * w + j);
                }
            }
            for i in k + 1..n {
                for j in k + 1..w {
                    let v = &a[i * w + j] * &a[k * w + k] - &a[i * w + k] * &a[k * w + j];
                    a[i * w + j] = v / &prev;
                }
                a[i * w + k] = BigInt::zero();
            }
            prev = a[k * w + k].clone();
        }
        let d = prev;
        let mut y = vec![BigInt::zero(); n * r];
        for c in 0..r {
            for i in (0..n).rev() {
                let mut acc = &d * &a[i * w + n + c];
                for j in i + 1..n {
                    acc -= &a[i * w + j] * &y[j * r + c];
                }
                y[i * r + c] = acc / &a[i * w + i];
            }
        }
        Ok((y, d))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Bareiss elimination on a row-major `n x n` integer matrix, in place.
fn bareiss_det(a: &mut [BigInt], n: usize) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = a[k * n + k].clone();
    }
    sign * prev
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    /// Permutation expansion; independent of Bareiss.
    fn leibniz_det(m: &Matrix) -> Rational {
        fn perms(n: usize) -> Vec<(Vec<usize>, i32)> {
            if n == 0 {
                return vec![(vec![], 1)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let flips = (n - 1 - pos) as i32;
                    out.push((q, if flips % 2 == 0 { s } else { -s }));
                }
            }
            out
        }
        let n = m.rows();
        perms(n)
            .into_iter()
            .map(|(p, s)| {
                let prod = (0..n).fold(Rational::one(), |acc, i| acc * &m[(i, p[i])]);
                if s > 0 { prod } else { -prod }
            })
            .sum()
    }

    #[test]
    fn det_examples() {
        assert_eq!(Matrix::identity(3).det().unwrap(), int(1));
        let m = Matrix::from_i64(&[&[1, 1, 2], &[1, 0, 2], &[0, 1, 2]]);
        assert_eq!(m.det().unwrap(), int(-2));
        let twins = Matrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(twins.det().unwrap(), int(0));
        assert!(Matrix::zeros(2, 3).det().is_err());
    }

    #[test]
    fn det_matches_permutation_expansion() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 3
        };
        for n in 1..=5 {
            for _ in 0..20 {
                let m = Matrix::from_fn(n, n, |_, _| frac(next(), 1 + next().rem_euclid(3)));
                assert_eq!(m.det().unwrap(), leibniz_det(&m));
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        let singular = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(singular.inverse(), Err(Error::Singular(_))));
    }

    #[test]
    fn solve_with_fractions_and_row_swaps() {
        let half = crate::rational::frac(1, 2);
        let third = crate::rational::frac(-1, 3);
        let m = Matrix::from_rows(vec![
            vec![Rational::zero(), half.clone(), Rational::one()],
            vec![third.clone(), Rational::zero(), half.clone()],
            vec![Rational::one(), third, Rational::zero()],
        ])
        .unwrap();
        let b = Matrix::from_rows(vec![
            vec![Rational::one(), half.clone()],
            vec![Rational::zero(), Rational::one()],
            vec![half, Rational::zero()],
        ])
        .unwrap();
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul(&x).unwrap(), b);
        assert_eq!(m.mul(&m.inverse().unwrap()).unwrap(), Matrix::identity(3));
    }
}
