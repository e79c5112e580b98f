//! The symmetric product `⊙` on matrices indexed by multi-indices.
//!
//! A [`SymMatrix`] in `M(p', p)` has rows indexed by the degree-`p'`
//! multi-indices in `n'` variables and columns by the degree-`p` indices in
//! `n` variables, both laid out in [`enumerate`] order. Row vectors live in
//! `M(0, p)`, column vectors in `M(p', 0)`.
//!
//! For `A ∈ M(p', p)` and `B ∈ M(q', q)` the product `C = A ⊙ B ∈ M(p'+q', p+q)`
//! has entries
//!
//! ```text
//! C[α'][α] = Σ_{β'≪α', |β'|=p'} Σ_{β≪α, |β|=p} (α choose β) · A[β'][β] · B[α'-β'][α-β]
//! ```
//!
//! The binomial weight is taken over the column index only.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multiindex::{count, dominated_of_degree, enumerate, mi_binomial, MultiIndex};
use crate::rational::{factorial, Rational};

/// A row or column index space: multi-indices of a fixed degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSpace {
    pub vars: usize,
    pub degree: usize,
}

impl IndexSpace {
    pub fn new(vars: usize, degree: usize) -> Self {
        assert!(vars >= 1, "index space needs at least one variable");
        Self { vars, degree }
    }

    pub fn len(&self) -> usize {
        count(self.vars, self.degree)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Spaces agree when their variable counts match. At degree zero the
    /// variable count is immaterial (there is one index either way).
    fn combine(self, other: IndexSpace) -> Result<IndexSpace> {
        let vars = if self.vars == other.vars || other.degree == 0 {
            self.vars
        } else if self.degree == 0 {
            other.vars
        } else {
            return Err(Error::VarCount {
                expected: self.vars,
                found: other.vars,
            });
        };
        Ok(IndexSpace::new(vars, self.degree + other.degree))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SymMatrix {
    row_space: IndexSpace,
    col_space: IndexSpace,
    entries: Matrix,
}

impl SymMatrix {
    pub fn zero(row_space: IndexSpace, col_space: IndexSpace) -> Self {
        Self {
            row_space,
            col_space,
            entries: Matrix::zeros(row_space.len(), col_space.len()),
        }
    }

    pub fn from_matrix(row_space: IndexSpace, col_space: IndexSpace, entries: Matrix) -> Result<Self> {
        if entries.rows() != row_space.len() || entries.cols() != col_space.len() {
            return Err(Error::Shape(format!(
                "{}x{} entries for a {}x{} index layout",
                entries.rows(),
                entries.cols(),
                row_space.len(),
                col_space.len()
            )));
        }
        Ok(Self {
            row_space,
            col_space,
            entries,
        })
    }

    /// Builds entries from a function of the row and column multi-indices.
    pub fn from_fn(
        row_space: IndexSpace,
        col_space: IndexSpace,
        mut f: impl FnMut(&MultiIndex, &MultiIndex) -> Rational,
    ) -> Self {
        let rows = enumerate(row_space.vars, row_space.degree);
        let cols = enumerate(col_space.vars, col_space.degree);
        let entries = Matrix::from_fn(rows.len(), cols.len(), |i, j| f(&rows[i], &cols[j]));
        Self {
            row_space,
            col_space,
            entries,
        }
    }

    /// A square matrix viewed in `M(1,1)` with `n` variables on each side.
    pub fn linear(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::Shape("linear map must be square and non-empty".into()));
        }
        let space = IndexSpace::new(matrix.rows(), 1);
        Self::from_matrix(space, space, matrix)
    }

    /// A row vector in `M(0,1)` over `values.len()` column variables.
    pub fn row_vector(values: &[Rational]) -> Self {
        let entries = Matrix::from_rows(vec![values.to_vec()]).expect("single row");
        Self {
            row_space: IndexSpace::new(1, 0),
            col_space: IndexSpace::new(values.len(), 1),
            entries,
        }
    }

    /// A column vector in `M(1,0)` over `values.len()` row variables.
    pub fn column_vector(values: &[Rational]) -> Self {
        let entries =
            Matrix::from_rows(values.iter().map(|v| vec![v.clone()]).collect()).expect("single column");
        Self {
            row_space: IndexSpace::new(values.len(), 1),
            col_space: IndexSpace::new(1, 0),
            entries,
        }
    }

    /// The scalar `value` as an element of `M(0,0)`.
    pub fn scalar(value: Rational) -> Self {
        let space = IndexSpace::new(1, 0);
        Self {
            row_space: space,
            col_space: space,
            entries: Matrix::from_rows(vec![vec![value]]).expect("1x1"),
        }
    }

    pub fn row_space(&self) -> IndexSpace {
        self.row_space
    }

    pub fn col_space(&self) -> IndexSpace {
        self.col_space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// Entry at row index `row` and column index `col`.
    pub fn get(&self, row: &MultiIndex, col: &MultiIndex) -> &Rational {
        &self.entries[(row.rank_in_degree(), col.rank_in_degree())]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        Ok(Self {
            entries: self.entries.add(&other.entries)?,
            ..*self
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        Ok(Self {
            entries: self.entries.sub(&other.entries)?,
            ..*self
        })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            entries: self.entries.scale(factor),
            ..*self
        }
    }

    /// Ordinary matrix product; the column layout of `self` must match the
    /// row layout of `other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.col_space.len() != other.row_space.len() {
            return Err(Error::Shape(format!(
                "column space {:?} does not match row space {:?}",
                self.col_space, other.row_space
            )));
        }
        Ok(Self {
            row_space: self.row_space,
            col_space: other.col_space,
            entries: self.entries.mul(&other.entries)?,
        })
    }

    fn same_layout(&self, other: &Self) -> Result<()> {
        if self.row_space != other.row_space || self.col_space != other.col_space {
            return Err(Error::Shape(format!(
                "layouts differ: {:?}x{:?} vs {:?}x{:?}",
                self.row_space, self.col_space, other.row_space, other.col_space
            )));
        }
        Ok(())
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Result<Rational> {
        self.entries.det()
    }
}

impl std::fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SymMatrix(M_{{{},{}}}({},{}) {:?})",
            self.row_space.vars, self.col_space.vars, self.row_space.degree, self.col_space.degree, self.entries
        )
    }
}

/// The symmetric product `a ⊙ b`.
pub fn odot(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    let row_space = a.row_space.combine(b.row_space)?;
    let col_space = a.col_space.combine(b.col_space)?;
    let rows = enumerate(row_space.vars, row_space.degree);
    let cols = enumerate(col_space.vars, col_space.degree);
    let (pa_row, pa_col) = (a.row_space.degree as u32, a.col_space.degree as u32);

    // index helpers: for degree-0 spaces the zero index of the other side's
    // variable count maps to rank 0, which is all we need.
    let col_splits: Vec<Vec<(usize, usize, BigInt)>> = cols
        .iter()
        .map(|alpha| {
            dominated_of_degree(alpha, pa_col)
                .into_iter()
                .map(|beta| {
                    let rest = alpha.checked_sub(&beta).expect("dominated");
                    let weight = mi_binomial(alpha, &beta).expect("dominated");
                    (beta.rank_in_degree(), rest.rank_in_degree(), BigInt::from(weight))
                })
                .collect()
        })
        .collect();
    let row_splits: Vec<Vec<(usize, usize)>> = rows
        .iter()
        .map(|alpha| {
            dominated_of_degree(alpha, pa_row)
                .into_iter()
                .map(|beta| {
                    let rest = alpha.checked_sub(&beta).expect("dominated");
                    (beta.rank_in_degree(), rest.rank_in_degree())
                })
                .collect()
        })
        .collect();

    let am = &a.entries;
    let bm = &b.entries;
    let entries = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        let mut acc = Rational::zero();
        for &(ar, br) in &row_splits[i] {
            for (ac, bc, w) in &col_splits[j] {
                let x = &am[(ar, *ac)];
                if x.is_zero() {
                    continue;
                }
                let y = &bm[(br, *bc)];
                if y.is_zero() {
                    continue;
                }
                acc += x * y * w;
            }
        }
        acc
    });
    Ok(SymMatrix {
        row_space,
        col_space,
        entries,
    })
}

/// `a^{⊙ power}` for `power ≥ 1`.
pub fn odot_pow(a: &SymMatrix, power: u32) -> Result<SymMatrix> {
    if power == 0 {
        return Err(Error::Shape("odot power must be positive".into()));
    }
    let mut acc = a.clone();
    for _ in 1..power {
        acc = odot(&acc, a)?;
    }
    Ok(acc)
}

/// `h^{⊙k}/k!` for `h ∈ M(1,1)`. Its determinant is `det(h)^C(n+k-1, n)`.
pub fn scaled_sym_power(h: &SymMatrix, k: u32) -> Result<SymMatrix> {
    if h.row_space.degree != 1 || h.col_space.degree != 1 || h.row_space.vars != h.col_space.vars {
        return Err(Error::Shape("scaled_sym_power expects a square matrix in M(1,1)".into()));
    }
    let power = odot_pow(h, k)?;
    Ok(power.scale(&Rational::new(1.into(), factorial(k))))
}

/// Exact determinant of a square symmetric-product matrix.
pub fn sym_det(a: &SymMatrix) -> Result<Rational> {
    a.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, int, pow};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn row_square() {
        let r = SymMatrix::row_vector(&ints(&[1, 2]));
        let sq = odot(&r, &r).unwrap();
        assert_eq!(sq.matrix(), &Matrix::from_i64(&[&[2, 4, 8]]));
        assert_eq!(sq.col_space(), IndexSpace::new(2, 2));
    }

    #[test]
    fn zero_annihilates() {
        let a = SymMatrix::from_fn(IndexSpace::new(2, 1), IndexSpace::new(2, 1), |r, c| {
            int(i64::from(r.get(0) + 2 * c.get(1)) + 1)
        });
        let z = SymMatrix::zero(IndexSpace::new(2, 2), IndexSpace::new(2, 0));
        let prod = odot(&a, &z).unwrap();
        assert!(prod.is_zero());
        assert_eq!(prod.row_space(), IndexSpace::new(2, 3));
        assert_eq!(prod.col_space(), IndexSpace::new(2, 1));
    }

    #[test]
    fn degree_zero_scalar_is_identity() {
        let col = SymMatrix::column_vector(&ints(&[3, -5]));
        let one = SymMatrix::scalar(int(1));
        let prod = odot(&col, &one).unwrap();
        assert_eq!(prod, col);
    }

    #[test]
    fn powers() {
        let r = SymMatrix::row_vector(&ints(&[1, 2]));
        assert_eq!(odot_pow(&r, 1).unwrap(), r);

        let (c1, c2) = (int(3), int(-2));
        let c = SymMatrix::column_vector(&[c1.clone(), c2.clone()]);
        let sq = odot_pow(&c, 2).unwrap();
        let expected = [&c1 * &c1, int(2) * &c1 * &c2, &c2 * &c2];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(&sq.matrix()[(i, 0)], e);
        }
    }

    #[test]
    fn scaled_powers_of_diagonal() {
        let h = SymMatrix::linear(Matrix::diagonal(&ints(&[2, 3]))).unwrap();
        let sq = scaled_sym_power(&h, 2).unwrap();
        assert_eq!(sq.matrix(), &Matrix::diagonal(&ints(&[4, 6, 9])));
        assert_eq!(sym_det(&sq).unwrap(), int(216));
        assert_eq!(int(216), pow(&int(6), binomial(3, 2) as i64));

        let id = SymMatrix::linear(Matrix::identity(2)).unwrap();
        let cube = scaled_sym_power(&id, 3).unwrap();
        assert_eq!(cube.matrix(), &Matrix::identity(4));
    }

    #[test]
    fn det_power_identity_fixed_case() {
        let h = SymMatrix::linear(Matrix::from_i64(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 2]])).unwrap();
        let d = h.det().unwrap();
        let sq = scaled_sym_power(&h, 2).unwrap();
        assert_eq!(sym_det(&sq).unwrap(), pow(&d, 4));
    }

    #[test]
    fn mismatched_vars_rejected() {
        let a = SymMatrix::zero(IndexSpace::new(2, 1), IndexSpace::new(2, 1));
        let b = SymMatrix::zero(IndexSpace::new(3, 1), IndexSpace::new(2, 1));
        assert!(matches!(odot(&a, &b), Err(Error::VarCount { .. })));
    }
}
