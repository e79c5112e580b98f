//! Square matrices whose entries are jets, with exact determinants and
//! inverses over the truncated power-series ring.
//!
//! The ring is local: a jet is a unit exactly when its constant term is
//! nonzero. Elimination therefore only ever pivots on units. When no unit is
//! left in the trailing block, the remaining determinant is finished with
//! Berkowitz' division-free algorithm.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::{product_table, ScalarJet};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::trials::{map_indexed, Execution};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetMatrix {
    size: usize,
    vars: usize,
    order: usize,
    entries: Vec<ScalarJet>,
}

impl JetMatrix {
    /// Entries row by row. All entries are truncated to the lowest order present.
    pub fn from_rows(rows: Vec<Vec<ScalarJet>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Shape("jet matrix must be square and non-empty".into()));
        }
        let vars = rows[0][0].vars();
        if let Some(bad) = rows.iter().flatten().find(|e| e.vars() != vars) {
            return Err(Error::VarCount {
                expected: vars,
                found: bad.vars(),
            });
        }
        let order = rows.iter().flatten().map(ScalarJet::order).min().expect("non-empty");
        Ok(Self {
            size,
            vars,
            order,
            entries: rows.into_iter().flatten().map(|e| e.truncate(order)).collect(),
        })
    }

    pub fn identity(size: usize, vars: usize, order: usize) -> Self {
        let entries = (0..size * size)
            .map(|p| {
                if p / size == p % size {
                    ScalarJet::one(vars, order)
                } else {
                    ScalarJet::zero(vars, order)
                }
            })
            .collect();
        Self {
            size,
            vars,
            order,
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarJet {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ScalarJet) {
        assert_eq!(value.vars(), self.vars);
        let value = value.truncate(self.order);
        assert_eq!(value.order(), self.order, "entry order below matrix order");
        self.entries[i * self.size + j] = value;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            size: self.size,
            vars: self.vars,
            order,
            entries: self.entries.iter().map(|e| e.truncate(order)).collect(),
        }
    }

    pub fn constant_term(&self) -> Matrix {
        Matrix::from_fn(self.size, self.size, |i, j| self.get(i, j).constant_term().clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::Shape("jet matrix sizes differ".into()));
        }
        let order = self.order.min(other.order);
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ScalarJet::zero(self.vars, order);
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            size: n,
            vars: self.vars,
            order,
            entries,
        })
    }

    /// Multiplies a jet vector on the right: `(self · v)_i = Σ_j self[i][j] v_j`.
    pub fn apply(&self, v: &[ScalarJet]) -> Result<Vec<ScalarJet>> {
        if v.len() != self.size {
            return Err(Error::Shape("vector length differs from matrix size".into()));
        }
        (0..self.size)
            .map(|i| {
                let mut acc = ScalarJet::zero(self.vars, self.order);
                for (j, vj) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul(vj)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Exact determinant as a jet of the same order.
    ///
    /// With an invertible constant term `A₀` and `X = A₀⁻¹(A − A₀)`, which
    /// vanishes at the origin, `det A = det A₀ · exp(Σ_j (−1)^{j+1} tr(X^j)/j)`
    /// and both series stop at the jet order. Otherwise elimination on unit
    /// pivots is used.
    pub fn det(&self) -> Result<ScalarJet> {
        let a0 = self.constant_term();
        let d0 = a0.det()?;
        if d0.is_zero() {
            return self.det_by_elimination();
        }
        let n = self.size;
        let zero = ScalarJet::zero(self.vars, self.order);
        // X = A₀⁻¹N = Y/d, solved for all coefficient slices of N at once;
        // powers of Y stay integral, so no gcds are taken until the traces.
        let width = zero.coeffs().len();
        let rhs = Matrix::from_fn(n, n * (width - 1), |k, col| {
            let (j, c) = (col % n, 1 + col / n);
            self.get(k, j).coeffs()[c].clone()
        });
        let (solved, d) = a0.solve_integral(&rhs)?;
        let cols = n * (width - 1);
        let y: Vec<IntJet> = (0..n * n)
            .map(|p| {
                let (i, j) = (p / n, p % n);
                let mut coeffs = vec![BigInt::zero(); width];
                for (c, slot) in coeffs.iter_mut().enumerate().skip(1) {
                    *slot = solved[i * cols + (c - 1) * n + j].clone();
                }
                coeffs
            })
            .collect();
        let table = product_table(self.vars, self.order);
        let mut log = zero.clone();
        let mut power: Option<Vec<IntJet>> = None;
        let mut d_pow = BigInt::one();
        for j in 1..=self.order {
            d_pow *= &d;
            let trace = match &power {
                None => (0..n).fold(vec![BigInt::zero(); width], |acc, i| int_add(acc, &y[i * n + i])),
                Some(p) => (0..n)
                    .flat_map(|i| (0..n).map(move |k| (i, k)))
                    .fold(vec![BigInt::zero(); width], |acc, (i, k)| {
                        int_add(acc, &int_mul(&p[i * n + k], &y[k * n + i], &table))
                    }),
            };
            let sign: BigInt = if j % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            let denom = &d_pow * BigInt::from(j);
            let term = trace
                .into_iter()
                .map(|c| Rational::new(c * &sign, denom.clone()))
                .collect();
            log = log.add(&ScalarJet::from_coeffs(self.vars, self.order, term))?;
            if j < self.order {
                power = Some(match power {
                    None => y.clone(),
                    Some(p) => int_mat_mul(&p, &y, n, &table),
                });
            }
        }
        // exp(log) with log vanishing at the origin
        let mut exp = ScalarJet::one(self.vars, self.order);
        let mut term = ScalarJet::one(self.vars, self.order);
        for j in 1..=self.order {
            term = term.mul(&log)?.scale(&Rational::new(1.into(), (j as i64).into()));
            exp = exp.add(&term)?;
        }
        Ok(exp.scale(&d0))
    }

    /// Determinant by elimination on unit pivots, finishing with Berkowitz.
    pub fn det_by_elimination(&self) -> Result<ScalarJet> {
        let n = self.size;
        let mut a: Vec<Vec<ScalarJet>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut acc = ScalarJet::one(self.vars, self.order);
        let mut negate = false;
        for k in 0..n {
            let pivot = (k..n).flat_map(|c| (k..n).map(move |r| (r, c))).find(|&(r, c)| a[r][c].is_unit());
            let Some((pr, pc)) = pivot else {
                let rest: Vec<Vec<ScalarJet>> = a[k..].iter().map(|row| row[k..].to_vec()).collect();
                acc = acc.mul(&berkowitz_det(&rest, self.vars, self.order)?)?;
                break;
            };
            if pr != k {
                a.swap(pr, k);
                negate = !negate;
            }
            if pc != k {
                for row in a.iter_mut() {
                    row.swap(pc, k);
                }
                negate = !negate;
            }
            let inv = a[k][k].inverse()?;
            let (upper, lower) = a.split_at_mut(k + 1);
            let pivot_row = &upper[k];
            for row in lower.iter_mut() {
                if row[k].is_zero() {
                    continue;
                }
                let factor = row[k].mul(&inv)?;
                for (entry, pivot) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *entry = entry.sub(&factor.mul(pivot)?)?;
                }
                row[k] = ScalarJet::zero(self.vars, self.order);
            }
            acc = acc.mul(&a[k][k])?;
        }
        Ok(if negate { acc.neg() } else { acc })
    }

    /// Inverse over the jet ring. Requires an invertible constant term.
    ///
    /// With `A = A₀(I + A₀⁻¹N)` and `N` vanishing at the origin, the series
    /// `Σ (−A₀⁻¹N)^k A₀⁻¹` terminates after `order + 1` terms.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.constant_term();
        let a0_inv = a0
            .inverse()
            .map_err(|_| Error::Singular("constant term of jet matrix".into()))?;
        let lift = |m: &Matrix| -> Self {
            let entries = (0..self.size * self.size)
                .map(|p| ScalarJet::constant(self.vars, self.order, m[(p / self.size, p % self.size)].clone()))
                .collect();
            Self {
                size: self.size,
                vars: self.vars,
                order: self.order,
                entries,
            }
        };
        let a0_inv_jet = lift(&a0_inv);
        let mut nilpotent = self.clone();
        for e in nilpotent.entries.iter_mut() {
            let mut coeffs = e.clone();
            coeffs = coeffs.sub(&ScalarJet::constant(self.vars, self.order, e.constant_term().clone()))?;
            *e = coeffs;
        }
        let step = a0_inv_jet.mul(&nilpotent)?.scale_all(&-crate::rational::one());
        let mut term = a0_inv_jet.clone();
        let mut sum = a0_inv_jet;
        for _ in 0..self.order {
            term = step.mul(&term)?;
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    fn scale_all(&self, factor: &crate::rational::Rational) -> Self {
        Self {
            entries: self.entries.iter().map(|e| e.scale(factor)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::Shape("jet matrix sizes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            size: self.size,
            vars: self.vars,
            order: self.order.min(other.order),
            entries,
        })
    }
}

/// Jet coefficients over the integers, in the graded layout.
type IntJet = Vec<BigInt>;

fn int_add(mut acc: IntJet, b: &IntJet) -> IntJet {
    for (a, b) in acc.iter_mut().zip(b) {
        *a += b;
    }
    acc
}

fn int_mul(a: &IntJet, b: &IntJet, table: &[(u32, u32, u32)]) -> IntJet {
    let mut out = vec![BigInt::zero(); a.len()];
    for &(i, j, k) in table {
        let (x, y) = (&a[i as usize], &b[j as usize]);
        if !x.is_zero() && !y.is_zero() {
            out[k as usize] += x * y;
        }
    }
    out
}

fn int_mat_mul(a: &[IntJet], b: &[IntJet], n: usize, table: &[(u32, u32, u32)]) -> Vec<IntJet> {
    let width = a[0].len();
    let rows = map_indexed(Execution::default(), 0..n, |i| {
        (0..n)
            .map(|j| {
                (0..n).fold(vec![BigInt::zero(); width], |acc, k| {
                    int_add(acc, &int_mul(&a[i * n + k], &b[k * n + j], table))
                })
            })
            .collect::<Vec<_>>()
    });
    rows.into_iter().flatten().collect()
}

/// Division-free determinant (Berkowitz). `O(n⁴)` ring operations.
pub fn berkowitz_det(a: &[Vec<ScalarJet>], vars: usize, order: usize) -> Result<ScalarJet> {
    let n = a.len();
    if n == 0 {
        return Ok(ScalarJet::one(vars, order));
    }
    let zero = || ScalarJet::zero(vars, order);
    // characteristic polynomial of the trailing 1x1 block: λ − a
    let mut poly = vec![ScalarJet::one(vars, order), a[n - 1][n - 1].neg()];
    for size in 2..=n {
        let top = n - size;
        let row = &a[top][top + 1..];
        let trailing: Vec<&[ScalarJet]> = a[top + 1..].iter().map(|r| &r[top + 1..]).collect();
        let col: Vec<ScalarJet> = a[top + 1..].iter().map(|r| r[top].clone()).collect();

        let mut toeplitz = Vec::with_capacity(size + 1);
        toeplitz.push(ScalarJet::one(vars, order));
        toeplitz.push(a[top][top].neg());
        // −R·A1^p·C for p = 0..size-2
        let mut v = col;
        for p in 0..size - 1 {
            let mut dot = zero();
            for (r, x) in row.iter().zip(&v) {
                dot = dot.add(&r.mul(x)?)?;
            }
            toeplitz.push(dot.neg());
            if p + 1 < size - 1 {
                v = trailing
                    .iter()
                    .map(|tr| {
                        let mut acc = zero();
                        for (m, x) in tr.iter().zip(&v) {
                            acc = acc.add(&m.mul(x)?)?;
                        }
                        Ok(acc)
                    })
                    .collect::<Result<_>>()?;
            }
        }
        let mut next = Vec::with_capacity(size + 1);
        for r in 0..=size {
            let mut acc = zero();
            for (c, p) in poly.iter().enumerate() {
                if r >= c {
                    acc = acc.add(&toeplitz[r - c].mul(p)?)?;
                }
            }
            next.push(acc);
        }
        poly = next;
    }
    let last = poly.pop().expect("non-empty");
    Ok(if n.is_multiple_of(2) { last } else { last.neg() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;
    use crate::rational::{frac, int};

    fn rng_jet(seed: &mut u64, vars: usize, order: usize, unit: bool) -> ScalarJet {
        let mut next = || {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((*seed >> 33) % 7) as i64 - 3
        };
        let terms: Vec<_> = crate::multiindex::enumerate_up_to(vars, order)
            .into_iter()
            .map(|a| (a, frac(next(), 1 + next().rem_euclid(3))))
            .collect();
        let mut j = ScalarJet::from_terms(vars, order, &terms).unwrap();
        if !unit {
            j = j.sub(&ScalarJet::constant(vars, order, j.constant_term().clone())).unwrap();
        }
        j
    }

    #[test]
    fn berkowitz_matches_rational_det() {
        let m = Matrix::from_i64(&[&[1, 1, 2], &[1, 0, 2], &[0, 1, 2]]);
        let rows: Vec<Vec<ScalarJet>> = m
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| ScalarJet::constant(1, 0, v)).collect())
            .collect();
        assert_eq!(berkowitz_det(&rows, 1, 0).unwrap().constant_term(), &int(-2));
    }

    #[test]
    fn elimination_and_berkowitz_agree() {
        let mut seed = 11;
        for size in 1..=5 {
            for trial in 0..4 {
                let unit = trial % 2 == 0;
                let rows: Vec<Vec<ScalarJet>> = (0..size)
                    .map(|_| (0..size).map(|_| rng_jet(&mut seed, 2, 3, unit)).collect())
                    .collect();
                let m = JetMatrix::from_rows(rows.clone()).unwrap();
                let oracle = berkowitz_det(&rows, 2, 3).unwrap();
                assert_eq!(m.det().unwrap(), oracle);
                assert_eq!(m.det_by_elimination().unwrap(), oracle);
            }
        }
    }

    #[test]
    fn det_of_two_by_two_jets() {
        let t1 = ScalarJet::variable(2, 2, 0);
        let one = ScalarJet::one(2, 2);
        // [[1 + t1, t1], [t1, 1]] has det 1 + t1 − t1²
        let m = JetMatrix::from_rows(vec![vec![one.add(&t1).unwrap(), t1.clone()], vec![t1.clone(), one.clone()]])
            .unwrap();
        let expected = ScalarJet::from_terms(
            2,
            2,
            &[
                (MultiIndex::new(&[0, 0]), int(1)),
                (MultiIndex::new(&[1, 0]), int(1)),
                (MultiIndex::new(&[2, 0]), int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(m.det().unwrap(), expected);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut seed = 5;
        let rows: Vec<Vec<ScalarJet>> = (0..3)
            .map(|_| (0..3).map(|_| rng_jet(&mut seed, 2, 3, true)).collect())
            .collect();
        let m = JetMatrix::from_rows(rows).unwrap();
        if m.constant_term().det().unwrap().is_zero() {
            return;
        }
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), JetMatrix::identity(3, 2, 3));
        assert_eq!(inv.mul(&m).unwrap(), JetMatrix::identity(3, 2, 3));
    }
}
