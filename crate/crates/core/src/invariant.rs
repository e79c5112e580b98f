//! Determinant-based relative invariants of surfaces.
//!
//! For a surface `u: ℝ^m → ℝ^n`, a depth `k` and degrees `j₁ < … < j_r`, the
//! stacked matrix has one row per multi-index `α ∈ I_m` with `|α| ≤ k`
//! (optionally skipping `α = 0`) and one column per `β ∈ I_n` with
//! `|β| ∈ {j₁,…,j_r}`. Its entry is `(1/α!)·∂^α(u^β)`, i.e. the coefficient
//! of `t^α` in `u^β`. When the matrix is square its determinant `f` obeys
//!
//! ```text
//! f((u∘s)·h) = det(h)^l · det(g)^K · f(u),    g[i][j] = ∂s_j/∂t_i at 0,
//! ```
//!
//! with `l = Σ C(n+jᵢ−1, n)` and `K = C(m+k, m+1)`. Both surfaces are read
//! in their own coordinates, which puts `det(g)` with a positive exponent.
//! Rows are ordered by block then by [`enumerate`](crate::multiindex::enumerate);
//! the determinant's sign depends on that layout.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jet::{ReparamJet, ScalarJet, SurfaceJet};
use crate::jet_linalg::JetMatrix;
use crate::matrix::Matrix;
use crate::multiindex::{count, enumerate, MultiIndex};
use crate::rational::{binomial, pow, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepresentationChoice {
    /// Highest derivative order.
    pub k: usize,
    /// Strictly increasing positive degrees of the monomial blocks.
    pub js: Vec<usize>,
    /// Whether the `α = 0` row block (monomial values) is present.
    pub include_zero_row: bool,
}

impl RepresentationChoice {
    pub fn new(k: usize, js: &[usize], include_zero_row: bool) -> Result<Self> {
        let choice = Self {
            k,
            js: js.to_vec(),
            include_zero_row,
        };
        choice.validate()?;
        Ok(choice)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidChoice("k must be positive".into()));
        }
        if self.js.is_empty() {
            return Err(Error::InvalidChoice("js must not be empty".into()));
        }
        if self.js[0] == 0 || self.js.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidChoice(format!(
                "js must be strictly increasing positive integers, got {:?}",
                self.js
            )));
        }
        Ok(())
    }

    fn first_row_degree(&self) -> usize {
        usize::from(!self.include_zero_row)
    }

    pub fn row_count(&self, m: usize) -> usize {
        (self.first_row_degree()..=self.k).map(|i| count(m, i)).sum()
    }

    pub fn col_count(&self, n: usize) -> usize {
        self.js.iter().map(|&j| count(n, j)).sum()
    }

    /// Row multi-indices in matrix order.
    pub fn row_indices(&self, m: usize) -> Vec<MultiIndex> {
        (self.first_row_degree()..=self.k)
            .flat_map(|i| enumerate(m, i).to_vec())
            .collect()
    }

    /// Column multi-indices in matrix order.
    pub fn col_indices(&self, n: usize) -> Vec<MultiIndex> {
        self.js.iter().flat_map(|&j| enumerate(n, j).to_vec()).collect()
    }
}

impl fmt::Display for RepresentationChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let js: Vec<String> = self.js.iter().map(ToString::to_string).collect();
        write!(f, "k={},js={},zero-row={}", self.k, js.join(":"), self.include_zero_row)
    }
}

/// Exponents of a relative invariant: `det(h)^l` and `det(g)^K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weights {
    pub l: u64,
    pub k_exp: u64,
}

impl Weights {
    /// Closed-form exponents, without any squareness check.
    pub fn closed_form(m: usize, n: usize, k: usize, js: &[usize]) -> Self {
        let l = js
            .iter()
            .map(|&j| binomial((n + j - 1) as u64, n as u64))
            .sum();
        let k_exp = binomial((m + k) as u64, (m + 1) as u64);
        Self { l, k_exp }
    }
}

/// Whether the stacked matrix for `choice` is square.
pub fn check_square(m: usize, n: usize, choice: &RepresentationChoice) -> bool {
    choice.row_count(m) == choice.col_count(n)
}

pub fn weights(m: usize, n: usize, choice: &RepresentationChoice) -> Result<Weights> {
    choice.validate()?;
    ensure_square(m, n, choice)?;
    Ok(Weights::closed_form(m, n, choice.k, &choice.js))
}

fn ensure_square(m: usize, n: usize, choice: &RepresentationChoice) -> Result<()> {
    let (rows, cols) = (choice.row_count(m), choice.col_count(n));
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(())
}

fn check_surface(u: &SurfaceJet, choice: &RepresentationChoice, extra: usize) -> Result<()> {
    choice.validate()?;
    ensure_square(u.vars(), u.dim(), choice)?;
    if u.order() < choice.k + extra {
        return Err(Error::InsufficientOrder {
            required: choice.k + extra,
            available: u.order(),
        });
    }
    Ok(())
}

/// The square stacked matrix of `u` at the origin.
pub fn build_stacked_matrix(u: &SurfaceJet, choice: &RepresentationChoice) -> Result<Matrix> {
    check_surface(u, choice, 0)?;
    let u = u.truncate(choice.k);
    let rows = choice.row_indices(u.vars());
    let cols = choice.col_indices(u.dim());
    let monomials = u.monomials(&cols)?;
    Ok(Matrix::from_fn(rows.len(), cols.len(), |i, j| monomials[j].coeff(&rows[i])))
}

/// `f` for `choice` evaluated at the origin of `u`.
pub fn relative_invariant(u: &SurfaceJet, choice: &RepresentationChoice) -> Result<Rational> {
    build_stacked_matrix(u, choice)?.det()
}

/// The stacked matrix with jet entries: entry `(α, β)` is the jet of
/// `t ↦ (1/α!)·∂^α(u^β)(t)` to order `extra`.
pub fn build_stacked_jet_matrix(u: &SurfaceJet, choice: &RepresentationChoice, extra: usize) -> Result<JetMatrix> {
    check_surface(u, choice, extra)?;
    let u = u.truncate(choice.k + extra);
    let rows = choice.row_indices(u.vars());
    let cols = choice.col_indices(u.dim());
    let monomials = u.monomials(&cols)?;
    let entries = rows
        .iter()
        .map(|alpha| {
            let scale = Rational::new(1.into(), alpha.factorial());
            monomials
                .iter()
                .map(|p| Ok(p.derive(alpha)?.truncate(extra).scale(&scale)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    JetMatrix::from_rows(entries)
}

/// The jet, to order `extra`, of `t ↦ f(u recentred at t)`.
pub fn invariant_as_jet(u: &SurfaceJet, choice: &RepresentationChoice, extra: usize) -> Result<ScalarJet> {
    build_stacked_jet_matrix(u, choice, extra)?.det()
}

/// `(u ∘ s)·h`.
pub fn transform_surface(u: &SurfaceJet, s: &ReparamJet, h: &Matrix) -> Result<SurfaceJet> {
    u.compose(s)?.apply_group(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivarianceReport {
    pub choice: RepresentationChoice,
    pub weights: Weights,
    pub invariant_u: Rational,
    pub det_g: Rational,
    pub det_h: Rational,
    /// `f(v)` for `v = (u∘s)·h`.
    pub lhs: Rational,
    /// `det(h)^l · det(g)^K · f(u)`.
    pub rhs: Rational,
    pub pass: bool,
}

/// Checks `f((u∘s)·h) = det(h)^l · det(g)^K · f(u)` exactly.
pub fn equivariance_check(
    u: &SurfaceJet,
    s: &ReparamJet,
    h: &Matrix,
    choice: &RepresentationChoice,
) -> Result<EquivarianceReport> {
    let w = weights(u.vars(), u.dim(), choice)?;
    let det_h = h.det()?;
    if det_h.is_zero() {
        return Err(Error::Singular("group element".into()));
    }
    let det_g = s.jacobian_at_origin().det()?;
    if det_g.is_zero() {
        return Err(Error::Singular("reparameterization Jacobian".into()));
    }
    let v = transform_surface(u, s, h)?;
    let invariant_u = relative_invariant(u, choice)?;
    let lhs = relative_invariant(&v, choice)?;
    let rhs = pow(&det_h, w.l as i64) * pow(&det_g, w.k_exp as i64) * &invariant_u;
    Ok(EquivarianceReport {
        choice: choice.clone(),
        weights: w,
        invariant_u,
        det_g,
        det_h,
        pass: lhs == rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mi(p: &[u32]) -> MultiIndex {
        MultiIndex::new(p)
    }

    fn paraboloid(order: usize) -> SurfaceJet {
        let j = |terms: &[(&[u32], i64)]| {
            let t: Vec<_> = terms.iter().map(|(a, c)| (mi(a), int(*c))).collect();
            ScalarJet::truncated_from_terms(2, order, &t)
        };
        SurfaceJet::new(vec![
            j(&[(&[0, 0], 1), (&[1, 0], 1)]),
            j(&[(&[0, 0], 1), (&[0, 1], 1)]),
            j(&[(&[0, 0], 2), (&[1, 0], 2), (&[0, 1], 2), (&[2, 0], 1), (&[0, 2], 1)]),
        ])
        .unwrap()
    }

    fn f1() -> RepresentationChoice {
        RepresentationChoice::new(1, &[1], true).unwrap()
    }

    #[test]
    fn squareness() {
        assert!(check_square(2, 3, &RepresentationChoice::new(2, &[2], true).unwrap()));
        assert!(check_square(2, 3, &RepresentationChoice::new(3, &[1, 2], false).unwrap()));
        assert!(!check_square(2, 4, &RepresentationChoice::new(1, &[1], true).unwrap()));
    }

    #[test]
    fn weight_examples() {
        let w = weights(2, 3, &RepresentationChoice::new(2, &[2], true).unwrap()).unwrap();
        assert_eq!((w.l, w.k_exp), (4, 4));
        let w = weights(2, 4, &RepresentationChoice::new(9, &[3, 4], true).unwrap()).unwrap();
        assert_eq!((w.l, w.k_exp), (50, 165));
        let w = weights(2, 3, &f1()).unwrap();
        assert_eq!((w.l, w.k_exp), (1, 1));
        assert!(matches!(
            weights(2, 4, &RepresentationChoice::new(1, &[1], true).unwrap()),
            Err(Error::NotSquare { rows: 3, cols: 4 })
        ));
    }

    #[test]
    fn invalid_choices() {
        assert!(RepresentationChoice::new(0, &[1], true).is_err());
        assert!(RepresentationChoice::new(2, &[2, 2], true).is_err());
        assert!(RepresentationChoice::new(2, &[0], true).is_err());
        assert!(RepresentationChoice::new(2, &[], true).is_err());
    }

    #[test]
    fn paraboloid_first_invariant() {
        let m = build_stacked_matrix(&paraboloid(1), &f1()).unwrap();
        assert_eq!(m, Matrix::from_i64(&[&[1, 1, 2], &[1, 0, 2], &[0, 1, 2]]));
        assert_eq!(relative_invariant(&paraboloid(3), &f1()).unwrap(), int(-2));
    }

    #[test]
    fn planar_and_affine_surfaces_degenerate() {
        let plane = SurfaceJet::new(vec![
            ScalarJet::variable(2, 2, 0),
            ScalarJet::variable(2, 2, 1),
            ScalarJet::zero(2, 2),
        ])
        .unwrap();
        let m = build_stacked_matrix(&plane, &f1()).unwrap();
        assert!((0..3).all(|i| m[(i, 2)].is_zero()));
        assert_eq!(relative_invariant(&plane, &f1()).unwrap(), int(0));

        // affine parameterization of a plane through the origin: u₃ = u₁ + u₂
        let affine = SurfaceJet::new(vec![
            ScalarJet::from_terms(2, 2, &[(mi(&[0, 0]), int(1)), (mi(&[1, 0]), int(1))]).unwrap(),
            ScalarJet::from_terms(2, 2, &[(mi(&[0, 0]), int(1)), (mi(&[0, 1]), int(1))]).unwrap(),
            ScalarJet::from_terms(2, 2, &[(mi(&[0, 0]), int(2)), (mi(&[1, 0]), int(1)), (mi(&[0, 1]), int(1))])
                .unwrap(),
        ])
        .unwrap();
        let f2 = RepresentationChoice::new(2, &[2], true).unwrap();
        assert_eq!(relative_invariant(&affine, &f2).unwrap(), int(0));

        // a plane missing the origin carries no quadratic relation, so f₂ survives
        let offset = SurfaceJet::new(
            paraboloid(1)
                .components()
                .iter()
                .map(|c| ScalarJet::truncated_from_terms(2, 2, &c.terms()))
                .collect(),
        )
        .unwrap();
        assert_ne!(relative_invariant(&offset, &f2).unwrap(), int(0));
    }

    #[test]
    fn insufficient_order_reported() {
        let f2 = RepresentationChoice::new(2, &[2], true).unwrap();
        assert!(matches!(
            relative_invariant(&paraboloid(1), &f2),
            Err(Error::InsufficientOrder { required: 2, available: 1 })
        ));
    }

    #[test]
    fn invariant_jet_along_paraboloid() {
        let jet = invariant_as_jet(&paraboloid(3), &f1(), 1).unwrap();
        let expected = ScalarJet::from_terms(
            2,
            1,
            &[(mi(&[0, 0]), int(-2)), (mi(&[1, 0]), int(-2)), (mi(&[0, 1]), int(-2))],
        )
        .unwrap();
        assert_eq!(jet, expected);
        // to order 2 it is −((1+t₁)² + (1+t₂)²) exactly
        let jet2 = invariant_as_jet(&paraboloid(3), &f1(), 2).unwrap();
        assert_eq!(jet2, paraboloid(2).component(2).neg());
    }

    #[test]
    fn invariant_jet_scales_with_homothety() {
        let u = paraboloid(3);
        let v = u.apply_group(&Matrix::diagonal(&[int(2), int(2), int(2)])).unwrap();
        let a = invariant_as_jet(&u, &f1(), 2).unwrap();
        let b = invariant_as_jet(&v, &f1(), 2).unwrap();
        assert_eq!(b, a.scale(&int(8)));
    }

    #[test]
    fn harness_example() {
        let u = paraboloid(3);
        let s = ReparamJet::new(
            SurfaceJet::new(vec![
                ScalarJet::from_terms(2, 3, &[(mi(&[1, 0]), int(1)), (mi(&[0, 1]), int(1))]).unwrap(),
                ScalarJet::variable(2, 3, 1),
            ])
            .unwrap(),
        )
        .unwrap();
        let h = Matrix::diagonal(&[int(1), int(1), int(2)]);
        let report = equivariance_check(&u, &s, &h, &f1()).unwrap();
        assert_eq!(report.lhs, int(-4));
        assert_eq!(report.rhs, int(-4));
        assert!(report.pass);

        let id = equivariance_check(&u, &ReparamJet::identity(2, 3), &Matrix::identity(3), &f1()).unwrap();
        assert!(id.pass);
        assert_eq!(id.lhs, id.invariant_u);
    }

    #[test]
    fn singular_group_element_rejected() {
        let h = Matrix::diagonal(&[int(1), int(0), int(2)]);
        assert!(matches!(
            equivariance_check(&paraboloid(3), &ReparamJet::identity(2, 3), &h, &f1()),
            Err(Error::Singular(_))
        ));
    }
}
