//! Invariant frames and the invariant derivations `δ = M⁻¹∂`.
//!
//! Given relative invariants `f₁, …, f_{m+1}` with `det(g)` exponents
//! `K₁, …, K_{m+1}`, column `i` of the frame is
//!
//! ```text
//! M_i = ∂f₁/(K₁f₁) − ∂f_{i+1}/(K_{i+1}f_{i+1})
//! ```
//!
//! The `∂ log det g` terms of the two logarithmic gradients cancel (and
//! `det h` is constant), so for `v = (u∘s)·h` the frames satisfy
//! `M(v)(t) = g(t)·M(u)(s(t))`, where `g[i][j] = ∂s_j/∂t_i`. Every column is a gradient, which makes the
//! derivations `δ_i = Σ_j (M⁻¹)[i][j] ∂_j` commute.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariant::{invariant_as_jet, transform_surface, weights, RepresentationChoice, Weights};
use crate::jet::{ReparamJet, ScalarJet, SurfaceJet};
use crate::jet_linalg::JetMatrix;
use crate::matrix::Matrix;
use crate::multiindex::{count_up_to, enumerate, multinomial, MultiIndex};
use crate::rational::{factorial, Rational};
use crate::symalg::{odot, odot_pow, IndexSpace, SymMatrix};

/// How frame columns are formed from the invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrameKind {
    /// Differences of normalized logarithmic gradients.
    #[default]
    LogGradient,
    /// Gradients of the absolute invariants `f_{i+1} / f₁^{K_{i+1}/K₁}`.
    AbsoluteGradient,
}

#[derive(Debug, Clone)]
pub struct Frame {
    matrix: JetMatrix,
    inverse: JetMatrix,
    choices: Vec<RepresentationChoice>,
    weights: Vec<Weights>,
    valid_order: usize,
}

impl Frame {
    /// Wraps an arbitrary jet matrix as a frame.
    pub fn from_matrix(matrix: JetMatrix) -> Result<Self> {
        let inverse = matrix.inverse().map_err(|_| {
            Error::SingularFrame(format!(
                "constant term {:?} is not invertible",
                matrix.constant_term()
            ))
        })?;
        let valid_order = matrix.order();
        Ok(Self {
            matrix,
            inverse,
            choices: Vec::new(),
            weights: Vec::new(),
            valid_order,
        })
    }

    pub fn identity(vars: usize, order: usize) -> Self {
        Self::from_matrix(JetMatrix::identity(vars, vars, order)).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &JetMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &JetMatrix {
        &self.inverse
    }

    pub fn constant_term(&self) -> Matrix {
        self.matrix.constant_term()
    }

    pub fn vars(&self) -> usize {
        self.matrix.size()
    }

    pub fn valid_order(&self) -> usize {
        self.valid_order
    }

    pub fn choices(&self) -> &[RepresentationChoice] {
        &self.choices
    }

    pub fn weights(&self) -> &[Weights] {
        &self.weights
    }

    /// A copy with one entry replaced; used for negative controls.
    pub fn with_entry(&self, row: usize, col: usize, value: ScalarJet) -> Result<Self> {
        let mut matrix = self.matrix.clone();
        matrix.set(row, col, value);
        let mut out = Self::from_matrix(matrix)?;
        out.choices = self.choices.clone();
        out.weights = self.weights.clone();
        Ok(out)
    }

    /// `∂_k M[i][j] = ∂_i M[k][j]` for all indices, as jets.
    pub fn is_closed(&self) -> Result<bool> {
        let m = self.vars();
        if self.valid_order == 0 {
            return Ok(true);
        }
        for j in 0..m {
            for i in 0..m {
                for k in 0..m {
                    let a = self.matrix.get(i, j).partial(k)?;
                    let b = self.matrix.get(k, j).partial(i)?;
                    if a != b {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Builds the frame along `u` with entries valid to order `order`.
pub fn build_frame(u: &SurfaceJet, choices: &[RepresentationChoice], order: usize) -> Result<Frame> {
    build_frame_with(u, choices, order, FrameKind::LogGradient)
}

pub fn build_frame_with(
    u: &SurfaceJet,
    choices: &[RepresentationChoice],
    order: usize,
    kind: FrameKind,
) -> Result<Frame> {
    let m = u.vars();
    if choices.len() != m + 1 {
        return Err(Error::InvalidChoice(format!(
            "a frame over {m} parameters needs {} invariants, got {}",
            m + 1,
            choices.len()
        )));
    }
    let ws: Vec<Weights> = choices
        .iter()
        .map(|c| weights(m, u.dim(), c))
        .collect::<Result<_>>()?;
    let invariants: Vec<ScalarJet> = choices
        .iter()
        .map(|c| invariant_as_jet(u, c, order + 1))
        .collect::<Result<_>>()?;
    for (c, f) in choices.iter().zip(&invariants) {
        if f.constant_term().is_zero() {
            return Err(Error::VanishingInvariant(c.to_string()));
        }
    }

    let columns: Vec<Vec<ScalarJet>> = match kind {
        FrameKind::LogGradient => {
            let log_grad = |f: &ScalarJet, k_exp: u64| -> Result<Vec<ScalarJet>> {
                let scale = Rational::new(1.into(), BigInt::from(k_exp));
                let inv = f.inverse()?;
                (0..m)
                    .map(|j| Ok(f.partial(j)?.mul(&inv)?.scale(&scale)))
                    .collect()
            };
            let base = log_grad(&invariants[0], ws[0].k_exp)?;
            (1..=m)
                .map(|i| {
                    let other = log_grad(&invariants[i], ws[i].k_exp)?;
                    base.iter().zip(&other).map(|(a, b)| a.sub(b)).collect()
                })
                .collect::<Result<_>>()?
        }
        FrameKind::AbsoluteGradient => (1..=m)
            .map(|i| {
                let phi = absolute_invariant(&invariants[0], &ws[0], &invariants[i], &ws[i], &choices[i])?;
                (0..m).map(|j| phi.partial(j)).collect()
            })
            .collect::<Result<_>>()?,
    };
    // columns[i][j] holds M[j][i]
    let rows = (0..m)
        .map(|j| (0..m).map(|i| columns[i][j].clone()).collect())
        .collect();
    let matrix = JetMatrix::from_rows(rows)?;
    let mut frame = Frame::from_matrix(matrix).map_err(|e| match e {
        Error::SingularFrame(msg) => Error::SingularFrame(format!(
            "{msg}; invariants {}",
            choices.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ")
        )),
        other => other,
    })?;
    frame.choices = choices.to_vec();
    frame.weights = ws;
    frame.valid_order = order;
    Ok(frame)
}

/// `f / base^e` with `e = K_f / K_base`; both exponents must cancel exactly.
fn absolute_invariant(
    base: &ScalarJet,
    base_w: &Weights,
    f: &ScalarJet,
    f_w: &Weights,
    choice: &RepresentationChoice,
) -> Result<ScalarJet> {
    if !f_w.k_exp.is_multiple_of(base_w.k_exp) || f_w.l * base_w.k_exp != base_w.l * f_w.k_exp {
        return Err(Error::InvalidChoice(format!(
            "{choice} has weights (l={}, K={}) that are not an integer multiple of the base weights (l={}, K={})",
            f_w.l, f_w.k_exp, base_w.l, base_w.k_exp
        )));
    }
    let e = (f_w.k_exp / base_w.k_exp) as u32;
    f.div(&base.pow(e))
}

/// Absolute invariant `f_a / f_b^{K_a/K_b}` evaluated along `u` to order `order`.
pub fn absolute_invariant_jet(
    u: &SurfaceJet,
    numerator: &RepresentationChoice,
    base: &RepresentationChoice,
    order: usize,
) -> Result<ScalarJet> {
    let (m, n) = (u.vars(), u.dim());
    let fa = invariant_as_jet(u, numerator, order)?;
    let fb = invariant_as_jet(u, base, order)?;
    if fb.constant_term().is_zero() {
        return Err(Error::VanishingInvariant(base.to_string()));
    }
    absolute_invariant(&fb, &weights(m, n, base)?, &fa, &weights(m, n, numerator)?, numerator)
}

/// `δ_i φ = Σ_j (M⁻¹)[i][j] ∂_j φ`.
pub fn delta_apply(frame: &Frame, phi: &ScalarJet, i: usize) -> Result<ScalarJet> {
    let m = frame.vars();
    if phi.vars() != m {
        return Err(Error::VarCount {
            expected: m,
            found: phi.vars(),
        });
    }
    if phi.order() == 0 {
        return Err(Error::InsufficientOrder {
            required: 1,
            available: 0,
        });
    }
    let mut acc = ScalarJet::zero(m, frame.valid_order.min(phi.order() - 1));
    for j in 0..m {
        acc = acc.add(&frame.inverse.get(i, j).mul(&phi.partial(j)?)?)?;
    }
    Ok(acc)
}

/// `(δ_iδ_j − δ_jδ_i)φ` to the order the inputs support.
pub fn commutator_residual(frame: &Frame, phi: &ScalarJet, i: usize, j: usize) -> Result<ScalarJet> {
    let ij = delta_apply(frame, &delta_apply(frame, phi, j)?, i)?;
    let ji = delta_apply(frame, &delta_apply(frame, phi, i)?, j)?;
    ij.sub(&ji)
}

/// Residuals for every pair `i < j`.
pub fn commutator_residuals(frame: &Frame, phi: &ScalarJet) -> Result<Vec<((usize, usize), ScalarJet)>> {
    let m = frame.vars();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push(((i, j), commutator_residual(frame, phi, i, j)?));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameEquivarianceReport {
    pub g: Matrix,
    pub frame_u: Matrix,
    pub frame_v: Matrix,
    /// `g · M(u)`.
    pub expected: Matrix,
    pub pass: bool,
}

/// Checks `M(v)(0) = g·M(u)(0)` for `v = (u∘s)·h`.
pub fn frame_equivariance_check(
    u: &SurfaceJet,
    s: &ReparamJet,
    h: &Matrix,
    choices: &[RepresentationChoice],
    kind: FrameKind,
) -> Result<FrameEquivarianceReport> {
    if h.det()?.is_zero() {
        return Err(Error::Singular("group element".into()));
    }
    let v = transform_surface(u, s, h)?;
    let frame_u = build_frame_with(u, choices, 0, kind)?.constant_term();
    let frame_v = build_frame_with(&v, choices, 0, kind)?.constant_term();
    let g = s.jacobian_at_origin();
    let expected = g.mul(&frame_u)?;
    Ok(FrameEquivarianceReport {
        pass: frame_v == expected,
        g,
        frame_u,
        frame_v,
        expected,
    })
}

/// Lower block-triangular matrix `B` with `∂^{⊙i}/i! = Σ_{j≤i} B[i][j]·δ^{⊙j}/j!`,
/// where `∂ = g·δ` and `δ` differentiates in the target coordinates of a
/// reparameterization. Blocks are evaluated at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBlockMatrix {
    vars: usize,
    depth: usize,
    blocks: Vec<Vec<SymMatrix>>,
}

impl ChainBlockMatrix {
    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Block `B[i][j]` in `M(i, j)`; zero above the diagonal.
    pub fn block(&self, i: usize, j: usize) -> SymMatrix {
        if j > i {
            return SymMatrix::zero(IndexSpace::new(self.vars, i), IndexSpace::new(self.vars, j));
        }
        self.blocks[i][j].clone()
    }

    /// Blocks `B[i][0..=i]`.
    pub fn row(&self, i: usize) -> &[SymMatrix] {
        &self.blocks[i]
    }

    /// The full matrix with rows and columns of degree `first..=depth`.
    pub fn assemble(&self, include_zero_row: bool) -> Matrix {
        let first = usize::from(!include_zero_row);
        let offsets: Vec<usize> = (first..=self.depth + 1)
            .scan(0, |acc, d| {
                let start = *acc;
                *acc += crate::multiindex::count(self.vars, d);
                Some(start)
            })
            .collect();
        let size = offsets[offsets.len() - 1];
        let mut out = Matrix::zeros(size, size);
        for i in first..=self.depth {
            for j in first..=i {
                let b = self.blocks[i][j].matrix();
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        out[(offsets[i - first] + r, offsets[j - first] + c)] = b[(r, c)].clone();
                    }
                }
            }
        }
        out
    }
}

/// Chain-rule blocks up to depth `k`, computed by the order-by-order recursion
///
/// ```text
/// B[α][γ] = (1/α_r)·( ∂_r B[α−e_r][γ] + Σ_q g[r][q]·γ_q·B[α−e_r][γ−e_q] )
/// ```
///
/// over jets in `t`, then evaluated at the origin.
pub fn chain_blocks(s: &ReparamJet, k: usize) -> Result<ChainBlockMatrix> {
    if s.order() < k {
        return Err(Error::InsufficientOrder {
            required: k,
            available: s.order(),
        });
    }
    let m = s.vars();
    let d = s.order();
    let g = s.jacobian_jets()?;
    // rows[i][rank α][graded position γ], |γ| ≤ i
    let mut rows: Vec<Vec<Vec<ScalarJet>>> = vec![vec![vec![ScalarJet::one(m, d)]]];
    for i in 1..=k {
        let order = d - i;
        let width = count_up_to(m, i);
        let gammas = crate::multiindex::enumerate_up_to(m, i);
        let mut level = Vec::new();
        for alpha in enumerate(m, i).iter() {
            let r = (0..m).find(|&r| alpha.get(r) > 0).expect("nonzero");
            let prev_alpha = alpha.decrement(r).expect("positive");
            let prev = &rows[i - 1][prev_alpha.rank_in_degree()];
            let inv_ar = Rational::new(1.into(), BigInt::from(alpha.get(r)));
            let mut row = Vec::with_capacity(width);
            for gamma in &gammas {
                let mut acc = ScalarJet::zero(m, order);
                if (gamma.degree() as usize) < i {
                    acc = acc.add(&prev[gamma.graded_position()].partial(r)?)?;
                }
                for (q, gq) in g[r].iter().enumerate() {
                    if let Some(lower) = gamma.decrement(q) {
                        let term = gq.mul(&prev[lower.graded_position()])?;
                        acc = acc.add(&term.scale(&Rational::from_integer(gamma.get(q).into())))?;
                    }
                }
                row.push(acc.truncate(order).scale(&inv_ar));
            }
            level.push(row);
        }
        rows.push(level);
    }
    let blocks = (0..=k)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    SymMatrix::from_fn(IndexSpace::new(m, i), IndexSpace::new(m, j), |alpha, gamma| {
                        rows[i][alpha.rank_in_degree()][gamma.graded_position()]
                            .constant_term()
                            .clone()
                    })
                })
                .collect()
        })
        .collect();
    Ok(ChainBlockMatrix {
        vars: m,
        depth: k,
        blocks,
    })
}

/// Scaling of the base factors `∂^{⊙i}⊙g` in the closed-form expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Divide by `(i+1)!`; agrees with the recursion.
    Shifted,
    /// Divide by `i!`.
    Literal,
}

/// `∂^{⊙i} ⊙ g` at the origin, in `M(i+1, 1)`: operator entries
/// `(i!/β!)·∂^β` of `∂^{⊙i}` act on the Jacobian entries `g[q][j](t)`.
fn derivative_odot_jacobian(g: &[Vec<ScalarJet>], i: usize) -> Result<SymMatrix> {
    let m = g.len();
    let rows = enumerate(m, i + 1);
    let mut entries = Matrix::zeros(rows.len(), m);
    for (ri, alpha) in rows.iter().enumerate() {
        for j in 0..m {
            let mut acc = Rational::zero();
            for (q, gq) in g.iter().enumerate() {
                if let Some(beta) = alpha.decrement(q) {
                    let value = gq[j].derive(&beta)?.constant_term().clone();
                    acc += value * Rational::from_integer(multinomial(&beta));
                }
            }
            entries[(ri, j)] = acc;
        }
    }
    SymMatrix::from_matrix(IndexSpace::new(m, i + 1), IndexSpace::new(m, 1), entries)
}

/// All `(α₀,…,α_{p-1})` with `Σα_i = parts` and `Σ(i+1)α_i = power`.
fn weighted_compositions(power: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, power: usize, parts: usize, acc: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
        if pos == len {
            if power == 0 && parts == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let weight = pos + 1;
        for a in 0..=parts.min(power / weight) {
            acc.push(a);
            go(pos + 1, power - a * weight, parts - a, acc, len, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, power, parts, &mut Vec::new(), power, &mut out);
    out
}

/// Row `power` of the chain-block matrix from the closed-form sum
///
/// ```text
/// B[p][k] = Σ_{|α|=k, ‖α‖=p} ⊙_i (G_i^{⊙α_i} / α_i!),   G_i = (∂^{⊙i}⊙g)/(i+1)!
/// ```
///
/// Entry `k` of the result is `B[power][k]`; entry 0 is the zero block.
pub fn closed_form_chain_row(s: &ReparamJet, power: usize, normalization: Normalization) -> Result<Vec<SymMatrix>> {
    if power == 0 {
        return Err(Error::InvalidChoice("power must be positive".into()));
    }
    if s.order() < power {
        return Err(Error::InsufficientOrder {
            required: power,
            available: s.order(),
        });
    }
    let m = s.vars();
    let g = s.jacobian_jets()?;
    let bases: Vec<SymMatrix> = (0..power)
        .map(|i| {
            let raw = derivative_odot_jacobian(&g, i)?;
            let norm = match normalization {
                Normalization::Shifted => factorial(i as u32 + 1),
                Normalization::Literal => factorial(i as u32),
            };
            Ok(raw.scale(&Rational::new(1.into(), norm)))
        })
        .collect::<Result<_>>()?;

    let mut row = vec![SymMatrix::zero(IndexSpace::new(m, power), IndexSpace::new(m, 0))];
    for k in 1..=power {
        let mut total = SymMatrix::zero(IndexSpace::new(m, power), IndexSpace::new(m, k));
        for alpha in weighted_compositions(power, k) {
            let mut term = SymMatrix::scalar(Rational::one());
            for (i, &a) in alpha.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let factor = odot_pow(&bases[i], a as u32)?.scale(&Rational::new(1.into(), factorial(a as u32)));
                term = odot(&term, &factor)?;
            }
            total = total.add(&SymMatrix::from_matrix(total.row_space(), total.col_space(), term.into_matrix())?)?;
        }
        row.push(total);
    }
    Ok(row)
}

/// `[t^α] s^γ`: the value of `B[|α|][|γ|]` at `(α, γ)` obtained by applying
/// the operator identity to the monomial `y^γ`.
pub fn monomial_coefficient(s: &ReparamJet, alpha: &MultiIndex, gamma: &MultiIndex) -> Result<Rational> {
    Ok(s.as_surface().monomial(gamma)?.coeff(alpha))
}
