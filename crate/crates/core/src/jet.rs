//! Truncated multivariate power series centred at the origin.
//!
//! A [`ScalarJet`] of order `d` in `m` variables stores the coefficients of
//! every monomial `t^α` with `|α| ≤ d`, laid out in graded multi-index order.
//! Every operation reports its result at the highest order its inputs
//! justify and never beyond.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::multiindex::{count_up_to, enumerate_up_to, MultiIndex};
use crate::rational::{format_rational, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct ScalarJet {
    vars: usize,
    order: usize,
    coeffs: Vec<Rational>,
}

type Layout = Arc<[MultiIndex]>;
type ProductTable = Arc<[(u32, u32, u32)]>;

fn layout(vars: usize, order: usize) -> Layout {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Layout>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(l) = cache.read().unwrap().get(&(vars, order)) {
        return Arc::clone(l);
    }
    let l: Layout = enumerate_up_to(vars, order).into();
    cache.write().unwrap().insert((vars, order), Arc::clone(&l));
    l
}

/// `(i, j, k)` with `idx_i + idx_j = idx_k` and `|idx_k| ≤ order`.
/// Triples `(i, j, k)`: coefficient `i` times coefficient `j` lands in `k`.
pub(crate) fn product_table(vars: usize, order: usize) -> ProductTable {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), ProductTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().unwrap().get(&(vars, order)) {
        return Arc::clone(t);
    }
    let idx = layout(vars, order);
    let mut table = Vec::new();
    for (i, a) in idx.iter().enumerate() {
        for (j, b) in idx.iter().enumerate() {
            if (a.degree() + b.degree()) as usize <= order {
                table.push((i as u32, j as u32, a.add(b).graded_position() as u32));
            }
        }
    }
    let t: ProductTable = table.into();
    cache.write().unwrap().insert((vars, order), Arc::clone(&t));
    t
}

impl ScalarJet {
    pub fn zero(vars: usize, order: usize) -> Self {
        assert!(vars >= 1, "jets need at least one variable");
        Self {
            vars,
            order,
            coeffs: vec![Rational::zero(); count_up_to(vars, order)],
        }
    }

    pub fn constant(vars: usize, order: usize, value: Rational) -> Self {
        let mut jet = Self::zero(vars, order);
        jet.coeffs[0] = value;
        jet
    }

    pub fn one(vars: usize, order: usize) -> Self {
        Self::constant(vars, order, Rational::one())
    }

    /// The coordinate function `t_i` (0-based).
    pub fn variable(vars: usize, order: usize, i: usize) -> Self {
        let mut jet = Self::zero(vars, order);
        if order >= 1 {
            jet.coeffs[MultiIndex::unit(vars, i).graded_position()] = Rational::one();
        }
        jet
    }

    /// Builds a jet from `(exponent, coefficient)` terms. Repeated exponents
    /// accumulate. Terms above `order` are rejected.
    pub fn from_terms(vars: usize, order: usize, terms: &[(MultiIndex, Rational)]) -> Result<Self> {
        let mut jet = Self::zero(vars, order);
        for (alpha, c) in terms {
            if alpha.vars() != vars {
                return Err(Error::VarCount {
                    expected: vars,
                    found: alpha.vars(),
                });
            }
            if alpha.degree() as usize > order {
                return Err(Error::InsufficientOrder {
                    required: alpha.degree() as usize,
                    available: order,
                });
            }
            jet.coeffs[alpha.graded_position()] += c;
        }
        Ok(jet)
    }

    /// Like [`ScalarJet::from_terms`] but silently drops terms above `order`.
    pub fn truncated_from_terms(vars: usize, order: usize, terms: &[(MultiIndex, Rational)]) -> Self {
        let kept: Vec<_> = terms
            .iter()
            .filter(|(a, _)| a.degree() as usize <= order)
            .cloned()
            .collect();
        Self::from_terms(vars, order, &kept).expect("filtered terms fit")
    }

    /// A jet from its coefficients in graded order.
    pub(crate) fn from_coeffs(vars: usize, order: usize, coeffs: Vec<Rational>) -> Self {
        debug_assert_eq!(coeffs.len(), count_up_to(vars, order));
        Self { vars, order, coeffs }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^α`; zero above the stored order.
    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        if alpha.degree() as usize > self.order {
            return Rational::zero();
        }
        self.coeffs[alpha.graded_position()].clone()
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> Vec<(MultiIndex, Rational)> {
        layout(self.vars, self.order)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| (a.clone(), c.clone()))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            vars: self.vars,
            order,
            coeffs: self.coeffs[..count_up_to(self.vars, order)].to_vec(),
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarCount {
                expected: self.vars,
                found: other.vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let len = count_up_to(self.vars, order);
        Ok(Self {
            vars: self.vars,
            order,
            coeffs: (0..len).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let len = count_up_to(self.vars, order);
        Ok(Self {
            vars: self.vars,
            order,
            coeffs: (0..len).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            vars: self.vars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Truncated Cauchy product at order `min(self.order, other.order)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.vars, order);
        for &(i, j, k) in product_table(self.vars, order).iter() {
            let a = &self.coeffs[i as usize];
            if a.is_zero() {
                continue;
            }
            let b = &other.coeffs[j as usize];
            if !b.is_zero() {
                out.coeffs[k as usize] += a * b;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.vars, self.order);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same vars");
        }
        acc
    }

    /// Multiplicative inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Singular("jet with zero constant term is not invertible".into()));
        }
        let c0 = self.coeffs[0].recip();
        // a = c(1 + x) with x nilpotent of order > self.order
        let mut x = self.scale(&c0);
        x.coeffs[0] = Rational::zero();
        let neg_x = x.neg();
        let mut term = Self::one(self.vars, self.order);
        let mut sum = term.clone();
        for _ in 0..self.order {
            term = term.mul(&neg_x)?;
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&c0))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    /// `∂^α` of the jet, valid to order `order - |α|`.
    pub fn derive(&self, alpha: &MultiIndex) -> Result<Self> {
        if alpha.vars() != self.vars {
            return Err(Error::VarCount {
                expected: self.vars,
                found: alpha.vars(),
            });
        }
        let d = alpha.degree() as usize;
        if d > self.order {
            return Err(Error::InsufficientOrder {
                required: d,
                available: self.order,
            });
        }
        let order = self.order - d;
        let idx = layout(self.vars, order);
        let coeffs = idx
            .iter()
            .map(|beta| {
                let shifted = beta.add(alpha);
                let c = &self.coeffs[shifted.graded_position()];
                if c.is_zero() {
                    return Rational::zero();
                }
                let factor = shifted.factorial() / beta.factorial();
                c * Rational::from_integer(factor)
            })
            .collect();
        Ok(Self {
            vars: self.vars,
            order,
            coeffs,
        })
    }

    /// `∂/∂t_i` (0-based).
    pub fn partial(&self, i: usize) -> Result<Self> {
        self.derive(&MultiIndex::unit(self.vars, i))
    }

    /// Substitutes `t ↦ s(t)`; the result has order `min(self.order, s.order)`.
    pub fn compose(&self, s: &ReparamJet) -> Result<Self> {
        if s.vars() != self.vars {
            return Err(Error::VarCount {
                expected: self.vars,
                found: s.vars(),
            });
        }
        let order = self.order.min(s.order());
        let comps: Vec<ScalarJet> = s.components().iter().map(|c| c.truncate(order)).collect();
        let idx = layout(self.vars, order);
        // powers[p] = s^{idx[p]}, built from a predecessor that differs in one slot
        let mut powers: Vec<ScalarJet> = Vec::with_capacity(idx.len());
        let mut out = Self::zero(self.vars, order);
        for (p, alpha) in idx.iter().enumerate() {
            let power = if p == 0 {
                Self::one(self.vars, order)
            } else {
                let r = (0..self.vars).find(|&r| alpha.get(r) > 0).expect("nonzero index");
                let prev = alpha.decrement(r).expect("positive entry").graded_position();
                powers[prev].mul(&comps[r])?
            };
            let c = &self.coeffs[p];
            if !c.is_zero() {
                for (o, v) in out.coeffs.iter_mut().zip(&power.coeffs) {
                    if !v.is_zero() {
                        *o += c * v;
                    }
                }
            }
            powers.push(power);
        }
        Ok(out)
    }

    /// Evaluates the truncated polynomial at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars);
        layout(self.vars, self.order)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(alpha, c)| {
                let mut term = c.clone();
                for (x, &e) in point.iter().zip(alpha.parts()) {
                    for _ in 0..e {
                        term *= x;
                    }
                }
                term
            })
            .sum()
    }
}

impl fmt::Debug for ScalarJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [order {}]", self, self.order)
    }
}

impl fmt::Display for ScalarJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (alpha, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(c))?;
            for (v, &e) in alpha.parts().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*t{}", v + 1)?,
                    _ => write!(f, "*t{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// A map `ℝ^m → ℝ^n` given by `n` scalar jets of equal order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceJet {
    components: Vec<ScalarJet>,
}

impl SurfaceJet {
    pub fn new(components: Vec<ScalarJet>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Shape("surface needs at least one component".into()))?;
        let (vars, order) = (first.vars, first.order);
        for c in &components {
            if c.vars != vars {
                return Err(Error::VarCount {
                    expected: vars,
                    found: c.vars,
                });
            }
            if c.order != order {
                return Err(Error::Shape(format!(
                    "component orders differ: {} vs {}",
                    order, c.order
                )));
            }
        }
        Ok(Self { components })
    }

    pub fn vars(&self) -> usize {
        self.components[0].vars
    }

    pub fn order(&self) -> usize {
        self.components[0].order
    }

    /// Number of components `n`.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarJet] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ScalarJet {
        &self.components[i]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            components: self.components.iter().map(|c| c.truncate(order)).collect(),
        }
    }

    /// `u^β = Π u_i^{β_i}`.
    pub fn monomial(&self, beta: &MultiIndex) -> Result<ScalarJet> {
        if beta.vars() != self.dim() {
            return Err(Error::VarCount {
                expected: self.dim(),
                found: beta.vars(),
            });
        }
        let mut acc = ScalarJet::one(self.vars(), self.order());
        for (c, &e) in self.components.iter().zip(beta.parts()) {
            for _ in 0..e {
                acc = acc.mul(c)?;
            }
        }
        Ok(acc)
    }

    /// All `u^β` for the given exponents, sharing partial products.
    pub fn monomials(&self, betas: &[MultiIndex]) -> Result<Vec<ScalarJet>> {
        let mut memo: HashMap<MultiIndex, ScalarJet> = HashMap::new();
        memo.insert(MultiIndex::zero(self.dim()), ScalarJet::one(self.vars(), self.order()));
        betas.iter().map(|b| self.monomial_memo(b, &mut memo)).collect()
    }

    fn monomial_memo(&self, beta: &MultiIndex, memo: &mut HashMap<MultiIndex, ScalarJet>) -> Result<ScalarJet> {
        if let Some(j) = memo.get(beta) {
            return Ok(j.clone());
        }
        let r = (0..self.dim()).find(|&r| beta.get(r) > 0).expect("nonzero index");
        let prev = self.monomial_memo(&beta.decrement(r).expect("positive"), memo)?;
        let out = prev.mul(&self.components[r])?;
        memo.insert(beta.clone(), out.clone());
        Ok(out)
    }

    pub fn compose(&self, s: &ReparamJet) -> Result<Self> {
        Self::new(
            self.components
                .iter()
                .map(|c| c.compose(s))
                .collect::<Result<_>>()?,
        )
    }

    /// The right action `u ↦ u·h` (row vector times matrix).
    pub fn apply_group(&self, h: &Matrix) -> Result<Self> {
        if !h.is_square() || h.rows() != self.dim() {
            return Err(Error::Shape(format!(
                "group element is {}x{}, surface has {} components",
                h.rows(),
                h.cols(),
                self.dim()
            )));
        }
        let n = self.dim();
        let components = (0..n)
            .map(|j| {
                let mut acc = ScalarJet::zero(self.vars(), self.order());
                for i in 0..n {
                    let w = &h[(i, j)];
                    if !w.is_zero() {
                        acc = acc.add(&self.components[i].scale(w))?;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        Self::new(components)
    }

    pub fn constant_terms(&self) -> Vec<Rational> {
        self.components.iter().map(|c| c.constant_term().clone()).collect()
    }
}

/// An origin-fixing change of parameters `s: ℝ^m → ℝ^m` with invertible
/// Jacobian at the origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReparamJet {
    map: SurfaceJet,
}

impl ReparamJet {
    pub fn new(map: SurfaceJet) -> Result<Self> {
        if map.dim() != map.vars() {
            return Err(Error::Shape(format!(
                "reparameterization maps {} variables to {} components",
                map.vars(),
                map.dim()
            )));
        }
        if map.order() == 0 {
            return Err(Error::InsufficientOrder {
                required: 1,
                available: 0,
            });
        }
        for (i, c) in map.components().iter().enumerate() {
            if !c.constant_term().is_zero() {
                return Err(Error::NonzeroConstant {
                    component: i,
                    value: format_rational(c.constant_term()),
                });
            }
        }
        let s = Self { map };
        if s.jacobian_at_origin().det()?.is_zero() {
            return Err(Error::Singular("reparameterization Jacobian at the origin".into()));
        }
        Ok(s)
    }

    pub fn identity(vars: usize, order: usize) -> Self {
        let comps = (0..vars).map(|i| ScalarJet::variable(vars, order, i)).collect();
        Self::new(SurfaceJet::new(comps).expect("uniform")).expect("identity is valid")
    }

    /// The linear map `t ↦ t·g`, i.e. `s_j = Σ_i g[i][j] t_i`.
    pub fn linear(g: &Matrix, order: usize) -> Result<Self> {
        let m = g.rows();
        let comps = (0..m)
            .map(|j| {
                let terms: Vec<_> = (0..m)
                    .map(|i| (MultiIndex::unit(m, i), g[(i, j)].clone()))
                    .collect();
                ScalarJet::from_terms(m, order, &terms)
            })
            .collect::<Result<_>>()?;
        Self::new(SurfaceJet::new(comps)?)
    }

    pub fn vars(&self) -> usize {
        self.map.vars()
    }

    pub fn order(&self) -> usize {
        self.map.order()
    }

    pub fn components(&self) -> &[ScalarJet] {
        self.map.components()
    }

    pub fn as_surface(&self) -> &SurfaceJet {
        &self.map
    }

    /// `g[i][j] = ∂s_j/∂t_i` at the origin: the coefficient of `t_i` in `s_j`.
    pub fn jacobian_at_origin(&self) -> Matrix {
        let m = self.vars();
        Matrix::from_fn(m, m, |i, j| self.map.components[j].coeff(&MultiIndex::unit(m, i)))
    }

    /// The Jacobian as a matrix of jets, `g[i][j](t) = ∂_i s_j(t)`, order `order - 1`.
    pub fn jacobian_jets(&self) -> Result<Vec<Vec<ScalarJet>>> {
        let m = self.vars();
        (0..m)
            .map(|i| (0..m).map(|j| self.map.components[j].partial(i)).collect())
            .collect()
    }

    /// `(self ∘ inner)(t) = self(inner(t))`.
    pub fn compose(&self, inner: &ReparamJet) -> Result<Self> {
        Self::new(self.map.compose(inner)?)
    }
}

/// `outer ∘ inner`.
pub fn jet_compose(outer: &SurfaceJet, inner: &ReparamJet) -> Result<SurfaceJet> {
    outer.compose(inner)
}

pub fn jet_mul(a: &ScalarJet, b: &ScalarJet) -> Result<ScalarJet> {
    a.mul(b)
}

pub fn jet_derive(a: &ScalarJet, alpha: &MultiIndex) -> Result<ScalarJet> {
    a.derive(alpha)
}

pub fn jet_apply_group(u: &SurfaceJet, h: &Matrix) -> Result<SurfaceJet> {
    u.apply_group(h)
}

pub fn jacobian_at_origin(s: &ReparamJet) -> Matrix {
    s.jacobian_at_origin()
}
