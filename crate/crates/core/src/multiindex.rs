//! Multi-indices and the graded order used to lay out every matrix and jet.
//!
//! Within a fixed degree the order puts *larger* leading entries first:
//! `(2,0) < (1,1) < (0,2)`. Across degrees, lower degree comes first. This is
//! the reverse of the usual graded-lex convention within a degree.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(parts: &[u32]) -> Self {
        assert!(!parts.is_empty(), "multi-index needs at least one variable");
        Self(SmallVec::from_slice(parts))
    }

    pub fn zero(vars: usize) -> Self {
        Self(SmallVec::from_elem(0, vars))
    }

    /// The unit index `e_i` (0-based `i`).
    pub fn unit(vars: usize, i: usize) -> Self {
        let mut idx = Self::zero(vars);
        idx.0[i] = 1;
        idx
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars(), other.vars(), "multi-index length mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other` is dominated by `self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !dominates(self, other) {
            return None;
        }
        Some(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn increment(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.0[i] += 1;
        out
    }

    pub fn decrement(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut out = self.clone();
        out.0[i] -= 1;
        Some(out)
    }

    /// Concatenation `I_n x I_m -> I_{n+m}`.
    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `α! = α₁!·…·α_n!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// Flat position of this index among all indices of degree ≤ its own,
    /// in the graded order. Jets store coefficients at these positions.
    pub fn graded_position(&self) -> usize {
        count_below_degree(self.vars(), self.degree() as usize) + self.rank_in_degree()
    }

    /// Position of this index inside `enumerate(vars, degree)`.
    pub fn rank_in_degree(&self) -> usize {
        let mut rank = 0u64;
        let mut rest = u64::from(self.degree());
        let vars = self.vars() as u64;
        for (pos, &a) in self.0.iter().enumerate() {
            let remaining_vars = vars - pos as u64;
            if remaining_vars == 1 {
                break;
            }
            let a = u64::from(a);
            // indices whose entry here exceeds `a`, with the same prefix
            if rest > a {
                rank += binomial(rest - a - 1 + remaining_vars - 1, remaining_vars - 1);
            }
            rest -= a;
        }
        rank as usize
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    /// Panics on a length mismatch; use [`compare`] for a checked version.
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other).expect("multi-index length mismatch")
    }
}

/// Graded order: lower degree first, then larger first entry, then larger
/// second entry, and so on.
pub fn compare(alpha: &MultiIndex, beta: &MultiIndex) -> Result<Ordering> {
    if alpha.vars() != beta.vars() {
        return Err(Error::VarCount {
            expected: alpha.vars(),
            found: beta.vars(),
        });
    }
    let by_degree = alpha.degree().cmp(&beta.degree());
    if by_degree != Ordering::Equal {
        return Ok(by_degree);
    }
    for (a, b) in alpha.0.iter().zip(&beta.0) {
        match b.cmp(a) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    Ok(Ordering::Equal)
}

/// `β ≪ α`: every entry of `beta` is at most the matching entry of `alpha`.
pub fn dominates(alpha: &MultiIndex, beta: &MultiIndex) -> bool {
    assert_eq!(alpha.vars(), beta.vars(), "multi-index length mismatch");
    alpha.0.iter().zip(&beta.0).all(|(a, b)| b <= a)
}

/// `α!/(β!(α−β)!)`, the product of the entrywise binomials.
pub fn mi_binomial(alpha: &MultiIndex, beta: &MultiIndex) -> Result<u64> {
    if alpha.vars() != beta.vars() {
        return Err(Error::VarCount {
            expected: alpha.vars(),
            found: beta.vars(),
        });
    }
    if !dominates(alpha, beta) {
        return Err(Error::NotDominated {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
        });
    }
    Ok(alpha
        .0
        .iter()
        .zip(&beta.0)
        .map(|(&a, &b)| binomial(u64::from(a), u64::from(b)))
        .product())
}

pub fn mi_factorial(alpha: &MultiIndex) -> BigInt {
    alpha.factorial()
}

/// Multinomial `p!/α!` where `p = |α|`; the column coefficients of `c^{⊙p}`.
pub fn multinomial(alpha: &MultiIndex) -> BigInt {
    factorial(alpha.degree()) / alpha.factorial()
}

/// Number of indices of exactly degree `degree` in `vars` variables.
pub fn count(vars: usize, degree: usize) -> usize {
    binomial((degree + vars - 1) as u64, (vars - 1) as u64) as usize
}

/// Number of indices of degree strictly below `degree`.
pub fn count_below_degree(vars: usize, degree: usize) -> usize {
    if degree == 0 {
        0
    } else {
        binomial((degree - 1 + vars) as u64, vars as u64) as usize
    }
}

/// Number of indices of degree at most `degree`.
pub fn count_up_to(vars: usize, degree: usize) -> usize {
    count_below_degree(vars, degree + 1)
}

type Table = Arc<[MultiIndex]>;

fn cache() -> &'static RwLock<HashMap<(usize, usize), Table>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Table>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All indices of exactly degree `degree` in `vars ≥ 1` variables, ascending.
/// Tables are memoized per `(vars, degree)`.
pub fn enumerate(vars: usize, degree: usize) -> Table {
    assert!(vars >= 1, "enumerate needs at least one variable");
    if let Some(t) = cache().read().unwrap().get(&(vars, degree)) {
        return Arc::clone(t);
    }
    let mut out = Vec::with_capacity(count(vars, degree));
    let mut current = vec![0u32; vars];
    fill(&mut out, &mut current, 0, degree as u32);
    let table: Table = out.into();
    cache()
        .write()
        .unwrap()
        .entry((vars, degree))
        .or_insert_with(|| Arc::clone(&table));
    table
}

fn fill(out: &mut Vec<MultiIndex>, current: &mut [u32], pos: usize, rest: u32) {
    if pos + 1 == current.len() {
        current[pos] = rest;
        out.push(MultiIndex::new(current));
        return;
    }
    for a in (0..=rest).rev() {
        current[pos] = a;
        fill(out, current, pos + 1, rest - a);
    }
    current[pos] = 0;
}

/// All indices of degree `0..=max_degree`, in graded order.
pub fn enumerate_up_to(vars: usize, max_degree: usize) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|d| enumerate(vars, d).iter().cloned().collect::<Vec<_>>())
        .collect()
}

/// All `β ≪ α` with `|β| = degree`.
pub fn dominated_of_degree(alpha: &MultiIndex, degree: u32) -> Vec<MultiIndex> {
    if degree > alpha.degree() {
        return Vec::new();
    }
    enumerate(alpha.vars(), degree as usize)
        .iter()
        .filter(|b| dominates(alpha, b))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(parts: &[u32]) -> MultiIndex {
        MultiIndex::new(parts)
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(&*enumerate(2, 2), &[mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
        assert_eq!(&*enumerate(3, 0), &[mi(&[0, 0, 0])]);
        assert_eq!(
            &*enumerate(3, 1),
            &[mi(&[1, 0, 0]), mi(&[0, 1, 0]), mi(&[0, 0, 1])]
        );
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&mi(&[2, 0]), &mi(&[1, 1])).unwrap(), Ordering::Less);
        assert_eq!(compare(&mi(&[1, 1]), &mi(&[1, 1])).unwrap(), Ordering::Equal);
        assert_eq!(compare(&mi(&[3, 0]), &mi(&[0, 1])).unwrap(), Ordering::Greater);
        assert!(compare(&mi(&[1, 0]), &mi(&[1, 0, 0])).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&mi(&[2, 1]), &mi(&[1, 1])));
        assert!(!dominates(&mi(&[2, 0]), &mi(&[1, 1])));
        assert!(dominates(&mi(&[1, 1]), &mi(&[0, 0])));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(mi_binomial(&mi(&[2, 1]), &mi(&[1, 1])).unwrap(), 2);
        assert_eq!(mi_binomial(&mi(&[4, 2, 1]), &mi(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(mi_binomial(&mi(&[3, 2]), &mi(&[2, 1])).unwrap(), 6);
        assert!(matches!(
            mi_binomial(&mi(&[2, 0]), &mi(&[1, 1])),
            Err(Error::NotDominated { .. })
        ));
        assert_eq!(mi_factorial(&mi(&[3, 2])), BigInt::from(12));
    }

    #[test]
    fn enumerate_sizes_and_strict_order() {
        for n in 1..=4 {
            for p in 0..=8 {
                let table = enumerate(n, p);
                assert_eq!(table.len(), binomial((p + n - 1) as u64, (n - 1) as u64) as usize);
                for w in table.windows(2) {
                    assert_eq!(compare(&w[0], &w[1]).unwrap(), Ordering::Less);
                }
                for (rank, idx) in table.iter().enumerate() {
                    assert_eq!(idx.rank_in_degree(), rank);
                }
            }
        }
    }

    #[test]
    fn graded_positions_are_contiguous() {
        for n in 1..=3 {
            let all = enumerate_up_to(n, 5);
            for (pos, idx) in all.iter().enumerate() {
                assert_eq!(idx.graded_position(), pos);
            }
            assert_eq!(all.len(), count_up_to(n, 5));
        }
    }

    fn pair(len: usize) -> impl Strategy<Value = (MultiIndex, MultiIndex, MultiIndex)> {
        let part = || proptest::collection::vec(0u32..5, len);
        (part(), part(), part()).prop_map(|(a, b, c)| (mi(&a), mi(&b), mi(&c)))
    }

    proptest! {
        #[test]
        fn compare_is_a_total_order((a, b, c) in (1usize..5).prop_flat_map(pair)) {
            let ab = compare(&a, &b).unwrap();
            prop_assert_eq!(ab.reverse(), compare(&b, &a).unwrap());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab != Ordering::Greater && compare(&b, &c).unwrap() != Ordering::Greater {
                prop_assert_ne!(compare(&a, &c).unwrap(), Ordering::Greater);
            }
        }

        #[test]
        fn binomial_is_symmetric((a, b, _) in (1usize..5).prop_flat_map(pair)) {
            let big = a.add(&b);
            let rest = big.checked_sub(&a).unwrap();
            prop_assert_eq!(mi_binomial(&big, &a).unwrap(), mi_binomial(&big, &rest).unwrap());
        }
    }
}
