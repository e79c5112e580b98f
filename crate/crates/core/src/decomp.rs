//! Writing `C(m+k, m)` (or `C(m+k, m) − 1`) as a sum of distinct terms of
//! the sequence `C(n−1+l, n−1)`, `l = 1, 2, …`.
//!
//! Each decomposition `target = Σ C(n−1+lᵢ, n−1)` with `l₁ < … < l_r` gives a
//! square stacked matrix with `js = (l₁, …, l_r)`.

use crate::rational::binomial;

/// Whether the degree-zero row block is part of the count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Target `C(m+k, m)`.
    WithZeroRow,
    /// Target `C(m+k, m) − 1`.
    WithoutZeroRow,
}

impl Variant {
    pub fn include_zero_row(self) -> bool {
        matches!(self, Variant::WithZeroRow)
    }

    pub fn target(self, m: usize, k: usize) -> u64 {
        let full = binomial((m + k) as u64, m as u64);
        match self {
            Variant::WithZeroRow => full,
            Variant::WithoutZeroRow => full - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub target: u64,
    /// Strictly increasing `l` values.
    pub parts: Vec<usize>,
    /// The summands `C(n−1+l, n−1)`, matching `parts`.
    pub values: Vec<u64>,
}

impl Decomposition {
    pub fn is_valid(&self, n: usize) -> bool {
        self.parts.windows(2).all(|w| w[0] < w[1])
            && self.parts.iter().zip(&self.values).all(|(&l, &v)| v == part_value(n, l))
            && self.values.iter().sum::<u64>() == self.target
    }
}

/// `C(n−1+l, n−1)`.
pub fn part_value(n: usize, l: usize) -> u64 {
    binomial((n - 1 + l) as u64, (n - 1) as u64)
}

/// `(l, value)` pairs with `value ≤ target`, ascending.
fn parts_up_to(target: u64, n: usize) -> Vec<(usize, u64)> {
    (1..)
        .map(|l| (l, part_value(n, l)))
        .take_while(|&(_, v)| v <= target)
        .collect()
}

/// Every decomposition of `target`, in lexicographic order of the `l` lists.
pub fn decompose_target(target: u64, n: usize) -> Vec<Decomposition> {
    assert!(n >= 2, "n must be at least 2");
    let parts = parts_up_to(target, n);
    let mut out = Vec::new();
    search(&parts, target, 0, &mut Vec::new(), &mut |chosen| {
        out.push(make(target, chosen));
        true
    });
    out
}

/// The lexicographically first decomposition, if any.
pub fn first_decomposition(target: u64, n: usize) -> Option<Decomposition> {
    assert!(n >= 2, "n must be at least 2");
    let parts = parts_up_to(target, n);
    let mut found = None;
    search(&parts, target, 0, &mut Vec::new(), &mut |chosen| {
        found = Some(make(target, chosen));
        false
    });
    found
}

/// Number of decompositions, by counting subset sums.
pub fn count_decompositions(target: u64, n: usize) -> u128 {
    let t = target as usize;
    let mut ways = vec![0u128; t + 1];
    ways[0] = 1;
    for (_, v) in parts_up_to(target, n) {
        let v = v as usize;
        for s in (v..=t).rev() {
            ways[s] += ways[s - v];
        }
    }
    ways[t]
}

fn make(target: u64, chosen: &[(usize, u64)]) -> Decomposition {
    Decomposition {
        target,
        parts: chosen.iter().map(|&(l, _)| l).collect(),
        values: chosen.iter().map(|&(_, v)| v).collect(),
    }
}

/// Depth-first search over ascending parts. Returns `false` once `visit`
/// asks to stop.
fn search<F>(parts: &[(usize, u64)], remaining: u64, start: usize, chosen: &mut Vec<(usize, u64)>, visit: &mut F) -> bool
where
    F: FnMut(&[(usize, u64)]) -> bool,
{
    if remaining == 0 {
        return visit(chosen);
    }
    let available: u64 = parts[start..].iter().map(|&(_, v)| v).sum();
    if available < remaining {
        return true;
    }
    for idx in start..parts.len() {
        let (l, v) = parts[idx];
        if v > remaining {
            break;
        }
        chosen.push((l, v));
        let keep_going = search(parts, remaining - v, idx + 1, chosen, visit);
        chosen.pop();
        if !keep_going {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub k: usize,
    pub target: u64,
    pub count: u128,
    pub first: Option<Decomposition>,
}

/// Representability of the targets for `k = 1..=k_max`.
pub fn scan_representable(m: usize, n: usize, k_max: usize, variant: Variant) -> Vec<ScanRow> {
    let row = |k: usize| {
        let target = variant.target(m, k);
        ScanRow {
            k,
            target,
            count: count_decompositions(target, n),
            first: first_decomposition(target, n),
        }
    };
    crate::trials::map_indexed(crate::trials::Execution::default(), 1..=k_max, row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_decompositions() {
        assert_eq!(decompose_target(9, 3).iter().map(|d| d.parts.clone()).collect::<Vec<_>>(), vec![vec![1, 2]]);
        assert!(decompose_target(44, 3).iter().any(|d| d.parts == [2, 3, 6]));
        assert_eq!(decompose_target(3, 3)[0].parts, vec![1]);
        assert_eq!(decompose_target(3, 3).len(), 1);
    }

    #[test]
    fn lexicographic_and_valid() {
        for target in 1..=200 {
            let all = decompose_target(target, 3);
            for w in all.windows(2) {
                assert!(w[0].parts < w[1].parts);
            }
            assert!(all.iter().all(|d| d.is_valid(3)));
            assert_eq!(all.len() as u128, count_decompositions(target, 3));
            assert_eq!(first_decomposition(target, 3), all.first().cloned());
        }
    }

    #[test]
    fn scan_small() {
        let rows = scan_representable(2, 3, 10, Variant::WithZeroRow);
        let firsts: Vec<_> = rows[..3].iter().map(|r| r.first.as_ref().unwrap().values.clone()).collect();
        assert_eq!(firsts, vec![vec![3], vec![6], vec![10]]);

        let rows = scan_representable(2, 3, 3, Variant::WithoutZeroRow);
        assert_eq!(rows[0].target, 2);
        assert_eq!(rows[0].count, 0);
        assert!(rows[0].first.is_none());
    }
}
