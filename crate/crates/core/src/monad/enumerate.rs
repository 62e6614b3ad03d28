//! Deterministic enumeration of monad values over small universes, used by
//! the law checkers. Set-like kinds enumerate all subsets of the given
//! universe; distribution kinds enumerate supports of size <= 3 with
//! weights on the dyadic grid of denominator 4. Nesting layers bound their
//! universes with [`bounded`] so that doubly and triply nested spaces stay
//! enumerable; the chosen spread is deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::monad::{MonadKind, MonadValue};
use crate::quantale::Rat;

/// All monad values of `kind` over `universe` (see module docs for the
/// bounds applied to distribution kinds).
pub fn monad_values<T: Ord + Clone>(kind: MonadKind, universe: &[T]) -> Vec<MonadValue<T>> {
    match kind {
        MonadKind::Pow => subsets(universe).into_iter().map(MonadValue::Set).collect(),
        MonadKind::NePow => subsets(universe)
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(MonadValue::NeSet)
            .collect(),
        MonadKind::Dist => dyadic_dists(universe)
            .into_iter()
            .map(MonadValue::Dist)
            .collect(),
        MonadKind::DistBh => {
            let mut out = vec![MonadValue::BhStar];
            out.extend(dyadic_dists(universe).into_iter().map(MonadValue::BhDist));
            out
        }
    }
}

/// All subsets of a universe; callers keep the universe small.
pub fn subsets<T: Ord + Clone>(universe: &[T]) -> Vec<BTreeSet<T>> {
    assert!(universe.len() <= 16, "universe too large to enumerate");
    let mut out = Vec::with_capacity(1 << universe.len());
    for mask in 0u32..(1 << universe.len()) {
        let mut s = BTreeSet::new();
        for (i, x) in universe.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.insert(x.clone());
            }
        }
        out.push(s);
    }
    out
}

/// Distributions over the universe with support size <= 3 and weights
/// that are positive multiples of 1/4.
pub fn dyadic_dists<T: Ord + Clone>(universe: &[T]) -> Vec<BTreeMap<T, Rat>> {
    const DENOM: i64 = 4;
    let mut out = Vec::new();
    let max_support = universe.len().min(3);
    for support in subsets(universe) {
        let k = support.len();
        if k == 0 || k > max_support {
            continue;
        }
        let elems: Vec<&T> = support.iter().collect();
        for comp in compositions(DENOM, k) {
            let mut m = BTreeMap::new();
            for (x, num) in elems.iter().zip(comp.iter()) {
                m.insert((*x).clone(), Rat::new(*num, DENOM));
            }
            out.push(m);
        }
    }
    out
}

/// All vectors of `parts` positive integers summing to `total`.
pub fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(total: i64, parts: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            if total >= 1 {
                cur.push(total);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=(total - parts as i64 + 1) {
            cur.push(first);
            rec(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    if parts >= 1 {
        rec(total, parts, &mut cur, &mut out);
    }
    out
}

/// A deterministic spread of at most `n` elements out of `items`
/// (evenly spaced, always including the first element).
pub fn bounded<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (0..n)
        .map(|i| items[i * items.len() / n].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4, 1), vec![vec![4]]);
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(4, 3).len(), 3);
    }

    #[test]
    fn dist_masses_are_exact() {
        let ds = dyadic_dists(&[0u8, 1, 2]);
        assert!(!ds.is_empty());
        for d in ds {
            let total = d.values().fold(Rat::zero(), |a, w| a.add(w));
            assert!(total.is_one());
        }
    }

    #[test]
    fn bounded_is_deterministic_spread() {
        let items: Vec<u8> = (0..10).collect();
        assert_eq!(bounded(&items, 4), vec![0, 2, 5, 7]);
        assert_eq!(bounded(&items, 20), items);
    }
}
