//! Small combinatorial helpers shared by the construction modules.
//!
//! Subsets are represented as sorted `Vec<usize>` of 1-based members, and all
//! enumeration is in lexicographic order, which the array constructions rely
//! on for their row/column/symbol indexing.

use itertools::Itertools;

/// Binomial coefficient `C(n, k)`; 0 when `k > n`.
///
/// Intermediate products are kept in `u128`, which is exact for every
/// parameter size this crate touches (n well below 60).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All k-subsets of `[1..=n]` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (1..=n).combinations(k).collect()
}

/// All k-subsets of the given (sorted) ground set, in lexicographic order.
pub fn subsets_of(ground: &[usize], k: usize) -> Vec<Vec<usize>> {
    ground.iter().copied().combinations(k).collect()
}

/// 0-based lexicographic rank of a sorted k-subset of `[1..=n]`.
///
/// Inverse of the position in `subsets(n, k)`; computed with the
/// combinatorial number system rather than by enumeration.
pub fn lex_rank(subset: &[usize], n: usize) -> usize {
    let k = subset.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &s) in subset.iter().enumerate() {
        for v in prev + 1..s {
            rank += binomial(n - v, k - 1 - i);
        }
        prev = s;
    }
    rank
}
