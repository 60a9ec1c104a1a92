//! Brute-force combinatorial oracle: partitions, partition pairs, spt
//! weights, and the four paircrank statistics.
//!
//! Everything here is enumerated directly from definitions, independent of
//! the series machinery, so it can serve as the ground truth for the
//! generating-function routes.

use crate::number::Int;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombError {
    /// The pair does not satisfy the family membership predicate.
    NotInFamily(u8),
}

impl fmt::Display for CombError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombError::NotInFamily(i) => write!(f, "pair is not in family {}", i),
        }
    }
}

impl std::error::Error for CombError {}

/// A partition: parts stored in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<i64>,
}

impl Partition {
    pub fn new(mut parts: Vec<i64>) -> Partition {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part (0 for the empty partition).
    pub fn largest(&self) -> i64 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Smallest part (0 for the empty partition).
    pub fn smallest(&self) -> i64 {
        self.parts.last().copied().unwrap_or(0)
    }

    /// Number of parts.
    pub fn count(&self) -> i64 {
        self.parts.len() as i64
    }

    /// Sum of the parts.
    pub fn sum(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// Multiplicity of the smallest part.
    pub fn spt(&self) -> i64 {
        let s = self.smallest();
        self.parts.iter().filter(|&&p| p == s).count() as i64
    }
}

/// All partitions of `n` with parts in `[min_part, max_part]`, in descending
/// lexicographic order on the part lists.
pub fn partitions_bounded(n: i64, min_part: i64, max_part: i64) -> Vec<Partition> {
    fn rec(
        remaining: i64,
        min_part: i64,
        max_part: i64,
        stack: &mut Vec<i64>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition {
                parts: stack.clone(),
            });
            return;
        }
        let hi = max_part.min(remaining);
        let mut p = hi;
        while p >= min_part {
            stack.push(p);
            rec(remaining - p, min_part, p, stack, out);
            stack.pop();
            p -= 1;
        }
    }
    if n < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    rec(n, min_part.max(1), max_part, &mut stack, &mut out);
    out
}

/// All partitions of `n` in deterministic (descending lexicographic) order.
pub fn partitions_of(n: i64) -> Vec<Partition> {
    if n == 0 {
        return vec![Partition::empty()];
    }
    partitions_bounded(n, 1, n)
}

/// `spt(n)`: total number of occurrences of smallest parts over all
/// partitions of `n`.
pub fn spt_total(n: i64) -> Int {
    assert!(n >= 1);
    let mut total = Int::from(0);
    for p in partitions_of(n) {
        total += Int::from(p.spt());
    }
    total
}

/// A pair of partitions; `first` must be non-empty for family membership.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionPair {
    pub first: Partition,
    pub second: Partition,
}

impl PartitionPair {
    pub fn new(first: Partition, second: Partition) -> PartitionPair {
        PartitionPair { first, second }
    }

    pub fn total(&self) -> i64 {
        self.first.sum() + self.second.sum()
    }

    /// Number of parts of `first` larger than `s(first) + #(second)`.
    pub fn k_statistic(&self) -> i64 {
        let bound = self.first.smallest() + self.second.count();
        self.first.parts().iter().filter(|&&p| p > bound).count() as i64
    }
}

/// The extra smallest-part condition each family imposes on the first
/// partition: none, spt >= 2, spt >= s+1, spt >= s.
fn spt_condition(family: u8, p1: &Partition) -> bool {
    let spt = p1.spt();
    let s = p1.smallest();
    match family {
        1 => true,
        2 => spt >= 2,
        3 => spt > s,
        4 => spt >= s,
        _ => panic!("family index must be 1..=4"),
    }
}

/// Membership in the family counted by the unweighted interpretation:
/// `first` non-empty; `second` empty or `s(first) <= s(second)` and
/// `l(second) <= 2 s(first)`; plus the family's spt condition.
pub fn in_family(family: u8, pair: &PartitionPair) -> bool {
    if pair.first.is_empty() {
        return false;
    }
    if !spt_condition(family, &pair.first) {
        return false;
    }
    if pair.second.is_empty() {
        return true;
    }
    let s = pair.first.smallest();
    s <= pair.second.smallest() && pair.second.largest() <= 2 * s
}

/// All pairs of total `n` in the family, deterministic order.
pub fn pair_enumerate(family: u8, n: i64) -> Vec<PartitionPair> {
    assert!((1..=4).contains(&family) && n >= 1);
    let mut out = Vec::new();
    for a in 1..=n {
        for p1 in partitions_of(a) {
            if !spt_condition(family, &p1) {
                continue;
            }
            let b = n - a;
            if b == 0 {
                out.push(PartitionPair::new(p1, Partition::empty()));
                continue;
            }
            let s = p1.smallest();
            for p2 in partitions_bounded(b, s, 2 * s) {
                out.push(PartitionPair::new(p1.clone(), p2));
            }
        }
    }
    out.sort();
    out
}

/// The paircrank statistic of the given family.
pub fn paircrank(family: u8, pair: &PartitionPair) -> Result<i64, CombError> {
    if !in_family(family, pair) {
        return Err(CombError::NotInFamily(family));
    }
    let spt = pair.first.spt();
    let k = pair.k_statistic();
    let parts2 = pair.second.count();
    let s = pair.first.smallest();
    let offset = match family {
        1 => 1,
        2 => 2,
        3 => s + 1,
        4 => s,
        _ => unreachable!(),
    };
    Ok(spt - offset + k - parts2)
}

/// Histogram of paircrank values over all family pairs of `n`.
pub fn crank_histogram(family: u8, n: i64) -> BTreeMap<i64, Int> {
    let mut hist = BTreeMap::new();
    for pair in pair_enumerate(family, n) {
        let c = paircrank(family, &pair).expect("enumerated pairs are members");
        *hist.entry(c).or_insert_with(|| Int::from(0)) += 1;
    }
    hist
}

/// The weighted count from the smallest-parts interpretation: pairs over the
/// strict family (`s(first) < s(second)` when `second` is non-empty), each
/// counted by the number of smallest-part occurrences past the family's
/// threshold.
pub fn weighted_count(family: u8, n: i64) -> Int {
    assert!((1..=4).contains(&family) && n >= 1);
    let mut total = Int::from(0);
    for a in 1..=n {
        for p1 in partitions_of(a) {
            if !spt_condition(family, &p1) {
                continue;
            }
            let spt = p1.spt();
            let s = p1.smallest();
            let weight = match family {
                1 => spt,
                2 => spt - 1,
                3 => spt - s,
                4 => spt - s + 1,
                _ => unreachable!(),
            };
            debug_assert!(weight >= 1);
            let b = n - a;
            let second_count = if b == 0 {
                1
            } else {
                // strict interpretation: parts of the second lie in [s+1, 2s]
                partitions_bounded(b, s + 1, 2 * s).len() as i64
            };
            total += Int::from(weight * second_count);
        }
    }
    total
}

/// The unweighted count: the cardinality of the (weak) family.
pub fn unweighted_count(family: u8, n: i64) -> Int {
    Int::from(pair_enumerate(family, n).len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, Frac};
    use crate::qfunctions::{aqprod_infinite, euler_pentagonal};
    use crate::ring::{IntegerRing, Ring};
    use crate::series::LaurentSeries;

    #[test]
    fn partitions_of_three() {
        let ps = partitions_of(3);
        assert_eq!(ps.len(), 3);
        let lists: Vec<&[i64]> = ps.iter().map(|p| p.parts()).collect();
        assert!(lists.contains(&&[3][..]));
        assert!(lists.contains(&&[2, 1][..]));
        assert!(lists.contains(&&[1, 1, 1][..]));
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
    }

    #[test]
    fn partition_counts_match_series_oracle() {
        let depth = 41;
        let gen = euler_pentagonal(&IntegerRing, depth).invert().unwrap();
        for n in 0..depth {
            let count = partitions_of(n).len() as i64;
            assert_eq!(
                gen.coeff_at(Frac::from_int(n)),
                Some(int(count)),
                "p({}) mismatch",
                n
            );
        }
    }

    #[test]
    fn spt_values() {
        assert_eq!(spt_total(3), int(5));
        assert_eq!(spt_total(1), int(1));
    }

    #[test]
    fn spt_matches_series_oracle() {
        // sum_n q^n / ((1-q^n)^2 (q^{n+1}; q)_inf)
        let depth = 31;
        let ring = IntegerRing;
        let one = ring.one();
        let mut acc = LaurentSeries::zero(ring.clone(), Frac::from_int(depth));
        for n in 1..depth {
            // (1 - q^n) = (q^n; q)_inf / (q^{n+1}; q)_inf
            let tail_inv = aqprod_infinite(&ring, &one, n + 1, 1, depth)
                .unwrap()
                .invert()
                .unwrap();
            let pole = aqprod_infinite(&ring, &one, n, 1, depth)
                .unwrap()
                .mul(&tail_inv)
                .unwrap();
            let term = pole
                .pow(-2)
                .unwrap()
                .mul(&tail_inv)
                .unwrap()
                .shift(Frac::from_int(n));
            acc = acc.add(&term).unwrap();
        }
        for n in 1..depth - 1 {
            assert_eq!(
                acc.coeff_at(Frac::from_int(n)),
                Some(spt_total(n)),
                "spt({}) mismatch",
                n
            );
        }
    }

    #[test]
    fn pair_enumeration_small_cases() {
        // family 1, n = 2: ((2), -), ((1,1), -), ((1), (1))
        let pairs = pair_enumerate(1, 2);
        assert_eq!(pairs.len(), 3);
        assert!(pairs.contains(&PartitionPair::new(
            Partition::new(vec![2]),
            Partition::empty()
        )));
        assert!(pairs.contains(&PartitionPair::new(
            Partition::new(vec![1, 1]),
            Partition::empty()
        )));
        assert!(pairs.contains(&PartitionPair::new(
            Partition::new(vec![1]),
            Partition::new(vec![1])
        )));
        // family 2, n = 1: no pair has spt >= 2
        assert!(pair_enumerate(2, 1).is_empty());
    }

    #[test]
    fn paircrank_values() {
        let p = |parts: &[i64]| Partition::new(parts.to_vec());
        let pair = PartitionPair::new(p(&[1, 1]), Partition::empty());
        assert_eq!(paircrank(1, &pair), Ok(1));
        let pair = PartitionPair::new(p(&[1]), p(&[1]));
        assert_eq!(paircrank(1, &pair), Ok(-1));
        let pair = PartitionPair::new(p(&[2]), Partition::empty());
        assert_eq!(paircrank(1, &pair), Ok(0));
        // not in family: second has a part above 2 s(first)
        let pair = PartitionPair::new(p(&[1]), p(&[3]));
        assert_eq!(paircrank(1, &pair), Err(CombError::NotInFamily(1)));
    }

    #[test]
    fn histogram_small_case() {
        let h = crank_histogram(1, 2);
        let expect: Vec<(i64, Int)> = vec![(-1, int(1)), (0, int(1)), (1, int(1))];
        assert_eq!(h.into_iter().collect::<Vec<_>>(), expect);
        assert!(crank_histogram(2, 1).is_empty());
    }

    #[test]
    fn family_inclusions() {
        // families 2, 3, 4 are subsets of family 1 (and only that is claimed)
        for n in 1..=14 {
            for fam in [2u8, 3, 4] {
                for pair in pair_enumerate(fam, n) {
                    assert!(in_family(1, &pair));
                }
            }
        }
    }

    #[test]
    fn histogram_symmetry() {
        for fam in 1u8..=4 {
            for n in 1..=12 {
                let h = crank_histogram(fam, n);
                for (m, c) in &h {
                    let mirrored = h.get(&-m).cloned().unwrap_or_else(|| int(0));
                    assert_eq!(*c, mirrored, "family {} n {} m {}", fam, n, m);
                }
            }
        }
    }

    #[test]
    fn weighted_equals_unweighted_small() {
        for fam in 1u8..=4 {
            for n in 1..=14 {
                assert_eq!(
                    weighted_count(fam, n),
                    unweighted_count(fam, n),
                    "family {} n {}",
                    fam,
                    n
                );
            }
        }
    }
}
