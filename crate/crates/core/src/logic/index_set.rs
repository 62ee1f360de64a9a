use alloc::vec::Vec;
use core::fmt;

/// Set of family positions, stored as a bitmask over positions `0..64`.
///
/// Positions are zero-based in code and printed one-based, so the set
/// holding positions 0 and 2 displays as `{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet(pub u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n == 64 {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        IndexSet(indices.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | 1 << i)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 >> i & 1 == 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Relabels members through `map`, where `map[i]` is the new position of `i`.
    pub fn remap(self, map: &[usize]) -> Self {
        IndexSet::from_indices(self.iter().map(|i| map[i]))
    }

    /// Nonempty subsets of `self`, ordered lexicographically by their sorted
    /// member lists.
    pub fn nonempty_subsets_lex(self) -> Vec<IndexSet> {
        let members = self.to_vec();
        let mut out = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn rec(members: &[usize], start: usize, stack: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
            for k in start..members.len() {
                stack.push(members[k]);
                out.push(IndexSet::from_indices(stack.iter().copied()));
                rec(members, k + 1, stack, out);
                stack.pop();
            }
        }
        rec(&members, 0, &mut stack, &mut out);
        out
    }

    /// Nonempty subsets ordered by size, then lexicographically.
    pub fn nonempty_subsets_by_size(self) -> Vec<IndexSet> {
        let mut subs = self.nonempty_subsets_lex();
        subs.sort_by_key(|s| s.len());
        subs
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn basics() {
        let s = IndexSet::from_indices([0, 2]);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.len(), 2);
        assert!(s.is_subset(IndexSet::full(3)));
        assert!(!IndexSet::full(3).is_subset(s));
        assert_eq!(IndexSet::full(3).difference(s), IndexSet::singleton(1));
        assert_eq!(s.first(), Some(0));
        assert_eq!(IndexSet::EMPTY.first(), None);
        assert_eq!(s.remap(&[1, 5, 3]), IndexSet::from_indices([1, 3]));
    }

    #[test]
    fn lexicographic_subsets() {
        let subs: Vec<_> = IndexSet::full(3)
            .nonempty_subsets_lex()
            .into_iter()
            .map(|s| s.to_vec())
            .collect();
        assert_eq!(
            subs,
            alloc::vec![
                alloc::vec![0],
                alloc::vec![0, 1],
                alloc::vec![0, 1, 2],
                alloc::vec![0, 2],
                alloc::vec![1],
                alloc::vec![1, 2],
                alloc::vec![2]
            ]
        );
        assert_eq!(IndexSet::full(4).nonempty_subsets_by_size().len(), 15);
    }
}
