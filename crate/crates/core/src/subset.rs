//! Dense bitset over the ground set `0..n`.

use std::fmt;

const WORD_BITS: usize = 64;

/// A subset of the ground set `{0, .., n-1}` stored as a dense bitset.
///
/// The cardinality is cached and kept equal to the popcount of the words.
/// Bits at positions `>= n` in the last word are always zero, so two subsets
/// over the same ground set compare equal iff they have the same members.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    words: Vec<u64>,
    universe: usize,
    len: usize,
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        Subset {
            words: vec![0; universe.div_ceil(WORD_BITS)],
            universe,
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Subset::empty(universe);
        for (i, word) in set.words.iter_mut().enumerate() {
            let remaining = universe - i * WORD_BITS;
            *word = if remaining >= WORD_BITS {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        set.len = universe;
        set
    }

    /// Builds a subset from member indices; duplicates are ignored.
    ///
    /// Panics if an index is `>= universe`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = Subset::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Subset whose members are the set bits of `mask` (bit `i` is element `i`).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD_BITS, "mask subsets need universe <= 64");
        assert!(
            universe == WORD_BITS || mask >> universe == 0,
            "mask has bits outside the universe"
        );
        let mut words = vec![0; universe.div_ceil(WORD_BITS)];
        if let Some(w) = words.first_mut() {
            *w = mask;
        }
        Subset {
            words,
            universe,
            len: mask.count_ones() as usize,
        }
    }

    /// The members as a `u64` mask. Only defined for universes of at most 64 elements.
    pub fn to_mask(&self) -> u64 {
        assert!(
            self.universe <= WORD_BITS,
            "mask subsets need universe <= 64"
        );
        self.words.first().copied().unwrap_or(0)
    }

    /// Size `n` of the ground set.
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        assert!(
            i < self.universe,
            "index {i} out of range for universe {}",
            self.universe
        );
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    /// Adds `i`; returns `true` if it was not already a member.
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(
            i < self.universe,
            "index {i} out of range for universe {}",
            self.universe
        );
        let word = &mut self.words[i / WORD_BITS];
        let bit = 1u64 << (i % WORD_BITS);
        let added = *word & bit == 0;
        *word |= bit;
        self.len += added as usize;
        added
    }

    /// Removes `i`; returns `true` if it was a member.
    pub fn remove(&mut self, i: usize) -> bool {
        assert!(
            i < self.universe,
            "index {i} out of range for universe {}",
            self.universe
        );
        let word = &mut self.words[i / WORD_BITS];
        let bit = 1u64 << (i % WORD_BITS);
        let removed = *word & bit != 0;
        *word &= !bit;
        self.len -= removed as usize;
        removed
    }

    /// Flips membership of `i`.
    pub fn toggle(&mut self, i: usize) {
        if !self.insert(i) {
            self.remove(i);
        }
    }

    /// Copy of `self` with `i` added.
    pub fn with(&self, i: usize) -> Self {
        let mut set = self.clone();
        set.insert(i);
        set
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.universe == other.universe
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Number of positions in which `self` and `other` differ.
    pub fn hamming_distance(&self, other: &Subset) -> usize {
        assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the members of a [`Subset`].
pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a> IntoIterator for &'a Subset {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_empty() {
        for n in [1, 63, 64, 65, 130] {
            let full = Subset::full(n);
            assert_eq!(full.len(), n);
            assert_eq!(full.to_vec(), (0..n).collect::<Vec<_>>());
            assert!(Subset::empty(n).is_subset_of(&full));
            assert!(Subset::empty(n).is_empty());
        }
    }

    #[test]
    fn insert_remove_track_cardinality() {
        let mut s = Subset::empty(100);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(99));
        assert_eq!(s.len(), 2);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.to_vec(), vec![99]);
        s.toggle(99);
        assert!(s.is_empty());
    }

    #[test]
    fn mask_round_trip() {
        let s = Subset::from_mask(5, 0b10101);
        assert_eq!(s.to_vec(), vec![0, 2, 4]);
        assert_eq!(s.to_mask(), 0b10101);
        assert_eq!(Subset::from_mask(64, u64::MAX).len(), 64);
    }

    #[test]
    #[should_panic]
    fn out_of_range_index_panics() {
        Subset::empty(4).insert(4);
    }

    proptest! {
        #[test]
        fn cardinality_matches_members(n in 1usize..200, idx in prop::collection::vec(0usize..200, 0..50)) {
            let idx: Vec<usize> = idx.into_iter().filter(|&i| i < n).collect();
            let s = Subset::from_indices(n, idx.iter().copied());
            let mut expected = idx.clone();
            expected.sort_unstable();
            expected.dedup();
            prop_assert_eq!(s.len(), expected.len());
            prop_assert_eq!(s.to_vec(), expected);
        }
    }
}
