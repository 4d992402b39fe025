//! Instances, item sets, value oracles, validation and curvature.

mod instance;
mod oracle;
mod validate;

pub use instance::{GeneratorInfo, Instance, InstanceFile, Item};
pub use oracle::{
    make_concave_modular_oracle, make_coverage_oracle, make_modular_oracle, make_table_oracle,
    table_key, ValueOracle,
};
pub use validate::{
    validate_oracle, validate_oracle_with, ValidationMode, ValidationReport, Violation,
    ViolationKind, EXHAUSTIVE_VALIDATION_MAX,
};

use std::fmt;

/// Hard cap on the number of items an [`Instance`] can hold (item sets are 64-bit masks).
pub const MAX_ITEMS: usize = 64;

/// Largest instance accepted by routines that enumerate all `2^n` subsets.
pub const EXHAUSTIVE_MAX_ITEMS: usize = 22;

/// A set of items, addressed by their index in the owning [`Instance`].
///
/// Instances store items sorted by id, so ascending index order is ascending id
/// order and iteration always yields the canonical order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct ItemSet(u64);

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ItemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        ItemSet(1 << index)
    }

    /// All items `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ItemSet(u64::MAX)
        } else {
            ItemSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn with(self, index: usize) -> Self {
        ItemSet(self.0 | 1 << index)
    }

    pub fn without(self, index: usize) -> Self {
        ItemSet(self.0 & !(1 << index))
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    pub fn remove(&mut self, index: usize) {
        self.0 &= !(1 << index);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ItemSet) -> Self {
        ItemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ItemSet) -> Self {
        ItemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ItemSet) -> Self {
        ItemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ItemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ItemSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Member indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Lexicographic comparison of the ascending member sequences.
    pub fn lex_cmp(self, other: ItemSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ItemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ItemSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_ascending() {
        let s: ItemSet = [5, 0, 3].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(4));
    }

    #[test]
    fn lexicographic_order() {
        let a: ItemSet = [0].into_iter().collect();
        let ab: ItemSet = [0, 1].into_iter().collect();
        let b: ItemSet = [1].into_iter().collect();
        assert!(a.lex_cmp(ab).is_lt());
        assert!(ab.lex_cmp(b).is_lt());
        assert!(ItemSet::EMPTY.lex_cmp(a).is_lt());
    }

    #[test]
    fn full_set() {
        assert_eq!(ItemSet::full(0), ItemSet::EMPTY);
        assert_eq!(ItemSet::full(3).bits(), 0b111);
        assert_eq!(ItemSet::full(64).len(), 64);
    }
}
