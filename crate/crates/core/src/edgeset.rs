//! Dense bitmask edge sets.
//!
//! Bit `i` stands for `EdgeId` `i`. A single `u128` covers every ground set
//! this crate works with (G_n has `4n` edges, so `n <= 32`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type EdgeId = usize;

/// Maximum number of edges an [`EdgeSet`] can address.
pub const CAPACITY: usize = 128;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(u128);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub const fn from_bits(bits: u128) -> Self {
        EdgeSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// `{0, 1, ..., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= CAPACITY, "ground set of {m} edges exceeds capacity");
        if m == CAPACITY {
            EdgeSet(u128::MAX)
        } else {
            EdgeSet((1u128 << m) - 1)
        }
    }

    pub fn singleton(e: EdgeId) -> Self {
        assert!(e < CAPACITY, "edge id {e} exceeds capacity");
        EdgeSet(1u128 << e)
    }

    pub fn contains(self, e: EdgeId) -> bool {
        e < CAPACITY && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: EdgeId) {
        *self = self.with(e);
    }

    pub fn remove(&mut self, e: EdgeId) {
        *self = self.without(e);
    }

    #[must_use]
    pub fn with(self, e: EdgeId) -> Self {
        self | EdgeSet::singleton(e)
    }

    #[must_use]
    pub fn without(self, e: EdgeId) -> Self {
        self - EdgeSet::singleton(e)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: EdgeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<EdgeId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Every subset of `self`, in increasing numeric order of the bitmask.
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }

    /// Errors unless every member is below `len`.
    pub fn check_within(self, len: usize) -> Result<()> {
        if self.is_subset(EdgeSet::full(len)) {
            Ok(())
        } else {
            let id = self.iter().find(|&e| e >= len).unwrap_or(len);
            Err(Error::InvalidEdge { id, len })
        }
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    /// Parses a hex bitmask, with or without a `0x` prefix.
    pub fn parse_hex(text: &str) -> Result<Self> {
        let t = text.trim();
        let t = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        if t.is_empty() {
            return Err(Error::input("empty hex bitmask"));
        }
        u128::from_str_radix(t, 16)
            .map(EdgeSet)
            .map_err(|e| Error::input(format!("bad hex bitmask `{text}`: {e}")))
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        iter.into_iter().fold(EdgeSet::EMPTY, EdgeSet::with)
    }
}

impl IntoIterator for EdgeSet {
    type Item = EdgeId;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

/// Least-EdgeId-first: lexicographic order of the ascending member lists.
impl Ord for EdgeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for EdgeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for EdgeSet {
    type Output = EdgeSet;
    fn bitor(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | rhs.0)
    }
}

impl BitAnd for EdgeSet {
    type Output = EdgeSet;
    fn bitand(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & rhs.0)
    }
}

impl BitXor for EdgeSet {
    type Output = EdgeSet;
    fn bitxor(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 ^ rhs.0)
    }
}

impl Sub for EdgeSet {
    type Output = EdgeSet;
    fn sub(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !rhs.0)
    }
}

impl Not for EdgeSet {
    type Output = EdgeSet;
    fn not(self) -> EdgeSet {
        EdgeSet(!self.0)
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized as the ascending list of edge ids.
impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ids = Vec::<EdgeId>::deserialize(deserializer)?;
        if let Some(&bad) = ids.iter().find(|&&e| e >= CAPACITY) {
            return Err(serde::de::Error::custom(format!(
                "edge id {bad} exceeds capacity {CAPACITY}"
            )));
        }
        Ok(ids.into_iter().collect())
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = EdgeId;

    fn next(&mut self) -> Option<EdgeId> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Carry-rippler walk over the subsets of a fixed mask.
pub struct Subsets {
    set: u128,
    next: Option<u128>,
}

impl Iterator for Subsets {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.set) & self.set;
        self.next = (succ != 0).then_some(succ);
        Some(EdgeSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subsets_of_sparse_mask() {
        let all: Vec<u128> = EdgeSet::from_bits(0x55).subsets().map(EdgeSet::bits).collect();
        assert_eq!(all, [0, 1, 4, 5, 16, 17, 20, 21, 64, 65, 68, 69, 80, 81, 84, 85]);
        assert_eq!(EdgeSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn full_and_capacity() {
        assert_eq!(EdgeSet::full(0), EdgeSet::EMPTY);
        assert_eq!(EdgeSet::full(16).len(), 16);
        assert_eq!(EdgeSet::full(CAPACITY).len(), CAPACITY);
        assert!(EdgeSet::full(4).check_within(4).is_ok());
        assert!(matches!(
            EdgeSet::singleton(9).check_within(4),
            Err(Error::InvalidEdge { id: 9, len: 4 })
        ));
    }

    #[test]
    fn ordering_is_least_id_first() {
        let a: EdgeSet = [0, 5].into_iter().collect();
        let b: EdgeSet = [0, 3, 9].into_iter().collect();
        let c: EdgeSet = [1].into_iter().collect();
        let mut v = vec![c, a, b];
        v.sort();
        assert_eq!(v, vec![b, a, c]);
    }

    #[test]
    fn hex_forms() {
        assert_eq!(EdgeSet::parse_hex("0xff").unwrap(), EdgeSet::full(8));
        assert_eq!(EdgeSet::parse_hex("ff").unwrap().to_hex(), "ff");
        assert!(EdgeSet::parse_hex("").is_err());
        assert!(EdgeSet::parse_hex("zz").is_err());
    }

    proptest! {
        #[test]
        fn hex_and_json_roundtrip(bits in any::<u128>()) {
            let s = EdgeSet::from_bits(bits);
            prop_assert_eq!(EdgeSet::parse_hex(&s.to_hex()).unwrap(), s);
            let json = serde_json::to_string(&s).unwrap();
            prop_assert_eq!(serde_json::from_str::<EdgeSet>(&json).unwrap(), s);
        }

        #[test]
        fn iter_matches_len_and_membership(bits in any::<u128>()) {
            let s = EdgeSet::from_bits(bits);
            let ids: Vec<_> = s.iter().collect();
            prop_assert_eq!(ids.len(), s.len());
            prop_assert!(ids.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(ids.iter().all(|&e| s.contains(e)));
            prop_assert_eq!(ids.into_iter().collect::<EdgeSet>(), s);
        }
    }
}
