use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Maximum number of edges an [`EdgeSet`] can address.
pub const MAX_EDGES: usize = 64;

/// A subset of the edges of a fixed graph, stored as a bitmask over edge indices.
///
/// The derived ordering compares raw bitmasks, which is the tie-breaking order
/// used by every report in the crate.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet(u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        EdgeSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// All edges `0..len`.
    pub fn full(len: usize) -> Self {
        debug_assert!(len <= MAX_EDGES);
        if len == MAX_EDGES {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << len) - 1)
        }
    }

    pub fn singleton(edge: usize) -> Self {
        debug_assert!(edge < MAX_EDGES);
        EdgeSet(1u64 << edge)
    }

    pub fn from_edges<I: IntoIterator<Item = usize>>(edges: I) -> Self {
        edges
            .into_iter()
            .fold(EdgeSet::EMPTY, |acc, e| acc | EdgeSet::singleton(e))
    }

    pub fn contains(self, edge: usize) -> bool {
        edge < MAX_EDGES && self.0 >> edge & 1 == 1
    }

    pub fn with(self, edge: usize) -> Self {
        self | EdgeSet::singleton(edge)
    }

    pub fn without(self, edge: usize) -> Self {
        EdgeSet(self.0 & !(1u64 << edge))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Number of edges in the set.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: EdgeSet) -> Self {
        self | other
    }

    pub fn intersection(self, other: EdgeSet) -> Self {
        self & other
    }

    pub fn symmetric_difference(self, other: EdgeSet) -> Self {
        self ^ other
    }

    pub fn difference(self, other: EdgeSet) -> Self {
        self - other
    }

    /// Edge indices in increasing order.
    pub fn iter(self) -> EdgeIter {
        EdgeIter(self.0)
    }

    /// Lower-case hexadecimal bitmask with a `0x` prefix.
    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        let digits = s.strip_prefix("0x").unwrap_or(s);
        u64::from_str_radix(digits, 16).ok().map(EdgeSet)
    }
}

/// Serialized as its hexadecimal bitmask, e.g. `"0x1f"`.
impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        EdgeSet::from_hex(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("bad edge bitmask `{text}`")))
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

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        EdgeSet::from_edges(iter)
    }
}

pub struct EdgeIter(u64);

impl Iterator for EdgeIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
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

impl ExactSizeIterator for EdgeIter {}
