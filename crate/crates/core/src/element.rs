use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

/// Handle of a group element: its index in the group's fixed enumeration.
///
/// Index 0 is always the identity. Handles are only meaningful together with
/// the group that produced them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Element(pub(crate) u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of elements of one group, stored as a membership bitmap over the
/// element enumeration.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl ElementSet {
    /// Empty set inside a group of the given order.
    pub fn empty(order: usize) -> Self {
        ElementSet {
            bits: FixedBitSet::with_capacity(order),
        }
    }

    /// The trivial subgroup `{1}`.
    pub fn trivial(order: usize) -> Self {
        let mut s = Self::empty(order);
        s.insert(Element::IDENTITY);
        s
    }

    pub fn full(order: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(order);
        bits.insert_range(..);
        ElementSet { bits }
    }

    pub fn from_elements(order: usize, elements: impl IntoIterator<Item = Element>) -> Self {
        let mut s = Self::empty(order);
        for e in elements {
            s.insert(e);
        }
        s
    }

    /// Size of the ambient group.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// Inserts `e`, returning true when it was not already present.
    pub fn insert(&mut self, e: Element) -> bool {
        !self.bits.put(e.index())
    }

    pub fn remove(&mut self, e: Element) {
        self.bits.set(e.index(), false);
    }

    pub fn contains(&self, e: Element) -> bool {
        self.bits.contains(e.index())
    }

    pub fn contains_identity(&self) -> bool {
        self.bits.contains(0)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.ones().map(|i| Element(i as u32))
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ElementSet { bits }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Smallest element of the set, if any.
    pub fn first(&self) -> Option<Element> {
        self.iter().next()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
