//! Subsets of the ground set `[k] = {1, …, k}` as bit masks.
//!
//! Element `j` occupies bit `j - 1`. All vertex and element indices in this
//! crate are 1-based, and all cyclic arithmetic funnels through [`cyclic`]
//! and [`cyclic_interval`].

use std::fmt;

/// Largest supported ground-set size. Enumeration is the whole point of this
/// crate, and everything interesting already happens well below this bound.
pub const MAX_K: u32 = 20;

/// Normalizes an arbitrary integer to the cyclic range `[1, k]`.
///
/// `cyclic(0, k) = k`, `cyclic(k + 1, k) = 1`, negatives wrap as expected.
pub fn cyclic(v: i64, k: u32) -> u32 {
    debug_assert!(k >= 1);
    ((v - 1).rem_euclid(k as i64) + 1) as u32
}

/// A subset of `[k]` stored as a `k`-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    k: u32,
}

impl SubsetMask {
    /// The empty subset of `[k]`.
    pub fn empty(k: u32) -> Self {
        Self::new(0, k)
    }

    /// The full subset `[k]`.
    pub fn full(k: u32) -> Self {
        Self::new(low_bits(k), k)
    }

    /// Builds a mask from raw bits. Panics if `k` is out of range or a bit
    /// above `k` is set.
    pub fn new(bits: u32, k: u32) -> Self {
        assert!((1..=MAX_K).contains(&k), "k={k} out of range 1..={MAX_K}");
        assert!(bits & !low_bits(k) == 0, "mask bits exceed k={k}");
        Self { bits, k }
    }

    /// Builds a mask from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = u32>>(k: u32, elements: I) -> Self {
        let mut m = Self::empty(k);
        for j in elements {
            m.insert(j);
        }
        m
    }

    /// Ground-set size.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Raw bits (bit `j - 1` is element `j`).
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Membership test for a 1-based element.
    pub fn contains(&self, j: u32) -> bool {
        assert!((1..=self.k).contains(&j), "element {j} out of [1,{}]", self.k);
        self.bits >> (j - 1) & 1 == 1
    }

    /// Inserts a 1-based element.
    pub fn insert(&mut self, j: u32) {
        assert!((1..=self.k).contains(&j), "element {j} out of [1,{}]", self.k);
        self.bits |= 1 << (j - 1);
    }

    /// Removes a 1-based element.
    pub fn remove(&mut self, j: u32) {
        assert!((1..=self.k).contains(&j), "element {j} out of [1,{}]", self.k);
        self.bits &= !(1 << (j - 1));
    }

    /// Number of elements.
    pub fn cardinality(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Complement within `[k]`.
    pub fn complement(&self) -> Self {
        Self {
            bits: !self.bits & low_bits(self.k),
            k: self.k,
        }
    }

    /// Whether this is the full set `[k]`.
    pub fn is_full(&self) -> bool {
        self.bits == low_bits(self.k)
    }

    /// Whether this is the empty set.
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        assert_eq!(self.k, other.k, "masks over different ground sets");
        self.bits & !other.bits == 0
    }

    /// Iterates the elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        let k = self.k;
        let bits = self.bits;
        (1..=k).filter(move |j| bits >> (j - 1) & 1 == 1)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, j) in self.elements().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// The cyclic interval `]i, j] = {i+1, i+2, …, j}` inside `[k]`, with indices
/// wrapping modulo `k`.
///
/// In particular `]i, i] = ∅` and `]i, i-1] = [k] \ {i}`.
pub fn cyclic_interval(i: u32, j: u32, k: u32) -> SubsetMask {
    assert!((1..=k).contains(&i), "vertex {i} out of [1,{k}]");
    assert!((1..=k).contains(&j), "vertex {j} out of [1,{k}]");
    let mut m = SubsetMask::empty(k);
    let mut v = i;
    while v != j {
        v = cyclic(v as i64 + 1, k);
        m.insert(v);
    }
    m
}

fn low_bits(k: u32) -> u32 {
    (1u32 << k) - 1
}
