//! Subset tuples and their occupancy vectors.

use std::fmt;

use crate::mask::SubsetMask;

/// Per-element membership counts `p = (p_1, …, p_k)`: entry `j` says how
/// many subsets of a tuple contain element `j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OccupancyVector(Vec<u32>);

impl OccupancyVector {
    /// Wraps a count vector; the length is the ground-set size `k`.
    pub fn new(counts: Vec<u32>) -> Self {
        assert!(!counts.is_empty(), "occupancy vector must have length k >= 1");
        Self(counts)
    }

    /// Ground-set size.
    pub fn k(&self) -> u32 {
        self.0.len() as u32
    }

    /// Count for the 1-based element `j`.
    pub fn get(&self, j: u32) -> u32 {
        self.0[(j - 1) as usize]
    }

    /// All counts, element 1 first.
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Largest entry.
    pub fn max_entry(&self) -> u32 {
        *self.0.iter().max().expect("nonempty")
    }

    /// Whether every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for OccupancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, c) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An ordered tuple `(S_1, …, S_r)` of subsets of `[k]`.
///
/// A tuple is *proper* when no entry equals the full set `[k]`; the families
/// enumerated in [`crate::counting`] condition on properness.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubsetTuple {
    subsets: Vec<SubsetMask>,
}

impl SubsetTuple {
    /// Wraps the subsets; all must share the same ground set.
    pub fn new(subsets: Vec<SubsetMask>) -> Self {
        assert!(!subsets.is_empty(), "tuple must have length r >= 1");
        let k = subsets[0].k();
        assert!(
            subsets.iter().all(|s| s.k() == k),
            "subsets over different ground sets"
        );
        Self { subsets }
    }

    /// Tuple length `r`.
    pub fn r(&self) -> u32 {
        self.subsets.len() as u32
    }

    /// Ground-set size `k`.
    pub fn k(&self) -> u32 {
        self.subsets[0].k()
    }

    /// The 1-based entry `S_t`.
    pub fn subset(&self, t: u32) -> &SubsetMask {
        &self.subsets[(t - 1) as usize]
    }

    /// All entries in order.
    pub fn subsets(&self) -> &[SubsetMask] {
        &self.subsets
    }

    /// True when no entry equals `[k]`.
    pub fn is_proper(&self) -> bool {
        self.subsets.iter().all(|s| !s.is_full())
    }

    /// Per-element membership counts.
    pub fn occupancy(&self) -> OccupancyVector {
        let k = self.k();
        let counts = (1..=k)
            .map(|j| self.subsets.iter().filter(|s| s.contains(j)).count() as u32)
            .collect();
        OccupancyVector::new(counts)
    }
}

impl fmt::Display for SubsetTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, s) in self.subsets.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}
