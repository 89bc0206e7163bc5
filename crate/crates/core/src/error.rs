//! Domain errors.
//!
//! Conditions a caller can hit with well-typed but infeasible parameters are
//! reported through [`enum@Error`]. Structural misuse (out-of-range vertices,
//! shape mismatches, events over different sample spaces) is a bug in the
//! caller and panics instead.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors raised by enumeration, sampling, and probability queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Conditioning on the proper-tuple family requires it to be nonempty.
    #[error("conditioning on empty event: no proper tuple has occupancy {p} with r={r}")]
    EmptyProperFamily {
        /// Occupancy vector, rendered `(p_1,…,p_k)`.
        p: String,
        /// Number of subsets per tuple.
        r: u32,
    },

    /// Some occupancy entry exceeds the number of subsets.
    #[error("infeasible occupancy {p} with r={r}: every entry must be at most r")]
    InfeasibleOccupancy {
        /// Occupancy vector, rendered `(p_1,…,p_k)`.
        p: String,
        /// Number of subsets per tuple.
        r: u32,
    },

    /// Surjections `[k-1] -> [r]` require `1 <= r <= k-1`.
    #[error("no surjection from [{}] onto [{r}]", k - 1)]
    SurjectionInfeasible {
        /// Ground-set size.
        k: u32,
        /// Target set size.
        r: u32,
    },

    /// The identity assignment requires `r = k-1`.
    #[error("identity assignment needs r = k-1, got k={k}, r={r}")]
    IdentityInfeasible {
        /// Ground-set size.
        k: u32,
        /// Target set size.
        r: u32,
    },

    /// Rejection sampling gave up.
    #[error("rejection sampling exceeded {limit} attempts")]
    RejectionLimitExceeded {
        /// Attempt budget that was exhausted.
        limit: u32,
    },

    /// The sample space of (tuple, surjection) pairs is empty.
    #[error("empty sample space for occupancy {p} with r={r}")]
    EmptySampleSpace {
        /// Occupancy vector, rendered `(p_1,…,p_k)`.
        p: String,
        /// Number of subsets per tuple.
        r: u32,
    },

    /// Exact enumeration would blow past the desk-scale budget.
    #[error("cell needs {needed} {what}, above the desk-scale limit of {limit}")]
    EnumerationBudgetExceeded {
        /// What would be enumerated.
        what: &'static str,
        /// Required count.
        needed: String,
        /// Supported maximum.
        limit: u64,
    },
}
