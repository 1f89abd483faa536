//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by solver, preprocessing, reduction, and generator code.
///
/// Validation problems are reported as [`Error::InvalidInstance`] carrying a
/// human-readable summary; callers that want the full violation list should
/// run [`crate::instance::validate`] directly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Two actions share a finite agent utility and the caller forbade
    /// tie-breaking.
    #[error("unresolved tie: actions {first} and {second} both realize agent utility {utility}")]
    UnresolvedTie {
        first: usize,
        second: usize,
        utility: f64,
    },

    #[error("search space too large: {size} configurations exceeds cap {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },

    /// The instance does not satisfy the guarantees established by
    /// [`crate::preprocess::preprocess`]: some probability mass exceeds
    /// 1/M^2, or two atoms share a finite agent utility.
    #[error("instance not preprocessed for {bins} bins: {reason}")]
    NotPreprocessed { bins: u32, reason: String },

    /// No configuration places positive probability on a finite agent
    /// utility, so the maximum-utility distribution is degenerate.
    #[error("no finite agent-utility mass anywhere in the instance")]
    NoFiniteSupport,

    #[error("bin count must be at least {min}, got {got}")]
    MTooSmall { min: u32, got: u32 },

    /// Expected principal utility is zero, so alignment ratios are undefined.
    #[error("expected principal utility is zero; alignment ratios are undefined")]
    ZeroBaseUtility,

    #[error("delegation instance has an outside option; use the outside-option transform")]
    HasOutsideOption,

    #[error("delegation instance has no outside option; use the plain reduction")]
    NoOutsideOption,

    #[error("item {item} has an empty price set")]
    EmptyPriceSet { item: usize },

    #[error("epsilon must lie in (0, 1/2), got {0}")]
    BadEpsilon(f64),

    #[error("price range must satisfy 0 < u_min <= u_max, got [{u_min}, {u_max}]")]
    BadRange { u_min: f64, u_max: f64 },

    #[error("tightness gadget requires T >= 3, got {0}")]
    TTooSmall(u32),

    #[error("partition gadget requires positive integers, got {0}")]
    BadIntegers(String),

    #[error("bad generator spec: {0}")]
    BadSpec(String),

    /// A runtime consistency check that should be unreachable failed; this
    /// always indicates a bug.
    #[error("internal invariant breach: {0}")]
    InternalInvariant(String),
}
