use crate::defining_sets::ValidationVerdict;

/// Errors shared across the crate.
///
/// Structural problems with defining sets are not errors by themselves;
/// they are reported as a [`ValidationVerdict`]. The `InvalidSets` variant
/// only appears when an operation that requires valid sets is handed
/// invalid ones.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("defining sets are invalid: {0}")]
    InvalidSets(ValidationVerdict),

    #[error("not a balanced pairing: {0}")]
    InvalidPairing(String),

    #[error("v = {v} must be divisible by 4")]
    NotDivisibleByFour { v: u32 },

    #[error("v = {v} is below the minimum of {min} for this construction")]
    GroundTooSmall { v: u32, min: u32 },

    #[error("v = {v} exceeds the supported maximum of {max}")]
    GroundTooLarge { v: u32, max: u32 },

    #[error("swap magnitude p = {p} is not supported (expected 1 or 2)")]
    UnsupportedMagnitude { p: u32 },

    #[error("point {point} is outside 1..={v}")]
    PointOutOfRange { point: u32, v: u32 },

    #[error("a swap must move two distinct points, got ({point}, {point})")]
    DegenerateSwap { point: u32 },

    #[error("swap ({lo}, {hi}) exceeds magnitude p = {p}")]
    SwapMagnitude { lo: u32, hi: u32, p: u32 },

    #[error("swaps overlap on point {element}")]
    OverlappingSwaps { element: u32 },

    #[error("duplicate block {elements:?} within one side")]
    DuplicateBlock { elements: Vec<u32> },

    #[error("a block may not repeat a point, got {point} twice")]
    RepeatedPoint { point: u32 },

    #[error("block discrepancy is undefined for an empty side")]
    EmptySide,

    #[error("{pairs} companion pairs would produce 2^{pairs} blocks per side, above the supported {max}")]
    VolumeTooLarge { pairs: usize, max: usize },

    #[error("the check needs {required} t-subsets, above the cap of {cap}")]
    SubsetCapExceeded { required: u128, cap: u64 },

    #[error("search budget of {budget} nodes exhausted; best value reached so far is {reached}")]
    SearchBudgetExceeded { budget: u64, reached: u64 },

    #[error("no pairing on {size} points achieves worst-case discrepancy <= {target} at p = {p}")]
    PatternNotFound { size: u32, p: u32, target: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
