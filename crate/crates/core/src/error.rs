use thiserror::Error;

use crate::coloring::TraceFault;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(u32, u32),

    #[error("edge count {m} exceeds the {max} available pairs")]
    TooManyEdges { m: u64, max: u64 },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("at least one color class is required")]
    NoClasses,

    #[error("no partition into {q} classes leaves room for {m} edges on {n} vertices")]
    InfeasiblePartition { n: usize, q: usize, m: u64 },

    #[error("partition size constraint still violated after {0} resamples")]
    PartitionRetriesExhausted(usize),

    #[error("partition covers {found} vertices, expected {expected}")]
    PartitionMismatch { expected: usize, found: usize },

    #[error("order is not a permutation of the {0} vertices")]
    NotAPermutation(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("coloring is not proper: edge {{{0}, {1}}} is monochromatic")]
    ImproperColoring(u32, u32),

    #[error("no pair of vertices lies in different classes")]
    NoCrossPairs,

    #[error("palette color {0} is listed twice")]
    DuplicatePaletteColor(u32),

    #[error("palette exhausted after {rounds_completed} rounds with {remaining} vertices still above the threshold")]
    PaletteExhausted {
        rounds_completed: usize,
        remaining: usize,
    },

    #[error("residual recoloring needs {needed} fresh colors but only {available} are available")]
    InsufficientFreshColors { needed: usize, available: usize },

    #[error("fresh color {color} is already held by vertex {vertex}")]
    FreshColorInUse { color: u32, vertex: u32 },

    #[error("residual set of {size} vertices exceeds the cap of {cap}")]
    ResidualCapExceeded { size: usize, cap: usize },

    #[error("no valid fresh color for vertex {0}")]
    NoValidFreshColor(u32),

    #[error("base path does not recolor a prefix of the degeneracy order: {0}")]
    InvalidBasePath(String),

    #[error("work palette color {0} is also used by the target coloring")]
    PaletteOverlap(u32),

    #[error("{0} assignments exceed the enumeration cap")]
    EnumerationCap(String),

    #[error("the graph has no proper {0}-coloring")]
    NoColorings(u32),

    #[error("color {color} is outside the enumerated palette of {q} colors")]
    ColorOutOfRange { color: u32, q: u32 },

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("trace rejected: {0}")]
    Trace(#[from] TraceFault),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Parameter errors that make a request unsatisfiable, as opposed to
    /// malformed input or a failed verification.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::TooManyEdges { .. }
                | Error::InfeasiblePartition { .. }
                | Error::PartitionRetriesExhausted(_)
                | Error::NoCrossPairs
                | Error::PaletteExhausted { .. }
                | Error::InsufficientFreshColors { .. }
                | Error::ResidualCapExceeded { .. }
                | Error::NoValidFreshColor(_)
                | Error::EnumerationCap(_)
                | Error::NoColorings(_)
                | Error::PaletteOverlap(_)
        )
    }
}
