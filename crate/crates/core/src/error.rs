use thiserror::Error;

/// Errors raised by the counting, construction and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Schläfli symbol {{{p},{q}}}: both entries must be at least 3")]
    InvalidSymbol { p: u32, q: u32 },

    #[error("{{{p},{q}}} is spherical: the mosaic is finite and belts terminate")]
    Spherical { p: u32, q: u32 },

    /// p = 3: the layered construction yields a single tree and no new roots,
    /// so the two-sequence recursion does not apply.
    #[error("{{3,{q}}} has triangular cells: no roots appear besides the main root, the recursion is undefined")]
    TriangularCells { q: u32 },

    /// q = 3: one edge per vertex is not enough to connect consecutive layers.
    #[error("{{{p},3}} has trivalent vertices: no tree connects the layers")]
    TrivalentVertices { p: u32 },

    #[error("{{{p},{q}}} is Euclidean: the recursion matrix has the repeated eigenvalue 1 and no spectral constants; its layer counts are exactly a_i = 8i-4, b_i = 4")]
    RepeatedEigenvalue { p: u32, q: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("level {level} is out of range (0..={max})")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("projected vertex count {projected} exceeds the cap of {cap}")]
    VertexCapExceeded { projected: u64, cap: u64 },

    /// The frontier could not be closed consistently; the symbol or the
    /// belt count is outside what the builder supports.
    #[error("degenerate frontier while building belt {belt}: {reason}")]
    DegenerateFrontier { belt: usize, reason: String },

    #[error("vertex {vertex} on layer {layer} has {count} neighbours on the previous layer")]
    AmbiguousParent {
        vertex: u32,
        layer: usize,
        count: usize,
    },

    #[error("closed form did not evaluate to an integer at level {level}: {value}")]
    NonIntegralClosedForm { level: usize, value: String },

    #[error("distributions do not describe the same symbol and level")]
    MismatchedDistributions,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
