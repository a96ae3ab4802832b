use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the algorithmic core can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The same id was declared twice within one id space.
    DuplicateId {
        space: &'static str,
        id: u16,
    },
    /// Id 0 is reserved for void.
    ReservedId {
        space: &'static str,
    },
    UnknownParent {
        part_id: u16,
        parent_id: u16,
    },
    EmptySemanticClasses,
    UnknownClass(u16),
    UnknownPart(u16),
    /// Two rasters (or a raster and a camera) disagree on size.
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// The logit stack is inconsistent with itself or with the taxonomy.
    InvalidLogits(String),
    InvalidLabels(String),
    InvalidParameter(String),
    NoParts,
    UnknownStrategy(String),
    EmptyCloud,
    TooFewPoints {
        needed: usize,
        found: usize,
    },
    /// Every sampled RANSAC hypothesis was degenerate.
    DegenerateSample,
    InvalidCamera(String),
    EvenWindow(usize),
    LevelsOutOfRange(u32),
    ChannelCount {
        expected: u8,
        found: u8,
    },
    /// A mask extraction stage produced no foreground.
    EmptyResult(&'static str),
    EmptyDataset,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DuplicateId { space, id } => write!(f, "duplicate {space} id {id}"),
            Error::ReservedId { space } => write!(f, "{space} id 0 is reserved for void"),
            Error::UnknownParent { part_id, parent_id } => write!(
                f,
                "part class {part_id} references unknown semantic class {parent_id}"
            ),
            Error::EmptySemanticClasses => f.write_str("taxonomy has no semantic classes"),
            Error::UnknownClass(id) => write!(f, "unknown semantic class {id}"),
            Error::UnknownPart(id) => write!(f, "unknown part class {id}"),
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::InvalidLogits(msg) => write!(f, "invalid logit stack: {msg}"),
            Error::InvalidLabels(msg) => write!(f, "invalid label triple: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NoParts => f.write_str("taxonomy has no part classes"),
            Error::UnknownStrategy(name) => write!(f, "unknown fusion strategy `{name}`"),
            Error::EmptyCloud => f.write_str("point cloud is empty"),
            Error::TooFewPoints { needed, found } => {
                write!(f, "too few points: need {needed}, got {found}")
            }
            Error::DegenerateSample => f.write_str("no non-degenerate plane hypothesis found"),
            Error::InvalidCamera(msg) => write!(f, "invalid camera: {msg}"),
            Error::EvenWindow(w) => write!(f, "window size must be odd, got {w}"),
            Error::LevelsOutOfRange(l) => write!(f, "quantization levels must be in 1..=256, got {l}"),
            Error::ChannelCount { expected, found } => {
                write!(f, "expected a {expected}-channel image, got {found} channels")
            }
            Error::EmptyResult(stage) => write!(f, "{stage} produced an empty mask"),
            Error::EmptyDataset => f.write_str("dataset is empty"),
        }
    }
}

impl core::error::Error for Error {}
