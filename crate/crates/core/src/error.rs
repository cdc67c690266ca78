use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad magic number {0:?}, expected P2 or P5")]
    BadMagic(String),
    #[error("malformed PGM header: {0}")]
    BadHeader(String),
    #[error("truncated raster: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("maxval {0} outside 1..=65535")]
    MaxvalOutOfRange(u32),
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("histogram has a single distinct intensity")]
    DegenerateHistogram,
    #[error("thresholding left no foreground pixel")]
    EmptyForeground,
    #[error("mask is empty")]
    EmptyMask,
    #[error("no labeled component touches the top-left breast corner")]
    NoCornerComponent,

    #[error("need at least 2 boundary points, got {0}")]
    TooFewPoints(usize),
    #[error("line segment is degenerate after clipping")]
    DegenerateSegment,

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("need at least 2 pixels, got {0}")]
    TooFewPixels(usize),
    #[error("pixel index {index} out of range for {len} pixels")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("Tanimoto denominator is zero")]
    ZeroDenominator,
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("value series is empty")]
    EmptySeries,
    #[error("masks share no foreground row")]
    NoOverlappingRows,
    #[error("point set is empty")]
    EmptySet,
    #[error("ground truth set is empty")]
    EmptyGroundTruth,

    #[error("invalid phantom spec: {0}")]
    InvalidSpec(String),
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
    #[error("invalid fuzzy parameters: {0}")]
    InvalidParams(String),

    #[error("no PGM inputs found in {0}")]
    NoInputs(PathBuf),
    #[error("cannot write {path}: {source}")]
    UnwritableOutput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// Strips stage tags down to the underlying failure.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(
            self.root(),
            Error::Io(_) | Error::UnwritableOutput { .. } | Error::NoInputs(_)
        )
    }
}
