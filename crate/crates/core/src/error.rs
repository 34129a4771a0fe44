//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A rotation matrix failed the orthonormality or determinant check.
    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    /// A mesh with zero total surface area cannot be sampled.
    #[error("degenerate mesh")]
    DegenerateMesh,

    /// Rigid fitting needs at least three correspondences.
    #[error("insufficient correspondences: need at least 3, got {0}")]
    InsufficientCorrespondences(usize),

    /// The correspondence geometry does not constrain a unique rotation.
    #[error("degenerate configuration")]
    DegenerateConfiguration,

    /// No consensus hypothesis reached the minimal inlier count.
    #[error("fit failed: no hypothesis reached 3 inliers")]
    FitFailed,

    /// All valid heatmap pixels share one value; Otsu cannot split them.
    #[error("degenerate histogram")]
    DegenerateHistogram,

    /// Projection requires every point to sit in front of the camera.
    #[error("point behind camera")]
    PointBehindCamera,

    /// ACPD is only defined for finite ground-truth pose sets.
    #[error("infinite ground-truth set; use IADD")]
    InfiniteGroundTruthSet,

    /// A textureless sphere has no finite equivalent-pose expansion.
    #[error("no finite expansion exists")]
    NoFiniteExpansion,

    /// Equivalent-pose expansion grew past the hard cap.
    #[error("expanded pose set exceeds cap of {0}")]
    ExpansionCapExceeded(usize),

    /// A scene spec referenced no placements.
    #[error("nothing to render")]
    NothingToRender,

    /// An id was referenced that the inputs never declared.
    #[error("unknown object id: {0}")]
    UnknownObject(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
