use std::io;

/// Crate-wide error type. Variants map onto the CLI exit-code contract:
/// parse/io problems exit 3, config or internal invariant breaches exit 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("invalid camera: {0}")]
    InvalidCamera(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("resolution mismatch: {0}x{1} vs {2}x{3}")]
    ResolutionMismatch(u32, u32, u32, u32),

    #[error("splats not sorted by depth (index {0})")]
    UnsortedInput(usize),

    #[error("NaN depth at splat {0}")]
    NanDepth(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(path: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            detail: detail.into(),
        }
    }

    /// Exit code class for the CLI: 3 for i/o and parse failures,
    /// 4 for invariant or internal errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse { .. } => 3,
            Error::InvalidScene(_)
            | Error::InvalidCamera(_)
            | Error::InvalidConfig(_)
            | Error::ResolutionMismatch(..)
            | Error::UnsortedInput(_)
            | Error::NanDepth(_)
            | Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
