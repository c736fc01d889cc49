use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A structured-text document (score file or manifest) is malformed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A note's absolute pitch falls outside the 88-key range 21..=108.
    #[error("line {line}: pitch {pitch} outside playable range 21..=108")]
    PitchRange { line: usize, pitch: i64 },

    /// A note extends past the declared number of time steps.
    #[error("line {line}: note (onset {onset}, duration {duration}) exceeds {num_steps} time steps")]
    NoteBounds {
        line: usize,
        onset: usize,
        duration: usize,
        num_steps: usize,
    },

    /// An operation was called with arguments outside its contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A domain value violates a documented invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An external compressor invocation failed.
    #[error("backend '{name}' failed: {message}")]
    Backend { name: String, message: String },

    /// The configured size offset does not fit the measured size.
    #[error("offset {offset} is not smaller than measured size {size}")]
    Offset { offset: usize, size: usize },

    /// A persisted index file failed validation.
    #[error("corrupt index: {0}")]
    CorruptIndex(String),
}

impl Error {
    /// True for failures of an external compressor process, as opposed to
    /// bad input. The CLI maps these to a distinct exit status.
    pub fn is_backend_failure(&self) -> bool {
        matches!(self, Error::Backend { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
