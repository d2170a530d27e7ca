use alloc::string::String;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
  #[error("illegal CU geometry: {0}")]
  IllegalGeometry(String),
  #[error("split not available: {0}")]
  SplitNotAvailable(String),
  #[error("invalid constraints: {0}")]
  InvalidConstraints(&'static str),
  #[error("enumeration too large: ctu_size {0} exceeds 32")]
  EnumerationTooLarge(u32),
  #[error(
    "invalid map encoding at CU ({x},{y}) {width}x{height}: {reason}"
  )]
  InvalidMapEncoding {
    x: u32,
    y: u32,
    width: u32,
    height: u32,
    reason: &'static str,
  },
  #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
  DimensionMismatch { what: &'static str, expected: usize, found: usize },
  #[error("block rectangle out of bounds: {0}")]
  RectOutOfBounds(String),
  #[error("partial CTU unsupported at ({x},{y})")]
  PartialCtu { x: usize, y: usize },
  #[error("invalid parameter: {0}")]
  InvalidParameter(String),
  #[error("invalid prediction: {0}")]
  InvalidPrediction(String),
  #[error("all-zero confusion table")]
  EmptyConfusion,
  #[error("precision/recall undefined: {0}")]
  DegenerateConfusion(&'static str),
  #[error("no SkipMT decision exists at QT depth {0}")]
  SkipMtDepth(u8),
  #[error("empty decision log")]
  EmptyLog,
  #[error("unseen class: split {split} has zero proportion in MT branch {branch}")]
  UnseenClass { branch: usize, split: &'static str },
  #[error("invalid RD curve: {0}")]
  InvalidCurve(&'static str),
  #[error("nonpositive encoding time {0}")]
  NonPositiveTime(f64),
  #[error("sequence too short: {0}")]
  SequenceTooShort(String),
}

pub type Result<T> = core::result::Result<T, Error>;
