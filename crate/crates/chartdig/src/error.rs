use std::path::PathBuf;

/// Errors produced by the digitization pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode {path} as {format}: {reason}")]
    Decode {
        path: PathBuf,
        format: String,
        reason: String,
    },

    #[error("no ink content")]
    NoInk,

    #[error("no trace")]
    NoTrace,

    #[error("insufficient data: need at least two measured samples")]
    InsufficientData,

    #[error("trim exceeds signal: head {head} + tail {tail} >= length {len}")]
    TrimExceedsSignal { head: usize, tail: usize, len: usize },

    #[error("expected {expected} stitch mark(s) for {position} strip, found {found}")]
    MarkCountMismatch {
        position: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("cannot append empty segment list")]
    NoSegments,

    #[error("dpi mismatch between segments: {a} vs {b}")]
    DpiMismatch { a: u32, b: u32 },

    #[error("waveform exceeds canvas: value {value} outside rows 0..{height}")]
    WaveformOutOfCanvas { value: i32, height: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stage {stage} failed for {file}: {source}")]
    Stage {
        stage: &'static str,
        file: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tag an error with the pipeline stage and input file it came from.
    pub fn at_stage(self, stage: &'static str, file: &str) -> Error {
        Error::Stage { stage, file: file.to_string(), source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
