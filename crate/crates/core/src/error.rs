use thiserror::Error;

use crate::bitcore::BitString;
use crate::prefixcode::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input length does not fit the codec's dataword/codeword grouping.
    #[error("framing error: length {len} is not a multiple of {unit}")]
    Framing { len: usize, unit: usize },

    #[error("malformed trace: payload {index} has {len} bits, not a multiple of {k}")]
    MalformedTrace { index: usize, len: usize, k: usize },

    #[error("incomplete parse: {} trailing bits ({residue}) do not complete a path", residue.len())]
    IncompleteParse { residue: BitString },

    #[error("decode error at bit {offset}: {reason}")]
    Decode { offset: usize, reason: String },

    #[error("decode error in frame {frame}: {reason}")]
    FrameDecode { frame: usize, reason: String },

    #[error("corrupt stream: {0}")]
    CorruptStream(String),

    #[error("invalid prefix code table: {0}")]
    InvalidTable(ValidationReport),

    #[error("payload {index}: {source}")]
    Payload { index: usize, source: Box<Error> },

    #[error("payload {index}: decoded output does not match the original")]
    RoundTrip { index: usize },

    #[error("{what}: {reason}")]
    Format { what: &'static str, reason: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn format(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Format { what, reason: reason.into() }
    }

    /// Tags an error with the index of the payload that produced it.
    pub fn at_payload(self, index: usize) -> Self {
        match self {
            e @ Error::Payload { .. } | e @ Error::RoundTrip { .. } => e,
            e => Error::Payload { index, source: Box::new(e) },
        }
    }

    /// True for errors raised while coding data, as opposed to bad arguments
    /// or malformed files.
    pub fn is_codec_error(&self) -> bool {
        match self {
            Error::Framing { .. }
            | Error::IncompleteParse { .. }
            | Error::Decode { .. }
            | Error::FrameDecode { .. }
            | Error::CorruptStream(_)
            | Error::RoundTrip { .. } => true,
            Error::Payload { source, .. } => source.is_codec_error(),
            _ => false,
        }
    }
}
