//! Low-energy line codes for on-chip links.
//!
//! Payloads are [`BitString`]s sent NRZI over a parallel link, so every 1 is a
//! wire transition. The codecs here trade rate for fewer 1s; [`metrics`]
//! measures the trade and [`throttle`] switches coding off under load.

pub mod bitcore;
pub mod codec;
pub mod compound;
pub mod error;
pub mod exec;
pub mod fnw;
pub mod mapping;
pub mod metrics;
pub mod prefixcode;
pub mod profiler;
pub mod theory;
pub mod throttle;

pub use bitcore::BitString;
pub use codec::{decode_trace, encode_trace, Identity, LineCodec};
pub use compound::{CompoundCode, CompoundConfig};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fnw::{FlipNWrite, FnwConfig};
pub use mapping::{mapgen, CodebookMap};
pub use prefixcode::{ChunkedPrefixCode, PrefixCode, PrefixCodeTable, TreeCode};
pub use profiler::{profile, DatawordHistogram};
