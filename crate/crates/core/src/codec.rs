//! The common interface every line code implements, plus trace-level
//! helpers that apply a codec to many payloads.

use crate::bitcore::BitString;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// A payload-at-a-time line code.
pub trait LineCodec: Send + Sync {
    fn name(&self) -> String;

    fn encode(&self, payload: &BitString) -> Result<BitString>;

    /// Inverts [`encode`](Self::encode). `payload_bits` is the length of the
    /// original payload; fixed-rate codes only use it as a consistency check.
    fn decode(&self, coded: &BitString, payload_bits: usize) -> Result<BitString>;

    /// `(dataword bits, codeword bits)` when the rate does not depend on
    /// the data.
    fn fixed_rate(&self) -> Option<(usize, usize)> {
        None
    }

    /// Payload length implied by a coded length under a fixed rate.
    fn payload_bits_for(&self, coded_bits: usize) -> Option<usize> {
        let (d, c) = self.fixed_rate()?;
        (coded_bits * d).is_multiple_of(c).then_some(coded_bits * d / c)
    }
}

/// Sends payloads unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl LineCodec for Identity {
    fn name(&self) -> String {
        "identity".into()
    }

    fn encode(&self, payload: &BitString) -> Result<BitString> {
        Ok(payload.clone())
    }

    fn decode(&self, coded: &BitString, _payload_bits: usize) -> Result<BitString> {
        Ok(coded.clone())
    }

    fn fixed_rate(&self) -> Option<(usize, usize)> {
        Some((1, 1))
    }
}

pub(crate) fn check_multiple(len: usize, unit: usize) -> Result<()> {
    if len.is_multiple_of(unit) {
        Ok(())
    } else {
        Err(Error::Framing { len, unit })
    }
}

pub fn encode_trace(codec: &dyn LineCodec, trace: &[BitString], exec: Execution) -> Result<Vec<BitString>> {
    exec.try_map(trace, |i, p| codec.encode(p).map_err(|e| e.at_payload(i)))
}

/// Decodes every payload to `payload_bits` bits.
pub fn decode_trace(
    codec: &dyn LineCodec,
    coded: &[BitString],
    payload_bits: usize,
    exec: Execution,
) -> Result<Vec<BitString>> {
    exec.try_map(coded, |i, c| codec.decode(c, payload_bits).map_err(|e| e.at_payload(i)))
}
