//! Compound code: zero-word compression followed by an 8→9 mapping code.
//!
//! Stage 1 replaces each all-zero `k_zero`-bit word by `1` and prefixes
//! every other word with `0`, so intermediate codewords have only two
//! lengths. Stage 2 zero-pads the intermediate stream to a byte multiple
//! and maps each byte through the inner codebook.

use crate::bitcore::BitString;
use crate::codec::{check_multiple, LineCodec};
use crate::error::{Error, Result};
use crate::mapping::{map_decode, map_encode, mapgen, CodebookMap};
use crate::profiler::{profile, DatawordHistogram};

pub const INNER_K: usize = 8;
pub const INNER_N: usize = 9;
pub const SUPPORTED_K_ZERO: [usize; 2] = [16, 32];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompoundConfig {
    k_zero: usize,
    inner_map: CodebookMap,
}

impl CompoundConfig {
    pub fn new(k_zero: usize, inner_map: CodebookMap) -> Result<Self> {
        if !SUPPORTED_K_ZERO.contains(&k_zero) {
            return Err(Error::invalid(format!("compound word size must be 16 or 32, got {k_zero}")));
        }
        if inner_map.k() != INNER_K || inner_map.n() != INNER_N {
            return Err(Error::invalid(format!(
                "compound inner map must be {INNER_K}->{INNER_N}, got {}->{}",
                inner_map.k(),
                inner_map.n()
            )));
        }
        Ok(Self { k_zero, inner_map })
    }

    pub fn k_zero(&self) -> usize {
        self.k_zero
    }

    pub fn inner_map(&self) -> &CodebookMap {
        &self.inner_map
    }
}

/// Stage-1 output: `1` per all-zero word, `0` + word otherwise. Not padded.
pub fn compress_zero_words(payload: &BitString, k_zero: usize) -> Result<BitString> {
    check_multiple(payload.len(), k_zero)?;
    let mut out = BitString::with_capacity(payload.len() + payload.len() / k_zero);
    for i in 0..payload.len() / k_zero {
        let word = payload.slice(i * k_zero..(i + 1) * k_zero);
        if word.weight() == 0 {
            out.push(true);
        } else {
            out.push(false);
            out.append(&word);
        }
    }
    Ok(out)
}

/// Histogram of stage-1 bytes across a trace, for building an inner map
/// tuned to that trace.
pub fn intermediate_histogram(trace: &[BitString], k_zero: usize) -> Result<DatawordHistogram> {
    let stage1 = trace
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut s = compress_zero_words(p, k_zero).map_err(|e| e.at_payload(i))?;
            s.pad_to_multiple(INNER_K);
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    profile(&stage1, INNER_K)
}

/// Inner 8→9 map built from the stage-1 statistics of `trace`.
pub fn inner_map_for(trace: &[BitString], k_zero: usize, weight_monotone: bool) -> Result<CodebookMap> {
    mapgen(&intermediate_histogram(trace, k_zero)?, INNER_N, weight_monotone)
}

pub fn compound_encode(payload: &BitString, cfg: &CompoundConfig) -> Result<BitString> {
    let mut stage1 = compress_zero_words(payload, cfg.k_zero)?;
    stage1.pad_to_multiple(INNER_K);
    map_encode(&stage1, &cfg.inner_map)
}

/// Decodes exactly `payload_bits` bits; pad bits after the last word are
/// never read.
pub fn compound_decode(coded: &BitString, cfg: &CompoundConfig, payload_bits: usize) -> Result<BitString> {
    check_multiple(payload_bits, cfg.k_zero)?;
    let stage1 = map_decode(coded, &cfg.inner_map)?;
    let k = cfg.k_zero;
    let mut out = BitString::with_capacity(payload_bits);
    let mut pos = 0;
    while out.len() < payload_bits {
        if pos >= stage1.len() {
            return Err(Error::CorruptStream(format!(
                "intermediate stream ended after {} of {payload_bits} bits",
                out.len()
            )));
        }
        if stage1.get(pos) {
            out.extend_zeros(k);
            pos += 1;
        } else {
            if pos + 1 + k > stage1.len() {
                return Err(Error::CorruptStream(format!("word at intermediate bit {pos} is truncated")));
            }
            out.append(&stage1.slice(pos + 1..pos + 1 + k));
            pos += 1 + k;
        }
    }
    Ok(out)
}

/// The compound code as a [`LineCodec`].
#[derive(Debug, Clone)]
pub struct CompoundCode(pub CompoundConfig);

impl LineCodec for CompoundCode {
    fn name(&self) -> String {
        format!("compound:{}", self.0.k_zero)
    }

    fn encode(&self, payload: &BitString) -> Result<BitString> {
        compound_encode(payload, &self.0)
    }

    fn decode(&self, coded: &BitString, payload_bits: usize) -> Result<BitString> {
        compound_decode(coded, &self.0, payload_bits)
    }
}
