//! Binary trace files.
//!
//! Version 1: `LELC`, version byte 1, payload bits (u32 LE), payload count
//! (u32 LE), then each payload in `ceil(bits/8)` bytes, MSB first, zero pad.
//!
//! Version 2 holds payloads of differing lengths: the same header with
//! version byte 2, where the payload-bits field records the uncoded payload
//! size, followed by one u32 LE bit length per payload and then the bodies.

use lelc_core::{BitString, Error, Result};

const MAGIC: &[u8; 4] = b"LELC";
const WHAT: &str = "trace file";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFile {
    /// Length of every payload in a version-1 file; the original payload
    /// length in a version-2 file.
    pub payload_bits: usize,
    pub payloads: Vec<BitString>,
    /// Written as version 2 with a per-payload length index.
    pub indexed: bool,
}

fn bad(reason: impl Into<String>) -> Error {
    Error::Format { what: WHAT, reason: reason.into() }
}

fn to_u32(v: usize, field: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| bad(format!("{field} {v} does not fit in 32 bits")))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, field: &str) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| bad(format!("truncated at byte {} while reading {field}", self.bytes.len())))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, field: &str) -> Result<usize> {
        let b = self.take(4, field)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as usize)
    }
}

impl TraceFile {
    pub fn uniform(payload_bits: usize, payloads: Vec<BitString>) -> Self {
        Self { payload_bits, payloads, indexed: false }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(if self.indexed { 2 } else { 1 });
        out.extend_from_slice(&to_u32(self.payload_bits, "payload size")?.to_le_bytes());
        out.extend_from_slice(&to_u32(self.payloads.len(), "payload count")?.to_le_bytes());
        if self.indexed {
            for p in &self.payloads {
                out.extend_from_slice(&to_u32(p.len(), "payload length")?.to_le_bytes());
            }
        } else if let Some(i) = self.payloads.iter().position(|p| p.len() != self.payload_bits) {
            return Err(Error::Internal(format!(
                "payload {i} has {} bits in a fixed-size {}-bit trace",
                self.payloads[i].len(),
                self.payload_bits
            )));
        }
        for p in &self.payloads {
            out.extend_from_slice(&p.to_bytes());
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4, "magic")? != MAGIC {
            return Err(bad("missing LELC magic"));
        }
        let indexed = match r.take(1, "version")?[0] {
            1 => false,
            2 => true,
            v => return Err(bad(format!("unsupported version {v}"))),
        };
        let payload_bits = r.u32("payload size")?;
        let count = r.u32("payload count")?;
        let lengths = if indexed {
            (0..count).map(|_| r.u32("length index")).collect::<Result<Vec<_>>>()?
        } else {
            if payload_bits == 0 && count > 0 {
                return Err(bad("zero-bit payloads"));
            }
            vec![payload_bits; count]
        };
        let payloads = lengths
            .iter()
            .enumerate()
            .map(|(i, &bits)| {
                let body = r.take(bits.div_ceil(8), "payload body")?;
                BitString::from_bytes(body, bits).map_err(|e| bad(format!("payload {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if r.pos != bytes.len() {
            return Err(bad(format!("{} trailing bytes after the last payload", bytes.len() - r.pos)));
        }
        Ok(Self { payload_bits, payloads, indexed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn version_one_layout() {
        let t = TraceFile::uniform(10, vec![bs("1000000001"), bs("0000000000")]);
        let bytes = t.to_bytes().unwrap();
        assert_eq!(bytes, [b'L', b'E', b'L', b'C', 1, 10, 0, 0, 0, 2, 0, 0, 0, 0x80, 0x40, 0, 0]);
        assert_eq!(TraceFile::from_bytes(&bytes).unwrap(), t);
    }

    #[test]
    fn version_two_round_trip() {
        let t = TraceFile { payload_bits: 8, payloads: vec![bs("101"), bs(""), bs("111111111")], indexed: true };
        let bytes = t.to_bytes().unwrap();
        assert_eq!(bytes[4], 2);
        assert_eq!(&bytes[13..25], [3, 0, 0, 0, 0, 0, 0, 0, 9, 0, 0, 0]);
        assert_eq!(TraceFile::from_bytes(&bytes).unwrap(), t);
    }

    #[test]
    fn rejects_malformed() {
        let good = TraceFile::uniform(10, vec![bs("1000000001")]).to_bytes().unwrap();
        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        let mut bad_version = good.clone();
        bad_version[4] = 7;
        let mut bad_pad = good.clone();
        *bad_pad.last_mut().unwrap() |= 1;
        let mut trailing = good.clone();
        trailing.push(0);
        for bytes in [&bad_magic, &bad_version, &bad_pad, &trailing, &good[..good.len() - 1].to_vec()] {
            assert!(matches!(TraceFile::from_bytes(bytes), Err(Error::Format { .. })));
        }
    }
}
