//! Dataword frequency profiles and seeded synthetic traces drawn from them.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitcore::BitString;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Largest supported dataword length for histograms.
pub const MAX_HISTOGRAM_K: usize = 24;

const PARALLEL_BLOCKS: usize = 64;

/// Frequency count of every `k`-bit dataword value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatawordHistogram {
    k: usize,
    counts: Vec<u64>,
}

impl DatawordHistogram {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_HISTOGRAM_K {
            return Err(Error::invalid(format!("dataword length {k} must be in 1..={MAX_HISTOGRAM_K}")));
        }
        Ok(Self { k, counts: vec![0; 1 << k] })
    }

    pub fn from_counts(k: usize, counts: Vec<u64>) -> Result<Self> {
        let mut h = Self::new(k)?;
        if counts.len() != h.counts.len() {
            return Err(Error::invalid(format!(
                "a {k}-bit histogram needs {} counts, got {}",
                h.counts.len(),
                counts.len()
            )));
        }
        h.counts = counts;
        Ok(h)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, value: usize) -> u64 {
        self.counts[value]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn add(&mut self, value: usize, n: u64) {
        self.counts[value] += n;
    }

    /// Adds every `k`-bit dataword of `payload`. The length must already be
    /// a multiple of `k`.
    fn accumulate(&mut self, payload: &BitString) {
        for i in 0..payload.len() / self.k {
            self.counts[payload.read_bits(i * self.k, self.k) as usize] += 1;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }
}

/// Counts every `k`-bit dataword across all payloads.
pub fn profile(trace: &[BitString], k: usize) -> Result<DatawordHistogram> {
    profile_with(trace, k, Execution::default())
}

pub fn profile_with(trace: &[BitString], k: usize, exec: Execution) -> Result<DatawordHistogram> {
    let empty = DatawordHistogram::new(k)?;
    if let Some((index, p)) = trace.iter().enumerate().find(|(_, p)| p.len() % k != 0) {
        return Err(Error::MalformedTrace { index, len: p.len(), k });
    }
    // One histogram per block rather than per payload: merging costs 2^k.
    let blocks: Vec<&[BitString]> = match exec {
        Execution::Sequential => vec![trace],
        Execution::Parallel => trace.chunks(trace.len().div_ceil(PARALLEL_BLOCKS).max(1)).collect(),
    };
    Ok(exec.map_reduce(
        &blocks,
        || empty.clone(),
        |_, block| {
            let mut h = empty.clone();
            for p in *block {
                h.accumulate(p);
            }
            h
        },
        DatawordHistogram::merge,
    ))
}

/// Draws `payload_count` payloads of `payload_bits` bits whose datawords are
/// i.i.d. samples from the empirical distribution of `h`.
pub fn synthesize_trace(
    h: &DatawordHistogram,
    payload_count: usize,
    payload_bits: usize,
    seed: u64,
) -> Result<Vec<BitString>> {
    if !payload_bits.is_multiple_of(h.k) {
        return Err(Error::invalid(format!(
            "payload size {payload_bits} is not a multiple of the dataword length {}",
            h.k
        )));
    }
    if h.total() == 0 {
        return Err(Error::invalid("cannot sample from an empty histogram"));
    }
    let dist = WeightedIndex::new(&h.counts).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = payload_bits / h.k;
    Ok((0..payload_count)
        .map(|_| {
            let mut p = BitString::with_capacity(payload_bits);
            for _ in 0..words {
                p.push_bits(dist.sample(&mut rng) as u64, h.k);
            }
            p
        })
        .collect())
}

/// Dataword values by descending count; equal counts in ascending value.
pub fn frequency_order(h: &DatawordHistogram) -> Vec<usize> {
    let mut order: Vec<usize> = (0..h.counts.len()).collect();
    order.sort_by_key(|&v| (Reverse(h.counts[v]), v));
    order
}

impl fmt::Display for DatawordHistogram {
    /// `LELCHIST <k>` followed by one `<bits> <count>` line per non-zero
    /// entry in ascending value order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LELCHIST {}", self.k)?;
        for (v, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            writeln!(f, "{} {c}", BitString::from_u64(v as u64, self.k))?;
        }
        Ok(())
    }
}

impl FromStr for DatawordHistogram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const WHAT: &str = "histogram file";
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format(WHAT, "empty file"))?;
        let k = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["LELCHIST", k] => k.parse::<usize>().map_err(|e| Error::format(WHAT, format!("bad k: {e}")))?,
            _ => return Err(Error::format(WHAT, format!("bad header {header:?}"))),
        };
        let mut h = DatawordHistogram::new(k).map_err(|e| Error::format(WHAT, e.to_string()))?;
        let mut prev: Option<usize> = None;
        for (no, line) in lines {
            let at = |reason: String| Error::format(WHAT, format!("line {}: {reason}", no + 1));
            let (bits, count) = match line.split_whitespace().collect::<Vec<_>>()[..] {
                [b, c] => (b, c),
                _ => return Err(at(format!("expected `<bits> <count>`, got {line:?}"))),
            };
            let bits: BitString = bits.parse().map_err(|e: Error| at(e.to_string()))?;
            if bits.len() != k {
                return Err(at(format!("dataword {bits} is not {k} bits")));
            }
            let value = bits.read_bits(0, k) as usize;
            if prev.is_some_and(|p| p >= value) {
                return Err(at("entries must be strictly ascending".into()));
            }
            prev = Some(value);
            let count: u64 = count.parse().map_err(|e| at(format!("bad count: {e}")))?;
            h.counts[value] = count;
        }
        Ok(h)
    }
}
