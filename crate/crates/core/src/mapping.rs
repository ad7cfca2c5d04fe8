//! Mapping codes: a lookup table from every `k`-bit dataword to a distinct
//! `n`-bit codeword, assigned so that frequent datawords get light
//! codewords.

use std::fmt;
use std::str::FromStr;

use crate::bitcore::BitString;
use crate::codec::{check_multiple, LineCodec};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::reduction_pct;
use crate::profiler::{frequency_order, DatawordHistogram};

pub const MAX_MAP_K: usize = 16;
pub const MAX_MAP_N: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodebookMap {
    k: usize,
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

const UNUSED: u32 = u32::MAX;

impl CodebookMap {
    /// Builds a map from the codeword of each dataword value, in value
    /// order. Codewords must be distinct and fit in `n` bits.
    pub fn new(k: usize, n: usize, table: Vec<u32>) -> Result<Self> {
        if k == 0 || k > MAX_MAP_K || n < k || n > MAX_MAP_N {
            return Err(Error::invalid(format!(
                "map geometry k={k}, n={n} must satisfy 1 <= k <= {MAX_MAP_K} and k <= n <= {MAX_MAP_N}"
            )));
        }
        if table.len() != 1 << k {
            return Err(Error::invalid(format!("a {k}-bit map needs {} entries, got {}", 1 << k, table.len())));
        }
        let mut inverse = vec![UNUSED; 1 << n];
        for (d, &c) in table.iter().enumerate() {
            if (c as usize) >= inverse.len() {
                return Err(Error::invalid(format!("codeword {c} for dataword {d} does not fit in {n} bits")));
            }
            if inverse[c as usize] != UNUSED {
                return Err(Error::invalid(format!(
                    "datawords {} and {d} share codeword {}",
                    inverse[c as usize],
                    BitString::from_u64(c as u64, n)
                )));
            }
            inverse[c as usize] = d as u32;
        }
        Ok(Self { k, n, table, inverse })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codeword(&self, dataword: usize) -> u32 {
        self.table[dataword]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn dataword(&self, codeword: usize) -> Option<u32> {
        self.inverse.get(codeword).copied().filter(|&d| d != UNUSED)
    }

    /// True when no codeword has more 1s than its dataword.
    pub fn is_weight_monotone(&self) -> bool {
        self.weight_increasing_entries() == 0
    }

    pub fn weight_increasing_entries(&self) -> usize {
        self.table.iter().enumerate().filter(|(d, &c)| c.count_ones() > (*d as u32).count_ones()).count()
    }
}

/// Every `n`-bit value ordered by weight, then numeric value.
fn candidates_by_weight(n: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..1u32 << n).collect();
    all.sort_by_key(|&c| (c.count_ones(), c));
    all
}

/// Generates a codebook from a dataword profile.
///
/// Datawords are visited in descending frequency. Without the constraint,
/// each takes the next codeword in (weight, value) order. With
/// `weight_monotone`, each takes the first unused codeword, in the same
/// order, that is no heavier than the dataword and still leaves a valid
/// assignment for every remaining dataword (for all `w`, the unused
/// codewords of weight `<= w` must outnumber the unassigned datawords of
/// weight `<= w`).
pub fn mapgen(h: &DatawordHistogram, n: usize, weight_monotone: bool) -> Result<CodebookMap> {
    let k = h.k();
    if k > MAX_MAP_K || n < k || n > MAX_MAP_N {
        return Err(Error::invalid(format!("cannot build a map with k={k}, n={n}")));
    }
    if weight_monotone && n == k {
        return Err(Error::invalid("a rate-1 map cannot keep every codeword at or below its dataword weight"));
    }
    let order = frequency_order(h);
    let candidates = candidates_by_weight(n);
    let mut table = vec![0u32; 1 << k];

    if !weight_monotone {
        for (d, &c) in order.iter().zip(&candidates) {
            table[*d] = c;
        }
        return CodebookMap::new(k, n, table);
    }

    // free[w]: unused codewords of weight w; pending[w]: unassigned
    // datawords of weight w. Only weights 0..=k matter for feasibility.
    let mut free = vec![0i64; k + 1];
    for &c in &candidates {
        let w = c.count_ones() as usize;
        if w <= k {
            free[w] += 1;
        }
    }
    let mut pending = vec![0i64; k + 1];
    for d in 0..1u32 << k {
        pending[d.count_ones() as usize] += 1;
    }
    let feasible = |free: &[i64], pending: &[i64]| {
        let (mut f, mut p) = (0, 0);
        (0..=k).all(|w| {
            f += free[w];
            p += pending[w];
            f >= p
        })
    };
    debug_assert!(feasible(&free, &pending));

    let mut used = vec![false; candidates.len()];
    for &d in &order {
        let wd = (d as u32).count_ones() as usize;
        pending[wd] -= 1;
        let mut chosen = None;
        for (slot, &c) in candidates.iter().enumerate() {
            let wc = c.count_ones() as usize;
            if wc > wd {
                break;
            }
            if used[slot] {
                continue;
            }
            free[wc] -= 1;
            if feasible(&free, &pending) {
                chosen = Some(slot);
                break;
            }
            free[wc] += 1;
        }
        let slot =
            chosen.ok_or_else(|| Error::Internal(format!("no feasible codeword for dataword {d} (k={k}, n={n})")))?;
        used[slot] = true;
        table[d] = candidates[slot];
    }
    CodebookMap::new(k, n, table)
}

pub fn map_encode(payload: &BitString, m: &CodebookMap) -> Result<BitString> {
    check_multiple(payload.len(), m.k)?;
    let words = payload.len() / m.k;
    let mut out = BitString::with_capacity(words * m.n);
    for i in 0..words {
        let d = payload.read_bits(i * m.k, m.k) as usize;
        out.push_bits(m.table[d] as u64, m.n);
    }
    Ok(out)
}

pub fn map_decode(coded: &BitString, m: &CodebookMap) -> Result<BitString> {
    check_multiple(coded.len(), m.n)?;
    let words = coded.len() / m.n;
    let mut out = BitString::with_capacity(words * m.k);
    for i in 0..words {
        let c = coded.read_bits(i * m.n, m.n) as usize;
        let d = m.dataword(c).ok_or_else(|| Error::Decode {
            offset: i * m.n,
            reason: format!("codeword {} is not in the map", BitString::from_u64(c as u64, m.n)),
        })?;
        out.push_bits(d as u64, m.k);
    }
    Ok(out)
}

/// Sum of dataword and codeword weights over a trace, as `(raw, coded)`.
fn trace_ones(m: &CodebookMap, trace: &[BitString]) -> Result<(u64, u64)> {
    let mut raw = 0u64;
    let mut coded = 0u64;
    for (i, p) in trace.iter().enumerate() {
        if p.len() % m.k != 0 {
            return Err(Error::MalformedTrace { index: i, len: p.len(), k: m.k });
        }
        for w in 0..p.len() / m.k {
            let d = p.read_bits(w * m.k, m.k) as usize;
            raw += d.count_ones() as u64;
            coded += m.table[d].count_ones() as u64;
        }
    }
    Ok((raw, coded))
}

/// Energy reduction of every map on every trace: entry `[i][j]` is the
/// percentage reduction of map `j` on trace `i`, or `None` when the trace
/// has no 1s.
pub fn cross_evaluate(maps: &[CodebookMap], traces: &[Vec<BitString>]) -> Result<Vec<Vec<Option<f64>>>> {
    cross_evaluate_with(maps, traces, Execution::default())
}

pub fn cross_evaluate_with(
    maps: &[CodebookMap],
    traces: &[Vec<BitString>],
    exec: Execution,
) -> Result<Vec<Vec<Option<f64>>>> {
    if let Some(first) = maps.first() {
        if maps.iter().any(|m| m.k != first.k || m.n != first.n) {
            return Err(Error::invalid("cross evaluation needs maps of one geometry"));
        }
    }
    exec.try_map(traces, |_, trace| {
        maps.iter().map(|m| trace_ones(m, trace).map(|(raw, coded)| reduction_pct(raw, coded))).collect()
    })
}

impl LineCodec for CodebookMap {
    fn name(&self) -> String {
        format!("map:{}->{}", self.k, self.n)
    }

    fn encode(&self, payload: &BitString) -> Result<BitString> {
        map_encode(payload, self)
    }

    fn decode(&self, coded: &BitString, payload_bits: usize) -> Result<BitString> {
        let out = map_decode(coded, self)?;
        if out.len() != payload_bits {
            return Err(Error::CorruptStream(format!("decoded {} bits, expected {payload_bits}", out.len())));
        }
        Ok(out)
    }

    fn fixed_rate(&self) -> Option<(usize, usize)> {
        Some((self.k, self.n))
    }
}

impl fmt::Display for CodebookMap {
    /// `LELCMAP <k> <n>` then the codeword of each dataword value in order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LELCMAP {} {}", self.k, self.n)?;
        for &c in &self.table {
            writeln!(f, "{}", BitString::from_u64(c as u64, self.n))?;
        }
        Ok(())
    }
}

impl FromStr for CodebookMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const WHAT: &str = "map file";
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format(WHAT, "empty file"))?;
        let (k, n) = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["LELCMAP", k, n] => (
                k.parse::<usize>().map_err(|e| Error::format(WHAT, format!("bad k: {e}")))?,
                n.parse::<usize>().map_err(|e| Error::format(WHAT, format!("bad n: {e}")))?,
            ),
            _ => return Err(Error::format(WHAT, format!("bad header {header:?}"))),
        };
        if k == 0 || k > MAX_MAP_K || n < k || n > MAX_MAP_N {
            return Err(Error::format(WHAT, format!("unsupported geometry k={k}, n={n}")));
        }
        let mut table = Vec::with_capacity(1 << k);
        for (no, line) in lines {
            let bits: BitString =
                line.trim().parse().map_err(|e: Error| Error::format(WHAT, format!("line {}: {e}", no + 1)))?;
            if bits.len() != n {
                return Err(Error::format(WHAT, format!("line {}: codeword is not {n} bits", no + 1)));
            }
            table.push(bits.read_bits(0, n) as u32);
        }
        CodebookMap::new(k, n, table).map_err(|e| Error::format(WHAT, e.to_string()))
    }
}
