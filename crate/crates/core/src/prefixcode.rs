//! Tree codes: prefix-free, complete sets of variable-length dataword paths,
//! each mapped to a codeword.
//!
//! Reading input bits walks the path tree from the root; reaching a leaf
//! emits that leaf's codeword. The built-in TC1 and TC2 tables use 4-bit
//! codewords and never emit more 1s than the path they replace.
//!
//! [`ChunkedPrefixCode`] frames a fixed-codeword-length tree code into
//! fixed-size output chunks (TC1' uses 32-bit dataword chunks and 42-bit
//! codeword chunks) so frames can be coded independently.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::bitcore::BitString;
use crate::codec::{check_multiple, LineCodec};
use crate::error::{Error, Result};

/// Longest path or codeword the validator accepts.
pub const MAX_ENTRY_BITS: usize = 64;

/// `(path, codeword)` pairs of a tree code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCodeTable {
    entries: Vec<(BitString, BitString)>,
}

impl PrefixCodeTable {
    pub fn new(entries: Vec<(BitString, BitString)>) -> Self {
        Self { entries }
    }

    /// Builds a table from `(path, codeword)` strings of `0`/`1`.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        pairs.iter().map(|(p, c)| Ok((p.parse()?, c.parse()?))).collect::<Result<Vec<_>>>().map(Self::new)
    }

    pub fn entries(&self) -> &[(BitString, BitString)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The four-leaf Huffman-style example: datawords 00, 11, 01, 10 map to
/// codewords 0, 11, 100, 101.
pub fn huffman_example() -> PrefixCodeTable {
    PrefixCodeTable::from_pairs(&[("00", "0"), ("11", "11"), ("01", "100"), ("10", "101")]).expect("static table")
}

/// TC1: paths of 3 to 5 bits onto 4-bit codewords, so the instantaneous
/// rate stays within [3/4, 5/4]. The all-zero path 000 costs one extra bit.
pub fn builtin_tc1() -> PrefixCodeTable {
    PrefixCodeTable::from_pairs(&[
        ("000", "0000"),
        ("001", "0001"),
        ("010", "0010"),
        ("011", "0011"),
        ("100", "0100"),
        ("101", "0101"),
        ("110", "0110"),
        ("1110", "0111"),
        ("11110", "1011"),
        ("11111", "1101"),
    ])
    .expect("static table")
}

/// TC2: paths of 3 to 6 bits onto 4-bit codewords, rate within [3/4, 6/4].
/// Runs of four 0s pass through at rate 1.
pub fn builtin_tc2() -> PrefixCodeTable {
    PrefixCodeTable::from_pairs(&[
        ("0000", "0000"),
        ("0001", "0001"),
        ("001", "0010"),
        ("010", "0100"),
        ("011", "0011"),
        ("100", "1000"),
        ("101", "0101"),
        ("110", "0110"),
        ("1110", "0111"),
        ("11110", "1011"),
        ("111110", "1101"),
        ("111111", "1110"),
    ])
    .expect("static table")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyPath {
        index: usize,
    },
    EmptyCodeword {
        index: usize,
    },
    TooLong {
        index: usize,
    },
    DuplicatePath {
        first: usize,
        second: usize,
    },
    DuplicateCodeword {
        first: usize,
        second: usize,
    },
    /// Path `prefix` is a proper prefix of path `of`.
    PathNotPrefixFree {
        prefix: usize,
        of: usize,
    },
    CodewordNotPrefixFree {
        prefix: usize,
        of: usize,
    },
    /// Σ 2^-len over the paths differs from 1.
    Kraft {
        sum: f64,
    },
    /// The codeword has more 1s than its path.
    WeightIncrease {
        index: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyPath { index } => write!(f, "entry {index} has an empty path"),
            Violation::EmptyCodeword { index } => write!(f, "entry {index} has an empty codeword"),
            Violation::TooLong { index } => write!(f, "entry {index} exceeds {MAX_ENTRY_BITS} bits"),
            Violation::DuplicatePath { first, second } => {
                write!(f, "entries {first} and {second} share a path")
            }
            Violation::DuplicateCodeword { first, second } => {
                write!(f, "entries {first} and {second} share a codeword")
            }
            Violation::PathNotPrefixFree { prefix, of } => {
                write!(f, "path of entry {prefix} is a prefix of the path of entry {of}")
            }
            Violation::CodewordNotPrefixFree { prefix, of } => {
                write!(f, "codeword of entry {prefix} is a prefix of the codeword of entry {of}")
            }
            Violation::Kraft { sum } => write!(f, "Kraft sum over paths is {sum}, not 1"),
            Violation::WeightIncrease { index } => {
                write!(f, "entry {index} has a codeword heavier than its path")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn is_prefix(a: &BitString, b: &BitString) -> bool {
    a.len() <= b.len() && b.slice(0..a.len()) == *a
}

/// Reports duplicates and prefix collisions among `words` by sorting them
/// lexicographically; any prefix pair is then adjacent in the order.
fn prefix_violations(
    words: &[&BitString],
    dup: impl Fn(usize, usize) -> Violation,
    prefix: impl Fn(usize, usize) -> Violation,
) -> Vec<Violation> {
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by_cached_key(|&i| words[i].to_string());
    order
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (words[w[0]], words[w[1]]);
            if a == b {
                Some(dup(w[0].min(w[1]), w[0].max(w[1])))
            } else if is_prefix(a, b) {
                Some(prefix(w[0], w[1]))
            } else {
                None
            }
        })
        .collect()
}

/// Checks that the paths form a complete prefix-free tree and the codewords
/// are prefix-free and distinct. With `check_weight`, also reports every
/// entry whose codeword is heavier than its path.
pub fn validate(table: &PrefixCodeTable, check_weight: bool) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, (p, c)) in table.entries.iter().enumerate() {
        if p.is_empty() {
            violations.push(Violation::EmptyPath { index: i });
        }
        if c.is_empty() {
            violations.push(Violation::EmptyCodeword { index: i });
        }
        if p.len() > MAX_ENTRY_BITS || c.len() > MAX_ENTRY_BITS {
            violations.push(Violation::TooLong { index: i });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    let paths: Vec<&BitString> = table.entries.iter().map(|(p, _)| p).collect();
    let codewords: Vec<&BitString> = table.entries.iter().map(|(_, c)| c).collect();
    violations.extend(prefix_violations(
        &paths,
        |first, second| Violation::DuplicatePath { first, second },
        |prefix, of| Violation::PathNotPrefixFree { prefix, of },
    ));
    violations.extend(prefix_violations(
        &codewords,
        |first, second| Violation::DuplicateCodeword { first, second },
        |prefix, of| Violation::CodewordNotPrefixFree { prefix, of },
    ));

    // Exact Kraft sum in units of 2^-64.
    let kraft: u128 = paths.iter().map(|p| 1u128 << (MAX_ENTRY_BITS - p.len())).sum();
    if kraft != 1u128 << MAX_ENTRY_BITS {
        violations.push(Violation::Kraft { sum: kraft as f64 / (1u128 << MAX_ENTRY_BITS) as f64 });
    }

    if check_weight {
        violations.extend(
            table
                .entries
                .iter()
                .enumerate()
                .filter(|(_, (p, c))| c.weight() > p.weight())
                .map(|(index, _)| Violation::WeightIncrease { index }),
        );
    }
    ValidationReport { violations }
}

/// Binary trie whose leaves carry table entry indices.
#[derive(Debug, Clone)]
struct Trie {
    children: Vec<[Option<u32>; 2]>,
    leaf: Vec<Option<u32>>,
}

impl Trie {
    fn build<'a>(words: impl Iterator<Item = &'a BitString>) -> Self {
        let mut t = Trie { children: vec![[None; 2]], leaf: vec![None] };
        for (index, w) in words.enumerate() {
            let mut node = 0usize;
            for bit in w.iter() {
                node = match t.children[node][bit as usize] {
                    Some(c) => c as usize,
                    None => {
                        t.children.push([None; 2]);
                        t.leaf.push(None);
                        let c = t.children.len() - 1;
                        t.children[node][bit as usize] = Some(c as u32);
                        c
                    }
                };
            }
            t.leaf[node] = Some(index as u32);
        }
        t
    }

    fn child(&self, node: usize, bit: bool) -> Option<usize> {
        self.children[node][bit as usize].map(|c| c as usize)
    }

    fn leaf(&self, node: usize) -> Option<usize> {
        self.leaf[node].map(|i| i as usize)
    }
}

/// A validated tree code ready for encoding and decoding.
#[derive(Debug, Clone)]
pub struct PrefixCode {
    table: PrefixCodeTable,
    paths: Trie,
    codewords: Trie,
    min_path: usize,
    max_path: usize,
    codeword_len: Option<usize>,
}

impl PrefixCode {
    /// Fails with [`Error::InvalidTable`] unless the table is structurally
    /// valid. The weight guarantee is not required here.
    pub fn new(table: PrefixCodeTable) -> Result<Self> {
        let report = validate(&table, false);
        if !report.is_ok() {
            return Err(Error::InvalidTable(report));
        }
        let lens = || table.entries.iter().map(|(p, _)| p.len());
        let min_path = lens().min().unwrap_or(0);
        let max_path = lens().max().unwrap_or(0);
        let first_cw = table.entries[0].1.len();
        let codeword_len = table.entries.iter().all(|(_, c)| c.len() == first_cw).then_some(first_cw);
        Ok(Self {
            paths: Trie::build(table.entries.iter().map(|(p, _)| p)),
            codewords: Trie::build(table.entries.iter().map(|(_, c)| c)),
            table,
            min_path,
            max_path,
            codeword_len,
        })
    }

    pub fn table(&self) -> &PrefixCodeTable {
        &self.table
    }

    pub fn min_path(&self) -> usize {
        self.min_path
    }

    pub fn max_path(&self) -> usize {
        self.max_path
    }

    /// The common codeword length, if all codewords have the same length.
    pub fn codeword_len(&self) -> Option<usize> {
        self.codeword_len
    }

    /// Walks one path starting at `pos`, stopping at `end`. Returns the
    /// entry index and the position after the path, or the node reached
    /// when `end` cut the path short.
    fn walk(&self, bits: &BitString, mut pos: usize, end: usize) -> std::result::Result<(usize, usize), usize> {
        let mut node = 0;
        loop {
            if let Some(entry) = self.paths.leaf(node) {
                return Ok((entry, pos));
            }
            if pos == end {
                return Err(node);
            }
            node = self.paths.child(node, bits.get(pos)).expect("complete path tree");
            pos += 1;
        }
    }

    /// Follows 0 branches from `node` to the nearest leaf.
    fn zero_extend(&self, mut node: usize) -> usize {
        loop {
            if let Some(entry) = self.paths.leaf(node) {
                return entry;
            }
            node = self.paths.child(node, false).expect("complete path tree");
        }
    }

    fn codeword(&self, entry: usize) -> &BitString {
        &self.table.entries[entry].1
    }

    fn path(&self, entry: usize) -> &BitString {
        &self.table.entries[entry].0
    }

    /// Encodes the unique parse of `bits`. Fails with
    /// [`Error::IncompleteParse`] if trailing bits do not complete a path.
    pub fn stream_encode(&self, bits: &BitString) -> Result<BitString> {
        let mut out = BitString::new();
        let mut pos = 0;
        while pos < bits.len() {
            match self.walk(bits, pos, bits.len()) {
                Ok((entry, next)) => {
                    out.append(self.codeword(entry));
                    pos = next;
                }
                Err(_) => return Err(Error::IncompleteParse { residue: bits.slice(pos..bits.len()) }),
            }
        }
        Ok(out)
    }

    /// As [`stream_encode`](Self::stream_encode), but a trailing partial
    /// path is completed with 0s to the nearest leaf.
    pub fn encode_zero_extended(&self, bits: &BitString) -> BitString {
        let mut out = BitString::new();
        let mut pos = 0;
        while pos < bits.len() {
            match self.walk(bits, pos, bits.len()) {
                Ok((entry, next)) => {
                    out.append(self.codeword(entry));
                    pos = next;
                }
                Err(node) => {
                    out.append(self.codeword(self.zero_extend(node)));
                    pos = bits.len();
                }
            }
        }
        out
    }

    /// Reads one codeword at `pos`; returns the entry and next position.
    fn read_codeword(&self, coded: &BitString, mut pos: usize) -> Result<(usize, usize)> {
        let start = pos;
        let mut node = 0;
        loop {
            if let Some(entry) = self.codewords.leaf(node) {
                return Ok((entry, pos));
            }
            if pos == coded.len() {
                return Err(Error::Decode { offset: start, reason: "truncated codeword".into() });
            }
            node = match self.codewords.child(node, coded.get(pos)) {
                Some(c) => c,
                None => {
                    return Err(Error::Decode {
                        offset: start,
                        reason: format!("unknown codeword {}", coded.slice(start..pos + 1)),
                    })
                }
            };
            pos += 1;
        }
    }

    pub fn stream_decode(&self, coded: &BitString) -> Result<BitString> {
        let mut out = BitString::new();
        let mut pos = 0;
        while pos < coded.len() {
            let (entry, next) = self.read_codeword(coded, pos)?;
            out.append(self.path(entry));
            pos = next;
        }
        Ok(out)
    }
}

pub fn stream_encode(bits: &BitString, code: &PrefixCode) -> Result<BitString> {
    code.stream_encode(bits)
}

pub fn stream_decode(coded: &BitString, code: &PrefixCode) -> Result<BitString> {
    code.stream_decode(coded)
}

/// An unchunked tree code applied per payload. A payload that ends inside a
/// path is completed with 0s; the decoder drops the extension using the
/// known payload length.
#[derive(Debug, Clone)]
pub struct TreeCode {
    name: String,
    code: PrefixCode,
}

impl TreeCode {
    pub fn new(name: impl Into<String>, code: PrefixCode) -> Self {
        Self { name: name.into(), code }
    }

    pub fn tc1() -> Self {
        Self::new("tc1", PrefixCode::new(builtin_tc1()).expect("valid built-in"))
    }

    pub fn tc2() -> Self {
        Self::new("tc2", PrefixCode::new(builtin_tc2()).expect("valid built-in"))
    }

    pub fn code(&self) -> &PrefixCode {
        &self.code
    }
}

impl LineCodec for TreeCode {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn encode(&self, payload: &BitString) -> Result<BitString> {
        Ok(self.code.encode_zero_extended(payload))
    }

    fn decode(&self, coded: &BitString, payload_bits: usize) -> Result<BitString> {
        let mut out = BitString::with_capacity(payload_bits + self.code.max_path);
        let mut pos = 0;
        while pos < coded.len() {
            if out.len() >= payload_bits {
                return Err(Error::CorruptStream(format!(
                    "{} coded bits remain after the payload was complete",
                    coded.len() - pos
                )));
            }
            let (entry, next) = self.code.read_codeword(coded, pos)?;
            out.append(self.code.path(entry));
            pos = next;
        }
        if out.len() < payload_bits {
            return Err(Error::CorruptStream(format!("decoded {} of {payload_bits} bits", out.len())));
        }
        let extension = out.slice(payload_bits..out.len());
        if extension.weight() != 0 {
            return Err(Error::CorruptStream("non-zero path extension past the payload end".into()));
        }
        Ok(out.slice(0..payload_bits))
    }
}

/// Framing of a tree code into fixed-size codeword chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkFrameConfig {
    pub dataword_chunk_bits: usize,
    pub codeword_chunk_bits: usize,
    pub min_path: usize,
    pub codeword_bits: usize,
}

impl ChunkFrameConfig {
    /// TC1' framing: 32 dataword bits per 42-bit codeword chunk.
    pub const TC1_PRIME: ChunkFrameConfig =
        ChunkFrameConfig { dataword_chunk_bits: 32, codeword_chunk_bits: 42, min_path: 3, codeword_bits: 4 };

    /// Worst-case output bits per chunk: every path at minimum length, then
    /// the leftover bits raw.
    pub fn worst_case_chunk_bits(&self) -> usize {
        self.dataword_chunk_bits / self.min_path * self.codeword_bits + self.dataword_chunk_bits % self.min_path
    }
}

impl Default for ChunkFrameConfig {
    fn default() -> Self {
        Self::TC1_PRIME
    }
}

/// A tree code framed into independent fixed-size chunks.
///
/// Within a chunk the encoder parses greedily. Fewer than `min_path`
/// leftover bits are sent raw. If at least `min_path` bits are left but the
/// chunk ends inside a path, the path is completed with 0s and its codeword
/// sent; the decoder truncates that path to the chunk. Each chunk is then
/// zero-padded to `codeword_chunk_bits`.
#[derive(Debug, Clone)]
pub struct ChunkedPrefixCode {
    name: String,
    code: PrefixCode,
    cfg: ChunkFrameConfig,
}

impl ChunkedPrefixCode {
    pub fn new(name: impl Into<String>, code: PrefixCode, cfg: ChunkFrameConfig) -> Result<Self> {
        if cfg.dataword_chunk_bits == 0 || cfg.min_path == 0 {
            return Err(Error::invalid("chunk and minimum path lengths must be positive"));
        }
        if code.codeword_len() != Some(cfg.codeword_bits) {
            return Err(Error::invalid(format!(
                "chunked framing needs every codeword to be {} bits",
                cfg.codeword_bits
            )));
        }
        if code.min_path() != cfg.min_path {
            return Err(Error::invalid(format!(
                "table's shortest path is {} bits, frame expects {}",
                code.min_path(),
                cfg.min_path
            )));
        }
        if cfg.codeword_chunk_bits < cfg.worst_case_chunk_bits() {
            return Err(Error::invalid(format!(
                "{}-bit codeword chunks cannot hold the worst case of {} bits",
                cfg.codeword_chunk_bits,
                cfg.worst_case_chunk_bits()
            )));
        }
        Ok(Self { name: name.into(), code, cfg })
    }

    pub fn tc1_prime() -> Self {
        Self::new("tc1p", PrefixCode::new(builtin_tc1()).expect("valid built-in"), ChunkFrameConfig::TC1_PRIME)
            .expect("TC1' framing is consistent")
    }

    pub fn config(&self) -> &ChunkFrameConfig {
        &self.cfg
    }

    fn encode_chunk(&self, payload: &BitString, start: usize, out: &mut BitString) {
        let end = start + self.cfg.dataword_chunk_bits;
        let frame_start = out.len();
        let mut pos = start;
        while pos < end {
            if end - pos < self.cfg.min_path {
                out.append(&payload.slice(pos..end));
                break;
            }
            match self.code.walk(payload, pos, end) {
                Ok((entry, next)) => {
                    out.append(self.code.codeword(entry));
                    pos = next;
                }
                Err(node) => {
                    out.append(self.code.codeword(self.code.zero_extend(node)));
                    break;
                }
            }
        }
        let used = out.len() - frame_start;
        out.extend_zeros(self.cfg.codeword_chunk_bits - used);
    }

    fn decode_chunk(&self, coded: &BitString, frame: usize, out: &mut BitString) -> Result<()> {
        let chunk = self.cfg.dataword_chunk_bits;
        let frame_start = frame * self.cfg.codeword_chunk_bits;
        let frame_end = frame_start + self.cfg.codeword_chunk_bits;
        let mut pos = frame_start;
        let mut decoded = 0;
        let overrun = || Error::FrameDecode { frame, reason: "frame overrun".into() };
        while decoded < chunk {
            let left = chunk - decoded;
            if left < self.cfg.min_path {
                if pos + left > frame_end {
                    return Err(overrun());
                }
                out.append(&coded.slice(pos..pos + left));
                break;
            }
            if pos + self.cfg.codeword_bits > frame_end {
                return Err(overrun());
            }
            let cw = coded.slice(pos..pos + self.cfg.codeword_bits);
            let (entry, _) = self
                .code
                .read_codeword(&cw, 0)
                .map_err(|_| Error::FrameDecode { frame, reason: format!("unknown codeword {cw}") })?;
            let path = self.code.path(entry);
            let take = path.len().min(left);
            out.append(&path.slice(0..take));
            decoded += take;
            pos += self.cfg.codeword_bits;
        }
        Ok(())
    }
}

impl LineCodec for ChunkedPrefixCode {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn encode(&self, payload: &BitString) -> Result<BitString> {
        check_multiple(payload.len(), self.cfg.dataword_chunk_bits)?;
        let chunks = payload.len() / self.cfg.dataword_chunk_bits;
        let mut out = BitString::with_capacity(chunks * self.cfg.codeword_chunk_bits);
        for c in 0..chunks {
            self.encode_chunk(payload, c * self.cfg.dataword_chunk_bits, &mut out);
        }
        Ok(out)
    }

    fn decode(&self, coded: &BitString, payload_bits: usize) -> Result<BitString> {
        check_multiple(coded.len(), self.cfg.codeword_chunk_bits)?;
        let frames = coded.len() / self.cfg.codeword_chunk_bits;
        let mut out = BitString::with_capacity(frames * self.cfg.dataword_chunk_bits);
        for frame in 0..frames {
            self.decode_chunk(coded, frame, &mut out)?;
        }
        if out.len() != payload_bits {
            return Err(Error::CorruptStream(format!("decoded {} bits, expected {payload_bits}", out.len())));
        }
        Ok(out)
    }

    fn fixed_rate(&self) -> Option<(usize, usize)> {
        Some((self.cfg.dataword_chunk_bits, self.cfg.codeword_chunk_bits))
    }
}

fn tc1_prime_shared() -> &'static ChunkedPrefixCode {
    static TC1P: OnceLock<ChunkedPrefixCode> = OnceLock::new();
    TC1P.get_or_init(ChunkedPrefixCode::tc1_prime)
}

/// TC1' encode with the built-in TC1 table under `cfg` framing.
pub fn tc1_chunked_encode(payload: &BitString, cfg: &ChunkFrameConfig) -> Result<BitString> {
    if *cfg == ChunkFrameConfig::TC1_PRIME {
        return tc1_prime_shared().encode(payload);
    }
    ChunkedPrefixCode::new("tc1p", PrefixCode::new(builtin_tc1())?, *cfg)?.encode(payload)
}

pub fn tc1_chunked_decode(coded: &BitString, cfg: &ChunkFrameConfig) -> Result<BitString> {
    let codec = if *cfg == ChunkFrameConfig::TC1_PRIME {
        tc1_prime_shared().clone()
    } else {
        ChunkedPrefixCode::new("tc1p", PrefixCode::new(builtin_tc1())?, *cfg)?
    };
    check_multiple(coded.len(), cfg.codeword_chunk_bits)?;
    let payload_bits = coded.len() / cfg.codeword_chunk_bits * cfg.dataword_chunk_bits;
    codec.decode(coded, payload_bits)
}

impl fmt::Display for PrefixCodeTable {
    /// `LELCPFX <count>` then one `<path> <codeword>` line per entry.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LELCPFX {}", self.entries.len())?;
        for (p, c) in &self.entries {
            writeln!(f, "{p} {c}")?;
        }
        Ok(())
    }
}

impl FromStr for PrefixCodeTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const WHAT: &str = "prefix code file";
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format(WHAT, "empty file"))?;
        let count = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["LELCPFX", n] => n.parse::<usize>().map_err(|e| Error::format(WHAT, format!("bad entry count: {e}")))?,
            _ => return Err(Error::format(WHAT, format!("bad header {header:?}"))),
        };
        let mut entries = Vec::with_capacity(count);
        for (no, line) in lines {
            let at = |reason: String| Error::format(WHAT, format!("line {}: {reason}", no + 1));
            match line.split_whitespace().collect::<Vec<_>>()[..] {
                [p, c] => entries.push((
                    p.parse().map_err(|e: Error| at(e.to_string()))?,
                    c.parse().map_err(|e: Error| at(e.to_string()))?,
                )),
                _ => return Err(at(format!("expected `<path> <codeword>`, got {line:?}"))),
            }
        }
        if entries.len() != count {
            return Err(Error::format(WHAT, format!("header declares {count} entries, found {}", entries.len())));
        }
        Ok(PrefixCodeTable::new(entries))
    }
}
