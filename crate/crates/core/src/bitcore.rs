//! Bit buffers and NRZI wire-state evolution.
//!
//! Bit 0 of a [`BitString`] is the first bit transmitted. When converting
//! to or from bytes, the most significant bit of each byte comes first.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// An ordered, length-tagged sequence of bits.
///
/// Storage is packed MSB-first into `u64` words; bits past `len` are kept
/// zero so that equality and weight can work word-at-a-time.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self { words: Vec::with_capacity(bits.div_ceil(WORD)), len: 0 }
    }

    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(WORD)], len }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        let mut b = Self::with_capacity(width);
        b.push_bits(value, width);
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// # Panics
    /// If `i >= self.len()`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (WORD - 1 - i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (WORD - 1 - i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.push_bits(bit as u64, 1);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: usize) {
        assert!(width <= WORD, "push_bits width {width} exceeds 64");
        if width == 0 {
            return;
        }
        let v = if width == WORD { value } else { value & ((1u64 << width) - 1) };
        let off = self.len % WORD;
        if off == 0 {
            self.words.push(v << (WORD - width));
        } else {
            let free = WORD - off;
            let last = self.words.last_mut().expect("non-empty when offset > 0");
            if width <= free {
                *last |= v << (free - width);
            } else {
                *last |= v >> (width - free);
                self.words.push(v << (WORD - (width - free)));
            }
        }
        self.len += width;
    }

    /// Reads `width <= 64` bits starting at `start` as an unsigned integer.
    pub fn read_bits(&self, start: usize, width: usize) -> u64 {
        assert!(width <= WORD, "read_bits width {width} exceeds 64");
        assert!(start + width <= self.len, "read of {width} bits at {start} overruns length {}", self.len);
        if width == 0 {
            return 0;
        }
        let w = start / WORD;
        let off = start % WORD;
        let mut v = self.words[w] << off;
        if off + width > WORD {
            v |= self.words[w + 1] >> (WORD - off);
        }
        v >> (WORD - width)
    }

    pub fn append(&mut self, other: &BitString) {
        if self.len.is_multiple_of(WORD) {
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            return;
        }
        let mut pos = 0;
        while pos < other.len {
            let width = (other.len - pos).min(WORD);
            self.push_bits(other.read_bits(pos, width), width);
            pos += width;
        }
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = Self::with_capacity(self.len + other.len);
        out.append(self);
        out.append(other);
        out
    }

    pub fn slice(&self, range: Range<usize>) -> BitString {
        assert!(
            range.start <= range.end && range.end <= self.len,
            "slice {range:?} out of range for length {}",
            self.len
        );
        let mut out = Self::with_capacity(range.len());
        let mut pos = range.start;
        while pos < range.end {
            let width = (range.end - pos).min(WORD);
            out.push_bits(self.read_bits(pos, width), width);
            pos += width;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Number of 1 bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> BitString {
        let mut out = Self { words: self.words.iter().map(|w| !w).collect(), len: self.len };
        out.clear_tail();
        out
    }

    /// Zero-extends to the next multiple of `unit` bits.
    pub fn pad_to_multiple(&mut self, unit: usize) {
        let rem = self.len % unit;
        if rem != 0 {
            self.extend_zeros(unit - rem);
        }
    }

    pub fn extend_zeros(&mut self, count: usize) {
        self.len += count;
        self.words.resize(self.len.div_ceil(WORD), 0);
    }

    /// Splits into `k`-bit chunks plus a remainder shorter than `k`.
    pub fn chunk(&self, k: usize) -> Result<(Vec<BitString>, BitString)> {
        if k == 0 {
            return Err(Error::invalid("chunk size must be at least 1"));
        }
        let full = self.len / k;
        let chunks = (0..full).map(|i| self.slice(i * k..(i + 1) * k)).collect();
        Ok((chunks, self.slice(full * k..self.len)))
    }

    /// MSB-first bytes; the final byte is zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len.div_ceil(8);
        self.words.iter().flat_map(|w| w.to_be_bytes()).take(n).collect()
    }

    /// Inverse of [`to_bytes`](Self::to_bytes). Requires exactly
    /// `ceil(bit_len / 8)` bytes with zero padding bits.
    pub fn from_bytes(bytes: &[u8], bit_len: usize) -> Result<BitString> {
        if bytes.len() != bit_len.div_ceil(8) {
            return Err(Error::format(
                "bit buffer",
                format!("{} bytes cannot hold exactly {bit_len} bits", bytes.len()),
            ));
        }
        let mut words: Vec<u64> = bytes
            .chunks(8)
            .map(|c| {
                let mut buf = [0u8; 8];
                buf[..c.len()].copy_from_slice(c);
                u64::from_be_bytes(buf)
            })
            .collect();
        words.truncate(bit_len.div_ceil(WORD));
        let out = BitString { words, len: bit_len };
        let mut check = out.clone();
        check.clear_tail();
        if check != out {
            return Err(Error::format("bit buffer", "non-zero padding bits"));
        }
        Ok(out)
    }

    fn clear_tail(&mut self) {
        let off = self.len % WORD;
        if off != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 << (WORD - off);
            }
        }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitString::new();
        for bit in iter {
            b.push(bit);
        }
        b
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses a string of `0`/`1` characters. The empty string is the empty
    /// bit string.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::format("bit string", format!("unexpected character {other:?}"))),
            })
            .collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("BitString(ε)")
        } else {
            write!(f, "BitString({self})")
        }
    }
}

/// Number of 1 bits in `b`.
pub fn weight(b: &BitString) -> usize {
    b.weight()
}

/// Per-wire activity in one NRZI time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transition {
    Idle,
    Rise,
    Fall,
}

impl Transition {
    pub fn is_active(self) -> bool {
        self != Transition::Idle
    }
}

/// Running NRZI state of a bundle of wires. A transmitted 1 toggles the
/// wire, a 0 holds it.
#[derive(Debug, Clone)]
pub struct NrziLine {
    state: BitString,
}

impl NrziLine {
    pub fn new(wire_count: usize, initial_high: bool) -> Self {
        let state = if initial_high { BitString::zeros(wire_count).complement() } else { BitString::zeros(wire_count) };
        Self { state }
    }

    pub fn wire_count(&self) -> usize {
        self.state.len()
    }

    pub fn state(&self) -> &BitString {
        &self.state
    }

    /// Applies one flit, writing each wire's transition into `out`.
    pub fn step_into(&mut self, flit: &BitString, out: &mut Vec<Transition>) -> Result<()> {
        if flit.len() != self.wire_count() {
            return Err(Error::invalid(format!(
                "flit has {} bits but the link has {} wires",
                flit.len(),
                self.wire_count()
            )));
        }
        out.clear();
        for w in 0..flit.len() {
            if flit.get(w) {
                let was_high = self.state.get(w);
                self.state.set(w, !was_high);
                out.push(if was_high { Transition::Fall } else { Transition::Rise });
            } else {
                out.push(Transition::Idle);
            }
        }
        Ok(())
    }

    pub fn step(&mut self, flit: &BitString) -> Result<Vec<Transition>> {
        let mut out = Vec::with_capacity(flit.len());
        self.step_into(flit, &mut out)?;
        Ok(out)
    }
}

/// Wire levels and transitions over a sequence of flits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireStateTimeline {
    pub wire_count: usize,
    /// `states[t]` holds the level of every wire before step `t`; the final
    /// entry is the level after the last flit.
    pub states: Vec<BitString>,
    /// `transitions[t][w]` is the activity of wire `w` during step `t`.
    pub transitions: Vec<Vec<Transition>>,
}

impl WireStateTimeline {
    pub fn steps(&self) -> usize {
        self.transitions.len()
    }

    pub fn total_transitions(&self) -> usize {
        self.transitions.iter().flatten().filter(|t| t.is_active()).count()
    }
}

/// Evolves `wire_count` NRZI wires through `flits`, one flit per time step.
pub fn nrzi_evolve(flits: &[BitString], wire_count: usize, initial_high: bool) -> Result<WireStateTimeline> {
    let mut line = NrziLine::new(wire_count, initial_high);
    let mut states = Vec::with_capacity(flits.len() + 1);
    let mut transitions = Vec::with_capacity(flits.len());
    states.push(line.state().clone());
    for flit in flits {
        transitions.push(line.step(flit)?);
        states.push(line.state().clone());
    }
    Ok(WireStateTimeline { wire_count, states, transitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(&bs("0000")), 0);
        assert_eq!(weight(&bs("1111")), 4);
        assert_eq!(weight(&bs("0110")), 2);
    }

    #[test]
    fn chunk_examples() {
        let (c, r) = bs("010111").chunk(3).unwrap();
        assert_eq!(c, vec![bs("010"), bs("111")]);
        assert!(r.is_empty());

        let (c, r) = bs("01011").chunk(3).unwrap();
        assert_eq!(c, vec![bs("010")]);
        assert_eq!(r, bs("11"));

        let (c, r) = BitString::new().chunk(8).unwrap();
        assert!(c.is_empty() && r.is_empty());
    }

    #[test]
    fn chunk_rejects_zero() {
        assert!(matches!(bs("01").chunk(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn nrzi_single_and_double_toggle() {
        let t = nrzi_evolve(&[bs("1")], 1, false).unwrap();
        assert_eq!(t.transitions, vec![vec![Transition::Rise]]);

        let t = nrzi_evolve(&[bs("1"), bs("1")], 1, false).unwrap();
        assert_eq!(t.transitions, vec![vec![Transition::Rise], vec![Transition::Fall]]);
        assert_eq!(t.states.last().unwrap(), &bs("0"));
    }

    #[test]
    fn nrzi_all_zero_stream() {
        let t = nrzi_evolve(&[bs("00"), bs("00")], 2, false).unwrap();
        assert_eq!(t.total_transitions(), 0);
        assert!(t.states.iter().all(|s| *s == bs("00")));
    }

    #[test]
    fn nrzi_rejects_wrong_width() {
        assert!(nrzi_evolve(&[bs("101")], 2, false).is_err());
    }

    #[test]
    fn bytes_are_msb_first() {
        let b = bs("1000000001");
        assert_eq!(b.to_bytes(), vec![0x80, 0x40]);
        assert_eq!(BitString::from_bytes(&[0x80, 0x40], 10).unwrap(), b);
        assert!(BitString::from_bytes(&[0x80, 0x41], 10).is_err());
        assert!(BitString::from_bytes(&[0x80], 10).is_err());
    }

    #[test]
    fn complement_keeps_tail_clear() {
        let b = bs("101");
        assert_eq!(b.complement(), bs("010"));
        assert_eq!(b.complement().weight(), 1);
    }

    #[test]
    fn display_roundtrip() {
        let s = "0110100111010101000111100001011010101010101111000010101010100111011";
        assert_eq!(bs(s).to_string(), s);
        assert!("01x".parse::<BitString>().is_err());
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(any::<bool>(), 0..max).prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn chunk_concat_roundtrip(b in arb_bits(300), k in 1usize..=64) {
            let (chunks, rem) = b.chunk(k).unwrap();
            prop_assert!(rem.len() < k);
            let mut joined = BitString::new();
            for c in &chunks {
                prop_assert_eq!(c.len(), k);
                joined.append(c);
            }
            joined.append(&rem);
            prop_assert_eq!(joined, b);
        }

        #[test]
        fn weight_is_additive(a in arb_bits(200), b in arb_bits(200)) {
            prop_assert_eq!(a.concat(&b).weight(), a.weight() + b.weight());
        }

        #[test]
        fn concat_is_associative(a in arb_bits(100), b in arb_bits(100), c in arb_bits(100)) {
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(a.concat(&BitString::new()), a.clone());
            prop_assert_eq!(BitString::new().concat(&a), a);
        }

        #[test]
        fn transitions_equal_total_weight(bits in prop::collection::vec(any::<bool>(), 0..240), wires in 1usize..12) {
            let flat: BitString = bits.into_iter().collect();
            let (flits, _) = flat.chunk(wires).unwrap();
            let t = nrzi_evolve(&flits, wires, false).unwrap();
            let total: usize = flits.iter().map(BitString::weight).sum();
            prop_assert_eq!(t.total_transitions(), total);
            for (step, flit) in flits.iter().enumerate() {
                for w in 0..wires {
                    let expect = t.states[step].get(w) ^ flit.get(w);
                    prop_assert_eq!(t.states[step + 1].get(w), expect);
                }
            }
        }

        #[test]
        fn read_bits_matches_get(b in arb_bits(200), start in 0usize..200, width in 0usize..=64) {
            prop_assume!(start + width <= b.len());
            let mut expect = 0u64;
            for i in start..start + width {
                expect = (expect << 1) | b.get(i) as u64;
            }
            prop_assert_eq!(b.read_bits(start, width), expect);
        }
    }
}
