//! Flip-N-Write and its two-level extension.
//!
//! Level 1: each `k`-bit dataword is sent as-is followed by a 0 flag, or
//! complemented followed by a 1 flag when its weight exceeds `⌊k/2⌋`.
//!
//! Level 2: the `f` flags of a group of `f` codewords are themselves
//! Flip-N-Write coded. The group is laid out as its `f` level-1 codewords
//! (flags possibly complemented in place) followed by one group flag.

use crate::bitcore::BitString;
use crate::codec::{check_multiple, LineCodec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FnwConfig {
    k: usize,
    levels: u8,
    f: usize,
}

impl FnwConfig {
    pub fn single(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("Flip-N-Write dataword length must be at least 1"));
        }
        Ok(Self { k, levels: 1, f: 0 })
    }

    pub fn two_level(k: usize, f: usize) -> Result<Self> {
        if k == 0 || f == 0 {
            return Err(Error::invalid("2-level Flip-N-Write needs k >= 1 and f >= 1"));
        }
        Ok(Self { k, levels: 2, f })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn levels(&self) -> u8 {
        self.levels
    }

    /// Level-2 group size; 0 for single-level configurations.
    pub fn f(&self) -> usize {
        self.f
    }

    /// Payload bits consumed per independently coded unit.
    pub fn dataword_unit(&self) -> usize {
        match self.levels {
            1 => self.k,
            _ => self.k * self.f,
        }
    }

    pub fn codeword_unit(&self) -> usize {
        match self.levels {
            1 => self.k + 1,
            _ => self.f * (self.k + 1) + 1,
        }
    }
}

fn encode_word(d: &BitString, out: &mut BitString) -> bool {
    let flip = d.weight() > d.len() / 2;
    if flip {
        out.append(&d.complement());
    } else {
        out.append(d);
    }
    out.push(flip);
    flip
}

fn decode_word(c: &BitString, start: usize, k: usize, flip: bool, out: &mut BitString) {
    let d = c.slice(start..start + k);
    out.append(&if flip { d.complement() } else { d });
}

/// Single-level Flip-N-Write. Rate `k/(k+1)`.
pub fn fnw_encode(payload: &BitString, cfg: &FnwConfig) -> Result<BitString> {
    let k = cfg.k;
    check_multiple(payload.len(), k)?;
    let mut out = BitString::with_capacity(payload.len() / k * (k + 1));
    for i in 0..payload.len() / k {
        encode_word(&payload.slice(i * k..(i + 1) * k), &mut out);
    }
    Ok(out)
}

pub fn fnw_decode(coded: &BitString, cfg: &FnwConfig) -> Result<BitString> {
    let k = cfg.k;
    check_multiple(coded.len(), k + 1)?;
    let mut out = BitString::with_capacity(coded.len() / (k + 1) * k);
    for i in 0..coded.len() / (k + 1) {
        let start = i * (k + 1);
        decode_word(coded, start, k, coded.get(start + k), &mut out);
    }
    Ok(out)
}

/// Two-level Flip-N-Write. Rate `k·f / (f·(k+1) + 1)`.
pub fn fnw2_encode(payload: &BitString, cfg: &FnwConfig) -> Result<BitString> {
    let (k, f) = (cfg.k, cfg.f);
    if cfg.levels != 2 {
        return Err(Error::invalid("fnw2_encode needs a two-level configuration"));
    }
    check_multiple(payload.len(), cfg.dataword_unit())?;
    let groups = payload.len() / cfg.dataword_unit();
    let mut out = BitString::with_capacity(groups * cfg.codeword_unit());
    for g in 0..groups {
        let base = out.len();
        let mut flags = 0usize;
        for j in 0..f {
            let start = (g * f + j) * k;
            flags += encode_word(&payload.slice(start..start + k), &mut out) as usize;
        }
        let flip = flags > f / 2;
        if flip {
            for j in 0..f {
                let pos = base + j * (k + 1) + k;
                out.set(pos, !out.get(pos));
            }
        }
        out.push(flip);
    }
    Ok(out)
}

pub fn fnw2_decode(coded: &BitString, cfg: &FnwConfig) -> Result<BitString> {
    let (k, f) = (cfg.k, cfg.f);
    if cfg.levels != 2 {
        return Err(Error::invalid("fnw2_decode needs a two-level configuration"));
    }
    let unit = cfg.codeword_unit();
    check_multiple(coded.len(), unit)?;
    let mut out = BitString::with_capacity(coded.len() / unit * cfg.dataword_unit());
    for g in 0..coded.len() / unit {
        let base = g * unit;
        let group_flip = coded.get(base + unit - 1);
        for j in 0..f {
            let start = base + j * (k + 1);
            decode_word(coded, start, k, coded.get(start + k) ^ group_flip, &mut out);
        }
    }
    Ok(out)
}

/// Flip-N-Write as a [`LineCodec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipNWrite(pub FnwConfig);

impl LineCodec for FlipNWrite {
    fn name(&self) -> String {
        match self.0.levels {
            1 => format!("fnw:{}", self.0.k),
            _ => format!("fnw2:{},{}", self.0.k, self.0.f),
        }
    }

    fn encode(&self, payload: &BitString) -> Result<BitString> {
        match self.0.levels {
            1 => fnw_encode(payload, &self.0),
            _ => fnw2_encode(payload, &self.0),
        }
    }

    fn decode(&self, coded: &BitString, payload_bits: usize) -> Result<BitString> {
        let out = match self.0.levels {
            1 => fnw_decode(coded, &self.0)?,
            _ => fnw2_decode(coded, &self.0)?,
        };
        if out.len() != payload_bits {
            return Err(Error::CorruptStream(format!("decoded {} bits, expected {payload_bits}", out.len())));
        }
        Ok(out)
    }

    fn fixed_rate(&self) -> Option<(usize, usize)> {
        Some((self.0.dataword_unit(), self.0.codeword_unit()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    /// Bit-by-bit reference for the level-1 rule.
    fn oracle_fnw(d: &[u8]) -> Vec<u8> {
        let ones = d.iter().filter(|&&b| b == 1).count();
        if ones > d.len() / 2 {
            d.iter().map(|b| 1 - b).chain([1]).collect()
        } else {
            d.iter().copied().chain([0]).collect()
        }
    }

    fn to_vec(b: &BitString) -> Vec<u8> {
        b.iter().map(u8::from).collect()
    }

    #[test]
    fn level1_examples() {
        let c3 = FnwConfig::single(3).unwrap();
        assert_eq!(fnw_encode(&bs("000"), &c3).unwrap(), bs("0000"));
        assert_eq!(to_vec(&fnw_encode(&bs("110"), &c3).unwrap()), oracle_fnw(&[1, 1, 0]));
        assert_eq!(fnw_encode(&bs("110"), &c3).unwrap(), bs("0011"));
        let c4 = FnwConfig::single(4).unwrap();
        assert_eq!(fnw_encode(&bs("1000"), &c4).unwrap(), bs("10000"));
        // Tie at w = k/2 keeps the dataword.
        assert_eq!(fnw_encode(&bs("1100"), &c4).unwrap(), bs("11000"));

        assert_eq!(fnw_decode(&bs("0011"), &c3).unwrap(), bs("110"));
        assert_eq!(fnw_decode(&bs("0000"), &c3).unwrap(), bs("000"));
    }

    #[test]
    fn level1_framing() {
        let c3 = FnwConfig::single(3).unwrap();
        assert_eq!(fnw_encode(&bs("0101"), &c3), Err(Error::Framing { len: 4, unit: 3 }));
        assert_eq!(fnw_decode(&bs("010"), &c3), Err(Error::Framing { len: 3, unit: 4 }));
        assert!(FnwConfig::single(0).is_err());
        assert!(FnwConfig::two_level(4, 0).is_err());
    }

    #[test]
    fn level2_examples() {
        let cfg = FnwConfig::two_level(4, 4).unwrap();
        assert_eq!(fnw2_encode(&BitString::zeros(16), &cfg).unwrap(), BitString::zeros(21));

        // Level-1 flags 1,1,1,0 have weight 3 > 2 and are complemented.
        let coded = fnw2_encode(&bs("1111111011010000"), &cfg).unwrap();
        assert_eq!(coded, bs("000000001000100000011"));
        assert_eq!(fnw2_decode(&coded, &cfg).unwrap(), bs("1111111011010000"));
        assert_eq!(fnw2_decode(&BitString::zeros(42), &cfg).unwrap(), BitString::zeros(32));
        assert_eq!(fnw2_decode(&BitString::zeros(20), &cfg), Err(Error::Framing { len: 20, unit: 21 }));
    }

    #[test]
    fn exact_rates() {
        let rate = |c: FnwConfig| FlipNWrite(c).fixed_rate().unwrap();
        assert_eq!(rate(FnwConfig::single(3).unwrap()), (3, 4));
        assert_eq!(rate(FnwConfig::single(8).unwrap()), (8, 9));
        assert_eq!(rate(FnwConfig::two_level(4, 4).unwrap()), (16, 21));
    }

    #[test]
    fn exhaustive_small_k() {
        for k in 1..=8usize {
            let cfg = FnwConfig::single(k).unwrap();
            for v in 0..1u64 << k {
                let d = BitString::from_u64(v, k);
                let c = fnw_encode(&d, &cfg).unwrap();
                assert_eq!(to_vec(&c), oracle_fnw(&to_vec(&d)));
                assert!(c.weight() <= d.weight());
                assert!(c.weight() <= k.div_ceil(2));
                assert_eq!(fnw_decode(&c, &cfg).unwrap(), d);
            }
        }
    }

    fn arb_payload(unit: usize, max_units: usize) -> impl Strategy<Value = BitString> {
        (0..=max_units).prop_flat_map(move |n| {
            prop::collection::vec(any::<bool>(), n * unit).prop_map(|v| v.into_iter().collect())
        })
    }

    proptest! {
        #[test]
        fn level1_round_trip_and_weight(k in 1usize..=20, p in arb_payload(60, 8)) {
            prop_assume!(p.len() % k == 0);
            let cfg = FnwConfig::single(k).unwrap();
            let c = fnw_encode(&p, &cfg).unwrap();
            prop_assert_eq!(c.len(), p.len() / k * (k + 1));
            prop_assert!(c.weight() <= p.weight());
            prop_assert_eq!(fnw_decode(&c, &cfg).unwrap(), p);
        }

        #[test]
        fn level2_round_trip_and_dominance(k in 1usize..=8, f in 1usize..=8, groups in 0usize..6, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p: BitString = (0..groups * k * f).map(|_| rng.gen_bool(0.6)).collect();
            let c1 = FnwConfig::single(k).unwrap();
            let c2 = FnwConfig::two_level(k, f).unwrap();
            let one = fnw_encode(&p, &c1).unwrap();
            let two = fnw2_encode(&p, &c2).unwrap();
            prop_assert_eq!(two.len(), groups * (f * (k + 1) + 1));
            prop_assert!(two.weight() <= one.weight());
            prop_assert_eq!(fnw2_decode(&two, &c2).unwrap(), p);
        }
    }
}
