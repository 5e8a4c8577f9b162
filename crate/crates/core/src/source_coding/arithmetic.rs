//! Static-model binary arithmetic coder.
//!
//! Integer implementation in the Witten–Neal–Cleary style with 62-bit `low` /
//! `high` registers: when the interval straddles the midpoint without
//! resolving the next bit, the coder defers it ("pending" bits) and emits it
//! with the opposite polarity once the interval settles, which is how carries
//! are propagated in a bit-serial coder. `range × cumulative` products are
//! formed in 128 bits, so model totals up to 2^60 are coded exactly.
//!
//! Flushing emits `2 + pending` bits; an encoded message of `N` symbols is at
//! most `N·H + 2 + ε` bits where `ε` is the (tiny) truncation loss.

use std::collections::HashMap;

use crate::bits::BitStream;
use crate::entropy::NGramCounts;
use crate::{Error, Result};

const PRECISION: u32 = 62;
const FULL: u64 = 1 << PRECISION;
const HALF: u64 = FULL >> 1;
const QUARTER: u64 = FULL >> 2;
const MAX_TOTAL: u64 = QUARTER;

/// Static cumulative-frequency model over an ordered symbol list.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolModel {
    symbols: Vec<String>,
    /// `cumulative[i]..cumulative[i + 1]` is the slot of `symbols[i]`.
    cumulative: Vec<u64>,
    index: HashMap<String, usize>,
}

impl SymbolModel {
    /// Model with symbols in codepoint order.
    pub fn from_counts(counts: &NGramCounts) -> Result<Self> {
        Self::from_pairs(counts.iter().map(|(s, c)| (s.to_owned(), c)))
    }

    /// Model from `(symbol, count)` pairs in the given order.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, u64)>) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut cumulative = vec![0u64];
        let mut index = HashMap::new();
        for (symbol, count) in pairs {
            if count == 0 {
                return Err(Error::Validation(format!("symbol {symbol:?} has zero count")));
            }
            let last = *cumulative.last().unwrap();
            let next = last
                .checked_add(count)
                .filter(|&t| t <= MAX_TOTAL)
                .ok_or_else(|| Error::Validation("model total exceeds 2^60".into()))?;
            if index.insert(symbol.clone(), symbols.len()).is_some() {
                return Err(Error::Validation(format!("duplicate model symbol {symbol:?}")));
            }
            symbols.push(symbol);
            cumulative.push(next);
        }
        if symbols.is_empty() {
            return Err(Error::Domain("empty symbol model".into()));
        }
        Ok(Self {
            symbols,
            cumulative,
            index,
        })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn cumulative_counts(&self) -> &[u64] {
        &self.cumulative
    }

    pub fn total(&self) -> u64 {
        *self.cumulative.last().unwrap()
    }

    pub fn count(&self, i: usize) -> u64 {
        self.cumulative[i + 1] - self.cumulative[i]
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn position(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// Entropy of the model distribution, bits/symbol.
    pub fn entropy(&self) -> f64 {
        crate::entropy::entropy_of_counts((0..self.len()).map(|i| self.count(i)), self.total())
    }
}

struct Encoder {
    low: u64,
    high: u64,
    pending: u64,
    out: BitStream,
}

impl Encoder {
    fn new() -> Self {
        Self {
            low: 0,
            high: FULL - 1,
            pending: 0,
            out: BitStream::new(),
        }
    }

    fn emit(&mut self, bit: bool) {
        self.out.push(bit);
        for _ in 0..self.pending {
            self.out.push(!bit);
        }
        self.pending = 0;
    }

    fn encode(&mut self, cum_lo: u64, cum_hi: u64, total: u64) {
        let range = u128::from(self.high - self.low) + 1;
        self.high = self.low + (range * u128::from(cum_hi) / u128::from(total)) as u64 - 1;
        self.low += (range * u128::from(cum_lo) / u128::from(total)) as u64;
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.pending += 1;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
    }

    fn finish(mut self) -> BitStream {
        self.pending += 1;
        let bit = self.low >= QUARTER;
        self.emit(bit);
        self.out
    }
}

/// Encodes `symbols` against a static `model`.
pub fn arithmetic_encode<S: AsRef<str>>(symbols: &[S], model: &SymbolModel) -> Result<BitStream> {
    if symbols.is_empty() {
        return Ok(BitStream::new());
    }
    let total = model.total();
    let mut enc = Encoder::new();
    for s in symbols {
        let i = model
            .position(s.as_ref())
            .ok_or_else(|| Error::UnknownSymbol(s.as_ref().to_owned()))?;
        enc.encode(model.cumulative[i], model.cumulative[i + 1], total);
    }
    Ok(enc.finish())
}

/// Decodes exactly `n_symbols` symbols.
///
/// Streams are not self-checking: a corrupted payload usually decodes to
/// different symbols without any error. The one detected failure is a stream
/// that runs out long before `n_symbols` are produced (more than 62 bits read
/// past its end), which no encoder output can cause.
pub fn arithmetic_decode(bits: &BitStream, model: &SymbolModel, n_symbols: usize) -> Result<Vec<String>> {
    if n_symbols == 0 {
        return Ok(Vec::new());
    }
    let total = u128::from(model.total());
    let mut pos = 0usize;
    let next_bit = |pos: &mut usize| -> u64 {
        let b = bits.get(*pos).unwrap_or(false);
        *pos += 1;
        u64::from(b)
    };
    let mut value = 0u64;
    for _ in 0..PRECISION {
        value = (value << 1) | next_bit(&mut pos);
    }
    let (mut low, mut high) = (0u64, FULL - 1);
    let mut out = Vec::with_capacity(n_symbols);
    for _ in 0..n_symbols {
        let range = u128::from(high - low) + 1;
        let scaled = ((u128::from(value - low) + 1) * total - 1) / range;
        let scaled = scaled as u64;
        let i = model.cumulative.partition_point(|&c| c <= scaled) - 1;
        out.push(model.symbols[i].clone());
        high = low + (range * u128::from(model.cumulative[i + 1]) / total) as u64 - 1;
        low += (range * u128::from(model.cumulative[i]) / total) as u64;
        loop {
            if high < HALF {
                // nothing to subtract
            } else if low >= HALF {
                low -= HALF;
                high -= HALF;
                value -= HALF;
            } else if low >= QUARTER && high < HALF + QUARTER {
                low -= QUARTER;
                high -= QUARTER;
                value -= QUARTER;
            } else {
                break;
            }
            low <<= 1;
            high = (high << 1) | 1;
            value = (value << 1) | next_bit(&mut pos);
        }
        if pos > bits.len() + PRECISION as usize {
            return Err(Error::Decode {
                offset: bits.len() as u64,
                message: format!("stream exhausted after {} of {n_symbols} symbols", out.len()),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::DetRng;
    use proptest::prelude::*;

    fn model(pairs: &[(&str, u64)]) -> SymbolModel {
        SymbolModel::from_pairs(pairs.iter().map(|&(s, c)| (s.to_owned(), c))).unwrap()
    }

    fn draw(model: &SymbolModel, n: usize, seed: u64) -> Vec<String> {
        let mut rng = DetRng::new(seed);
        (0..n)
            .map(|_| {
                let r = rng.below(model.total());
                let i = model.cumulative_counts().partition_point(|&c| c <= r) - 1;
                model.symbols()[i].clone()
            })
            .collect()
    }

    #[test]
    fn fair_binary_source_costs_one_bit_per_symbol() {
        let m = model(&[("a", 1), ("b", 1)]);
        let s = draw(&m, 10_000, 1);
        let bits = arithmetic_encode(&s, &m).unwrap();
        assert!((10_000..=10_064).contains(&bits.len()), "{}", bits.len());
        assert_eq!(arithmetic_decode(&bits, &m, s.len()).unwrap(), s);
    }

    #[test]
    fn zero_entropy_source_costs_only_the_flush() {
        let m = model(&[("sol", 3)]);
        let s = vec!["sol"; 100];
        let bits = arithmetic_encode(&s, &m).unwrap();
        assert!(bits.len() <= 2, "{}", bits.len());
        assert_eq!(arithmetic_decode(&bits, &m, 100).unwrap(), s);
    }

    #[test]
    fn empty_sequences() {
        let m = model(&[("a", 1)]);
        assert!(arithmetic_encode::<&str>(&[], &m).unwrap().is_empty());
        assert!(arithmetic_decode(&BitStream::new(), &m, 0).unwrap().is_empty());
    }

    #[test]
    fn unknown_symbol() {
        let m = model(&[("a", 1)]);
        assert!(matches!(arithmetic_encode(&["b"], &m), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn skewed_source_beats_huffman() {
        let m = model(&[("a", 99), ("b", 1)]);
        let s = draw(&m, 100_000, 3);
        let bits = arithmetic_encode(&s, &m).unwrap();
        let per_symbol = bits.len() as f64 / s.len() as f64;
        // Huffman needs exactly 1 bit/symbol for two symbols.
        assert!(per_symbol <= 0.1, "{per_symbol}");
        assert_eq!(arithmetic_decode(&bits, &m, s.len()).unwrap(), s);
    }

    #[test]
    fn truncated_stream_is_detected() {
        let m = model(&[("a", 1), ("b", 1)]);
        let s = draw(&m, 1000, 9);
        let bits = arithmetic_encode(&s, &m).unwrap();
        let cut = bits.slice(0, 100);
        assert!(matches!(
            arithmetic_decode(&cut, &m, s.len()),
            Err(Error::Decode { .. })
        ));
    }

    #[test]
    fn model_validation() {
        assert!(SymbolModel::from_pairs(vec![("a".to_string(), 0)]).is_err());
        assert!(SymbolModel::from_pairs(vec![("a".to_string(), 1), ("a".to_string(), 1)]).is_err());
        assert!(SymbolModel::from_pairs(Vec::new()).is_err());
        assert!(SymbolModel::from_pairs(vec![("a".to_string(), 1 << 60), ("b".to_string(), 1)]).is_err());
    }

    #[test]
    fn large_totals_are_exact() {
        let m = model(&[("a", (1 << 59) - 7), ("b", 3), ("c", 1 << 58)]);
        let s = draw(&m, 5000, 4);
        let bits = arithmetic_encode(&s, &m).unwrap();
        assert_eq!(arithmetic_decode(&bits, &m, s.len()).unwrap(), s);
    }

    proptest! {
        #[test]
        fn roundtrip_and_entropy_gap(counts in prop::collection::vec(1u64..500, 1..30), seed in any::<u64>()) {
            let m = SymbolModel::from_pairs(counts.iter().enumerate().map(|(i, &c)| (format!("s{i}"), c))).unwrap();
            let s = draw(&m, 2000, seed);
            let bits = arithmetic_encode(&s, &m).unwrap();
            prop_assert_eq!(arithmetic_decode(&bits, &m, s.len()).unwrap(), s.clone());
            // Ideal code length of this particular sequence under the model.
            let ideal: f64 = s.iter().map(|x| {
                let i = m.position(x).unwrap();
                -(m.count(i) as f64 / m.total() as f64).log2()
            }).sum();
            prop_assert!((bits.len() as f64) <= ideal + 3.0, "{} vs {}", bits.len(), ideal);
        }
    }
}
