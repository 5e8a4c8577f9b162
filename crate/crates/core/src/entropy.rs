//! Alphabet, n-gram counting and block entropies.
//!
//! Letters are counted inside words only: n-grams never straddle a word
//! boundary and there is no space symbol. All logarithms are base 2.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::exec::Execution;
use crate::{Error, Result};

const SPANISH_EXTRA: [char; 7] = ['ñ', 'á', 'é', 'í', 'ó', 'ú', 'ü'];

/// Ordered set of letters considered part of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    lookup: BTreeSet<char>,
}

impl Alphabet {
    /// The 33-letter Spanish alphabet: `a`-`z`, `ñ`, the five acute vowels and `ü`.
    pub fn spanish() -> Self {
        Self::new(('a'..='z').chain(SPANISH_EXTRA)).expect("built-in alphabet is valid")
    }

    /// Custom alphabet. Rejects duplicates and characters that are not a
    /// single NFC codepoint.
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let mut out = Vec::new();
        let mut lookup = BTreeSet::new();
        for c in symbols {
            let nfc: String = c.to_string().nfc().collect();
            if nfc.chars().count() != 1 || !nfc.starts_with(c) {
                return Err(Error::Validation(format!(
                    "alphabet symbol {c:?} is not a single NFC codepoint"
                )));
            }
            if !lookup.insert(c) {
                return Err(Error::Validation(format!("duplicate alphabet symbol {c:?}")));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(Error::Validation("empty alphabet".into()));
        }
        Ok(Self { symbols: out, lookup })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[inline]
    pub fn contains(&self, c: char) -> bool {
        self.lookup.contains(&c)
    }

    /// True when `word` is non-empty and made only of alphabet letters.
    pub fn is_word(&self, word: &str) -> bool {
        !word.is_empty() && word.chars().all(|c| self.contains(c))
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::spanish()
    }
}

/// Lowercase + NFC.
pub fn normalize_word(raw: &str) -> String {
    raw.to_lowercase().nfc().collect()
}

/// Splits raw text into words: maximal runs of alphabet letters after
/// lowercasing and NFC normalization. Everything else is a separator.
pub fn normalize_text(raw: &str, alphabet: &Alphabet) -> Vec<String> {
    let text = normalize_word(raw);
    let mut words = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if alphabet.contains(c) {
            current.push(c);
        } else if !current.is_empty() {
            words.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Frequency map of fixed-order letter n-grams (`order >= 1`) or whole words
/// (`order == 0`).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NGramCounts {
    pub order: usize,
    counts: BTreeMap<String, u64>,
    total: u64,
    /// Number of words the counts were taken from.
    pub sample_words: u64,
}

impl NGramCounts {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            ..Default::default()
        }
    }

    /// Builds counts from explicit `(symbol, count)` pairs; zero counts are
    /// dropped and repeated symbols accumulate.
    pub fn from_pairs<S: Into<String>>(order: usize, pairs: impl IntoIterator<Item = (S, u64)>) -> Self {
        let mut out = Self::new(order);
        for (s, c) in pairs {
            out.add(s.into(), c);
        }
        out
    }

    pub fn add(&mut self, symbol: String, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(symbol).or_insert(0) += count;
        self.total += count;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, symbol: &str) -> u64 {
        self.counts.get(symbol).copied().unwrap_or(0)
    }

    /// Entries in codepoint order of the symbol.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Entries by descending count, ties in codepoint order.
    pub fn by_frequency(&self) -> Vec<(&str, u64)> {
        let mut rows: Vec<_> = self.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }

    pub fn probability(&self, symbol: &str) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.get(symbol) as f64 / self.total as f64
        }
    }

    /// Adds every count of `other` into `self`.
    pub fn merge(&mut self, other: NGramCounts) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.total += other.total;
        self.sample_words += other.sample_words;
    }
}

/// Words per parallel chunk; small inputs stay on one thread.
const COUNT_CHUNK: usize = 8192;

/// Counts every within-word window of `order` letters.
///
/// Words shorter than `order` contribute nothing. A non-alphabet character
/// inside a word acts as a boundary, matching [`normalize_text`].
pub fn count_ngrams<S: AsRef<str> + Sync>(words: &[S], order: usize, alphabet: &Alphabet) -> NGramCounts {
    count_ngrams_with(words, order, alphabet, Execution::default())
}

pub fn count_ngrams_with<S: AsRef<str> + Sync>(
    words: &[S],
    order: usize,
    alphabet: &Alphabet,
    exec: Execution,
) -> NGramCounts {
    assert!(order >= 1, "n-gram order must be at least 1");
    exec.map_chunks(words, COUNT_CHUNK, |chunk| count_chunk(chunk, order, alphabet))
        .into_iter()
        .fold(NGramCounts::new(order), |mut acc, part| {
            acc.merge(part);
            acc
        })
}

fn count_chunk<S: AsRef<str>>(words: &[S], order: usize, alphabet: &Alphabet) -> NGramCounts {
    let mut out = NGramCounts::new(order);
    let mut letters: Vec<char> = Vec::new();
    let mut window = String::new();
    for word in words {
        out.sample_words += 1;
        for run in word.as_ref().split(|c: char| !alphabet.contains(c)) {
            letters.clear();
            letters.extend(run.chars());
            if letters.len() < order {
                continue;
            }
            for w in letters.windows(order) {
                window.clear();
                window.extend(w);
                match out.counts.get_mut(window.as_str()) {
                    Some(c) => *c += 1,
                    None => {
                        out.counts.insert(window.clone(), 1);
                    }
                }
                out.total += 1;
            }
        }
    }
    out
}

/// Whole-word multiset counts (`order == 0`).
pub fn count_words<S: AsRef<str>>(words: &[S]) -> NGramCounts {
    let mut out = NGramCounts::new(0);
    for w in words {
        out.add(w.as_ref().to_owned(), 1);
    }
    out.sample_words = words.len() as u64;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    /// Bits per symbol (per word when `order == 0`).
    pub h_symbol: f64,
    /// Bits per letter; equals `h_symbol` for letters and words.
    pub h_letter: f64,
    pub sample_length_words: u64,
    pub distinct_symbols: usize,
}

/// `H = -Σ p log2 p` over the empirical distribution.
pub fn entropy_of_counts<I: IntoIterator<Item = u64>>(counts: I, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let h: f64 = counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

/// Bits per letter of an n-gram entropy: `h_symbol / order`.
pub fn per_letter_entropy(h_symbol: f64, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::Domain("n-gram order must be at least 1".into()));
    }
    Ok(h_symbol / order as f64)
}

pub fn shannon_entropy(counts: &NGramCounts) -> Result<EntropyResult> {
    if counts.total() == 0 {
        return Err(Error::Domain("entropy of empty counts".into()));
    }
    let h_symbol = entropy_of_counts(counts.counts.values().copied(), counts.total());
    let h_letter = if counts.order >= 1 {
        per_letter_entropy(h_symbol, counts.order)?
    } else {
        h_symbol
    };
    Ok(EntropyResult {
        h_symbol,
        h_letter,
        sample_length_words: counts.sample_words,
        distinct_symbols: counts.distinct(),
    })
}

/// Writes `symbol,frequency,p` rows by descending frequency.
///
/// `p` is printed with six decimals, the layout of the classic spreadsheet
/// export (`que,2138,0.015391`).
pub fn export_frequency_csv<W: Write>(counts: &NGramCounts, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["symbol", "frequency", "p"])?;
    for (symbol, freq) in counts.by_frequency() {
        let p = freq as f64 / counts.total() as f64;
        w.write_record([symbol, &freq.to_string(), &format!("{p:.6}")])?;
    }
    w.flush()?;
    Ok(())
}
