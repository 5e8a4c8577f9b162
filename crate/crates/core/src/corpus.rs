//! Word-frequency tables and first-order word text generation.

use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::entropy::{normalize_word, Alphabet};
use crate::prng::DetRng;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRecord {
    pub word: String,
    pub count: u64,
    pub probability: f64,
    /// 1 = most frequent.
    pub rank: usize,
}

impl FrequencyRecord {
    /// Word length in letters.
    pub fn letters(&self) -> usize {
        self.word.chars().count()
    }
}

/// Ranked source model. Records are sorted by rank; counts never increase
/// with rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordFrequencyTable {
    records: Vec<FrequencyRecord>,
    total_count: u64,
}

impl WordFrequencyTable {
    /// Builds a table from `(word, count)` pairs, ranking by count descending
    /// with ties in codepoint order. Words are normalized and validated
    /// against `alphabet`.
    pub fn from_counts<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, u64)>, alphabet: &Alphabet) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for (raw, count) in pairs {
            let word = normalize_word(raw.as_ref());
            validate_entry(&word, count, alphabet)?;
            if !seen.insert(word.clone()) {
                return Err(Error::Validation(format!("duplicate word {word:?}")));
            }
            rows.push((word, count));
        }
        Self::from_validated(rows)
    }

    fn from_validated(mut rows: Vec<(String, u64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Validation("empty frequency table".into()));
        }
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let total_count: u64 = rows.iter().map(|r| r.1).sum();
        let records = rows
            .into_iter()
            .enumerate()
            .map(|(i, (word, count))| FrequencyRecord {
                word,
                count,
                probability: count as f64 / total_count as f64,
                rank: i + 1,
            })
            .collect();
        Ok(Self { records, total_count })
    }

    pub fn records(&self) -> &[FrequencyRecord] {
        &self.records
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&FrequencyRecord> {
        self.records.iter().find(|r| r.word == word)
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.probability)
    }
}

fn validate_entry(word: &str, count: u64, alphabet: &Alphabet) -> Result<()> {
    if !alphabet.is_word(word) {
        return Err(Error::Validation(format!(
            "word {word:?} contains characters outside the alphabet"
        )));
    }
    if count == 0 {
        return Err(Error::Validation(format!("word {word:?} has zero count")));
    }
    Ok(())
}

/// Reads a `word,count` CSV using the Spanish alphabet.
pub fn load_frequency_table<R: Read>(source: R) -> Result<WordFrequencyTable> {
    load_frequency_table_with(source, &Alphabet::spanish())
}

pub fn load_frequency_table_with<R: Read>(source: R, alphabet: &Alphabet) -> Result<WordFrequencyTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "word" || &headers[1] != "count" {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `word,count`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let count: u64 = record[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!("count {:?} is not a positive integer", &record[1]),
        })?;
        let word = normalize_word(&record[0]);
        validate_entry(&word, count, alphabet)?;
        if !seen.insert(word.clone()) {
            return Err(Error::Validation(format!("duplicate word {word:?} on line {line}")));
        }
        rows.push((word, count));
    }
    WordFrequencyTable::from_validated(rows)
}

/// Writes the table back as `word,count` in rank order.
pub fn write_frequency_table<W: Write>(table: &WordFrequencyTable, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["word", "count"])?;
    for r in table.records() {
        w.write_record([r.word.as_str(), &r.count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Bijective base-26 name: 1 → `a`, 26 → `z`, 27 → `aa`.
pub fn synthetic_word(mut rank: usize) -> String {
    assert!(rank >= 1);
    let mut letters = Vec::new();
    while rank > 0 {
        rank -= 1;
        letters.push((b'a' + (rank % 26) as u8) as char);
        rank /= 26;
    }
    letters.iter().rev().collect()
}

/// Exact Zipf table of `j` synthetic words.
///
/// Probabilities are `k/n` renormalized over the `j` ranks, so they equal
/// `1/(n·H_j)` independently of `k`; `P_n·n` is the same for every rank.
/// Counts are `round(P_n · min_count_scale · j)`, at least 1, and serve the
/// sampler; the probability column keeps the unrounded model.
pub fn synthesize_zipf_table(j: usize, k: f64, min_count_scale: u64) -> Result<WordFrequencyTable> {
    if j == 0 {
        return Err(Error::Domain("table size must be at least 1".into()));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!("language constant {k} outside (0, 1)")));
    }
    if min_count_scale == 0 {
        return Err(Error::Domain("min_count_scale must be positive".into()));
    }
    let weights: Vec<f64> = (1..=j).map(|n| k / n as f64).collect();
    let norm = crate::barnard::ordered_sum(weights.iter().copied());
    let scale = min_count_scale as f64 * j as f64;
    let records: Vec<FrequencyRecord> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let probability = w / norm;
            FrequencyRecord {
                word: synthetic_word(i + 1),
                count: ((probability * scale).round() as u64).max(1),
                probability,
                rank: i + 1,
            }
        })
        .collect();
    let total_count = records.iter().map(|r| r.count).sum();
    Ok(WordFrequencyTable { records, total_count })
}

/// `Σ L_i · P_i`, letters per word.
pub fn average_word_length(table: &WordFrequencyTable) -> f64 {
    crate::barnard::ordered_sum(table.records().iter().map(|r| r.letters() as f64 * r.probability))
}

/// A generated or loaded sequence of words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSequence {
    pub words: Vec<String>,
    /// Generator seed, 0 when loaded from a file.
    pub seed: u64,
}

impl WordSequence {
    pub fn from_text(text: &str, alphabet: &Alphabet) -> Self {
        Self {
            words: crate::entropy::normalize_text(text, alphabet),
            seed: 0,
        }
    }

    /// Words joined by single spaces.
    pub fn to_text(&self) -> String {
        self.words.join(" ")
    }

    /// Words concatenated directly.
    pub fn to_text_without_spaces(&self) -> String {
        self.words.concat()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Cumulative counts for inverse-CDF sampling.
#[derive(Debug, Clone)]
pub struct WordSampler<'a> {
    table: &'a WordFrequencyTable,
    /// `cumulative[i]` = Σ counts of ranks `1..=i+1`.
    cumulative: Vec<u64>,
}

impl<'a> WordSampler<'a> {
    pub fn new(table: &'a WordFrequencyTable) -> Self {
        let mut acc = 0u64;
        let cumulative = table
            .records()
            .iter()
            .map(|r| {
                acc += r.count;
                acc
            })
            .collect();
        Self { table, cumulative }
    }

    pub fn draw(&self, rng: &mut DetRng) -> &'a str {
        let total = *self.cumulative.last().expect("non-empty table");
        let r = rng.below(total);
        let idx = self.cumulative.partition_point(|&c| c <= r);
        &self.table.records()[idx].word
    }
}

/// Draws `n_words` i.i.d. words with probability proportional to their
/// counts, from a xoshiro256++ stream seeded with `seed`.
pub fn sample_text(table: &WordFrequencyTable, n_words: usize, seed: u64) -> WordSequence {
    let sampler = WordSampler::new(table);
    let mut rng = DetRng::new(seed);
    let words = (0..n_words).map(|_| sampler.draw(&mut rng).to_owned()).collect();
    WordSequence { words, seed }
}

/// The bundled 1000-word sample table (Spanish words, Zipf-shaped counts).
pub const SAMPLE_TABLE_CSV: &str = include_str!("../data/sample_es.csv");

pub fn sample_table() -> WordFrequencyTable {
    load_frequency_table(SAMPLE_TABLE_CSV.as_bytes()).expect("bundled table is valid")
}
