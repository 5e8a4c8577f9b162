//! End-to-end experiment: source → source coding → channel coding → BSC →
//! channel decoding → source decoding → comparison.
//!
//! Artifacts written to `output_dir`:
//!
//! | file | content |
//! |------|---------|
//! | `source.txt` | generated text, words separated by single spaces |
//! | `frequencies.csv` | word frequencies of the generated text |
//! | `codebook.csv` | Huffman dictionary (Huffman runs only) |
//! | `encoded.bin` | source-coded stream with inline dictionary |
//! | `received.bin` | coded frame as it left the channel |
//! | `decoded.txt` | reconstructed text |
//! | `report.txt`, `report.json` | the report |
//!
//! Sizes follow the single-byte text convention: the original size is the
//! number of characters of `source.txt` and the encoded size is the source
//! coder payload in whole bytes, without dictionary. BER is measured over the
//! information bits handed to the channel coder.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bits::BitStream;
use crate::channel::{bsc_transmit, hamming_distance};
use crate::channel_coding::{decode_frame, encode_frame, ChannelCoder};
use crate::corpus::{load_frequency_table, sample_text};
use crate::entropy::{count_words, export_frequency_csv, shannon_entropy};
use crate::prng::derive_seed;
use crate::source_coding::{
    arithmetic_decode, compression_rate, encode_symbols, export_codebook_csv, huffman_decode_partial, symbol_counts,
    Dictionary, SourceCoder, SymbolDomain,
};
use crate::{Error, Result};

/// Stream index of the channel noise, derived from the pipeline seed.
const CHANNEL_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// `word,count` frequency table.
    pub table_path: PathBuf,
    pub n_words: usize,
    pub symbol_domain: SymbolDomain,
    pub source_coder: SourceCoder,
    pub channel_coder: ChannelCoder,
    pub p: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a JSON config. Relative paths in it are taken relative to the
    /// directory holding the config file.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_json(&fs::read_to_string(path)?)?;
        if let Some(base) = path.parent() {
            cfg.table_path = base.join(&cfg.table_path);
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_words == 0 {
            return Err(Error::Validation("n_words must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Validation(format!("p = {} outside [0, 1]", self.p)));
        }
        if !self.table_path.is_file() {
            return Err(Error::Validation(format!(
                "table {} does not exist",
                self.table_path.display()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub ber: f64,
    pub correction_rate_percent: f64,
    pub compression_rate_percent: f64,
}

/// BER = residual / info_bits; correction = 100·(errors − residual)/errors,
/// or 100 without errors; compression = (1 − encoded/original)·100.
pub fn compute_rates(error_bits: u64, residual: u64, info_bits: u64, original_bytes: u64, encoded_bytes: u64) -> Rates {
    let ber = if info_bits == 0 {
        0.0
    } else {
        residual as f64 / info_bits as f64
    };
    let correction_rate_percent = if error_bits == 0 {
        100.0
    } else {
        100.0 * (error_bits as f64 - residual as f64) / error_bits as f64
    };
    Rates {
        ber,
        correction_rate_percent,
        compression_rate_percent: compression_rate(original_bytes, encoded_bytes),
    }
}

/// Positions where the sequences differ plus the length difference.
pub fn compare_files<A: AsRef<str>, B: AsRef<str>>(decoded: &[A], source: &[B]) -> usize {
    let differing = decoded
        .iter()
        .zip(source)
        .filter(|(a, b)| a.as_ref() != b.as_ref())
        .count();
    differing + decoded.len().abs_diff(source.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub n_words: usize,
    pub symbol_domain: SymbolDomain,
    pub source_coder: SourceCoder,
    pub channel_coder: ChannelCoder,
    pub p: f64,
    pub seed: u64,
    pub n_symbols: usize,
    pub distinct_symbols: usize,
    pub source_entropy_bits_per_symbol: f64,
    /// Huffman: frequency-weighted code length; arithmetic: payload bits per symbol.
    pub avg_code_length: f64,
    pub shortest_code: Option<String>,
    pub longest_code: Option<String>,
    pub original_size_bytes: u64,
    pub encoded_size_bytes: u64,
    pub compression_rate_percent: f64,
    pub information_bits: u64,
    pub transmitted_bits: u64,
    pub error_bits: u64,
    pub residual_error_bits: u64,
    pub ber: f64,
    /// Channel errors per transmitted bit.
    pub channel_ber: f64,
    pub correction_rate_percent: f64,
    pub rs_block_failures: usize,
    pub flip_positions_digest: u64,
    pub symbol_mismatches: usize,
    pub files_identical: bool,
    pub source_decode_error: Option<String>,
}

impl PipelineReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let yes_no = |b: bool| {
            if b {
                "Source file = Destination file"
            } else {
                "Source file != Destination file"
            }
        };
        let code_or_dash = |c: &Option<String>| c.clone().unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "Number of words: {}", self.n_words);
        let _ = writeln!(s, "Symbol domain: {}", self.symbol_domain);
        let _ = writeln!(s, "Source coding: {} method", self.source_coder);
        let _ = writeln!(s, "Channel coding: {}", self.channel_coder);
        let _ = writeln!(s, "BSC error probability: {}", self.p);
        let _ = writeln!(s, "Seed: {}", self.seed);
        let _ = writeln!(s, "Entropy: {:.4} bits/symbol", self.source_entropy_bits_per_symbol);
        let _ = writeln!(s, "Average length: {:.4} bits/symbol", self.avg_code_length);
        let _ = writeln!(s, "Shortest code: {}", code_or_dash(&self.shortest_code));
        let _ = writeln!(s, "Longest code: {}", code_or_dash(&self.longest_code));
        let _ = writeln!(s, "Original file size: {} bytes", self.original_size_bytes);
        let _ = writeln!(s, "Encoded file size: {} bytes", self.encoded_size_bytes);
        let _ = writeln!(s, "Compression rate: {:.4}%", self.compression_rate_percent);
        let _ = writeln!(s, "Number of information bits: {}", self.information_bits);
        let _ = writeln!(s, "Number of transmitted bits: {}", self.transmitted_bits);
        let _ = writeln!(s, "Error bits: {}", self.error_bits);
        let _ = writeln!(s, "Residual error bits: {}", self.residual_error_bits);
        let _ = writeln!(s, "BER: {:.8}", self.ber);
        let _ = writeln!(s, "Channel BER: {:.8}", self.channel_ber);
        let _ = writeln!(s, "Correction rate: {:.4}%", self.correction_rate_percent);
        let _ = writeln!(s, "Symbol mismatches: {}", self.symbol_mismatches);
        if let Some(e) = &self.source_decode_error {
            let _ = writeln!(s, "Source decoding error: {e}");
        }
        let _ = writeln!(s, "{}", yes_no(self.files_identical));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(dir.join(name), contents).map_err(Error::from)
}

/// Runs the experiment and writes its artifacts.
///
/// A source-decoding failure is not an error: it is recorded in the report,
/// which then shows `files_identical = false`.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    cfg.validate().map_err(|e| e.at_stage("config"))?;
    let dir = cfg.output_dir.as_path();
    fs::create_dir_all(dir).map_err(|e| Error::from(e).at_stage("output"))?;

    let table = fs::File::open(&cfg.table_path)
        .map_err(Error::from)
        .and_then(load_frequency_table)
        .map_err(|e| e.at_stage("table"))?;
    let source = sample_text(&table, cfg.n_words, cfg.seed);
    let source_text = source.to_text();
    let source_stage = |e: Error| e.at_stage("source");
    write(dir, "source.txt", &source_text).map_err(source_stage)?;
    let mut freq_csv = Vec::new();
    export_frequency_csv(&count_words(&source.words), &mut freq_csv).map_err(source_stage)?;
    write(dir, "frequencies.csv", freq_csv).map_err(source_stage)?;

    let coding_stage = |e: Error| e.at_stage("source coding");
    let symbols = cfg.symbol_domain.tokenize(&source.words);
    let counts = symbol_counts(&symbols);
    let entropy = shannon_entropy(&counts).map_err(coding_stage)?;
    let stream = encode_symbols(&symbols, cfg.source_coder, cfg.symbol_domain).map_err(coding_stage)?;
    write(dir, "encoded.bin", stream.to_bytes()).map_err(coding_stage)?;
    let (avg_code_length, shortest_code, longest_code) = match &stream.dictionary {
        Some(Dictionary::Huffman(book)) => {
            let mut csv = Vec::new();
            export_codebook_csv(book, &mut csv).map_err(coding_stage)?;
            write(dir, "codebook.csv", csv).map_err(coding_stage)?;
            (
                book.weighted_length(&counts),
                Some(book.shortest().1.to_bit_string()),
                Some(book.longest().1.to_bit_string()),
            )
        }
        _ => (stream.payload.len() as f64 / symbols.len() as f64, None, None),
    };

    let info = &stream.payload;
    let mut frame = encode_frame(info, cfg.channel_coder);
    let channel =
        bsc_transmit(&frame.coded, cfg.p, derive_seed(cfg.seed, CHANNEL_STREAM)).map_err(|e| e.at_stage("channel"))?;
    let transmitted_bits = frame.coded.len() as u64;
    frame.coded = channel.received.clone();
    write(dir, "received.bin", frame.to_bytes()).map_err(|e| e.at_stage("channel"))?;

    let decoded_frame = decode_frame(&frame).map_err(|e| e.at_stage("channel decoding"))?;
    let residual = hamming_distance(&decoded_frame.payload, info).map_err(|e| e.at_stage("channel decoding"))?;

    let (decoded_symbols, decode_error) = source_decode(&decoded_frame.payload, &stream.dictionary, symbols.len());
    let decoded_text = cfg.symbol_domain.detokenize(&decoded_symbols);
    write(dir, "decoded.txt", &decoded_text).map_err(|e| e.at_stage("source decoding"))?;
    let decoded_words: Vec<&str> = if decoded_text.is_empty() {
        Vec::new()
    } else {
        decoded_text.split(' ').collect()
    };
    let symbol_mismatches = compare_files(&decoded_words, &source.words);

    let original_size_bytes = source_text.chars().count() as u64;
    let encoded_size_bytes = stream.payload_bytes() as u64;
    let rates = compute_rates(
        channel.errors_introduced as u64,
        residual as u64,
        info.len() as u64,
        original_size_bytes,
        encoded_size_bytes,
    );
    let report = PipelineReport {
        n_words: cfg.n_words,
        symbol_domain: cfg.symbol_domain,
        source_coder: cfg.source_coder,
        channel_coder: cfg.channel_coder,
        p: cfg.p,
        seed: cfg.seed,
        n_symbols: symbols.len(),
        distinct_symbols: entropy.distinct_symbols,
        source_entropy_bits_per_symbol: entropy.h_symbol,
        avg_code_length,
        shortest_code,
        longest_code,
        original_size_bytes,
        encoded_size_bytes,
        compression_rate_percent: rates.compression_rate_percent,
        information_bits: info.len() as u64,
        transmitted_bits,
        error_bits: channel.errors_introduced as u64,
        residual_error_bits: residual as u64,
        ber: rates.ber,
        channel_ber: channel.stats().rate,
        correction_rate_percent: rates.correction_rate_percent,
        rs_block_failures: decoded_frame.rs_failures,
        flip_positions_digest: channel.flip_positions_digest,
        symbol_mismatches,
        files_identical: symbol_mismatches == 0,
        source_decode_error: decode_error.map(|e| e.to_string()),
    };
    write(dir, "report.txt", report.to_text()).map_err(|e| e.at_stage("report"))?;
    write(dir, "report.json", report.to_json()).map_err(|e| e.at_stage("report"))?;
    Ok(report)
}

/// Best-effort source decoding of a possibly corrupted payload.
fn source_decode(bits: &BitStream, dictionary: &Option<Dictionary>, n_symbols: usize) -> (Vec<String>, Option<Error>) {
    match dictionary {
        None => (Vec::new(), None),
        Some(Dictionary::Huffman(book)) => {
            let (mut symbols, err) = huffman_decode_partial(bits, book);
            let err = match symbols.len().cmp(&n_symbols) {
                std::cmp::Ordering::Greater => {
                    symbols.truncate(n_symbols);
                    err.or_else(|| {
                        Some(Error::Decode {
                            offset: bits.len() as u64,
                            message: "more symbols than expected".into(),
                        })
                    })
                }
                std::cmp::Ordering::Less => err.or_else(|| {
                    Some(Error::Decode {
                        offset: bits.len() as u64,
                        message: format!("{} of {n_symbols} symbols decoded", symbols.len()),
                    })
                }),
                std::cmp::Ordering::Equal => err,
            };
            (symbols, err)
        }
        Some(Dictionary::Arithmetic(model)) => match arithmetic_decode(bits, model, n_symbols) {
            Ok(symbols) => (symbols, None),
            Err(e) => (Vec::new(), Some(e)),
        },
    }
}
