//! `ittutor`: command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or arguments, 2 I/O error,
//! 3 decode failure.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ittutor_core::barnard::{export_curve_csv, rank_probability_curve, BarnardSummary, DEFAULT_RANK_WINDOW};
use ittutor_core::channel::{bsc_transmit, hamming_distance};
use ittutor_core::channel_coding::{decode_frame, encode_frame, ChannelCoder};
use ittutor_core::corpus::{average_word_length, load_frequency_table, sample_text};
use ittutor_core::entropy::{
    count_ngrams, count_words, export_frequency_csv, normalize_text, shannon_entropy, Alphabet,
};
use ittutor_core::montecarlo::{ber_sweep, write_sweep_csv};
use ittutor_core::pipeline::{run_pipeline, PipelineConfig};
use ittutor_core::prng::derive_seed;
use ittutor_core::source_coding::{
    decode_stream, encode_symbols, export_codebook_csv, Dictionary, EncodedStream, SourceCoder, SymbolDomain,
};
use ittutor_core::{BitStream, Error, ErrorKind, Execution, Result};

#[derive(Parser)]
#[command(
    name = "ittutor",
    version,
    about = "Entropy, source coding and channel coding experiments on Spanish text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate text by drawing words from a frequency table.
    Gen {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        words: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Concatenate words without separators.
        #[arg(long)]
        no_spaces: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Letter n-gram entropy of a text file.
    Ngram {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        order: u8,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Word frequencies and word entropy of a text file.
    Wordfreq {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Letter entropy per word from the rank/probability curve of a table.
    Barnard {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RANK_WINDOW.0)]
        rank_lo: usize,
        #[arg(long, default_value_t = DEFAULT_RANK_WINDOW.1)]
        rank_hi: usize,
        /// Average word length; measured on the table when omitted.
        #[arg(long)]
        alpha: Option<f64>,
        /// Zipf constant; estimated over the rank window when omitted.
        #[arg(long)]
        k: Option<f64>,
        /// Dictionary size; the table size when omitted.
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the log-spaced rank/probability curve.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        max_points: usize,
    },
    /// Source-code a text file.
    Encode {
        #[arg(long)]
        method: SourceCoder,
        #[arg(long)]
        symbols: SymbolDomain,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the Huffman dictionary as CSV.
        #[arg(long)]
        codebook: Option<PathBuf>,
        /// Leave the dictionary out of the container.
        #[arg(long)]
        no_dictionary: bool,
    },
    /// Decode a source-coded container back to text.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Channel-code a file, send it through a BSC and decode it.
    Channel {
        #[arg(long)]
        code: ChannelCoder,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "in")]
        input: PathBuf,
        /// Decoded bytes.
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the received coded frame.
        #[arg(long)]
        frame: Option<PathBuf>,
    },
    /// Run the full experiment from a JSON config.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
    },
    /// Residual BER of a channel code over a range of crossover probabilities.
    Sweep {
        #[arg(long)]
        code: ChannelCoder,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        frame_bits: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn read_words(path: &Path) -> Result<Vec<String>> {
    Ok(normalize_text(&fs::read_to_string(path)?, &Alphabet::spanish()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run(command: Command) -> Result<()> {
    let mut out = io::stdout().lock();
    match command {
        Command::Gen {
            table,
            words,
            seed,
            no_spaces,
            output,
        } => {
            let table = load_frequency_table(File::open(table)?)?;
            let text = sample_text(&table, words, seed);
            let body = if no_spaces {
                text.to_text_without_spaces()
            } else {
                text.to_text()
            };
            fs::write(&output, body)?;
            writeln!(out, "{words} words written to {}", output.display())?;
        }
        Command::Ngram { order, input, csv } => {
            let words = read_words(&input)?;
            let counts = count_ngrams(&words, order as usize, &Alphabet::spanish());
            let h = shannon_entropy(&counts)?;
            writeln!(out, "order: {order}")?;
            writeln!(out, "n-grams: {} ({} distinct)", counts.total(), h.distinct_symbols)?;
            writeln!(out, "H_symbol: {:.4} bits/symbol", h.h_symbol)?;
            writeln!(out, "H_letter: {:.4} bits/letter", h.h_letter)?;
            if let Some(path) = csv {
                export_frequency_csv(&counts, create(&path)?)?;
            }
        }
        Command::Wordfreq { input, csv } => {
            let words = read_words(&input)?;
            let counts = count_words(&words);
            let h = shannon_entropy(&counts)?;
            let letters: usize = words.iter().map(|w| w.chars().count()).sum();
            writeln!(out, "words: {} ({} distinct)", counts.total(), h.distinct_symbols)?;
            writeln!(out, "H_word: {:.4} bits/word", h.h_symbol)?;
            writeln!(
                out,
                "average word length: {:.4} letters",
                letters as f64 / words.len() as f64
            )?;
            if let Some(path) = csv {
                export_frequency_csv(&counts, create(&path)?)?;
            }
        }
        Command::Barnard {
            table,
            rank_lo,
            rank_hi,
            alpha,
            k,
            j,
            csv,
            curve,
            max_points,
        } => {
            let table = load_frequency_table(File::open(table)?)?;
            let summary = BarnardSummary::from_table(&table, (rank_lo, rank_hi), k, alpha, j)?;
            write!(out, "{}", summary.to_text())?;
            writeln!(out, "table average word length: {:.4}", average_word_length(&table))?;
            if let Some(path) = csv {
                summary.write_csv(create(&path)?)?;
            }
            if let Some(path) = curve {
                export_curve_csv(&rank_probability_curve(&table, max_points)?, create(&path)?)?;
            }
        }
        Command::Encode {
            method,
            symbols,
            input,
            output,
            codebook,
            no_dictionary,
        } => {
            let words = read_words(&input)?;
            let tokens = symbols.tokenize(&words);
            let stream = encode_symbols(&tokens, method, symbols)?;
            let bytes = if no_dictionary {
                stream.to_bytes_without_dictionary()
            } else {
                stream.to_bytes()
            };
            fs::write(&output, &bytes)?;
            if let Some(path) = codebook {
                match &stream.dictionary {
                    Some(Dictionary::Huffman(book)) => export_codebook_csv(book, create(&path)?)?,
                    _ => return Err(Error::Validation("--codebook needs --method huffman".into())),
                }
            }
            writeln!(out, "symbols: {}", tokens.len())?;
            writeln!(
                out,
                "payload: {} bits ({} bytes)",
                stream.payload.len(),
                stream.payload_bytes()
            )?;
            writeln!(out, "container: {} bytes", bytes.len())?;
        }
        Command::Decode { input, output } => {
            let stream = EncodedStream::from_bytes(&fs::read(&input)?)?;
            let symbols = decode_stream(&stream)?;
            fs::write(&output, stream.domain.detokenize(&symbols))?;
            writeln!(out, "{} symbols decoded", symbols.len())?;
        }
        Command::Channel {
            code,
            p,
            seed,
            input,
            output,
            frame,
        } => {
            let data = fs::read(&input)?;
            let payload = BitStream::from_bytes(&data, data.len() * 8).expect("whole bytes");
            let mut coded = encode_frame(&payload, code);
            let sent = coded.coded.len();
            let outcome = bsc_transmit(&coded.coded, p, derive_seed(seed, 1))?;
            coded.coded = outcome.received;
            if let Some(path) = frame {
                fs::write(path, coded.to_bytes())?;
            }
            let decoded = decode_frame(&coded)?;
            let residual = hamming_distance(&decoded.payload, &payload)?;
            fs::write(&output, decoded.payload.to_bytes())?;
            writeln!(out, "information bits: {}", payload.len())?;
            writeln!(out, "transmitted bits: {sent}")?;
            writeln!(out, "error bits: {}", outcome.errors_introduced)?;
            writeln!(out, "residual error bits: {residual}")?;
            if decoded.rs_blocks > 0 {
                writeln!(out, "RS blocks: {} ({} failed)", decoded.rs_blocks, decoded.rs_failures)?;
            }
            writeln!(out, "flip digest: {:#018x}", outcome.flip_positions_digest)?;
        }
        Command::Pipeline { config } => {
            let cfg = PipelineConfig::load(&config)?;
            let report = run_pipeline(&cfg)?;
            write!(out, "{}", report.to_text())?;
        }
        Command::Sweep {
            code,
            p,
            frame_bits,
            trials,
            seed,
            sequential,
            csv,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            let points = ber_sweep(code, &p, frame_bits, trials, seed, exec)?;
            match csv {
                Some(path) => write_sweep_csv(&points, create(&path)?)?,
                None => write_sweep_csv(&points, &mut out)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Validation => 1,
        ErrorKind::Io => 2,
        ErrorKind::Decode => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        // Output piped into a reader that stopped early.
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
