//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p ittutor-core --test acceptance`.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use ittutor_core::barnard::{entropy_rate, letter_entropy_per_word, solve_ln_m, word_entropy, BarnardInputs};
use ittutor_core::channel::bsc_transmit;
use ittutor_core::channel_coding::{ChannelCoder, ConvCode, ConvCodeId, RsConfig};
use ittutor_core::corpus::{load_frequency_table, SAMPLE_TABLE_CSV};
use ittutor_core::entropy::{per_letter_entropy, shannon_entropy, NGramCounts};
use ittutor_core::montecarlo::rs_trials;
use ittutor_core::pipeline::{compute_rates, run_pipeline, PipelineConfig};
use ittutor_core::prng::DetRng;
use ittutor_core::source_coding::{
    arithmetic_decode, arithmetic_encode, decode_stream, encode_symbols, huffman_build, symbol_counts, SourceCoder,
    SymbolDomain, SymbolModel,
};
use ittutor_core::{BitStream, Execution};

/// Word entropy of the bundled table, from an independent 40-digit summation.
const SAMPLE_TABLE_WORD_ENTROPY: f64 = 7.489_051_749_762_531;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn ln_m() -> Outcome {
    let v = solve_ln_m(0.0817, 81_323).unwrap();
    check(within(v, 11.6627, 0.001), format!("ln M(0.0817, 81323) = {v:.6}"))
}

fn letter_entropy() -> Outcome {
    let r = letter_entropy_per_word(BarnardInputs::new(0.0817, 4.6978, 81_323).unwrap()).unwrap();
    check(within(r.f_w, 2.4737, 0.0005), format!("F_W = {:.6} bits/letter", r.f_w))
}

fn rate_arithmetic() -> Outcome {
    let v = entropy_rate(10.4281, 4.6978).unwrap();
    check(within(v, 2.2198, 0.0001), format!("10.4281 / 4.6978 = {v:.6}"))
}

fn per_letter_relations() -> Outcome {
    let di = per_letter_entropy(7.3223, 2).unwrap();
    let tri = per_letter_entropy(10.1432, 3).unwrap();
    let table_a = load_frequency_table(SAMPLE_TABLE_CSV.as_bytes()).unwrap();
    let table_b = load_frequency_table(SAMPLE_TABLE_CSV.as_bytes()).unwrap();
    let (ha, hb) = (word_entropy(&table_a), word_entropy(&table_b));
    let pass = within(di, 3.6612, 1e-4)
        && within(tri, 3.3811, 1e-4)
        && ha == hb
        && within(ha, SAMPLE_TABLE_WORD_ENTROPY, 1e-9);
    check(
        pass,
        format!("digram {di:.5}, trigram {tri:.5}, bundled table H = {ha:.12} bits/word"),
    )
}

fn published_rates() -> Outcome {
    let r = compute_rates(72, 1, 8022, 5749, 1003);
    let pass = within(r.ber, 0.000_124_66, 1e-8)
        && within(r.correction_rate_percent, 98.6111, 1e-4)
        && within(r.compression_rate_percent, 82.5535, 1e-4);
    check(
        pass,
        format!(
            "BER {:.8}, correction {:.4}%, compression {:.4}%",
            r.ber, r.correction_rate_percent, r.compression_rate_percent
        ),
    )
}

/// Minimum of `Σ c_i·l_i` over all length vectors satisfying Kraft's
/// inequality; lengths never need to exceed `n − 1`.
fn optimal_prefix_cost(counts: &[u64]) -> u64 {
    let n = counts.len();
    if n == 1 {
        return counts[0];
    }
    let max_len = (n - 1) as u32;
    let mut best = u64::MAX;
    let mut lens = vec![1u32; n];
    loop {
        let kraft: u64 = lens.iter().map(|&l| 1u64 << (max_len - l)).sum();
        if kraft <= 1u64 << max_len {
            best = best.min(counts.iter().zip(&lens).map(|(&c, &l)| c * u64::from(l)).sum());
        }
        let mut i = 0;
        while i < n && lens[i] == max_len {
            lens[i] = 1;
            i += 1;
        }
        if i == n {
            return best;
        }
        lens[i] += 1;
    }
}

fn huffman_bounds() -> Outcome {
    let mut rng = DetRng::new(6);
    for trial in 0..1000 {
        let n = 2 + rng.below(63) as usize;
        let counts = NGramCounts::from_pairs(1, (0..n).map(|i| (format!("s{i:02}"), 1 + rng.below(1000))));
        let book = huffman_build(&counts).unwrap();
        let h = shannon_entropy(&counts).unwrap().h_symbol;
        let avg = book.weighted_length(&counts);
        if !(h <= avg + 1e-12 && avg < h + 1.0) {
            return check(false, format!("random trial {trial}: H = {h}, L = {avg}"));
        }
    }

    let mut checked = 0usize;
    for n in 1..=5usize {
        let mut counts = vec![1u64; n];
        loop {
            let c = NGramCounts::from_pairs(1, counts.iter().enumerate().map(|(i, &c)| (format!("s{i}"), c)));
            let book = huffman_build(&c).unwrap();
            let cost: u64 = c.iter().map(|(s, k)| k * book.get(s).unwrap().len() as u64).sum();
            if cost != optimal_prefix_cost(&counts) {
                return check(false, format!("counts {counts:?}: Huffman cost {cost} not optimal"));
            }
            checked += 1;
            let mut i = 0;
            while i < n && counts[i] == 8 {
                counts[i] = 1;
                i += 1;
            }
            if i == n {
                break;
            }
            counts[i] += 1;
        }
    }

    let dyadic = NGramCounts::from_pairs(1, [("a", 4), ("b", 2), ("c", 1), ("d", 1)]);
    let book = huffman_build(&dyadic).unwrap();
    let (avg, h) = (
        book.weighted_length(&dyadic),
        shannon_entropy(&dyadic).unwrap().h_symbol,
    );
    check(
        avg == 1.75 && h == 1.75,
        format!("1000 random books within [H, H+1), {checked} small distributions optimal, dyadic L = H = {avg}"),
    )
}

fn draw_sequence(rng: &mut DetRng, cumulative: &[u64], n: usize) -> Vec<String> {
    let total = *cumulative.last().unwrap();
    (0..n)
        .map(|_| {
            let r = rng.below(total);
            format!("s{}", cumulative.partition_point(|&c| c <= r))
        })
        .collect()
}

fn random_cumulative(rng: &mut DetRng) -> Vec<u64> {
    let n = 2 + rng.below(200) as usize;
    let mut acc = 0;
    (0..n)
        .map(|_| {
            acc += 1 + rng.below(10_000);
            acc
        })
        .collect()
}

fn arithmetic_gap() -> Outcome {
    let mut rng = DetRng::new(7);
    let mut worst = f64::NEG_INFINITY;
    for model_idx in 0..10 {
        let cumulative = random_cumulative(&mut rng);
        let symbols = draw_sequence(&mut rng, &cumulative, 10_000);
        let stream = encode_symbols(&symbols, SourceCoder::Arithmetic, SymbolDomain::Word).unwrap();
        let h = shannon_entropy(&symbol_counts(&symbols)).unwrap().h_symbol;
        let gap = stream.payload.len() as f64 - symbols.len() as f64 * h;
        worst = worst.max(gap);
        if gap > 64.0 || decode_stream(&stream).unwrap() != symbols {
            return check(false, format!("model {model_idx}: gap {gap:.2} bits"));
        }
    }
    let cumulative = random_cumulative(&mut rng);
    let long = draw_sequence(&mut rng, &cumulative, 100_000);
    let model = SymbolModel::from_counts(&symbol_counts(&long)).unwrap();
    let bits = arithmetic_encode(&long, &model).unwrap();
    let back = arithmetic_decode(&bits, &model, long.len()).unwrap();
    check(
        back == long,
        format!(
            "worst gap {worst:.2} bits over N·H; 10^5-symbol roundtrip ok: {}",
            back == long
        ),
    )
}

fn rs_capability() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for k in [5, 9, 13] {
        let cfg = RsConfig::new(k).unwrap();
        let s = rs_trials(cfg, cfg.t(), 1000, 8_000 + k as u64, Execution::default()).unwrap();
        pass &= s.exact == 1000;
        parts.push(format!("k={k} t={}: {}/1000", cfg.t(), s.exact));
    }
    check(pass, parts.join(", "))
}

fn bits_of(value: u64, len: usize) -> BitStream {
    (0..len).map(|i| (value >> i) & 1 == 1).collect()
}

fn viterbi_identity() -> Outcome {
    let mut report = Vec::new();
    for id in [ConvCodeId::R14K3, ConvCodeId::R23K43] {
        let code = ConvCode::standard(id);
        let exhaustive_ok = (0..=16usize).all(|len| {
            Execution::default()
                .map_range(1 << len, |v| {
                    let x = bits_of(v as u64, len);
                    let mut y = code.decode(&code.encode(&x)).unwrap();
                    y.truncate(len);
                    y == x
                })
                .into_iter()
                .all(|ok| ok)
        });
        let random_ok = Execution::default()
            .map_range(1000, |i| {
                let mut rng = DetRng::with_stream(9, i as u64);
                let x: BitStream = (0..1024).map(|_| rng.below(2) == 1).collect();
                let mut y = code.decode(&code.encode(&x)).unwrap();
                y.truncate(1024);
                y == x
            })
            .into_iter()
            .all(|ok| ok);
        let mut flips = 0usize;
        let flip_ok = (0..16u64).all(|frame| {
            let mut rng = DetRng::with_stream(10, frame);
            let x: BitStream = (0..64).map(|_| rng.below(2) == 1).collect();
            let coded = code.encode(&x);
            flips += coded.len();
            Execution::default()
                .map_range(coded.len(), |pos| {
                    let mut r = coded.clone();
                    r.flip(pos);
                    let mut y = code.decode(&r).unwrap();
                    y.truncate(64);
                    y == x
                })
                .into_iter()
                .all(|ok| ok)
        });
        if !(exhaustive_ok && random_ok && flip_ok) {
            return check(
                false,
                format!("{id:?}: exhaustive {exhaustive_ok}, random {random_ok}, single flips {flip_ok}"),
            );
        }
        report.push(format!("{id:?} ok ({flips} single flips)"));
    }
    check(
        true,
        format!(
            "lengths 0..=16 exhaustive, 1000 x 1024-bit random; {}",
            report.join(", ")
        ),
    )
}

fn bsc_statistics() -> Outcome {
    let x = BitStream::zeros(10_000_000);
    let a = bsc_transmit(&x, 0.005, 20_240_101).unwrap();
    let b = bsc_transmit(&x, 0.005, 20_240_101).unwrap();
    let rate = a.errors_introduced as f64 / x.len() as f64;
    let pass = within(rate, 0.005, 0.0003) && a.flip_positions_digest == b.flip_positions_digest && a == b;
    check(
        pass,
        format!(
            "rate {rate:.6}, digest {:#018x} reproduced: {}",
            a.flip_positions_digest,
            a == b
        ),
    )
}

fn config(table: &Path, out: &Path, coder: SourceCoder, channel: ChannelCoder, p: f64) -> PipelineConfig {
    PipelineConfig {
        table_path: table.to_path_buf(),
        n_words: 1000,
        symbol_domain: SymbolDomain::Word,
        source_coder: coder,
        channel_coder: channel,
        p,
        seed: 2024,
        output_dir: out.to_path_buf(),
    }
}

fn clean_end_to_end(dir: &Path, table: &Path) -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for coder in [SourceCoder::Huffman, SourceCoder::Arithmetic] {
        for channel in ChannelCoder::ALL {
            let out = dir.join(format!("clean-{coder}-{channel}"));
            let r = run_pipeline(&config(table, &out, coder, channel, 0.0)).unwrap();
            runs += 1;
            if !(r.files_identical && r.residual_error_bits == 0 && r.correction_rate_percent == 100.0) {
                failures.push(format!("{coder}+{channel}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!("{runs} source x channel combinations identical at p = 0; failures: {failures:?}"),
    )
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism(dir: &Path, table: &Path) -> Outcome {
    let a = dir.join("det-a");
    let b = dir.join("det-b");
    let cfg_a = config(table, &a, SourceCoder::Huffman, ChannelCoder::ConvR23K43, 0.005);
    let cfg_b = PipelineConfig {
        output_dir: b.clone(),
        ..cfg_a.clone()
    };
    let ra = run_pipeline(&cfg_a).unwrap();
    let rb = run_pipeline(&cfg_b).unwrap();
    let (fa, fb) = (read_dir_sorted(&a), read_dir_sorted(&b));
    check(
        ra == rb && fa == fb && fa.len() == 8,
        format!(
            "{} artifacts byte-identical: {}; run had {} channel errors, {} residual",
            fa.len(),
            fa == fb,
            ra.error_bits,
            ra.residual_error_bits
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let table = dir.path().join("sample_es.csv");
    fs::write(&table, SAMPLE_TABLE_CSV).expect("write table");

    type Criterion<'a> = (&'a str, Duration, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("ln M from k and J", Duration::from_secs(1), Box::new(ln_m)),
        (
            "letter entropy per word F_W",
            Duration::from_secs(1),
            Box::new(letter_entropy),
        ),
        (
            "entropy rate arithmetic",
            Duration::from_secs(1),
            Box::new(rate_arithmetic),
        ),
        (
            "per-letter n-gram entropy",
            Duration::from_secs(1),
            Box::new(per_letter_relations),
        ),
        (
            "BER, correction and compression rates",
            Duration::from_secs(1),
            Box::new(published_rates),
        ),
        (
            "Huffman bounds and optimality",
            Duration::from_secs(30),
            Box::new(huffman_bounds),
        ),
        (
            "arithmetic coding gap",
            Duration::from_secs(30),
            Box::new(arithmetic_gap),
        ),
        (
            "Reed-Solomon capability",
            Duration::from_secs(60),
            Box::new(rs_capability),
        ),
        (
            "convolutional / Viterbi identity",
            Duration::from_secs(120),
            Box::new(viterbi_identity),
        ),
        ("BSC statistics", Duration::from_secs(30), Box::new(bsc_statistics)),
        (
            "clean channel end to end",
            Duration::from_secs(60),
            Box::new(|| clean_end_to_end(dir.path(), &table)),
        ),
        (
            "pipeline determinism",
            Duration::from_secs(60),
            Box::new(|| determinism(dir.path(), &table)),
        ),
    ];

    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = outcome.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2}. {name}: {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
