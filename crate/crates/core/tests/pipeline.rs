use std::fs;
use std::path::{Path, PathBuf};

use ittutor_core::channel_coding::{code_overhead, ChannelCoder, CodedFrame};
use ittutor_core::corpus::SAMPLE_TABLE_CSV;
use ittutor_core::pipeline::{run_pipeline, PipelineConfig, PipelineReport};
use ittutor_core::source_coding::{decode_stream, EncodedStream, SourceCoder, SymbolDomain};

const DOMAINS: [SymbolDomain; 4] = [
    SymbolDomain::Letter,
    SymbolDomain::Digram,
    SymbolDomain::Trigram,
    SymbolDomain::Word,
];
const CODERS: [SourceCoder; 2] = [SourceCoder::Huffman, SourceCoder::Arithmetic];

fn setup() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    fs::write(&table, SAMPLE_TABLE_CSV).unwrap();
    (dir, table)
}

fn cfg(
    table: &Path,
    out: PathBuf,
    domain: SymbolDomain,
    coder: SourceCoder,
    channel: ChannelCoder,
    p: f64,
    seed: u64,
) -> PipelineConfig {
    PipelineConfig {
        table_path: table.to_path_buf(),
        n_words: 300,
        symbol_domain: domain,
        source_coder: coder,
        channel_coder: channel,
        p,
        seed,
        output_dir: out,
    }
}

fn assert_identities(r: &PipelineReport) {
    assert_eq!(
        r.transmitted_bits as usize,
        code_overhead(r.channel_coder, r.information_bits as usize)
    );
    assert!(r.residual_error_bits <= r.information_bits);
    // BER · info_bits = residual exactly, up to float rounding.
    assert!((r.ber * r.information_bits as f64 - r.residual_error_bits as f64).abs() < 1e-6);
    if r.error_bits == 0 {
        assert_eq!(r.correction_rate_percent, 100.0);
    } else {
        let expected = 100.0 * (r.error_bits as f64 - r.residual_error_bits as f64) / r.error_bits as f64;
        assert!((r.correction_rate_percent - expected).abs() < 1e-9);
    }
    assert_eq!(r.files_identical, r.symbol_mismatches == 0);
    let compression = (1.0 - r.encoded_size_bytes as f64 / r.original_size_bytes as f64) * 100.0;
    assert!((r.compression_rate_percent - compression).abs() < 1e-9);
}

#[test]
fn clean_channel_every_domain_and_code() {
    let (dir, table) = setup();
    for domain in DOMAINS {
        for coder in CODERS {
            for channel in ChannelCoder::ALL {
                let out = dir.path().join(format!("{domain}-{coder}-{channel}"));
                let r = run_pipeline(&cfg(&table, out.clone(), domain, coder, channel, 0.0, 1)).unwrap();
                assert!(r.files_identical, "{domain} {coder} {channel}");
                assert_eq!(r.error_bits, 0);
                assert_identities(&r);
                assert_eq!(
                    fs::read_to_string(out.join("decoded.txt")).unwrap(),
                    fs::read_to_string(out.join("source.txt")).unwrap()
                );
                assert_eq!(out.join("codebook.csv").exists(), coder == SourceCoder::Huffman);
            }
        }
    }
}

#[test]
fn noisy_runs_keep_report_identities() {
    let (dir, table) = setup();
    for channel in ChannelCoder::ALL {
        for seed in 0..3 {
            let out = dir.path().join(format!("{channel}-{seed}"));
            let r = run_pipeline(&cfg(
                &table,
                out,
                SymbolDomain::Word,
                SourceCoder::Huffman,
                channel,
                0.01,
                seed,
            ))
            .unwrap();
            assert_identities(&r);
            assert!(r.error_bits > 0);
        }
    }
}

#[test]
fn strong_codes_clean_up_light_noise() {
    let (dir, table) = setup();
    let mut identical = 0;
    for seed in 0..10 {
        let out = dir.path().join(format!("light-{seed}"));
        let r = run_pipeline(&cfg(
            &table,
            out,
            SymbolDomain::Word,
            SourceCoder::Arithmetic,
            ChannelCoder::ConvR14K3,
            0.002,
            seed,
        ))
        .unwrap();
        identical += usize::from(r.files_identical);
    }
    assert!(identical >= 9, "{identical}/10");
}

#[test]
fn artifacts_parse_back() {
    let (dir, table) = setup();
    let out = dir.path().join("artifacts");
    let r = run_pipeline(&cfg(
        &table,
        out.clone(),
        SymbolDomain::Trigram,
        SourceCoder::Huffman,
        ChannelCoder::Rs15k9,
        0.01,
        7,
    ))
    .unwrap();

    let stream = EncodedStream::from_bytes(&fs::read(out.join("encoded.bin")).unwrap()).unwrap();
    let source = fs::read_to_string(out.join("source.txt")).unwrap();
    assert_eq!(
        SymbolDomain::Trigram.detokenize(&decode_stream(&stream).unwrap()),
        source
    );
    assert_eq!(stream.payload.len() as u64, r.information_bits);

    let frame = CodedFrame::from_bytes(&fs::read(out.join("received.bin")).unwrap()).unwrap();
    assert_eq!(frame.code, ChannelCoder::Rs15k9);
    assert_eq!(frame.coded.len() as u64, r.transmitted_bits);

    let json: PipelineReport = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(json, r);
    let text = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(text.contains(&format!("Number of transmitted bits: {}", r.transmitted_bits)));
    assert!(text.contains(&format!("Error bits: {}", r.error_bits)));

    let freq = fs::read_to_string(out.join("frequencies.csv")).unwrap();
    assert_eq!(freq.lines().next(), Some("symbol,frequency,p"));
}

#[test]
fn typical_experiment_shape() {
    // 1000 words, Huffman, rate-2/3 code, p = 0.005.
    let (dir, table) = setup();
    let mut c = cfg(
        &table,
        dir.path().join("typical"),
        SymbolDomain::Word,
        SourceCoder::Huffman,
        ChannelCoder::ConvR23K43,
        0.005,
        11,
    );
    c.n_words = 1000;
    let r = run_pipeline(&c).unwrap();
    assert_identities(&r);
    assert_eq!(
        r.transmitted_bits as usize,
        (r.information_bits as usize).div_ceil(2) * 3 + 9
    );
    let expected = r.transmitted_bits as f64 * 0.005;
    assert!((r.error_bits as f64 - expected).abs() < 4.0 * (expected * 0.995).sqrt() + 1.0);
    assert!(r.compression_rate_percent > 50.0);
}

#[test]
fn invalid_configs_are_validation_errors() {
    let (dir, table) = setup();
    let mut c = cfg(
        &table,
        dir.path().join("bad"),
        SymbolDomain::Word,
        SourceCoder::Huffman,
        ChannelCoder::None,
        1.5,
        0,
    );
    let e = run_pipeline(&c).unwrap_err();
    assert_eq!(e.kind(), ittutor_core::ErrorKind::Validation);
    c.p = 0.1;
    c.n_words = 0;
    assert!(run_pipeline(&c).is_err());
    c.n_words = 5;
    c.table_path = dir.path().join("missing.csv");
    assert!(run_pipeline(&c).is_err());
}
