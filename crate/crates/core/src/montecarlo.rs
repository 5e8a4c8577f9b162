//! Monte Carlo experiments over the channel codes.
//!
//! Trial `i` of an experiment seeded with `seed` uses
//! `DetRng::with_stream(seed, i)`, so results do not depend on how trials are
//! scheduled and sequential and parallel runs agree exactly.

use serde::{Deserialize, Serialize};

use crate::bits::BitStream;
use crate::channel::{bsc_transmit, hamming_distance};
use crate::channel_coding::{decode_frame_with, encode_frame_with, ChannelCoder, RsCode, RsConfig};
use crate::prng::{derive_seed, DetRng};
use crate::{Error, Execution, Result};

/// Outcome counts of [`rs_trials`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsTrialSummary {
    pub trials: usize,
    pub symbol_errors: usize,
    /// Decoded message equal to the sent one.
    pub exact: usize,
    /// Decoder reported failure.
    pub failures: usize,
    /// Decoder returned a wrong message without noticing.
    pub miscorrections: usize,
}

/// Encodes a random message per trial, corrupts exactly `symbol_errors`
/// distinct symbols with non-zero error values and decodes.
pub fn rs_trials(
    cfg: RsConfig,
    symbol_errors: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<RsTrialSummary> {
    if symbol_errors > cfg.n() {
        return Err(Error::Domain(format!(
            "{symbol_errors} errors in a {}-symbol codeword",
            cfg.n()
        )));
    }
    let code = RsCode::new(cfg);
    let outcomes = exec.map_range(trials, |i| {
        let mut rng = DetRng::with_stream(seed, i as u64);
        let message: Vec<u8> = (0..cfg.k()).map(|_| rng.below(16) as u8).collect();
        let mut word = code.encode(&message).expect("message length equals k");
        for pos in rng.distinct_indices(cfg.n(), symbol_errors) {
            word[pos] ^= 1 + rng.below(15) as u8;
        }
        match code.decode(&word) {
            Ok(d) if d.message == message => 0u8,
            Ok(_) => 2,
            Err(_) => 1,
        }
    });
    let count = |v: u8| outcomes.iter().filter(|&&o| o == v).count();
    Ok(RsTrialSummary {
        trials,
        symbol_errors,
        exact: count(0),
        failures: count(1),
        miscorrections: count(2),
    })
}

/// One point of a BER curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub p: f64,
    pub trials: usize,
    pub info_bits: usize,
    pub channel_bits: usize,
    pub channel_errors: usize,
    pub residual_errors: usize,
    /// Residual errors per information bit.
    pub ber: f64,
    /// Channel errors per transmitted bit.
    pub channel_ber: f64,
}

/// Residual bit error rate of `coder` over a BSC for each `p`, averaged over
/// `trials` random frames of `frame_bits` bits.
pub fn ber_sweep(
    coder: ChannelCoder,
    ps: &[f64],
    frame_bits: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<BerPoint>> {
    if let Some(&bad) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Domain(format!("error probability {bad} outside [0, 1]")));
    }
    let code = coder.build();
    ps.iter()
        .enumerate()
        .map(|(pi, &p)| {
            let point_seed = derive_seed(seed, pi as u64);
            let per_trial = exec.map_range(trials, |i| -> Result<(usize, usize, usize)> {
                let mut rng = DetRng::with_stream(point_seed, 2 * i as u64);
                let payload: BitStream = (0..frame_bits).map(|_| rng.below(2) == 1).collect();
                let mut frame = encode_frame_with(&payload, coder, &code);
                let outcome = bsc_transmit(&frame.coded, p, derive_seed(point_seed, 2 * i as u64 + 1))?;
                frame.coded = outcome.received;
                let decoded = decode_frame_with(&frame, &code)?;
                let residual = hamming_distance(&decoded.payload, &payload)?;
                Ok((frame.coded.len(), outcome.errors_introduced, residual))
            });
            let mut point = BerPoint {
                p,
                trials,
                info_bits: frame_bits * trials,
                channel_bits: 0,
                channel_errors: 0,
                residual_errors: 0,
                ber: 0.0,
                channel_ber: 0.0,
            };
            for r in per_trial {
                let (bits, errors, residual) = r?;
                point.channel_bits += bits;
                point.channel_errors += errors;
                point.residual_errors += residual;
            }
            if point.info_bits > 0 {
                point.ber = point.residual_errors as f64 / point.info_bits as f64;
            }
            if point.channel_bits > 0 {
                point.channel_ber = point.channel_errors as f64 / point.channel_bits as f64;
            }
            Ok(point)
        })
        .collect()
}

/// Writes a sweep as CSV: `p,trials,info_bits,channel_bits,channel_errors,residual_errors,ber,channel_ber`.
pub fn write_sweep_csv<W: std::io::Write>(points: &[BerPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "p",
        "trials",
        "info_bits",
        "channel_bits",
        "channel_errors",
        "residual_errors",
        "ber",
        "channel_ber",
    ])?;
    for pt in points {
        w.write_record([
            pt.p.to_string(),
            pt.trials.to_string(),
            pt.info_bits.to_string(),
            pt.channel_bits.to_string(),
            pt.channel_errors.to_string(),
            pt.residual_errors.to_string(),
            format!("{:.8e}", pt.ber),
            format!("{:.8e}", pt.channel_ber),
        ])?;
    }
    w.flush()?;
    Ok(())
}
