//! Letter entropy per word from word statistics (Barnard's method), word
//! entropy and entropy rate.
//!
//! Given the Zipf language constant `k`, the average word length `α` and the
//! dictionary size `J`, the vocabulary is extrapolated to the size `M` at which
//! the Zipf tail sums to one:
//!
//! ```text
//! ln M = 1/k − Σ_{n=1..J} 1/n + ln(J + ½)
//! F_W  = −(log2 e / α) · [ ln k − k · ( Σ_{n=1..J} ln n / n + (ln M)²/2 − (ln(J + ½))²/2 ) ]
//! ```
//!
//! Both sums are evaluated term by term; asymptotic expansions of the harmonic
//! numbers are not accurate enough to reproduce published four-decimal values.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::WordFrequencyTable;
use crate::{Error, Result};

/// log2(e) rounded to five decimals, as it appears in the usual statement of
/// the formula. The difference from `LOG2_E` is below 1e-5 bits/letter.
#[allow(clippy::approx_constant)]
pub const LOG2_E_PRINTED: f64 = 1.44269;

/// Default rank window for estimating `k`.
pub const DEFAULT_RANK_WINDOW: (usize, usize) = (1, 1000);

/// Neumaier-compensated sum in iteration order.
pub fn ordered_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `Σ_{n=1..j} 1/n`.
pub fn harmonic_sum(j: u64) -> f64 {
    ordered_sum((1..=j).map(|n| 1.0 / n as f64))
}

/// `Σ_{n=1..j} ln n / n`.
pub fn log_harmonic_sum(j: u64) -> f64 {
    ordered_sum((1..=j).map(|n| {
        let n = n as f64;
        n.ln() / n
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarnardInputs {
    pub k: f64,
    pub alpha: f64,
    pub j: u64,
}

impl BarnardInputs {
    /// Validates `0 < k < 1`, `α ≥ 1`, `J ≥ 1`.
    pub fn new(k: f64, alpha: f64, j: u64) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 || k >= 1.0 {
            return Err(Error::Domain(format!("language constant k = {k} outside (0, 1)")));
        }
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::Domain(format!("average word length α = {alpha} below 1")));
        }
        if j == 0 {
            return Err(Error::Domain("dictionary size J must be at least 1".into()));
        }
        Ok(Self { k, alpha, j })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarnardResult {
    pub ln_m: f64,
    /// Letter entropy per word, bits/letter.
    pub f_w: f64,
    pub harmonic_sum: f64,
    pub logsum: f64,
}

/// Mean of `n · P_n` over ranks `rank_lo..=rank_hi`.
pub fn estimate_k(table: &WordFrequencyTable, rank_lo: usize, rank_hi: usize) -> Result<f64> {
    if rank_lo < 1 || rank_lo > rank_hi || rank_hi > table.len() {
        return Err(Error::Domain(format!(
            "rank window {rank_lo}..={rank_hi} outside 1..={}",
            table.len()
        )));
    }
    let records = &table.records()[rank_lo - 1..rank_hi];
    let sum = ordered_sum(records.iter().map(|r| r.rank as f64 * r.probability));
    Ok(sum / records.len() as f64)
}

/// `ln M = 1/k − H_J + ln(J + ½)`.
pub fn solve_ln_m(k: f64, j: u64) -> Result<f64> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::Domain(format!("language constant k = {k} must be positive")));
    }
    if j == 0 {
        return Err(Error::Domain("dictionary size J must be at least 1".into()));
    }
    Ok(ln_m_from_harmonic(k, j, harmonic_sum(j)))
}

fn ln_m_from_harmonic(k: f64, j: u64, harmonic: f64) -> f64 {
    1.0 / k - harmonic + (j as f64 + 0.5).ln()
}

pub fn letter_entropy_per_word(inputs: BarnardInputs) -> Result<BarnardResult> {
    let BarnardInputs { k, alpha, j } = BarnardInputs::new(inputs.k, inputs.alpha, inputs.j)?;
    let harmonic = harmonic_sum(j);
    let logsum = log_harmonic_sum(j);
    let ln_m = ln_m_from_harmonic(k, j, harmonic);
    let ln_j = (j as f64 + 0.5).ln();
    let bracket = k.ln() - k * (logsum + (ln_m * ln_m / 2.0 - ln_j * ln_j / 2.0));
    Ok(BarnardResult {
        ln_m,
        f_w: -LOG2_E_PRINTED / alpha * bracket,
        harmonic_sum: harmonic,
        logsum,
    })
}

/// `−Σ P_i log2 P_i` over the table, bits/word.
pub fn word_entropy(table: &WordFrequencyTable) -> f64 {
    let h = ordered_sum(table.probabilities().filter(|&p| p > 0.0).map(|p| -p * p.log2()));
    h.max(0.0)
}

/// Bits per letter of an independent-word source.
pub fn entropy_rate(h_word: f64, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha < 1.0 {
        return Err(Error::Domain(format!("average word length α = {alpha} below 1")));
    }
    Ok(h_word / alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankCurvePoint {
    pub rank: usize,
    pub probability: f64,
    pub log10_rank: f64,
    pub log10_probability: f64,
}

/// Up to `max_points` points of the rank/probability curve, spaced
/// logarithmically in rank and always including the first and last rank.
pub fn rank_probability_curve(table: &WordFrequencyTable, max_points: usize) -> Result<Vec<RankCurvePoint>> {
    if max_points < 2 {
        return Err(Error::Domain("curve needs at least 2 points".into()));
    }
    let j = table.len();
    let ranks: Vec<usize> = if j <= max_points {
        (1..=j).collect()
    } else {
        let step = (j as f64).ln() / (max_points - 1) as f64;
        let mut ranks: Vec<usize> = (0..max_points)
            .map(|i| ((i as f64 * step).exp().round() as usize).clamp(1, j))
            .collect();
        ranks.dedup();
        if ranks.last() != Some(&j) {
            ranks.push(j);
        }
        ranks
    };
    Ok(ranks
        .into_iter()
        .map(|rank| {
            let probability = table.records()[rank - 1].probability;
            RankCurvePoint {
                rank,
                probability,
                log10_rank: (rank as f64).log10(),
                log10_probability: probability.log10(),
            }
        })
        .collect())
}

pub fn export_curve_csv<W: Write>(points: &[RankCurvePoint], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["rank", "probability", "log10_rank", "log10_p"])?;
    for p in points {
        w.write_record([
            p.rank.to_string(),
            p.probability.to_string(),
            p.log10_rank.to_string(),
            p.log10_probability.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Everything the `barnard` command reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarnardSummary {
    pub k: f64,
    pub alpha: f64,
    pub j: u64,
    pub ln_m: f64,
    pub f_w: f64,
    pub h_word: f64,
    pub entropy_rate: f64,
}

impl BarnardSummary {
    /// Runs the method on `table`. `k` and `alpha` default to values measured
    /// on the table; `j` defaults to the table size.
    pub fn from_table(
        table: &WordFrequencyTable,
        rank_window: (usize, usize),
        k: Option<f64>,
        alpha: Option<f64>,
        j: Option<u64>,
    ) -> Result<Self> {
        let k = match k {
            Some(k) => k,
            None => estimate_k(table, rank_window.0, rank_window.1.min(table.len()))?,
        };
        let alpha = alpha.unwrap_or_else(|| crate::corpus::average_word_length(table));
        let j = j.unwrap_or(table.len() as u64);
        let result = letter_entropy_per_word(BarnardInputs::new(k, alpha, j)?)?;
        let h_word = word_entropy(table);
        Ok(Self {
            k,
            alpha,
            j,
            ln_m: result.ln_m,
            f_w: result.f_w,
            h_word,
            entropy_rate: entropy_rate(h_word, alpha)?,
        })
    }

    pub fn to_text(&self) -> String {
        format!(
            "k: {:.4}\nalpha: {:.4}\nJ: {}\nln M: {:.4}\nF_W: {:.4} bits/letter\nH_word: {:.4} bits/word\nentropy rate: {:.4} bits/letter\n",
            self.k, self.alpha, self.j, self.ln_m, self.f_w, self.h_word, self.entropy_rate
        )
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["k", "alpha", "J", "ln_M", "F_W", "H_word", "entropy_rate"])?;
        w.write_record([
            self.k.to_string(),
            self.alpha.to_string(),
            self.j.to_string(),
            self.ln_m.to_string(),
            self.f_w.to_string(),
            self.h_word.to_string(),
            self.entropy_rate.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    }
}
