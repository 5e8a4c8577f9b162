//! Systematic Reed-Solomon codes RS(15, k) over GF(16).
//!
//! Generator `g(x) = Π_{i=1..n−k} (x − α^i)`. Codewords are stored highest
//! degree first: the `k` message symbols followed by the `n − k` parity
//! symbols. Decoding runs syndromes → Berlekamp-Massey → Chien search →
//! Forney.

use serde::{Deserialize, Serialize};

use super::gf16::{self, alpha_pow, mul, poly_eval};
use crate::{Error, Result};

/// Codeword length in symbols.
pub const N: usize = 15;
/// Bits per symbol.
pub const SYMBOL_BITS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RsConfig {
    k: usize,
}

impl RsConfig {
    /// RS(15, k); `15 − k` must be even and positive.
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k >= N || !(N - k).is_multiple_of(2) {
            return Err(Error::Domain(format!("RS(15, {k}) needs odd k in 1..=13")));
        }
        Ok(Self { k })
    }

    pub fn n(&self) -> usize {
        N
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        SYMBOL_BITS
    }

    /// Correctable symbol errors.
    pub fn t(&self) -> usize {
        (N - self.k) / 2
    }

    pub fn parity(&self) -> usize {
        N - self.k
    }
}

/// Encoder/decoder with a precomputed generator polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsCode {
    cfg: RsConfig,
    /// Monic, highest degree first, length `n − k + 1`.
    generator: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsDecoded {
    pub message: Vec<u8>,
    pub corrected: usize,
}

impl RsCode {
    pub fn new(cfg: RsConfig) -> Self {
        let mut g = vec![1u8];
        for i in 1..=cfg.parity() {
            // g(x) · (x + α^i)
            let root = alpha_pow(i as i64);
            let mut next = vec![0u8; g.len() + 1];
            for (j, &c) in g.iter().enumerate() {
                next[j] ^= c;
                next[j + 1] ^= mul(c, root);
            }
            g = next;
        }
        Self { cfg, generator: g }
    }

    pub fn config(&self) -> RsConfig {
        self.cfg
    }

    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        let k = self.cfg.k;
        if message.len() != k {
            return Err(Error::Domain(format!(
                "RS message needs {k} symbols, got {}",
                message.len()
            )));
        }
        if let Some(&s) = message.iter().find(|&&s| s > 15) {
            return Err(Error::Domain(format!("symbol {s} does not fit in 4 bits")));
        }
        let p = self.cfg.parity();
        let mut rem = vec![0u8; p];
        for &sym in message {
            let feedback = sym ^ rem[0];
            rem.rotate_left(1);
            rem[p - 1] = 0;
            if feedback != 0 {
                for (r, &g) in rem.iter_mut().zip(&self.generator[1..]) {
                    *r ^= mul(feedback, g);
                }
            }
        }
        let mut codeword = message.to_vec();
        codeword.extend_from_slice(&rem);
        Ok(codeword)
    }

    /// `S_i = r(α^i)` for `i = 1..=n−k`.
    pub fn syndromes(&self, received: &[u8]) -> Vec<u8> {
        (1..=self.cfg.parity())
            .map(|i| poly_eval(received, alpha_pow(i as i64)))
            .collect()
    }

    /// Corrects up to `t` symbol errors. More errors either fail with
    /// [`Error::Decode`] or, when the pattern lands within `t` of another
    /// codeword, decode to a wrong message without notice.
    pub fn decode(&self, received: &[u8]) -> Result<RsDecoded> {
        if received.len() != N {
            return Err(Error::Domain(format!(
                "RS codeword needs {N} symbols, got {}",
                received.len()
            )));
        }
        if let Some(&s) = received.iter().find(|&&s| s > 15) {
            return Err(Error::Domain(format!("symbol {s} does not fit in 4 bits")));
        }
        let k = self.cfg.k;
        let syndromes = self.syndromes(received);
        if syndromes.iter().all(|&s| s == 0) {
            return Ok(RsDecoded {
                message: received[..k].to_vec(),
                corrected: 0,
            });
        }
        let failure = |why: &str| Error::Decode {
            offset: 0,
            message: format!("RS(15, {k}) decoding failure: {why}"),
        };

        let locator = berlekamp_massey(&syndromes);
        let errors = locator.len() - 1;
        if errors > self.cfg.t() {
            return Err(failure("error locator degree exceeds t"));
        }

        // Chien search: position j carries x^(n-1-j); it is in error when
        // Λ(α^-(n-1-j)) = 0.
        let positions: Vec<usize> = (0..N)
            .filter(|&j| poly_eval_low(&locator, alpha_pow(-((N - 1 - j) as i64))) == 0)
            .collect();
        if positions.len() != errors {
            return Err(failure("locator roots do not match its degree"));
        }

        // Ω(x) = S(x)·Λ(x) mod x^(2t), lowest degree first.
        let two_t = syndromes.len();
        let mut omega = vec![0u8; two_t];
        for (i, &s) in syndromes.iter().enumerate() {
            for (j, &l) in locator.iter().enumerate() {
                if i + j < two_t {
                    omega[i + j] ^= mul(s, l);
                }
            }
        }
        // Formal derivative: only odd powers survive in characteristic 2.
        let derivative: Vec<u8> = locator
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();

        let mut corrected = received.to_vec();
        for &j in &positions {
            let x_inv = alpha_pow(-((N - 1 - j) as i64));
            let num = poly_eval_low(&omega, x_inv);
            let den = poly_eval_low(&derivative, x_inv);
            let magnitude = gf16::div(num, den).ok_or_else(|| failure("zero locator derivative"))?;
            corrected[j] ^= magnitude;
        }
        if self.syndromes(&corrected).iter().any(|&s| s != 0) {
            return Err(failure("corrected word is not a codeword"));
        }
        Ok(RsDecoded {
            message: corrected[..k].to_vec(),
            corrected: positions.len(),
        })
    }
}

/// Evaluates a polynomial stored lowest degree first.
fn poly_eval_low(coeffs: &[u8], x: u8) -> u8 {
    coeffs.iter().rev().fold(0, |acc, &c| mul(acc, x) ^ c)
}

/// Error locator `Λ(x)` (lowest degree first, `Λ_0 = 1`), trimmed to its degree.
fn berlekamp_massey(syndromes: &[u8]) -> Vec<u8> {
    let len = syndromes.len() + 1;
    let mut c = vec![0u8; len];
    let mut b = vec![0u8; len];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_d = 1u8;
    for n in 0..syndromes.len() {
        let mut d = syndromes[n];
        for i in 1..=l {
            d ^= mul(c[i], syndromes[n - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = gf16::div(d, last_d).expect("last discrepancy is non-zero");
        let prev = c.clone();
        for i in 0..len - shift {
            c[i + shift] ^= mul(coef, b[i]);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last_d = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.truncate(l + 1);
    c
}
