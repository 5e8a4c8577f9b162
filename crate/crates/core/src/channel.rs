//! Binary symmetric channel.
//!
//! Each bit draws one uniform `u` from [`DetRng::new(seed)`](crate::prng::DetRng)
//! in stream order and is flipped when `u < p`. The flipped positions are
//! summarised by a 64-bit FNV-1a digest over their indices (u64, little-endian),
//! so two runs can be compared without storing the positions.

use serde::{Deserialize, Serialize};

use crate::bits::BitStream;
use crate::prng::DetRng;
use crate::{Error, Result};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutcome {
    pub received: BitStream,
    pub errors_introduced: usize,
    pub flip_positions_digest: u64,
}

/// Summary of a transmission, without the received bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub bits: usize,
    pub errors: usize,
    pub rate: f64,
    pub digest: u64,
}

impl ChannelOutcome {
    pub fn stats(&self) -> ChannelStats {
        let bits = self.received.len();
        ChannelStats {
            bits,
            errors: self.errors_introduced,
            rate: if bits == 0 {
                0.0
            } else {
                self.errors_introduced as f64 / bits as f64
            },
            digest: self.flip_positions_digest,
        }
    }
}

/// Sends `bits` through a BSC with crossover probability `p`.
pub fn bsc_transmit(bits: &BitStream, p: f64, seed: u64) -> Result<ChannelOutcome> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("error probability {p} outside [0, 1]")));
    }
    let mut rng = DetRng::new(seed);
    let mut received = bits.clone();
    let mut errors = 0usize;
    let mut digest = FNV_OFFSET;
    for i in 0..bits.len() {
        if rng.bernoulli(p) {
            received.flip(i);
            errors += 1;
            for byte in (i as u64).to_le_bytes() {
                digest = (digest ^ u64::from(byte)).wrapping_mul(FNV_PRIME);
            }
        }
    }
    Ok(ChannelOutcome {
        received,
        errors_introduced: errors,
        flip_positions_digest: digest,
    })
}

pub fn hamming_distance(a: &BitStream, b: &BitStream) -> Result<usize> {
    a.xor(b)
        .map(|d| d.count_ones())
        .ok_or_else(|| Error::Domain(format!("length mismatch: {} vs {} bits", a.len(), b.len())))
}
