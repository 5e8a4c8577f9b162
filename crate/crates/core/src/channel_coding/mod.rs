//! Forward error correction: RS(15, k) block codes and two convolutional codes.
//!
//! [`encode_frame`] / [`decode_frame`] turn an arbitrary-length bit payload
//! into a [`CodedFrame`] and back:
//!
//! * RS: the payload is zero-padded to a whole number of `k`-symbol messages,
//!   cut into 4-bit symbols (MSB first) and each message is encoded into a
//!   15-symbol codeword.
//! * Convolutional: the payload is zero-padded to a multiple of the number of
//!   inputs and encoded with zero-tail termination.
//!
//! The pad length travels in the frame header so decoding returns exactly the
//! original number of payload bits.

pub mod conv;
pub mod gf16;
pub mod rs;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use conv::{ConvCode, ConvCodeId};
pub use gf16::{gf16_arithmetic, Gf16Op};
pub use rs::{RsCode, RsConfig, RsDecoded};

use crate::bits::BitStream;
use crate::source_coding::container::Reader;
use crate::{Error, Result};

/// Channel code selection as exposed on the command line and in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelCoder {
    None,
    Rs15k5,
    Rs15k9,
    Rs15k13,
    ConvR14K3,
    ConvR23K43,
}

impl ChannelCoder {
    pub const ALL: [ChannelCoder; 6] = [
        ChannelCoder::None,
        ChannelCoder::Rs15k5,
        ChannelCoder::Rs15k9,
        ChannelCoder::Rs15k13,
        ChannelCoder::ConvR14K3,
        ChannelCoder::ConvR23K43,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelCoder::None => "none",
            ChannelCoder::Rs15k5 => "rs15k5",
            ChannelCoder::Rs15k9 => "rs15k9",
            ChannelCoder::Rs15k13 => "rs15k13",
            ChannelCoder::ConvR14K3 => "conv-r14-k3",
            ChannelCoder::ConvR23K43 => "conv-r23-k43",
        }
    }

    pub fn rs_config(self) -> Option<RsConfig> {
        let k = match self {
            ChannelCoder::Rs15k5 => 5,
            ChannelCoder::Rs15k9 => 9,
            ChannelCoder::Rs15k13 => 13,
            _ => return None,
        };
        Some(RsConfig::new(k).expect("built-in RS parameters"))
    }

    pub fn conv_id(self) -> Option<ConvCodeId> {
        match self {
            ChannelCoder::ConvR14K3 => Some(ConvCodeId::R14K3),
            ChannelCoder::ConvR23K43 => Some(ConvCodeId::R23K43),
            _ => None,
        }
    }

    fn tag(self) -> u8 {
        Self::ALL.iter().position(|&c| c == self).unwrap() as u8
    }

    fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.get(tag as usize).copied()
    }

    /// Instantiates the encoder/decoder.
    pub fn build(self) -> ChannelCode {
        if let Some(cfg) = self.rs_config() {
            ChannelCode::ReedSolomon(RsCode::new(cfg))
        } else if let Some(id) = self.conv_id() {
            ChannelCode::Convolutional(ConvCode::standard(id))
        } else {
            ChannelCode::None
        }
    }
}

impl fmt::Display for ChannelCoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelCoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canonical = s.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|c| c.name() == canonical)
            .ok_or_else(|| Error::Validation(format!("unknown channel code {s:?}")))
    }
}

/// A ready-to-use channel code.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelCode {
    None,
    ReedSolomon(RsCode),
    Convolutional(ConvCode),
}

impl ChannelCode {
    /// Zero bits appended to a `payload_bits` payload before coding.
    pub fn pad_len(&self, payload_bits: usize) -> usize {
        match self {
            ChannelCode::None => 0,
            ChannelCode::ReedSolomon(code) => {
                let block = code.config().k() * rs::SYMBOL_BITS;
                payload_bits.div_ceil(block) * block - payload_bits
            }
            ChannelCode::Convolutional(code) => code.pad_len(payload_bits),
        }
    }

    /// Exact coded length including padding and termination.
    pub fn coded_len(&self, payload_bits: usize) -> usize {
        match self {
            ChannelCode::None => payload_bits,
            ChannelCode::ReedSolomon(code) => {
                let cfg = code.config();
                let blocks = (payload_bits + self.pad_len(payload_bits)) / (cfg.k() * rs::SYMBOL_BITS);
                blocks * cfg.n() * rs::SYMBOL_BITS
            }
            ChannelCode::Convolutional(code) => code.coded_len(payload_bits),
        }
    }
}

/// Coded bits for `payload_bits` information bits under `coder`.
pub fn code_overhead(coder: ChannelCoder, payload_bits: usize) -> usize {
    coder.build().coded_len(payload_bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedFrame {
    pub code: ChannelCoder,
    pub payload_bits: u64,
    pub pad_bits: u8,
    pub coded: BitStream,
}

/// Result of decoding a (possibly corrupted) frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameDecode {
    /// Exactly `payload_bits` bits.
    pub payload: BitStream,
    pub rs_blocks: usize,
    /// RS blocks left uncorrected (systematic symbols passed through).
    pub rs_failures: usize,
    pub corrected_symbols: usize,
}

pub fn encode_frame(payload: &BitStream, coder: ChannelCoder) -> CodedFrame {
    encode_frame_with(payload, coder, &coder.build())
}

pub fn encode_frame_with(payload: &BitStream, coder: ChannelCoder, code: &ChannelCode) -> CodedFrame {
    let pad = code.pad_len(payload.len());
    let coded = match code {
        ChannelCode::None => payload.clone(),
        ChannelCode::ReedSolomon(rs_code) => {
            let mut padded = payload.clone();
            padded.extend_from(&BitStream::zeros(pad));
            let symbols = bits_to_symbols(&padded);
            let mut out = BitStream::with_capacity(code.coded_len(payload.len()));
            for message in symbols.chunks(rs_code.config().k()) {
                let codeword = rs_code.encode(message).expect("message length equals k");
                for s in codeword {
                    out.push_bits(u64::from(s), rs::SYMBOL_BITS as u32);
                }
            }
            out
        }
        ChannelCode::Convolutional(conv_code) => conv_code.encode(payload),
    };
    CodedFrame {
        code: coder,
        payload_bits: payload.len() as u64,
        pad_bits: pad as u8,
        coded,
    }
}

/// Decodes `frame.coded`. RS blocks that fail to decode keep their received
/// systematic symbols and are counted in `rs_failures`.
pub fn decode_frame(frame: &CodedFrame) -> Result<FrameDecode> {
    decode_frame_with(frame, &frame.code.build())
}

pub fn decode_frame_with(frame: &CodedFrame, code: &ChannelCode) -> Result<FrameDecode> {
    let payload_bits = frame.payload_bits as usize;
    let expected = code.coded_len(payload_bits);
    if frame.coded.len() != expected {
        return Err(Error::Framing(format!(
            "{} coded bits, expected {expected} for a {payload_bits}-bit payload",
            frame.coded.len()
        )));
    }
    let mut out = FrameDecode {
        payload: BitStream::new(),
        rs_blocks: 0,
        rs_failures: 0,
        corrected_symbols: 0,
    };
    let mut bits = match code {
        ChannelCode::None => frame.coded.clone(),
        ChannelCode::ReedSolomon(rs_code) => {
            let k = rs_code.config().k();
            let symbols = bits_to_symbols(&frame.coded);
            let mut decoded = BitStream::with_capacity(payload_bits + frame.pad_bits as usize);
            for codeword in symbols.chunks(rs::N) {
                out.rs_blocks += 1;
                let message = match rs_code.decode(codeword) {
                    Ok(d) => {
                        out.corrected_symbols += d.corrected;
                        d.message
                    }
                    Err(Error::Decode { .. }) => {
                        out.rs_failures += 1;
                        codeword[..k].to_vec()
                    }
                    Err(e) => return Err(e),
                };
                for s in message {
                    decoded.push_bits(u64::from(s), rs::SYMBOL_BITS as u32);
                }
            }
            decoded
        }
        ChannelCode::Convolutional(conv_code) => conv_code.decode(&frame.coded)?,
    };
    bits.truncate(payload_bits);
    out.payload = bits;
    Ok(out)
}

/// Groups bits into 4-bit symbols, MSB first. Length must be a multiple of 4.
fn bits_to_symbols(bits: &BitStream) -> Vec<u8> {
    debug_assert_eq!(bits.len() % rs::SYMBOL_BITS, 0);
    let mut symbols = Vec::with_capacity(bits.len() / rs::SYMBOL_BITS);
    let mut acc = 0u8;
    for (i, b) in bits.iter().enumerate() {
        acc = (acc << 1) | u8::from(b);
        if i % rs::SYMBOL_BITS == rs::SYMBOL_BITS - 1 {
            symbols.push(acc);
            acc = 0;
        }
    }
    symbols
}

pub const FRAME_MAGIC: [u8; 4] = *b"ITCF";
pub const FRAME_VERSION: u8 = 1;

impl CodedFrame {
    /// Binary layout (little-endian):
    /// `ITCF`, version u8, code u8, pad_bits u8, reserved u8 (0),
    /// payload_bits u64, coded_bits u64, then the coded bits MSB-first,
    /// zero-padded to a byte.
    ///
    /// Code ids: 0 none, 1 rs15k5, 2 rs15k9, 3 rs15k13, 4 conv-r14-k3,
    /// 5 conv-r23-k43.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + self.coded.byte_len());
        out.extend_from_slice(&FRAME_MAGIC);
        out.extend_from_slice(&[FRAME_VERSION, self.code.tag(), self.pad_bits, 0]);
        out.extend_from_slice(&self.payload_bits.to_le_bytes());
        out.extend_from_slice(&(self.coded.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.coded.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != FRAME_MAGIC {
            return Err(Error::Framing("bad magic, not a coded frame".into()));
        }
        let version = r.u8()?;
        if version != FRAME_VERSION {
            return Err(Error::Framing(format!("unsupported frame version {version}")));
        }
        let code = ChannelCoder::from_tag(r.u8()?).ok_or_else(|| Error::Framing("unknown channel code".into()))?;
        let pad_bits = r.u8()?;
        let _reserved = r.u8()?;
        let payload_bits = r.u64()?;
        let coded_bits = usize::try_from(r.u64()?).map_err(|_| Error::Framing("coded length too large".into()))?;
        let body = r.take(coded_bits.div_ceil(8))?;
        if r.pos != bytes.len() {
            return Err(Error::Framing(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(Self {
            code,
            payload_bits,
            pad_bits,
            coded: BitStream::from_bytes(body, coded_bits).expect("length checked by take"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::DetRng;

    fn random_bits(seed: u64, len: usize) -> BitStream {
        let mut rng = DetRng::new(seed);
        (0..len).map(|_| rng.below(2) == 1).collect()
    }

    #[test]
    fn overhead_examples() {
        assert_eq!(code_overhead(ChannelCoder::Rs15k9, 36), 60);
        assert_eq!(code_overhead(ChannelCoder::Rs15k9, 37), 120);
        assert_eq!(code_overhead(ChannelCoder::ConvR14K3, 10), 48);
        assert_eq!(code_overhead(ChannelCoder::None, 10), 10);
        let b = code_overhead(ChannelCoder::ConvR23K43, 8022);
        assert_eq!(
            b,
            encode_frame(&BitStream::zeros(8022), ChannelCoder::ConvR23K43)
                .coded
                .len()
        );
        assert_eq!(b, 12_042);
    }

    #[test]
    fn clean_roundtrip_every_code() {
        for coder in ChannelCoder::ALL {
            for len in [0usize, 1, 5, 36, 37, 500] {
                let x = random_bits(len as u64, len);
                let frame = encode_frame(&x, coder);
                assert_eq!(frame.coded.len(), code_overhead(coder, len));
                let d = decode_frame(&frame).unwrap();
                assert_eq!(d.payload, x, "{coder} len {len}");
                assert_eq!(d.rs_failures, 0);
            }
        }
    }

    #[test]
    fn rs_symbol_errors_within_t_per_block_are_corrected() {
        let x = random_bits(3, 36 * 10);
        let mut frame = encode_frame(&x, ChannelCoder::Rs15k9);
        let mut rng = DetRng::new(4);
        for block in 0..10 {
            for pos in rng.distinct_indices(15, 3) {
                let bit = block * 60 + pos * 4 + rng.below(4) as usize;
                frame.coded.flip(bit);
            }
        }
        let d = decode_frame(&frame).unwrap();
        assert_eq!(d.payload, x);
        assert_eq!(d.corrected_symbols, 30);
    }

    #[test]
    fn frame_container_roundtrip_and_errors() {
        let frame = encode_frame(&random_bits(1, 101), ChannelCoder::ConvR23K43);
        let bytes = frame.to_bytes();
        assert_eq!(&bytes[..4], b"ITCF");
        assert_eq!(bytes[5], 5);
        assert_eq!(bytes[6], 1);
        assert_eq!(CodedFrame::from_bytes(&bytes).unwrap(), frame);
        assert!(matches!(CodedFrame::from_bytes(&bytes[..20]), Err(Error::Framing(_))));

        let mut short = frame.clone();
        short.coded.truncate(short.coded.len() - 3);
        assert!(matches!(decode_frame(&short), Err(Error::Framing(_))));
    }

    #[test]
    fn names_parse() {
        for c in ChannelCoder::ALL {
            assert_eq!(c.name().parse::<ChannelCoder>().unwrap(), c);
        }
        assert_eq!(
            "conv_r23_k43".parse::<ChannelCoder>().unwrap(),
            ChannelCoder::ConvR23K43
        );
        assert!("rs15k7".parse::<ChannelCoder>().is_err());
    }
}
