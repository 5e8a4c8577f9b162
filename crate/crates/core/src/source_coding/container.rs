//! Binary container for source-coded streams.
//!
//! All integers are little-endian.
//!
//! | offset | size | field |
//! |-------:|-----:|-------|
//! | 0 | 4 | magic `ITSC` |
//! | 4 | 1 | version (`1`) |
//! | 5 | 1 | method: `0` Huffman, `1` arithmetic |
//! | 6 | 1 | domain: `0` letter, `1` digram, `2` trigram, `3` word |
//! | 7 | 1 | flags: bit 0 set when the dictionary/model is inline |
//! | 8 | 8 | `n_symbols` (u64) |
//! | 16 | 8 | `bit_length` of the payload (u64) |
//! | 24 | … | dictionary, when flagged |
//! | … | ⌈bit_length/8⌉ | payload, MSB-first, zero-padded |
//!
//! The dictionary starts with a u32 entry count. A Huffman entry is
//! `u16 symbol_len, symbol UTF-8, u16 code_bits, ⌈code_bits/8⌉ code bytes`;
//! an arithmetic entry is `u16 symbol_len, symbol UTF-8, u64 count`, in model
//! order.

use crate::bits::BitStream;
use crate::source_coding::{CodeBook, SourceCoder, SymbolDomain, SymbolModel};
use crate::{Error, Result};

pub const MAGIC: [u8; 4] = *b"ITSC";
pub const VERSION: u8 = 1;
const FLAG_DICTIONARY: u8 = 1;
const HEADER_LEN: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum Dictionary {
    Huffman(CodeBook),
    Arithmetic(SymbolModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedStream {
    pub method: SourceCoder,
    pub domain: SymbolDomain,
    pub n_symbols: u64,
    pub payload: BitStream,
    pub dictionary: Option<Dictionary>,
}

impl EncodedStream {
    /// Payload size in bytes, excluding header and dictionary.
    pub fn payload_bytes(&self) -> usize {
        self.payload.byte_len()
    }

    /// Serializes with the dictionary inline when present.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.serialize(true)
    }

    /// Serializes without the dictionary.
    pub fn to_bytes_without_dictionary(&self) -> Vec<u8> {
        self.serialize(false)
    }

    fn serialize(&self, with_dictionary: bool) -> Vec<u8> {
        let dictionary = self.dictionary.as_ref().filter(|_| with_dictionary);
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload_bytes());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.method.tag());
        out.push(self.domain.tag());
        out.push(if dictionary.is_some() { FLAG_DICTIONARY } else { 0 });
        out.extend_from_slice(&self.n_symbols.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u64).to_le_bytes());
        match dictionary {
            Some(Dictionary::Huffman(book)) => {
                out.extend_from_slice(&(book.len() as u32).to_le_bytes());
                for (symbol, code) in book.iter() {
                    put_str(&mut out, symbol);
                    out.extend_from_slice(&(code.len() as u16).to_le_bytes());
                    out.extend_from_slice(&code.to_bytes());
                }
            }
            Some(Dictionary::Arithmetic(model)) => {
                out.extend_from_slice(&(model.len() as u32).to_le_bytes());
                for (i, symbol) in model.symbols().iter().enumerate() {
                    put_str(&mut out, symbol);
                    out.extend_from_slice(&model.count(i).to_le_bytes());
                }
            }
            None => {}
        }
        out.extend_from_slice(&self.payload.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Framing("bad magic, not a source-coded stream".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(Error::Framing(format!("unsupported container version {version}")));
        }
        let method = SourceCoder::from_tag(r.u8()?).ok_or_else(|| Error::Framing("unknown coding method".into()))?;
        let domain = SymbolDomain::from_tag(r.u8()?).ok_or_else(|| Error::Framing("unknown symbol domain".into()))?;
        let flags = r.u8()?;
        let n_symbols = r.u64()?;
        let bit_length = usize::try_from(r.u64()?).map_err(|_| Error::Framing("bit length too large".into()))?;
        let dictionary = if flags & FLAG_DICTIONARY != 0 {
            let entries = r.u32()? as usize;
            Some(match method {
                SourceCoder::Huffman => {
                    let mut codes = Vec::with_capacity(entries.min(1 << 16));
                    for _ in 0..entries {
                        let symbol = r.string()?;
                        let code_bits = r.u16()? as usize;
                        let code = BitStream::from_bytes(r.take(code_bits.div_ceil(8))?, code_bits)
                            .ok_or_else(|| Error::Framing("bad code length".into()))?;
                        codes.push((symbol, code));
                    }
                    Dictionary::Huffman(CodeBook::from_codes(codes).map_err(|e| Error::Framing(e.to_string()))?)
                }
                SourceCoder::Arithmetic => {
                    let mut pairs = Vec::with_capacity(entries.min(1 << 16));
                    for _ in 0..entries {
                        let symbol = r.string()?;
                        pairs.push((symbol, r.u64()?));
                    }
                    Dictionary::Arithmetic(SymbolModel::from_pairs(pairs).map_err(|e| Error::Framing(e.to_string()))?)
                }
            })
        } else {
            None
        };
        let payload_bytes = r.take(bit_length.div_ceil(8))?;
        if r.pos != bytes.len() {
            return Err(Error::Framing(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        let payload = BitStream::from_bytes(payload_bytes, bit_length).expect("length checked by take");
        Ok(Self {
            method,
            domain,
            n_symbols,
            payload,
            dictionary,
        })
    }
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u16).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

pub(crate) struct Reader<'a> {
    pub(crate) bytes: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Framing(format!("truncated container at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u16()? as usize;
        String::from_utf8(self.take(len)?.to_vec()).map_err(|_| Error::Framing("symbol is not UTF-8".into()))
    }
}
