//! Lossless source coding over letters, digrams, trigrams or words.
//!
//! [`huffman`] builds prefix-code dictionaries, [`arithmetic`] is a static
//! two-pass arithmetic coder, and [`container`] frames either output in a
//! small binary format that can carry the dictionary/model inline.

pub mod arithmetic;
pub mod container;
pub mod huffman;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use arithmetic::{arithmetic_decode, arithmetic_encode, SymbolModel};
pub use container::{Dictionary, EncodedStream};
pub use huffman::{
    export_codebook_csv, huffman_build, huffman_decode, huffman_decode_partial, huffman_encode, CodeBook,
};

use crate::entropy::NGramCounts;
use crate::{Error, Result};

/// Token inserted between words in the letter, digram and trigram domains.
pub const WORD_SEPARATOR: &str = " ";

/// Which unit of text is coded as one source symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolDomain {
    Letter,
    Digram,
    Trigram,
    Word,
}

impl SymbolDomain {
    pub fn letters_per_symbol(self) -> Option<usize> {
        match self {
            SymbolDomain::Letter => Some(1),
            SymbolDomain::Digram => Some(2),
            SymbolDomain::Trigram => Some(3),
            SymbolDomain::Word => None,
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            SymbolDomain::Letter => 0,
            SymbolDomain::Digram => 1,
            SymbolDomain::Trigram => 2,
            SymbolDomain::Word => 3,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => SymbolDomain::Letter,
            1 => SymbolDomain::Digram,
            2 => SymbolDomain::Trigram,
            3 => SymbolDomain::Word,
            _ => return None,
        })
    }

    /// Splits words into a lossless symbol sequence.
    ///
    /// `Word` yields the words themselves. The letter domains cut every word
    /// into consecutive non-overlapping chunks of 1, 2 or 3 letters (the last
    /// chunk of a word may be shorter) and put [`WORD_SEPARATOR`] between
    /// words so the spaced text can be rebuilt.
    pub fn tokenize<S: AsRef<str>>(self, words: &[S]) -> Vec<String> {
        let Some(size) = self.letters_per_symbol() else {
            return words.iter().map(|w| w.as_ref().to_owned()).collect();
        };
        let mut out = Vec::new();
        for (i, word) in words.iter().enumerate() {
            if i > 0 {
                out.push(WORD_SEPARATOR.to_owned());
            }
            let letters: Vec<char> = word.as_ref().chars().collect();
            out.extend(letters.chunks(size).map(|c| c.iter().collect::<String>()));
        }
        out
    }

    /// Rebuilds space-separated text from symbols.
    pub fn detokenize<S: AsRef<str>>(self, symbols: &[S]) -> String {
        match self {
            SymbolDomain::Word => symbols.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(" "),
            _ => symbols.iter().map(|s| s.as_ref()).collect(),
        }
    }
}

impl fmt::Display for SymbolDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolDomain::Letter => "letter",
            SymbolDomain::Digram => "digram",
            SymbolDomain::Trigram => "trigram",
            SymbolDomain::Word => "word",
        })
    }
}

impl FromStr for SymbolDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "letter" | "letters" => Ok(SymbolDomain::Letter),
            "digram" | "digrams" => Ok(SymbolDomain::Digram),
            "trigram" | "trigrams" => Ok(SymbolDomain::Trigram),
            "word" | "words" => Ok(SymbolDomain::Word),
            other => Err(Error::Validation(format!("unknown symbol domain {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceCoder {
    Huffman,
    Arithmetic,
}

impl SourceCoder {
    pub(crate) fn tag(self) -> u8 {
        match self {
            SourceCoder::Huffman => 0,
            SourceCoder::Arithmetic => 1,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(SourceCoder::Huffman),
            1 => Some(SourceCoder::Arithmetic),
            _ => None,
        }
    }
}

impl fmt::Display for SourceCoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceCoder::Huffman => "huffman",
            SourceCoder::Arithmetic => "arithmetic",
        })
    }
}

impl FromStr for SourceCoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "huffman" => Ok(SourceCoder::Huffman),
            "arithmetic" => Ok(SourceCoder::Arithmetic),
            other => Err(Error::Validation(format!("unknown source coder {other:?}"))),
        }
    }
}

/// Counts of the symbol sequence itself (order 0, one entry per distinct symbol).
pub fn symbol_counts<S: AsRef<str>>(symbols: &[S]) -> NGramCounts {
    crate::entropy::count_words(symbols)
}

/// Codes `symbols` with a model built from their own counts.
pub fn encode_symbols<S: AsRef<str>>(
    symbols: &[S],
    method: SourceCoder,
    domain: SymbolDomain,
) -> Result<EncodedStream> {
    let counts = symbol_counts(symbols);
    let (payload, dictionary) = match method {
        SourceCoder::Huffman => {
            if counts.is_empty() {
                (crate::BitStream::new(), None)
            } else {
                let book = huffman_build(&counts)?;
                (huffman_encode(symbols, &book)?, Some(Dictionary::Huffman(book)))
            }
        }
        SourceCoder::Arithmetic => {
            if counts.is_empty() {
                (crate::BitStream::new(), None)
            } else {
                let model = SymbolModel::from_counts(&counts)?;
                (arithmetic_encode(symbols, &model)?, Some(Dictionary::Arithmetic(model)))
            }
        }
    };
    Ok(EncodedStream {
        method,
        domain,
        n_symbols: symbols.len() as u64,
        payload,
        dictionary,
    })
}

/// Decodes with the inline dictionary. Fails on the first invalid code.
pub fn decode_stream(stream: &EncodedStream) -> Result<Vec<String>> {
    if stream.n_symbols == 0 {
        return Ok(Vec::new());
    }
    match (&stream.dictionary, stream.method) {
        (Some(Dictionary::Huffman(book)), SourceCoder::Huffman) => {
            let out = huffman_decode(&stream.payload, book)?;
            if out.len() as u64 != stream.n_symbols {
                return Err(Error::Decode {
                    offset: stream.payload.len() as u64,
                    message: format!("decoded {} symbols, header says {}", out.len(), stream.n_symbols),
                });
            }
            Ok(out)
        }
        (Some(Dictionary::Arithmetic(model)), SourceCoder::Arithmetic) => {
            arithmetic_decode(&stream.payload, model, stream.n_symbols as usize)
        }
        (None, _) => Err(Error::Framing("stream carries no dictionary".into())),
        _ => Err(Error::Framing("dictionary does not match coding method".into())),
    }
}

/// `(1 − encoded/original) · 100`; negative when coding expands the data.
pub fn compression_rate(original_bytes: u64, encoded_bytes: u64) -> f64 {
    if original_bytes == 0 {
        return 0.0;
    }
    (1.0 - encoded_bytes as f64 / original_bytes as f64) * 100.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_letter_domains() {
        let words = ws(&["entre", "la", "y"]);
        assert_eq!(
            SymbolDomain::Digram.tokenize(&words),
            ws(&["en", "tr", "e", " ", "la", " ", "y"])
        );
        assert_eq!(
            SymbolDomain::Trigram.tokenize(&words),
            ws(&["ent", "re", " ", "la", " ", "y"])
        );
        assert_eq!(SymbolDomain::Letter.tokenize(&ws(&["sí"])), ws(&["s", "í"]));
        assert_eq!(SymbolDomain::Word.tokenize(&words), words);
    }

    #[test]
    fn detokenize_rebuilds_text() {
        let words = ws(&["canción", "de", "niño"]);
        for d in [
            SymbolDomain::Letter,
            SymbolDomain::Digram,
            SymbolDomain::Trigram,
            SymbolDomain::Word,
        ] {
            assert_eq!(d.detokenize(&d.tokenize(&words)), "canción de niño");
        }
    }

    #[test]
    fn compression_rate_published_numbers() {
        approx::assert_abs_diff_eq!(compression_rate(5749, 1003), 82.5535, epsilon = 1e-4);
        assert!(compression_rate(10, 20) < 0.0);
    }

    #[test]
    fn encode_decode_both_methods() {
        let words = ws(&["de", "la", "de", "que", "el", "de"]);
        for method in [SourceCoder::Huffman, SourceCoder::Arithmetic] {
            for d in [SymbolDomain::Letter, SymbolDomain::Trigram, SymbolDomain::Word] {
                let symbols = d.tokenize(&words);
                let s = encode_symbols(&symbols, method, d).unwrap();
                assert_eq!(decode_stream(&s).unwrap(), symbols);
                let bytes = s.to_bytes();
                assert_eq!(
                    decode_stream(&EncodedStream::from_bytes(&bytes).unwrap()).unwrap(),
                    symbols
                );
            }
        }
        let empty: Vec<String> = Vec::new();
        let s = encode_symbols(&empty, SourceCoder::Arithmetic, SymbolDomain::Word).unwrap();
        assert!(decode_stream(&s).unwrap().is_empty());
    }

    #[test]
    fn parse_names() {
        assert_eq!("trigram".parse::<SymbolDomain>().unwrap(), SymbolDomain::Trigram);
        assert_eq!("arithmetic".parse::<SourceCoder>().unwrap(), SourceCoder::Arithmetic);
        assert!("bits".parse::<SymbolDomain>().is_err());
    }
}
