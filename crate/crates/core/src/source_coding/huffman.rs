//! Binary Huffman codes.
//!
//! Merges always take the two lightest subtrees. Equal weights are ordered by
//! the smallest symbol (codepoint order) each subtree contains; the first
//! subtree popped becomes the `0` branch. Dictionaries are therefore fully
//! determined by the counts.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::io::Write;

use crate::bits::BitStream;
use crate::entropy::NGramCounts;
use crate::{Error, Result};

/// Prefix-code dictionary with its length statistics.
///
/// Two books are equal when they assign the same codes; `avg_length` depends
/// on the counts the book was built from and is not compared.
#[derive(Debug, Clone)]
pub struct CodeBook {
    entries: BTreeMap<String, BitStream>,
    /// Frequency-weighted mean code length (unweighted for books built from
    /// explicit codes).
    pub avg_length: f64,
    shortest: String,
    longest: String,
}

impl CodeBook {
    /// Book from explicit codes, checked for prefix-freeness.
    pub fn from_codes<S: Into<String>>(codes: impl IntoIterator<Item = (S, BitStream)>) -> Result<Self> {
        let entries: BTreeMap<String, BitStream> = codes.into_iter().map(|(s, c)| (s.into(), c)).collect();
        if entries.is_empty() {
            return Err(Error::Domain("empty code book".into()));
        }
        if entries.values().any(BitStream::is_empty) {
            return Err(Error::Validation("empty code word".into()));
        }
        let mut codes: Vec<String> = entries.values().map(BitStream::to_bit_string).collect();
        codes.sort();
        // In sorted order a prefix is immediately followed by one of its extensions.
        if let Some(w) = codes.windows(2).find(|w| w[1].starts_with(&w[0])) {
            return Err(Error::Validation(format!("code {} is a prefix of {}", w[0], w[1])));
        }
        let avg_length = entries.values().map(|c| c.len() as f64).sum::<f64>() / entries.len() as f64;
        Ok(Self::with_stats(entries, avg_length))
    }

    fn with_stats(entries: BTreeMap<String, BitStream>, avg_length: f64) -> Self {
        // First symbol in codepoint order wins ties.
        let shortest = entries
            .iter()
            .min_by_key(|(_, c)| c.len())
            .map(|(s, _)| s.clone())
            .unwrap_or_default();
        let longest = entries
            .iter()
            .rev()
            .max_by_key(|(_, c)| c.len())
            .map(|(s, _)| s.clone())
            .unwrap_or_default();
        Self {
            entries,
            avg_length,
            shortest,
            longest,
        }
    }

    pub fn get(&self, symbol: &str) -> Option<&BitStream> {
        self.entries.get(symbol)
    }

    /// Entries in codepoint order of the symbol.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &BitStream)> {
        self.entries.iter().map(|(s, c)| (s.as_str(), c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn shortest(&self) -> (&str, &BitStream) {
        (&self.shortest, &self.entries[&self.shortest])
    }

    pub fn longest(&self) -> (&str, &BitStream) {
        (&self.longest, &self.entries[&self.longest])
    }

    /// `Σ 2^-len`.
    pub fn kraft_sum(&self) -> f64 {
        self.entries.values().map(|c| (-(c.len() as f64)).exp2()).sum()
    }

    /// Frequency-weighted mean length under `counts`.
    pub fn weighted_length(&self, counts: &NGramCounts) -> f64 {
        let total = counts.total() as f64;
        counts
            .iter()
            .map(|(s, c)| self.entries.get(s).map_or(0, |code| code.len()) as f64 * c as f64 / total)
            .sum()
    }
}

impl PartialEq for CodeBook {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

enum Node {
    Leaf(usize),
    Internal(usize, usize),
}

/// Builds the Huffman code for `counts`. A single symbol gets the code `0`.
pub fn huffman_build(counts: &NGramCounts) -> Result<CodeBook> {
    if counts.is_empty() {
        return Err(Error::Domain("cannot build a code for empty counts".into()));
    }
    let symbols: Vec<(&str, u64)> = counts.iter().collect();
    let mut entries = BTreeMap::new();
    if symbols.len() == 1 {
        entries.insert(symbols[0].0.to_owned(), BitStream::from_bit_str("0").unwrap());
        return Ok(CodeBook::with_stats(entries, 1.0));
    }

    let mut nodes: Vec<Node> = (0..symbols.len()).map(Node::Leaf).collect();
    // (weight, smallest symbol index, node index); symbol indices follow
    // codepoint order because `counts` iterates that way.
    let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = symbols
        .iter()
        .enumerate()
        .map(|(i, &(_, c))| Reverse((c, i, i)))
        .collect();
    while heap.len() > 1 {
        let Reverse((w0, m0, n0)) = heap.pop().unwrap();
        let Reverse((w1, m1, n1)) = heap.pop().unwrap();
        nodes.push(Node::Internal(n0, n1));
        heap.push(Reverse((w0 + w1, m0.min(m1), nodes.len() - 1)));
    }
    let Reverse((_, _, root)) = heap.pop().unwrap();

    let mut stack = vec![(root, BitStream::new())];
    while let Some((node, prefix)) = stack.pop() {
        match nodes[node] {
            Node::Leaf(i) => {
                entries.insert(symbols[i].0.to_owned(), prefix);
            }
            Node::Internal(zero, one) => {
                let mut right = prefix.clone();
                right.push(true);
                let mut left = prefix;
                left.push(false);
                stack.push((one, right));
                stack.push((zero, left));
            }
        }
    }
    let total = counts.total() as f64;
    let avg_length = symbols
        .iter()
        .map(|&(s, c)| entries[s].len() as f64 * c as f64)
        .sum::<f64>()
        / total;
    Ok(CodeBook::with_stats(entries, avg_length))
}

/// Concatenates the codes of `symbols`.
pub fn huffman_encode<S: AsRef<str>>(symbols: &[S], book: &CodeBook) -> Result<BitStream> {
    let lookup: HashMap<&str, &BitStream> = book.iter().collect();
    let mut out = BitStream::new();
    for s in symbols {
        let code = lookup
            .get(s.as_ref())
            .ok_or_else(|| Error::UnknownSymbol(s.as_ref().to_owned()))?;
        out.extend_from(code);
    }
    Ok(out)
}

/// Binary trie over the code words.
struct DecodeTree<'a> {
    children: Vec<[Option<u32>; 2]>,
    leaf: Vec<Option<&'a str>>,
}

impl<'a> DecodeTree<'a> {
    fn new(book: &'a CodeBook) -> Self {
        let mut tree = Self {
            children: vec![[None, None]],
            leaf: vec![None],
        };
        for (symbol, code) in book.iter() {
            let mut node = 0usize;
            for bit in code.iter() {
                let b = bit as usize;
                node = match tree.children[node][b] {
                    Some(n) => n as usize,
                    None => {
                        tree.children.push([None, None]);
                        tree.leaf.push(None);
                        let n = tree.children.len() - 1;
                        tree.children[node][b] = Some(n as u32);
                        n
                    }
                };
            }
            tree.leaf[node] = Some(symbol);
        }
        tree
    }
}

/// Strict inverse of [`huffman_encode`].
pub fn huffman_decode(bits: &BitStream, book: &CodeBook) -> Result<Vec<String>> {
    match huffman_decode_partial(bits, book) {
        (symbols, None) => Ok(symbols),
        (_, Some(err)) => Err(err),
    }
}

/// Decodes as far as possible.
///
/// A bit with no matching branch is reported and skipped (decoding restarts
/// at the root with the next bit); an incomplete trailing code is reported
/// and dropped. Returns the symbols and the first error seen.
pub fn huffman_decode_partial(bits: &BitStream, book: &CodeBook) -> (Vec<String>, Option<Error>) {
    let tree = DecodeTree::new(book);
    let mut out = Vec::new();
    let mut first_error = None;
    let mut node = 0usize;
    let mut code_start = 0usize;
    for (i, bit) in bits.iter().enumerate() {
        match tree.children[node][bit as usize] {
            Some(next) => {
                node = next as usize;
                if let Some(symbol) = tree.leaf[node] {
                    out.push(symbol.to_owned());
                    node = 0;
                    code_start = i + 1;
                }
            }
            None => {
                first_error.get_or_insert(Error::Decode {
                    offset: i as u64,
                    message: "bit sequence matches no code".into(),
                });
                node = 0;
                code_start = i + 1;
            }
        }
    }
    if node != 0 {
        first_error.get_or_insert(Error::Decode {
            offset: code_start as u64,
            message: "trailing bits do not form a complete code".into(),
        });
    }
    (out, first_error)
}

/// Writes `symbol,code` rows followed by `#avg_length`, `#shortest` and
/// `#longest` summary rows. `#` never occurs in alphabet symbols.
pub fn export_codebook_csv<W: Write>(book: &CodeBook, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["symbol", "code"])?;
    for (symbol, code) in book.iter() {
        w.write_record([symbol, &code.to_bit_string()])?;
    }
    w.write_record(["#avg_length", &format!("{:.6}", book.avg_length)])?;
    w.write_record(["#shortest", &book.shortest().1.to_bit_string()])?;
    w.write_record(["#longest", &book.longest().1.to_bit_string()])?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::shannon_entropy;
    use crate::prng::DetRng;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitStream {
        BitStream::from_bit_str(s).unwrap()
    }

    fn is_prefix_free(book: &CodeBook) -> bool {
        let codes: Vec<String> = book.iter().map(|(_, c)| c.to_bit_string()).collect();
        codes.iter().enumerate().all(|(i, a)| {
            codes
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !b.starts_with(a.as_str()))
        })
    }

    #[test]
    fn two_equal_symbols() {
        let c = NGramCounts::from_pairs(1, [("a", 1), ("b", 1)]);
        let book = huffman_build(&c).unwrap();
        assert_eq!(book.get("a").unwrap().len(), 1);
        assert_eq!(book.get("b").unwrap().len(), 1);
        assert_eq!(book.avg_length, 1.0);
    }

    #[test]
    fn dyadic_is_optimal() {
        let c = NGramCounts::from_pairs(1, [("a", 4), ("b", 2), ("c", 1), ("d", 1)]);
        let book = huffman_build(&c).unwrap();
        let lens: Vec<usize> = ["a", "b", "c", "d"]
            .iter()
            .map(|s| book.get(s).unwrap().len())
            .collect();
        assert_eq!(lens, vec![1, 2, 3, 3]);
        assert_eq!(book.avg_length, 1.75);
        assert_eq!(shannon_entropy(&c).unwrap().h_symbol, 1.75);
        assert_eq!(book.kraft_sum(), 1.0);
        assert_eq!(book.shortest().0, "a");
        // Ties go to the first symbol in codepoint order.
        assert_eq!(book.longest().0, "c");
    }

    #[test]
    fn single_symbol_gets_zero() {
        let c = NGramCounts::from_pairs(0, [("sol", 5)]);
        let book = huffman_build(&c).unwrap();
        assert_eq!(book.get("sol").unwrap().to_bit_string(), "0");
        let enc = huffman_encode(&["sol", "sol"], &book).unwrap();
        assert_eq!(enc.to_bit_string(), "00");
        assert_eq!(huffman_decode(&enc, &book).unwrap(), vec!["sol", "sol"]);
    }

    #[test]
    fn empty_counts_rejected() {
        assert!(matches!(huffman_build(&NGramCounts::new(1)), Err(Error::Domain(_))));
    }

    #[test]
    fn build_is_deterministic_under_ties() {
        let c = NGramCounts::from_pairs(1, [("d", 1), ("c", 1), ("b", 1), ("a", 1), ("e", 1)]);
        let a = huffman_build(&c).unwrap();
        let b = huffman_build(&c).unwrap();
        assert_eq!(a, b);
        // a and b merge first (smallest symbols), then c+d.
        assert_eq!(a.get("e").unwrap().len(), 2);
    }

    #[test]
    fn encode_examples() {
        let book = CodeBook::from_codes([("a", bits("0")), ("b", bits("1"))]).unwrap();
        assert_eq!(huffman_encode(&["a", "b"], &book).unwrap().to_bit_string(), "01");
        assert!(huffman_encode::<&str>(&[], &book).unwrap().is_empty());
        match huffman_encode(&["a", "z"], &book) {
            Err(Error::UnknownSymbol(s)) => assert_eq!(s, "z"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decode_errors() {
        let book = CodeBook::from_codes([("a", bits("00")), ("b", bits("01")), ("c", bits("1"))]).unwrap();
        match huffman_decode(&bits("0"), &book) {
            Err(Error::Decode { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        match huffman_decode(&bits("1010"), &book) {
            Err(Error::Decode { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        assert!(huffman_decode(&BitStream::new(), &book).unwrap().is_empty());

        let incomplete = CodeBook::from_codes([("a", bits("00")), ("b", bits("01"))]).unwrap();
        let (partial, err) = huffman_decode_partial(&bits("001101"), &incomplete);
        assert_eq!(partial, vec!["a", "b"]);
        assert!(matches!(err, Some(Error::Decode { offset: 2, .. })));
    }

    #[test]
    fn from_codes_rejects_prefixes() {
        assert!(CodeBook::from_codes([("a", bits("0")), ("b", bits("01"))]).is_err());
        assert!(CodeBook::from_codes(Vec::<(String, BitStream)>::new()).is_err());
    }

    #[test]
    fn csv_export() {
        let book = CodeBook::from_codes([
            ("de", bits("111")),
            ("la", bits("0")),
            ("y", bits("10")),
            ("el", bits("110")),
        ])
        .unwrap();
        let mut out = Vec::new();
        export_codebook_csv(&book, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("symbol,code\n"));
        assert!(text.contains("\nde,111\n"));
        assert!(text.contains("#shortest,0\n"));
        assert!(text.contains("#longest,111\n"));

        let c = NGramCounts::from_pairs(1, [("a", 4), ("b", 2), ("c", 1), ("d", 1)]);
        let mut out = Vec::new();
        export_codebook_csv(&huffman_build(&c).unwrap(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
        let lens: Vec<usize> = rows.iter().map(|r| r.split(',').nth(1).unwrap().len()).collect();
        assert_eq!(lens, vec![1, 2, 3, 3]);
    }

    #[test]
    fn roundtrip_large_random_sequence() {
        let c = NGramCounts::from_pairs(0, (0..50).map(|i| (format!("w{i}"), 1 + (i * i) as u64)));
        let book = huffman_build(&c).unwrap();
        let mut rng = DetRng::new(77);
        let symbols: Vec<String> = (0..100_000).map(|_| format!("w{}", rng.below(50))).collect();
        let enc = huffman_encode(&symbols, &book).unwrap();
        let expected_len: usize = symbols.iter().map(|s| book.get(s).unwrap().len()).sum();
        assert_eq!(enc.len(), expected_len);
        assert_eq!(huffman_decode(&enc, &book).unwrap(), symbols);
    }

    proptest! {
        #[test]
        fn built_books_are_complete_prefix_codes(counts in prop::collection::vec(1u64..10_000, 2..64)) {
            let c = NGramCounts::from_pairs(1, counts.iter().enumerate().map(|(i, &n)| (format!("{i:03}"), n)));
            let book = huffman_build(&c).unwrap();
            prop_assert!(is_prefix_free(&book));
            prop_assert!((book.kraft_sum() - 1.0).abs() < 1e-12);
            let h = shannon_entropy(&c).unwrap().h_symbol;
            prop_assert!(h <= book.avg_length + 1e-12);
            prop_assert!(book.avg_length < h + 1.0);
            prop_assert!((book.weighted_length(&c) - book.avg_length).abs() < 1e-12);
        }
    }
}
