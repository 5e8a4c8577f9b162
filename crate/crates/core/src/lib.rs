//! Information-theory toolkit built around a first-order word model of
//! Spanish text.
//!
//! The crate follows a classic communication chain:
//!
//! * [`corpus`]: word-frequency tables, Zipf synthesis and seeded text generation;
//! * [`entropy`]: the 33-letter alphabet, n-gram counting and block entropies;
//! * [`barnard`]: letter entropy per word estimated from the rank/probability curve;
//! * [`source_coding`]: Huffman and static arithmetic coding with a binary container;
//! * [`channel_coding`]: Reed-Solomon over GF(16) and two convolutional codes with Viterbi decoding;
//! * [`channel`]: a deterministic binary symmetric channel;
//! * [`pipeline`]: the end-to-end experiment and its report.
//!
//! Monte Carlo sweeps over the channel live in [`montecarlo`]. With the
//! `parallel` feature (on by default) they and n-gram counting fan out over
//! rayon; results are identical either way.

pub mod barnard;
pub mod bits;
pub mod channel;
pub mod channel_coding;
pub mod corpus;
pub mod entropy;
mod error;
pub mod exec;
pub mod montecarlo;
pub mod pipeline;
pub mod prng;
pub mod source_coding;

pub use bits::BitStream;
pub use error::{Error, ErrorKind, Result};
pub use exec::Execution;
