//! Feed-forward convolutional codes with hard-decision Viterbi decoding.
//!
//! Each input `i` drives its own shift register of `memory[i]` cells. Taps are
//! written in the usual octal form: the most significant of the
//! `memory[i] + 1` bits multiplies the current input bit, the least
//! significant the oldest stored bit. Output `o` at each step is the XOR over
//! all inputs of `parity(register_i & taps[i][o])`.
//!
//! Encoding starts in the zero state and appends `max(memory)` all-zero input
//! steps so the trellis ends in the zero state. Inputs whose length is not a
//! multiple of the number of inputs are padded with zero bits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitStream;
use crate::{Error, Result};

/// The two built-in code configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConvCodeId {
    /// Rate 1/4, constraint length 3.
    R14K3,
    /// Rate 2/3, constraint lengths 4 and 3.
    R23K43,
}

impl fmt::Display for ConvCodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvCodeId::R14K3 => "rate 1/4, K=3",
            ConvCodeId::R23K43 => "rate 2/3, K=[4,3]",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvCode {
    inputs: usize,
    outputs: usize,
    memory: Vec<u32>,
    /// `taps[input][output]`.
    taps: Vec<Vec<u32>>,
    /// Transition tables indexed by `state * 2^inputs + input`.
    next_state: Vec<usize>,
    output: Vec<u32>,
}

/// Default generators (octal) of the rate-1/4, K=3 code.
pub const R14_K3_TAPS: [u32; 4] = [0o7, 0o7, 0o5, 0o5];
/// Default generator matrix (octal) of the rate-2/3, K=[4,3] code. Row 1 uses
/// 4-bit taps, row 2 3-bit taps; the free distance is 5.
pub const R23_K43_TAPS: [[u32; 3]; 2] = [[0o17, 0o15, 0o11], [0o7, 0o4, 0o6]];

impl ConvCode {
    pub fn standard(id: ConvCodeId) -> Self {
        match id {
            ConvCodeId::R14K3 => Self::new(vec![2], vec![R14_K3_TAPS.to_vec()]).expect("valid taps"),
            ConvCodeId::R23K43 => {
                Self::new(vec![3, 2], R23_K43_TAPS.iter().map(|row| row.to_vec()).collect()).expect("valid taps")
            }
        }
    }

    /// Custom code: `memory[i]` cells on input `i`, `taps[i][o]` generators.
    pub fn new(memory: Vec<u32>, taps: Vec<Vec<u32>>) -> Result<Self> {
        let inputs = memory.len();
        if inputs == 0 || inputs > 4 || taps.len() != inputs {
            return Err(Error::Domain(
                "convolutional code needs 1..=4 inputs with one tap row each".into(),
            ));
        }
        let outputs = taps[0].len();
        if outputs == 0 || outputs > 16 || taps.iter().any(|row| row.len() != outputs) {
            return Err(Error::Domain("every tap row needs the same 1..=16 outputs".into()));
        }
        if memory.iter().sum::<u32>() > 12 {
            return Err(Error::Domain("total memory above 12 cells".into()));
        }
        for (row, &m) in taps.iter().zip(&memory) {
            if row.iter().any(|&t| t >> (m + 1) != 0) {
                return Err(Error::Domain(format!("tap wider than {} bits", m + 1)));
            }
        }
        let mut code = Self {
            inputs,
            outputs,
            memory,
            taps,
            next_state: Vec::new(),
            output: Vec::new(),
        };
        (code.next_state, code.output) = code.trellis();
        Ok(code)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn memory(&self) -> &[u32] {
        &self.memory
    }

    /// Constraint length per input (`memory + 1`).
    pub fn constraint_lengths(&self) -> Vec<u32> {
        self.memory.iter().map(|m| m + 1).collect()
    }

    pub fn taps(&self) -> &[Vec<u32>] {
        &self.taps
    }

    /// `(inputs, outputs)`, i.e. rate = inputs / outputs.
    pub fn rate(&self) -> (usize, usize) {
        (self.inputs, self.outputs)
    }

    /// Zero input steps appended for termination.
    pub fn tail_steps(&self) -> usize {
        *self.memory.iter().max().unwrap() as usize
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory.iter().sum::<u32>()
    }

    fn state_offsets(&self) -> Vec<u32> {
        self.memory
            .iter()
            .scan(0, |acc, &m| {
                let off = *acc;
                *acc += m;
                Some(off)
            })
            .collect()
    }

    /// Next state and output word (output 0 in the MSB) for `input` bits
    /// (`input` bit `i` feeds register `i`).
    fn step(&self, state: usize, input: usize) -> (usize, u32) {
        let offsets = self.state_offsets();
        let mut next = 0usize;
        let mut out = 0u32;
        let mut words = vec![0u32; self.outputs];
        for (i, ((&m, &offset), row)) in self.memory.iter().zip(&offsets).zip(&self.taps).enumerate() {
            let reg_state = ((state >> offset) as u32) & ((1 << m) - 1);
            let bit = ((input >> i) & 1) as u32;
            let register = (bit << m) | reg_state;
            for (w, &tap) in words.iter_mut().zip(row) {
                *w ^= (register & tap).count_ones() & 1;
            }
            next |= ((register >> 1) as usize) << offset;
        }
        for w in words {
            out = (out << 1) | w;
        }
        (next, out)
    }

    fn trellis(&self) -> (Vec<usize>, Vec<u32>) {
        let branches = 1usize << self.inputs;
        let mut next_state = Vec::with_capacity(self.num_states() * branches);
        let mut output = Vec::with_capacity(self.num_states() * branches);
        for s in 0..self.num_states() {
            for u in 0..branches {
                let (ns, w) = self.step(s, u);
                next_state.push(ns);
                output.push(w);
            }
        }
        (next_state, output)
    }

    /// Number of coded bits produced for `payload_bits` information bits.
    pub fn coded_len(&self, payload_bits: usize) -> usize {
        if payload_bits == 0 {
            return 0;
        }
        (payload_bits.div_ceil(self.inputs) + self.tail_steps()) * self.outputs
    }

    /// Zero bits appended so the payload fills whole input steps.
    pub fn pad_len(&self, payload_bits: usize) -> usize {
        payload_bits.div_ceil(self.inputs) * self.inputs - payload_bits
    }

    pub fn encode(&self, bits: &BitStream) -> BitStream {
        if bits.is_empty() {
            return BitStream::new();
        }
        let steps = bits.len().div_ceil(self.inputs);
        let branches = 1usize << self.inputs;
        let (next_state, output) = (&self.next_state, &self.output);
        let mut out = BitStream::with_capacity(self.coded_len(bits.len()));
        let mut state = 0usize;
        for t in 0..steps + self.tail_steps() {
            let mut input = 0usize;
            if t < steps {
                for i in 0..self.inputs {
                    if bits.get(t * self.inputs + i).unwrap_or(false) {
                        input |= 1 << i;
                    }
                }
            }
            let idx = state * branches + input;
            out.push_bits(u64::from(output[idx]), self.outputs as u32);
            state = next_state[idx];
        }
        debug_assert_eq!(state, 0);
        out
    }

    /// Maximum-likelihood decoding under Hamming distance.
    ///
    /// Returns `(steps − tail) · inputs` bits, padding included. Equal path
    /// metrics keep the lower-numbered predecessor state; traceback starts
    /// from the zero state.
    pub fn decode(&self, bits: &BitStream) -> Result<BitStream> {
        if bits.is_empty() {
            return Ok(BitStream::new());
        }
        let n = self.outputs;
        if !bits.len().is_multiple_of(n) {
            return Err(Error::Framing(format!(
                "{} coded bits is not a multiple of {n}",
                bits.len()
            )));
        }
        let steps = bits.len() / n;
        let tail = self.tail_steps();
        if steps <= tail {
            return Err(Error::Framing(format!(
                "{steps} trellis steps leave no room for the {tail}-step tail"
            )));
        }

        let states = self.num_states();
        let branches = 1usize << self.inputs;
        let (next_state, output) = (&self.next_state, &self.output);

        const UNREACHED: u32 = u32::MAX;
        let mut metric = vec![UNREACHED; states];
        metric[0] = 0;
        let mut next_metric = vec![UNREACHED; states];
        // survivors[t * states + s] = (predecessor, input)
        let mut survivors = vec![(0u16, 0u8); steps * states];
        for t in 0..steps {
            let mut received = 0u32;
            for j in 0..n {
                received = (received << 1) | u32::from(bits.get(t * n + j).unwrap());
            }
            next_metric.fill(UNREACHED);
            let allowed = if t < steps - tail { branches } else { 1 };
            for (s, &m) in metric.iter().enumerate() {
                if m == UNREACHED {
                    continue;
                }
                for u in 0..allowed {
                    let idx = s * branches + u;
                    let ns = next_state[idx];
                    let cand = m + (output[idx] ^ received).count_ones();
                    if cand < next_metric[ns] {
                        next_metric[ns] = cand;
                        survivors[t * states + ns] = (s as u16, u as u8);
                    }
                }
            }
            std::mem::swap(&mut metric, &mut next_metric);
        }

        let data_steps = steps - tail;
        let mut inputs = vec![0u8; data_steps];
        let mut state = 0usize;
        for t in (0..steps).rev() {
            let (prev, u) = survivors[t * states + state];
            if t < data_steps {
                inputs[t] = u;
            }
            state = prev as usize;
        }
        let mut out = BitStream::with_capacity(data_steps * self.inputs);
        for u in inputs {
            for i in 0..self.inputs {
                out.push((u >> i) & 1 == 1);
            }
        }
        Ok(out)
    }
}
