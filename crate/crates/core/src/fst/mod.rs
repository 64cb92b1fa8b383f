//! Finite-state transducers over {0,1} and the information-lossless
//! compressor family built from them.

mod compress;
mod enumerate;
mod format;
mod il;

pub use compress::{best_compression, machine_cost_bits, CompressionTable};
pub use enumerate::{enumerate_ilfsts, raw_space_size, EnumerationLimits, IlfstEnumerator};
pub use format::{parse_fst, serialize_fst};
pub use il::{brute_force_il, check_il, check_il_with, IlSearchLimits, IlVerdict};

use std::collections::VecDeque;

use crate::bits::BitString;
use crate::error::Error;

/// A transducer `(Q, δ, ν, q₀)` with states `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransducerSpec {
    start: usize,
    delta: Vec<[usize; 2]>,
    output: Vec<[BitString; 2]>,
}

/// Output `T(x)` and final state `δ̂(x)` of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub output: BitString,
    pub final_state: usize,
}

impl TransducerSpec {
    pub fn new(
        start: usize,
        delta: Vec<[usize; 2]>,
        output: Vec<[BitString; 2]>,
    ) -> Result<Self, Error> {
        let k = delta.len();
        if k == 0 {
            return Err(Error::Validation("a transducer needs at least one state".into()));
        }
        if output.len() != k {
            return Err(Error::Validation(format!(
                "transition table has {k} states but output table has {}",
                output.len()
            )));
        }
        if start >= k {
            return Err(Error::Validation(format!("start state {start} out of range 0..{k}")));
        }
        for (q, row) in delta.iter().enumerate() {
            for (b, &t) in row.iter().enumerate() {
                if t >= k {
                    return Err(Error::Validation(format!(
                        "edge {q} {b} targets state {t}, out of range 0..{k}"
                    )));
                }
            }
        }
        Ok(TransducerSpec { start, delta, output })
    }

    /// One state, `ν(0, b) = b`.
    pub fn identity() -> Self {
        Self::one_state(bits("0"), bits("1"))
    }

    /// One state, `ν(0, b) = 1 - b`.
    pub fn negation() -> Self {
        Self::one_state(bits("1"), bits("0"))
    }

    /// One state emitting λ on both edges.
    pub fn drop_all() -> Self {
        Self::one_state(BitString::new(), BitString::new())
    }

    /// Two states remembering the previous bit; emits 1 exactly when the bit changes.
    pub fn delta_coder() -> Self {
        TransducerSpec {
            start: 0,
            delta: vec![[0, 1], [0, 1]],
            output: vec![[bits("0"), bits("1")], [bits("1"), bits("0")]],
        }
    }

    fn one_state(on0: BitString, on1: BitString) -> Self {
        TransducerSpec { start: 0, delta: vec![[0, 0]], output: vec![[on0, on1]] }
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn next_state(&self, q: usize, bit: bool) -> usize {
        self.delta[q][bit as usize]
    }

    pub fn edge_output(&self, q: usize, bit: bool) -> &BitString {
        &self.output[q][bit as usize]
    }

    /// Longest `ν(q, b)`.
    pub fn max_output_len(&self) -> usize {
        self.output.iter().flat_map(|r| r.iter().map(|o| o.len())).max().unwrap_or(0)
    }

    pub fn run(&self, input: &[bool]) -> RunResult {
        let mut q = self.start;
        let mut output = BitString::new();
        for &b in input {
            output.extend_from(self.edge_output(q, b));
            q = self.next_state(q, b);
        }
        RunResult { output, final_state: q }
    }

    /// Final state after reading `input` from state `from`.
    pub fn state_after(&self, from: usize, input: &[bool]) -> usize {
        input.iter().fold(from, |q, &b| self.next_state(q, b))
    }

    /// States in breadth-first order from the start state, 0-edge before 1-edge.
    pub fn bfs_order(&self) -> Vec<usize> {
        let k = self.state_count();
        let mut seen = vec![false; k];
        let mut order = Vec::with_capacity(k);
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for t in self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    pub fn all_states_reachable(&self) -> bool {
        self.bfs_order().len() == self.state_count()
    }

    /// Renumbers states by breadth-first discovery from the start state.
    /// Unreachable states follow in their original relative order.
    pub fn canonical(&self) -> TransducerSpec {
        let k = self.state_count();
        let mut order = self.bfs_order();
        let mut placed = vec![false; k];
        for &q in &order {
            placed[q] = true;
        }
        order.extend((0..k).filter(|&q| !placed[q]));
        let mut rename = vec![0; k];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        let delta = order
            .iter()
            .map(|&old| [rename[self.delta[old][0]], rename[self.delta[old][1]]])
            .collect();
        let output = order.iter().map(|&old| self.output[old].clone()).collect();
        TransducerSpec { start: 0, delta, output }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }
}

fn bits(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}
