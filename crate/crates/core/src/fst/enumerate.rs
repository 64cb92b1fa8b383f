//! Enumeration of information-lossless transducers up to isomorphism.
//!
//! Machines are produced in a fixed order: by state count, then by
//! transition table (lexicographic over edges `(0,0), (0,1), (1,0), …`),
//! then by output table with each edge output ranging over
//! `λ, 0, 1, 00, 01, …` in length-lexicographic order. Only transition
//! tables already in breadth-first canonical numbering with every state
//! reachable are used, so each isomorphism class appears once.

use super::{check_il, TransducerSpec};
use crate::bits::BitString;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_states: usize,
    pub max_output: usize,
    /// Ceiling on the number of raw (transition, output) tables examined.
    pub max_raw: u128,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_states: 3, max_output: 2, max_raw: 100_000_000 }
    }
}

impl EnumerationLimits {
    pub fn unbounded() -> Self {
        EnumerationLimits { max_states: usize::MAX, max_output: usize::MAX, max_raw: u128::MAX }
    }

    pub fn check(&self, k: usize, l_max: usize) -> Result<(), Error> {
        if k == 0 {
            return Err(Error::Config("state budget must be at least 1".into()));
        }
        if l_max == 0 {
            return Err(Error::Config(
                "maximum output length must be at least 1 (no machine with only λ outputs is lossless)".into(),
            ));
        }
        if k > self.max_states {
            return Err(Error::Config(format!(
                "state budget {k} exceeds ceiling {}",
                self.max_states
            )));
        }
        if l_max > self.max_output {
            return Err(Error::Config(format!(
                "maximum output length {l_max} exceeds ceiling {}",
                self.max_output
            )));
        }
        let raw = raw_space_size(k, l_max);
        if raw > self.max_raw {
            return Err(Error::Config(format!(
                "enumeration space of {raw} tables exceeds ceiling {}",
                self.max_raw
            )));
        }
        Ok(())
    }
}

/// `Σ_{j ≤ k} j^{2j} · O^{2j}` with `O = 2^{ℓ+1} − 1` outputs per edge.
pub fn raw_space_size(k: usize, l_max: usize) -> u128 {
    let outputs = output_count(l_max);
    (1..=k)
        .map(|j| {
            let per_edge = (j as u128).saturating_mul(outputs);
            per_edge.saturating_pow(2 * j as u32)
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

fn output_count(l_max: usize) -> u128 {
    if l_max >= 127 {
        u128::MAX
    } else {
        (1u128 << (l_max + 1)) - 1
    }
}

/// All strings of length ≤ `l_max` in length-lexicographic order.
fn edge_outputs(l_max: usize) -> Vec<BitString> {
    let mut all = Vec::new();
    for len in 0..=l_max {
        for v in 0u64..(1u64 << len) {
            let mut s = BitString::with_capacity(len);
            s.push_uint(v, len as u32);
            all.push(s);
        }
    }
    all
}

/// Transition tables over `j` states in canonical numbering, all reachable.
fn canonical_structures(j: usize) -> Vec<Vec<[usize; 2]>> {
    let edges = 2 * j;
    let total = (j as u64).pow(edges as u32);
    let mut out = Vec::new();
    let mut digits = vec![0usize; edges];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = (c % j as u64) as usize;
            c /= j as u64;
        }
        if is_canonical_table(&digits, j) {
            out.push(digits.chunks(2).map(|e| [e[0], e[1]]).collect());
        }
    }
    out
}

fn is_canonical_table(flat: &[usize], j: usize) -> bool {
    // breadth-first from 0 must discover states in increasing order
    let mut next = 1;
    let mut q = 0;
    while q < next {
        for b in 0..2 {
            let t = flat[2 * q + b];
            if t == next {
                next += 1;
            } else if t > next {
                return false;
            }
        }
        q += 1;
    }
    next == j
}

/// Lazily yields every lossless machine with at most `k` states and edge
/// outputs of length at most `l_max`, once per isomorphism class.
pub struct IlfstEnumerator {
    k: usize,
    outputs: Vec<BitString>,
    states: usize,
    structures: Vec<Vec<[usize; 2]>>,
    structure: usize,
    odometer: Vec<usize>,
    exhausted_structure: bool,
}

pub fn enumerate_ilfsts(
    k: usize,
    l_max: usize,
    limits: &EnumerationLimits,
) -> Result<IlfstEnumerator, Error> {
    limits.check(k, l_max)?;
    Ok(IlfstEnumerator {
        k,
        outputs: edge_outputs(l_max),
        states: 1,
        structures: canonical_structures(1),
        structure: 0,
        odometer: vec![0; 2],
        exhausted_structure: false,
    })
}

impl IlfstEnumerator {
    fn advance_structure(&mut self) -> bool {
        self.structure += 1;
        while self.structure >= self.structures.len() {
            if self.states >= self.k {
                return false;
            }
            self.states += 1;
            self.structures = canonical_structures(self.states);
            self.structure = 0;
        }
        self.odometer = vec![0; 2 * self.states];
        self.exhausted_structure = false;
        true
    }

    fn candidate(&self) -> TransducerSpec {
        let delta = self.structures[self.structure].clone();
        let output = self
            .odometer
            .chunks(2)
            .map(|e| [self.outputs[e[0]].clone(), self.outputs[e[1]].clone()])
            .collect();
        TransducerSpec::new(0, delta, output).expect("enumerated tables are valid")
    }

    fn step_odometer(&mut self) {
        let base = self.outputs.len();
        for d in self.odometer.iter_mut().rev() {
            *d += 1;
            if *d < base {
                return;
            }
            *d = 0;
        }
        self.exhausted_structure = true;
    }
}

impl Iterator for IlfstEnumerator {
    type Item = TransducerSpec;

    fn next(&mut self) -> Option<TransducerSpec> {
        loop {
            if self.structures.is_empty() || self.exhausted_structure {
                if !self.advance_structure() {
                    return None;
                }
            }
            let m = self.candidate();
            self.step_odometer();
            // the overhang bound k²·ℓ_max stays tiny under the enumeration ceilings
            if check_il(&m).map(|v| v.lossless).unwrap_or(false) {
                return Some(m);
            }
        }
    }
}
