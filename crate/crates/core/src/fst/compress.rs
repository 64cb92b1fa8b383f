use rayon::prelude::*;

use super::{enumerate_ilfsts, serialize_fst, EnumerationLimits, TransducerSpec};
use crate::depth::PerformanceValue;
use crate::error::Error;

/// Bits charged to `machine` for compressing `x`: `|T(x)|`, plus the bit
/// length of its canonical serialization when `header` is set.
pub fn machine_cost_bits(machine: &TransducerSpec, x: &[bool], header: bool) -> u64 {
    let mut cost = machine.run(x).output.len() as u64;
    if header {
        cost += header_bits(machine);
    }
    cost
}

fn header_bits(machine: &TransducerSpec) -> u64 {
    8 * serialize_fst(machine).len() as u64
}

/// Best-machine costs of one input at several prefix lengths, for every
/// state budget `1..=max_level`, over a fixed ordered machine list.
#[derive(Clone, Debug)]
pub struct CompressionTable {
    checkpoints: Vec<usize>,
    // [checkpoint][level - 1] = (cost, index into the machine list)
    best: Vec<Vec<(u64, usize)>>,
}

impl CompressionTable {
    /// Ties go to the machine earliest in `machines`.
    pub fn build(
        machines: &[TransducerSpec],
        x: &[bool],
        checkpoints: &[usize],
        max_level: usize,
        header: bool,
    ) -> Self {
        let horizon = checkpoints.iter().copied().max().unwrap_or(0).min(x.len());
        let none = || vec![vec![(u64::MAX, usize::MAX); max_level]; checkpoints.len()];

        let exact = machines
            .par_iter()
            .enumerate()
            .filter(|(_, m)| m.state_count() <= max_level)
            .fold(none, |mut acc, (i, m)| {
                let costs = prefix_costs(m, &x[..horizon], checkpoints, header);
                let j = m.state_count() - 1;
                for (c, cost) in costs.into_iter().enumerate() {
                    if (cost, i) < acc[c][j] {
                        acc[c][j] = (cost, i);
                    }
                }
                acc
            })
            .reduce(none, |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (ea, eb) in ra.iter_mut().zip(rb) {
                        if eb < *ea {
                            *ea = eb;
                        }
                    }
                }
                a
            });

        // budget ℓ admits every machine with at most ℓ states
        let best = exact
            .into_iter()
            .map(|row| {
                let mut acc = (u64::MAX, usize::MAX);
                row.into_iter()
                    .map(|e| {
                        if e < acc {
                            acc = e;
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        CompressionTable { checkpoints: checkpoints.to_vec(), best }
    }

    pub fn checkpoints(&self) -> &[usize] {
        &self.checkpoints
    }

    /// `(cost, machine index)` at checkpoint position `c` and budget `level`.
    pub fn best(&self, c: usize, level: usize) -> Option<(u64, usize)> {
        let e = self.best[c][level - 1];
        (e.1 != usize::MAX).then_some(e)
    }

    pub fn perf(&self, c: usize, level: usize) -> PerformanceValue {
        let n = self.checkpoints[c];
        match self.best(c, level) {
            Some((cost, _)) if n > 0 => PerformanceValue::clamped(1.0 - cost as f64 / n as f64),
            _ => PerformanceValue::WORST,
        }
    }
}

fn prefix_costs(m: &TransducerSpec, x: &[bool], checkpoints: &[usize], header: bool) -> Vec<u64> {
    let k = m.state_count();
    let mut next = Vec::with_capacity(2 * k);
    let mut len = Vec::with_capacity(2 * k);
    for q in 0..k {
        for bit in [false, true] {
            next.push(m.next_state(q, bit));
            len.push(m.edge_output(q, bit).len() as u64);
        }
    }
    let mut running = vec![0u64; x.len() + 1];
    let mut q = m.start();
    let mut total = 0;
    for (i, &b) in x.iter().enumerate() {
        let e = 2 * q + b as usize;
        total += len[e];
        q = next[e];
        running[i + 1] = total;
    }
    let extra = if header { header_bits(m) } else { 0 };
    checkpoints.iter().map(|&n| running[n.min(x.len())] + extra).collect()
}

/// The lossless machine with at most `k` states and outputs of length at
/// most `l_max` that best compresses `x`, with its performance
/// `clamp(1 − cost/|x|, 0, 1)`.
pub fn best_compression(
    x: &[bool],
    k: usize,
    l_max: usize,
    include_header: bool,
) -> Result<(PerformanceValue, TransducerSpec), Error> {
    if x.is_empty() {
        return Err(Error::Config("best_compression needs a nonempty input".into()));
    }
    let machines: Vec<_> = enumerate_ilfsts(k, l_max, &EnumerationLimits::default())?.collect();
    let table = CompressionTable::build(&machines, x, &[x.len()], k, include_header);
    let (_, idx) = table.best(0, k).expect("family contains the identity");
    Ok((table.perf(0, k), machines[idx].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::fst::check_il;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn one_state_family_cannot_shorten() {
        let (p, m) = best_compression(&b("0101"), 1, 1, false).unwrap();
        assert_eq!(p.value(), 0.0);
        assert_eq!(m, TransducerSpec::identity());
        let (p, _) = best_compression(&b("0"), 1, 1, false).unwrap();
        assert_eq!(p.value(), 0.0);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(best_compression(&[], 1, 1, false).is_err());
    }

    /// Three-state counter: one bit per three zeros, phase kept in the state,
    /// prefix-free codewords `0, 10, 110, 111` for `000, 1, 01, 001`.
    fn zero_counter() -> TransducerSpec {
        TransducerSpec::new(
            0,
            vec![[1, 0], [2, 0], [0, 0]],
            vec![[b("-"), b("10")], [b("-"), b("110")], [b("0"), b("111")]],
        )
        .unwrap()
    }

    #[test]
    fn counter_witness_compresses_zeros() {
        let m = zero_counter();
        assert!(check_il(&m).unwrap().lossless);
        let zeros = BitString::zeros(1024);
        let cost = machine_cost_bits(&m, &zeros, false);
        assert_eq!(cost, 341);
        assert!(1.0 - cost as f64 / 1024.0 >= 0.6);
    }

    #[test]
    fn one_bit_outputs_barely_compress_zeros() {
        // with every edge emitting at most one bit, a lossless machine saves only a
        // bounded number of bits; the best three-state machine saves one
        let (p, m) = best_compression(&BitString::zeros(1024), 3, 1, false).unwrap();
        assert!(check_il(&m).unwrap().lossless);
        assert_eq!(machine_cost_bits(&m, &BitString::zeros(1024), false), 1023);
        assert_eq!(p.value(), 1.0 / 1024.0);
    }

    #[test]
    fn header_cost_is_added() {
        let x = b("0110");
        let m = TransducerSpec::identity();
        let h = 8 * serialize_fst(&m).len() as u64;
        assert_eq!(machine_cost_bits(&m, &x, true), 4 + h);
        let (p, _) = best_compression(&x, 1, 1, true).unwrap();
        assert_eq!(p.value(), 0.0);
    }
}
