//! Deciding information losslessness: whether `x ↦ (T(x), δ̂(x))` is injective.
//!
//! Two distinct inputs either diverge at some position, or one is a proper
//! prefix of the other. The first case is a breadth-first search over pairs
//! of branch states together with the overhang, the suffix by which one
//! branch's output leads the other's. Only the lagging branch is advanced, so
//! the overhang never exceeds the longest edge output. The second case is a
//! nonempty λ-emitting cycle through a reachable state.

use std::collections::{HashMap, VecDeque};

use super::TransducerSpec;
use crate::bits::BitString;
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlVerdict {
    pub lossless: bool,
    /// Distinct inputs with equal output and equal final state.
    pub witness: Option<(BitString, BitString)>,
}

#[derive(Clone, Copy, Debug)]
pub struct IlSearchLimits {
    /// Largest admissible overhang bound `k²·ℓ_max`.
    pub max_overhang_bound: usize,
}

impl Default for IlSearchLimits {
    fn default() -> Self {
        IlSearchLimits { max_overhang_bound: 1024 }
    }
}

pub fn check_il(machine: &TransducerSpec) -> Result<IlVerdict, Error> {
    check_il_with(machine, IlSearchLimits::default())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Lead {
    None,
    First,
    Second,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Config {
    q1: usize,
    q2: usize,
    lead: Lead,
    overhang: Vec<bool>,
}

struct Node {
    config: Config,
    parent: Option<usize>,
    // (branch, bit) consumed to reach this node; the root consumed 0 on branch 1 and 1 on branch 2
    step: Option<(u8, bool)>,
    root_state: usize,
}

pub fn check_il_with(machine: &TransducerSpec, limits: IlSearchLimits) -> Result<IlVerdict, Error> {
    let k = machine.state_count();
    let bound = k * k * machine.max_output_len();
    if bound > limits.max_overhang_bound {
        return Err(Error::Config(format!(
            "overhang bound {bound} exceeds search ceiling {}",
            limits.max_overhang_bound
        )));
    }

    let access = access_strings(machine);
    let reachable: Vec<usize> = machine.bfs_order();

    if let Some((p, s1, s2)) = diverging_pair(machine, &reachable, bound) {
        let mut x = access[p].clone().expect("reachable");
        let mut y = x.clone();
        x.push(false);
        x.extend_from(&s1);
        y.push(true);
        y.extend_from(&s2);
        return Ok(IlVerdict { lossless: false, witness: Some((x, y)) });
    }

    for &p in &reachable {
        if let Some(cycle) = silent_cycle(machine, p) {
            let u = access[p].clone().expect("reachable");
            let mut v = u.clone();
            v.extend_from(&cycle);
            return Ok(IlVerdict { lossless: false, witness: Some((u, v)) });
        }
    }

    Ok(IlVerdict { lossless: true, witness: None })
}

/// Shortest input reaching each state, 0 before 1.
fn access_strings(machine: &TransducerSpec) -> Vec<Option<BitString>> {
    let mut access: Vec<Option<BitString>> = vec![None; machine.state_count()];
    access[machine.start()] = Some(BitString::new());
    let mut queue = VecDeque::from([machine.start()]);
    while let Some(q) = queue.pop_front() {
        for bit in [false, true] {
            let t = machine.next_state(q, bit);
            if access[t].is_none() {
                let mut s = access[q].clone().unwrap();
                s.push(bit);
                access[t] = Some(s);
                queue.push_back(t);
            }
        }
    }
    access
}

/// Combines two emitted outputs into the normalized overhang, or `None` when
/// neither is a prefix of the other.
fn align(lead: Lead, overhang: &[bool], lagging_out: &[bool], lagging: Lead) -> Option<(Lead, Vec<bool>)> {
    if lagging_out.len() <= overhang.len() {
        if overhang[..lagging_out.len()] != *lagging_out {
            return None;
        }
        let rest = overhang[lagging_out.len()..].to_vec();
        let lead = if rest.is_empty() { Lead::None } else { lead };
        Some((lead, rest))
    } else {
        if lagging_out[..overhang.len()] != *overhang {
            return None;
        }
        Some((lagging, lagging_out[overhang.len()..].to_vec()))
    }
}

fn diverging_pair(
    machine: &TransducerSpec,
    reachable: &[usize],
    bound: usize,
) -> Option<(usize, BitString, BitString)> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: HashMap<Config, usize> = HashMap::new();
    let mut queue = VecDeque::new();

    for &p in reachable {
        let out0 = machine.edge_output(p, false);
        let out1 = machine.edge_output(p, true);
        let Some((lead, overhang)) = align(Lead::First, out0, out1, Lead::Second) else {
            continue;
        };
        let config = Config {
            q1: machine.next_state(p, false),
            q2: machine.next_state(p, true),
            lead,
            overhang,
        };
        if seen.contains_key(&config) {
            continue;
        }
        let id = nodes.len();
        seen.insert(config.clone(), id);
        nodes.push(Node { config, parent: None, step: None, root_state: p });
        queue.push_back(id);
    }

    while let Some(id) = queue.pop_front() {
        let config = nodes[id].config.clone();
        if config.q1 == config.q2 && config.lead == Lead::None {
            return Some(reconstruct(&nodes, id));
        }
        let branches: &[u8] = match config.lead {
            Lead::None => &[1, 2],
            Lead::First => &[2],
            Lead::Second => &[1],
        };
        for &branch in branches {
            for bit in [false, true] {
                let (q, lagging, lead) = if branch == 1 {
                    (config.q1, Lead::First, Lead::Second)
                } else {
                    (config.q2, Lead::Second, Lead::First)
                };
                let lead = if config.lead == Lead::None { lagging } else { lead };
                let out = machine.edge_output(q, bit);
                let Some((lead, overhang)) = align(lead, &config.overhang, out, lagging) else {
                    continue;
                };
                if overhang.len() > bound {
                    continue;
                }
                let t = machine.next_state(q, bit);
                let next = if branch == 1 {
                    Config { q1: t, q2: config.q2, lead, overhang }
                } else {
                    Config { q1: config.q1, q2: t, lead, overhang }
                };
                if seen.contains_key(&next) {
                    continue;
                }
                let nid = nodes.len();
                seen.insert(next.clone(), nid);
                nodes.push(Node {
                    config: next,
                    parent: Some(id),
                    step: Some((branch, bit)),
                    root_state: nodes[id].root_state,
                });
                queue.push_back(nid);
            }
        }
    }
    None
}

fn reconstruct(nodes: &[Node], mut id: usize) -> (usize, BitString, BitString) {
    let root_state = nodes[id].root_state;
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    while let Some((branch, bit)) = nodes[id].step {
        if branch == 1 {
            s1.push(bit);
        } else {
            s2.push(bit);
        }
        id = nodes[id].parent.expect("non-root has parent");
    }
    s1.reverse();
    s2.reverse();
    (root_state, BitString::from_bits(s1), BitString::from_bits(s2))
}

/// Shortest nonempty input leading from `p` back to `p` with all outputs λ.
fn silent_cycle(machine: &TransducerSpec, p: usize) -> Option<BitString> {
    let k = machine.state_count();
    let mut prev: Vec<Option<(usize, bool)>> = vec![None; k];
    let mut queue = VecDeque::new();
    for bit in [false, true] {
        if machine.edge_output(p, bit).is_empty() {
            let t = machine.next_state(p, bit);
            if t == p {
                return Some(BitString::from_bits(vec![bit]));
            }
            if prev[t].is_none() {
                prev[t] = Some((p, bit));
                queue.push_back(t);
            }
        }
    }
    while let Some(q) = queue.pop_front() {
        for bit in [false, true] {
            if !machine.edge_output(q, bit).is_empty() {
                continue;
            }
            let t = machine.next_state(q, bit);
            if t == p {
                let mut path = vec![bit];
                let mut cur = q;
                while cur != p {
                    let (from, b) = prev[cur].unwrap();
                    path.push(b);
                    cur = from;
                }
                path.reverse();
                return Some(BitString::from_bits(path));
            }
            if prev[t].is_none() {
                prev[t] = Some((q, bit));
                queue.push_back(t);
            }
        }
    }
    None
}

/// Exhaustive injectivity check over all inputs of length at most `max_len`.
/// Returns the first colliding pair found, in length-lexicographic order.
pub fn brute_force_il(machine: &TransducerSpec, max_len: usize) -> Option<(BitString, BitString)> {
    let mut seen: HashMap<(BitString, usize), BitString> = HashMap::new();
    for len in 0..=max_len {
        for v in 0u64..(1u64 << len) {
            let mut x = BitString::with_capacity(len);
            x.push_uint(v, len as u32);
            let r = machine.run(&x);
            if let Some(prev) = seen.get(&(r.output.clone(), r.final_state)) {
                return Some((prev.clone(), x));
            }
            seen.insert((r.output, r.final_state), x);
        }
    }
    None
}
