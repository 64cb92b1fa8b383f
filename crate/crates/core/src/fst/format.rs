//! Line-based text format:
//!
//! ```text
//! states 1
//! start 0
//! edge 0 0 0 0
//! edge 0 1 0 1
//! ```
//!
//! `edge <q> <b> <q'> <out>` with `<out>` over {0,1} or `-` for λ. Lines
//! starting with `#` are comments.

use std::fmt::Write;

use super::TransducerSpec;
use crate::bits::BitString;
use crate::error::Error;

/// Serializes in canonical state numbering.
pub fn serialize_fst(machine: &TransducerSpec) -> String {
    let m = machine.canonical();
    let mut s = String::new();
    writeln!(s, "states {}", m.state_count()).unwrap();
    writeln!(s, "start {}", m.start()).unwrap();
    for q in 0..m.state_count() {
        for bit in [false, true] {
            writeln!(
                s,
                "edge {q} {} {} {}",
                bit as u8,
                m.next_state(q, bit),
                m.edge_output(q, bit)
            )
            .unwrap();
        }
    }
    s
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_fst(text: &[u8]) -> Result<TransducerSpec, Error> {
    let text = std::str::from_utf8(text).map_err(|e| parse_err(0, format!("not UTF-8: {e}")))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut header = |key: &str| -> Result<(usize, usize), Error> {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("missing `{key}` line")))?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(parse_err(no, format!("expected `{key} <n>`")));
        }
        let value = parts
            .next()
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| parse_err(no, format!("expected `{key} <n>`")))?;
        if parts.next().is_some() {
            return Err(parse_err(no, "trailing tokens"));
        }
        Ok((no, value))
    };

    let (states_line, k) = header("states")?;
    if k == 0 {
        return Err(parse_err(states_line, "state count must be positive"));
    }
    let (_, start) = header("start")?;

    let mut delta: Vec<[Option<usize>; 2]> = vec![[None; 2]; k];
    let mut output: Vec<[BitString; 2]> = vec![[BitString::new(), BitString::new()]; k];
    let mut last_line = states_line;
    for (no, line) in lines {
        last_line = no;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [kw, q, b, t, out] = tokens[..] else {
            return Err(parse_err(no, "expected `edge <q> <b> <q'> <out>`"));
        };
        if kw != "edge" {
            return Err(parse_err(no, format!("unknown directive {kw:?}")));
        }
        let q: usize = q.parse().map_err(|_| parse_err(no, format!("bad state {q:?}")))?;
        if q >= k {
            return Err(parse_err(no, format!("source state {q} out of range 0..{k}")));
        }
        let b = match b {
            "0" => 0,
            "1" => 1,
            _ => return Err(parse_err(no, format!("bad input bit {b:?}"))),
        };
        let t: usize = t.parse().map_err(|_| parse_err(no, format!("bad state {t:?}")))?;
        let out: BitString = if out == "-" {
            BitString::new()
        } else {
            BitString::parse_ascii(out).map_err(|_| parse_err(no, format!("bad output {out:?}")))?
        };
        if delta[q][b].is_some() {
            return Err(parse_err(no, format!("duplicate edge {q} {b}")));
        }
        delta[q][b] = Some(t);
        output[q][b] = out;
    }

    let mut table = Vec::with_capacity(k);
    for (q, row) in delta.iter().enumerate() {
        match row {
            [Some(a), Some(b)] => table.push([*a, *b]),
            _ => {
                let b = if row[0].is_none() { 0 } else { 1 };
                return Err(parse_err(last_line, format!("missing edge {q} {b}")));
            }
        }
    }
    TransducerSpec::new(start, table, output)
}
