//! LZ78 over bits.
//!
//! Stream layout: one flag bit, then records. Record `i` (1-based) is a
//! `⌈log₂ i⌉`-bit index of the longest earlier phrase (0 = empty) followed by
//! one literal bit. When the input ends inside a known phrase, the flag is 1
//! and the last record carries the index only.

use std::collections::HashMap;

use super::{BitReader, Codec, CodecSpec};
use crate::bits::{ceil_log2, BitString};
use crate::error::Error;

#[derive(Clone, Copy, Debug, Default)]
pub struct Lz78;

/// Walks the phrase parse, calling `emit(index, literal, record number)` per record.
fn parse(x: &[bool], mut emit: impl FnMut(usize, Option<bool>, usize)) {
    let mut children: HashMap<(usize, bool), usize> = HashMap::new();
    let mut next_phrase = 1;
    let mut cur = 0;
    for &b in x {
        match children.get(&(cur, b)) {
            Some(&child) => cur = child,
            None => {
                emit(cur, Some(b), next_phrase);
                children.insert((cur, b), next_phrase);
                next_phrase += 1;
                cur = 0;
            }
        }
    }
    if cur != 0 {
        emit(cur, None, next_phrase);
    }
}

/// Number of records, counting a trailing incomplete phrase.
pub fn lz78_phrase_count(x: &[bool]) -> usize {
    let mut count = 0;
    parse(x, |_, _, _| count += 1);
    count
}

impl Codec for Lz78 {
    fn spec(&self) -> CodecSpec {
        CodecSpec::Lz78
    }

    fn encode(&self, x: &[bool]) -> BitString {
        let mut records = BitString::new();
        let mut incomplete = false;
        parse(x, |index, literal, i| {
            records.push_uint(index as u64, ceil_log2(i as u64));
            match literal {
                Some(b) => records.push(b),
                None => incomplete = true,
            }
        });
        let mut out = BitString::with_capacity(records.len() + 1);
        out.push(incomplete);
        out.extend_from(&records);
        out
    }

    fn decode(&self, w: &[bool]) -> Result<BitString, Error> {
        let mut r = BitReader::new(w);
        let incomplete = r.bit().map_err(|_| Error::Decode("empty lz78 codeword".into()))?;
        let mut phrases: Vec<Vec<bool>> = vec![Vec::new()];
        let mut out = BitString::new();
        let mut i = 1u64;
        loop {
            let width = ceil_log2(i);
            let remaining = r.remaining();
            if remaining == 0 {
                if incomplete {
                    return Err(Error::Decode("lz78 stream lacks its flagged final record".into()));
                }
                return Ok(out);
            }
            if incomplete && remaining == width as usize {
                let index = r.uint(width)? as usize;
                if index == 0 || index >= phrases.len() {
                    return Err(Error::Decode(format!("lz78 final index {index} out of range")));
                }
                out.extend_from(&phrases[index]);
                return Ok(out);
            }
            if remaining < width as usize + 1 {
                return Err(Error::Decode("truncated lz78 record".into()));
            }
            let index = r.uint(width)? as usize;
            if index >= phrases.len() {
                return Err(Error::Decode(format!("lz78 index {index} out of range at record {i}")));
            }
            let bit = r.bit()?;
            let mut phrase = phrases[index].clone();
            phrase.push(bit);
            out.extend_from(&phrase);
            phrases.push(phrase);
            i += 1;
        }
    }
}
