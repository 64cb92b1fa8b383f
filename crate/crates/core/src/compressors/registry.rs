//! A time-indexed registry of codecs. A program for budget `t` is a
//! `⌈log₂ t⌉`-bit selector naming one of the first `t` entries followed by
//! that entry's codeword; the registry encoder returns the shortest such
//! program, preferring the lowest entry on ties.

use std::fmt;
use std::str::FromStr;

use super::{BitReader, Codec, CodecSpec, Codeword};
use crate::bits::{ceil_log2, BitString};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistrySpec {
    entries: Vec<CodecSpec>,
}

impl RegistrySpec {
    pub fn new(entries: Vec<CodecSpec>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::Config("registry needs at least one codec".into()));
        }
        for (i, a) in entries.iter().enumerate() {
            if entries[..i].iter().any(|b| b.name() == a.name()) {
                return Err(Error::Config(format!("codec {:?} listed twice", a.name())));
            }
        }
        Ok(RegistrySpec { entries })
    }

    pub fn entries(&self) -> &[CodecSpec] {
        &self.entries
    }

    /// Full budget `T`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_budget(&self, t: usize) -> Result<(), Error> {
        if t == 0 || t > self.len() {
            return Err(Error::Config(format!("budget {t} outside 1..={}", self.len())));
        }
        Ok(())
    }
}

impl FromStr for RegistrySpec {
    type Err = Error;

    /// Comma-separated codec names, e.g. `identity,lz78,rle:4`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let entries = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<Vec<CodecSpec>, _>>()?;
        RegistrySpec::new(entries)
    }
}

impl fmt::Display for RegistrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        f.write_str(&names.join(","))
    }
}

pub fn registry_encode(reg: &RegistrySpec, x: &[bool], budget: usize) -> Result<Codeword, Error> {
    reg.check_budget(budget)?;
    let width = ceil_log2(budget as u64);
    let (index, payload) = reg.entries[..budget]
        .iter()
        .map(|spec| spec.build().encode(x))
        .enumerate()
        .min_by_key(|(i, w)| (w.len(), *i))
        .expect("budget >= 1");
    let mut bits = BitString::with_capacity(width as usize + payload.len());
    bits.push_uint(index as u64, width);
    bits.extend_from(&payload);
    Ok(Codeword { bits, producer: format!("registry[{reg}]@{budget}") })
}

pub fn registry_decode(reg: &RegistrySpec, w: &[bool], budget: usize) -> Result<BitString, Error> {
    reg.check_budget(budget)?;
    let width = ceil_log2(budget as u64);
    let mut r = BitReader::new(w);
    let index = r.uint(width)? as usize;
    if index >= budget {
        return Err(Error::Decode(format!("selector {index} outside budget {budget}")));
    }
    let codec: Box<dyn Codec> = reg.entries[index].build();
    codec.decode(&w[width as usize..])
}

/// `|registry_encode(x, t)| − |registry_encode(x, T)|`.
pub fn bennett_gap(reg: &RegistrySpec, x: &[bool], budget: usize) -> Result<i64, Error> {
    let weak = registry_encode(reg, x, budget)?.bits.len() as i64;
    let full = registry_encode(reg, x, reg.len())?.bits.len() as i64;
    Ok(weak - full)
}
