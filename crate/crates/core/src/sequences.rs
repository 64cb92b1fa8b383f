//! String enumeration utilities and deterministic sequence generators.
//!
//! Strings are enumerated `λ, s₀, s₁, …` in length-lexicographic order, so
//! `s₀ = 0`, `s₁ = 1`, `s₂ = 00`. The empty string carries no index and
//! does not take part in characteristic sequences.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::Error;

/// Longest prefix `generate` produces without an explicit override.
pub const GENERATE_CEILING: usize = 1 << 20;

/// `sₙ`.
pub fn nth_string(n: u64) -> BitString {
    // sₙ is the binary expansion of n + 2 without its leading 1
    let m = n as u128 + 2;
    let width = 127 - m.leading_zeros();
    (0..width).rev().map(|i| (m >> i) & 1 == 1).collect()
}

/// Inverse of `nth_string`; `None` for λ or strings longer than 63 bits.
pub fn string_index(s: &[bool]) -> Option<u64> {
    if s.is_empty() || s.len() > 63 {
        return None;
    }
    let m = s.iter().fold(1u64, |acc, &b| (acc << 1) | b as u64);
    Some(m - 2)
}

/// Least element under length-then-lexicographic order.
pub fn first_of<'a, I>(set: I) -> Result<BitString, Error>
where
    I: IntoIterator<Item = &'a BitString>,
{
    set.into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .cloned()
        .ok_or_else(|| Error::Validation("first of an empty set".into()))
}

/// Membership rules over strings, for characteristic sequences.
type Rule = fn(&[bool]) -> bool;

const RULES: &[(&str, Rule)] = &[
    ("evens", |s| s.len() % 2 == 0),
    ("palindromes", |s| s.iter().eq(s.iter().rev())),
];

pub fn rule_names() -> impl Iterator<Item = &'static str> {
    RULES.iter().map(|(n, _)| *n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    Periodic(BitString),
    Champernowne,
    Prng(u64),
    CharFn(String),
    BlockDeep,
}

impl SequenceSpec {
    /// The infinite sequence as a bit iterator.
    pub fn bits(&self) -> Result<Box<dyn Iterator<Item = bool> + Send>, Error> {
        Ok(match self {
            SequenceSpec::Periodic(p) => {
                if p.is_empty() {
                    return Err(Error::Config("periodic pattern must be nonempty".into()));
                }
                Box::new(p.clone().into_vec().into_iter().cycle())
            }
            SequenceSpec::Champernowne => Box::new((0u64..).flat_map(|i| nth_string(i).into_vec())),
            SequenceSpec::Prng(seed) => Box::new(XorShift64Star::new(*seed)?),
            SequenceSpec::CharFn(name) => {
                let rule = RULES
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, r)| *r)
                    .ok_or_else(|| Error::Config(format!("unknown membership rule {name:?}")))?;
                Box::new((0u64..).map(move |i| rule(&nth_string(i))))
            }
            SequenceSpec::BlockDeep => Box::new((0u32..).flat_map(|j| {
                let block: Vec<bool> =
                    std::iter::repeat_n(false, 1 << j).chain(std::iter::once(true)).collect();
                std::iter::repeat_n(block, 1 << (2 * j)).flatten()
            })),
        })
    }

    /// The first `n` bits, subject to `GENERATE_CEILING`.
    pub fn generate(&self, n: usize) -> Result<BitString, Error> {
        self.generate_with_ceiling(n, GENERATE_CEILING)
    }

    pub fn generate_with_ceiling(&self, n: usize, ceiling: usize) -> Result<BitString, Error> {
        if n > ceiling {
            return Err(Error::Config(format!("length {n} exceeds generation ceiling {ceiling}")));
        }
        Ok(self.bits()?.take(n).collect())
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    /// `periodic:<bits>`, `champernowne`, `prng:<seed>`, `charfn:<rule>`, `blockdeep`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let spec = match (kind, arg) {
            ("periodic", Some(p)) => {
                let p = BitString::parse_ascii(p)?;
                if p.is_empty() {
                    return Err(Error::Config("periodic pattern must be nonempty".into()));
                }
                SequenceSpec::Periodic(p)
            }
            ("champernowne", None) => SequenceSpec::Champernowne,
            ("prng", Some(seed)) => {
                let seed = seed
                    .parse()
                    .map_err(|_| Error::Config(format!("bad prng seed {seed:?}")))?;
                if seed == 0 {
                    return Err(Error::Config("prng seed must be nonzero".into()));
                }
                SequenceSpec::Prng(seed)
            }
            ("charfn", Some(rule)) => {
                if !rule_names().any(|r| r == rule) {
                    return Err(Error::Config(format!("unknown membership rule {rule:?}")));
                }
                SequenceSpec::CharFn(rule.to_string())
            }
            ("blockdeep", None) => SequenceSpec::BlockDeep,
            _ => return Err(Error::Config(format!("unrecognized sequence spec {s:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Periodic(p) => write!(f, "periodic:{}", p.to_ascii()),
            SequenceSpec::Champernowne => f.write_str("champernowne"),
            SequenceSpec::Prng(seed) => write!(f, "prng:{seed}"),
            SequenceSpec::CharFn(rule) => write!(f, "charfn:{rule}"),
            SequenceSpec::BlockDeep => f.write_str("blockdeep"),
        }
    }
}

/// xorshift64* emitting the top bit of each scrambled output.
#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Result<Self, Error> {
        if seed == 0 {
            return Err(Error::Config("prng seed must be nonzero".into()));
        }
        Ok(XorShift64Star { state: seed })
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(2685821657736338717)
    }
}

impl Iterator for XorShift64Star {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        Some(self.next_u64() >> 63 == 1)
    }
}
