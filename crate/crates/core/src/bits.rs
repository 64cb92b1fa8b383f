//! Finite binary strings.

use std::fmt;
use std::ops::{Deref, Index};
use std::slice::SliceIndex;
use std::str::FromStr;

use crate::error::Error;

/// A finite string over {0,1}. The empty string displays as `-`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn with_capacity(n: usize) -> Self {
        BitString(Vec::with_capacity(n))
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(n: usize) -> Self {
        BitString(vec![false; n])
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &[bool]) {
        self.0.extend_from_slice(other);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        for shift in (0..width).rev() {
            self.0.push((value >> shift) & 1 == 1);
        }
    }

    pub fn prefix(&self, n: usize) -> BitString {
        BitString(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &[bool]) -> bool {
        other.len() >= self.0.len() && other[..self.0.len()] == self.0[..]
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.0
    }

    /// Parses ASCII `0`/`1`, skipping ASCII whitespace.
    pub fn parse_ascii(text: &str) -> Result<Self, Error> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_ascii_whitespace() => {}
                c => {
                    return Err(Error::Config(format!(
                        "invalid character {c:?} at offset {i} in bit string"
                    )))
                }
            }
        }
        Ok(BitString(bits))
    }

    pub fn to_ascii(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl Deref for BitString {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl<I: SliceIndex<[bool]>> Index<I> for BitString {
    type Output = I::Output;

    fn index(&self, i: I) -> &I::Output {
        &self.0[i]
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        BitString(bits.to_vec())
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString(iter.into_iter().collect())
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Accepts `-` or `λ` for the empty string.
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "-" | "λ" => Ok(BitString::new()),
            t => BitString::parse_ascii(t),
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&self.to_ascii())
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// ⌈log₂ n⌉ for n ≥ 1 (0 for n = 1).
pub fn ceil_log2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}
