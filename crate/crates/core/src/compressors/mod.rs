//! Computable compressors (one-to-one string maps) and a time-indexed
//! registry of them standing in for the shortest-program compressor.

mod lz78;
mod registry;
mod rle;

pub use lz78::{lz78_phrase_count, Lz78};
pub use registry::{bennett_gap, registry_decode, registry_encode, RegistrySpec};
pub use rle::Rle;

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::depth::PerformanceValue;
use crate::error::Error;

/// A lossless codec: `decode(encode(x)) == x` for every `x`.
pub trait Codec: Send + Sync {
    fn spec(&self) -> CodecSpec;
    fn encode(&self, x: &[bool]) -> BitString;
    fn decode(&self, w: &[bool]) -> Result<BitString, Error>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodecSpec {
    Identity,
    /// Run lengths in fixed `width`-bit fields.
    Rle { width: u32 },
    Lz78,
}

pub const DEFAULT_RLE_WIDTH: u32 = 8;

impl CodecSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CodecSpec::Identity => "identity",
            CodecSpec::Rle { .. } => "rle",
            CodecSpec::Lz78 => "lz78",
        }
    }

    pub fn build(&self) -> Box<dyn Codec> {
        match *self {
            CodecSpec::Identity => Box::new(IdentityCodec),
            CodecSpec::Rle { width } => Box::new(Rle::new(width)),
            CodecSpec::Lz78 => Box::new(Lz78),
        }
    }
}

type CodecCtor = fn(Option<&str>) -> Result<CodecSpec, Error>;

/// Codec names accepted in configuration, with their constructors.
const CODECS: &[(&str, CodecCtor)] = &[
    ("identity", |arg| match arg {
        None => Ok(CodecSpec::Identity),
        Some(a) => Err(Error::Config(format!("identity takes no parameter, got {a:?}"))),
    }),
    ("rle", |arg| {
        let width = match arg {
            None => DEFAULT_RLE_WIDTH,
            Some(a) => a
                .parse()
                .ok()
                .filter(|w| (1..=32).contains(w))
                .ok_or_else(|| Error::Config(format!("rle width must be 1..=32, got {a:?}")))?,
        };
        Ok(CodecSpec::Rle { width })
    }),
    ("lz78", |arg| match arg {
        None => Ok(CodecSpec::Lz78),
        Some(a) => Err(Error::Config(format!("lz78 takes no parameter, got {a:?}"))),
    }),
];

pub fn codec_names() -> impl Iterator<Item = &'static str> {
    CODECS.iter().map(|(n, _)| *n)
}

impl FromStr for CodecSpec {
    type Err = Error;

    /// `identity`, `lz78`, `rle` or `rle:<width>`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let (_, ctor) = CODECS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Config(format!("unknown codec {name:?}")))?;
        ctor(arg)
    }
}

impl fmt::Display for CodecSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecSpec::Rle { width } if *width != DEFAULT_RLE_WIDTH => write!(f, "rle:{width}"),
            other => f.write_str(other.name()),
        }
    }
}

/// Encoded bits tagged with what produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub bits: BitString,
    pub producer: String,
}

pub fn encode(codec: &CodecSpec, x: &[bool]) -> Codeword {
    Codeword { bits: codec.build().encode(x), producer: codec.to_string() }
}

pub fn decode(codec: &CodecSpec, w: &Codeword) -> Result<BitString, Error> {
    codec.build().decode(&w.bits)
}

/// `clamp(1 − length_code/length_in, 0, 1)`.
pub fn compressor_perf(length_in: usize, length_code: usize) -> PerformanceValue {
    assert!(length_in >= 1, "performance of an empty input");
    PerformanceValue::clamped(1.0 - length_code as f64 / length_in as f64)
}

struct IdentityCodec;

impl Codec for IdentityCodec {
    fn spec(&self) -> CodecSpec {
        CodecSpec::Identity
    }

    fn encode(&self, x: &[bool]) -> BitString {
        BitString::from(x)
    }

    fn decode(&self, w: &[bool]) -> Result<BitString, Error> {
        Ok(BitString::from(w))
    }
}

/// Reads fixed-width unsigned fields, most significant bit first.
pub(crate) struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub(crate) fn new(bits: &'a [bool]) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub(crate) fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub(crate) fn bit(&mut self) -> Result<bool, Error> {
        let b = *self
            .bits
            .get(self.pos)
            .ok_or_else(|| Error::Decode("truncated codeword".into()))?;
        self.pos += 1;
        Ok(b)
    }

    pub(crate) fn uint(&mut self, width: u32) -> Result<u64, Error> {
        if self.remaining() < width as usize {
            return Err(Error::Decode("truncated codeword".into()));
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.bit()? as u64;
        }
        Ok(v)
    }
}
