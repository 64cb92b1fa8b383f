//! Run-length coding: each run is `(bit, width-bit length)`, lengths in
//! `1..2^width`; longer runs are split.

use super::{BitReader, Codec, CodecSpec};
use crate::bits::BitString;
use crate::error::Error;

#[derive(Clone, Copy, Debug)]
pub struct Rle {
    width: u32,
}

impl Rle {
    pub fn new(width: u32) -> Self {
        assert!((1..=32).contains(&width), "rle width {width} out of range");
        Rle { width }
    }

    fn max_run(&self) -> usize {
        (1usize << self.width) - 1
    }
}

impl Codec for Rle {
    fn spec(&self) -> CodecSpec {
        CodecSpec::Rle { width: self.width }
    }

    fn encode(&self, x: &[bool]) -> BitString {
        let mut out = BitString::new();
        for run in x.chunk_by(|a, b| a == b) {
            for piece in run.chunks(self.max_run()) {
                out.push(piece[0]);
                out.push_uint(piece.len() as u64, self.width);
            }
        }
        out
    }

    fn decode(&self, w: &[bool]) -> Result<BitString, Error> {
        let record = self.width as usize + 1;
        if w.len() % record != 0 {
            return Err(Error::Decode(format!(
                "rle codeword length {} is not a multiple of {record}",
                w.len()
            )));
        }
        let mut r = BitReader::new(w);
        let mut out = BitString::new();
        while r.remaining() > 0 {
            let bit = r.bit()?;
            let len = r.uint(self.width)?;
            if len == 0 {
                return Err(Error::Decode("rle run of length zero".into()));
            }
            for _ in 0..len {
                out.push(bit);
            }
        }
        Ok(out)
    }
}
