pub mod analyzer;
pub mod bits;
pub mod compressors;
pub mod depth;
pub mod error;
pub mod fst;
pub mod observer;
pub mod predictors;
pub mod report;
pub mod sequences;

pub use bits::BitString;
pub use error::{Error, Result};
