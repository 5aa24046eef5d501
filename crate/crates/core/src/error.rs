use thiserror::Error;

/// Errors produced by the cipher, tweak and AEAD layers.
///
/// Authentication failures deliberately carry no detail: a bad tag and a bad
/// padding block after a good tag are reported identically.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid {what} length: expected {expected}, got {actual}")]
    InvalidLength {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("{what} length {actual} is not a positive multiple of the block size {block_len}")]
    NotBlockAligned {
        what: &'static str,
        block_len: usize,
        actual: usize,
    },
    #[error("{what} out of range")]
    OutOfRange { what: &'static str },
    #[error("invalid padding")]
    Padding,
    #[error("unsupported block length {0}")]
    UnsupportedBlockLength(usize),
    #[error("authentication failed")]
    Authentication,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::InvalidLength {
            what,
            expected,
            actual,
        })
    }
}
