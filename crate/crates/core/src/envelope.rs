//! Binary envelope written by the command-line tool.
//!
//! ```text
//! offset  size       field
//! 0       4          magic "TORT"
//! 4       1          version (0x01)
//! 5       1          mode (0x00 nonce-respecting, 0x01 misuse-resistant)
//! 6       1          nonce_len (8 or 15)
//! 7       nonce_len  nonce
//! ..      16         tag
//! ..      8          ct_len, big-endian
//! ..      ct_len     ciphertext (positive multiple of 16)
//! ```
//!
//! Associated data is never stored; it has to be supplied again to open.

use thiserror::Error;

use crate::aead::{Mode, SealedMessage};

pub const MAGIC: [u8; 4] = *b"TORT";
pub const VERSION: u8 = 0x01;
pub const TAG_LEN: usize = 16;
pub const BLOCK_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("envelope truncated")]
    Truncated,
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported envelope version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown mode byte {0:#04x}")]
    UnknownMode(u8),
    #[error("nonce length {len} does not match mode {mode}")]
    NonceLength { mode: Mode, len: usize },
    #[error("tag must be {TAG_LEN} bytes")]
    TagLength,
    #[error("ciphertext length {0} is not a positive multiple of {BLOCK_LEN}")]
    CiphertextLength(u64),
    #[error("{0} trailing bytes after ciphertext")]
    TrailingBytes(usize),
}

fn mode_byte(mode: Mode) -> u8 {
    match mode {
        Mode::NonceRespecting => 0x00,
        Mode::MisuseResistant => 0x01,
    }
}

fn nonce_len(mode: Mode) -> usize {
    match mode {
        Mode::NonceRespecting => 8,
        Mode::MisuseResistant => 15,
    }
}

/// A parsed envelope. Field invariants are enforced on both encode and parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub mode: Mode,
    pub nonce: Vec<u8>,
    pub tag: Vec<u8>,
    pub ciphertext: Vec<u8>,
}

impl Envelope {
    fn validate(&self) -> Result<(), EnvelopeError> {
        if self.nonce.len() != nonce_len(self.mode) {
            return Err(EnvelopeError::NonceLength {
                mode: self.mode,
                len: self.nonce.len(),
            });
        }
        if self.tag.len() != TAG_LEN {
            return Err(EnvelopeError::TagLength);
        }
        if self.ciphertext.is_empty() || !self.ciphertext.len().is_multiple_of(BLOCK_LEN) {
            return Err(EnvelopeError::CiphertextLength(self.ciphertext.len() as u64));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, EnvelopeError> {
        self.validate()?;
        let mut out =
            Vec::with_capacity(7 + self.nonce.len() + TAG_LEN + 8 + self.ciphertext.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(mode_byte(self.mode));
        out.push(self.nonce.len() as u8);
        out.extend_from_slice(&self.nonce);
        out.extend_from_slice(&self.tag);
        out.extend_from_slice(&(self.ciphertext.len() as u64).to_be_bytes());
        out.extend_from_slice(&self.ciphertext);
        Ok(out)
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, EnvelopeError> {
        let mut rest = bytes;
        let mut take = |n: usize| -> Result<&[u8], EnvelopeError> {
            if rest.len() < n {
                return Err(EnvelopeError::Truncated);
            }
            let (head, tail) = rest.split_at(n);
            rest = tail;
            Ok(head)
        };

        if take(4)? != MAGIC {
            return Err(EnvelopeError::BadMagic);
        }
        let version = take(1)?[0];
        if version != VERSION {
            return Err(EnvelopeError::UnsupportedVersion(version));
        }
        let mode = match take(1)?[0] {
            0x00 => Mode::NonceRespecting,
            0x01 => Mode::MisuseResistant,
            other => return Err(EnvelopeError::UnknownMode(other)),
        };
        let len = take(1)?[0] as usize;
        if len != nonce_len(mode) {
            return Err(EnvelopeError::NonceLength { mode, len });
        }
        let nonce = take(len)?.to_vec();
        let tag = take(TAG_LEN)?.to_vec();
        let ct_len = u64::from_be_bytes(take(8)?.try_into().expect("8 bytes"));
        if ct_len == 0 || ct_len % BLOCK_LEN as u64 != 0 {
            return Err(EnvelopeError::CiphertextLength(ct_len));
        }
        let ct_len = usize::try_from(ct_len).map_err(|_| EnvelopeError::Truncated)?;
        let ciphertext = take(ct_len)?.to_vec();
        if !rest.is_empty() {
            return Err(EnvelopeError::TrailingBytes(rest.len()));
        }
        Ok(Self {
            mode,
            nonce,
            tag,
            ciphertext,
        })
    }
}

impl From<SealedMessage> for Envelope {
    fn from(s: SealedMessage) -> Self {
        Self {
            mode: s.mode,
            nonce: s.nonce,
            tag: s.tag,
            ciphertext: s.ciphertext,
        }
    }
}

impl From<Envelope> for SealedMessage {
    fn from(e: Envelope) -> Self {
        Self {
            mode: e.mode,
            nonce: e.nonce,
            ciphertext: e.ciphertext,
            tag: e.tag,
        }
    }
}
