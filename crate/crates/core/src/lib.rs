//! Tortoise: a generic construction that turns any block cipher into an
//! authenticated cipher with associated data.
//!
//! The layers, bottom up:
//!
//! - [`block_cipher`]: the [`BlockCipher`] contract, AES-128 and a 16-bit toy
//!   cipher used for exhaustive testing.
//! - [`xof`]: SHAKE128 over a local Keccak permutation.
//! - [`tweakable`]: a tweakable block cipher from any [`BlockCipher`] by
//!   deriving a per-tweak subkey and output mask from SHAKE128, plus the
//!   domain-separated tweak encodings.
//! - [`aead`]: nonce-respecting and misuse-resistant modes.
//! - [`kat`]: known-answer vector format, generator and verifier.
//! - [`envelope`]: the on-disk format used by the command-line tool.
//!
//! ```
//! use tortoise::{Mode, TortoiseAes128};
//!
//! let key = [7u8; 16];
//! let aead = TortoiseAes128::new(&key).unwrap();
//! let sealed = aead.seal(Mode::MisuseResistant, &[1u8; 15], b"header", b"payload").unwrap();
//! assert_eq!(aead.open(&sealed, b"header").unwrap(), b"payload");
//! assert!(aead.open(&sealed, b"other header").is_err());
//! ```

pub mod aead;
pub mod block_cipher;
pub mod envelope;
mod error;
pub mod kat;
pub mod padding;
pub mod tweakable;
pub mod xof;

pub use aead::{Mode, SealedMessage, Tortoise, TortoiseAes128};
pub use block_cipher::{Aes128, BlockCipher, CipherSpec, ToyCipher};
pub use error::{Error, Result};
pub use padding::{pkcs7_pad, pkcs7_unpad};
pub use tweakable::{Tweak, TweakLayout, TweakableCipher};
pub use xof::shake128;
