//! Tweakable block cipher built from any [`BlockCipher`], plus the tweak
//! encodings used by the AEAD modes.
//!
//! For a tweak `T`, SHAKE128 is run over `master_key || T` and squeezed to
//! `key_len + block_len` bytes. The first `key_len` bytes key the underlying
//! cipher, the remaining `block_len` bytes are an output mask:
//!
//! ```text
//! E~(K, T, P) = E(subkey, P) ^ mask
//! D~(K, T, C) = D(subkey, C ^ mask)
//! ```
//!
//! # Tweak layouts
//!
//! Every tweak is exactly one block long. The high nibble of byte 0 carries
//! the domain prefix, and all integers are big-endian. For a 16-byte block:
//!
//! ```text
//! AD block i        20 | i (15 bytes)
//! message block j   00 | nonce (8 bytes) | j (7 bytes)
//! NR final block    10 | nonce (8 bytes) | block count (7 bytes)
//! MR tag            10 | nonce (15 bytes)
//! MR keystream j    tag ^ j (16 bytes)
//! ```
//!
//! Other block lengths scale the same way: the nonce-respecting nonce takes
//! half the block and the counter the rest after byte 0. A 2-byte block has
//! no room for that, so it packs a 4-bit nonce into the low nibble of byte 0
//! and uses byte 1 as the counter.

use std::fmt;
use std::marker::PhantomData;

use crate::block_cipher::BlockCipher;
use crate::error::{check_len, Error, Result};
use crate::xof::shake128;

/// Domain prefix for message blocks.
pub const PREFIX_MESSAGE: u8 = 0b0000;
/// Domain prefix for the tag / final block.
pub const PREFIX_TAG: u8 = 0b0001;
/// Domain prefix for associated-data blocks.
pub const PREFIX_AD: u8 = 0b0010;

/// A tweak: one block of public input selecting the permutation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tweak(Vec<u8>);

impl Tweak {
    pub fn from_raw(raw: impl Into<Vec<u8>>) -> Self {
        Self(raw.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Debug for Tweak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tweak({})", hex::encode(&self.0))
    }
}

impl AsRef<[u8]> for Tweak {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Which message-tweak prefix to use in the nonce-respecting layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageTweakKind {
    /// `0000`: per-block encryption.
    Block,
    /// `0001`: the final checksum block, indexed by block count.
    Final,
}

impl MessageTweakKind {
    fn prefix(self) -> u8 {
        match self {
            Self::Block => PREFIX_MESSAGE,
            Self::Final => PREFIX_TAG,
        }
    }
}

/// Tweak encoders for one block length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TweakLayout {
    block_len: usize,
}

/// Writes `value` big-endian into `out`; fails if it does not fit.
fn put_be(out: &mut [u8], value: u128, what: &'static str) -> Result<()> {
    let bytes = value.to_be_bytes();
    let width = out.len();
    if width < bytes.len() && bytes[..bytes.len() - width].iter().any(|&b| b != 0) {
        return Err(Error::OutOfRange { what });
    }
    let take = width.min(bytes.len());
    out[width - take..].copy_from_slice(&bytes[bytes.len() - take..]);
    Ok(())
}

impl TweakLayout {
    pub fn new(block_len: usize) -> Result<Self> {
        if !(2..=255).contains(&block_len) {
            return Err(Error::UnsupportedBlockLength(block_len));
        }
        Ok(Self { block_len })
    }

    pub fn for_cipher<C: BlockCipher>() -> Self {
        Self::new(C::SPEC.block_len).expect("registered ciphers have supported block lengths")
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    fn compact(&self) -> bool {
        self.block_len == 2
    }

    /// Nonce length for the nonce-respecting mode.
    pub fn nr_nonce_len(&self) -> usize {
        if self.compact() {
            1
        } else {
            self.block_len / 2
        }
    }

    /// Nonce length for the misuse-resistant mode: everything after byte 0.
    pub fn mr_nonce_len(&self) -> usize {
        self.block_len - 1
    }

    fn nr_counter_len(&self) -> usize {
        if self.compact() {
            1
        } else {
            self.block_len - 1 - self.nr_nonce_len()
        }
    }

    /// Exclusive upper bound on message block indices and block counts.
    pub fn nr_counter_limit(&self) -> u128 {
        let bits = 8 * self.nr_counter_len() as u32;
        if bits >= 64 {
            u128::from(u64::MAX) + 1
        } else {
            1u128 << bits
        }
    }

    /// `0010 | 0000 | i`.
    pub fn encode_ad(&self, i: u128) -> Result<Tweak> {
        let mut raw = vec![0u8; self.block_len];
        raw[0] = PREFIX_AD << 4;
        put_be(&mut raw[1..], i, "associated-data block index")?;
        Ok(Tweak(raw))
    }

    /// `prefix | 0000 | nonce | j` (compact: `prefix | nonce | j`).
    pub fn encode_nr_message(&self, kind: MessageTweakKind, nonce: &[u8], j: u64) -> Result<Tweak> {
        check_len("nonce-respecting nonce", self.nr_nonce_len(), nonce.len())?;
        let mut raw = vec![0u8; self.block_len];
        raw[0] = kind.prefix() << 4;
        if self.compact() {
            if nonce[0] > 0x0f {
                return Err(Error::OutOfRange {
                    what: "4-bit nonce",
                });
            }
            raw[0] |= nonce[0];
            put_be(&mut raw[1..], u128::from(j), "message block index")?;
        } else {
            let nonce_end = 1 + nonce.len();
            raw[1..nonce_end].copy_from_slice(nonce);
            put_be(&mut raw[nonce_end..], u128::from(j), "message block index")?;
        }
        Ok(Tweak(raw))
    }

    /// The nonce used in the misuse-resistant tag-accumulation loop: the
    /// leading bytes of the MR nonce that fit the nonce-respecting layout.
    pub fn mr_accumulator_nonce(&self, mr_nonce: &[u8]) -> Result<Vec<u8>> {
        check_len(
            "misuse-resistant nonce",
            self.mr_nonce_len(),
            mr_nonce.len(),
        )?;
        if self.compact() {
            Ok(vec![mr_nonce[0] & 0x0f])
        } else {
            Ok(mr_nonce[..self.nr_nonce_len()].to_vec())
        }
    }

    /// `0001 | 0000 | nonce`.
    pub fn encode_mr_tag(&self, nonce: &[u8]) -> Result<Tweak> {
        check_len("misuse-resistant nonce", self.mr_nonce_len(), nonce.len())?;
        let mut raw = Vec::with_capacity(self.block_len);
        raw.push(PREFIX_TAG << 4);
        raw.extend_from_slice(nonce);
        Ok(Tweak(raw))
    }

    /// `tag ^ j`, with `j` as a block-length big-endian integer.
    pub fn encode_mr_stream(&self, tag: &[u8], j: u64) -> Result<Tweak> {
        check_len("tag", self.block_len, tag.len())?;
        let mut raw = vec![0u8; self.block_len];
        put_be(&mut raw, u128::from(j), "keystream block index")?;
        for (r, t) in raw.iter_mut().zip(tag) {
            *r ^= t;
        }
        Ok(Tweak(raw))
    }

    /// `0^8 | nonce`: the constant block encrypted to form the MR keystream.
    pub fn mr_keystream_input(&self, nonce: &[u8]) -> Result<Vec<u8>> {
        check_len("misuse-resistant nonce", self.mr_nonce_len(), nonce.len())?;
        let mut raw = Vec::with_capacity(self.block_len);
        raw.push(0);
        raw.extend_from_slice(nonce);
        Ok(raw)
    }
}

/// A block cipher turned tweakable by hashing the master key with the tweak.
#[derive(Clone)]
pub struct TweakableCipher<C> {
    master_key: Vec<u8>,
    layout: TweakLayout,
    _cipher: PhantomData<fn() -> C>,
}

impl<C> fmt::Debug for TweakableCipher<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TweakableCipher")
            .field("layout", &self.layout)
            .finish_non_exhaustive()
    }
}

impl<C> Drop for TweakableCipher<C> {
    fn drop(&mut self) {
        self.master_key.iter_mut().for_each(|b| *b = 0);
    }
}

impl<C: BlockCipher> TweakableCipher<C> {
    pub fn new(master_key: &[u8]) -> Result<Self> {
        check_len("key", C::SPEC.key_len, master_key.len())?;
        Ok(Self {
            master_key: master_key.to_vec(),
            layout: TweakLayout::for_cipher::<C>(),
            _cipher: PhantomData,
        })
    }

    pub fn layout(&self) -> TweakLayout {
        self.layout
    }

    fn check_tweak(&self, tweak: &Tweak) -> Result<()> {
        check_len("tweak", C::SPEC.block_len, tweak.0.len())
    }

    /// Squeezes `key_len + block_len` bytes from SHAKE128(master_key || tweak)
    /// and splits them into (subkey, mask).
    pub fn derive_subkey_and_mask(&self, tweak: &Tweak) -> Result<(Vec<u8>, Vec<u8>)> {
        self.check_tweak(tweak)?;
        let mut input = Vec::with_capacity(self.master_key.len() + tweak.0.len());
        input.extend_from_slice(&self.master_key);
        input.extend_from_slice(&tweak.0);
        let mut out = shake128(&input, C::SPEC.key_len + C::SPEC.block_len)?;
        let mask = out.split_off(C::SPEC.key_len);
        Ok((out, mask))
    }

    fn instance(&self, tweak: &Tweak) -> Result<(C, Vec<u8>)> {
        let (subkey, mask) = self.derive_subkey_and_mask(tweak)?;
        Ok((C::new(&subkey)?, mask))
    }

    pub fn encrypt_in_place(&self, tweak: &Tweak, block: &mut [u8]) -> Result<()> {
        check_len("block", C::SPEC.block_len, block.len())?;
        let (cipher, mask) = self.instance(tweak)?;
        cipher.encrypt_in_place(block)?;
        xor_in_place(block, &mask);
        Ok(())
    }

    pub fn decrypt_in_place(&self, tweak: &Tweak, block: &mut [u8]) -> Result<()> {
        check_len("block", C::SPEC.block_len, block.len())?;
        let (cipher, mask) = self.instance(tweak)?;
        xor_in_place(block, &mask);
        cipher.decrypt_in_place(block)
    }

    pub fn encrypt(&self, tweak: &Tweak, block: &[u8]) -> Result<Vec<u8>> {
        let mut out = block.to_vec();
        self.encrypt_in_place(tweak, &mut out)?;
        Ok(out)
    }

    pub fn decrypt(&self, tweak: &Tweak, block: &[u8]) -> Result<Vec<u8>> {
        let mut out = block.to_vec();
        self.decrypt_in_place(tweak, &mut out)?;
        Ok(out)
    }
}

pub(crate) fn xor_in_place(dst: &mut [u8], src: &[u8]) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}
