//! Authenticated encryption in the two supported modes.
//!
//! Both modes PKCS#7-pad the plaintext and the associated data, so every
//! ciphertext is at least one block and empty AD still contributes one block
//! to the authenticator. Tags are one full block.
//!
//! Nonce-respecting (`nr`): each padded block is encrypted under its own
//! counter tweak, the XOR checksum of the padded plaintext is encrypted under
//! a final tweak carrying the block count, and the AD authenticator is XORed
//! in to form the tag. Never reuse a nonce under one key in this mode.
//!
//! Misuse-resistant (`mr`): the tag is computed first over AD and plaintext
//! (SIV style) and then drives a keystream, so reusing a nonce only reveals
//! whether two messages were identical.

use std::fmt;
use std::str::FromStr;

use subtle::ConstantTimeEq;

use crate::block_cipher::{Aes128, BlockCipher};
use crate::error::{check_len, Error, Result};
use crate::padding::{pkcs7_pad, pkcs7_unpad};
use crate::tweakable::{xor_in_place, MessageTweakKind, TweakLayout, TweakableCipher};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    NonceRespecting,
    MisuseResistant,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::NonceRespecting, Mode::MisuseResistant];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::NonceRespecting => "nr",
            Mode::MisuseResistant => "mr",
        }
    }

    /// Nonce length in bytes for a cipher with the given block length.
    pub fn nonce_len(self, layout: TweakLayout) -> usize {
        match self {
            Mode::NonceRespecting => layout.nr_nonce_len(),
            Mode::MisuseResistant => layout.mr_nonce_len(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMode(pub String);

impl fmt::Display for UnknownMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown mode {:?} (expected \"nr\" or \"mr\")", self.0)
    }
}

impl std::error::Error for UnknownMode {}

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nr" => Ok(Mode::NonceRespecting),
            "mr" => Ok(Mode::MisuseResistant),
            other => Err(UnknownMode(other.to_owned())),
        }
    }
}

/// Output of a seal operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SealedMessage {
    pub mode: Mode,
    pub nonce: Vec<u8>,
    pub ciphertext: Vec<u8>,
    pub tag: Vec<u8>,
}

/// An AEAD key over block cipher `C`.
#[derive(Debug, Clone)]
pub struct Tortoise<C> {
    tbc: TweakableCipher<C>,
}

pub type TortoiseAes128 = Tortoise<Aes128>;

fn block_count(padded_len: usize, block_len: usize) -> u64 {
    (padded_len / block_len) as u64
}

impl<C: BlockCipher> Tortoise<C> {
    pub fn new(key: &[u8]) -> Result<Self> {
        Ok(Self {
            tbc: TweakableCipher::new(key)?,
        })
    }

    pub fn tweakable(&self) -> &TweakableCipher<C> {
        &self.tbc
    }

    pub fn layout(&self) -> TweakLayout {
        self.tbc.layout()
    }

    pub fn block_len(&self) -> usize {
        C::SPEC.block_len
    }

    pub fn nonce_len(&self, mode: Mode) -> usize {
        mode.nonce_len(self.layout())
    }

    /// XOR over the padded AD blocks of their encryptions under `0010 | i`.
    pub fn compute_auth(&self, ad: &[u8]) -> Result<Vec<u8>> {
        let n = self.block_len();
        let layout = self.layout();
        let mut auth = vec![0u8; n];
        for (i, block) in pkcs7_pad(ad, n).chunks_exact(n).enumerate() {
            let enc = self.tbc.encrypt(&layout.encode_ad(i as u128)?, block)?;
            xor_in_place(&mut auth, &enc);
        }
        Ok(auth)
    }

    fn check_message_blocks(&self, blocks: u64) -> Result<()> {
        if u128::from(blocks) >= self.layout().nr_counter_limit() {
            return Err(Error::OutOfRange {
                what: "message block count",
            });
        }
        Ok(())
    }

    fn check_open_inputs(
        &self,
        mode: Mode,
        nonce: &[u8],
        ciphertext: &[u8],
        tag: &[u8],
    ) -> Result<()> {
        let n = self.block_len();
        check_len("nonce", self.nonce_len(mode), nonce.len())?;
        check_len("tag", n, tag.len())?;
        if ciphertext.is_empty() || !ciphertext.len().is_multiple_of(n) {
            return Err(Error::NotBlockAligned {
                what: "ciphertext",
                block_len: n,
                actual: ciphertext.len(),
            });
        }
        self.check_message_blocks(block_count(ciphertext.len(), n))
    }

    pub fn seal(
        &self,
        mode: Mode,
        nonce: &[u8],
        ad: &[u8],
        plaintext: &[u8],
    ) -> Result<SealedMessage> {
        match mode {
            Mode::NonceRespecting => self.seal_nr(nonce, ad, plaintext),
            Mode::MisuseResistant => self.seal_mr(nonce, ad, plaintext),
        }
    }

    pub fn open(&self, sealed: &SealedMessage, ad: &[u8]) -> Result<Vec<u8>> {
        match sealed.mode {
            Mode::NonceRespecting => {
                self.open_nr(&sealed.nonce, ad, &sealed.ciphertext, &sealed.tag)
            }
            Mode::MisuseResistant => {
                self.open_mr(&sealed.nonce, ad, &sealed.ciphertext, &sealed.tag)
            }
        }
    }

    /// Tag over a padded message: `E~(0001 | N | l_p, checksum) ^ auth`.
    fn nr_tag(&self, nonce: &[u8], checksum: &[u8], blocks: u64, auth: &[u8]) -> Result<Vec<u8>> {
        let tweak = self
            .layout()
            .encode_nr_message(MessageTweakKind::Final, nonce, blocks)?;
        let mut tag = self.tbc.encrypt(&tweak, checksum)?;
        xor_in_place(&mut tag, auth);
        Ok(tag)
    }

    pub fn seal_nr(&self, nonce: &[u8], ad: &[u8], plaintext: &[u8]) -> Result<SealedMessage> {
        let n = self.block_len();
        let layout = self.layout();
        check_len("nonce", layout.nr_nonce_len(), nonce.len())?;

        let mut data = pkcs7_pad(plaintext, n);
        let blocks = block_count(data.len(), n);
        self.check_message_blocks(blocks)?;
        let auth = self.compute_auth(ad)?;

        let mut checksum = vec![0u8; n];
        for (j, block) in data.chunks_exact_mut(n).enumerate() {
            xor_in_place(&mut checksum, block);
            let tweak = layout.encode_nr_message(MessageTweakKind::Block, nonce, j as u64)?;
            self.tbc.encrypt_in_place(&tweak, block)?;
        }
        let tag = self.nr_tag(nonce, &checksum, blocks, &auth)?;

        Ok(SealedMessage {
            mode: Mode::NonceRespecting,
            nonce: nonce.to_vec(),
            ciphertext: data,
            tag,
        })
    }

    pub fn open_nr(
        &self,
        nonce: &[u8],
        ad: &[u8],
        ciphertext: &[u8],
        tag: &[u8],
    ) -> Result<Vec<u8>> {
        let n = self.block_len();
        let layout = self.layout();
        self.check_open_inputs(Mode::NonceRespecting, nonce, ciphertext, tag)?;
        let blocks = block_count(ciphertext.len(), n);
        let auth = self.compute_auth(ad)?;

        let mut data = ciphertext.to_vec();
        let mut checksum = vec![0u8; n];
        for (j, block) in data.chunks_exact_mut(n).enumerate() {
            let tweak = layout.encode_nr_message(MessageTweakKind::Block, nonce, j as u64)?;
            self.tbc.decrypt_in_place(&tweak, block)?;
            xor_in_place(&mut checksum, block);
        }
        let expected = self.nr_tag(nonce, &checksum, blocks, &auth)?;
        release(data, &expected, tag, n)
    }

    /// SIV tag: `E~(0001 | 0^4 | N, auth ^ XOR_j E~(0000 | N' | j, P_j))`.
    fn mr_tag(&self, nonce: &[u8], padded: &[u8], ad: &[u8]) -> Result<Vec<u8>> {
        let n = self.block_len();
        let layout = self.layout();
        let acc_nonce = layout.mr_accumulator_nonce(nonce)?;
        let mut tag = self.compute_auth(ad)?;
        for (j, block) in padded.chunks_exact(n).enumerate() {
            let tweak = layout.encode_nr_message(MessageTweakKind::Block, &acc_nonce, j as u64)?;
            xor_in_place(&mut tag, &self.tbc.encrypt(&tweak, block)?);
        }
        self.tbc
            .encrypt_in_place(&layout.encode_mr_tag(nonce)?, &mut tag)?;
        Ok(tag)
    }

    /// XORs the keystream `E~(tag ^ j, 0^8 | N)` into `data`.
    fn mr_apply_keystream(&self, nonce: &[u8], tag: &[u8], data: &mut [u8]) -> Result<()> {
        let n = self.block_len();
        let layout = self.layout();
        let input = layout.mr_keystream_input(nonce)?;
        for (j, block) in data.chunks_exact_mut(n).enumerate() {
            let stream = self
                .tbc
                .encrypt(&layout.encode_mr_stream(tag, j as u64)?, &input)?;
            xor_in_place(block, &stream);
        }
        Ok(())
    }

    pub fn seal_mr(&self, nonce: &[u8], ad: &[u8], plaintext: &[u8]) -> Result<SealedMessage> {
        let n = self.block_len();
        check_len("nonce", self.layout().mr_nonce_len(), nonce.len())?;

        let mut data = pkcs7_pad(plaintext, n);
        self.check_message_blocks(block_count(data.len(), n))?;
        let tag = self.mr_tag(nonce, &data, ad)?;
        self.mr_apply_keystream(nonce, &tag, &mut data)?;

        Ok(SealedMessage {
            mode: Mode::MisuseResistant,
            nonce: nonce.to_vec(),
            ciphertext: data,
            tag,
        })
    }

    pub fn open_mr(
        &self,
        nonce: &[u8],
        ad: &[u8],
        ciphertext: &[u8],
        tag: &[u8],
    ) -> Result<Vec<u8>> {
        let n = self.block_len();
        self.check_open_inputs(Mode::MisuseResistant, nonce, ciphertext, tag)?;

        let mut data = ciphertext.to_vec();
        self.mr_apply_keystream(nonce, tag, &mut data)?;
        let expected = self.mr_tag(nonce, &data, ad)?;
        release(data, &expected, tag, n)
    }
}

/// Hands out the unpadded plaintext only if the tags match; otherwise wipes
/// the recovered blocks. Bad padding under a good tag is reported the same
/// way as a bad tag.
fn release(
    mut padded: Vec<u8>,
    expected: &[u8],
    received: &[u8],
    block_len: usize,
) -> Result<Vec<u8>> {
    if !bool::from(expected.ct_eq(received)) {
        padded.iter_mut().for_each(|b| *b = 0);
        return Err(Error::Authentication);
    }
    match pkcs7_unpad(&padded, block_len) {
        Ok(body) => {
            let len = body.len();
            padded.truncate(len);
            Ok(padded)
        }
        Err(_) => {
            padded.iter_mut().for_each(|b| *b = 0);
            Err(Error::Authentication)
        }
    }
}
