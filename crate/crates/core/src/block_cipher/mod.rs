//! Pluggable block-cipher contract plus the two bundled instantiations.
//!
//! Everything above this layer (tweaks, AEAD modes, KATs) is generic over
//! [`BlockCipher`], so any permutation family with the right shape can be
//! dropped in.

mod aes;
mod toy;

pub use self::aes::{aes128_decrypt_block, aes128_encrypt_block, Aes128};
pub use self::toy::{toy_decrypt_block, toy_encrypt_block, ToyCipher};

use crate::error::Result;

/// Static description of a block cipher: its name and byte lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CipherSpec {
    pub name: &'static str,
    pub block_len: usize,
    pub key_len: usize,
}

/// A keyed block permutation.
///
/// `new` performs the key schedule once; the resulting value is immutable and
/// may be shared between threads.
pub trait BlockCipher: Sized + Send + Sync {
    const SPEC: CipherSpec;

    fn new(key: &[u8]) -> Result<Self>;

    /// Encrypts exactly one block in place.
    fn encrypt_in_place(&self, block: &mut [u8]) -> Result<()>;

    /// Decrypts exactly one block in place.
    fn decrypt_in_place(&self, block: &mut [u8]) -> Result<()>;

    fn encrypt_block(&self, block: &[u8]) -> Result<Vec<u8>> {
        let mut out = block.to_vec();
        self.encrypt_in_place(&mut out)?;
        Ok(out)
    }

    fn decrypt_block(&self, block: &[u8]) -> Result<Vec<u8>> {
        let mut out = block.to_vec();
        self.decrypt_in_place(&mut out)?;
        Ok(out)
    }
}

/// Every cipher shipped with the crate.
pub const REGISTERED: [CipherSpec; 2] = [Aes128::SPEC, ToyCipher::SPEC];

/// Looks up a registered cipher by its short name.
pub fn spec_by_name(name: &str) -> Option<CipherSpec> {
    REGISTERED.iter().copied().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn round_trip<C: BlockCipher>(samples: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7011);
        let mut key = vec![0u8; C::SPEC.key_len];
        let mut block = vec![0u8; C::SPEC.block_len];
        for _ in 0..samples {
            rng.fill(&mut key[..]);
            rng.fill(&mut block[..]);
            let cipher = C::new(&key).unwrap();
            let ct = cipher.encrypt_block(&block).unwrap();
            assert_eq!(cipher.decrypt_block(&ct).unwrap(), block);
            let pt = cipher.decrypt_block(&block).unwrap();
            assert_eq!(cipher.encrypt_block(&pt).unwrap(), block);
        }
    }

    #[test]
    fn registered_ciphers_round_trip() {
        round_trip::<Aes128>(10_000);
        round_trip::<ToyCipher>(10_000);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(spec_by_name("aes128"), Some(Aes128::SPEC));
        assert_eq!(spec_by_name("toy16"), Some(ToyCipher::SPEC));
        assert_eq!(spec_by_name("des"), None);
    }
}
