//! A deliberately weak 16-bit block cipher.
//!
//! Four substitution-permutation rounds over a 16-bit word: round-key XOR, a
//! 4-bit S-box on each nibble, then a 4x4 bit transposition that spreads each
//! nibble's bits across all four nibbles. A final round key is XORed at the
//! end. Small enough that every permutation can be enumerated, which is the
//! only reason it exists.

use super::{BlockCipher, CipherSpec};
use crate::error::{check_len, Result};

const ROUNDS: usize = 4;

const SBOX: [u8; 16] = [
    0xc, 0x5, 0x6, 0xb, 0x9, 0x0, 0xa, 0xd, 0x3, 0xe, 0xf, 0x8, 0x4, 0x7, 0x1, 0x2,
];
const INV_SBOX: [u8; 16] = [
    0x5, 0xe, 0xf, 0x8, 0xc, 0x1, 0x2, 0xd, 0xb, 0x4, 0x6, 0x3, 0x0, 0x7, 0x9, 0xa,
];

const ROUND_CONSTANTS: [u16; ROUNDS + 1] = [0x0000, 0x9e37, 0x79b9, 0x7f4a, 0x7c15];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyCipher {
    round_keys: [u16; ROUNDS + 1],
}

fn substitute(x: u16, table: &[u8; 16]) -> u16 {
    (0..4).fold(0, |acc, i| {
        let nibble = (x >> (4 * i)) & 0xf;
        acc | (u16::from(table[nibble as usize]) << (4 * i))
    })
}

/// Bit `4 * i + j` moves to bit `4 * j + i`. Self-inverse.
fn transpose(x: u16) -> u16 {
    let mut out = 0u16;
    for i in 0..4 {
        for j in 0..4 {
            out |= ((x >> (4 * i + j)) & 1) << (4 * j + i);
        }
    }
    out
}

impl ToyCipher {
    pub fn from_key(key: u16) -> Self {
        let mut round_keys = [0u16; ROUNDS + 1];
        for (r, rk) in round_keys.iter_mut().enumerate() {
            *rk = key.rotate_left(5 * r as u32) ^ ROUND_CONSTANTS[r];
        }
        Self { round_keys }
    }

    pub fn encrypt_word(&self, mut x: u16) -> u16 {
        for rk in &self.round_keys[..ROUNDS] {
            x ^= rk;
            x = substitute(x, &SBOX);
            x = transpose(x);
        }
        x ^ self.round_keys[ROUNDS]
    }

    pub fn decrypt_word(&self, mut x: u16) -> u16 {
        x ^= self.round_keys[ROUNDS];
        for rk in self.round_keys[..ROUNDS].iter().rev() {
            x = transpose(x);
            x = substitute(x, &INV_SBOX);
            x ^= rk;
        }
        x
    }
}

fn word(what: &'static str, bytes: &[u8]) -> Result<u16> {
    check_len(what, 2, bytes.len())?;
    Ok(u16::from_be_bytes([bytes[0], bytes[1]]))
}

impl BlockCipher for ToyCipher {
    const SPEC: CipherSpec = CipherSpec {
        name: "toy16",
        block_len: 2,
        key_len: 2,
    };

    fn new(key: &[u8]) -> Result<Self> {
        Ok(Self::from_key(word("toy key", key)?))
    }

    fn encrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        let x = self.encrypt_word(word("toy block", block)?);
        block.copy_from_slice(&x.to_be_bytes());
        Ok(())
    }

    fn decrypt_in_place(&self, block: &mut [u8]) -> Result<()> {
        let x = self.decrypt_word(word("toy block", block)?);
        block.copy_from_slice(&x.to_be_bytes());
        Ok(())
    }
}

pub fn toy_encrypt_block(key: &[u8], block: &[u8]) -> Result<[u8; 2]> {
    let cipher = ToyCipher::new(key)?;
    Ok(cipher.encrypt_word(word("toy block", block)?).to_be_bytes())
}

pub fn toy_decrypt_block(key: &[u8], block: &[u8]) -> Result<[u8; 2]> {
    let cipher = ToyCipher::new(key)?;
    Ok(cipher.decrypt_word(word("toy block", block)?).to_be_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE_KEYS: [u16; 16] = [
        0x0000, 0xffff, 0x0001, 0x8000, 0x1234, 0xabcd, 0x5555, 0xaaaa, 0x0f0f, 0xf0f0, 0x7fff,
        0xdead, 0xbeef, 0xc0de, 0x2468, 0x1357,
    ];

    #[test]
    fn inverse_sbox_is_inverse() {
        for x in 0..16u8 {
            assert_eq!(INV_SBOX[SBOX[x as usize] as usize], x);
        }
    }

    #[test]
    fn transpose_is_involution() {
        for x in 0..=u16::MAX {
            assert_eq!(transpose(transpose(x)), x);
        }
    }

    #[test]
    fn every_sampled_key_is_a_permutation() {
        for &key in &SAMPLE_KEYS {
            let cipher = ToyCipher::from_key(key);
            let mut seen = vec![false; 1 << 16];
            for x in 0..=u16::MAX {
                let y = cipher.encrypt_word(x) as usize;
                assert!(!seen[y], "key {key:04x}: collision at output {y:04x}");
                seen[y] = true;
            }
        }
    }

    #[test]
    fn exhaustive_inverse_for_one_key() {
        let key = [0xa5, 0x3c];
        for x in 0..=u16::MAX {
            let block = x.to_be_bytes();
            let ct = toy_encrypt_block(&key, &block).unwrap();
            assert_eq!(toy_decrypt_block(&key, &ct).unwrap(), block);
        }
    }

    #[test]
    fn distinct_keys_give_distinct_permutations() {
        for pair in SAMPLE_KEYS.windows(2) {
            let (a, b) = (ToyCipher::from_key(pair[0]), ToyCipher::from_key(pair[1]));
            assert!((0..=u16::MAX).any(|x| a.encrypt_word(x) != b.encrypt_word(x)));
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(toy_encrypt_block(&[0u8; 3], &[0u8; 2]).is_err());
        assert!(toy_encrypt_block(&[0u8; 2], &[0u8; 1]).is_err());
        assert!(toy_decrypt_block(&[0u8; 2], &[]).is_err());
    }
}
