//! PKCS#7 padding.

use crate::error::{Error, Result};

/// Appends `k` bytes of value `k` (1 <= k <= block_len) so the result is a
/// whole number of blocks. Aligned input gets a full extra block.
///
/// Panics if `block_len` is outside `1..=255`.
pub fn pkcs7_pad(data: &[u8], block_len: usize) -> Vec<u8> {
    assert!(
        (1..=255).contains(&block_len),
        "PKCS#7 block length must be in 1..=255"
    );
    let pad = block_len - data.len() % block_len;
    let mut out = Vec::with_capacity(data.len() + pad);
    out.extend_from_slice(data);
    out.resize(data.len() + pad, pad as u8);
    out
}

/// Validates and strips PKCS#7 padding.
pub fn pkcs7_unpad(data: &[u8], block_len: usize) -> Result<&[u8]> {
    if data.is_empty() || block_len == 0 || !data.len().is_multiple_of(block_len) {
        return Err(Error::NotBlockAligned {
            what: "padded data",
            block_len,
            actual: data.len(),
        });
    }
    let pad = data[data.len() - 1] as usize;
    if pad == 0 || pad > block_len {
        return Err(Error::Padding);
    }
    let (body, tail) = data.split_at(data.len() - pad);
    // scan the whole tail rather than stopping at the first bad byte
    let bad = tail.iter().fold(0u8, |acc, &b| acc | (b ^ pad as u8));
    if bad != 0 {
        return Err(Error::Padding);
    }
    Ok(body)
}
