//! Test-only reference implementation of the AES-128 instantiation, written
//! straight from the algorithm description on top of the RustCrypto `aes` and
//! `sha3` crates. It shares no code with the library beyond test helpers.

#![allow(dead_code)]

use aes::cipher::{generic_array::GenericArray, BlockDecrypt, BlockEncrypt, KeyInit};
use sha3::digest::{ExtendableOutput, Update, XofReader};

pub const N: usize = 16;

pub fn ref_aes_encrypt(key: &[u8], block: &[u8]) -> [u8; 16] {
    let cipher = aes::Aes128::new(GenericArray::from_slice(key));
    let mut b = GenericArray::clone_from_slice(block);
    cipher.encrypt_block(&mut b);
    b.into()
}

pub fn ref_aes_decrypt(key: &[u8], block: &[u8]) -> [u8; 16] {
    let cipher = aes::Aes128::new(GenericArray::from_slice(key));
    let mut b = GenericArray::clone_from_slice(block);
    cipher.decrypt_block(&mut b);
    b.into()
}

pub fn ref_shake128(input: &[u8], len: usize) -> Vec<u8> {
    let mut h = sha3::Shake128::default();
    h.update(input);
    let mut out = vec![0u8; len];
    h.finalize_xof().read(&mut out);
    out
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn ref_tweak_encrypt(key: &[u8], tweak: &[u8], block: &[u8]) -> Vec<u8> {
    let squeezed = ref_shake128(&[key, tweak].concat(), 32);
    xor(&ref_aes_encrypt(&squeezed[..16], block), &squeezed[16..])
}

fn pad(data: &[u8]) -> Vec<u8> {
    let k = N - data.len() % N;
    let mut out = data.to_vec();
    out.extend(std::iter::repeat_n(k as u8, k));
    out
}

fn ad_tweak(i: usize) -> Vec<u8> {
    let mut t = vec![0x20];
    t.extend_from_slice(&(i as u128).to_be_bytes()[1..]);
    t
}

fn msg_tweak(prefix: u8, nonce: &[u8], j: usize) -> Vec<u8> {
    let mut t = vec![prefix << 4];
    t.extend_from_slice(nonce);
    t.extend_from_slice(&(j as u64).to_be_bytes()[1..]);
    t
}

pub fn ref_auth(key: &[u8], ad: &[u8]) -> Vec<u8> {
    pad(ad)
        .chunks(N)
        .enumerate()
        .fold(vec![0u8; N], |acc, (i, b)| {
            xor(&acc, &ref_tweak_encrypt(key, &ad_tweak(i), b))
        })
}

/// Returns (ciphertext, tag).
pub fn ref_seal_nr(key: &[u8], nonce: &[u8], ad: &[u8], pt: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let padded = pad(pt);
    let mut checksum = vec![0u8; N];
    let mut ct = Vec::new();
    for (j, b) in padded.chunks(N).enumerate() {
        checksum = xor(&checksum, b);
        ct.extend(ref_tweak_encrypt(key, &msg_tweak(0, nonce, j), b));
    }
    let final_tag = ref_tweak_encrypt(key, &msg_tweak(1, nonce, padded.len() / N), &checksum);
    (ct, xor(&final_tag, &ref_auth(key, ad)))
}

pub fn ref_seal_mr(key: &[u8], nonce: &[u8], ad: &[u8], pt: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let padded = pad(pt);
    let mut tag = ref_auth(key, ad);
    for (j, b) in padded.chunks(N).enumerate() {
        tag = xor(
            &tag,
            &ref_tweak_encrypt(key, &msg_tweak(0, &nonce[..8], j), b),
        );
    }
    let tag = ref_tweak_encrypt(key, &[&[0x10], nonce].concat(), &tag);
    let stream_input = [&[0x00], nonce].concat();
    let mut ct = Vec::new();
    for (j, b) in padded.chunks(N).enumerate() {
        let tweak = xor(&tag, &(j as u128).to_be_bytes());
        ct.extend(xor(b, &ref_tweak_encrypt(key, &tweak, &stream_input)));
    }
    (ct, tag)
}

pub fn h(s: &str) -> Vec<u8> {
    hex::decode(s).unwrap()
}

/// Path of a file shipped in the crate's `kat/` directory.
pub fn kat_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("kat")
        .join(name)
}
