//! SHAKE128 over a from-scratch Keccak-f\[1600\].
//!
//! Single-shot only: the inputs hashed by the tweakable layer are a key plus
//! one tweak block, so an incremental absorb API would have no caller.

use crate::error::{Error, Result};

const RATE: usize = 168;
const ROUNDS: usize = 24;
const DOMAIN_SHAKE: u8 = 0x1f;

const ROUND_CONSTANTS: [u64; ROUNDS] = [
    0x0000000000000001,
    0x0000000000008082,
    0x800000000000808a,
    0x8000000080008000,
    0x000000000000808b,
    0x0000000080000001,
    0x8000000080008081,
    0x8000000000008009,
    0x000000000000008a,
    0x0000000000000088,
    0x0000000080008009,
    0x000000008000000a,
    0x000000008000808b,
    0x800000000000008b,
    0x8000000000008089,
    0x8000000000008003,
    0x8000000000008002,
    0x8000000000000080,
    0x000000000000800a,
    0x800000008000000a,
    0x8000000080008081,
    0x8000000000008080,
    0x0000000080000001,
    0x8000000080008008,
];

// Rotation offsets and lane order for the combined rho/pi step, walking the
// pi cycle starting from lane 1.
const RHO: [u32; 24] = [
    1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44,
];
const PI: [usize; 24] = [
    10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1,
];

/// The Keccak-f\[1600\] permutation. Lane `x + 5 * y` sits at index `x + 5 * y`.
pub fn keccak_f1600(a: &mut [u64; 25]) {
    for rc in ROUND_CONSTANTS {
        // theta
        let mut c = [0u64; 5];
        for x in 0..5 {
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        }
        for x in 0..5 {
            let d = c[(x + 4) % 5] ^ c[(x + 1) % 5].rotate_left(1);
            for y in 0..5 {
                a[x + 5 * y] ^= d;
            }
        }
        // rho and pi
        let mut carry = a[1];
        for (&dst, &rot) in PI.iter().zip(&RHO) {
            let next = a[dst];
            a[dst] = carry.rotate_left(rot);
            carry = next;
        }
        // chi
        for y in 0..5 {
            let row = [
                a[5 * y],
                a[5 * y + 1],
                a[5 * y + 2],
                a[5 * y + 3],
                a[5 * y + 4],
            ];
            for x in 0..5 {
                a[5 * y + x] = row[x] ^ (!row[(x + 1) % 5] & row[(x + 2) % 5]);
            }
        }
        // iota
        a[0] ^= rc;
    }
}

fn xor_into_state(state: &mut [u64; 25], block: &[u8; RATE]) {
    for (lane, chunk) in state.iter_mut().zip(block.chunks_exact(8)) {
        *lane ^= u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
    }
}

fn state_bytes(state: &[u64; 25]) -> [u8; RATE] {
    let mut out = [0u8; RATE];
    for (chunk, lane) in out.chunks_exact_mut(8).zip(state.iter()) {
        chunk.copy_from_slice(&lane.to_le_bytes());
    }
    out
}

/// SHAKE128 of `input`, squeezed to exactly `out_len` bytes.
pub fn shake128(input: &[u8], out_len: usize) -> Result<Vec<u8>> {
    if out_len == 0 {
        return Err(Error::OutOfRange {
            what: "SHAKE128 output length",
        });
    }
    let mut state = [0u64; 25];

    let mut chunks = input.chunks_exact(RATE);
    for chunk in &mut chunks {
        xor_into_state(&mut state, chunk.try_into().expect("rate-sized chunk"));
        keccak_f1600(&mut state);
    }
    let tail = chunks.remainder();
    let mut last = [0u8; RATE];
    last[..tail.len()].copy_from_slice(tail);
    last[tail.len()] ^= DOMAIN_SHAKE;
    last[RATE - 1] ^= 0x80;
    xor_into_state(&mut state, &last);
    keccak_f1600(&mut state);

    let mut out = Vec::with_capacity(out_len);
    loop {
        let block = state_bytes(&state);
        let take = (out_len - out.len()).min(RATE);
        out.extend_from_slice(&block[..take]);
        if out.len() == out_len {
            return Ok(out);
        }
        keccak_f1600(&mut state);
    }
}
