//! Known-answer vectors: a line-oriented text format, a seeded generator, a
//! replaying verifier, and the toy-cipher differential check.
//!
//! One record per line, fields in fixed order, lowercase hex:
//!
//! ```text
//! mode=nr cipher=aes128 key=... nonce=... ad=... pt=... ct=... tag=...
//! ```
//!
//! Empty byte strings are written as an empty value (`ad=`). Lines starting
//! with `#` are comments; the generator records its parameters in one:
//!
//! ```text
//! # cipher=aes128 seed=7 count=10
//! ```

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::aead::{Mode, Tortoise};
use crate::block_cipher::{spec_by_name, toy_encrypt_block, Aes128, BlockCipher, ToyCipher};
use crate::tweakable::{Tweak, TweakableCipher};
use crate::xof::shake128;

const FIELDS: [&str; 8] = ["mode", "cipher", "key", "nonce", "ad", "pt", "ct", "tag"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatRecord {
    pub mode: Mode,
    pub cipher: String,
    pub key: Vec<u8>,
    pub nonce: Vec<u8>,
    pub ad: Vec<u8>,
    pub pt: Vec<u8>,
    pub ct: Vec<u8>,
    pub tag: Vec<u8>,
}

impl fmt::Display for KatRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} cipher={} key={} nonce={} ad={} pt={} ct={} tag={}",
            self.mode,
            self.cipher,
            hex::encode(&self.key),
            hex::encode(&self.nonce),
            hex::encode(&self.ad),
            hex::encode(&self.pt),
            hex::encode(&self.ct),
            hex::encode(&self.tag),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KatParseError {
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("field {index}: expected `{expected}=`, found {found:?}")]
    FieldName {
        index: usize,
        expected: &'static str,
        found: String,
    },
    #[error("field `{field}`: {reason}")]
    BadValue { field: &'static str, reason: String },
}

fn hex_field(field: &'static str, value: &str) -> Result<Vec<u8>, KatParseError> {
    if value.bytes().any(|b| b.is_ascii_uppercase()) {
        return Err(KatParseError::BadValue {
            field,
            reason: "hex must be lowercase".into(),
        });
    }
    hex::decode(value).map_err(|e| KatParseError::BadValue {
        field,
        reason: e.to_string(),
    })
}

impl FromStr for KatRecord {
    type Err = KatParseError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = line.split(' ').collect();
        if parts.len() != FIELDS.len() {
            return Err(KatParseError::FieldCount {
                expected: FIELDS.len(),
                found: parts.len(),
            });
        }
        let mut values = [""; 8];
        for (index, (part, name)) in parts.iter().zip(FIELDS).enumerate() {
            values[index] = part
                .strip_prefix(name)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| KatParseError::FieldName {
                    index,
                    expected: name,
                    found: (*part).to_owned(),
                })?;
        }
        let mode = values[0]
            .parse::<Mode>()
            .map_err(|e| KatParseError::BadValue {
                field: "mode",
                reason: e.to_string(),
            })?;
        if values[1].is_empty() {
            return Err(KatParseError::BadValue {
                field: "cipher",
                reason: "empty".into(),
            });
        }
        Ok(KatRecord {
            mode,
            cipher: values[1].to_owned(),
            key: hex_field("key", values[2])?,
            nonce: hex_field("nonce", values[3])?,
            ad: hex_field("ad", values[4])?,
            pt: hex_field("pt", values[5])?,
            ct: hex_field("ct", values[6])?,
            tag: hex_field("tag", values[7])?,
        })
    }
}

/// One non-comment line of a KAT file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatLine {
    /// 1-based line number in the source text.
    pub line: usize,
    pub record: Result<KatRecord, KatParseError>,
}

/// Parses every record line; blank and `#` lines are skipped. Parse errors
/// are kept per line instead of aborting.
pub fn parse_kat_file(text: &str) -> Vec<KatLine> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| KatLine {
            line: i + 1,
            record: l.parse(),
        })
        .collect()
}

/// Generation parameters, recorded in the file header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatParams {
    pub cipher: String,
    pub seed: u64,
    pub count: usize,
}

impl KatParams {
    fn header_line(&self) -> String {
        format!(
            "# cipher={} seed={} count={}",
            self.cipher, self.seed, self.count
        )
    }

    /// Recovers the parameters from a file produced by [`render_kat_file`].
    pub fn from_header(text: &str) -> Option<Self> {
        text.lines()
            .filter_map(|l| l.strip_prefix("# "))
            .find_map(|l| {
                let mut cipher = None;
                let mut seed = None;
                let mut count = None;
                for kv in l.split(' ') {
                    match kv.split_once('=')? {
                        ("cipher", v) => cipher = Some(v.to_owned()),
                        ("seed", v) => seed = v.parse().ok(),
                        ("count", v) => count = v.parse().ok(),
                        _ => return None,
                    }
                }
                Some(Self {
                    cipher: cipher?,
                    seed: seed?,
                    count: count?,
                })
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KatError {
    #[error("unknown cipher {0:?}")]
    UnknownCipher(String),
    #[error("count must be at least 1")]
    ZeroCount,
    #[error(transparent)]
    Crypto(#[from] crate::Error),
}

fn random_bytes(rng: &mut ChaCha20Rng, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    rng.fill(&mut out[..]);
    out
}

fn generate_for<C: BlockCipher>(seed: u64, count: usize) -> Result<Vec<KatRecord>, KatError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = C::SPEC.block_len as u32;
    let mut records = Vec::with_capacity(2 * count);
    for mode in Mode::ALL {
        for _ in 0..count {
            let key = random_bytes(&mut rng, C::SPEC.key_len);
            let aead = Tortoise::<C>::new(&key)?;
            let mut nonce = random_bytes(&mut rng, aead.nonce_len(mode));
            if n == 2 && mode == Mode::NonceRespecting {
                nonce[0] &= 0x0f;
            }
            // u32 ranges keep the stream identical on 32- and 64-bit hosts
            let ad_len = rng.gen_range(0..=2 * n + 3) as usize;
            let pt_len = rng.gen_range(0..=3 * n + 5) as usize;
            let ad = random_bytes(&mut rng, ad_len);
            let pt = random_bytes(&mut rng, pt_len);
            let sealed = aead.seal(mode, &nonce, &ad, &pt)?;
            records.push(KatRecord {
                mode,
                cipher: C::SPEC.name.to_owned(),
                key,
                nonce,
                ad,
                pt,
                ct: sealed.ciphertext,
                tag: sealed.tag,
            });
        }
    }
    Ok(records)
}

/// `count` records per mode for the named cipher, derived from `seed`.
pub fn generate_kats_for(
    cipher: &str,
    seed: u64,
    count: usize,
) -> Result<Vec<KatRecord>, KatError> {
    if count == 0 {
        return Err(KatError::ZeroCount);
    }
    match spec_by_name(cipher).map(|s| s.name) {
        Some(name) if name == Aes128::SPEC.name => generate_for::<Aes128>(seed, count),
        Some(name) if name == ToyCipher::SPEC.name => generate_for::<ToyCipher>(seed, count),
        _ => Err(KatError::UnknownCipher(cipher.to_owned())),
    }
}

/// AES-128 vectors, `count` per mode.
pub fn generate_kats(seed: u64, count: usize) -> Result<Vec<KatRecord>, KatError> {
    generate_kats_for(Aes128::SPEC.name, seed, count)
}

/// Canonical file text: header comments followed by one record per line.
pub fn render_kat_file(params: &KatParams, records: &[KatRecord]) -> String {
    let mut out = String::from("# tortoise known-answer vectors\n");
    out.push_str(&params.header_line());
    out.push('\n');
    for r in records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// Generates and renders a complete KAT file.
pub fn generate_kat_file(params: &KatParams) -> Result<String, KatError> {
    let records = generate_kats_for(&params.cipher, params.seed, params.count)?;
    Ok(render_kat_file(params, &records))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KatStatus {
    Pass,
    Fail(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatOutcome {
    pub line: usize,
    pub status: KatStatus,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KatReport {
    pub outcomes: Vec<KatOutcome>,
}

impl KatReport {
    pub fn passed(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.status == KatStatus::Pass)
            .count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &KatOutcome> {
        self.outcomes.iter().filter(|o| o.status != KatStatus::Pass)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// 0 when every record passed (including an empty report), 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            3
        }
    }
}

fn replay<C: BlockCipher>(r: &KatRecord) -> Result<(), String> {
    let aead = Tortoise::<C>::new(&r.key).map_err(|e| e.to_string())?;
    let sealed = aead
        .seal(r.mode, &r.nonce, &r.ad, &r.pt)
        .map_err(|e| format!("seal: {e}"))?;
    if sealed.ciphertext != r.ct {
        return Err("ciphertext mismatch".into());
    }
    if sealed.tag != r.tag {
        return Err("tag mismatch".into());
    }
    let opened = match r.mode {
        Mode::NonceRespecting => aead.open_nr(&r.nonce, &r.ad, &r.ct, &r.tag),
        Mode::MisuseResistant => aead.open_mr(&r.nonce, &r.ad, &r.ct, &r.tag),
    }
    .map_err(|e| format!("open: {e}"))?;
    if opened != r.pt {
        return Err("open returned a different plaintext".into());
    }
    Ok(())
}

/// Replays one record through seal and open.
pub fn verify_record(r: &KatRecord) -> Result<(), String> {
    match spec_by_name(&r.cipher).map(|s| s.name) {
        Some(name) if name == Aes128::SPEC.name => replay::<Aes128>(r),
        Some(name) if name == ToyCipher::SPEC.name => replay::<ToyCipher>(r),
        _ => Err(format!("unknown cipher {:?}", r.cipher)),
    }
}

pub fn verify_kats(lines: &[KatLine]) -> KatReport {
    let outcomes = lines
        .iter()
        .map(|l| {
            let status = match &l.record {
                Err(e) => KatStatus::Fail(format!("parse error: {e}")),
                Ok(r) => match verify_record(r) {
                    Ok(()) => KatStatus::Pass,
                    Err(e) => KatStatus::Fail(e),
                },
            };
            KatOutcome {
                line: l.line,
                status,
            }
        })
        .collect();
    KatReport { outcomes }
}

/// Result of [`differential_check`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub trials: usize,
    pub comparisons: usize,
    pub mismatches: Vec<String>,
}

impl DiffReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Composition of SHAKE128 and the toy permutation, computed without going
/// through the tweakable layer. Decryption inverts by exhaustive search.
struct BruteForceToyTweakable {
    key: [u8; 2],
}

impl BruteForceToyTweakable {
    fn subkey_and_mask(&self, tweak: [u8; 2]) -> ([u8; 2], u16) {
        let squeezed =
            shake128(&[self.key[0], self.key[1], tweak[0], tweak[1]], 4).expect("nonzero length");
        (
            [squeezed[0], squeezed[1]],
            u16::from_be_bytes([squeezed[2], squeezed[3]]),
        )
    }

    fn encrypt(&self, tweak: [u8; 2], block: u16) -> u16 {
        let (subkey, mask) = self.subkey_and_mask(tweak);
        let c = toy_encrypt_block(&subkey, &block.to_be_bytes()).expect("valid lengths");
        u16::from_be_bytes(c) ^ mask
    }

    fn decrypt(&self, tweak: [u8; 2], block: u16) -> u16 {
        let (subkey, mask) = self.subkey_and_mask(tweak);
        let cipher = ToyCipher::new(&subkey).expect("valid length");
        let target = block ^ mask;
        (0..=u16::MAX)
            .find(|&x| cipher.encrypt_word(x) == target)
            .expect("toy cipher is a permutation")
    }
}

/// Instantiates the framework over the toy cipher and checks it against the
/// brute-force composition, plus seal/open round trips and tag corruption.
pub fn differential_check(trials: usize, seed: u64) -> DiffReport {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut report = DiffReport {
        trials,
        ..DiffReport::default()
    };
    let n = ToyCipher::SPEC.block_len;

    for trial in 0..trials {
        let key: [u8; 2] = rng.gen();
        let tweak: [u8; 2] = rng.gen();
        let block: u16 = rng.gen();
        let tbc = TweakableCipher::<ToyCipher>::new(&key).expect("2-byte key");
        let oracle = BruteForceToyTweakable { key };
        let t = Tweak::from_raw(tweak);

        let got = tbc
            .encrypt(&t, &block.to_be_bytes())
            .expect("valid lengths");
        let want = oracle.encrypt(tweak, block);
        report.comparisons += 1;
        if got != want.to_be_bytes() {
            report.mismatches.push(format!(
                "trial {trial}: encrypt key={} tweak={} block={block:04x}: got {} want {want:04x}",
                hex::encode(key),
                hex::encode(tweak),
                hex::encode(&got),
            ));
        }
        let back = tbc.decrypt(&t, &want.to_be_bytes()).expect("valid lengths");
        report.comparisons += 1;
        if back != oracle.decrypt(tweak, want).to_be_bytes() || back != block.to_be_bytes() {
            report.mismatches.push(format!(
                "trial {trial}: decrypt key={} tweak={} block={want:04x}",
                hex::encode(key),
                hex::encode(tweak),
            ));
        }

        let aead = Tortoise::<ToyCipher>::new(&key).expect("2-byte key");
        for mode in Mode::ALL {
            let mut nonce = vec![rng.gen::<u8>()];
            if mode == Mode::NonceRespecting {
                nonce[0] &= 0x0f;
            }
            let ad: Vec<u8> = (0..rng.gen_range(0..=2 * n as u32 + 3))
                .map(|_| rng.gen())
                .collect();
            let pt: Vec<u8> = (0..rng.gen_range(0..=3 * n as u32))
                .map(|_| rng.gen())
                .collect();
            let mut sealed = aead.seal(mode, &nonce, &ad, &pt).expect("valid inputs");
            report.comparisons += 1;
            if aead.open(&sealed, &ad).as_deref() != Ok(&pt[..]) {
                report.mismatches.push(format!(
                    "trial {trial}: {mode} round trip failed key={} nonce={} ad={} pt={}",
                    hex::encode(key),
                    hex::encode(&nonce),
                    hex::encode(&ad),
                    hex::encode(&pt),
                ));
            }
            let bit = rng.gen_range(0..8 * n as u32) as usize;
            sealed.tag[bit / 8] ^= 1 << (bit % 8);
            report.comparisons += 1;
            if aead.open(&sealed, &ad).is_ok() {
                report.mismatches.push(format!(
                    "trial {trial}: {mode} accepted a corrupted tag key={} nonce={}",
                    hex::encode(key),
                    hex::encode(&nonce),
                ));
            }
        }
    }
    report
}
