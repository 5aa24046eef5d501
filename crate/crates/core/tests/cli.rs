//! End-to-end tests of the `tortoise` binary.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tortoise::envelope::Envelope;
use tortoise::kat::{generate_kat_file, KatParams};

const KEY: &str = "000102030405060708090a0b0c0d0e0f";

fn tortoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tortoise"))
        .args(args)
        .output()
        .expect("spawn tortoise")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn encrypt(
    dir: &Path,
    mode: &str,
    nonce: Option<&str>,
    ad: &str,
    input: &Path,
    out: &str,
) -> Output {
    let out = dir.join(out);
    let mut args = vec![
        "encrypt",
        "--key-hex",
        KEY,
        "--mode",
        mode,
        "--in",
        p(input),
        "--out",
        p(&out),
    ];
    if let Some(n) = nonce {
        args.extend(["--nonce-hex", n]);
    }
    if !ad.is_empty() {
        args.extend(["--ad-hex", ad]);
    }
    tortoise(&args)
}

fn decrypt(input: &Path, out: &Path, ad: &str) -> Output {
    let mut args = vec![
        "decrypt",
        "--key-hex",
        KEY,
        "--in",
        p(input),
        "--out",
        p(out),
    ];
    if !ad.is_empty() {
        args.extend(["--ad-hex", ad]);
    }
    tortoise(&args)
}

#[test]
fn round_trip_both_modes_with_random_nonce() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain.bin");
    let data: Vec<u8> = (0..100_000u32).map(|i| (i * 7 % 251) as u8).collect();
    fs::write(&input, &data).unwrap();
    for mode in ["nr", "mr"] {
        let out = encrypt(dir.path(), mode, None, "cafe", &input, "sealed");
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let env = Envelope::parse(&fs::read(dir.path().join("sealed")).unwrap()).unwrap();
        assert_eq!(env.nonce.len(), if mode == "nr" { 8 } else { 15 });
        let recovered = dir.path().join("recovered");
        assert_eq!(
            code(&decrypt(&dir.path().join("sealed"), &recovered, "cafe")),
            0
        );
        assert_eq!(fs::read(&recovered).unwrap(), data);
    }
}

#[test]
fn fixed_nonce_gives_identical_envelopes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain");
    fs::write(&input, b"same bytes every time").unwrap();
    for (mode, nonce) in [
        ("nr", "0102030405060708"),
        ("mr", "0102030405060708090a0b0c0d0e0f"),
    ] {
        assert_eq!(
            code(&encrypt(dir.path(), mode, Some(nonce), "", &input, "a")),
            0
        );
        assert_eq!(
            code(&encrypt(dir.path(), mode, Some(nonce), "", &input, "b")),
            0
        );
        let a = fs::read(dir.path().join("a")).unwrap();
        assert_eq!(a, fs::read(dir.path().join("b")).unwrap());
        assert_eq!(&a[..4], b"TORT");
    }
}

#[test]
fn envelope_matches_library_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain");
    fs::write(&input, b"library parity").unwrap();
    assert_eq!(
        code(&encrypt(
            dir.path(),
            "mr",
            Some(&"11".repeat(15)),
            "aa",
            &input,
            "e"
        )),
        0
    );
    let aead = tortoise::TortoiseAes128::new(&common::h(KEY)).unwrap();
    let sealed = aead
        .seal_mr(&[0x11; 15], &[0xaa], b"library parity")
        .unwrap();
    assert_eq!(
        fs::read(dir.path().join("e")).unwrap(),
        Envelope::from(sealed).to_bytes().unwrap()
    );
}

#[test]
fn short_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain");
    fs::write(&input, b"x").unwrap();
    let out = dir.path().join("out");
    let short = &KEY[..30];
    let r = tortoise(&[
        "encrypt",
        "--key-hex",
        short,
        "--mode",
        "nr",
        "--in",
        p(&input),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&r), 1);
    assert!(String::from_utf8_lossy(&r.stderr).contains("16 bytes"));
    assert!(!out.exists());
}

#[test]
fn bad_nonce_length_and_missing_args_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain");
    fs::write(&input, b"x").unwrap();
    assert_eq!(
        code(&encrypt(
            dir.path(),
            "mr",
            Some("0102030405060708"),
            "",
            &input,
            "o"
        )),
        1
    );
    assert_eq!(code(&tortoise(&[])), 1);
    assert_eq!(code(&tortoise(&["encrypt", "--mode", "nr"])), 1);
    assert_eq!(
        code(&tortoise(&[
            "encrypt",
            "--key-hex",
            KEY,
            "--mode",
            "zz",
            "--in",
            "a",
            "--out",
            "b"
        ])),
        1
    );
    assert_eq!(code(&tortoise(&["--help"])), 0);
}

#[test]
fn key_file_accepts_raw_and_hex() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain");
    fs::write(&input, b"key file test").unwrap();
    let raw = dir.path().join("raw.key");
    fs::write(&raw, common::h(KEY)).unwrap();
    let hexfile = dir.path().join("hex.key");
    fs::write(&hexfile, format!("{KEY}\n")).unwrap();
    let sealed = dir.path().join("sealed");
    let r = tortoise(&[
        "encrypt",
        "--key-file",
        p(&raw),
        "--mode",
        "nr",
        "--in",
        p(&input),
        "--out",
        p(&sealed),
    ]);
    assert_eq!(code(&r), 0);
    let out = dir.path().join("out");
    let r = tortoise(&[
        "decrypt",
        "--key-file",
        p(&hexfile),
        "--in",
        p(&sealed),
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&r), 0);
    assert_eq!(fs::read(out).unwrap(), b"key file test");
}

#[test]
fn tampering_and_wrong_ad_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain");
    fs::write(&input, vec![0x5a; 1000]).unwrap();
    for mode in ["nr", "mr"] {
        assert_eq!(
            code(&encrypt(dir.path(), mode, None, "beef", &input, "sealed")),
            0
        );
        let sealed = dir.path().join("sealed");
        let out = dir.path().join("out");

        assert_eq!(code(&decrypt(&sealed, &out, "beee")), 2);
        assert!(!out.exists());
        assert_eq!(code(&decrypt(&sealed, &out, "")), 2);
        assert!(!out.exists());

        let mut bytes = fs::read(&sealed).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 0x01;
        let tampered = dir.path().join("tampered");
        fs::write(&tampered, &bytes).unwrap();
        let r = decrypt(&tampered, &out, "beef");
        assert_eq!(code(&r), 2);
        assert!(String::from_utf8_lossy(&r.stderr).contains("authentication failed"));
        assert!(!out.exists());
    }
}

#[test]
fn malformed_envelope_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk");
    fs::write(&junk, b"TORT\x01\x05").unwrap();
    let out = dir.path().join("out");
    assert_eq!(code(&decrypt(&junk, &out, "")), 1);
    assert!(!out.exists());
    assert_eq!(code(&decrypt(&dir.path().join("missing"), &out, "")), 1);
}

#[test]
fn kat_verify_committed_corpus() {
    for name in ["aes128.kat", "toy16.kat"] {
        let r = tortoise(&["kat", "verify", "--file", p(&common::kat_path(name))]);
        assert_eq!(
            code(&r),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&r.stderr)
        );
        assert!(String::from_utf8_lossy(&r.stdout).contains("32 of 32"));
    }
}

#[test]
fn kat_generate_is_reproducible() {
    let a = tortoise(&["kat", "generate", "--seed", "7", "--count", "10"]);
    let b = tortoise(&["kat", "generate", "--seed", "7", "--count", "10"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let records = String::from_utf8(a.stdout).unwrap();
    assert_eq!(
        records.lines().filter(|l| l.starts_with("mode=")).count(),
        20
    );

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("v.kat");
    assert_eq!(
        code(&tortoise(&[
            "kat",
            "generate",
            "--seed",
            "7",
            "--count",
            "10",
            "--file",
            p(&f)
        ])),
        0
    );
    assert_eq!(fs::read_to_string(&f).unwrap(), records);
    assert_eq!(code(&tortoise(&["kat", "generate", "--cipher", "des"])), 1);
}

#[test]
fn committed_corpus_regenerates_from_its_header() {
    for name in ["aes128.kat", "toy16.kat"] {
        let text = fs::read_to_string(common::kat_path(name)).unwrap();
        let params = KatParams::from_header(&text).expect("header");
        assert_eq!(generate_kat_file(&params).unwrap(), text, "{name}");
    }
}

#[test]
fn kat_verify_reports_failures_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(common::kat_path("aes128.kat")).unwrap();
    // flip one hex digit of the first tag
    let idx = text.find("tag=").unwrap() + 4;
    let mut bytes = text.into_bytes();
    bytes[idx] = if bytes[idx] == b'0' { b'1' } else { b'0' };
    let f = dir.path().join("bad.kat");
    fs::write(&f, &bytes).unwrap();
    let r = tortoise(&["kat", "verify", "--file", p(&f)]);
    assert_eq!(code(&r), 3);
    assert!(String::from_utf8_lossy(&r.stdout).contains("31 of 32"));

    let empty = dir.path().join("empty.kat");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&tortoise(&["kat", "verify", "--file", p(&empty)])), 0);
}

#[test]
fn kat_diff_small_run() {
    let r = tortoise(&["kat", "diff", "--trials", "100"]);
    assert_eq!(code(&r), 0);
    assert!(String::from_utf8_lossy(&r.stdout).contains("0 mismatches"));
    assert_eq!(code(&tortoise(&["kat", "diff", "--trials", "0"])), 1);
}
