//! `tortoise` command-line tool.
//!
//! Exit codes: 0 success, 1 usage / IO / malformed input, 2 authentication
//! failure, 3 at least one KAT failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::rngs::OsRng;
use rand::RngCore;

use tortoise::envelope::Envelope;
use tortoise::kat::{self, KatParams};
use tortoise::{Error, Mode, SealedMessage, TortoiseAes128};

const EXIT_USAGE: u8 = 1;
const EXIT_AUTH: u8 = 2;
const EXIT_KAT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tortoise",
    version,
    about = "Authenticated file encryption over tweakable AES-128"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seal a file into an envelope.
    Encrypt(EncryptArgs),
    /// Open an envelope; writes nothing unless the tag verifies.
    Decrypt(DecryptArgs),
    /// Known-answer vector tooling.
    #[command(subcommand)]
    Kat(KatCommand),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct KeySource {
    /// 16-byte key as 32 hex digits.
    #[arg(long)]
    key_hex: Option<String>,
    /// File holding the key, either 16 raw bytes or 32 hex digits.
    #[arg(long)]
    key_file: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct AdSource {
    /// Associated data as hex.
    #[arg(long)]
    ad_hex: Option<String>,
    /// File whose contents are the associated data.
    #[arg(long)]
    ad_file: Option<PathBuf>,
}

#[derive(Args)]
struct EncryptArgs {
    #[command(flatten)]
    key: KeySource,
    /// nr (nonce-respecting) or mr (misuse-resistant).
    #[arg(long)]
    mode: Mode,
    /// Nonce as hex: 8 bytes for nr, 15 bytes for mr.
    #[arg(long, conflicts_with = "nonce_random")]
    nonce_hex: Option<String>,
    /// Draw a fresh nonce from the system RNG (the default).
    #[arg(long)]
    nonce_random: bool,
    #[command(flatten)]
    ad: AdSource,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecryptArgs {
    #[command(flatten)]
    key: KeySource,
    #[command(flatten)]
    ad: AdSource,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum KatCommand {
    /// Generate a vector file from a seed.
    Generate {
        #[arg(long, default_value = "aes128")]
        cipher: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Records per mode.
        #[arg(long, default_value_t = 16)]
        count: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Replay every vector in a file.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// Differential check of the framework over the toy cipher.
    Diff {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn decode_hex(what: &str, s: &str) -> Result<Vec<u8>> {
    hex::decode(s.trim()).with_context(|| format!("{what} is not valid hex"))
}

impl KeySource {
    fn load(&self) -> Result<Vec<u8>> {
        let key = match (&self.key_hex, &self.key_file) {
            (Some(h), _) => decode_hex("key", h)?,
            (None, Some(path)) => {
                let raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                if raw.len() == 16 {
                    raw
                } else {
                    let text = String::from_utf8(raw)
                        .map_err(|_| anyhow!("key file is neither 16 raw bytes nor hex"))?;
                    decode_hex("key file", &text)?
                }
            }
            (None, None) => bail!("a key is required"),
        };
        if key.len() != 16 {
            bail!("key must be 16 bytes, got {}", key.len());
        }
        Ok(key)
    }
}

impl AdSource {
    fn load(&self) -> Result<Vec<u8>> {
        match (&self.ad_hex, &self.ad_file) {
            (Some(h), _) => decode_hex("associated data", h),
            (None, Some(path)) => {
                fs::read(path).with_context(|| format!("reading {}", path.display()))
            }
            (None, None) => Ok(Vec::new()),
        }
    }
}

/// Writes via a temporary file in the destination directory so a failed run
/// never leaves a partial output behind.
fn write_atomically(path: &Path, data: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(data)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn encrypt(args: &EncryptArgs) -> Result<u8> {
    let key = args.key.load()?;
    let ad = args.ad.load()?;
    let aead = TortoiseAes128::new(&key)?;
    let nonce_len = aead.nonce_len(args.mode);
    let nonce = match &args.nonce_hex {
        Some(h) => {
            let nonce = decode_hex("nonce", h)?;
            if nonce.len() != nonce_len {
                bail!(
                    "{} nonce must be {nonce_len} bytes, got {}",
                    args.mode,
                    nonce.len()
                );
            }
            nonce
        }
        None => {
            let mut nonce = vec![0u8; nonce_len];
            OsRng.fill_bytes(&mut nonce);
            nonce
        }
    };
    let plaintext =
        fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let sealed = aead.seal(args.mode, &nonce, &ad, &plaintext)?;
    let bytes = Envelope::from(sealed).to_bytes()?;
    write_atomically(&args.out, &bytes)?;
    Ok(0)
}

fn decrypt(args: &DecryptArgs) -> Result<u8> {
    let key = args.key.load()?;
    let ad = args.ad.load()?;
    let aead = TortoiseAes128::new(&key)?;
    let bytes =
        fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let envelope = Envelope::parse(&bytes).context("malformed envelope")?;
    match aead.open(&SealedMessage::from(envelope), &ad) {
        Ok(plaintext) => {
            write_atomically(&args.out, &plaintext)?;
            Ok(0)
        }
        Err(Error::Authentication) => {
            eprintln!("tortoise: authentication failed");
            Ok(EXIT_AUTH)
        }
        Err(e) => Err(e.into()),
    }
}

fn kat_command(cmd: &KatCommand) -> Result<u8> {
    match cmd {
        KatCommand::Generate {
            cipher,
            seed,
            count,
            file,
        } => {
            let text = kat::generate_kat_file(&KatParams {
                cipher: cipher.clone(),
                seed: *seed,
                count: *count,
            })?;
            match file {
                Some(path) => write_atomically(path, text.as_bytes())?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        KatCommand::Verify { file } => {
            let text =
                fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let report = kat::verify_kats(&kat::parse_kat_file(&text));
            for failure in report.failures() {
                if let kat::KatStatus::Fail(reason) = &failure.status {
                    eprintln!("{}:{}: {reason}", file.display(), failure.line);
                }
            }
            println!(
                "{} of {} vectors passed",
                report.passed(),
                report.outcomes.len()
            );
            Ok(if report.all_passed() { 0 } else { EXIT_KAT })
        }
        KatCommand::Diff { trials, seed } => {
            if *trials == 0 {
                bail!("--trials must be at least 1");
            }
            let report = kat::differential_check(*trials, *seed);
            for m in &report.mismatches {
                eprintln!("mismatch: {m}");
            }
            println!(
                "{} trials, {} comparisons, {} mismatches",
                report.trials,
                report.comparisons,
                report.mismatches.len()
            );
            Ok(if report.ok() { 0 } else { EXIT_KAT })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Encrypt(args) => encrypt(args),
        Command::Decrypt(args) => decrypt(args),
        Command::Kat(cmd) => kat_command(cmd),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tortoise: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
