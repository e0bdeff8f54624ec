//! `ldlc-pkc` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 malformed input file,
//! 3 decoding failure or FO rejection, 4 parameter guard violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use ldlc_pkc::attacks::{
    broadcast_intersection, broadcast_sum, embedding_attack, ggh_encrypt, ggh_encrypt_with_noise, ggh_keygen, ggh_noise,
    nguyen_modular_attack, run_trials, AttackReport, AttackStatus, BroadcastInstance, GghParams, NearestPlaneAttack,
    RoundoffAttack, TrialSummary,
};
use ldlc_pkc::bench::{keysize_row, simulate, trial_message, BenchError, KeySizeConfig, KeySizeRow, SimulationRow};
use ldlc_pkc::cca2::{fo_decrypt, fo_encrypt, FoCiphertext, FoOutcome};
use ldlc_pkc::decoder::DecoderError;
use ldlc_pkc::ldlc::{generate, parse_sequence, LatinSquareParams, LdlcError};
use ldlc_pkc::matrix_core::text::{parse_int_list, write_int_row, FormatError};
use ldlc_pkc::matrix_core::LatticeError;
use ldlc_pkc::pkc::{decrypt, encrypt, keygen, Ciphertext, KeyParams, PkcError, PublicKey, SecretKey};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;
pub const EXIT_DECODE: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ldlc-pkc", version, about = "LDLC lattice public-key encryption, GGH baseline and attacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt an integer vector (one line of n integers).
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext to an integer vector.
    Decrypt(DecryptArgs),
    /// FO-encrypt an arbitrary byte file.
    FoEncrypt(EncryptArgs),
    /// FO-decrypt; exits 3 on REJECT.
    FoDecrypt(DecryptArgs),
    /// Run an attack on files, or a known-answer harness over seeded trials.
    Attack(AttackArgs),
    /// Decryption success over a gamma sweep, as CSV.
    Simulate(SimulateArgs),
    /// Public-key sizes against GGH, as CSV.
    BenchKeysize(BenchArgs),
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[arg(long)]
    n: usize,
    /// Row degree; must equal the sequence length.
    #[arg(long)]
    d: usize,
    /// Generating sequence, e.g. `2,1,1`.
    #[arg(long)]
    seq: String,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
struct KeygenArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Noise deviation as a fraction of the Poltyrev limit, in (0, 1).
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value = "key.pk")]
    pk: PathBuf,
    #[arg(long, default_value = "key.sk")]
    sk: PathBuf,
}

#[derive(Args, Debug)]
struct EncryptArgs {
    #[arg(long)]
    pk: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
struct DecryptArgs {
    #[arg(long)]
    sk: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AttackName {
    Roundoff,
    NearestPlane,
    Embedding,
    Nguyen,
    BroadcastIntersection,
    BroadcastSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Ggh,
    Ldlc,
}

#[derive(Args, Debug)]
struct AttackArgs {
    #[arg(value_enum)]
    name: AttackName,
    /// LDLC public key to attack (file mode, with --ct).
    #[arg(long, requires = "ct")]
    pk: Option<PathBuf>,
    #[arg(long, requires = "pk")]
    ct: Option<PathBuf>,
    /// Known plaintext for confirming a recovery (file mode).
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Per-coordinate noise bound; defaults to beta (GGH) or ceil(6·sigma_int) (LDLC).
    #[arg(long)]
    bound: Option<u64>,
    /// Harness mode: the scheme whose instances are generated.
    #[arg(long, value_enum, conflicts_with = "pk")]
    scheme: Option<Scheme>,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    beta: i64,
    /// GGH entry bound for R'.
    #[arg(long, default_value_t = 4)]
    l: i64,
    #[arg(long)]
    ggh_mixing_rounds: Option<usize>,
    #[arg(long, default_value = "2,1,1")]
    seq: String,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Recipients per broadcast instance.
    #[arg(long, default_value_t = 2)]
    recipients: usize,
    /// Per-trial outcomes as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Run trials on all cores; output order is unchanged.
    #[arg(long)]
    jobs: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Comma-separated gammas; defaults to 0.1,0.2,…,0.9.
    #[arg(long)]
    gammas: Option<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    jobs: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated dimensions.
    #[arg(long)]
    dims: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "2,1,1")]
    seq: String,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 4)]
    ggh_l: i64,
    /// GGH mixing rounds; defaults to n.
    #[arg(long)]
    ggh_mixing_rounds: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(m: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn guard(m: impl Into<String>) -> Self {
        CliError {
            code: EXIT_GUARD,
            message: m.into(),
        }
    }

    fn format(path: &Path, e: FormatError) -> Self {
        CliError {
            code: EXIT_FORMAT,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<PkcError> for CliError {
    fn from(e: PkcError) -> Self {
        let code = match &e {
            PkcError::DecodeFailure { .. } => EXIT_DECODE,
            PkcError::Format(_) => EXIT_FORMAT,
            _ => EXIT_GUARD,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::guard(e.to_string())
    }
}

impl From<LdlcError> for CliError {
    fn from(e: LdlcError) -> Self {
        CliError::guard(e.to_string())
    }
}

impl From<DecoderError> for CliError {
    fn from(e: DecoderError) -> Self {
        CliError::guard(e.to_string())
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Pkc(p) => p.into(),
            other => CliError::guard(other.to_string()),
        }
    }
}

impl From<ldlc_pkc::attacks::AttackError> for CliError {
    fn from(e: ldlc_pkc::attacks::AttackError) -> Self {
        CliError::guard(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the command, and returns the exit code.
/// Regular output goes to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Keygen(a) => cmd_keygen(a),
        Command::Encrypt(a) => cmd_encrypt(a),
        Command::Decrypt(a) => cmd_decrypt(a),
        Command::FoEncrypt(a) => cmd_fo_encrypt(a),
        Command::FoDecrypt(a) => cmd_fo_decrypt(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::BenchKeysize(a) => cmd_bench(a),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    String::from_utf8(bytes).map_err(|_| CliError::format(path, FormatError::new(0, "file is not UTF-8")))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), CliError> {
    fs::write(path, data).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn sequence(s: &str) -> Result<Vec<i64>, CliError> {
    parse_sequence(s).ok_or_else(|| CliError::usage(format!("bad generating sequence `{s}`")))
}

fn code_params(a: &CodeArgs) -> Result<LatinSquareParams, CliError> {
    let seq = sequence(&a.seq)?;
    if seq.len() != a.d {
        return Err(CliError::usage(format!("--d {} disagrees with a sequence of length {}", a.d, seq.len())));
    }
    let p = LatinSquareParams::new(a.n, seq, a.seed);
    p.check()?;
    Ok(p)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::usage(format!("bad {what} `{t}`"))))
        .collect()
}

/// A plaintext vector file: one line of integers.
fn read_vector(path: &Path, n: usize) -> Result<Vec<BigInt>, CliError> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    let line = lines.next().unwrap_or("");
    let v = parse_int_list(line, 1).map_err(|e| CliError::format(path, e))?;
    if v.len() != n {
        return Err(CliError::format(path, FormatError::new(1, format!("expected {n} integers, found {}", v.len()))));
    }
    if lines.next().is_some() {
        return Err(CliError::format(path, FormatError::new(2, "unexpected trailing content")));
    }
    Ok(v)
}

fn vector_text(v: &[BigInt]) -> String {
    let mut s = String::new();
    write_int_row(&mut s, v);
    s
}

fn load_pk(path: &Path) -> Result<PublicKey, CliError> {
    PublicKey::parse(&read_text(path)?).map_err(|e| CliError::format(path, e))
}

fn load_sk(path: &Path) -> Result<SecretKey, CliError> {
    SecretKey::parse(&read_text(path)?).map_err(|e| CliError::format(path, e))
}

fn check_params(path: &Path, found: &KeyParams, expected: &KeyParams) -> Result<(), CliError> {
    if found != expected {
        return Err(CliError::format(path, FormatError::new(2, "ciphertext parameters do not match the key")));
    }
    Ok(())
}

fn cmd_keygen(a: KeygenArgs) -> Result<String, CliError> {
    let params = code_params(&a.code)?;
    let (pk, sk) = keygen(&params, a.gamma)?;
    write_file(&a.pk, pk.to_text().as_bytes())?;
    write_file(&a.sk, sk.to_text().as_bytes())?;
    Ok(format!("n={} D={} sigma_int={}\n", pk.n, pk.scale, pk.sigma_int))
}

fn cmd_encrypt(a: EncryptArgs) -> Result<String, CliError> {
    let pk = load_pk(&a.pk)?;
    let m = read_vector(&a.input, pk.n)?;
    let ct = encrypt(&pk, &m, a.seed)?;
    write_file(&a.out, ct.to_text(&pk.params()).as_bytes())?;
    Ok(String::new())
}

fn cmd_decrypt(a: DecryptArgs) -> Result<String, CliError> {
    let sk = load_sk(&a.sk)?;
    let (params, ct) = Ciphertext::parse(&read_text(&a.input)?).map_err(|e| CliError::format(&a.input, e))?;
    check_params(&a.input, &params, &sk.params())?;
    let m = decrypt(&sk, &ct)?;
    write_file(&a.out, vector_text(&m).as_bytes())?;
    Ok(String::new())
}

fn cmd_fo_encrypt(a: EncryptArgs) -> Result<String, CliError> {
    let pk = load_pk(&a.pk)?;
    let m = read_bytes(&a.input)?;
    let ct = fo_encrypt(&pk, &m, a.seed)?;
    write_file(&a.out, ct.to_text(&pk.params()).as_bytes())?;
    Ok(String::new())
}

fn cmd_fo_decrypt(a: DecryptArgs) -> Result<String, CliError> {
    let sk = load_sk(&a.sk)?;
    let (params, ct) = FoCiphertext::parse(&read_text(&a.input)?).map_err(|e| CliError::format(&a.input, e))?;
    check_params(&a.input, &params, &sk.params())?;
    match fo_decrypt(&sk, &ct)? {
        FoOutcome::Accept(m) => {
            write_file(&a.out, &m)?;
            Ok(String::new())
        }
        FoOutcome::Reject => Err(CliError {
            code: EXIT_DECODE,
            message: "REJECT".into(),
        }),
    }
}

fn cmd_simulate(a: SimulateArgs) -> Result<String, CliError> {
    let params = code_params(&a.code)?;
    let gammas: Vec<f64> = match &a.gammas {
        Some(s) => parse_list(s, "gamma")?,
        None => (1..=9).map(|i| i as f64 / 10.0).collect(),
    };
    if gammas.iter().any(|g| !(*g > 0.0 && *g < 1.0)) {
        return Err(CliError::guard("every gamma must lie in (0, 1)"));
    }
    let code = generate(&params)?;
    let mut out = format!("{}\n", SimulationRow::CSV_HEADER);
    for g in gammas {
        let row = simulate(&code, g, a.trials, params.seed, a.jobs)?;
        writeln!(out, "{}", row.csv()).expect("write to String");
    }
    emit(out, a.csv.as_deref())
}

fn cmd_bench(a: BenchArgs) -> Result<String, CliError> {
    let dims: Vec<usize> = parse_list(&a.dims, "dimension")?;
    let cfg = KeySizeConfig {
        gen_seq: sequence(&a.seq)?,
        gamma: a.gamma,
        ggh_l: a.ggh_l,
        ggh_mixing_rounds: a.ggh_mixing_rounds,
    };
    let mut out = format!("{}\n", KeySizeRow::CSV_HEADER);
    for n in dims {
        writeln!(out, "{}", keysize_row(n, &cfg, a.seed)?.csv()).expect("write to String");
    }
    emit(out, a.csv.as_deref())
}

/// Writes CSV to `path` when given, otherwise returns it for stdout.
fn emit(csv: String, path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => {
            write_file(p, csv.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

fn cmd_attack(a: AttackArgs) -> Result<String, CliError> {
    if let (Some(pk), Some(ct)) = (&a.pk, &a.ct) {
        return attack_files(&a, pk, ct);
    }
    let scheme = a
        .scheme
        .ok_or_else(|| CliError::usage("give --pk and --ct, or --scheme with --seed for a harness run"))?;
    let seed = a.seed.ok_or_else(|| CliError::usage("--seed is required for harness runs"))?;
    let summary = match scheme {
        Scheme::Ggh => ggh_harness(&a, seed)?,
        Scheme::Ldlc => ldlc_harness(&a, seed)?,
    };
    let mut out = String::new();
    writeln!(
        out,
        "{} scheme={:?} n={} trials={} recovered={} failed={} inapplicable={} time={:.3}s",
        attack_label(a.name),
        scheme,
        a.n,
        summary.trials,
        summary.recovered,
        summary.failed,
        summary.inapplicable,
        summary.wall_time.as_secs_f64()
    )
    .expect("write to String");
    if let Some(path) = &a.csv {
        let mut csv = String::from("trial,status,time_ms\n");
        for (i, r) in summary.reports.iter().enumerate() {
            writeln!(csv, "{i},{},{:.3}", r.status, r.wall_time.as_secs_f64() * 1e3).expect("write to String");
        }
        write_file(path, csv.as_bytes())?;
    }
    Ok(out)
}

fn attack_label(name: AttackName) -> &'static str {
    match name {
        AttackName::Roundoff => "roundoff",
        AttackName::NearestPlane => "nearest-plane",
        AttackName::Embedding => "embedding",
        AttackName::Nguyen => "nguyen-modular",
        AttackName::BroadcastIntersection => "broadcast-intersection",
        AttackName::BroadcastSum => "broadcast-sum",
    }
}

fn attack_files(a: &AttackArgs, pk_path: &Path, ct_path: &Path) -> Result<String, CliError> {
    let pk = load_pk(pk_path)?;
    let (params, ct) = Ciphertext::parse(&read_text(ct_path)?).map_err(|e| CliError::format(ct_path, e))?;
    check_params(ct_path, &params, &pk.params())?;
    let bound = BigInt::from(a.bound.unwrap_or_else(|| (6.0 * pk.sigma_int).ceil() as u64));
    let b = &pk.g_prime;
    let report = match a.name {
        AttackName::Roundoff => RoundoffAttack::new(b)?.attack(&ct.c, &bound)?,
        AttackName::NearestPlane => NearestPlaneAttack::new(b)?.attack(&ct.c, &bound)?,
        AttackName::Embedding => embedding_attack(b, &ct.c, &bound)?,
        AttackName::Nguyen => nguyen_modular_attack(b, &ct.c, a.beta)?.1,
        AttackName::BroadcastIntersection | AttackName::BroadcastSum => {
            return Err(CliError::usage("broadcast attacks run in harness mode only"))
        }
    };
    let report = match &a.truth {
        Some(t) => report.confirm(&read_vector(t, pk.n)?),
        None => report,
    };
    let mut out = report.summary_line();
    out.push('\n');
    if let Some(m) = &report.recovered {
        out.push_str(&vector_text(m));
    }
    Ok(out)
}

fn ggh_params(a: &AttackArgs) -> GghParams {
    let p = GghParams::new(a.n, a.l, a.beta);
    match a.ggh_mixing_rounds {
        Some(r) => p.with_mixing_rounds(r),
        None => p,
    }
}

fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `f` per trial; an error inside a trial aborts the whole run.
fn harness<F>(a: &AttackArgs, f: F) -> Result<TrialSummary, CliError>
where
    F: Fn(usize) -> Result<AttackReport, CliError> + Sync + Send,
{
    let errors = std::sync::Mutex::new(None);
    let summary = run_trials(a.trials, a.jobs, |t| match f(t) {
        Ok(r) => r,
        Err(e) => {
            errors.lock().expect("lock").get_or_insert(e);
            failed_placeholder()
        }
    });
    match errors.into_inner().expect("lock") {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}

fn failed_placeholder() -> AttackReport {
    AttackReport {
        attack: "error",
        status: AttackStatus::Failed,
        recovered: None,
        detail: "trial error".into(),
        wall_time: std::time::Duration::ZERO,
    }
}

fn ggh_harness(a: &AttackArgs, seed: u64) -> Result<TrialSummary, CliError> {
    let p = ggh_params(a);
    p.check()?;
    let bound = BigInt::from(a.bound.unwrap_or(a.beta as u64));
    harness(a, |t| {
        let s = trial_seed(seed, t);
        let m = trial_message(a.n, s, 0);
        let report = match a.name {
            AttackName::BroadcastIntersection | AttackName::BroadcastSum => {
                let e = ggh_noise(a.n, a.beta, s);
                let instances = (0..a.recipients.max(1))
                    .map(|r| {
                        let keys = ggh_keygen(&p, s.wrapping_add(r as u64 + 1))?;
                        let c = ggh_encrypt_with_noise(&keys.b, &m, &e)?;
                        Ok(BroadcastInstance { pub_basis: keys.b, c })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                if a.name == AttackName::BroadcastSum {
                    broadcast_sum(&instances, &bound)?
                } else {
                    broadcast_intersection(&instances, &bound)?
                }
            }
            name => {
                let keys = ggh_keygen(&p, s)?;
                let c = ggh_encrypt(&keys.b, &m, a.beta, s ^ 1)?;
                single_attack(name, &keys.b, &c, &bound, a.beta)?
            }
        };
        Ok(report.confirm(&m))
    })
}

fn single_attack(name: AttackName, b: &ldlc_pkc::matrix_core::IntMatrix, c: &[BigInt], bound: &BigInt, beta: i64) -> Result<AttackReport, CliError> {
    Ok(match name {
        AttackName::Roundoff => RoundoffAttack::new(b)?.attack(c, bound)?,
        AttackName::NearestPlane => NearestPlaneAttack::new(b)?.attack(c, bound)?,
        AttackName::Embedding => embedding_attack(b, c, bound)?,
        AttackName::Nguyen => nguyen_modular_attack(b, c, beta)?.1,
        AttackName::BroadcastIntersection | AttackName::BroadcastSum => unreachable!("handled by the harness"),
    })
}

fn ldlc_harness(a: &AttackArgs, seed: u64) -> Result<TrialSummary, CliError> {
    let seq = sequence(&a.seq)?;
    let params = LatinSquareParams::new(a.n, seq.clone(), seed);
    match a.name {
        AttackName::BroadcastIntersection | AttackName::BroadcastSum => {
            // FO-wrapped broadcast: each recipient has its own key and randomness
            let keys = (0..a.recipients.max(1))
                .map(|r| keygen(&LatinSquareParams::new(a.n, seq.clone(), seed.wrapping_add(r as u64)), a.gamma))
                .collect::<Result<Vec<_>, _>>()?;
            let bound = BigInt::from(
                a.bound
                    .unwrap_or_else(|| (6.0 * keys.iter().map(|k| k.0.sigma_int).fold(0.0, f64::max)).ceil() as u64),
            );
            harness(a, |t| {
                let s = trial_seed(seed, t);
                let msg = format!("broadcast trial {t}").into_bytes();
                let mut instances = Vec::new();
                let mut truth = None;
                for (r, (pk, _)) in keys.iter().enumerate() {
                    let ct = fo_encrypt(pk, &msg, s.wrapping_add(r as u64))?;
                    if truth.is_none() {
                        let d = ldlc_pkc::pkc::decrypt_detailed(&keys[r].1, &ct.c1)?;
                        truth = Some(d.m_hat);
                    }
                    instances.push(BroadcastInstance {
                        pub_basis: pk.g_prime.clone(),
                        c: ct.c1.c,
                    });
                }
                let report = if a.name == AttackName::BroadcastSum {
                    broadcast_sum(&instances, &bound)?
                } else {
                    broadcast_intersection(&instances, &bound)?
                };
                Ok(report.confirm(&truth.expect("at least one recipient")))
            })
        }
        name => {
            let (pk, _) = keygen(&params, a.gamma)?;
            let bound = BigInt::from(a.bound.unwrap_or_else(|| (6.0 * pk.sigma_int).ceil() as u64));
            let roundoff = (name == AttackName::Roundoff).then(|| RoundoffAttack::new(&pk.g_prime)).transpose()?;
            let np = (name == AttackName::NearestPlane)
                .then(|| NearestPlaneAttack::new(&pk.g_prime))
                .transpose()?;
            harness(a, |t| {
                let s = trial_seed(seed, t);
                let m = trial_message(a.n, s, 0);
                let ct = encrypt(&pk, &m, s ^ 1)?;
                let report = match name {
                    AttackName::Roundoff => roundoff.as_ref().expect("built").attack(&ct.c, &bound)?,
                    AttackName::NearestPlane => np.as_ref().expect("built").attack(&ct.c, &bound)?,
                    other => single_attack(other, &pk.g_prime, &ct.c, &bound, a.beta)?,
                };
                Ok(report.confirm(&m))
            })
        }
    }
}
