use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fragfhe::analysis::{
    cca_malleability_demo, dual_binding_forgery_trial, hidden_modulus_chisq, kpa_underdetermination,
    masking_uniformity_exhaustive, uniform_control_chisq, AnalysisError, Report, TamperStrategy,
};
use fragfhe::circuit::{eval_encrypted, parse_circuit, CircuitError};
use fragfhe::homomorphic::{h_add, h_mul, EvalError};
use fragfhe::numeric::{entropy_rng, seeded_rng};
use fragfhe::scheme::{decrypt, encrypt, keygen, Ciphertext, EvaluationKey, Params, Profile, PublicParams, SchemeError, SecretKey};
use fragfhe::Natural;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::bench::bench_run;
use crate::format::{FileFormat, FormatError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Format(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::Eval(e) => e.into(),
            CircuitError::MissingInput(_) | CircuitError::ArityMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fragfhe", version, about = "Fragment-based symmetric homomorphic encryption")]
struct Cli {
    /// Seed for a deterministic run; omit to draw from the OS.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Production,
    Toy,
}

#[derive(Debug, Args)]
struct SetupArgs {
    #[arg(long, value_enum, default_value = "toy")]
    profile: ProfileArg,
    /// Security level; defaults to 128 for production and 16 for toy.
    #[arg(long)]
    lambda: Option<u32>,
    #[arg(long, value_name = "DEC", required_if_eq("profile", "toy"))]
    toy_p: Option<String>,
    #[arg(long, value_name = "DEC", required_if_eq("profile", "toy"))]
    toy_q: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate parameters and keys.
    Keygen {
        #[command(flatten)]
        setup: SetupArgs,
        /// Directory for files not given explicitly.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        sk: Option<PathBuf>,
        #[arg(long)]
        ek: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Encrypt a decimal message given as an argument or on stdin.
    Encrypt {
        message: Option<String>,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the decimal plaintext of a ciphertext file (stdin if omitted).
    Decrypt {
        ciphertext: Option<PathBuf>,
        #[arg(long)]
        sk: PathBuf,
    },
    /// Homomorphic addition of two ciphertext files.
    Add {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homomorphic multiplication of two ciphertext files.
    Mul {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        ek: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a circuit file on named ciphertext inputs.
    Eval {
        circuit: PathBuf,
        #[arg(long)]
        ek: PathBuf,
        #[arg(long = "input", value_name = "NAME=FILE")]
        inputs: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time KeyGen, Enc, Dec, Add and Mul.
    Bench {
        #[arg(long, value_enum, default_value = "production")]
        profile: ProfileArg,
        #[arg(long)]
        lambda: Option<u32>,
        #[arg(long, value_name = "DEC")]
        toy_p: Option<String>,
        #[arg(long, value_name = "DEC")]
        toy_q: Option<String>,
        #[arg(long, default_value_t = 30)]
        iterations: usize,
        /// Print `name=value` lines instead of the table.
        #[arg(long)]
        kv: bool,
    },
    /// Run the security analysis suite at toy parameters.
    Analyze {
        #[arg(long, default_value_t = 10_000)]
        forgery_trials: u64,
        /// Print `name=value` lines instead of prose.
        #[arg(long)]
        kv: bool,
    },
}

/// Runs the command line and returns the process exit code. Diagnostics go
/// to `stderr`; results go to `stdout`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdin, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn rng_for(seed: Option<u64>) -> ChaCha20Rng {
    seed.map_or_else(entropy_rng, seeded_rng)
}

fn parse_decimal(name: &str, s: &str) -> Result<Natural, CliError> {
    Natural::from_str(s.trim()).map_err(|_| CliError::Usage(format!("{name}: expected a decimal natural, got {:?}", s.trim())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn load<T: FileFormat>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    T::decode(&text).map_err(|e| match e {
        FormatError::Content(inner) => CliError::Validation(format!("{}: {inner}", path.display())),
        other => CliError::Format(format!("{}: {other}", path.display())),
    })
}

fn write_file(path: &Path, contents: &str, secret: bool) -> Result<(), CliError> {
    let mut options = fs::OpenOptions::new();
    options.write(true).create(true).truncate(true);
    #[cfg(unix)]
    if secret {
        use std::os::unix::fs::OpenOptionsExt;
        options.mode(0o600);
    }
    #[cfg(not(unix))]
    let _ = secret;
    let mut file = options.open(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    file.write_all(contents.as_bytes()).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, contents, false),
        None => stdout.write_all(contents.as_bytes()).map_err(|e| CliError::Format(e.to_string())),
    }
}

fn build_params(
    profile: ProfileArg,
    lambda: Option<u32>,
    toy_p: Option<&str>,
    toy_q: Option<&str>,
    rng: &mut ChaCha20Rng,
) -> Result<Params, CliError> {
    match profile {
        ProfileArg::Production => Ok(Params::production(lambda.unwrap_or(128), rng)?),
        ProfileArg::Toy => {
            let (Some(p), Some(q)) = (toy_p, toy_q) else {
                return Err(CliError::Usage("toy profile needs --toy-p and --toy-q".into()));
            };
            Ok(Params::toy(lambda.unwrap_or(16), parse_decimal("--toy-p", p)?, parse_decimal("--toy-q", q)?)?)
        }
    }
}

fn load_full_params(params: &Path, sk: &SecretKey) -> Result<Params, CliError> {
    let public: PublicParams = load(params)?;
    Ok(Params::from_public(&public, sk.p().clone())?)
}

fn execute(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut rng = rng_for(cli.seed);
    let write_out = |s: &mut dyn Write, text: &str| s.write_all(text.as_bytes()).map_err(|e| CliError::Format(e.to_string()));
    match cli.command {
        Command::Keygen { setup, out, sk, ek, params } => {
            let full = build_params(setup.profile, setup.lambda, setup.toy_p.as_deref(), setup.toy_q.as_deref(), &mut rng)?;
            let (secret, eval) = keygen(&full, &mut rng)?;
            let secret = if full.profile() == Profile::Toy { secret } else { secret.without_witnesses() };
            write_file(&sk.unwrap_or_else(|| out.join("sk.fhe")), &secret.encode(), true)?;
            write_file(&ek.unwrap_or_else(|| out.join("ek.fhe")), &eval.encode(), false)?;
            write_file(&params.unwrap_or_else(|| out.join("params.fhe")), &full.public().encode(), false)
        }
        Command::Encrypt { message, sk, params, out } => {
            let text = match message {
                Some(m) => m,
                None => {
                    let mut buf = String::new();
                    stdin.read_to_string(&mut buf).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
                    buf
                }
            };
            let m = parse_decimal("message", &text)?;
            let secret: SecretKey = load(&sk)?;
            let full = load_full_params(&params, &secret)?;
            let ct = encrypt(&secret, &full, &m, &mut rng)?;
            emit(out.as_deref(), &ct.encode(), stdout)
        }
        Command::Decrypt { ciphertext, sk } => {
            let secret: SecretKey = load(&sk)?;
            let ct: Ciphertext = match ciphertext {
                Some(path) => load(&path)?,
                None => {
                    let mut buf = String::new();
                    stdin.read_to_string(&mut buf).map_err(|e| CliError::Format(format!("stdin: {e}")))?;
                    Ciphertext::decode(&buf).map_err(|e| CliError::Format(format!("stdin: {e}")))?
                }
            };
            if ct.modulus() % secret.p() != Natural::from(0u8) {
                return Err(CliError::Validation("ciphertext modulus does not match the secret key".into()));
            }
            write_out(stdout, &format!("{}\n", decrypt(&secret, &ct)))
        }
        Command::Add { a, b, out } => {
            let (a, b): (Ciphertext, Ciphertext) = (load(&a)?, load(&b)?);
            let sum = h_add(&a, &b, a.modulus())?;
            emit(out.as_deref(), &sum.encode(), stdout)
        }
        Command::Mul { a, b, ek, out } => {
            let (a, b): (Ciphertext, Ciphertext) = (load(&a)?, load(&b)?);
            let eval: EvaluationKey = load(&ek)?;
            let prod = h_mul(&a, &b, &eval)?;
            emit(out.as_deref(), &prod.encode(), stdout)
        }
        Command::Eval { circuit, ek, inputs, out } => {
            let circuit = parse_circuit(&read_text(&circuit)?)?;
            let eval: EvaluationKey = load(&ek)?;
            let mut named = HashMap::new();
            for binding in &inputs {
                let Some((name, path)) = binding.split_once('=') else {
                    return Err(CliError::Usage(format!("--input expects NAME=FILE, got {binding:?}")));
                };
                let ct: Ciphertext = load(Path::new(path))?;
                if named.insert(name.to_string(), ct).is_some() {
                    return Err(CliError::Usage(format!("input {name} given twice")));
                }
            }
            let result = eval_encrypted(&circuit, &circuit.bind_inputs(&named)?, &eval)?;
            emit(out.as_deref(), &result.encode(), stdout)
        }
        Command::Bench { profile, lambda, toy_p, toy_q, iterations, kv } => {
            let full = build_params(profile, lambda, toy_p.as_deref(), toy_q.as_deref(), &mut rng)?;
            let table = bench_run(&full, iterations, &mut rng)?;
            let text = if kv { table.to_key_values() } else { format!("{table}\n") };
            write_out(stdout, &text)
        }
        Command::Analyze { forgery_trials, kv } => {
            let reports = analysis_suite(forgery_trials, &mut rng)?;
            let mut text = String::new();
            for r in &reports {
                text.push_str(&if kv { r.to_key_values() } else { format!("{}\n", r.summary) });
            }
            if !kv {
                text.push_str("note: passing these statistical checks is necessary, not sufficient, for the underlying hardness assumptions\n");
            }
            write_out(stdout, &text)
        }
    }
}

struct SuiteEntry {
    summary: String,
    kv: String,
}

impl SuiteEntry {
    fn of<R: Report + std::fmt::Display>(r: &R) -> SuiteEntry {
        SuiteEntry { summary: r.to_string(), kv: r.to_key_values() }
    }

    fn to_key_values(&self) -> String {
        self.kv.clone()
    }
}

fn analysis_suite(forgery_trials: u64, rng: &mut ChaCha20Rng) -> Result<Vec<SuiteEntry>, CliError> {
    let mut out = vec![SuiteEntry::of(&masking_uniformity_exhaustive(257, 3)?)];

    let small = Params::toy(16, 251u32.into(), 241u32.into())?;
    out.push(SuiteEntry::of(&hidden_modulus_chisq(&small, 100_000, rng)?));
    out.push(SuiteEntry::of(&uniform_control_chisq(small.n(), 100_000, rng)?));

    let params = Params::toy(16, 10007u32.into(), 10009u32.into())?;
    let (sk, ek) = keygen(&params, rng)?;
    out.push(SuiteEntry::of(&cca_malleability_demo(&sk, &ek, &params, &3u32.into(), &7u32.into(), 100, rng)?));
    out.push(SuiteEntry::of(&kpa_underdetermination(5, &sk, &params, rng)?));
    out.push(SuiteEntry::of(&dual_binding_forgery_trial(&sk, &ek, &params, forgery_trials, TamperStrategy::RandomRule, rng)?));
    Ok(out)
}
