use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use invcrypt::attacks::{
    attack_distinguish, build_conjugation_system, conjugation_bruteforce, transporter_bruteforce, WordStep,
};
use invcrypt::cryptosystem::{
    decrypt, encrypt, format_bits, keygen_with_vectors, parse_bits, separating_values, DEFAULT_GENERATORS,
    DEFAULT_WORD_LENGTH,
};
use invcrypt::gm::{gm_decrypt_bits, gm_encrypt_bits, gm_keygen, GmCiphertext, GmPublicKey, GmSecretKey};
use invcrypt::{
    Ciphertext, Document, Error, InvariantDescriptor, Partitions, PublicKey, SchemeId, SchemeParams, SecretKey, Vector,
};

#[derive(Parser)]
#[command(
    name = "invcrypt",
    version,
    about = "Invariant-based public-key encryption over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt a bit string.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext and print the bit string.
    Decrypt {
        #[arg(long = "sec")]
        sec: PathBuf,
        #[arg(long = "ct")]
        ct: PathBuf,
    },
    /// Recover the plaintext from public data with a degree-d invariant of the generators.
    AttackInvariant {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "ct")]
        ct: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Search generator words carrying v0 or v1 to each ciphertext block.
    AttackTransporter {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "ct")]
        ct: PathBuf,
        #[arg(long)]
        maxlen: usize,
    },
    /// Enumerate matrices b with w(b v) = w(b h_i v) for every public generator.
    AttackConjugation {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Generate a Goldwasser-Micali key pair from two primes.
    GmKeygen {
        #[arg(long)]
        p: BigUint,
        #[arg(long)]
        q: BigUint,
        #[arg(long)]
        seed: u64,
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "sec")]
        sec: PathBuf,
    },
    /// Encrypt a bit string under a Goldwasser-Micali public key.
    GmEncrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[command(flatten)]
        msg: MessageArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a Goldwasser-Micali ciphertext and print the bit string.
    GmDecrypt {
        #[arg(long = "sec")]
        sec: PathBuf,
        #[arg(long = "ct")]
        ct: PathBuf,
    },
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long, value_parser = ["ex1", "ex2", "ex3"])]
    scheme: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u64,
    /// Root-of-unity order (ex1).
    #[arg(long)]
    m: Option<u64>,
    /// Block partitions "I1;J1;I2;J2", one-based, e.g. "1,2;3,4;1,3;2,4" (ex3).
    #[arg(long)]
    partitions: Option<String>,
    #[arg(long, default_value_t = DEFAULT_GENERATORS)]
    gens: usize,
    #[arg(long, requires = "v1")]
    v0: Option<String>,
    #[arg(long, requires = "v0")]
    v1: Option<String>,
    #[arg(long)]
    seed: u64,
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long = "sec")]
    sec: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MessageArgs {
    /// Message as a string of '0' and '1'.
    #[arg(long)]
    msg: Option<String>,
    /// File holding the message bits.
    #[arg(long = "msg-file")]
    msg_file: Option<PathBuf>,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[command(flatten)]
    msg: MessageArgs,
    #[arg(long, default_value_t = DEFAULT_WORD_LENGTH)]
    wordlen: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Crypto(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Crypto(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Crypto(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Crypto(format!("cannot write {}: {e}", path.display())))
}

fn load<T: Document>(path: &Path) -> CliResult<T> {
    T::from_document(&read(path)?).map_err(|e| Failure::Crypto(format!("{}: {e}", path.display())))
}

fn message(args: &MessageArgs) -> CliResult<Vec<bool>> {
    let text = match (&args.msg, &args.msg_file) {
        (Some(m), _) => m.clone(),
        (None, Some(path)) => read(path)?,
        (None, None) => return Err(Failure::Usage("one of --msg or --msg-file is required".into())),
    };
    let bits = parse_bits(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    if bits.is_empty() {
        return Err(Failure::Usage("message is empty".into()));
    }
    Ok(bits)
}

fn csv_vector(text: &str, params: &SchemeParams, flag: &str) -> CliResult<Vector> {
    let entries = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("{flag}: '{t}' is not an integer")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Vector::from_i64(params.field, &entries)?)
}

fn scheme_params(args: &KeygenArgs) -> CliResult<SchemeParams> {
    let scheme: SchemeId = args.scheme.parse()?;
    let params = match scheme {
        SchemeId::Ex1 => {
            let m = args.m.ok_or_else(|| Failure::Usage("--m is required for ex1".into()))?;
            SchemeParams::ex1(args.n, args.p, m)?
        }
        SchemeId::Ex2 => SchemeParams::ex2(args.n, args.p)?,
        SchemeId::Ex3 => {
            let parts = args
                .partitions
                .as_deref()
                .map(|s| Partitions::parse(s, args.n))
                .transpose()?;
            SchemeParams::ex3(args.n, args.p, parts)?
        }
    };
    if args.m.is_some() && scheme != SchemeId::Ex1 {
        return Err(Failure::Usage("--m only applies to ex1".into()));
    }
    if args.partitions.is_some() && scheme != SchemeId::Ex3 {
        return Err(Failure::Usage("--partitions only applies to ex3".into()));
    }
    Ok(params)
}

fn describe_word(word: &[WordStep]) -> String {
    if word.is_empty() {
        return "(empty word)".into();
    }
    word.iter()
        .map(|s| format!("h{}{}", s.generator + 1, if s.inverse { "^-1" } else { "" }))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Keygen(args) => {
            let params = scheme_params(&args)?;
            let vectors = match (&args.v0, &args.v1) {
                (Some(a), Some(b)) => Some((csv_vector(a, &params, "--v0")?, csv_vector(b, &params, "--v1")?)),
                _ => None,
            };
            let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
            let (public, sec) = keygen_with_vectors(&params, args.gens, vectors, &mut rng)?;
            write(&args.public, &public.to_document())?;
            write(&args.sec, &sec.to_document())?;
        }
        Command::Encrypt(args) => {
            let public: PublicKey = load(&args.public)?;
            let bits = message(&args.msg)?;
            if args.wordlen == 0 {
                return Err(Failure::Usage("--wordlen must be at least 1".into()));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
            let ct = encrypt(&public, &bits, args.wordlen, &mut rng)?;
            write(&args.out, &ct.to_document())?;
        }
        Command::Decrypt { sec, ct } => {
            let sec: SecretKey = load(&sec)?;
            let ct: Ciphertext = load(&ct)?;
            println!("{}", format_bits(&decrypt(&sec, &ct)?));
        }
        Command::AttackInvariant { public, ct, degree } => {
            let public: PublicKey = load(&public)?;
            let ct: Ciphertext = load(&ct)?;
            match attack_distinguish(&public, &ct, degree) {
                Ok(bits) => println!("{}", format_bits(&bits)),
                Err(Error::NoSeparatingInvariant(_)) => {
                    println!("NoSeparatingInvariant");
                    return Err(Failure::Crypto(format!(
                        "no degree-{degree} invariant separates v0 from v1"
                    )));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::AttackTransporter { public, ct, maxlen } => {
            let public: PublicKey = load(&public)?;
            let ct: Ciphertext = load(&ct)?;
            ct.check_params(public.params())?;
            let mut recovered = String::new();
            let mut details = Vec::new();
            for (i, u) in ct.blocks().iter().enumerate() {
                match transporter_bruteforce(&public, u, maxlen)? {
                    Some(t) => {
                        recovered.push(if t.bit { '1' } else { '0' });
                        details.push(format!(
                            "block {i}: bit {} via {}",
                            u8::from(t.bit),
                            describe_word(&t.word)
                        ));
                    }
                    None => {
                        recovered.push('?');
                        details.push(format!("block {i}: NotFound"));
                    }
                }
            }
            println!("{recovered}");
            for line in details {
                println!("{line}");
            }
        }
        Command::AttackConjugation { public, degree } => {
            let public: PublicKey = load(&public)?;
            let desc = InvariantDescriptor::from(public.params());
            match desc.degree() {
                None => return Err(Error::RationalInvariantUnsupported.into()),
                Some(d) if d != degree => {
                    return Err(Failure::Crypto(format!(
                        "the {} invariant has degree {d}; --degree {degree} does not match",
                        public.params().scheme
                    )))
                }
                Some(_) => {}
            }
            let dim = public.params().ambient_dim();
            let system = build_conjugation_system(&public, &desc)?;
            let found = conjugation_bruteforce(&system, public.params().field, dim)?;
            println!("{} solutions", found.len());
            for b in &found {
                let separates = separating_values(&desc, b, public.v0(), public.v1())?.is_some();
                println!("{b} {}", if separates { "decrypts" } else { "does-not-separate" });
            }
        }
        Command::GmKeygen {
            p,
            q,
            seed,
            public,
            sec,
        } => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let (pk, sk) = gm_keygen(p, q, &mut rng)?;
            write(&public, &pk.to_document())?;
            write(&sec, &sk.to_document())?;
        }
        Command::GmEncrypt { public, msg, seed, out } => {
            let public: GmPublicKey = load(&public)?;
            let bits = message(&msg)?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let ct = gm_encrypt_bits(&bits, &public, &mut rng)?;
            write(&out, &ct.to_document())?;
        }
        Command::GmDecrypt { sec, ct } => {
            let sec: GmSecretKey = load(&sec)?;
            let ct: GmCiphertext = load(&ct)?;
            println!("{}", format_bits(&gm_decrypt_bits(&ct, &sec)?));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Crypto(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
