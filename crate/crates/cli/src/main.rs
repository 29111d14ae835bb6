use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use identkit_core::bounds::{growth_schedule, optimality_check, plan_example};
use identkit_core::experiments::{
    brute_force_min_distance, estimate_lambda2, seed_sweep, vg_sample, Pairing, SeedSweep,
    TrialConfig, TrialMode,
};
use identkit_core::identify_code::CodeSpec;
use identkit_core::identify_prng::{lfsr_attack, Generator, GeneratorKind, LfsrSpec, PrngScheme};
use identkit_core::wire_net::{self, CallOptions, CallOutcome, Registry, Responder};
use identkit_core::{Field, Message, Scheme, Verdict};

const EXIT_REJECT: u8 = 1;
const EXIT_RUNTIME: u8 = 3;

/// Short-word identification over GF(2^m): parameter planning, word
/// generation and checking, simulations and a UDP demo.
#[derive(Parser)]
#[command(name = "identkit", version)]
struct Cli {
    /// Master randomness seed, hex (up to 16 digits).
    #[arg(long, global = true, value_parser = parse_seed)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Kv,
}

#[derive(Subcommand)]
enum Command {
    /// Derive code parameters, false-accept bound and word length.
    Plan(PlanArgs),
    /// Produce an encoded identification word for a message.
    Send {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        message: MessageArgs,
    },
    /// Check an encoded word against an expected message.
    Verify {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        message: MessageArgs,
        /// Encoded word, hex.
        #[arg(long)]
        word: String,
    },
    /// Estimate false acceptance, code distance or the distance guarantee.
    Simulate(SimulateArgs),
    /// Build the message pair that defeats an LFSR-driven scheme and sweep seeds.
    AttackLfsr(AttackArgs),
    /// Answer identification calls on a UDP endpoint.
    Serve {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        message: MessageArgs,
        /// Address to bind, host:port.
        #[arg(long, default_value = "127.0.0.1:7878")]
        endpoint: String,
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Send one identification call and wait for the verdict.
    Call {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        message: MessageArgs,
        #[arg(long)]
        endpoint: String,
        #[arg(long, default_value_t = 1000)]
        timeout_ms: u64,
        /// Extra attempts after a timeout, each with a fresh word.
        #[arg(long, default_value_t = 0)]
        retries: u32,
    },
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    /// 1 - delta = 1 / DELTA_INV.
    #[arg(long, conflicts_with = "delta")]
    delta_inv: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    /// eps = 2^EPS_EXP.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "eps")]
    eps_exp: Option<i32>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1)]
    ell: u32,
    /// Show how rate ratios move along a fixed growing schedule instead.
    #[arg(long, conflicts_with_all = ["q", "n"])]
    trend: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeKind {
    Code,
    Prng,
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long, value_enum, default_value_t = SchemeKind::Code)]
    scheme: SchemeKind,
    /// Field width: symbols live in GF(2^m).
    #[arg(long)]
    m: u8,
    /// Message length in symbols.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Code length (code scheme).
    #[arg(long)]
    n: Option<u32>,
    /// Code key, hex (code scheme).
    #[arg(long)]
    key: Option<String>,
    /// Seed length in symbols (PRNG scheme).
    #[arg(long)]
    mu: Option<usize>,
    /// nonlinear-default or lfsr.
    #[arg(long, default_value = "nonlinear-default")]
    generator: String,
    /// LFSR taps a_1..a_mu, comma separated.
    #[arg(long, value_delimiter = ',')]
    a: Vec<u16>,
}

impl SchemeArgs {
    fn field(&self) -> Result<Field> {
        Ok(Field::new(self.m)?)
    }

    fn k(&self) -> Result<usize> {
        self.k.context("--k is required")
    }

    fn build(&self) -> Result<Scheme> {
        let field = self.field()?;
        let k = self.k()?;
        Ok(match self.scheme {
            SchemeKind::Code => {
                let n = self.n.context("--n is required for the code scheme")?;
                let key = hex::decode(
                    self.key
                        .as_deref()
                        .context("--key is required for the code scheme")?,
                )
                .context("--key is not valid hex")?;
                Scheme::Code {
                    spec: CodeSpec::new(field, k, n, key)?,
                    ell: self.ell,
                }
            }
            SchemeKind::Prng => {
                let (generator, mu) = match self.generator.parse::<GeneratorKind>()? {
                    GeneratorKind::NonlinearDefault => (
                        Generator::NonlinearDefault,
                        self.mu.context("--mu is required")?,
                    ),
                    GeneratorKind::Lfsr => {
                        let spec = LfsrSpec::new(field, self.a.clone())?;
                        let mu = self.mu.unwrap_or(spec.mu());
                        (Generator::Lfsr(spec), mu)
                    }
                };
                Scheme::Prng(PrngScheme::new(field, k, self.ell, mu, generator)?)
            }
        })
    }
}

#[derive(Args)]
struct MessageArgs {
    /// Message as packed m-bit symbols, hex.
    #[arg(long, conflicts_with = "registry")]
    message: Option<String>,
    /// Registry file of `label hex` lines.
    #[arg(long, requires = "label")]
    registry: Option<PathBuf>,
    #[arg(long)]
    label: Option<String>,
}

impl MessageArgs {
    fn resolve(&self, field: Field, k: usize) -> Result<Message> {
        if let Some(hex) = &self.message {
            return Ok(Message::from_hex(field, k, hex)?);
        }
        let (Some(path), Some(label)) = (&self.registry, &self.label) else {
            bail!("give --message or --registry with --label");
        };
        let reg = Registry::load(path, field, k)
            .with_context(|| format!("reading registry {}", path.display()))?;
        reg.get(label)
            .cloned()
            .with_context(|| format!("label {label:?} not in registry"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Lambda2,
    MinDistance,
    VgSample,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = Experiment::Lambda2)]
    experiment: Experiment,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// random-pairs or worst-pair-exhaustive.
    #[arg(long, default_value = "random-pairs")]
    mode: String,
    /// Send and expect the same message.
    #[arg(long)]
    identical: bool,
    /// Target relative distance (vg-sample).
    #[arg(long)]
    delta: Option<f64>,
    /// Rate slack (vg-sample).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 200)]
    samples: u64,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    m: u8,
    #[arg(long)]
    mu: usize,
    /// Taps a_1..a_mu, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u16>,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// `all` or a number of random seeds.
    #[arg(long, default_value = "all")]
    seeds: String,
    /// Run the same pair against the nonlinear generator instead.
    #[arg(long)]
    nonlinear: bool,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim_start_matches("0x");
    if s.is_empty() || s.len() > 16 {
        return Err("expected 1 to 16 hex digits".into());
    }
    u64::from_str_radix(s, 16).map_err(|e| e.to_string())
}

fn master_seed(given: Option<u64>) -> u64 {
    given.unwrap_or_else(|| {
        let s = rand::rng().random();
        eprintln!("no --seed given; using system entropy (seed {s:x})");
        s
    })
}

fn verdict_exit(accept: bool) -> ExitCode {
    if accept {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_REJECT)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let kv = cli.output == Output::Kv;
    match cli.cmd {
        Command::Plan(p) => plan(p, kv)?,
        Command::Send { scheme, message } => {
            let s = scheme.build()?;
            let u = message.resolve(s.field(), s.k())?;
            let mut rng = ChaCha20Rng::seed_from_u64(master_seed(cli.seed));
            let word = wire_net::wrap(&s, s.send(&u, &mut rng)?)?;
            let bytes = wire_net::encode_word(&word)?;
            if kv {
                println!("word={}", hex::encode(&bytes));
                println!("bytes={}", bytes.len());
                println!("payload_bits={}", word.payload_bits());
            } else {
                println!("{}", hex::encode(&bytes));
                eprintln!("{word}");
            }
        }
        Command::Verify {
            scheme,
            message,
            word,
        } => {
            let s = scheme.build()?;
            let u = message.resolve(s.field(), s.k())?;
            let bytes = hex::decode(word.trim()).context("--word is not valid hex")?;
            let verdict = match wire_net::decode_word(&bytes) {
                Ok(w) => wire_net::verify_wire(&s, &u, w),
                Err(e) => {
                    eprintln!("undecodable word: {e}");
                    if kv {
                        println!("verdict=reject\nreason=malformed");
                    } else {
                        println!("REJECT (malformed: {e})");
                    }
                    return Ok(ExitCode::from(EXIT_REJECT));
                }
            };
            if kv {
                match &verdict {
                    Verdict::Accept => println!("verdict=accept"),
                    Verdict::Reject(r) => println!("verdict=reject\nreason={r:?}"),
                }
            } else {
                println!("{verdict}");
            }
            return Ok(verdict_exit(verdict.is_accept()));
        }
        Command::Simulate(a) => simulate(a, cli.seed, kv)?,
        Command::AttackLfsr(a) => attack(a, cli.seed, kv)?,
        Command::Serve {
            scheme,
            message,
            endpoint,
            workers,
        } => {
            let s = scheme.build()?;
            let u = message.resolve(s.field(), s.k())?;
            let handle = wire_net::serve(Responder::new(s, u)?, &endpoint, workers)
                .with_context(|| format!("binding {endpoint}"))?;
            eprintln!("listening on {}", handle.local_addr());
            handle.join();
        }
        Command::Call {
            scheme,
            message,
            endpoint,
            timeout_ms,
            retries,
        } => {
            let s = scheme.build()?;
            let u = message.resolve(s.field(), s.k())?;
            let mut rng = ChaCha20Rng::seed_from_u64(master_seed(cli.seed));
            let opts = CallOptions {
                timeout: Duration::from_millis(timeout_ms),
                retries,
            };
            let out = wire_net::call(endpoint.as_str(), &s, &u, &mut rng, opts)?;
            if kv {
                let v = match out {
                    CallOutcome::Accept => "accept".to_string(),
                    CallOutcome::Reject(r) => format!("reject\nreason={}", r.name()),
                    CallOutcome::Timeout => "timeout".to_string(),
                };
                println!("outcome={v}");
            } else {
                println!("{out}");
            }
            return Ok(verdict_exit(out == CallOutcome::Accept));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn plan(p: PlanArgs, kv: bool) -> Result<()> {
    if p.trend {
        let report = optimality_check(&growth_schedule()?)?;
        print!("{report}");
        return Ok(());
    }
    let q = p.q.context("--q is required")?;
    let n = p.n.context("--n is required")?;
    let delta = match (p.delta_inv, p.delta) {
        (Some(inv), _) if inv >= 1 => 1.0 - 1.0 / inv as f64,
        (Some(_), _) => bail!("--delta-inv must be at least 1"),
        (None, Some(d)) => d,
        (None, None) => bail!("give --delta-inv or --delta"),
    };
    let eps = match (p.eps_exp, p.eps) {
        (Some(e), _) => 2f64.powi(e),
        (None, Some(e)) => e,
        (None, None) => bail!("give --eps-exp or --eps"),
    };
    let params = plan_example(q, n, delta, eps, p.ell)?;
    if kv {
        print!("{}", params.to_kv());
    } else {
        print!("{params}");
    }
    Ok(())
}

fn simulate(a: SimulateArgs, seed: Option<u64>, kv: bool) -> Result<()> {
    match a.experiment {
        Experiment::Lambda2 => {
            let scheme = a.scheme.build()?;
            let mode: TrialMode = a.mode.parse()?;
            let cfg = TrialConfig {
                scheme,
                trials: a.trials,
                seed: match mode {
                    TrialMode::RandomPairs => master_seed(seed),
                    TrialMode::WorstPairExhaustive => 0,
                },
                mode,
                pairing: if a.identical {
                    Pairing::Identical
                } else {
                    Pairing::Distinct
                },
            };
            let r = estimate_lambda2(&cfg)?;
            if kv {
                print!("{}", r.to_kv());
            } else {
                print!("{r}");
            }
        }
        Experiment::MinDistance => {
            let Scheme::Code { spec, .. } = a.scheme.build()? else {
                bail!("min-distance needs --scheme code");
            };
            let d = brute_force_min_distance(&spec)?;
            if kv {
                println!("distance={}\ndegenerate={}", d.distance, d.degenerate);
            } else {
                println!(
                    "minimum distance {}{}",
                    d.distance,
                    if d.degenerate { " (degenerate)" } else { "" }
                );
            }
        }
        Experiment::VgSample => {
            let field = a.scheme.field()?;
            let n = a.scheme.n.context("--n is required")?;
            let delta = a.delta.context("--delta is required")?;
            let eps = a.eps.context("--eps is required")?;
            let r = vg_sample(field, n, delta, eps, a.samples, master_seed(seed))?;
            if kv {
                print!("{}", r.to_kv());
            } else {
                print!("{r}");
            }
        }
    }
    Ok(())
}

fn attack(a: AttackArgs, seed: Option<u64>, kv: bool) -> Result<()> {
    let field = Field::new(a.m)?;
    if a.a.len() != a.mu {
        bail!("--a lists {} taps but --mu is {}", a.a.len(), a.mu);
    }
    let lfsr = LfsrSpec::new(field, a.a)?;
    let (sent, expected) = lfsr_attack(&lfsr, a.k)?;
    let sweep: SeedSweep = a.seeds.parse()?;
    let generator = if a.nonlinear {
        Generator::NonlinearDefault
    } else {
        Generator::Lfsr(lfsr)
    };
    let scheme = PrngScheme::new(field, a.k, a.ell, a.mu, generator)?;
    let master = match sweep {
        SeedSweep::All => 0,
        SeedSweep::Random(_) => master_seed(seed),
    };
    let r = seed_sweep(&scheme, &sent, &expected, sweep, master)?;
    if kv {
        println!("sent={}", sent.to_hex());
        println!("expected={}", expected.to_hex());
        println!("accepted={}", r.accepted);
        println!("seeds={}", r.seeds);
        println!("lambda2={}", r.rate());
    } else {
        eprintln!("sent {sent}, expected {expected}");
        println!("{r}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
