use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use waring_cert::certify::certificate::stringify_numbers;
use waring_cert::certify::{certify, gamma_eval, stage_rng, verify_witness, CertifyConfig, GammaSystem, Instance};
use waring_cert::generators::{
    gen_elliptic_quintic_config, gen_example18, gen_general_instance, gen_nodisj17, gen_rational_quintic_config,
    GeneratorOutput,
};
use waring_cert::geometry::working_prime;
use waring_cert::io::{self, AnyInstance, AnyPoints};
use waring_cert::linalg::{Field, PrimeField, Rationals};
use waring_cert::pointconfig::{is_general_position, PointConfiguration};
use waring_cert::{Error, Result};

#[derive(Parser)]
#[command(name = "waring-cert", version, about = "Certify minimality and uniqueness of Waring decompositions of quaternary sextics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the certification pipeline on an instance file.
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// Certificate path; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Primes for the witness sweep.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        /// Random planes per base-locus test.
        #[arg(long, default_value_t = 8)]
        planes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hilbert function and its first differences.
    Hf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 7)]
        max_degree: usize,
    },
    /// Exhaustive general-position check.
    GpCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate an instance with known ground truth.
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Work over F_p instead of Q.
        #[arg(long)]
        p: Option<u64>,
        /// Number of points for `general`, `rat5` and `ell5`.
        #[arg(long)]
        length: Option<usize>,
        /// Points added off the curve for `nodisj17`.
        #[arg(long, default_value_t = 2)]
        extra: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the map from quartics through 18 points to sextics.
    GammaSample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a claimed second decomposition against an instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    General,
    Rat5,
    Ell5,
    Example18,
    Nodisj17,
}

const ELLIPTIC_DEFAULT_PRIME: u64 = 101;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_certify<F: Field>(inst: &Instance<F>, cfg: &CertifyConfig, out: Option<&Path>) -> Result<()> {
    let cert = certify(inst, cfg)?;
    eprintln!("status: {:?}{}", cert.status, cert.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default());
    emit(out, &cert.to_json())
}

fn hf<F: Field>(a: &PointConfiguration<F>, max_degree: usize) -> Value {
    let prof = a.hf_profile(max_degree);
    json!({ "length": a.len(), "h": prof.h, "dh": prof.dh })
}

fn gp<F: Field>(a: &PointConfiguration<F>) -> Value {
    serde_json::to_value(is_general_position(a)).expect("json")
}

fn gamma_samples<F: Field>(a: &PointConfiguration<F>, count: usize, seed: u64) -> Result<Value> {
    let f = a.field();
    let sys = GammaSystem::new(a)?;
    let mut rng = stage_rng(seed, 0);
    let check_prime = working_prime(f, &mut rng);
    let fmt = |v: &[F::Elem]| v.iter().map(|x| f.format(x)).collect::<Vec<_>>();
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let c: Vec<F::Elem> = (0..9).map(|_| f.random(&mut rng, 5)).collect();
        let entry = match gamma_eval(&sys, &c, check_prime)? {
            Ok(g) => json!({
                "w_coordinates": fmt(&c),
                "quartic": fmt(g.quartic.coeffs()),
                "coefficients": fmt(&g.coefficients),
                "sextic": fmt(&g.phi),
            }),
            Err(d) => json!({ "w_coordinates": fmt(&c), "degenerate": format!("{d:?}") }),
        };
        samples.push(entry);
    }
    Ok(json!({
        "field": f.descriptor().to_string(),
        "monomial_order": io::MONOMIAL_ORDER,
        "check_prime": check_prime.to_string(),
        "samples": samples,
    }))
}

fn verify<F: Field>(inst: &Instance<F>, witness: &str, seed: u64) -> Result<()> {
    let w = io::load_witness(inst.field(), witness)?;
    let v = verify_witness(inst, &w, seed)?;
    eprintln!("witness {}", if v.valid { "verified" } else { "rejected" });
    emit(None, &io::to_pretty(&stringify_numbers(serde_json::to_value(&v).expect("json"))))
}

fn write_generated<F: Field>(out: Result<GeneratorOutput<F>>, path: Option<&Path>) -> Result<()> {
    emit(path, &io::generator_output_json(&out?)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Certify { input, out, primes, planes, seed } => {
            let cfg = CertifyConfig { seed, primes, planes, ..Default::default() };
            match io::load_instance(&read(&input)?)? {
                AnyInstance::Rational(i) => run_certify(&i, &cfg, out.as_deref()),
                AnyInstance::Prime(i) => run_certify(&i, &cfg, out.as_deref()),
            }
        }
        Command::Hf { input, max_degree } => {
            let v = match io::load_points(&read(&input)?)? {
                AnyPoints::Rational(a) => hf(&a, max_degree),
                AnyPoints::Prime(a) => hf(&a, max_degree),
            };
            emit(None, &io::to_pretty(&stringify_numbers(v)))
        }
        Command::GpCheck { input } => {
            let v = match io::load_points(&read(&input)?)? {
                AnyPoints::Rational(a) => gp(&a),
                AnyPoints::Prime(a) => gp(&a),
            };
            emit(None, &io::to_pretty(&stringify_numbers(v)))
        }
        Command::Gen { kind, seed, p, length, extra, out } => {
            let out = out.as_deref();
            let fp = p.map(PrimeField::new).transpose()?;
            match kind {
                GenKind::General => {
                    let r = length.unwrap_or(17);
                    match fp {
                        Some(f) => write_generated(gen_general_instance(r, seed, &f), out),
                        None => write_generated(gen_general_instance(r, seed, &Rationals), out),
                    }
                }
                GenKind::Rat5 => {
                    let n = length.unwrap_or(15);
                    match fp {
                        Some(f) => write_generated(gen_rational_quintic_config(n, seed, &f), out),
                        None => write_generated(gen_rational_quintic_config(n, seed, &Rationals), out),
                    }
                }
                GenKind::Ell5 => {
                    let p = p.unwrap_or(ELLIPTIC_DEFAULT_PRIME);
                    write_generated(gen_elliptic_quintic_config(length.unwrap_or(15), p, seed), out)
                }
                GenKind::Example18 => match fp {
                    Some(f) => write_generated(gen_example18(seed, &f), out),
                    None => write_generated(gen_example18(seed, &Rationals), out),
                },
                GenKind::Nodisj17 => write_generated(gen_nodisj17(seed, p.unwrap_or(ELLIPTIC_DEFAULT_PRIME), extra), out),
            }
        }
        Command::GammaSample { input, count, seed, out } => {
            let v = match io::load_points(&read(&input)?)? {
                AnyPoints::Rational(a) => gamma_samples(&a, count, seed)?,
                AnyPoints::Prime(a) => gamma_samples(&a, count, seed)?,
            };
            emit(out.as_deref(), &io::to_pretty(&v))
        }
        Command::Verify { input, witness, seed } => {
            let w = read(&witness)?;
            match io::load_instance(&read(&input)?)? {
                AnyInstance::Rational(i) => verify(&i, &w, seed),
                AnyInstance::Prime(i) => verify(&i, &w, seed),
            }
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("WARING_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Error::Input(format!("WARING_THREADS={v:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Invariant(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let outcome = std::panic::catch_unwind(|| configure_threads().and_then(|_| run(cli)));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
        Err(_) => ExitCode::from(2),
    }
}
