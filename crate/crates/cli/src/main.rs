//! `nctorus`: normal forms, traces and inner products of word literals,
//! basis construction, and verification runs with JSON or markdown reports.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nctorus_core::basis::{alpha1_family, alpha2_family, beta_family, complement_basis, s_l_generators_class, v_powers};
use nctorus_core::parse::parse_vector;
use nctorus_core::{ExactVector, Scalar, WordClass};
use nctorus_verify::{run_suite, CHECK_IDS};

use config::{Format, Overrides, TRUNCATION_CAP};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "nctorus", version, about = "Exact computation in the free product of two noncommutative tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a word or vector literal, e.g. `v1 u1` or `d * u1 + u1`.
    Nf { word: String },
    /// Trace of a vector expression, e.g. `1*<identity> + 2*u1` or `chi1*chi1`.
    Trace {
        #[arg(required_unless_present = "expr", conflicts_with = "expr")]
        vector: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        /// Also print the value at `d = e^{2πiθ}`.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Inner product `⟨x, y⟩ = τ(y* x)` of two vector expressions.
    Inner {
        x: String,
        y: String,
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Members of a basis family at word length `l`.
    Basis {
        l: usize,
        #[arg(long, value_enum, default_value_t = Family::Complement)]
        family: Family,
        #[arg(long, value_enum, default_value_t = Class::Zero)]
        class: Class,
        #[arg(long, value_enum, default_value_t = BasisFormat::Text)]
        format: BasisFormat,
        #[arg(long)]
        unsafe_truncation: bool,
    },
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Orthonormal basis of `W_l ⊖ S_l` in the chosen class.
    Complement,
    /// Spanning vectors of `S_l` in the chosen class.
    SGenerators,
    Alpha1,
    Alpha2,
    Beta,
    VPowers,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Zero,
    One,
    Two,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisFormat {
    Text,
    Json,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// TOML file with suite parameters and an optional `[output]` table.
    #[arg(long, env = "NCTORUS_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "NCTORUS_THETA")]
    theta: Option<f64>,
    #[arg(long, env = "NCTORUS_TRUNCATION")]
    truncation: Option<usize>,
    #[arg(long, env = "NCTORUS_SEED")]
    seed: Option<u64>,
    /// Largest l in the χ-recursion check.
    #[arg(long, env = "NCTORUS_LMAX")]
    lmax: Option<usize>,
    /// Check id to run; repeatable. Default: all.
    #[arg(long = "lemma", env = "NCTORUS_LEMMA", value_delimiter = ',')]
    lemmas: Vec<String>,
    #[arg(long, env = "NCTORUS_OUT")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, env = "NCTORUS_FORMAT")]
    format: Option<Format>,
    /// Drop the per-check wall-clock times from the report.
    #[arg(long)]
    no_timing: bool,
    /// Allow truncations above the cap.
    #[arg(long)]
    unsafe_truncation: bool,
    /// Print the available check ids and exit.
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn numeric(s: &Scalar, theta: Option<f64>) -> Result<(), String> {
    if let Some(t) = theta {
        let z = s.eval_numeric(t).map_err(|e| e.to_string())?;
        println!("{:.12} {} {:.12}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs());
    }
    Ok(())
}

fn vector(src: &str) -> Result<ExactVector, String> {
    parse_vector(src).map_err(|e| e.to_string())
}

fn run(cmd: Command) -> Result<u8, String> {
    match cmd {
        Command::Nf { word } => {
            println!("{}", vector(&word)?);
            Ok(0)
        }
        Command::Trace { vector: v, expr, theta } => {
            let src = v.or(expr).expect("clap requires one");
            let t = vector(&src)?.trace();
            println!("{t}");
            numeric(&t, theta)?;
            Ok(0)
        }
        Command::Inner { x, y, theta } => {
            let ip = vector(&x)?.inner(&vector(&y)?);
            println!("{ip}");
            numeric(&ip, theta)?;
            Ok(0)
        }
        Command::Basis {
            l,
            family,
            class,
            format,
            unsafe_truncation,
        } => {
            if l == 0 {
                return Err("l must be at least 1".into());
            }
            if l > TRUNCATION_CAP && !unsafe_truncation {
                return Err(format!(
                    "l = {l} exceeds the cap {TRUNCATION_CAP}; pass --unsafe-truncation to allow it"
                ));
            }
            let class = match class {
                Class::Zero => WordClass::Zero,
                Class::One => WordClass::One,
                Class::Two => WordClass::Two,
            };
            let members = match family {
                Family::Complement => complement_basis(l, class).members,
                Family::SGenerators => s_l_generators_class(l, class),
                Family::Alpha1 => alpha1_family(l).members,
                Family::Alpha2 => alpha2_family(l).members,
                Family::Beta => beta_family(l).members,
                Family::VPowers => v_powers(l),
            };
            match format {
                BasisFormat::Text => {
                    for m in &members {
                        println!("{m}");
                    }
                }
                BasisFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&members).map_err(|e| e.to_string())?);
                }
            }
            Ok(0)
        }
        Command::Verify(args) => verify(args),
    }
}

fn verify(a: VerifyArgs) -> Result<u8, String> {
    if a.list {
        for id in CHECK_IDS {
            println!("{id}");
        }
        return Ok(0);
    }
    let o = Overrides {
        theta: a.theta,
        truncation: a.truncation,
        seed: a.seed,
        lmax: a.lmax,
        lemmas: a.lemmas,
        out: a.out,
        format: a.format,
        no_timing: a.no_timing,
        unsafe_truncation: a.unsafe_truncation,
    };
    let rc = config::resolve(a.config.as_deref(), &o).map_err(|e| e.to_string())?;
    let report = run_suite(&rc.suite).map_err(|e| e.to_string())?;
    let text = match rc.format {
        Format::Json => report.to_json(rc.timing),
        Format::Markdown => report.to_markdown(),
    };
    let fails = report.entries.iter().filter(|e| e.is_hard_failure()).count();
    match &rc.out {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!(
                "{} checks, {} hard failures; report written to {}",
                report.entries.len(),
                fails,
                path.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(if report.passed() { 0 } else { EXIT_FAILED })
}
