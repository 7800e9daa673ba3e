//! `singclass` — exact invariants and ADE classification of hypersurface
//! singularities from the command line.
//!
//! One verb per analysis: `invariants`, `determinacy`, `split`,
//! `classify`, `univariate`, `deform-scan`, `oracle`, `parse`.  Every
//! subcommand reads a polynomial (positional argument or `--file` with
//! one polynomial per line), works over Q (`--char 0`, the default) or
//! a prime field (`--char p`), and prints either text or, with
//! `--json`, a stable schema-tagged JSON document.  Batch input always
//! emits JSON lines, in input order.
//!
//! Exit codes: 0 success, 1 input error, 2 when a required quantity
//! could not be certified finite at the truncation cap, 3 internal
//! error.

mod report;

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use report::{Ctx, Report};
use singclass::{parse_polynomial, Error, FieldSpec, Polynomial, DEFAULT_CAP};

#[derive(Parser)]
#[command(
    name = "singclass",
    version,
    about = "Exact invariants, splitting, unfoldings and ADE classification of hypersurface singularity germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputOpts {
    /// Field characteristic: 0 for the rationals, otherwise a prime.
    #[arg(long = "char", value_name = "0|p", default_value_t = 0)]
    characteristic: u64,

    /// Comma-separated variable names, e.g. `x,y`; the count fixes the
    /// ambient ring.
    #[arg(long, value_name = "NAMES")]
    vars: String,

    /// Truncation cap for adaptive jet bounds.  Defaults to 64, or to
    /// the SINGCLASS_MAX_BOUND environment variable when set.
    #[arg(long, value_name = "N")]
    truncate: Option<u32>,

    /// Emit a JSON document instead of text.
    #[arg(long)]
    json: bool,

    /// Read polynomials from a file (`-` for stdin), one per line;
    /// blank lines and `#` comments are skipped and output is one JSON
    /// line per input line, in order.
    #[arg(long, value_name = "PATH", conflicts_with = "poly")]
    file: Option<PathBuf>,

    /// The polynomial to analyze.
    #[arg(value_name = "POLY", required_unless_present = "file")]
    poly: Option<String>,
}

#[derive(Args)]
struct OracleOpts {
    /// Prime characteristic; 2 and 3 are the intended scales.
    #[arg(long = "char", value_name = "p")]
    characteristic: u64,

    /// Comma-separated variable names; their count sets the arity.
    #[arg(long, value_name = "NAMES")]
    vars: String,

    /// Jet level k: jets carry the monomials of degree 2..=k.
    #[arg(long, value_name = "K")]
    jet: u32,

    /// Decompose under the contact action instead of the right action.
    #[arg(long)]
    contact: bool,

    /// Accepted for symmetry; oracle fixtures are always JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Order, Milnor and Tjurina numbers, and Hessian rank/corank.
    Invariants(InputOpts),
    /// Certified determinacy bounds for right and contact equivalence.
    Determinacy(InputOpts),
    /// Split off the nondegenerate quadratic part of the germ.
    Split(InputOpts),
    /// Full report with contact and right simple-singularity labels.
    Classify(InputOpts),
    /// Fine right-equivalence analysis of one-variable germs over F_p.
    Univariate(InputOpts),
    /// Semiuniversal unfolding plus a random semicontinuity scan.
    DeformScan {
        #[command(flatten)]
        input: InputOpts,
        /// Number of random parameter points to sample.
        #[arg(long, value_name = "N", default_value_t = 100)]
        samples: u64,
        /// RNG seed; identical seeds give byte-identical output.
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive jet-orbit fixtures over tiny prime fields.
    Oracle(OracleOpts),
    /// Validate a polynomial and echo its canonical form.
    Parse(InputOpts),
}

fn main() {
    let code = match std::panic::catch_unwind(run) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("singclass: internal error");
            3
        }
    };
    std::process::exit(code);
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            return if is_usage_error { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("singclass: {err}");
            exit_code_for(&err)
        }
    }
}

/// 2 when finiteness was required but could not be certified at the
/// cap; 1 for every other (input) error.
fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotIsolated(_) | Error::QNotFoundUpTo(_) | Error::BoundTooSmall { .. } => 2,
        _ => 1,
    }
}

fn parse_vars(spec: &str) -> Result<Vec<String>, Error> {
    let vars: Vec<String> = spec
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if vars.is_empty() {
        return Err(Error::InvalidInput("--vars names no variables".into()));
    }
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
        }
    }
    Ok(vars)
}

fn resolve_cap(truncate: Option<u32>) -> u32 {
    truncate.unwrap_or_else(|| {
        std::env::var("SINGCLASS_MAX_BOUND")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_CAP)
    })
}

fn make_ctx(opts: &InputOpts) -> Result<Ctx, Error> {
    let field = if opts.characteristic == 0 {
        FieldSpec::RATIONALS
    } else {
        FieldSpec::prime(opts.characteristic)?
    };
    Ok(Ctx {
        field,
        vars: parse_vars(&opts.vars)?,
        cap: resolve_cap(opts.truncate),
    })
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Invariants(o) => run_poly(&o, &report::invariants_report),
        Command::Determinacy(o) => run_poly(&o, &report::determinacy_report),
        Command::Split(o) => run_poly(&o, &report::split_report),
        Command::Classify(o) => run_poly(&o, &report::classify_report),
        Command::Univariate(o) => run_poly(&o, &report::univariate_report),
        Command::Parse(o) => run_poly(&o, &report::parse_report),
        Command::DeformScan {
            input,
            samples,
            seed,
        } => run_poly(&input, &move |ctx: &Ctx, f: &Polynomial| {
            report::deform_scan_report(ctx, f, samples, seed)
        }),
        Command::Oracle(o) => {
            let vars = parse_vars(&o.vars)?;
            let r = report::oracle_report(o.characteristic, vars.len(), o.jet, o.contact, &vars)?;
            println!("{}", serde_json::to_string(&r.json).expect("serializable"));
            Ok(0)
        }
    }
}

fn run_poly(
    opts: &InputOpts,
    analyze: &dyn Fn(&Ctx, &Polynomial) -> Result<Report, Error>,
) -> Result<i32, Error> {
    let ctx = make_ctx(opts)?;
    match (&opts.poly, &opts.file) {
        (Some(src), None) => {
            let f = parse_polynomial(src, ctx.field, &ctx.vars)?;
            let r = analyze(&ctx, &f)?;
            if opts.json {
                println!("{}", serde_json::to_string(&r.json).expect("serializable"));
            } else {
                println!("{}", r.text);
            }
            Ok(0)
        }
        (None, Some(path)) => run_batch(&ctx, path, analyze),
        _ => unreachable!("clap enforces exactly one input source"),
    }
}

/// Batch mode: one polynomial per line, one JSON line per polynomial,
/// in input order.  Lines that fail are reported as JSON error objects
/// and the worst exit code wins.
fn run_batch(
    ctx: &Ctx,
    path: &PathBuf,
    analyze: &dyn Fn(&Ctx, &Polynomial) -> Result<Report, Error>,
) -> Result<i32, Error> {
    let content = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?
    };
    let mut worst = 0;
    for (lineno, line) in content.lines().enumerate() {
        let src = line.trim();
        if src.is_empty() || src.starts_with('#') {
            continue;
        }
        let outcome = parse_polynomial(src, ctx.field, &ctx.vars)
            .and_then(|f| analyze(ctx, &f));
        match outcome {
            Ok(r) => println!("{}", serde_json::to_string(&r.json).expect("serializable")),
            Err(err) => {
                let code = exit_code_for(&err);
                worst = worst.max(code);
                let doc = json!({
                    "schema": report::SCHEMA,
                    "line": lineno + 1,
                    "input": src,
                    "error": err.to_string(),
                    "exit_code": code,
                });
                println!("{}", serde_json::to_string(&doc).expect("serializable"));
            }
        }
    }
    Ok(worst)
}
