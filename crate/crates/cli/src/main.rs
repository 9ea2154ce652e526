use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use quadorder::driver::{emit, parse_config, run_analysis, OutputFormat};
use quadorder::{make_order, Element, FieldElement, Lab, QuadraticOrder};

#[derive(Parser)]
#[command(name = "quadorder", version, about = "Factorization laboratory for imaginary quadratic orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in a configuration file over its corpus.
    Analyze(AnalyzeArgs),
    /// Boundary of (x + y·ω)/den with respect to Z + f·O_K.
    Boundary(BoundaryArgs),
    /// Length set and factorizations of x + y·ω in Z + f·O_K.
    Factor(FactorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides norm_bound.
    #[arg(long)]
    bound: Option<u64>,
    /// Overrides the worker count.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// An order `Z + f·O_K` and an element `x + y·ω` of `O_K`.
#[derive(Args)]
struct Target {
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, default_value_t = 1)]
    f: i64,
    #[arg(long, allow_hyphen_values = true)]
    x: BigInt,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    y: BigInt,
}

#[derive(Args)]
struct BoundaryArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, default_value = "1")]
    den: BigInt,
    /// Norm bound for the half-factorial certificate of the order.
    #[arg(long, default_value_t = 10_000)]
    bound: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct FactorArgs {
    #[command(flatten)]
    target: Target,
    /// Largest norm the search may touch.
    #[arg(long, default_value_t = 1_000_000)]
    bound: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Boundary(b) => boundary(b).map(|()| 0),
        Command::Factor(f) => factor(f).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn analyze(args: AnalyzeArgs) -> Result<u8> {
    let source = std::fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read config {}", args.config.display()))?;
    let mut config = parse_config(&source).map_err(|e| anyhow!("{}: {e}", args.config.display()))?;
    if let Some(f) = args.format {
        config.format = f.into();
    }
    if let Some(b) = args.bound {
        if b < 2 {
            bail!("--bound must be at least 2");
        }
        config.norm_bound = b;
        config.sweep_bound = config.sweep_bound.min(b);
    }
    if let Some(j) = args.jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        config.jobs = j;
    }
    let report = run_analysis(&config);
    emit(&report, config.format, args.output.as_deref())?;
    Ok(report.exit_code() as u8)
}

fn resolve(t: &Target) -> Result<(QuadraticOrder, Element)> {
    let order = make_order(t.d, t.f)?;
    let x = Element::new(order.maximal_order(), t.x.clone(), t.y.clone());
    Ok((order, x))
}

fn boundary(args: BoundaryArgs) -> Result<()> {
    let (order, num) = resolve(&args.target)?;
    let k = FieldElement::new(&num, args.den.clone()).ok_or_else(|| anyhow!("element must be nonzero with nonzero denominator"))?;
    let lab = Lab::new(order, u64::MAX);
    let cert = lab.hfd_certify(args.bound)?;
    let value = lab.boundary(&cert, &k)?;
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "order": order.id(),
                "element": k.to_string(),
                "boundary": value.0,
                "certificate": cert.repr(),
            }))?
        ),
        _ => println!("boundary of {k} in {order}: {}", value.0),
    }
    Ok(())
}

fn factor(args: FactorArgs) -> Result<()> {
    let (order, x) = resolve(&args.target)?;
    let x = x.rebase(order).ok_or_else(|| anyhow!("{} + {}·ω is not in {order}", args.target.x, args.target.y))?;
    let lab = Lab::new(order, args.bound);
    let set = lab.factorizations(&x)?;
    match args.format {
        Format::Json => {
            let facts: Vec<Vec<String>> =
                set.factorizations.iter().map(|f| f.iter().map(ToString::to_string).collect()).collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "order": order.id(),
                    "element": x.to_string(),
                    "norm": x.norm().to_string(),
                    "lengths": set.lengths,
                    "factorizations": facts,
                }))?
            );
        }
        _ => {
            println!("{x} in {order}, norm {}", x.norm());
            println!("lengths: {:?}", set.lengths);
            for f in &set.factorizations {
                let parts: Vec<String> = f.iter().map(|p| format!("({p})")).collect();
                println!("  {}", parts.join(" · "));
            }
        }
    }
    Ok(())
}
