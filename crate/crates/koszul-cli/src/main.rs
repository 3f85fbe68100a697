//! Command line front end: runs verification suites described by config
//! files, renders stored certificates, and lists the available checks.
//!
//! Exit codes: 0 when every selected check passes, 1 when the certificate
//! reports FAIL, 2 for configuration or usage errors.

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use koszul::config::{parse_config, CheckSelection, OutputFormat, RunConfig};
use koszul::suite::{run_all, Certificate, CheckId, RunOptions};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "koszul", version, about = "Exact verifier for Koszul homology towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks described by a config file and emit a certificate.
    Verify(VerifyArgs),
    /// Render a stored JSON certificate as text.
    Report {
        /// Path to a certificate produced by `verify`.
        #[arg(long)]
        cert: PathBuf,
    },
    /// List every check id with a one-line description.
    ListChecks,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run configuration, flat key-value or JSON.
    #[arg(long)]
    config: PathBuf,
    /// Run only this check; repeatable, overrides the config selection.
    #[arg(long = "check", value_name = "ID")]
    checks: Vec<CheckId>,
    /// Override the tower height from the config.
    #[arg(long)]
    s_max: Option<usize>,
    /// Override the internal degree bound from the config.
    #[arg(long)]
    degree_max: Option<usize>,
    /// Override the sampling seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 keeps the machine default.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Certificate format, `json` or `text`; overrides the config.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Write the certificate here instead of stdout; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock milliseconds per check.  Costs byte-for-byte
    /// reproducibility of the certificate.
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Report { cert } => {
            let text = std::fs::read_to_string(&cert)
                .with_context(|| format!("cannot read {}", cert.display()))?;
            let parsed: Certificate = serde_json::from_str(&text)
                .with_context(|| format!("{} is not a certificate", cert.display()))?;
            print!("{}", parsed.render_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::ListChecks => {
            for id in CheckId::ALL {
                println!("{:<18} {}", id.name(), id.description());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    let mut cfg: RunConfig = parse_config(&text)?;

    if !args.checks.is_empty() {
        cfg.checks = CheckSelection::Chosen(args.checks.clone());
    }
    if let Some(s) = args.s_max {
        cfg.s_max = s;
    }
    if let Some(d) = args.degree_max {
        cfg.degree_max = d;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    if let Some(path) = &args.out {
        cfg.out = Some(path.display().to_string());
    }

    let ctx = cfg.context()?;
    // Overrides bypass the config parser's bound checks; repeat them here.
    if cfg.s_max < 1 {
        anyhow::bail!("VALIDATION_ERROR: s_max must be at least 1");
    }
    if cfg.degree_max < ctx.max_seq_degree() {
        anyhow::bail!(
            "VALIDATION_ERROR: degree_max {} is below the top sequence degree {}",
            cfg.degree_max,
            ctx.max_seq_degree()
        );
    }
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .context("cannot size the thread pool")?;
    }

    let opts = RunOptions { parallel: true, timings: args.timings };
    let selection = cfg.checks.expand();
    let cert = run_all(&ctx, cfg.s_max, cfg.degree_max, cfg.seed, &selection, &opts);

    let rendered = match cfg.format {
        OutputFormat::Json => cert.to_json(),
        OutputFormat::Text => cert.render_text(),
    };
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &rendered)
                .with_context(|| format!("cannot write {path}"))?;
            print!("{}", cert.render_text());
            println!("certificate written to {path}");
        }
        None => print!("{rendered}"),
    }

    Ok(if cert.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
