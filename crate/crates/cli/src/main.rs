//! `primset` – batch experiments on primitive sets.
//!
//! Exit codes: 0 on success, 1 when a verification or invariant check fails,
//! 2 on invalid input or configuration.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{parse_count, parse_prime_list, ExperimentConfig, LSpecConfig, PrimeList};

#[derive(Parser)]
#[command(
    name = "primset",
    version,
    about = "Primitive sets, Omega sieves and Erdős sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for segment-parallel work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Sieve segment length.
    #[arg(long, global = true, value_parser = parse_count, default_value = "4194304")]
    segment_size: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum LKind {
    PowerOfLog,
    IteratedLogProduct,
    CustomTable,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    #[value(alias = "greedy-ascending")]
    Greedy,
    DyadicBlock,
}

#[derive(Args)]
struct LArgs {
    #[arg(long = "L", value_enum, default_value_t = LKind::PowerOfLog)]
    kind: LKind,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// CSV of `x,L` nodes for a custom table.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact σ_j(x) against the main terms H_j(x).
    Sigma {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        /// Defaults to ⌊1.5 log log x⌋.
        #[arg(long)]
        jmax: Option<u32>,
    },
    /// Counts of the constructed set with its primitivity certificate.
    Construct {
        #[command(flatten)]
        l: LArgs,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        /// Prime-sequence terms to compute.
        #[arg(long = "K", value_parser = parse_count, default_value = "10000")]
        k: u64,
        #[arg(long, hide = true)]
        inject_violation: bool,
        #[arg(long, hide = true, value_parser = parse_prime_list)]
        test_sequence: Option<PrimeList>,
    },
    /// Block sums of A, primitive-subset extraction and odd-part checks.
    Theorem2 {
        #[arg(long, default_value_t = 4)]
        blocks: u32,
        #[arg(long, value_enum)]
        extract: Option<Strategy>,
        /// Extraction bound.
        #[arg(long, value_parser = parse_count, default_value = "65536")]
        x: u64,
        /// Random primitive subsets of A to run the odd-part checks on.
        #[arg(long)]
        random_subsets: Option<usize>,
    },
    /// Primitivity and Erdős sum of a newline-delimited integer file.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// The certified prime sequence as `k,p_k`.
    Primeseq {
        #[command(flatten)]
        l: LArgs,
        #[arg(long = "K", value_parser = parse_count, default_value = "10000")]
        k: u64,
    },
}

impl LArgs {
    fn config(&self) -> LSpecConfig {
        LSpecConfig {
            kind: match self.kind {
                LKind::PowerOfLog => "power-of-log",
                LKind::IteratedLogProduct => "iterated-log-product",
                LKind::CustomTable => "custom-table",
            }
            .into(),
            ell: self.ell,
            epsilon: self.epsilon,
            table_path: self.table.as_ref().map(|p| p.display().to_string()),
        }
    }
}

fn resolve(cli: &Cli) -> ExperimentConfig {
    let c = &cli.common;
    let mut cfg = ExperimentConfig {
        out: c.out.as_ref().map(|p| p.display().to_string()),
        format: match c.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
        .into(),
        segment_size: c.segment_size as usize,
        threads: c.threads,
        seed: c.seed,
        ..Default::default()
    };
    match &cli.command {
        Command::Sigma { x, jmax } => {
            cfg.command = "sigma".into();
            cfg.x = Some(*x);
            cfg.jmax = *jmax;
        }
        Command::Construct {
            l,
            x,
            k,
            inject_violation,
            test_sequence,
        } => {
            cfg.command = "construct".into();
            cfg.x = Some(*x);
            cfg.k = Some(*k as usize);
            cfg.lspec = Some(l.config());
            cfg.inject_violation = *inject_violation;
            cfg.test_sequence = test_sequence.as_ref().map(|p| p.0.clone());
        }
        Command::Theorem2 {
            blocks,
            extract,
            x,
            random_subsets,
        } => {
            cfg.command = "theorem2".into();
            cfg.blocks = Some(*blocks);
            cfg.strategy = extract.map(|s| {
                match s {
                    Strategy::Greedy => "greedy-ascending",
                    Strategy::DyadicBlock => "dyadic-block",
                }
                .into()
            });
            cfg.x = extract.map(|_| *x);
            cfg.random_subsets = *random_subsets;
        }
        Command::Verify { file } => {
            cfg.command = "verify".into();
            cfg.file = Some(file.display().to_string());
        }
        Command::Primeseq { l, k } => {
            cfg.command = "primeseq".into();
            cfg.k = Some(*k as usize);
            cfg.lspec = Some(l.config());
        }
    }
    cfg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = resolve(&cli);
    if let Some(n) = cfg.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let output = match commands::run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
    };
    let text = match cfg.format.as_str() {
        "json" => output.render_json(&cfg),
        _ => output.render_csv(&cfg),
    };
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    match output.failure {
        Some(msg) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
