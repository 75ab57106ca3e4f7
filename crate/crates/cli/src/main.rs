use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fpconv::datasets::{self, DEFAULT_SEED};
use fpconv::harness::{self, Algorithm, Checks, Scope};
use fpconv::render::render_decoded;
use fpconv::{decode, parse_exact, significant_digits, FloatFormat, RenderPolicy};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "fpconv", version, about = "Shortest float-to-decimal conversion toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert one decimal literal and print it back out.
    Convert {
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[arg(long, value_enum, default_value_t = FormatArg::F64)]
        format: FormatArg,
        #[arg(long, value_enum, default_value_t = AlgoArg::Fastpath)]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::Minimal)]
        policy: PolicyArg,
    },
    /// Time every algorithm under every policy on a dataset.
    Bench {
        /// `unit`, `unit:N`, or a `.f32le`/`.f64le`/text file.
        #[arg(long)]
        data: String,
        #[arg(long, default_value_t = 100)]
        repeats: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check converters against the exact oracles.
    Verify {
        /// `binary32 exhaustive-strata` or `<binary32|binary64> random <N> [seed=S]`.
        #[arg(long)]
        scope: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    F32,
    F64,
}

impl FormatArg {
    fn format(self) -> FloatFormat {
        match self {
            FormatArg::F32 => FloatFormat::BINARY32,
            FormatArg::F64 => FloatFormat::BINARY64,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Dragon2,
    Dragon4,
    #[value(name = "dragon4-fast")]
    Dragon4Fast,
    Fastpath,
}

impl AlgoArg {
    fn algorithm(self) -> Algorithm {
        match self {
            AlgoArg::Dragon2 => Algorithm::Dragon2,
            AlgoArg::Dragon4 => Algorithm::Dragon4,
            AlgoArg::Dragon4Fast => Algorithm::Dragon4Fast,
            AlgoArg::Fastpath => Algorithm::Fastpath,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    C,
    Minimal,
    Sci,
}

impl PolicyArg {
    fn policy(self) -> RenderPolicy {
        match self {
            PolicyArg::C => RenderPolicy::CStyle,
            PolicyArg::Minimal => RenderPolicy::MinimalLength,
            PolicyArg::Sci => RenderPolicy::ScientificAlways,
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("fpconv: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn convert(value: &str, format: FloatFormat, algorithm: Algorithm, policy: RenderPolicy) -> ExitCode {
    let bits = match parse_exact(value, format) {
        Ok(bits) => bits,
        Err(e) => return usage_error(e),
    };
    let d = decode(bits, format);
    if !d.is_finite() {
        let dec = fpconv::DecimalFP::zero(d.sign);
        println!("{}", render_decoded(&d, &dec, policy));
        return ExitCode::SUCCESS;
    }
    let dec = match algorithm.convert(&d) {
        Ok(dec) => dec,
        Err(e) => return usage_error(e),
    };
    println!("{}", render_decoded(&d, &dec, policy));
    println!("w={} q={} digits={}", dec.w, dec.q, significant_digits(&dec));
    ExitCode::SUCCESS
}

fn bench(data: &str, repeats: u32, seed: u64, csv: Option<PathBuf>) -> ExitCode {
    let formats: &[FloatFormat] = if data == "unit" || data.starts_with("unit:") {
        &[FloatFormat::BINARY64, FloatFormat::BINARY32]
    } else {
        &[FloatFormat::BINARY64]
    };
    let mut reports = Vec::new();
    println!("{}", harness::CSV_HEADER);
    for &format in formats {
        let mut ds = match datasets::resolve(data, format, seed) {
            Ok(ds) => ds,
            Err(e) => return usage_error(e),
        };
        if ds.filtered > 0 {
            eprintln!("fpconv: skipped {} non-finite values in {}", ds.filtered, ds.name);
        }
        ds.name = format!("{}/{}", ds.name, ds.format.name());
        for algorithm in Algorithm::ALL {
            for policy in RenderPolicy::ALL {
                match harness::bench(&ds, algorithm, policy, repeats) {
                    Ok(report) => {
                        println!("{}", report.csv_row());
                        reports.push(report);
                    }
                    Err(e) => return usage_error(e),
                }
            }
        }
    }
    if let Some(path) = csv {
        if let Err(e) = fs::write(&path, harness::to_csv(&reports)) {
            return usage_error(format!("{}: {e}", path.display()));
        }
    }
    ExitCode::SUCCESS
}

fn verify(scope: &str, seed: u64) -> ExitCode {
    let scope = match Scope::parse(scope, seed) {
        Ok(scope) => scope,
        Err(e) => return usage_error(e),
    };
    println!("scope: {scope}");
    let summary = harness::verify(&scope, Checks::ALL);
    print!("{}", summary.report());
    if summary.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Convert {
            value,
            format,
            algo,
            policy,
        } => convert(&value, format.format(), algo.algorithm(), policy.policy()),
        Command::Bench {
            data,
            repeats,
            seed,
            csv,
        } => bench(&data, repeats, seed, csv),
        Command::Verify { scope, seed } => verify(&scope, seed),
    }
}
