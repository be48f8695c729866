use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use wtrace::cocycles::Polarization;
use wtrace::compute::{compute, ComputeConfig, Quantity};
use wtrace::error::{Error, Result};
use wtrace::exec::with_jobs;
use wtrace::lie::LieAlgebraData;
use wtrace::report::{to_csv, to_json, CheckReport};
use wtrace::suites::{run_suite, SuiteConfig};
use wtrace::traces::EngineConfig;
use wtrace::weight::DiagonalWeight;
use wtrace::C64;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    KernelPlus,
    KernelExcluded,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightChoice {
    /// `max(n², 1)`
    Laplacian,
    /// `max(|n|, 1)`
    Abs,
    /// `(|n| + 1)²`
    Shifted,
}

#[derive(Parser, Debug)]
#[command(
    name = "wtrace",
    version,
    about = "Weighted traces, residues and loop-group cocycles on the circle"
)]
struct Cli {
    /// Lie algebra as JSON `{dim, entries: [[i,j,k,value], ...], labels?}`; su(2) if omitted.
    #[arg(long, global = true)]
    algebra: Option<PathBuf>,
    /// traces, radul, schwinger, lambda, loopgeom, chern or all.
    #[arg(long, default_value = "all", global = true)]
    suite: String,
    /// Largest mode used by truncation paths and order fits.
    #[arg(long, default_value_t = 256, global = true)]
    truncation: i64,
    /// Terms kept in every asymptotic expansion.
    #[arg(long, default_value_t = 8, global = true)]
    depth: usize,
    /// Tolerance overriding the per-check defaults.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Convention::KernelPlus, global = true)]
    convention: Convention,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads; all cores if omitted.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed of the random corpora.
    #[arg(long, default_value_t = 0x5eed, global = true)]
    seed: u64,
    /// Report zero runtimes so reruns produce identical output.
    #[arg(long, global = true)]
    stable: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one quantity: tr, res, TR, radul, schwinger, lambda, first_chern, ricci, symplectic.
    Compute {
        quantity: String,
        /// Operands, e.g. `"(z^1 e1, z^-1 e1)"` or `"|D+P|^-1"`; put ones starting with `-` after `--`.
        #[arg(required = true, num_args = 1..)]
        operands: Vec<String>,
        /// Weight for tr and radul.
        #[arg(long, value_enum, default_value_t = WeightChoice::Laplacian)]
        weight: WeightChoice,
        /// Sobolev index for ricci.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Expected value `re` or `re,im`, compared at --tol (default 1e-9).
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<String>,
    },
}

fn polarization(c: Convention) -> Polarization {
    match c {
        Convention::KernelPlus => Polarization::KernelPlus,
        Convention::KernelExcluded => Polarization::KernelExcluded,
    }
}

fn load_algebra(path: &Option<PathBuf>) -> Result<Arc<LieAlgebraData>> {
    let alg = match path {
        Some(p) => LieAlgebraData::load(p)?,
        None => LieAlgebraData::su2(),
    };
    if alg.dim() == 0 {
        return Err(Error::Config("the Lie algebra is empty".into()));
    }
    Ok(Arc::new(alg))
}

fn parse_expect(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number `{t}`")))
    };
    match parts.as_slice() {
        [r] => Ok(C64::new(num(r)?, 0.0)),
        [r, i] => Ok(C64::new(num(r)?, num(i)?)),
        _ => Err(Error::Parse(format!("bad expected value `{s}`"))),
    }
}

fn run(cli: &Cli) -> Result<Vec<CheckReport>> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be finite and non-negative, got {t}"
            )));
        }
    }
    let algebra = load_algebra(&cli.algebra)?;
    let engine = EngineConfig {
        depth: cli.depth,
        ..EngineConfig::default()
    };
    match &cli.command {
        None => {
            let cfg = SuiteConfig {
                algebra,
                truncation: cli.truncation,
                engine,
                tol: cli.tol,
                polarization: polarization(cli.convention),
                seed: cli.seed,
                stable: cli.stable,
            };
            run_suite(&cli.suite, &cfg)
        }
        Some(Command::Compute {
            quantity,
            operands,
            weight,
            s,
            expect,
        }) => {
            let q: Quantity = quantity.parse()?;
            let weight = match weight {
                WeightChoice::Laplacian => DiagonalWeight::laplacian(),
                WeightChoice::Abs => DiagonalWeight::abs_d(),
                WeightChoice::Shifted => DiagonalWeight::abs_power(1.0, 2.0)?,
            };
            let cfg = ComputeConfig {
                algebra,
                engine,
                polarization: polarization(cli.convention),
                weight,
                s: *s,
            };
            let text = operands.join(" ");
            let start = std::time::Instant::now();
            let value = compute(q, &text, &cfg)?;
            let ms = if cli.stable {
                0
            } else {
                start.elapsed().as_millis() as u64
            };
            let rhs = match expect {
                Some(e) => parse_expect(e)?,
                None => value,
            };
            Ok(vec![CheckReport::new(
                format!("compute.{}", q.name()),
                text,
                value,
                rhs,
                cli.tol.unwrap_or(1e-9),
                ms,
            )])
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = with_jobs(cli.jobs, || run(&cli));
    let reports = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.format {
        Format::Json => to_json(&reports),
        Format::Csv => to_csv(&reports),
    };
    match text {
        Ok(t) => println!("{}", t.trim_end()),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if reports.iter().all(CheckReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
