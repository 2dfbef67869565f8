use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use spectriple::random::DEFAULT_SEED;
use spectriple::report::Report;
use spectriple::suite;
use spectriple::{Error, Exec};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Verification reports for twisted and pseudo-Riemannian spectral triples.
#[derive(Parser, Debug)]
#[command(name = "spectriple", version)]
struct Cli {
    /// Emit the report as JSON instead of a text table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random sample; falls back to SPECTRIPLE_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Run sweeps on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Clifford basis and structural operators for one signature.
    Gamma {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        m: u8,
        #[arg(long)]
        n: u8,
        /// Include every matrix as [re, im] pairs.
        #[arg(long)]
        dump: bool,
    },
    /// KO sign table, twisted sign table and measured signs.
    KoTable,
    /// K-morphism bridge, pairing and fluctuation checks.
    Morphism {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
        m: u8,
        #[arg(long, default_value_t = 1)]
        n: u8,
        #[arg(long, default_value_t = suite::BRIDGE_SAMPLES)]
        samples: usize,
    },
    /// Inverse identities for random products of unit vectors.
    Spin {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
        m: u8,
        #[arg(long, default_value_t = 1)]
        n: u8,
        #[arg(long, default_value_t = suite::SPIN_SAMPLES)]
        samples: usize,
    },
    /// Reflected Christoffel relation and spin-connection decomposition.
    Christoffel {
        /// flat, flat-euclidean, warped-diag or conformal-flat.
        #[arg(long, default_value = "warped-diag")]
        family: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        #[arg(long, default_value_t = suite::DEFAULT_H)]
        h: f64,
    },
    /// Almost-commutative product with a KO-6 finite triple.
    Product {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        mass: f64,
        /// Use a periodic 1D lattice with this many sites.
        #[arg(long, value_name = "N")]
        lattice: Option<usize>,
    },
    /// Exhaustive classification of admissible fundamental symmetries in 4D.
    Sigsolve {
        /// -1 or 1; both when omitted.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        eps: Option<i8>,
    },
    /// Every suite at default settings.
    Suite,
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s.trim() {
        "-1" | "-" => Ok(-1),
        "1" | "+1" | "+" => Ok(1),
        other => Err(format!("expected -1 or 1, got `{other}`")),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SPECTRIPLE_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("SPECTRIPLE_SEED `{v}` is not an unsigned integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidSignature { .. }
            | Error::UnsupportedDimension(_)
            | Error::UnsupportedLattice(_)
            | Error::UnsupportedMetric(_)
            | Error::UnknownFamily(_)
            | Error::InvalidInput(_)
    )
}

fn run(cli: &Cli, seed: u64, exec: Exec) -> spectriple::Result<Report> {
    match &cli.command {
        Command::Gamma { m, n, dump } => suite::gamma(*m as usize, *n as usize, *dump),
        Command::KoTable => suite::ko_table(exec),
        Command::Morphism { m, n, samples } => suite::morphism(*m as usize, *n as usize, seed, *samples, exec),
        Command::Spin { m, n, samples } => suite::spin(*m as usize, *n as usize, seed, *samples, exec),
        Command::Christoffel { family, params, point, h } => {
            let point = point.clone().unwrap_or_else(|| suite::DEFAULT_POINT.to_vec());
            suite::christoffel(family, params, &point, *h)
        }
        Command::Product { mass, lattice } => suite::product(*mass, *lattice, seed),
        Command::Sigsolve { eps } => suite::sigsolve(*eps, exec),
        Command::Suite => suite::full(seed, exec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match resolve_seed(cli.seed) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let start = Instant::now();
    let mut report = match run(&cli, seed, exec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_FAIL });
        }
    };
    if cli.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let json = report.to_json();
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    }
    if cli.json {
        println!("{json}");
    } else {
        print!("{}", report.to_table());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
