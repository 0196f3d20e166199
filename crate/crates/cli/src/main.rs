use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sinwell::CoefficientMethod;
use sinwell_cli::{run, Command, CouplingRange, Format, RunConfig, EXIT_USAGE};

/// Spectra and eigenfunctions of the infinite well with a sinusoidal bottom.
#[derive(Debug, Parser)]
#[command(name = "sinwell", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv, global = true)]
    format: FormatArg,

    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Eigenvector,
    Forward,
    Backward,
}

#[derive(Debug, Args)]
struct Geometry {
    #[arg(long = "k", default_value_t = 1)]
    k: u32,

    /// Well width.
    #[arg(long = "L", default_value_t = PI, allow_negative_numbers = true)]
    width: f64,

    /// Basis size.
    #[arg(long = "N", default_value_t = 20)]
    size: usize,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Lowest levels for one potential.
    Spectrum {
        #[arg(long = "C", default_value_t = 5.0, allow_negative_numbers = true)]
        c: f64,
        #[arg(long = "A", default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long = "B", default_value_t = 0.0, allow_negative_numbers = true)]
        b: f64,
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Levels over a range of couplings.
    Sweep {
        /// start,stop,step
        #[arg(
            long = "C-range",
            default_value = "0,20,0.5",
            allow_hyphen_values = true
        )]
        c_range: CouplingRange,
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Samples of one eigenfunction on a uniform grid.
    Wavefunction {
        #[arg(long = "C", default_value_t = 5.0, allow_negative_numbers = true)]
        c: f64,
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Grid points including both walls.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Eigenvector)]
        method: MethodArg,
    },
    /// Levels for several basis sizes.
    Converge {
        #[arg(long = "C", default_value_t = 5.0, allow_negative_numbers = true)]
        c: f64,
        #[arg(long = "k", default_value_t = 1)]
        k: u32,
        #[arg(long = "L", default_value_t = PI, allow_negative_numbers = true)]
        width: f64,
        #[arg(
            long = "N-list",
            value_delimiter = ',',
            default_value = "10,15,20,25,30,40"
        )]
        sizes: Vec<usize>,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Run the built-in acceptance checks.
    Validate,
    /// Reproduce the C = 5, N = 20 table.
    Table1,
}

fn config(cli: Cli) -> RunConfig {
    let mut cfg = RunConfig {
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        out: cli.out,
        ..RunConfig::table1()
    };
    let set_geometry = |cfg: &mut RunConfig, g: Geometry| {
        cfg.k = g.k;
        cfg.width = g.width;
        cfg.size = g.size;
    };
    match cli.command.unwrap_or(Cmd::Table1) {
        Cmd::Spectrum {
            c,
            a,
            b,
            geometry,
            levels,
        } => {
            cfg.command = Command::Spectrum;
            (cfg.c, cfg.a, cfg.b, cfg.levels) = (c, a, b, levels);
            set_geometry(&mut cfg, geometry);
        }
        Cmd::Sweep {
            c_range,
            geometry,
            levels,
        } => {
            cfg.command = Command::Sweep;
            (cfg.c_range, cfg.levels) = (c_range, levels);
            set_geometry(&mut cfg, geometry);
        }
        Cmd::Wavefunction {
            c,
            geometry,
            level,
            grid,
            method,
        } => {
            cfg.command = Command::Wavefunction;
            (cfg.c, cfg.level, cfg.grid) = (c, level, grid);
            cfg.method = match method {
                MethodArg::Eigenvector => CoefficientMethod::Eigenvector,
                MethodArg::Forward => CoefficientMethod::Forward,
                MethodArg::Backward => CoefficientMethod::Backward,
            };
            set_geometry(&mut cfg, geometry);
        }
        Cmd::Converge {
            c,
            k,
            width,
            sizes,
            levels,
        } => {
            cfg.command = Command::Converge;
            (cfg.c, cfg.k, cfg.width, cfg.sizes, cfg.levels) = (c, k, width, sizes, levels);
        }
        Cmd::Validate => cfg.command = Command::Validate,
        Cmd::Table1 => {}
    }
    cfg
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var("SINWELL_THREADS") else {
        return Ok(None);
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SINWELL_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let cfg = config(cli);
    let outcome = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| run(&cfg)),
        Ok(None) => run(&cfg),
        Err(message) => {
            eprintln!("sinwell: {message}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    for note in &outcome.notes {
        eprintln!("sinwell: {note}");
    }
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.document),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.document.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("sinwell: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(outcome.code)
}
