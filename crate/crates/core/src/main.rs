use std::process::ExitCode;

use chsh_tradeoff::cli::{self, Command, OutputFormat, RunConfig};
use clap::{Parser, Subcommand};

/// Pairwise CHSH trade-offs for three-qubit states and the four-qubit
/// anchored correlation bound. Angles are in radians throughout; `pi`,
/// `pi/4`, `3*pi/8` and similar are accepted wherever an angle is.
#[derive(Parser)]
#[command(name = "chsh-tradeoff", version)]
struct Args {
    /// Maximum worker threads. Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze a state file: 3 qubits give the trade-off report, 4 to 6
    /// the anchored pair sum, 2 the maximal CHSH value.
    Analyze {
        /// JSON state file `{"n": .., "amplitudes": [[re, im], ..]}`.
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Anchor qubit for n >= 4 (A..F).
        #[arg(long)]
        anchor: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate a generator family over a parameter grid and write CSV.
    Sweep {
        /// biseparable, w or ghz.
        #[arg(long)]
        family: String,
        /// Axes `name=min:max:count`, comma separated, e.g.
        /// `delta=0.01:pi/4:50` or `a=0.05:0.3:6,b=0.05:0.3:6,c=0.05:0.3:6`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: String,
        /// GHZ phase when the grid has no `phi` axis (default pi/2).
        #[arg(long, value_parser = parse_angle)]
        phi: Option<f64>,
        /// Unentangled qubit of the biseparable family (A, B or C; default A).
        #[arg(long)]
        free: Option<String>,
    },
    /// Search for states with a large anchored pair sum.
    Search {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: String,
        /// Anchor qubit (A..F, default A).
        #[arg(long)]
        anchor: Option<String>,
        /// Extra ascent start: `ghz` or `none`.
        #[arg(long)]
        warm_start: Option<String>,
    },
    /// Run a verification suite and print one line per check.
    Verify {
        /// theorem1..theorem4, identity, horodecki, conjecture, classifier or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Write Haar-random pure states; state i uses seed + i.
    Random {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: String,
    },
    /// Re-run the configuration embedded in an artifact and check that the
    /// result is byte-identical.
    Replay { artifact: String },
}

fn parse_angle(s: &str) -> Result<f64, String> {
    cli::parse_angle(s).ok_or_else(|| format!("`{s}` is not an angle (use radians, or forms like pi/4)"))
}

fn config_for(cmd: Cmd) -> Result<RunConfig, String> {
    let cfg = match cmd {
        Cmd::Analyze { state, format, anchor, out } => {
            RunConfig { input_path: Some(state), format, anchor, output_path: out, ..RunConfig::new(Command::Analyze) }
        }
        Cmd::Sweep { family, grid, out, phi, free } => RunConfig {
            family: Some(family),
            grid: Some(grid),
            output_path: Some(out),
            phi,
            free_qubit: free,
            format: OutputFormat::Csv,
            ..RunConfig::new(Command::Sweep)
        },
        Cmd::Search { qubits, samples, restarts, seed, out, anchor, warm_start } => RunConfig {
            qubits: Some(qubits),
            samples: Some(samples),
            restarts: Some(restarts),
            seed: Some(seed),
            output_path: Some(out),
            anchor,
            warm_start,
            ..RunConfig::new(Command::Search)
        },
        Cmd::Verify { suite } => RunConfig { suite: Some(suite), ..RunConfig::new(Command::Verify) },
        Cmd::Random { qubits, count, seed, out } => RunConfig {
            qubits: Some(qubits),
            count: Some(count),
            seed: Some(seed),
            output_path: Some(out),
            ..RunConfig::new(Command::Random)
        },
        Cmd::Replay { artifact } => return Err(artifact),
    };
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { cli::EXIT_PARSE } else { cli::EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    if let Some(threads) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} worker threads: {e}");
            return ExitCode::from(cli::EXIT_PARSE as u8);
        }
    }
    let result = match config_for(args.command) {
        Ok(config) => cli::run(&config),
        Err(artifact) => cli::cmd_replay(&artifact),
    };
    let code = result.unwrap_or_else(|e| cli::report_error(&e));
    ExitCode::from(code as u8)
}
