use std::f64::consts::FRAC_1_SQRT_2;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::to_csv;
use super::verify::{run_suite, Suite};
use super::{
    fmt_sig12, sweep_rows, write_atomic, CliError, Command, GridSpec, OutputFormat, RunConfig, SweepFamily, EXIT_OK,
    EXIT_VERIFY_FAILED, EXIT_VIOLATION, FORMAT_VERSION,
};
use crate::chsh::{max_chsh, mtm_eigs};
use crate::conjecture4::{
    conjecture_bound, conjecture_sum_n, search, ConjectureResult, SearchOptions, SearchOutcome, HISTOGRAM_BIN_WIDTH,
};
use crate::qcore::io::{state_from_json, StateFile};
use crate::qcore::{bloch_decompose, c64, haar_random_state, label_index, label_name, sample_seed, PureState};
use crate::slocc::FreeQubit;
use crate::tolerances::TOL_BOUND;
use crate::tradeoff3::{trace_identity, tradeoff_sum, TradeoffReport};

/// A rendered artifact plus the exit code the command should finish with.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub bytes: Vec<u8>,
    pub exit_code: i32,
    /// Non-fatal diagnostics for stderr.
    pub warnings: Vec<String>,
}

impl Rendered {
    fn ok(bytes: Vec<u8>) -> Self {
        Self { bytes, exit_code: EXIT_OK, warnings: Vec::new() }
    }
}

#[derive(Serialize)]
struct Artifact<'a, T: Serialize> {
    format_version: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn json_artifact<T: Serialize>(config: &RunConfig, body: T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(&Artifact { format_version: FORMAT_VERSION, config, body })
        .expect("report serialization cannot fail");
    s.push('\n');
    s.into_bytes()
}

/// One-line JSON header embedded as the first line of CSV artifacts.
fn csv_provenance(config: &RunConfig) -> String {
    #[derive(Serialize)]
    struct Header<'a> {
        format_version: &'static str,
        config: &'a RunConfig,
    }
    serde_json::to_string(&Header { format_version: FORMAT_VERSION, config }).expect("config serialization cannot fail")
}

fn require<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| CliError::Parse(format!("missing required option --{flag}")))
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn parse_anchor(anchor: &Option<String>, n: usize) -> Result<usize, CliError> {
    let q = match anchor {
        None => 0,
        Some(s) => label_index(s).ok_or_else(|| CliError::Parse(format!("invalid anchor qubit `{s}`")))?,
    };
    if q >= n {
        return Err(CliError::Parse(format!("anchor {} is not one of the {n} qubits", label_name(q))));
    }
    Ok(q)
}

/// Writes to `output_path` atomically, or to stdout when there is none.
fn emit(config: &RunConfig, rendered: &Rendered) -> Result<i32, CliError> {
    for w in &rendered.warnings {
        eprintln!("warning: {w}");
    }
    match &config.output_path {
        Some(path) => write_atomic(Path::new(path), &rendered.bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&rendered.bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(rendered.exit_code)
}

// ---- analyze ----

#[derive(Serialize)]
struct ThreeQubitBody {
    n: usize,
    report: TradeoffReport,
    trace_identity: f64,
}

#[derive(Serialize)]
struct ManyQubitBody {
    n: usize,
    report: ConjectureResult,
    bound: Option<f64>,
    exceeds_bound: bool,
}

#[derive(Serialize)]
struct TwoQubitBody {
    n: usize,
    max_chsh: f64,
    tau: [f64; 3],
}

fn render_analyze(config: &RunConfig) -> Result<Rendered, CliError> {
    let path = require(&config.input_path, "state")?;
    let state = state_from_json(&read_file(&path)?)?;
    let n = state.n_qubits();
    let csv = config.format == OutputFormat::Csv;
    let mut out = String::new();
    if csv {
        out.push_str("# ");
        out.push_str(&csv_provenance(config));
        out.push('\n');
    }
    match n {
        2 => {
            let rho = state.density();
            let tau = mtm_eigs(&bloch_decompose(&rho)?.m);
            let body = TwoQubitBody { n, max_chsh: max_chsh(&rho)?, tau: [tau.tau1, tau.tau2, tau.tau3] };
            if !csv {
                return Ok(Rendered::ok(json_artifact(config, body)));
            }
            out.push_str("n,max_chsh,tau1,tau2,tau3\n");
            let fields = [body.max_chsh, body.tau[0], body.tau[1], body.tau[2]].map(fmt_sig12);
            out.push_str(&format!("2,{}\n", fields.join(",")));
        }
        3 => {
            let report = tradeoff_sum(&state)?;
            let body = ThreeQubitBody { n, report, trace_identity: trace_identity(&state)? };
            if !csv {
                return Ok(Rendered::ok(json_artifact(config, body)));
            }
            out.push_str("n,s_ab,s_ac,s_bc,total,class,tangle,trace_identity\n");
            let nums = [report.s_ab, report.s_ac, report.s_bc, report.total].map(fmt_sig12);
            out.push_str(&format!(
                "3,{},{},{},{}\n",
                nums.join(","),
                report.class.tag,
                fmt_sig12(report.class.evidence.tangle),
                fmt_sig12(body.trace_identity)
            ));
        }
        4..=6 => {
            let anchor = parse_anchor(&config.anchor, n)?;
            let report = conjecture_sum_n(&state, anchor)?;
            let bound = conjecture_bound(n);
            let exceeds_bound = bound.is_some_and(|b| report.total > b + TOL_BOUND);
            if !csv {
                return Ok(Rendered::ok(json_artifact(config, ManyQubitBody { n, report, bound, exceeds_bound })));
            }
            out.push_str("n,anchor,pair,value\n");
            for p in &report.per_pair {
                out.push_str(&format!("{n},{},{},{}\n", report.anchored_qubit, p.pair, fmt_sig12(p.value)));
            }
            out.push_str(&format!("{n},{},total,{}\n", report.anchored_qubit, fmt_sig12(report.total)));
        }
        _ => return Err(CliError::Parse(format!("analyze needs a state of 2 to 6 qubits, got n={n}"))),
    }
    Ok(Rendered::ok(out.into_bytes()))
}

pub fn cmd_analyze(config: &RunConfig) -> Result<i32, CliError> {
    emit(config, &render_analyze(config)?)
}

// ---- sweep ----

fn sweep_family(config: &RunConfig) -> Result<SweepFamily, CliError> {
    let family = require(&config.family, "family")?;
    match family.as_str() {
        "biseparable" => {
            let free = match config.free_qubit.as_deref().unwrap_or("A") {
                "A" | "a" => FreeQubit::A,
                "B" | "b" => FreeQubit::B,
                "C" | "c" => FreeQubit::C,
                other => return Err(CliError::Parse(format!("--free must be A, B or C, got `{other}`"))),
            };
            Ok(SweepFamily::Biseparable { free })
        }
        "w" => Ok(SweepFamily::W),
        "ghz" => Ok(SweepFamily::Ghz { phi: config.phi }),
        other => Err(CliError::Parse(format!("unknown family `{other}` (expected biseparable, w or ghz)"))),
    }
}

fn render_sweep(config: &RunConfig) -> Result<Rendered, CliError> {
    let family = sweep_family(config)?;
    if config.phi.is_some() && !matches!(family, SweepFamily::Ghz { .. }) {
        return Err(CliError::Parse("--phi only applies to the ghz family".into()));
    }
    let grid: GridSpec = require(&config.grid, "grid")?.parse()?;
    let outcome = sweep_rows(&family, &grid)?;
    let mut rendered = Rendered::ok(to_csv(&family, &outcome, &csv_provenance(config)).into_bytes());
    if outcome.skipped > 0 {
        rendered.warnings.push(format!(
            "skipped {} grid point(s) outside the {} parameter range",
            outcome.skipped,
            family.name()
        ));
    }
    Ok(rendered)
}

pub fn cmd_sweep(config: &RunConfig) -> Result<i32, CliError> {
    emit(config, &render_sweep(config)?)
}

// ---- search ----

#[derive(Serialize)]
struct SearchBody<'a> {
    n: usize,
    anchor: char,
    pair_set: &'static str,
    samples: usize,
    restarts: usize,
    seed: u64,
    bound: Option<f64>,
    best_total: f64,
    sampled_best: f64,
    ascent_totals: &'a [f64],
    best_state: StateFile,
    histogram: &'a [u64],
    histogram_bin_width: f64,
    violation_found: bool,
}

/// `(|0…0⟩ + |1…1⟩)/√2`
fn ghz_state(n: usize) -> PureState {
    let mut amps = vec![c64(0.0, 0.0); 1 << n];
    amps[0] = c64(FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] = c64(FRAC_1_SQRT_2, 0.0);
    PureState::new(n, amps).expect("GHZ state is valid")
}

fn search_options(config: &RunConfig) -> Result<SearchOptions, CliError> {
    let n = require(&config.qubits, "qubits")?;
    if !(3..=6).contains(&n) {
        return Err(CliError::Parse(format!("--qubits must be between 3 and 6, got {n}")));
    }
    let warm_starts = match config.warm_start.as_deref() {
        None | Some("none") => Vec::new(),
        Some("ghz") => vec![ghz_state(n)],
        Some(other) => return Err(CliError::Parse(format!("unknown warm start `{other}` (expected ghz or none)"))),
    };
    Ok(SearchOptions {
        n,
        samples: require(&config.samples, "samples")?,
        restarts: config.restarts.unwrap_or(0),
        seed: require(&config.seed, "seed")?,
        anchor: parse_anchor(&config.anchor, n)?,
        warm_starts,
    })
}

/// Serialized search report for `outcome`, as written by `search`.
pub fn search_report(config: &RunConfig, opts: &SearchOptions, outcome: &SearchOutcome) -> Vec<u8> {
    json_artifact(
        config,
        SearchBody {
            n: opts.n,
            anchor: label_name(opts.anchor),
            pair_set: "anchored",
            samples: opts.samples,
            restarts: opts.restarts,
            seed: opts.seed,
            bound: conjecture_bound(opts.n),
            best_total: outcome.best_total,
            sampled_best: outcome.sampled_best,
            ascent_totals: &outcome.ascent_totals,
            best_state: StateFile::from(&outcome.best_state),
            histogram: &outcome.histogram,
            histogram_bin_width: HISTOGRAM_BIN_WIDTH,
            violation_found: outcome.violation_found,
        },
    )
}

fn render_search(config: &RunConfig) -> Result<Rendered, CliError> {
    let opts = search_options(config)?;
    let outcome = search(&opts)?;
    let mut rendered = Rendered::ok(search_report(config, &opts, &outcome));
    if outcome.violation_found {
        rendered.exit_code = EXIT_VIOLATION;
        rendered.warnings.push(format!(
            "VIOLATION: anchored sum {:.15} exceeds the bound {}; the state is saved in the report",
            outcome.best_total,
            conjecture_bound(opts.n).unwrap_or(f64::NAN)
        ));
    }
    Ok(rendered)
}

pub fn cmd_search(config: &RunConfig) -> Result<i32, CliError> {
    emit(config, &render_search(config)?)
}

// ---- random ----

#[derive(Serialize)]
struct RandomBody {
    n: usize,
    seed: u64,
    states: Vec<StateFile>,
}

fn render_random(config: &RunConfig) -> Result<Rendered, CliError> {
    let n = require(&config.qubits, "qubits")?;
    let count = require(&config.count, "count")?;
    let seed = require(&config.seed, "seed")?;
    let states = (0..count as u64)
        .map(|i| haar_random_state(n, sample_seed(seed, i)).map(|s| StateFile::from(&s)))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(Rendered::ok(json_artifact(config, RandomBody { n, seed, states })))
}

pub fn cmd_random(config: &RunConfig) -> Result<i32, CliError> {
    emit(config, &render_random(config)?)
}

// ---- verify ----

pub fn cmd_verify(config: &RunConfig) -> Result<i32, CliError> {
    let suite: Suite = config.suite.as_deref().unwrap_or("all").parse()?;
    let checks = run_suite(suite)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for check in &checks {
        println!("{check}");
    }
    println!("{} checks, {} passed, {} failed", checks.len(), checks.len() - failed, failed);
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

// ---- replay ----

#[derive(Deserialize)]
struct Provenance {
    format_version: String,
    config: RunConfig,
}

/// Recovers the embedded configuration of a JSON or CSV artifact.
pub fn artifact_config(text: &str) -> Result<RunConfig, CliError> {
    let header = match text.strip_prefix("# ") {
        Some(rest) => rest.lines().next().unwrap_or_default(),
        None => text,
    };
    let p: Provenance =
        serde_json::from_str(header).map_err(|e| CliError::Parse(format!("artifact has no readable config: {e}")))?;
    if p.format_version != FORMAT_VERSION {
        return Err(CliError::Parse(format!(
            "artifact format `{}` is not supported (expected `{FORMAT_VERSION}`)",
            p.format_version
        )));
    }
    Ok(p.config)
}

/// Renders the artifact a config describes without writing it anywhere.
pub fn render(config: &RunConfig) -> Result<Rendered, CliError> {
    match config.command {
        Command::Analyze => render_analyze(config),
        Command::Sweep => render_sweep(config),
        Command::Search => render_search(config),
        Command::Random => render_random(config),
        Command::Verify => Err(CliError::Parse("verify runs produce no artifact to replay".into())),
    }
}

/// Re-executes the config embedded in `artifact_path` and compares the
/// result byte-for-byte with the file. Exit 0 when identical, 1 otherwise.
pub fn cmd_replay(artifact_path: &str) -> Result<i32, CliError> {
    let text = read_file(artifact_path)?;
    let config = artifact_config(&text)?;
    let rendered = render(&config)?;
    if rendered.bytes == text.as_bytes() {
        println!("identical: {artifact_path} reproduced byte-for-byte");
        Ok(EXIT_OK)
    } else {
        println!("DIFFERENT: re-running the embedded config does not reproduce {artifact_path}");
        Ok(EXIT_VERIFY_FAILED)
    }
}

/// Dispatches a recorded command.
pub fn run(config: &RunConfig) -> Result<i32, CliError> {
    match config.command {
        Command::Analyze => cmd_analyze(config),
        Command::Sweep => cmd_sweep(config),
        Command::Search => cmd_search(config),
        Command::Verify => cmd_verify(config),
        Command::Random => cmd_random(config),
    }
}

/// Reports an error on stderr and converts it to its exit code.
pub fn report_error(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}
