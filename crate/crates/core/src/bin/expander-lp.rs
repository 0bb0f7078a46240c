use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use expander_lp::certificate::{self, CertifyMode, Q};
use expander_lp::harness::{self, ExperimentConfig, Tolerances};
use expander_lp::lp_decoder::{decode, DecodeStatus};
use expander_lp::ml_oracle::exhaustive_agreement_scan;
use expander_lp::orientation::{self, OrientOutcome};
use expander_lp::tanner_graph::{Side, TannerGraph, DENSE_TOL};
use expander_lp::{Error, Result};

#[derive(Parser)]
#[command(name = "expander-lp", version, about = "LP decoding of nonbinary expander codes")]
struct Cli {
    /// Seed for sampled experiments (overrides the sweep config seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    feas_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    opt_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-6)]
    int_tol: f64,
    /// Starting witness slack.
    #[arg(long, global = true, default_value_t = 1e-6)]
    epsilon: f64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CodeFiles {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    code_a: PathBuf,
    #[arg(long)]
    code_b: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Peel,
    Orient,
}

#[derive(Subcommand)]
enum Command {
    /// Run the LP decoder on a received word.
    Decode {
        #[command(flatten)]
        files: CodeFiles,
        #[arg(long)]
        received: PathBuf,
    },
    /// Build and check a dual witness for a sent/received pair.
    Certify {
        #[command(flatten)]
        files: CodeFiles,
        #[arg(long)]
        sent: PathBuf,
        #[arg(long)]
        received: PathBuf,
        #[arg(long, value_enum, default_value = "peel")]
        mode: Mode,
    },
    /// Peel the error edges and report an error core, if any.
    Core {
        #[command(flatten)]
        files: CodeFiles,
        #[arg(long)]
        sent: PathBuf,
        #[arg(long)]
        received: PathBuf,
        /// Core threshold on side A as a rational, default δ_A/4.
        #[arg(long)]
        zeta_a: Option<String>,
        #[arg(long)]
        zeta_b: Option<String>,
    },
    /// Orient an edge set under indegree caps.
    Orient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        cap_a: usize,
        #[arg(long)]
        cap_b: usize,
    },
    /// Decode every possible received word and compare with brute force.
    Scan {
        #[command(flatten)]
        files: CodeFiles,
        #[arg(long, default_value_t = 1 << 16)]
        max_words: u128,
    },
    /// Analytic distance and correctable-fraction bounds.
    Bounds {
        #[command(flatten)]
        files: CodeFiles,
    },
    /// Print the correctable-fraction tables.
    Tables,
    /// Monte Carlo sweep driven by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Decode,
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::Numeric(_) | Error::NotIntegral { .. } | Error::SpectrumNotComputed => {
                Failure::Invariant(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Internal(e.to_string()))
}

fn parse_ratio(s: &str) -> Result<Q> {
    s.parse::<Q>().map_err(|e| Error::Parse(format!("rational {s:?}: {e}")))
}

fn load(files: &CodeFiles) -> Result<expander_lp::expander_code::ExpanderCode> {
    harness::load_code(&files.graph, &files.code_a, &files.code_b)
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let tol = Tolerances { feas_tol: cli.feas_tol, opt_tol: cli.opt_tol, int_tol: cli.int_tol, epsilon: cli.epsilon };
    match cli.command {
        Command::Decode { files, received } => {
            let code = load(&files)?;
            let y = harness::load_word(&received, &code)?;
            let r = decode(&code, &y, &tol.decoder_options())?;
            #[derive(Serialize)]
            struct Out {
                status: DecodeStatus,
                codeword: Option<String>,
                distance: Option<usize>,
                objective: f64,
            }
            let out = Out {
                status: r.status,
                codeword: r.codeword.as_ref().map(|c| c.to_string()),
                distance: r.codeword.as_ref().map(|c| c.distance(&y)),
                objective: r.objective,
            };
            emit(&cli.out, &to_json(&out)?)?;
            if r.status == DecodeStatus::FractionalFailure {
                return Err(Failure::Decode);
            }
        }
        Command::Certify { files, sent, received, mode } => {
            let code = load(&files)?;
            let c = harness::load_word(&sent, &code)?;
            let y = harness::load_word(&received, &code)?;
            let mode = match mode {
                Mode::Peel => CertifyMode::Peel,
                Mode::Orient => CertifyMode::Orient,
            };
            let cert = certificate::certify_from(&code, &c, &y, mode, tol.epsilon_ratio()?)?;
            emit(&cli.out, &to_json(&cert)?)?;
        }
        Command::Core { files, sent, received, zeta_a, zeta_b } => {
            let code = load(&files)?;
            let c = harness::load_word(&sent, &code)?;
            let y = harness::load_word(&received, &code)?;
            let zeta = |arg: &Option<String>, side: Side| -> Result<Q> {
                match arg {
                    Some(s) => parse_ratio(s),
                    None => Ok(code.relative_distance(side) / Q::from_integer(4)),
                }
            };
            let (za, zb) = (zeta(&zeta_a, Side::A)?, zeta(&zeta_b, Side::B)?);
            let trace = certificate::peel(&code, &c, &y)?;
            let core = certificate::find_error_core(code.graph(), &trace, za, zb)?;
            #[derive(Serialize)]
            struct Out {
                core_found: bool,
                terminated_empty: bool,
                final_index: usize,
                core: Option<certificate::ErrorCore>,
            }
            let out = Out {
                core_found: core.is_some(),
                terminated_empty: trace.terminated_empty,
                final_index: trace.final_index,
                core,
            };
            emit(&cli.out, &to_json(&out)?)?;
        }
        Command::Orient { graph, edges, cap_a, cap_b } => {
            let g = TannerGraph::from_text(&read(&graph)?)?;
            let edges = harness::load_edges(&edges)?;
            let json = match orientation::orient(&g, &edges, cap_a, cap_b)? {
                OrientOutcome::Oriented(o) => {
                    if !orientation::verify_orientation(&g, &o) {
                        return Err(Failure::Invariant("orientation failed its audit".into()));
                    }
                    let directions: Vec<[usize; 2]> =
                        (0..o.edges.len()).map(|i| { let (t, h) = o.arc(&g, i); [t, h] }).collect();
                    serde_json::json!({ "feasible": true, "directions": directions, "indegree": o.indegree })
                }
                OrientOutcome::Failed(f) => serde_json::json!({
                    "feasible": false,
                    "residual_violations": f.residual_violations,
                    "blocking_set": f.blocking_set,
                }),
            };
            emit(&cli.out, &to_json(&json)?)?;
        }
        Command::Scan { files, max_words } => {
            let code = load(&files)?;
            let report = exhaustive_agreement_scan(&code, max_words, &tol.decoder_options())?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &report.rows {
                w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            emit(&cli.out, &String::from_utf8_lossy(&bytes))?;
            eprint!("{}", to_json(&report)?);
            if report.violations > 0 {
                return Err(Failure::Invariant(format!("{} nearest-codeword violations", report.violations)));
            }
        }
        Command::Bounds { files } => {
            let code = load(&files)?;
            code.graph().compute_spectrum(DENSE_TOL)?;
            emit(&cli.out, &to_json(&code.bounds_report()?)?)?;
        }
        Command::Tables => emit(&cli.out, &harness::format_tables()?)?,
        Command::Sweep { config } => {
            let mut cfg = ExperimentConfig::from_json(&read(&config)?)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            cfg.tolerances = tol;
            let out_path = cli.out.clone().or_else(|| cfg.output.clone());
            let result = harness::run_sweep(&cfg)?;
            let mut csv_bytes = Vec::new();
            harness::write_csv(&result.records, &mut csv_bytes)?;
            let summary = to_json(&result.summary)?;
            match &out_path {
                Some(p) => {
                    fs::write(p, &csv_bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    let sp = p.with_extension("summary.json");
                    fs::write(&sp, &summary).map_err(|e| Error::Io(format!("{}: {e}", sp.display())))?;
                }
                None => {
                    io::stdout().write_all(&csv_bytes).map_err(Error::from)?;
                    eprint!("{summary}");
                }
            }
            let s = &result.summary;
            if s.chain_violations + s.oracle_violations > 0 {
                return Err(Failure::Invariant(format!(
                    "{} witness/decoder and {} oracle disagreements",
                    s.chain_violations, s.oracle_violations
                )));
            }
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Decode) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
