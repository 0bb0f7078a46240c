//! Experiment driver: Monte Carlo sweeps, analytic tables and instance
//! loading shared by the command-line tool and the examples.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{self, CertifyMode, Q};
use crate::error::{Error, Result};
use crate::expander_code::{table_fraction, BoundReport, ExpanderCode, TableRegime, Word, DEFAULT_GLOBAL_CAP};
use crate::gf::Field;
use crate::linalg::count_words;
use crate::linear_code::LocalCode;
use crate::lp_core::SolverOptions;
use crate::lp_decoder::{decode, DecodeStatus, DecoderOptions};
use crate::ml_oracle::nearest_in;
use crate::tanner_graph::{TannerGraph, DENSE_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    File { path: PathBuf },
    Random { n: usize, delta: usize, seed: u64 },
    Complete { n: usize },
    CompleteMinusMatching { n: usize },
    Cycle { n: usize },
}

impl GraphSource {
    pub fn build(&self) -> Result<TannerGraph> {
        match self {
            GraphSource::File { path } => TannerGraph::from_text(&read(path)?),
            GraphSource::Random { n, delta, seed } => TannerGraph::random_regular_bipartite(*n, *delta, *seed),
            GraphSource::Complete { n } => TannerGraph::complete_bipartite(*n),
            GraphSource::CompleteMinusMatching { n } => TannerGraph::complete_minus_matching(*n),
            GraphSource::Cycle { n } => TannerGraph::cycle(*n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeSpec {
    File { path: PathBuf },
    Repetition,
    SingleParityCheck,
    FullSpace,
    ReedSolomon { dimension: usize },
    Generator { rows: Vec<Vec<u32>> },
}

impl CodeSpec {
    /// Builds a local code of length `delta` over `field`.
    pub fn build(&self, field: &Field, delta: usize) -> Result<LocalCode> {
        match self {
            CodeSpec::File { path } => LocalCode::from_text(&read(path)?),
            CodeSpec::Repetition => LocalCode::repetition(field.clone(), delta),
            CodeSpec::SingleParityCheck => LocalCode::single_parity_check(field.clone(), delta),
            CodeSpec::FullSpace => LocalCode::full_space(field.clone(), delta),
            CodeSpec::ReedSolomon { dimension } => {
                LocalCode::generalized_reed_solomon(field.clone(), delta, *dimension, None, None)
            }
            CodeSpec::Generator { rows } => {
                let g = rows
                    .iter()
                    .map(|r| r.iter().map(|&x| field.check_symbol(x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                LocalCode::new(field.clone(), g)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub int_tol: f64,
    /// Starting slack of the witness ε schedule.
    pub epsilon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let s = SolverOptions::default();
        Tolerances {
            feas_tol: s.feas_tol,
            opt_tol: s.opt_tol,
            int_tol: crate::lp_decoder::DEFAULT_INT_TOL,
            epsilon: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn decoder_options(&self) -> DecoderOptions {
        DecoderOptions {
            solver: SolverOptions { feas_tol: self.feas_tol, opt_tol: self.opt_tol, ..SolverOptions::default() },
            int_tol: self.int_tol,
        }
    }

    /// ε as the rational `1/round(1/ε)`.
    pub fn epsilon_ratio(&self) -> Result<Q> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        Ok(Ratio::new(1, (1.0 / self.epsilon).round() as i64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Field order.
    pub q: u32,
    pub graph: GraphSource,
    pub code_a: CodeSpec,
    pub code_b: CodeSpec,
    pub weights: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Adds a wall-clock column to the CSV, which then differs between runs.
    #[serde(default)]
    pub record_runtime: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn build_code(&self) -> Result<ExpanderCode> {
        let field = Field::new(self.q)?;
        let graph = self.graph.build()?;
        let delta = graph.delta();
        let a = self.code_a.build(&field, delta)?;
        let b = self.code_b.build(&field, delta)?;
        ExpanderCode::new(graph, a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub weight: usize,
    pub trial: usize,
    pub decode_status: DecodeStatus,
    /// The decoder returned exactly the transmitted codeword.
    pub decoded_correct: bool,
    /// The decoded codeword is a nearest codeword; empty when the decoder
    /// failed or the global code is too large to enumerate.
    pub oracle_agreement: Option<bool>,
    pub witness_peel: bool,
    pub witness_orient: bool,
    pub core_found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl TrialRecord {
    /// A witness was found yet the decoder did not return the codeword.
    pub fn chain_violation(&self) -> bool {
        (self.witness_peel || self.witness_orient) && !self.decoded_correct
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSummary {
    pub weight: usize,
    pub trials: usize,
    pub decoded_correct: usize,
    pub success_rate: f64,
    pub witness_peel: usize,
    pub witness_orient: usize,
    pub core_found: usize,
    pub chain_violations: usize,
    pub oracle_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub bounds: BoundReport,
    /// Largest error weight covered by the orientation guarantee, if it applies.
    pub orientation_threshold: Option<f64>,
    pub peeling_threshold: Option<f64>,
    pub per_weight: Vec<WeightSummary>,
    pub chain_violations: usize,
    pub oracle_violations: usize,
    /// Success rate never increases with weight. A soft check only.
    pub monotone_success: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub summary: SweepSummary,
}

/// Deterministic per-trial generator: one ChaCha stream per (weight, trial).
pub fn trial_rng(seed: u64, weight_index: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((weight_index as u64) << 32) | trial as u64);
    rng
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    if cfg.trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let code = cfg.build_code()?;
    if let Some(&w) = cfg.weights.iter().find(|&&w| w > code.length()) {
        return Err(Error::Domain(format!("weight {w} exceeds code length {}", code.length())));
    }
    code.graph().compute_spectrum(DENSE_TOL)?;
    let basis = code.basis();
    let oracle_words = if count_words(code.field().order(), basis.len()) <= DEFAULT_GLOBAL_CAP {
        Some(code.enumerate_codewords(DEFAULT_GLOBAL_CAP)?)
    } else {
        None
    };
    let opts = cfg.tolerances.decoder_options();
    let eps = cfg.tolerances.epsilon_ratio()?;
    let jobs: Vec<(usize, usize)> =
        (0..cfg.weights.len()).flat_map(|wi| (0..cfg.trials).map(move |t| (wi, t))).collect();
    let records = jobs
        .par_iter()
        .map(|&(wi, t)| -> Result<TrialRecord> {
            let start = Instant::now();
            let weight = cfg.weights[wi];
            let mut rng = trial_rng(cfg.seed, wi, t);
            let c = code.random_codeword(&basis, &mut rng);
            let y = code.add_random_error(&c, weight, &mut rng)?;
            let r = decode(&code, &y, &opts)?;
            let decoded_correct = r.codeword.as_ref() == Some(&c);
            let oracle_agreement = match (&oracle_words, &r.codeword) {
                (Some(words), Some(out)) => Some(out.distance(&y) <= nearest_in(words, &y)?.distance),
                _ => None,
            };
            let peel = certificate::certify_from(&code, &c, &y, CertifyMode::Peel, eps)?;
            let orient = certificate::certify_from(&code, &c, &y, CertifyMode::Orient, eps)?;
            Ok(TrialRecord {
                weight,
                trial: t,
                decode_status: r.status,
                decoded_correct,
                oracle_agreement,
                witness_peel: peel.witness_found,
                witness_orient: orient.witness_found,
                core_found: peel.core.is_some(),
                runtime_ms: cfg.record_runtime.then(|| start.elapsed().as_secs_f64() * 1e3),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bounds = code.bounds_report()?;
    let dn = code.length() as f64;
    let per_weight: Vec<WeightSummary> = cfg
        .weights
        .iter()
        .enumerate()
        .map(|(wi, &weight)| {
            let rs = &records[wi * cfg.trials..(wi + 1) * cfg.trials];
            let count = |f: &dyn Fn(&TrialRecord) -> bool| rs.iter().filter(|r| f(r)).count();
            let decoded_correct = count(&|r| r.decoded_correct);
            WeightSummary {
                weight,
                trials: rs.len(),
                decoded_correct,
                success_rate: decoded_correct as f64 / rs.len() as f64,
                witness_peel: count(&|r| r.witness_peel),
                witness_orient: count(&|r| r.witness_orient),
                core_found: count(&|r| r.core_found),
                chain_violations: count(&|r| r.chain_violation()),
                oracle_violations: count(&|r| r.oracle_agreement == Some(false)),
            }
        })
        .collect();
    let mut by_weight: Vec<&WeightSummary> = per_weight.iter().collect();
    by_weight.sort_by_key(|s| s.weight);
    let monotone_success = by_weight.windows(2).all(|p| p[1].success_rate <= p[0].success_rate);
    if !monotone_success {
        log::warn!("empirical success rate increases with weight somewhere in the sweep");
    }
    let summary = SweepSummary {
        orientation_threshold: bounds.orientation_fraction.value().map(|f| f * dn),
        peeling_threshold: bounds.peeling_fraction.value().map(|f| f * dn),
        chain_violations: per_weight.iter().map(|s| s.chain_violations).sum(),
        oracle_violations: per_weight.iter().map(|s| s.oracle_violations).sum(),
        bounds,
        per_weight,
        monotone_success,
    };
    Ok(SweepOutput { records, summary })
}

/// Writes records as CSV with a fixed column order.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub const TABLE_RATES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub rate: f64,
    pub fraction: f64,
}

pub fn table_rows(regime: TableRegime) -> Result<Vec<TableRow>> {
    TABLE_RATES
        .iter()
        .map(|&rate| Ok(TableRow { rate, fraction: table_fraction(rate, regime)? }))
        .collect()
}

/// `x` with four significant digits.
pub fn four_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let decimals = |magnitude: f64| (3 - magnitude.log10().floor() as i32).max(0) as usize;
    let d = decimals(x.abs());
    let s = format!("{x:.d$}");
    // rounding can carry into the next power of ten, e.g. 0.99999 -> 1.0000
    let rounded: f64 = s.parse().unwrap_or(x);
    let d2 = decimals(rounded.abs());
    if d2 < d {
        format!("{x:.d2$}")
    } else {
        s
    }
}

fn trimmed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

/// Both correctable-fraction tables as aligned text: binary local codes on the
/// Gilbert-Varshamov curve (scaled by 10⁴) and MDS local codes (scaled by 10²).
pub fn format_tables() -> Result<String> {
    let mut s = String::new();
    s.push_str("Binary local codes, fraction x 1e-4\n  R      fraction\n");
    for row in table_rows(TableRegime::BinaryEntropy)? {
        s.push_str(&format!("  {:.1}    {}\n", row.rate, four_significant(row.fraction * 1e4)));
    }
    s.push_str("\nReed-Solomon local codes, fraction x 1e-2\n  R      fraction\n");
    for row in table_rows(TableRegime::Grs)? {
        s.push_str(&format!("  {:.1}    {}\n", row.rate, trimmed(row.fraction * 1e2, 4)));
    }
    Ok(s)
}

pub fn print_tables() -> Result<()> {
    print!("{}", format_tables()?);
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Loads a graph file and two local-code files into an expander code.
pub fn load_code(graph: &Path, code_a: &Path, code_b: &Path) -> Result<ExpanderCode> {
    let g = TannerGraph::from_text(&read(graph)?)?;
    let a = LocalCode::from_text(&read(code_a)?)?;
    let b = LocalCode::from_text(&read(code_b)?)?;
    ExpanderCode::new(g, a, b)
}

pub fn load_word(path: &Path, code: &ExpanderCode) -> Result<Word> {
    let w = Word::from_text(&read(path)?, code.field())?;
    code.check_word(&w)?;
    Ok(w)
}

/// Reads a whitespace- or comma-separated list of edge indices.
pub fn load_edges(path: &Path) -> Result<Vec<usize>> {
    read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::to_owned).collect::<Vec<_>>())
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("edge index {t:?}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(weights: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            q: 2,
            graph: GraphSource::Complete { n: 6 },
            code_a: CodeSpec::Repetition,
            code_b: CodeSpec::SingleParityCheck,
            weights,
            trials: 5,
            seed: 9,
            tolerances: Tolerances::default(),
            record_runtime: false,
            output: None,
        }
    }

    #[test]
    fn weight_zero_always_succeeds() {
        let out = run_sweep(&config(vec![0])).unwrap();
        assert!(out.records.iter().all(|r| r.decoded_correct && r.witness_peel));
        assert_eq!(out.summary.per_weight[0].success_rate, 1.0);
    }

    #[test]
    fn csv_is_reproducible() {
        let cfg = config(vec![0, 2, 5]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&run_sweep(&cfg).unwrap().records, &mut a).unwrap();
        write_csv(&run_sweep(&cfg).unwrap().records, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("weight,trial,decode_status,decoded_correct,oracle_agreement,"));
        assert_eq!(text.lines().count(), 16);
    }

    #[test]
    fn threshold_matches_bound_report() {
        let mut cfg = config(vec![1]);
        cfg.code_b = CodeSpec::Repetition;
        let out = run_sweep(&cfg).unwrap();
        let f = out.summary.bounds.orientation_fraction.value().unwrap();
        assert_eq!(out.summary.orientation_threshold, Some(f * 36.0));
        assert_eq!(out.summary.chain_violations, 0);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_sweep(&config(vec![37])).is_err());
        let mut cfg = config(vec![1]);
        cfg.trials = 0;
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = config(vec![1, 2]);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
        let minimal = r#"{"q":3,"graph":{"kind":"random","n":10,"delta":4,"seed":1},
            "code_a":{"kind":"repetition"},"code_b":{"kind":"reed_solomon","dimension":2},
            "weights":[0,1],"trials":2,"seed":5}"#;
        let cfg = ExperimentConfig::from_json(minimal).unwrap();
        assert_eq!(cfg.tolerances, Tolerances::default());
    }

    #[test]
    fn table_formatting() {
        let t = format_tables().unwrap();
        for s in ["22.14", "15.75", "10.82", "7.086", "4.346", "2.422", "1.160", "0.4216", "0.07860"] {
            assert!(t.contains(s), "missing {s}");
        }
        for s in ["5.0625", "  4\n", "3.0625", "2.25", "1.5625", "  1\n", "0.5625", "0.25", "0.0625"] {
            assert!(t.contains(s), "missing {s:?}");
        }
        assert_eq!(four_significant(0.99999999), "1.000");
        assert_eq!(four_significant(9.99996), "10.00");
        assert_eq!(four_significant(0.0786), "0.07860");
        assert_eq!(four_significant(1234.4), "1234");
    }
}
