//! Monte Carlo sweep from a JSON config; CSV to stdout, summary to stderr.
//!
//! cargo run --release --example sweep -- [config.json]

use std::io::Write;

use expander_lp::harness::{run_sweep, write_csv, ExperimentConfig};

fn main() -> expander_lp::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/sweep.json").to_string());
    let cfg = ExperimentConfig::from_json(&std::fs::read_to_string(&path)?)?;
    let out = run_sweep(&cfg)?;
    write_csv(&out.records, std::io::stdout().lock())?;
    let mut err = std::io::stderr().lock();
    for w in &out.summary.per_weight {
        writeln!(
            err,
            "weight {:>3}: success {:>5.1}%  peel {:>3}  orient {:>3}  cores {:>3}",
            w.weight,
            100.0 * w.success_rate,
            w.witness_peel,
            w.witness_orient,
            w.core_found
        )?;
    }
    writeln!(err, "witness/decoder disagreements: {}", out.summary.chain_violations)?;
    Ok(())
}
