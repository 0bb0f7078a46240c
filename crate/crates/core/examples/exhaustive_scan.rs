//! Decode every received word of a tiny code and compare with brute force.
//!
//! cargo run --example exhaustive_scan

use expander_lp::expander_code::ExpanderCode;
use expander_lp::gf::Field;
use expander_lp::linear_code::LocalCode;
use expander_lp::lp_decoder::{DecodeStatus, DecoderOptions};
use expander_lp::ml_oracle::exhaustive_agreement_scan;
use expander_lp::tanner_graph::TannerGraph;

fn main() -> expander_lp::Result<()> {
    let f = Field::new(3)?;
    let spc = LocalCode::single_parity_check(f, 3)?;
    let code = ExpanderCode::new(TannerGraph::complete_bipartite(3)?, spc.clone(), spc)?;
    let report = exhaustive_agreement_scan(&code, 1 << 16, &DecoderOptions::default())?;
    println!(
        "{} words, {} codewords: {} decoded to a nearest codeword, {} fractional, {} ties, {} violations",
        report.words_scanned, report.codewords, report.integral_optimal, report.fractional, report.ties, report.violations
    );
    if let Some(row) = report.rows.iter().find(|r| r.decode_status == DecodeStatus::FractionalFailure) {
        println!("first fractional optimum at y = {} (nearest codeword at distance {})", row.received, row.ml_distance);
    }
    Ok(())
}
