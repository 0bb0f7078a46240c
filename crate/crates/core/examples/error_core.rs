//! Peeling error edges and extracting the error core when peeling stalls.
//!
//! cargo run --example error_core

use expander_lp::certificate::{find_error_core, peel, Q};
use expander_lp::expander_code::{ExpanderCode, Word};
use expander_lp::gf::Field;
use expander_lp::linear_code::LocalCode;
use expander_lp::tanner_graph::{Side, TannerGraph};

fn main() -> expander_lp::Result<()> {
    let f = Field::new(2)?;
    let rep = LocalCode::repetition(f, 8)?;
    let code = ExpanderCode::new(TannerGraph::complete_bipartite(8)?, rep.clone(), rep)?;
    let g = code.graph();
    let c = Word::zeros(code.length());
    let zeta = |s| code.relative_distance(s) / Q::from_integer(4);

    // a scattered pattern peels away, a dense block does not
    let scattered: Vec<usize> = (0..8).map(|i| i * 9).collect();
    let block: Vec<usize> = (0..3).flat_map(|a| (0..3).map(move |b| a * 8 + b)).collect();
    for (name, errors) in [("diagonal", scattered), ("3x3 block", block)] {
        let mut y = c.clone();
        for &e in &errors {
            y.0[e] = 1;
        }
        let trace = peel(&code, &c, &y)?;
        let sizes: Vec<usize> = trace.edge_sets.iter().map(Vec::len).collect();
        println!("{name}: |E_i| = {sizes:?}, emptied: {}", trace.terminated_empty);
        if let Some(core) = find_error_core(g, &trace, zeta(Side::A), zeta(Side::B))? {
            println!(
                "  core: {} edges on A {:?}, B {:?} (thresholds {}, {})",
                core.edges.len(),
                core.vertices_a,
                core.vertices_b,
                core.zeta_a,
                core.zeta_b
            );
        }
    }
    Ok(())
}
