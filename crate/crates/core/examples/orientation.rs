//! Orienting an edge set under per-side indegree caps.
//!
//! cargo run --example orientation

use expander_lp::orientation::{exists_orientation_exhaustive, orient, verify_orientation, OrientOutcome};
use expander_lp::tanner_graph::TannerGraph;

fn main() -> expander_lp::Result<()> {
    let g = TannerGraph::complete_bipartite(4)?;
    // a 4-cycle through A0, B0, A1, B1 plus a pendant edge
    let edges = vec![0, 1, 4, 5, 10];
    for (cap_a, cap_b) in [(1, 1), (1, 0), (0, 0)] {
        let brute = exists_orientation_exhaustive(&g, &edges, cap_a, cap_b)?;
        match orient(&g, &edges, cap_a, cap_b)? {
            OrientOutcome::Oriented(o) => {
                let arcs: Vec<String> = (0..o.edges.len())
                    .map(|i| {
                        let (t, h) = o.arc(&g, i);
                        format!("{t}->{h}")
                    })
                    .collect();
                println!("caps ({cap_a}, {cap_b}): {} valid: {}", arcs.join(" "), verify_orientation(&g, &o));
            }
            OrientOutcome::Failed(f) => println!(
                "caps ({cap_a}, {cap_b}): impossible, {} excess, blocking set {:?}",
                f.residual_violations, f.blocking_set
            ),
        }
        println!("  exhaustive search finds an orientation: {brute}");
    }
    Ok(())
}
