//! Analytic distance and correctable-fraction bounds for a few instances.
//!
//! cargo run --example bounds

use expander_lp::expander_code::{ExpanderCode, Outcome};
use expander_lp::gf::Field;
use expander_lp::linear_code::LocalCode;
use expander_lp::tanner_graph::{TannerGraph, DENSE_TOL};

fn show<T: std::fmt::Display + Clone>(o: &Outcome<T>) -> String {
    match o {
        Outcome::Value(v) => v.to_string(),
        Outcome::Unavailable(why) => format!("n/a ({why})"),
    }
}

fn main() -> expander_lp::Result<()> {
    let f = Field::new(16)?;
    let instances = [
        ("K_{16,16}, RS[16,4] both sides", TannerGraph::complete_bipartite(16)?, 4),
        ("K_{16,16} minus matching, RS[15,3]", TannerGraph::complete_minus_matching(16)?, 3),
        ("random n = 40, delta = 15, RS[15,2]", TannerGraph::random_regular_bipartite(40, 15, 2)?, 2),
    ];
    for (name, g, k) in instances {
        let local = LocalCode::generalized_reed_solomon(f.clone(), g.delta(), k, None, None)?;
        let code = ExpanderCode::new(g, local.clone(), local)?;
        code.graph().compute_spectrum(DENSE_TOL)?;
        let b = code.bounds_report()?;
        println!("{name}: gamma {:.4}, |E| {}", b.gamma, b.num_edges);
        println!("  relative distance >= {}", show(&b.distance_lower_bound));
        println!("  errors guaranteed by peeling: {}", show(&b.peeling_max_errors));
        println!("  theta = ({}, {})", show(&b.theta_a), show(&b.theta_b));
        println!("  errors guaranteed by orientation: {}", show(&b.orientation_max_errors));
    }
    Ok(())
}
