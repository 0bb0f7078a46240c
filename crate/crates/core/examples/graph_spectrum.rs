//! Random regular bipartite graphs, their second eigenvalue and the
//! induced-edge bounds that follow from it.
//!
//! cargo run --example graph_spectrum -- [n] [delta] [seed]

use expander_lp::tanner_graph::{TannerGraph, DENSE_TOL, POWER_ITERATION_BUDGET, POWER_TOL};

fn main() -> expander_lp::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(30);
    let delta = args.get(1).copied().unwrap_or(6);
    let seed = args.get(2).copied().unwrap_or(1) as u64;

    let g = TannerGraph::random_regular_bipartite(n, delta, seed)?;
    let dense = g.spectrum_dense(DENSE_TOL)?;
    let power = g.spectrum_power_iteration(POWER_TOL, POWER_ITERATION_BUDGET)?;
    println!("n = {n}, delta = {delta}, |E| = {}", g.num_edges());
    println!("lambda1 = {:.6}, lambda2 = {:.6} (dense)", dense.lambda1, dense.lambda2);
    println!("gamma   = {:.6} dense, {:.6} power iteration", dense.gamma, power.gamma);
    let ramanujan = 2.0 * ((delta - 1) as f64).sqrt() / delta as f64;
    println!("Ramanujan level 2 sqrt(delta - 1)/delta = {ramanujan:.6}");

    g.compute_spectrum(DENSE_TOL)?;
    println!("\nalpha  beta   twice-induced bound (tight, loose)");
    for (alpha, beta) in [(0.1, 0.1), (0.25, 0.5), (0.5, 0.5), (1.0, 0.3)] {
        let b = g.induced_edge_count_bound(alpha, beta)?;
        println!("{alpha:<6} {beta:<6} {:.2}, {:.2}", b.tight, b.loose);
    }
    let closed = [
        ("K_{5,5}", TannerGraph::complete_bipartite(5)?),
        ("K_{6,6} minus a matching", TannerGraph::complete_minus_matching(6)?),
        ("8-cycle", TannerGraph::cycle(4)?),
    ];
    for (name, g) in &closed {
        println!("gamma({name}) = {:.6}", g.spectrum_dense(DENSE_TOL)?.gamma);
    }
    Ok(())
}
