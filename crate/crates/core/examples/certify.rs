//! Dual witnesses from peeling and from orientations, and the exact check of
//! the open dual polytope.
//!
//! cargo run --example certify

use expander_lp::certificate::{self, check_polytope, epsilon_start, CertifyMode, Q};
use expander_lp::expander_code::{ExpanderCode, Word};
use expander_lp::gf::Field;
use expander_lp::linear_code::LocalCode;
use expander_lp::lp_decoder::{decode, DecoderOptions};
use expander_lp::tanner_graph::TannerGraph;

fn main() -> expander_lp::Result<()> {
    let f = Field::new(3)?;
    let rep = LocalCode::repetition(f, 6)?;
    let code = ExpanderCode::new(TannerGraph::complete_bipartite(6)?, rep.clone(), rep)?;
    let c = Word(vec![2; 36]);
    for errors in [vec![0, 7, 14, 21], vec![0, 1, 2, 6, 7, 8, 12, 13, 14]] {
        let mut y = c.clone();
        for &e in &errors {
            y.0[e] = 0;
        }
        println!("error edges {errors:?}");
        for mode in [CertifyMode::Peel, CertifyMode::Orient] {
            let cert = certificate::certify(&code, &c, &y, mode)?;
            match cert.epsilon {
                Some(eps) => println!("  {mode:?}: witness at epsilon {eps:e}"),
                None => println!("  {mode:?}: none ({})", cert.reason.unwrap_or_default()),
            }
        }
        let r = decode(&code, &y, &DecoderOptions::default())?;
        println!("  decoder returns the sent word: {}", r.codeword.as_ref() == Some(&c));
    }

    // a hand-built witness with the wrong slack fails the exact check
    let mut y = c.clone();
    y.0[0] = 1;
    let trace = certificate::peel(&code, &c, &y)?;
    let mut w = certificate::build_witness_from_peeling(&code, &c, &y, &trace, epsilon_start())?;
    println!("\npeeling witness passes: {}", check_polytope(&code, &c, &y, &w)?.is_none());
    w.tau.iter_mut().for_each(|t| *t = Q::from_integer(0));
    if let Some(v) = check_polytope(&code, &c, &y, &w)? {
        println!("all-zero assignment fails: {v}");
    }
    Ok(())
}
