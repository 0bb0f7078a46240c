//! LP decoding of an expander code over GF(4) on a random 3-regular graph.
//!
//! cargo run --example lp_decode -- [errors] [seed]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use expander_lp::expander_code::ExpanderCode;
use expander_lp::gf::Field;
use expander_lp::linear_code::LocalCode;
use expander_lp::lp_decoder::{build_primal, decode, DecoderOptions};
use expander_lp::ml_oracle::ml_decode;
use expander_lp::tanner_graph::TannerGraph;

fn main() -> expander_lp::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let errors = args.first().copied().unwrap_or(1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(args.get(1).copied().unwrap_or(3));

    let f = Field::new(4)?;
    let rs = LocalCode::generalized_reed_solomon(f, 3, 2, None, None)?;
    let g = TannerGraph::random_regular_bipartite(8, 3, 5)?;
    let code = ExpanderCode::new(g, rs.clone(), rs)?;
    let basis = code.basis();
    println!("length {}, dimension {}", code.length(), code.dimension());

    let c = code.random_codeword(&basis, &mut rng);
    let y = code.add_random_error(&c, errors, &mut rng)?;
    let (lp, _) = build_primal(&code, &y)?;
    println!("primal LP: {} variables, {} equality rows", lp.num_vars, lp.rows.len());
    println!("sent     {c}\nreceived {y}");

    let r = decode(&code, &y, &DecoderOptions::default())?;
    println!("status {:?}, objective {:.6}", r.status, r.objective);
    if let Some(out) = &r.codeword {
        println!("decoded  {out}\ncorrect: {}, distance to y: {}", out == &c, out.distance(&y));
    }
    let ml = ml_decode(&code, &y)?;
    println!("nearest codeword at distance {} (tie: {})", ml.distance, ml.tie);
    Ok(())
}
