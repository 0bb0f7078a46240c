//! Finite-field arithmetic and the local codes placed at each vertex.
//!
//! cargo run --example field_and_local_codes

use expander_lp::gf::Field;
use expander_lp::linear_code::{LocalCode, DEFAULT_ENUMERATION_CAP};

fn main() -> expander_lp::Result<()> {
    let gf4 = Field::new(4)?;
    println!("GF(4) reduction polynomial {:?}", gf4.spec().reduction_poly);
    println!("GF(4) multiplication table:");
    for a in gf4.elements() {
        let row: Vec<String> = gf4.elements().map(|b| gf4.mul(a, b).to_string()).collect();
        println!("  {}", row.join(" "));
    }
    let x = gf4.element(2)?;
    println!("2 * 3 = {}, 2^-1 = {}", x.mul(&gf4.element(3)?)?.index(), x.inv()?.index());

    let gf7 = Field::new(7)?;
    let codes = [
        ("repetition [6,1]", LocalCode::repetition(gf7.clone(), 6)?),
        ("single parity check [6,5]", LocalCode::single_parity_check(gf7.clone(), 6)?),
        ("Reed-Solomon [6,3]", LocalCode::generalized_reed_solomon(gf7.clone(), 6, 3, None, None)?),
    ];
    for (name, code) in &codes {
        let d = code.min_distance(DEFAULT_ENUMERATION_CAP)?;
        println!(
            "{name:<28} k = {}  d = {}  rate = {}  relative distance = {}",
            code.dimension(),
            d.d,
            code.relative_rate(),
            d.relative
        );
    }
    let rs = &codes[2].1;
    let word = rs.encode(&[1, 2, 3]);
    println!("RS encodes 1 2 3 as {word:?}; member: {}", rs.contains(&word)?);
    Ok(())
}
