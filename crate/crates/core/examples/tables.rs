//! Correctable-fraction tables against global code rate.
//!
//! cargo run --example tables

fn main() -> expander_lp::Result<()> {
    expander_lp::harness::print_tables()
}
